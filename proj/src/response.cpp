#include "toda/response.hpp"

#include <string>

#include "kernels/compensated.hpp"
#include "toda/error.hpp"
#include "toda/kernels.hpp"

namespace toda {

namespace {

void require_length(std::size_t k, const char* where) {
  if (k == 0 || k > kMaxResponseLength) {
    throw InvalidArgument(std::string(where) + ": length must be in [1, 30] (got " +
                          std::to_string(k) + ")");
  }
}

std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t result = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) is divisible by i at every step.
    std::int64_t product = 0;
    if (__builtin_mul_overflow(result, n - k + i, &product)) {
      throw OverflowError("lambda_matrix: binomial coefficient overflows int64");
    }
    result = product / i;
  }
  return result;
}

} // namespace

double chebyshev_u(std::size_t k, double lambda) {
  if (k == 0) return 0.0;
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t i = 1; i < k; ++i) {
    const double next = lambda * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

DenseMatrix<std::int64_t> lambda_matrix(std::size_t k) {
  require_length(k, "lambda_matrix");
  DenseMatrix<std::int64_t> m(k, k, 0);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      if ((i + j) % 2 != 0) continue;
      const auto half = static_cast<std::int64_t>((i + j) / 2);
      const std::int64_t sign = ((half + static_cast<std::int64_t>(j)) % 2 == 0) ? 1 : -1;
      m(i, j) = sign * binomial(half, static_cast<std::int64_t>(j));
    }
  }
  return m;
}

ResponseVector response_from_moments(const MomentSequence& s) {
  require_length(s.size(), "response_from_moments");
  const auto lambda = lambda_matrix(s.size());
  ResponseVector r{std::vector<double>(s.size())};
  for (std::size_t i = 0; i < s.size(); ++i) {
    kernels::CompensatedSum acc;
    for (std::size_t j = 0; j <= i; ++j) {
      if (lambda(i, j) != 0) acc.add(static_cast<double>(lambda(i, j)) * s[j]);
    }
    r.values[i] = acc.value();
  }
  return r;
}

ResponseVector response_from_measure(const DiscreteMeasure& mu, std::size_t count) {
  require_length(count, "response_from_measure");
  ResponseVector r{std::vector<double>(count)};
  kernels::chebyshev_sums(mu.nodes(), mu.weights(), r.values);
  return r;
}

} // namespace toda
