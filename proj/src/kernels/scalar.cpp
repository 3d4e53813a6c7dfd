#include "toda/kernels.hpp"

#include <cmath>
#include <vector>

#include "kernels/compensated.hpp"

namespace toda::kernels::scalar {

void power_sums(std::span<const double> nodes, std::span<const double> weights,
                std::span<double> out) {
  std::vector<CompensatedSum> acc(out.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    double term = weights[j];
    for (auto& a : acc) {
      a.add(term);
      term *= nodes[j];
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = acc[k].value();
}

double scaled_exp_weights(std::span<const double> nodes, std::span<const double> weights,
                          double rate, double shift, std::span<double> out) {
  CompensatedSum total;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double x = rate * (nodes[j] - shift);
    out[j] = x < kMinExpArgument ? 0.0 : weights[j] * std::exp(x);
    total.add(out[j]);
  }
  return total.value();
}

void chebyshev_sums(std::span<const double> nodes, std::span<const double> weights,
                    std::span<double> out) {
  std::vector<CompensatedSum> acc(out.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double lambda = nodes[j];
    double prev = 0.0;
    double cur = 1.0;
    for (auto& a : acc) {
      a.add(cur * weights[j]);
      const double next = lambda * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = acc[k].value();
}

double stieltjes_sum(std::span<const double> nodes, std::span<const double> weights, double z) {
  CompensatedSum total;
  for (std::size_t j = 0; j < nodes.size(); ++j) total.add(weights[j] / (z - nodes[j]));
  return total.value();
}

} // namespace toda::kernels::scalar
