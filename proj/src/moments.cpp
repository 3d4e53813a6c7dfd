#include "toda/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kernels/compensated.hpp"
#include "toda/error.hpp"
#include "toda/kernels.hpp"

namespace toda {

namespace {

constexpr double kZeroPivot = 1e-10;
constexpr double kDegenerateNorm = 1e-12;
constexpr double kIllConditioned = 1e12;

} // namespace

double Polynomial::operator()(double lambda) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * lambda + *it;
  return acc;
}

MomentSequence moments_from_measure(const DiscreteMeasure& mu, std::size_t count, double time) {
  if (count == 0) throw InvalidArgument("moments_from_measure: count must be >= 1");
  MomentSequence s{std::vector<double>(count), time};
  kernels::power_sums(mu.nodes(), mu.weights(), s.values);
  for (std::size_t k = 0; k < count; ++k) {
    if (!std::isfinite(s.values[k])) {
      throw OverflowError("moments_from_measure: moment s_" + std::to_string(k) +
                          " overflows double precision");
    }
  }
  return s;
}

DenseMatrix<double> hankel_matrix(const MomentSequence& s, std::size_t order) {
  if (order == 0) throw InvalidArgument("hankel_matrix: order must be >= 1");
  if (s.size() < 2 * order - 1) {
    throw InvalidArgument("hankel_matrix: order " + std::to_string(order) + " needs " +
                          std::to_string(2 * order - 1) + " moments, got " +
                          std::to_string(s.size()));
  }
  DenseMatrix<double> h(order, order);
  for (std::size_t i = 0; i < order; ++i) {
    for (std::size_t j = 0; j < order; ++j) h(i, j) = s[i + j];
  }
  return h;
}

MomentClassification check_moment_positivity(const MomentSequence& s) {
  using Kind = MomentClassification::Kind;
  if (s.size() == 0) throw InvalidArgument("check_moment_positivity: empty moment sequence");
  const std::size_t order = (s.size() + 1) / 2;
  const DenseMatrix<double> h = hankel_matrix(s, order);

  double norm = 0.0;
  for (std::size_t k = 0; k < 2 * order - 1; ++k) norm = std::max(norm, std::abs(s[k]));
  const double threshold = kZeroPivot * norm;

  // Upper Cholesky factor, filled one row at a time across the full width.
  DenseMatrix<double> r(order, order);
  const auto reduced = [&](std::size_t rank, std::size_t p, std::size_t q) {
    kernels::CompensatedSum acc;
    acc.add(h(p, q));
    for (std::size_t k = 0; k < rank; ++k) acc.add(-r(k, p) * r(k, q));
    return acc.value();
  };

  for (std::size_t i = 0; i < order; ++i) {
    const double pivot = reduced(i, i, i);
    if (pivot < -threshold) return {Kind::invalid, i + 1};
    if (pivot <= threshold) {
      // A positive measure with det S_{N0+1} = 0 is an N0-point measure, so
      // every larger Hankel matrix must have rank N0 as well.
      for (std::size_t t = i + 1; t <= order; ++t) {
        for (std::size_t p = i; p < t; ++p) {
          if (std::abs(reduced(i, p, t - 1)) > threshold) return {Kind::invalid, t};
        }
      }
      return {Kind::finite_support, i};
    }
    const double diag = std::sqrt(pivot);
    r(i, i) = diag;
    for (std::size_t j = i + 1; j < order; ++j) r(i, j) = reduced(i, i, j) / diag;
  }
  return {Kind::positive_definite, order};
}

JacobiMatrix jacobi_from_measure(const DiscreteMeasure& mu, std::size_t n) {
  const std::size_t m = mu.size();
  if (n == 0) throw InvalidArgument("jacobi_from_measure: size must be >= 1");
  if (m < n) {
    throw DegenerateMeasureError("jacobi_from_measure: measure has " + std::to_string(m) +
                                 " points, cannot support a " + std::to_string(n) + "x" +
                                 std::to_string(n) + " Jacobi matrix");
  }

  // alpha[k] converges to b_{k+1}, beta[k] to a_k^2 (beta[0] is the mass).
  std::vector<double> alpha(mu.nodes().begin(), mu.nodes().end());
  std::vector<double> beta(m, 0.0);
  beta[0] = mu.weights()[0];
  for (std::size_t node = 1; node < m; ++node) {
    double carried = mu.weights()[node];
    double gam = 1.0;
    double sig = 0.0;
    double t = 0.0;
    const double lambda = mu.nodes()[node];
    for (std::size_t k = 0; k <= node; ++k) {
      const double rho = beta[k] + carried;
      const double updated = gam * rho;
      const double prev_sig = sig;
      if (rho <= 0.0) {
        gam = 1.0;
        sig = 0.0;
      } else {
        gam = beta[k] / rho;
        sig = carried / rho;
      }
      const double tk = sig * (alpha[k] - lambda) - gam * t;
      alpha[k] -= tk - t;
      t = tk;
      carried = sig <= 0.0 ? prev_sig * beta[k] : (t * t) / sig;
      beta[k] = updated;
    }
  }

  double scale = 1.0;
  for (double x : mu.nodes()) scale = std::max(scale, std::abs(x));
  std::vector<double> diag(alpha.begin(), alpha.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> offdiag(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = std::sqrt(std::max(beta[k + 1], 0.0));
    if (!(a > kDegenerateNorm * scale)) {
      throw DegenerateMeasureError("jacobi_from_measure: off-diagonal a_" + std::to_string(k + 1) +
                                   " collapsed; the measure is supported on fewer than " +
                                   std::to_string(n) + " numerically distinct points");
    }
    offdiag[k] = a;
  }
  return JacobiMatrix(std::move(diag), std::move(offdiag));
}

JacobiMatrix jacobi_from_moments(const MomentSequence& s, std::size_t n,
                                 HankelDiagnostics* diagnostics) {
  if (n == 0) throw InvalidArgument("jacobi_from_moments: size must be >= 1");
  if (s.size() < 2 * n) {
    throw InvalidArgument("jacobi_from_moments: an " + std::to_string(n) + "x" +
                          std::to_string(n) + " matrix needs " + std::to_string(2 * n) +
                          " moments, got " + std::to_string(s.size()));
  }
  // Rows 0..n-1 of the upper Cholesky factor of S_{n+1}; row n is never
  // needed, so s_{2n} is not either.
  DenseMatrix<double> r(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    kernels::CompensatedSum pivot;
    pivot.add(s[2 * i]);
    for (std::size_t k = 0; k < i; ++k) pivot.add(-r(k, i) * r(k, i));
    if (!(pivot.value() > 0.0)) {
      throw PositivityError("jacobi_from_moments: Hankel matrix S_" + std::to_string(i + 1) +
                            " is not positive definite");
    }
    r(i, i) = std::sqrt(pivot.value());
    for (std::size_t j = i + 1; j <= n; ++j) {
      kernels::CompensatedSum acc;
      acc.add(s[i + j]);
      for (std::size_t k = 0; k < i; ++k) acc.add(-r(k, i) * r(k, j));
      r(i, j) = acc.value() / r(i, i);
    }
  }

  std::vector<double> diag(n);
  std::vector<double> offdiag(n - 1);
  double rmax = 0.0;
  double rmin = r(0, 0);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = r(i, i + 1) / r(i, i) - (i > 0 ? r(i - 1, i) / r(i - 1, i - 1) : 0.0);
    if (i + 1 < n) offdiag[i] = r(i + 1, i + 1) / r(i, i);
    rmax = std::max(rmax, r(i, i));
    rmin = std::min(rmin, r(i, i));
  }
  if (diagnostics != nullptr) {
    diagnostics->condition_estimate = (rmax / rmin) * (rmax / rmin);
    diagnostics->ill_conditioned = diagnostics->condition_estimate > kIllConditioned;
  }
  return JacobiMatrix(std::move(diag), std::move(offdiag));
}

double moment_bilinear_form(const MomentSequence& s, const Polynomial& f, const Polynomial& g) {
  const std::size_t order = std::max({f.coeffs.size(), g.coeffs.size(), std::size_t{1}});
  if (s.size() < 2 * order - 1) {
    throw InvalidArgument("moment_bilinear_form: polynomials of degree < " +
                          std::to_string(order) + " need " + std::to_string(2 * order - 1) +
                          " moments, got " + std::to_string(s.size()));
  }
  kernels::CompensatedSum acc;
  for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < g.coeffs.size(); ++j) acc.add(s[i + j] * f.coeffs[i] * g.coeffs[j]);
  }
  return acc.value();
}

} // namespace toda
