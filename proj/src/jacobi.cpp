#include "toda/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "kernels/compensated.hpp"
#include "toda/error.hpp"
#include "toda/kernels.hpp"

namespace toda {

namespace {

constexpr int kMaxQlSweeps = 30;
constexpr double kCoincidentEigenvalues = 1e-12;
constexpr double kPoleDistance = 1e-10;

std::string describe(const char* field, std::size_t index, const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << field << "[" << index << "] " << what << " (got " << value << ")";
  return os.str();
}

} // namespace

JacobiMatrix::JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.empty()) throw InvalidArgument("jacobi: diag must have at least one entry");
  if (offdiag_.size() + 1 != diag_.size()) {
    throw InvalidArgument("jacobi: offdiag must have exactly diag.size() - 1 entries");
  }
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    if (!std::isfinite(diag_[i])) throw InvalidArgument(describe("diag", i, "must be finite", diag_[i]));
  }
  for (std::size_t i = 0; i < offdiag_.size(); ++i) {
    if (!(offdiag_[i] > 0.0) || !std::isfinite(offdiag_[i])) {
      throw InvalidArgument(describe("offdiag", i, "must be strictly positive", offdiag_[i]));
    }
  }
}

JacobiMatrix JacobiMatrix::leading_block(std::size_t n) const {
  if (n == 0 || n > size()) throw InvalidArgument("jacobi: leading block size out of range");
  return JacobiMatrix({diag_.begin(), diag_.begin() + static_cast<std::ptrdiff_t>(n)},
                      {offdiag_.begin(), offdiag_.begin() + static_cast<std::ptrdiff_t>(n - 1)});
}

DiscreteMeasure::DiscreteMeasure(std::vector<double> nodes, std::vector<double> weights)
    : nodes_(std::move(nodes)), weights_(std::move(weights)) {
  if (nodes_.empty()) throw InvalidArgument("measure: at least one node is required");
  if (nodes_.size() != weights_.size()) {
    throw InvalidArgument("measure: nodes and weights must have the same length");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i])) throw InvalidArgument(describe("nodes", i, "must be finite", nodes_[i]));
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw InvalidArgument(describe("nodes", i, "must be strictly increasing", nodes_[i]));
    }
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw InvalidArgument(describe("weights", i, "must be finite and > 0", weights_[i]));
    }
  }
}

double DiscreteMeasure::mass() const {
  kernels::CompensatedSum total;
  for (double w : weights_) total.add(w);
  return total.value();
}

DiscreteMeasure eigendecompose(const JacobiMatrix& j) {
  const int n = static_cast<int>(j.size());
  std::vector<double> d(j.diag().begin(), j.diag().end());
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  std::copy(j.offdiag().begin(), j.offdiag().end(), e.begin());
  // First row of the accumulated rotation product.
  std::vector<double> z(static_cast<std::size_t>(n), 0.0);
  z[0] = 1.0;

  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int sweeps = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == kMaxQlSweeps) {
        throw ConvergenceError("eigendecompose: QL iteration did not converge in 30 sweeps");
      }
      // Wilkinson shift from the leading 2x2 of the unreduced block.
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        const double zf = z[i + 1];
        z[i + 1] = s * z[i] + c * zf;
        z[i] = c * z[i] - s * zf;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }

  std::vector<std::size_t> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  std::vector<double> nodes(order.size());
  std::vector<double> weights(order.size());
  kernels::CompensatedSum total;
  for (std::size_t k = 0; k < order.size(); ++k) {
    nodes[k] = d[order[k]];
    weights[k] = std::max(z[order[k]] * z[order[k]], std::numeric_limits<double>::min());
    total.add(weights[k]);
  }
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const double scale = std::max(1.0, std::max(std::abs(nodes[k]), std::abs(nodes[k - 1])));
    if (nodes[k] - nodes[k - 1] <= kCoincidentEigenvalues * scale) {
      throw ConvergenceError("eigendecompose: numerically coincident eigenvalues near " +
                             std::to_string(nodes[k]) + "; a Jacobi matrix has simple spectrum");
    }
  }
  const double mass = total.value();
  for (double& w : weights) w /= mass;
  return DiscreteMeasure(std::move(nodes), std::move(weights));
}

double weyl_function(const JacobiMatrix& j, double lambda) {
  const DiscreteMeasure mu = eigendecompose(j);
  for (double node : mu.nodes()) {
    if (std::abs(lambda - node) < kPoleDistance) {
      throw PoleProximityError("weyl_function: lambda is within 1e-10 of eigenvalue " +
                               std::to_string(node));
    }
  }
  return kernels::stieltjes_sum(mu.nodes(), mu.weights(), lambda);
}

double resolvent_weyl_function(const JacobiMatrix& j, double lambda) {
  // Tridiagonal Gaussian elimination with partial pivoting (LAPACK gtsv),
  // right-hand side e_1.
  const std::size_t n = j.size();
  std::vector<double> d(n);
  std::vector<double> sub(j.offdiag().begin(), j.offdiag().end());
  std::vector<double> sup(j.offdiag().begin(), j.offdiag().end());
  std::vector<double> sup2(n > 1 ? n - 1 : 0, 0.0);
  std::vector<double> rhs(n, 0.0);
  rhs[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) d[i] = j.diag()[i] - lambda;

  const auto singular = [] {
    return PoleProximityError("resolvent_weyl_function: J - lambda I is singular");
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(d[i]) >= std::abs(sub[i])) {
      if (d[i] == 0.0) throw singular();
      const double fact = sub[i] / d[i];
      d[i + 1] -= fact * sup[i];
      rhs[i + 1] -= fact * rhs[i];
    } else {
      const double fact = d[i] / sub[i];
      d[i] = sub[i];
      const double tmp = d[i + 1];
      d[i + 1] = sup[i] - fact * tmp;
      if (i + 2 < n) {
        sup2[i] = sup[i + 1];
        sup[i + 1] = -fact * sup2[i];
      }
      sup[i] = tmp;
      const double b = rhs[i];
      rhs[i] = rhs[i + 1];
      rhs[i + 1] = b - fact * rhs[i + 1];
    }
  }
  if (d[n - 1] == 0.0) throw singular();
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / d[n - 1];
  if (n > 1) x[n - 2] = (rhs[n - 2] - sup[n - 2] * x[n - 1]) / d[n - 2];
  for (std::size_t i = n >= 3 ? n - 3 : 0; n >= 3; --i) {
    x[i] = (rhs[i] - sup[i] * x[i + 1] - sup2[i] * x[i + 2]) / d[i];
    if (i == 0) break;
  }
  return x[0];
}

double b1_from_measure(const DiscreteMeasure& mu) {
  double sums[2];
  kernels::power_sums(mu.nodes(), mu.weights(), sums);
  return sums[1];
}

} // namespace toda
