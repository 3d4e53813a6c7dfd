#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "toda/jacobi.hpp"

namespace toda::test {

inline Eigen::MatrixXd dense(const JacobiMatrix& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = j.diag()[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = m(i + 1, i) = j.offdiag()[static_cast<std::size_t>(i)];
  }
  return m;
}

/// Eigenvalues (ascending) and squared first eigenvector components from a
/// dense symmetric eigensolver.
struct DenseSpectrum {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline DenseSpectrum dense_spectrum(const JacobiMatrix& j) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(j));
  DenseSpectrum out;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    out.nodes.push_back(es.eigenvalues()(k));
    out.weights.push_back(es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
  }
  return out;
}

inline double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

inline double max_abs_diff(const JacobiMatrix& x, const JacobiMatrix& y) {
  return std::max(max_abs_diff(x.diag(), y.diag()), max_abs_diff(x.offdiag(), y.offdiag()));
}

} // namespace toda::test
