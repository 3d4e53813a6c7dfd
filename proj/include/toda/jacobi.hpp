#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace toda {

/// Finite symmetric tridiagonal matrix with strictly positive off-diagonal.
///
/// Holds the lattice state: the diagonal is (b_1 ... b_N) and the
/// off-diagonal is (a_1 ... a_{N-1}). The constructor validates the
/// invariants, so every live instance is a proper Jacobi matrix.
class JacobiMatrix {
public:
  JacobiMatrix(std::vector<double> diag, std::vector<double> offdiag);

  std::size_t size() const { return diag_.size(); }
  std::span<const double> diag() const { return diag_; }
  std::span<const double> offdiag() const { return offdiag_; }

  /// Leading n x n block.
  JacobiMatrix leading_block(std::size_t n) const;

  friend bool operator==(const JacobiMatrix&, const JacobiMatrix&) = default;

private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
};

/// Finitely supported positive measure: sum_k w_k delta(lambda - lambda_k).
class DiscreteMeasure {
public:
  /// Nodes must be strictly increasing and every weight finite and > 0.
  DiscreteMeasure(std::vector<double> nodes, std::vector<double> weights);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  /// Compensated sum of the weights (the zeroth moment).
  double mass() const;

  friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

/// Spectral measure of J with respect to e_1.
///
/// Nodes are the eigenvalues in ascending order and weight k is the squared
/// first component of the k-th unit eigenvector. Uses implicit QL with
/// Wilkinson shifts; only the first row of the eigenvector matrix is
/// accumulated. Throws ConvergenceError when an eigenvalue needs more than 30
/// sweeps or two eigenvalues coincide to 1e-12 relative.
DiscreteMeasure eigendecompose(const JacobiMatrix& j);

/// sum_k w_k / (lambda - lambda_k), the Stieltjes transform of the spectral
/// measure. Throws PoleProximityError within 1e-10 of an eigenvalue.
double weyl_function(const JacobiMatrix& j, double lambda);

/// ((J - lambda I)^{-1} e_1, e_1) by a direct tridiagonal solve.
///
/// Equals -weyl_function(j, lambda). This is the convention under which
/// dm/dt = 2(1 - (b_1 - lambda) m) holds along the flow.
double resolvent_weyl_function(const JacobiMatrix& j, double lambda);

/// sum_k lambda_k w_k; reproduces b_1 for the spectral measure of J.
double b1_from_measure(const DiscreteMeasure& mu);

} // namespace toda
