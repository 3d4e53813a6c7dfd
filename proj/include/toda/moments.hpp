#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "toda/dense.hpp"
#include "toda/jacobi.hpp"

namespace toda {

/// Power moments s_0 ... s_{K-1} of a measure, tagged with the flow time
/// they belong to.
struct MomentSequence {
  std::vector<double> values;
  double time = 0.0;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

/// Real polynomial in the monomial basis: coeffs[n] multiplies lambda^n.
struct Polynomial {
  std::vector<double> coeffs;

  double operator()(double lambda) const;
};

/// s_k = sum_j lambda_j^k w_j, k < count, with compensated summation.
/// Throws OverflowError if any moment leaves the double range.
MomentSequence moments_from_measure(const DiscreteMeasure& mu, std::size_t count,
                                    double time = 0.0);

/// T x T Hankel matrix with entries s_{i+j}. Needs at least 2T-1 moments.
DenseMatrix<double> hankel_matrix(const MomentSequence& s, std::size_t order);

struct MomentClassification {
  enum class Kind { positive_definite, finite_support, invalid };

  Kind kind;
  /// positive_definite: largest T tested; finite_support: support size N0;
  /// invalid: smallest T at which S_T fails.
  std::size_t order;

  friend bool operator==(const MomentClassification&, const MomentClassification&) = default;
};

/// Classifies s against the Hamburger positivity conditions.
///
/// Runs a Cholesky factorization across the largest Hankel matrix the data
/// admits. A pivot below -1e-10 |S| means invalid. A pivot within 1e-10 |S|
/// of zero at row N0 means finite support of size N0, provided the Schur
/// complement of the leading N0 block also vanishes; otherwise the data is
/// invalid. |S| is the largest absolute entry.
MomentClassification check_moment_positivity(const MomentSequence& s);

/// N x N Jacobi matrix whose spectral measure matches the first 2N moments
/// of mu. Uses the Rutishauser-Kahan-Pal-Walker updating form of the Lanczos
/// process, which adds one node at a time with plane rotations and stays
/// stable for weights spanning many orders of magnitude. When mu has exactly
/// N nodes this is the exact inverse of eigendecompose.
///
/// Throws DegenerateMeasureError when mu has fewer than N points (an
/// off-diagonal falls below 1e-12 of the node scale).
JacobiMatrix jacobi_from_measure(const DiscreteMeasure& mu, std::size_t n);

struct HankelDiagnostics {
  /// (max Cholesky diagonal / min Cholesky diagonal)^2, a lower bound on the
  /// 2-norm condition number of the Hankel matrix.
  double condition_estimate = 0.0;
  bool ill_conditioned = false;
};

/// N x N Jacobi matrix from moments s_0 ... s_{2N-1} via a Cholesky
/// factorization of the Hankel matrix.
///
/// b_N needs s_{2N-1}, so 2N moments are required. Throws PositivityError on
/// a non-positive pivot. Reliable only up to N of about 8 in double
/// precision; the diagnostics flag condition estimates above 1e12.
JacobiMatrix jacobi_from_moments(const MomentSequence& s, std::size_t n,
                                 HankelDiagnostics* diagnostics = nullptr);

/// <F, G> = sum_{n,m} s_{n+m} f_n g_m.
double moment_bilinear_form(const MomentSequence& s, const Polynomial& f, const Polynomial& g);

} // namespace toda
