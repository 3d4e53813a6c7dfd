#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "toda/dense.hpp"
#include "toda/jacobi.hpp"
#include "toda/moments.hpp"

namespace toda {

/// Response vector r_0 ... r_{K-1}, r_{k-1} = integral of U_k against the
/// spectral measure.
struct ResponseVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

inline constexpr std::size_t kMaxResponseLength = 30;

/// U_k(lambda) with U_0 = 0, U_1 = 1, U_{k+1} = lambda U_k - U_{k-1}.
double chebyshev_u(std::size_t k, double lambda);

/// K x K integer matrix taking moments to the response vector.
///
/// With 0-based row i and column j the entry is
/// C((i+j)/2, j) (-1)^((i+j)/2 + j) when j <= i and i+j is even, else 0, so
/// the matrix is lower triangular. 1 <= K <= 30.
DenseMatrix<std::int64_t> lambda_matrix(std::size_t k);

ResponseVector response_from_moments(const MomentSequence& s);

ResponseVector response_from_measure(const DiscreteMeasure& mu, std::size_t count);

} // namespace toda
