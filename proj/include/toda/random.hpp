#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

#include "toda/jacobi.hpp"

namespace toda {

/// Deterministic test data. The standard fixes mt19937_64's output but not
/// the distributions', so the mapping to [lo, hi) is done here.
class SeededSampler {
public:
  explicit SeededSampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

private:
  std::mt19937_64 engine_;
};

/// b_n uniform in [-2, 2], a_n uniform in [0.5, 2].
JacobiMatrix random_jacobi(std::size_t n, std::uint64_t seed);

/// Nodes uniform in [lo, hi] with pairwise gap >= min_gap (rejection
/// sampling), weights uniform in [0.1, 1] normalized to mass 1.
DiscreteMeasure random_measure(std::size_t points, std::uint64_t seed, double lo = -3.0,
                               double hi = 3.0, double min_gap = 0.0);

} // namespace toda
