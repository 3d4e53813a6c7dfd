#pragma once

#include <cmath>

namespace toda::kernels {

// Neumaier's variant of Kahan summation.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + carry; }
};

// exp() arguments below this give 0 in every kernel variant.
inline constexpr double kMinExpArgument = -708.0;

} // namespace toda::kernels
