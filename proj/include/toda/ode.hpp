#pragma once

#include <span>

#include "toda/flow.hpp"
#include "toda/jacobi.hpp"

namespace toda {

/// Direct integration of the finite Toda lattice
///   a_n' = a_n (b_{n+1} - b_n),  b_n' = 2 (a_n^2 - a_{n-1}^2),
/// with a_0 = a_N = 0, by classical fixed-step RK4.
///
/// Each grid interval is split into round(interval / dt) equal steps; dt must
/// divide every interval to within 1e-12. Throws BlowUpError if an entry
/// exceeds 1e8 in magnitude or an off-diagonal stops being positive.
TodaTrajectory rk4_toda(const JacobiMatrix& initial, std::span<const double> times, double dt);

/// Largest entrywise |A - B| over all times, diagonals and off-diagonals.
double compare_trajectories(const TodaTrajectory& a, const TodaTrajectory& b);

} // namespace toda
