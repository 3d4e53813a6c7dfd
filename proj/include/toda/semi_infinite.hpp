#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "toda/flow.hpp"
#include "toda/jacobi.hpp"
#include "toda/moments.hpp"

namespace toda {

/// Initial data (a_n, b_n), n >= 1, of a semi-infinite lattice.
class SemiInfiniteInitialData {
public:
  /// Returns (a_n, b_n) for the 1-based index n.
  using Generator = std::function<std::pair<double, double>(std::size_t)>;

  SemiInfiniteInitialData(std::string name, Generator generator,
                          std::optional<double> declared_upper_bound = std::nullopt,
                          std::optional<std::size_t> max_size = std::nullopt);

  /// b_n = slope * n + offset, a_n = coupling.
  static SemiInfiniteInitialData linear_b(double coupling, double slope, double offset,
                                          std::optional<double> upper_bound = std::nullopt);
  /// b_n = offset, a_n = coupling.
  static SemiInfiniteInitialData constant(double coupling, double offset,
                                          std::optional<double> upper_bound = std::nullopt);
  /// b_n = offset, a_n = coupling / n.
  static SemiInfiniteInitialData decay(double coupling, double offset,
                                       std::optional<double> upper_bound = std::nullopt);
  /// Finite table; truncations are limited to diag.size().
  static SemiInfiniteInitialData table(std::vector<double> diag, std::vector<double> offdiag,
                                       std::optional<double> upper_bound = std::nullopt);

  const std::string& name() const { return name_; }
  std::optional<double> declared_upper_bound() const { return upper_bound_; }
  std::optional<std::size_t> max_size() const { return max_size_; }

  /// Leading N x N block of the initial Jacobi matrix.
  JacobiMatrix leading_block(std::size_t n) const;

private:
  std::string name_;
  Generator generator_;
  std::optional<double> upper_bound_;
  std::optional<std::size_t> max_size_;
};

struct StabilizationReport {
  struct EntryTrajectory {
    std::string name; // "b1", "a1", ...
    std::vector<double> values; // one per grid time, largest truncation
  };

  std::size_t window = 0; // m
  double tolerance = 0.0;
  std::vector<double> times;
  std::vector<std::size_t> sizes; // truncation sizes N_1 < N_2 < ...
  /// deviations[i]: max change of the window between sizes[i] and sizes[i+1].
  std::vector<double> deviations;
  /// Same, restricted to b_1.
  std::vector<double> first_entry_deviations;
  std::vector<double> max_eigenvalues; // per truncation
  std::vector<EntryTrajectory> entries;
  /// Moments s_0 .. s_{2m-1} of the largest truncation at each grid time.
  std::vector<MomentSequence> limit_moments;
  double s0_drift = 0.0; // max |s_0(t) - 1| over every truncation and time
  bool converged = false;
  double achieved_tolerance = 0.0; // last deviation, +inf with one level
  bool bound_violated = false;
  std::vector<std::string> warnings;
};

struct SemiInfiniteSolution {
  TodaTrajectory trajectory; // leading m x m blocks of the largest truncation
  StabilizationReport report;
};

/// Solves the semi-infinite lattice by truncation: the finite moment method
/// runs on N = N_1, 2 N_1, 4 N_1, ... (N_1 = max(2m+2, 8), capped at n_max)
/// until b_1..b_m and a_1..a_m at every grid time move by less than tol
/// between consecutive sizes. Non-convergence is reported, not thrown.
SemiInfiniteSolution solve_toda_semi_infinite(const SemiInfiniteInitialData& init,
                                              std::span<const double> times, std::size_t m,
                                              double tol, std::size_t n_max);

} // namespace toda
