#include "toda/semi_infinite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "toda/error.hpp"

namespace toda {

namespace {

constexpr double kBoundSlack = 1e-6;

// b_1..b_m followed by a_1..a_m, per time.
std::vector<std::vector<double>> window_of(const TodaTrajectory& traj, std::size_t m) {
  std::vector<std::vector<double>> out;
  out.reserve(traj.states.size());
  for (const auto& state : traj.states) {
    std::vector<double> w(state.diag().begin(), state.diag().begin() + static_cast<std::ptrdiff_t>(m));
    w.insert(w.end(), state.offdiag().begin(), state.offdiag().begin() + static_cast<std::ptrdiff_t>(m));
    out.push_back(std::move(w));
  }
  return out;
}

} // namespace

SemiInfiniteInitialData::SemiInfiniteInitialData(std::string name, Generator generator,
                                                 std::optional<double> declared_upper_bound,
                                                 std::optional<std::size_t> max_size)
    : name_(std::move(name)),
      generator_(std::move(generator)),
      upper_bound_(declared_upper_bound),
      max_size_(max_size) {
  if (!generator_) throw InvalidArgument("semi_infinite: generator must be callable");
}

SemiInfiniteInitialData SemiInfiniteInitialData::linear_b(double coupling, double slope,
                                                          double offset,
                                                          std::optional<double> upper_bound) {
  return {"linear_b",
          [=](std::size_t n) { return std::pair{coupling, slope * static_cast<double>(n) + offset}; },
          upper_bound};
}

SemiInfiniteInitialData SemiInfiniteInitialData::constant(double coupling, double offset,
                                                          std::optional<double> upper_bound) {
  return {"constant", [=](std::size_t) { return std::pair{coupling, offset}; }, upper_bound};
}

SemiInfiniteInitialData SemiInfiniteInitialData::decay(double coupling, double offset,
                                                       std::optional<double> upper_bound) {
  return {"decay",
          [=](std::size_t n) { return std::pair{coupling / static_cast<double>(n), offset}; },
          upper_bound};
}

SemiInfiniteInitialData SemiInfiniteInitialData::table(std::vector<double> diag,
                                                       std::vector<double> offdiag,
                                                       std::optional<double> upper_bound) {
  // Validates the table up front.
  const JacobiMatrix check(diag, offdiag);
  const std::size_t size = check.size();
  return {"table",
          [diag = std::move(diag), offdiag = std::move(offdiag)](std::size_t n) {
            const double a = n <= offdiag.size() ? offdiag[n - 1] : 0.0;
            return std::pair{a, diag[n - 1]};
          },
          upper_bound, size};
}

JacobiMatrix SemiInfiniteInitialData::leading_block(std::size_t n) const {
  if (n == 0) throw InvalidArgument("semi_infinite: truncation size must be >= 1");
  if (max_size_ && n > *max_size_) {
    throw InvalidArgument("semi_infinite: initial data '" + name_ + "' only provides " +
                          std::to_string(*max_size_) + " entries, requested " + std::to_string(n));
  }
  std::vector<double> diag(n);
  std::vector<double> offdiag(n - 1);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto [a, b] = generator_(i);
    diag[i - 1] = b;
    if (i < n) offdiag[i - 1] = a;
  }
  return JacobiMatrix(std::move(diag), std::move(offdiag));
}

SemiInfiniteSolution solve_toda_semi_infinite(const SemiInfiniteInitialData& init,
                                              std::span<const double> times, std::size_t m,
                                              double tol, std::size_t n_max) {
  validate_grid(times);
  if (m == 0) throw InvalidArgument("semi_infinite: window m must be >= 1");
  if (!(tol > 0.0)) throw InvalidArgument("semi_infinite: tol must be > 0");
  if (n_max < 2 * m + 2) throw InvalidArgument("semi_infinite: n_max must be >= 2m + 2");

  std::vector<std::size_t> sizes;
  for (std::size_t n = std::min(std::max<std::size_t>(2 * m + 2, 8), n_max);; n *= 2) {
    sizes.push_back(std::min(n, n_max));
    if (n >= n_max) break;
  }

  StabilizationReport report;
  report.window = m;
  report.tolerance = tol;
  report.times.assign(times.begin(), times.end());
  report.achieved_tolerance = std::numeric_limits<double>::infinity();

  std::optional<TodaTrajectory> last;
  std::vector<std::vector<double>> previous;
  DiscreteMeasure last_spectral({0.0}, {1.0});
  for (std::size_t n : sizes) {
    const JacobiMatrix block = init.leading_block(n);
    const DiscreteMeasure spectral = eigendecompose(block);
    TodaTrajectory traj = solve_toda_finite(block, times);
    report.sizes.push_back(n);

    const double top = spectral.nodes().back();
    report.max_eigenvalues.push_back(top);
    if (const auto bound = init.declared_upper_bound(); bound && top > *bound + kBoundSlack) {
      report.bound_violated = true;
      std::ostringstream os;
      os.precision(17);
      os << "N=" << n << ": largest eigenvalue " << top << " exceeds declared upper bound "
         << *bound;
      report.warnings.push_back(os.str());
    }
    for (double t : times) {
      const double s0 = moments_from_measure(moser_evolve(spectral, t), 1)[0];
      report.s0_drift = std::max(report.s0_drift, std::abs(s0 - 1.0));
    }

    auto current = window_of(traj, m);
    if (!previous.empty()) {
      double deviation = 0.0;
      double first = 0.0;
      for (std::size_t i = 0; i < current.size(); ++i) {
        for (std::size_t k = 0; k < current[i].size(); ++k) {
          deviation = std::max(deviation, std::abs(current[i][k] - previous[i][k]));
        }
        first = std::max(first, std::abs(current[i][0] - previous[i][0]));
      }
      report.deviations.push_back(deviation);
      report.first_entry_deviations.push_back(first);
      report.achieved_tolerance = deviation;
    }
    previous = std::move(current);
    last = std::move(traj);
    last_spectral = spectral;
    if (!report.deviations.empty() && report.deviations.back() < tol) {
      report.converged = true;
      break;
    }
  }
  if (!report.converged) {
    report.warnings.push_back("truncations did not stabilize below tolerance by N=" +
                              std::to_string(report.sizes.back()));
  }

  for (std::size_t k = 0; k < m; ++k) {
    StabilizationReport::EntryTrajectory b{"b" + std::to_string(k + 1), {}};
    StabilizationReport::EntryTrajectory a{"a" + std::to_string(k + 1), {}};
    for (std::size_t i = 0; i < previous.size(); ++i) {
      b.values.push_back(previous[i][k]);
      a.values.push_back(previous[i][m + k]);
    }
    report.entries.push_back(std::move(b));
    report.entries.push_back(std::move(a));
  }
  for (double t : times) report.limit_moments.push_back(evolve_moments(last_spectral, t, 2 * m));

  TodaTrajectory window;
  window.method = last->method;
  window.times = last->times;
  for (const auto& state : last->states) window.states.push_back(state.leading_block(m));
  return {std::move(window), std::move(report)};
}

} // namespace toda
