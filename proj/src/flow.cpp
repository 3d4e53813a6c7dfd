#include "toda/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kernels/compensated.hpp"
#include "toda/error.hpp"
#include "toda/kernels.hpp"

namespace toda {

namespace {

void require_nonnegative_time(double t, const char* where) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidArgument(std::string(where) + ": time must be finite and >= 0 (got " +
                          std::to_string(t) + ")");
  }
}

void require_step(double t, double h, const char* where) {
  if (!(h > 0.0) || !(t >= h) || !std::isfinite(t)) {
    throw InvalidArgument(std::string(where) + ": need t >= h > 0");
  }
}

double largest_node(const DiscreteMeasure& mu) { return mu.nodes().back(); }

} // namespace

std::vector<double> uniform_grid(double t_end, std::size_t steps) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidArgument("grid: t_end must be > 0");
  if (steps == 0) throw InvalidArgument("grid: steps must be >= 1");
  std::vector<double> times(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    times[i] = t_end * static_cast<double>(i) / static_cast<double>(steps);
  }
  return times;
}

void validate_grid(std::span<const double> times) {
  if (times.empty()) throw InvalidArgument("grid: at least one time point is required");
  if (times[0] != 0.0) throw InvalidArgument("grid: the first time point must be 0");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]) || !std::isfinite(times[i])) {
      throw InvalidArgument("grid: times must be finite and strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

DiscreteMeasure moser_evolve(const DiscreteMeasure& initial, double t) {
  require_nonnegative_time(t, "moser_evolve");
  if (t == 0.0) return initial;

  std::vector<double> weights(initial.size());
  const double total = kernels::scaled_exp_weights(initial.nodes(), initial.weights(), 2.0 * t,
                                                   largest_node(initial), weights);
  kernels::CompensatedSum mass;
  for (double& w : weights) {
    w = std::max(w / total, std::numeric_limits<double>::min());
    mass.add(w);
  }
  const double norm = mass.value();
  for (double& w : weights) w /= norm;
  return DiscreteMeasure({initial.nodes().begin(), initial.nodes().end()}, std::move(weights));
}

double log_omega(const DiscreteMeasure& initial, double t) {
  require_nonnegative_time(t, "log_omega");
  std::vector<double> scratch(initial.size());
  const double shift = largest_node(initial);
  const double total =
      kernels::scaled_exp_weights(initial.nodes(), initial.weights(), 2.0 * t, shift, scratch);
  return 2.0 * t * shift + std::log(total);
}

MomentSequence evolve_moments(const DiscreteMeasure& initial, double t, std::size_t count) {
  require_nonnegative_time(t, "evolve_moments");
  if (count == 0) throw InvalidArgument("evolve_moments: count must be >= 1");
  std::vector<double> scaled(initial.size());
  kernels::scaled_exp_weights(initial.nodes(), initial.weights(), 2.0 * t, largest_node(initial),
                              scaled);
  MomentSequence s{std::vector<double>(count), t};
  kernels::power_sums(initial.nodes(), scaled, s.values);
  // Numerator and denominator come from the same accumulator, so s_0 is 1.
  const double denominator = s.values[0];
  for (std::size_t k = 0; k < count; ++k) {
    s.values[k] /= denominator;
    if (!std::isfinite(s.values[k])) {
      throw OverflowError("evolve_moments: moment s_" + std::to_string(k) +
                          " overflows double precision");
    }
  }
  return s;
}

std::vector<double> moment_recurrence_residual(const DiscreteMeasure& initial, double t,
                                               std::size_t count, double h) {
  require_step(t, h, "moment_recurrence_residual");
  if (count < 2) throw InvalidArgument("moment_recurrence_residual: count must be >= 2");
  const MomentSequence ahead = evolve_moments(initial, t + h, count);
  const MomentSequence behind = evolve_moments(initial, t - h, count);
  const MomentSequence now = evolve_moments(initial, t, count);
  const double dlog_omega = (log_omega(initial, t + h) - log_omega(initial, t - h)) / (2.0 * h);

  std::vector<double> residual(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) {
    const double ds = (ahead[k] - behind[k]) / (2.0 * h);
    residual[k] = std::abs(ds + dlog_omega * now[k] - 2.0 * now[k + 1]);
  }
  return residual;
}

std::vector<double> weight_ode_residual(const DiscreteMeasure& initial, double t, double h) {
  require_step(t, h, "weight_ode_residual");
  const DiscreteMeasure ahead = moser_evolve(initial, t + h);
  const DiscreteMeasure behind = moser_evolve(initial, t - h);
  const DiscreteMeasure now = moser_evolve(initial, t);
  const double b1 = b1_from_measure(now);

  std::vector<double> residual(initial.size());
  for (std::size_t k = 0; k < initial.size(); ++k) {
    const double dsigma =
        (std::sqrt(ahead.weights()[k]) - std::sqrt(behind.weights()[k])) / (2.0 * h);
    const double sigma = std::sqrt(now.weights()[k]);
    residual[k] = std::abs(dsigma + (b1 - initial.nodes()[k]) * sigma);
  }
  return residual;
}

TodaTrajectory solve_toda_finite(const JacobiMatrix& initial, std::span<const double> times) {
  validate_grid(times);
  const DiscreteMeasure spectral = eigendecompose(initial);
  TodaTrajectory trajectory;
  trajectory.method = SolveMethod::moment_method;
  trajectory.times.assign(times.begin(), times.end());
  trajectory.states.reserve(times.size());
  for (double t : times) {
    if (t == 0.0) {
      trajectory.states.push_back(initial);
    } else {
      trajectory.states.push_back(jacobi_from_measure(moser_evolve(spectral, t), initial.size()));
    }
  }
  return trajectory;
}

double weyl_evolution_residual(const JacobiMatrix& initial, double lambda, double t, double h,
                               WeylConvention convention) {
  require_step(t, h, "weyl_evolution_residual");
  const DiscreteMeasure spectral = eigendecompose(initial);
  for (double node : spectral.nodes()) {
    if (std::abs(node - lambda) < 0.5) {
      throw PoleProximityError("weyl_evolution_residual: lambda must stay 0.5 away from the "
                               "spectrum (eigenvalue " + std::to_string(node) + ")");
    }
  }
  std::vector<double> grid{0.0};
  if (t - h > 0.0) grid.push_back(t - h);
  grid.push_back(t);
  grid.push_back(t + h);
  const TodaTrajectory traj = solve_toda_finite(initial, grid);
  const std::size_t last = grid.size() - 1;

  const double sign = convention == WeylConvention::resolvent ? -1.0 : 1.0;
  const auto m = [&](std::size_t i) { return sign * weyl_function(traj.states[i], lambda); };
  const double dm = (m(last) - m(last - 2)) / (2.0 * h);
  const double b1 = traj.states[last - 1].diag()[0];
  return std::abs(dm - 2.0 * (1.0 - (b1 - lambda) * m(last - 1)));
}

} // namespace toda
