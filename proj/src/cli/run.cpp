#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "toda/cli.hpp"
#include "toda/error.hpp"
#include "toda/ode.hpp"
#include "toda/random.hpp"
#include "toda/response.hpp"
#include "toda/semi_infinite.hpp"

namespace toda::cli {

namespace {

using nlohmann::ordered_json;

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("output: cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw InvalidArgument("output: failed writing " + path.string());
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  auto out = open_output(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

JacobiMatrix initial_matrix(const RunConfig& config) {
  const InitialSpec& init = config.initial;
  if (init.matrix) return *init.matrix;
  if (init.random_size) return random_jacobi(*init.random_size, config.seed);
  if (init.generator) {
    const GeneratorSpec& g = *init.generator;
    const auto data = g.name == "linear_b" ? SemiInfiniteInitialData::linear_b(g.alpha, g.beta, g.gamma)
                      : g.name == "decay"  ? SemiInfiniteInitialData::decay(g.alpha, g.gamma)
                                           : SemiInfiniteInitialData::constant(g.alpha, g.gamma);
    return data.leading_block(*g.size);
  }
  throw InvalidArgument("initial: no lattice data for mode " + to_string(config.mode));
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double trace(const JacobiMatrix& j) {
  double s = 0.0;
  for (double b : j.diag()) s += b;
  return s;
}

double energy(const JacobiMatrix& j) {
  double s = 0.0;
  for (double b : j.diag()) s += b * b;
  for (double a : j.offdiag()) s += 2.0 * a * a;
  return s;
}

// Conserved-quantity drift of a trajectory against its first state.
ordered_json invariants(const TodaTrajectory& traj, const DiscreteMeasure& spectrum) {
  double eig = 0.0;
  double tr = 0.0;
  double en = 0.0;
  const JacobiMatrix& j0 = traj.states.front();
  for (const auto& state : traj.states) {
    eig = std::max(eig, max_abs_diff(eigendecompose(state).nodes(), spectrum.nodes()));
    tr = std::max(tr, std::abs(trace(state) - trace(j0)));
    en = std::max(en, std::abs(energy(state) - energy(j0)) / std::max(1.0, energy(j0)));
  }
  return {{"eigenvalue_drift", eig}, {"trace_drift", tr}, {"energy_drift", en}};
}

ordered_json finite_report(const RunConfig& config, const TodaTrajectory& traj,
                           const DiscreteMeasure& spectrum) {
  ordered_json report;
  report["mode"] = to_string(config.mode);
  report["lattice_size"] = traj.lattice_size();
  report["times"] = traj.times;
  report["eigenvalues"] = std::vector<double>(spectrum.nodes().begin(), spectrum.nodes().end());
  report["initial_weights"] = std::vector<double>(spectrum.weights().begin(), spectrum.weights().end());
  report["invariants"] = invariants(traj, spectrum);
  double s0 = 0.0;
  for (double t : traj.times) {
    s0 = std::max(s0, std::abs(evolve_moments(spectrum, t, 1).values[0] - 1.0));
    s0 = std::max(s0, std::abs(moser_evolve(spectrum, t).mass() - 1.0));
  }
  report["invariants"]["s0_drift"] = s0;
  return report;
}

void write_trajectory(const std::filesystem::path& path, const TodaTrajectory& traj) {
  auto out = open_output(path);
  write_trajectory_csv(out, traj);
  finish(out, path);
}

void run_finite(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const JacobiMatrix j0 = initial_matrix(config);
  const auto times = uniform_grid(config.t_end, config.steps);
  const DiscreteMeasure spectrum = eigendecompose(j0);
  const TodaTrajectory traj = solve_toda_finite(j0, times);
  write_trajectory(options.out_dir / config.trajectory_file, traj);
  ordered_json report = finite_report(config, traj, spectrum);

  if (config.mode == Mode::verify) {
    const TodaTrajectory oracle = rk4_toda(j0, times, config.dt);
    write_trajectory(options.out_dir / config.oracle_file, oracle);
    report["oracle"] = {{"method", "rk4"}, {"dt", config.dt}, {"invariants", invariants(oracle, spectrum)}};
    report["deviation"] = compare_trajectories(traj, oracle);
    if (!options.quiet) log << "max deviation from rk4: " << format_double(report["deviation"].get<double>()) << '\n';
  }
  write_json(options.out_dir / config.report_file, report);
  if (!options.quiet) log << "wrote " << traj.times.size() << " states of size " << j0.size() << '\n';
}

void run_semi_infinite(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const InitialSpec& init = config.initial;
  std::size_t n_max = config.n_max;
  std::optional<SemiInfiniteInitialData> data;
  if (init.matrix) {
    const auto diag = init.matrix->diag();
    const auto off = init.matrix->offdiag();
    data = SemiInfiniteInitialData::table({diag.begin(), diag.end()}, {off.begin(), off.end()});
    n_max = std::min(n_max, init.matrix->size());
  } else {
    const GeneratorSpec& g = *init.generator;
    if (g.name == "linear_b") {
      data = SemiInfiniteInitialData::linear_b(g.alpha, g.beta, g.gamma, g.upper_bound);
    } else if (g.name == "decay") {
      data = SemiInfiniteInitialData::decay(g.alpha, g.gamma, g.upper_bound);
    } else {
      data = SemiInfiniteInitialData::constant(g.alpha, g.gamma, g.upper_bound);
    }
    if (g.size) n_max = std::min(n_max, *g.size);
  }

  const auto times = uniform_grid(config.t_end, config.steps);
  const auto [traj, rep] = solve_toda_semi_infinite(*data, times, config.window, config.tol, n_max);
  write_trajectory(options.out_dir / config.trajectory_file, traj);

  ordered_json report;
  report["mode"] = "semi_infinite";
  report["initial_data"] = data->name();
  report["window"] = rep.window;
  report["tolerance"] = rep.tolerance;
  report["times"] = rep.times;
  report["sizes"] = rep.sizes;
  report["deviations"] = rep.deviations;
  report["first_entry_deviations"] = rep.first_entry_deviations;
  report["max_eigenvalues"] = rep.max_eigenvalues;
  report["converged"] = rep.converged;
  report["achieved_tolerance"] =
      std::isfinite(rep.achieved_tolerance) ? ordered_json(rep.achieved_tolerance) : ordered_json(nullptr);
  report["bound_violated"] = rep.bound_violated;
  report["s0_drift"] = rep.s0_drift;
  ordered_json entries = ordered_json::object();
  for (const auto& e : rep.entries) entries[e.name] = e.values;
  report["entries"] = entries;
  ordered_json moments = ordered_json::array();
  for (const auto& s : rep.limit_moments) moments.push_back(s.values);
  report["limit_moments"] = moments;
  report["warnings"] = rep.warnings;
  write_json(options.out_dir / config.report_file, report);

  if (!options.quiet) {
    log << (rep.converged ? "converged" : "not converged") << " at N=" << rep.sizes.back()
        << ", last deviation " << format_double(rep.achieved_tolerance) << '\n';
    for (const auto& w : rep.warnings) log << "warning: " << w << '\n';
  }
}

void run_response(const RunConfig& config, const RunOptions& options, std::ostream& log) {
  const InitialSpec& init = config.initial;
  const DiscreteMeasure mu = init.measure       ? *init.measure
                             : init.random_size ? random_measure(*init.random_size, config.seed)
                                                : eigendecompose(initial_matrix(config));
  const auto times = uniform_grid(config.t_end, config.steps);
  const std::size_t k = config.moments;

  std::vector<std::vector<double>> moment_rows;
  std::vector<std::vector<double>> response_rows;
  double discrepancy = 0.0;
  for (double t : times) {
    const MomentSequence s = evolve_moments(mu, t, k);
    const ResponseVector r = response_from_moments(s);
    const ResponseVector direct = response_from_measure(moser_evolve(mu, t), k);
    discrepancy = std::max(discrepancy, max_abs_diff(r.values, direct.values));
    moment_rows.push_back(s.values);
    response_rows.push_back(r.values);
  }

  {
    const auto path = options.out_dir / config.moments_file;
    auto out = open_output(path);
    write_table_csv(out, "s", times, moment_rows);
    finish(out, path);
  }
  {
    const auto path = options.out_dir / config.response_file;
    auto out = open_output(path);
    write_table_csv(out, "r", times, response_rows);
    finish(out, path);
  }

  const MomentClassification kind = check_moment_positivity(moments_from_measure(mu, k));
  ordered_json report;
  report["mode"] = "response";
  report["times"] = times;
  report["count"] = k;
  report["nodes"] = std::vector<double>(mu.nodes().begin(), mu.nodes().end());
  report["weights"] = std::vector<double>(mu.weights().begin(), mu.weights().end());
  report["classification"] = kind.kind == MomentClassification::Kind::positive_definite ? "positive_definite"
                             : kind.kind == MomentClassification::Kind::finite_support ? "finite_support"
                                                                                       : "invalid";
  report["classification_order"] = kind.order;
  report["route_discrepancy"] = discrepancy;
  write_json(options.out_dir / config.report_file, report);
  if (!options.quiet) log << "moment/measure route discrepancy " << format_double(discrepancy) << '\n';
}

} // namespace

int run(const RunConfig& config, const RunOptions& options, std::ostream& log, std::ostream& err) {
  try {
    std::error_code ec;
    std::filesystem::create_directories(options.out_dir, ec);
    if (ec) throw InvalidArgument("output: cannot create " + options.out_dir.string() + ": " + ec.message());
    switch (config.mode) {
    case Mode::finite:
    case Mode::verify:
      run_finite(config, options, log);
      break;
    case Mode::semi_infinite:
      run_semi_infinite(config, options, log);
      break;
    case Mode::response:
      run_response(config, options, log);
      break;
    }
    return 0;
  } catch (const NumericalError& e) {
    err << "error: " << to_string(config.mode) << ": " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace toda::cli
