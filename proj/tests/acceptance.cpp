// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "toda/flow.hpp"
#include "toda/jacobi.hpp"
#include "toda/moments.hpp"
#include "toda/ode.hpp"
#include "toda/random.hpp"
#include "toda/response.hpp"
#include "toda/semi_infinite.hpp"

using namespace toda;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double max_abs_diff(const JacobiMatrix& x, const JacobiMatrix& y) {
  return std::max(max_abs_diff(x.diag(), y.diag()), max_abs_diff(x.offdiag(), y.offdiag()));
}

// Ten seeded lattices of sizes 2..8, shared by criteria 1 and 3.
std::vector<JacobiMatrix> oracle_set() {
  std::vector<JacobiMatrix> out;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) out.push_back(random_jacobi(2 + (seed - 1) % 7, seed));
  return out;
}

void criteria_1_and_3() {
  const auto times = uniform_grid(1.0, 10);
  double deviation = 0.0;
  double moment_drift = 0.0;
  double rk4_drift = 0.0;
  const auto start = std::chrono::steady_clock::now();
  std::vector<std::pair<TodaTrajectory, TodaTrajectory>> runs;
  for (const auto& j : oracle_set()) {
    auto moment = solve_toda_finite(j, times);
    auto rk4 = rk4_toda(j, times, 1e-4);
    deviation = std::max(deviation, compare_trajectories(moment, rk4));
    runs.emplace_back(std::move(moment), std::move(rk4));
  }
  const double elapsed = seconds_since(start);
  report(1, "oracle equivalence", deviation < 1e-6 && elapsed < 10.0,
         "max deviation " + sci(deviation) + " (< 1e-6), " + sci(elapsed) + " s (< 10 s)");

  for (const auto& [moment, rk4] : runs) {
    const auto spectrum = eigendecompose(moment.states.front());
    for (const auto& s : moment.states) {
      moment_drift = std::max(moment_drift, max_abs_diff(eigendecompose(s).nodes(), spectrum.nodes()));
    }
    for (const auto& s : rk4.states) {
      rk4_drift = std::max(rk4_drift, max_abs_diff(eigendecompose(s).nodes(), spectrum.nodes()));
    }
  }
  report(3, "isospectrality", moment_drift < 1e-10 && rk4_drift < 1e-7,
         "moment method " + sci(moment_drift) + " (< 1e-10), rk4 " + sci(rk4_drift) + " (< 1e-7)");
}

void criterion_2() {
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.01 * i);
  const auto traj = solve_toda_finite(JacobiMatrix({0.0, 0.0}, {1.0}), times);
  double err = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    err = std::max(err, std::abs(traj.states[i].diag()[0] - std::tanh(2 * t)));
    err = std::max(err, std::abs(traj.states[i].offdiag()[0] - 1.0 / std::cosh(2 * t)));
  }
  report(2, "two-site closed form", err < 1e-8, "max error " + sci(err) + " (< 1e-8)");
}

void criterion_4() {
  const auto mu = eigendecompose(random_jacobi(4, 1));
  const double t = 0.5;
  const auto coarse = moment_recurrence_residual(mu, t, 6, 1e-4);
  const auto fine = moment_recurrence_residual(mu, t, 6, 5e-5);
  const double r1 = *std::max_element(coarse.begin(), coarse.end());
  const double r2 = *std::max_element(fine.begin(), fine.end());
  const double ratio = r1 / r2;
  report(4, "moment recurrence", r1 < 1e-6 && ratio >= 3.5 && ratio <= 4.5,
         "max residual " + sci(r1) + " (< 1e-6), h-halving ratio " + sci(ratio) + " (in [3.5, 4.5])");
}

void criterion_5() {
  double err = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto j = random_jacobi(1 + (seed - 1) % 8, seed);
    err = std::max(err, max_abs_diff(jacobi_from_measure(eigendecompose(j), j.size()), j));
  }
  report(5, "inverse spectral round trip", err < 1e-9, "max error " + sci(err) + " (< 1e-9) over 20 matrices");
}

void criterion_6() {
  using Kind = MomentClassification::Kind;
  int total = 0;
  int finite_ok = 0;
  int flipped = 0;
  for (std::size_t m = 1; m <= 6; ++m) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto mu = random_measure(m, 100 * m + seed, -2.0, 2.0, 0.3);
      // Two moments past s_{2M} so the perturbation cannot be absorbed by a
      // different M-point measure.
      auto s = moments_from_measure(mu, 2 * m + 3);
      ++total;
      if (check_moment_positivity(s) == MomentClassification{Kind::finite_support, m}) ++finite_ok;
      const double wmax = *std::max_element(mu.weights().begin(), mu.weights().end());
      s.values[2] -= 2.0 * s.values[0] * wmax;
      if (check_moment_positivity(s).kind == Kind::invalid) ++flipped;
    }
  }
  report(6, "moment classification", finite_ok == total && flipped == total,
         std::to_string(finite_ok) + "/" + std::to_string(total) + " finite support, " + std::to_string(flipped) +
             "/" + std::to_string(total) + " invalid after s_2 perturbation");
}

void criterion_7() {
  double err = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto mu = random_measure(2 + seed % 9, seed);
    const auto a = response_from_moments(moments_from_measure(mu, 12));
    const auto b = response_from_measure(mu, 12);
    err = std::max(err, max_abs_diff(a.values, b.values));
  }
  report(7, "response route equality", err < 1e-10, "max discrepancy " + sci(err) + " (< 1e-10), K = 12");
}

void criterion_8() {
  const auto start = std::chrono::steady_clock::now();
  const auto init = SemiInfiniteInitialData::linear_b(1.0, -1.0, 0.0, 1.0);
  const auto times = uniform_grid(1.0, 10);
  const std::size_t m = 2;
  std::vector<TodaTrajectory> runs;
  double top = -INFINITY;
  for (std::size_t n : {16u, 32u, 64u}) {
    const auto block = init.leading_block(n);
    top = std::max(top, eigendecompose(block).nodes().back());
    runs.push_back(solve_toda_finite(block, times));
  }
  double dev = 0.0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    for (std::size_t i = 0; i < times.size(); ++i) {
      dev = std::max(dev, max_abs_diff(runs[r].states[i].leading_block(m), runs[r - 1].states[i].leading_block(m)));
      dev = std::max(dev, std::abs(runs[r].states[i].offdiag()[m - 1] - runs[r - 1].states[i].offdiag()[m - 1]));
    }
  }
  const auto [traj, rep] = solve_toda_semi_infinite(init, times, m, 1e-8, 64);
  for (double e : rep.max_eigenvalues) top = std::max(top, e);
  const double elapsed = seconds_since(start);
  report(8, "semi-infinite stabilization", dev < 1e-8 && rep.converged && top <= 1.0 + 1e-6 && elapsed < 30.0,
         "N=16/32/64 deviation " + sci(dev) + " (< 1e-8), solver converged=" + (rep.converged ? "yes" : "no") +
             " at N=" + std::to_string(rep.sizes.back()) + ", max eigenvalue " + sci(top) + " (<= 1 + 1e-6), " +
             sci(elapsed) + " s (< 30 s)");
}

void criterion_9() {
  std::vector<DiscreteMeasure> measures{DiscreteMeasure({-3.0, -1.0, 0.5, 3.0}, {0.1, 0.2, 0.3, 0.4}),
                                        DiscreteMeasure({-3.0, 2.999}, {0.999, 0.001})};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    // Rescale a random spectrum to spectral radius exactly 3.
    const auto mu = eigendecompose(random_jacobi(6, seed));
    double radius = 0.0;
    for (double x : mu.nodes()) radius = std::max(radius, std::abs(x));
    std::vector<double> nodes;
    for (double x : mu.nodes()) nodes.push_back(3.0 * x / radius);
    measures.emplace_back(nodes, std::vector<double>(mu.weights().begin(), mu.weights().end()));
  }
  auto times = uniform_grid(1.0, 10);
  times.insert(times.end(), {5.0, 10.0, 50.0});
  double s0 = 0.0;
  double mass = 0.0;
  for (const auto& mu : measures) {
    for (double t : times) {
      s0 = std::max(s0, std::abs(evolve_moments(mu, t, 4)[0] - 1.0));
      mass = std::max(mass, std::abs(moser_evolve(mu, t).mass() - 1.0));
    }
  }
  report(9, "normalization", s0 < 1e-12 && mass < 1e-12,
         "s_0 error " + sci(s0) + ", weight-sum error " + sci(mass) + " (< 1e-12, up to t = 50)");
}

void criterion_10() {
  const JacobiMatrix j({0.0, 0.0}, {1.0});
  const double lambda = 3.0;
  const double t = 0.5;
  const double stieltjes = weyl_evolution_residual(j, lambda, t, 1e-4, WeylConvention::stieltjes);
  const double resolvent = weyl_evolution_residual(j, lambda, t, 1e-4, WeylConvention::resolvent);
  const double coarse = weyl_evolution_residual(j, lambda, t, 1e-2);
  const double fine = weyl_evolution_residual(j, lambda, t, 5e-3);
  const double ratio = coarse / fine;
  report(10, "weyl evolution", stieltjes > 1e-3 && resolvent < 1e-6 && ratio >= 3.5 && ratio <= 4.5,
         "stieltjes-form residual " + sci(stieltjes) + " (rejected), resolvent-form residual " + sci(resolvent) +
             " (< 1e-6), h-halving ratio " + sci(ratio));
}

} // namespace

int main() {
  criteria_1_and_3();
  criterion_2();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
