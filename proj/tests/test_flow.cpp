#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "toda/error.hpp"
#include "toda/flow.hpp"
#include "toda/random.hpp"

using namespace toda;

namespace {

const DiscreteMeasure kPair({-1.0, 1.0}, {0.5, 0.5});

} // namespace

TEST_SUITE("flow") {

TEST_CASE("uniform grid and validation") {
  const auto g = uniform_grid(1.0, 4);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK_THROWS_AS(validate_grid(std::vector<double>{0.1, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(validate_grid(std::vector<double>{0.0, 0.2, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(uniform_grid(-1.0, 3), InvalidArgument);
}

TEST_CASE("moser evolution examples") {
  CHECK(moser_evolve(DiscreteMeasure({3.0}, {1.0}), 7.0).weights()[0] == 1.0);
  const auto mu = random_measure(5, 4);
  CHECK(moser_evolve(mu, 0.0) == mu);
  for (double t : {0.1, 0.5, 2.0}) {
    const auto evolved = moser_evolve(kPair, t);
    const auto w = evolved.weights();
    const double den = std::exp(-2 * t) + std::exp(2 * t);
    CHECK(w[0] == doctest::Approx(std::exp(-2 * t) / den).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(std::exp(2 * t) / den).epsilon(1e-14));
  }
  CHECK_THROWS_AS(moser_evolve(kPair, -0.1), InvalidArgument);
}

TEST_CASE("log omega examples") {
  CHECK(log_omega(kPair, 1.0) == doctest::Approx(std::log(std::cosh(2.0))).epsilon(1e-15));
  CHECK(log_omega(random_measure(4, 2), 0.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(log_omega(DiscreteMeasure({3.0}, {1.0}), 2.0) == 12.0);
  // Far beyond exp's range the logarithm is still exact.
  CHECK(log_omega(DiscreteMeasure({3.0}, {1.0}), 1000.0) == 6000.0);
}

TEST_CASE("evolve moments examples") {
  const auto mu = random_measure(4, 5);
  CHECK(test::max_abs_diff(evolve_moments(mu, 0.0, 6).values, moments_from_measure(mu, 6).values) < 1e-15);
  for (double t : {0.0, 0.3, 1.0}) {
    const auto s = evolve_moments(kPair, t, 6);
    CHECK(s[0] == 1.0);
    CHECK(s[1] == doctest::Approx(std::tanh(2 * t)).epsilon(1e-14));
    CHECK(s[2] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s[4] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.time == t);
  }
}

TEST_CASE("normalization holds at large times") {
  const DiscreteMeasure wide({-3.0, -1.0, 0.5, 3.0}, {0.4, 0.3, 0.2, 0.1});
  for (double t : {0.0, 1.0, 10.0, 50.0, 500.0}) {
    CHECK(std::abs(evolve_moments(wide, t, 3)[0] - 1.0) < 1e-12);
    const auto w = moser_evolve(wide, t);
    CHECK(std::abs(w.mass() - 1.0) < 1e-12);
    for (double x : w.weights()) CHECK(x > 0.0);
  }
}

TEST_CASE("two routes to the evolved moments agree") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto mu = random_measure(1 + seed % 7, seed);
    for (double t : {0.0, 0.4, 1.5}) {
      const auto a = evolve_moments(mu, t, 8);
      const auto b = moments_from_measure(moser_evolve(mu, t), 8);
      for (std::size_t k = 0; k < 8; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-11 * std::max(1.0, std::abs(a[k])));
    }
  }
}

TEST_CASE("semigroup property") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto mu = random_measure(5, seed);
    const auto stepped = moser_evolve(moser_evolve(mu, 0.3), 0.45);
    const auto direct = moser_evolve(mu, 0.75);
    CHECK(test::max_abs_diff(stepped.weights(), direct.weights()) < 1e-12);
  }
}

TEST_CASE("moment recurrence residual examples") {
  const auto mu = random_measure(4, 11);
  const auto r = moment_recurrence_residual(mu, 0.5, 6, 1e-4);
  CHECK(r.size() == 5);
  CHECK(r[0] < 1e-7);
  for (double x : moment_recurrence_residual(DiscreteMeasure({0.7}, {1.0}), 0.3, 6, 1e-4)) CHECK(x < 1e-12);
  for (double x : moment_recurrence_residual(kPair, 0.5, 4, 1e-4)) CHECK(x < 1e-6);
}

TEST_CASE("moment recurrence residual is second order") {
  const auto mu = random_measure(4, 12, -1.5, 1.5);
  const auto coarse = moment_recurrence_residual(mu, 0.5, 6, 1e-3);
  const auto fine = moment_recurrence_residual(mu, 0.5, 6, 5e-4);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    if (coarse[k] < 1e-9) continue; // roundoff dominated
    CAPTURE(k);
    CHECK(coarse[k] / fine[k] == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("weight ODE residual is small and second order") {
  const auto mu = random_measure(5, 3, -1.5, 1.5);
  const auto coarse = weight_ode_residual(mu, 0.4, 1e-3);
  const auto fine = weight_ode_residual(mu, 0.4, 5e-4);
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    CHECK(coarse[k] < 1e-5);
    if (coarse[k] > 1e-9) CHECK(coarse[k] / fine[k] == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("finite solve: constant 1x1 and identity at t = 0") {
  const auto times = uniform_grid(1.0, 5);
  const auto one = solve_toda_finite(JacobiMatrix({2.5}, {}), times);
  for (const auto& s : one.states) CHECK(s == JacobiMatrix({2.5}, {}));
  const auto j = random_jacobi(6, 9);
  const auto traj = solve_toda_finite(j, times);
  CHECK(traj.states.front() == j);
  CHECK(traj.method == SolveMethod::moment_method);
  CHECK(traj.lattice_size() == 6);
}

TEST_CASE("finite solve: two-site closed form") {
  std::vector<double> times;
  for (int i = 0; i <= 100; ++i) times.push_back(0.01 * i);
  const auto traj = solve_toda_finite(JacobiMatrix({0.0, 0.0}, {1.0}), times);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    CHECK(std::abs(traj.states[i].diag()[0] - std::tanh(2 * t)) < 1e-12);
    CHECK(std::abs(traj.states[i].diag()[1] + std::tanh(2 * t)) < 1e-12);
    CHECK(std::abs(traj.states[i].offdiag()[0] - 1.0 / std::cosh(2 * t)) < 1e-12);
  }
}

TEST_CASE("finite solve conserves the spectrum and traces") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto j = random_jacobi(2 + seed % 7, seed);
    const auto spectrum = test::dense_spectrum(j);
    const auto traj = solve_toda_finite(j, uniform_grid(1.0, 10));
    const double tr0 = test::dense(j).trace();
    const double tr2 = (test::dense(j) * test::dense(j)).trace();
    for (const auto& s : traj.states) {
      const Eigen::MatrixXd d = test::dense(s);
      CHECK(test::max_abs_diff(test::dense_spectrum(s).nodes, spectrum.nodes) < 1e-10);
      CHECK(std::abs(d.trace() - tr0) < 1e-9);
      CHECK(std::abs((d * d).trace() - tr2) < 1e-8);
    }
  }
}

TEST_CASE("weyl convention check at N = 2") {
  const JacobiMatrix j({0.0, 0.0}, {1.0});
  const double stieltjes = weyl_evolution_residual(j, 3.0, 0.5, 1e-4, WeylConvention::stieltjes);
  const double resolvent = weyl_evolution_residual(j, 3.0, 0.5, 1e-4, WeylConvention::resolvent);
  CHECK(stieltjes > 0.1);
  CHECK(resolvent < 1e-6);
}

TEST_CASE("weyl residual for a single site") {
  // m = 1 / (b - lambda) is constant and 1 - (b - lambda) m = 0.
  CHECK(weyl_evolution_residual(JacobiMatrix({0.4}, {}), 2.0, 0.5, 1e-4) < 1e-12);
  CHECK(weyl_evolution_residual(JacobiMatrix({0.4}, {}), 2.0, 0.5, 1e-4, WeylConvention::stieltjes) ==
        doctest::Approx(4.0));
}

TEST_CASE("weyl residual is second order in h") {
  const auto j = random_jacobi(4, 21);
  const double lambda = eigendecompose(j).nodes().back() + 1.0;
  const double coarse = weyl_evolution_residual(j, lambda, 0.5, 1e-3);
  const double fine = weyl_evolution_residual(j, lambda, 0.5, 5e-4);
  CHECK(coarse < 1e-4);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.05));
  CHECK_THROWS_AS(weyl_evolution_residual(j, eigendecompose(j).nodes()[1] + 0.1, 0.5, 1e-4), PoleProximityError);
}

}
