#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "toda/kernels.hpp"
#include "toda/random.hpp"

using namespace toda;

namespace {

struct Sample {
  std::vector<double> nodes;
  std::vector<double> weights;
};

Sample sample(std::size_t m, std::uint64_t seed, double lo = -3.0, double hi = 3.0) {
  SeededSampler rng(seed);
  Sample s;
  for (std::size_t i = 0; i < m; ++i) {
    s.nodes.push_back(rng.uniform(lo, hi));
    s.weights.push_back(rng.uniform(0.1, 1.0));
  }
  return s;
}

// Neumaier sums carry an error of a few ulps of sum |terms|.
double bound(const std::vector<double>& abs_terms) {
  double total = 0.0;
  for (double t : abs_terms) total += t;
  return 4.0 * std::numeric_limits<double>::epsilon() * total + 1e-300;
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("isa selection") {
  CHECK(kernels::active_isa() == kernels::detected_isa());
  kernels::set_active_isa(kernels::Isa::scalar);
  CHECK(kernels::active_isa() == kernels::Isa::scalar);
  kernels::set_active_isa(kernels::detected_isa());
  CHECK(kernels::to_string(kernels::Isa::scalar) == "scalar");
}

TEST_CASE("power sums agree between variants") {
  if (!kernels::avx2::compiled() || kernels::detected_isa() != kernels::Isa::avx2) return;
  for (std::size_t m : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 64u}) {
    const Sample s = sample(m, 10 + m);
    std::vector<double> a(13), b(13);
    kernels::scalar::power_sums(s.nodes, s.weights, a);
    kernels::avx2::power_sums(s.nodes, s.weights, b);
    for (std::size_t k = 0; k < a.size(); ++k) {
      std::vector<double> terms;
      for (std::size_t j = 0; j < m; ++j) terms.push_back(std::abs(std::pow(s.nodes[j], k) * s.weights[j]));
      CAPTURE(m);
      CAPTURE(k);
      CHECK(std::abs(a[k] - b[k]) <= bound(terms));
    }
  }
}

TEST_CASE("power sums match a long-double reference") {
  const Sample s = sample(50, 3);
  std::vector<double> out(8);
  kernels::scalar::power_sums(s.nodes, s.weights, out);
  for (std::size_t k = 0; k < out.size(); ++k) {
    long double ref = 0.0L;
    for (std::size_t j = 0; j < s.nodes.size(); ++j) {
      ref += std::pow(static_cast<long double>(s.nodes[j]), static_cast<int>(k)) * s.weights[j];
    }
    CHECK(std::abs(out[k] - static_cast<double>(ref)) < 1e-13 * std::max(1.0L, std::abs(ref)));
  }
}

TEST_CASE("scaled exponential weights agree between variants") {
  if (kernels::detected_isa() != kernels::Isa::avx2) return;
  for (std::size_t m : {1u, 3u, 4u, 6u, 17u}) {
    for (double rate : {0.0, 1.0, 20.0, 300.0}) {
      const Sample s = sample(m, 100 + m);
      const double shift = *std::max_element(s.nodes.begin(), s.nodes.end());
      std::vector<double> a(m), b(m);
      const double sa = kernels::scalar::scaled_exp_weights(s.nodes, s.weights, rate, shift, a);
      const double sb = kernels::avx2::scaled_exp_weights(s.nodes, s.weights, rate, shift, b);
      for (std::size_t j = 0; j < m; ++j) {
        CAPTURE(rate);
        CHECK(std::abs(a[j] - b[j]) <= 4e-16 * std::abs(a[j]) + 1e-300);
      }
      CHECK(std::abs(sa - sb) <= 8e-16 * sa);
    }
  }
}

TEST_CASE("vector exp accuracy over the full range") {
  if (kernels::detected_isa() != kernels::Isa::avx2) return;
  std::vector<double> x;
  for (double v = -708.0; v <= 0.0; v += 0.7317) x.push_back(v);
  const std::vector<double> w(x.size(), 1.0);
  std::vector<double> out(x.size());
  kernels::avx2::scaled_exp_weights(x, w, 1.0, 0.0, out);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(out[i] / std::exp(x[i]) - 1.0));
  CHECK(worst < 4e-16);

  const std::vector<double> tiny{-800.0, -709.0, 0.0};
  const std::vector<double> ones(3, 1.0);
  std::vector<double> e(3);
  kernels::avx2::scaled_exp_weights(tiny, ones, 1.0, 0.0, e);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 1.0);
}

TEST_CASE("chebyshev sums agree between variants and with the recurrence") {
  const Sample s = sample(11, 77);
  std::vector<double> a(20), b(20);
  kernels::scalar::chebyshev_sums(s.nodes, s.weights, a);
  if (kernels::detected_isa() == kernels::Isa::avx2) {
    kernels::avx2::chebyshev_sums(s.nodes, s.weights, b);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) <= 1e-12 * std::max(1.0, std::abs(a[k])));
  }
  // U_1 = 1, so the first entry is the mass.
  double mass = 0.0;
  for (double w : s.weights) mass += w;
  CHECK(a[0] == doctest::Approx(mass).epsilon(1e-15));
}

TEST_CASE("stieltjes sums agree between variants") {
  if (kernels::detected_isa() != kernels::Isa::avx2) return;
  for (std::size_t m : {1u, 2u, 5u, 9u}) {
    const Sample s = sample(m, 500 + m);
    for (double z : {4.0, -7.5, 1e300}) {
      const double a = kernels::scalar::stieltjes_sum(s.nodes, s.weights, z);
      const double b = kernels::avx2::stieltjes_sum(s.nodes, s.weights, z);
      CAPTURE(z);
      CHECK(std::abs(a - b) <= 1e-15 * std::abs(a) + 1e-300);
    }
  }
}

TEST_CASE("dispatch follows the active isa") {
  const Sample s = sample(9, 8);
  std::vector<double> ref(5), got(5);
  kernels::scalar::power_sums(s.nodes, s.weights, ref);
  kernels::set_active_isa(kernels::Isa::scalar);
  kernels::power_sums(s.nodes, s.weights, got);
  kernels::set_active_isa(kernels::detected_isa());
  CHECK(ref == got);
}

}
