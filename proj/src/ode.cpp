#include "toda/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "toda/error.hpp"

namespace toda {

namespace {

constexpr double kBlowUp = 1e8;
constexpr double kGridDivisibility = 1e-12;

// Packed state: a_1..a_{N-1} followed by b_1..b_N.
class TodaField {
public:
  explicit TodaField(std::size_t n) : n_(n) {}

  void operator()(const std::vector<double>& y, std::vector<double>& dy) const {
    const double* a = y.data();
    const double* b = y.data() + (n_ - 1);
    double* da = dy.data();
    double* db = dy.data() + (n_ - 1);
    for (std::size_t i = 0; i + 1 < n_; ++i) da[i] = a[i] * (b[i + 1] - b[i]);
    for (std::size_t i = 0; i < n_; ++i) {
      const double right = i + 1 < n_ ? a[i] * a[i] : 0.0;
      const double left = i > 0 ? a[i - 1] * a[i - 1] : 0.0;
      db[i] = 2.0 * (right - left);
    }
  }

private:
  std::size_t n_;
};

JacobiMatrix unpack(const std::vector<double>& y, std::size_t n) {
  std::vector<double> offdiag(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n - 1));
  std::vector<double> diag(y.begin() + static_cast<std::ptrdiff_t>(n - 1), y.end());
  return JacobiMatrix(std::move(diag), std::move(offdiag));
}

void guard(const std::vector<double>& y, std::size_t n, double t) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(std::abs(y[i]) <= kBlowUp)) {
      throw BlowUpError("rk4_toda: solution exceeded 1e8 at t = " + std::to_string(t) +
                        "; step too large or boundary convention broken");
    }
    if (i + 1 < n && !(y[i] > 0.0)) {
      throw BlowUpError("rk4_toda: off-diagonal a_" + std::to_string(i + 1) +
                        " lost positivity at t = " + std::to_string(t));
    }
  }
}

} // namespace

TodaTrajectory rk4_toda(const JacobiMatrix& initial, std::span<const double> times, double dt) {
  validate_grid(times);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("rk4_toda: dt must be > 0");

  const std::size_t n = initial.size();
  std::vector<double> y;
  y.reserve(2 * n - 1);
  y.insert(y.end(), initial.offdiag().begin(), initial.offdiag().end());
  y.insert(y.end(), initial.diag().begin(), initial.diag().end());

  const TodaField field(n);
  std::vector<double> k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());

  TodaTrajectory trajectory;
  trajectory.method = SolveMethod::direct_ode;
  trajectory.times.assign(times.begin(), times.end());
  trajectory.states.reserve(times.size());
  trajectory.states.push_back(initial);

  for (std::size_t g = 1; g < times.size(); ++g) {
    const double interval = times[g] - times[g - 1];
    const double count = std::round(interval / dt);
    if (count < 1.0 || std::abs(count * dt - interval) > kGridDivisibility) {
      throw InvalidArgument("rk4_toda: dt does not divide grid interval " + std::to_string(g));
    }
    const auto steps = static_cast<std::size_t>(count);
    const double h = interval / count;
    for (std::size_t s = 0; s < steps; ++s) {
      field(y, k1);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
      field(tmp, k2);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
      field(tmp, k3);
      for (std::size_t i = 0; i < y.size(); ++i) tmp[i] = y[i] + h * k3[i];
      field(tmp, k4);
      for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] += h / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
      }
      guard(y, n, times[g - 1] + static_cast<double>(s + 1) * h);
    }
    trajectory.states.push_back(unpack(y, n));
  }
  return trajectory;
}

double compare_trajectories(const TodaTrajectory& a, const TodaTrajectory& b) {
  if (a.times.size() != b.times.size() || a.states.size() != b.states.size() ||
      a.states.size() != a.times.size()) {
    throw InvalidArgument("compare_trajectories: grids differ in length");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    if (std::abs(a.times[i] - b.times[i]) > 1e-12) {
      throw InvalidArgument("compare_trajectories: grids differ at index " + std::to_string(i));
    }
    const JacobiMatrix& x = a.states[i];
    const JacobiMatrix& y = b.states[i];
    if (x.size() != y.size()) throw InvalidArgument("compare_trajectories: lattice sizes differ");
    for (std::size_t k = 0; k < x.size(); ++k) worst = std::max(worst, std::abs(x.diag()[k] - y.diag()[k]));
    for (std::size_t k = 0; k + 1 < x.size(); ++k) {
      worst = std::max(worst, std::abs(x.offdiag()[k] - y.offdiag()[k]));
    }
  }
  return worst;
}

} // namespace toda
