#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "toda/jacobi.hpp"
#include "toda/moments.hpp"

namespace toda {

enum class SolveMethod { moment_method, direct_ode };

/// Lattice states sampled on a time grid. All states share one size.
struct TodaTrajectory {
  std::vector<double> times;
  std::vector<JacobiMatrix> states;
  SolveMethod method = SolveMethod::moment_method;

  std::size_t lattice_size() const { return states.empty() ? 0 : states.front().size(); }
};

/// 0, t_end/steps, ..., t_end.
std::vector<double> uniform_grid(double t_end, std::size_t steps);

/// Throws InvalidArgument unless the grid starts at 0 and strictly increases.
void validate_grid(std::span<const double> times);

/// Spectral weights at time t: w_k(0) e^{2 lambda_k t}, normalized to mass 1.
///
/// Exponents are shifted by the largest node so nothing overflows. Weights
/// that underflow are raised to the smallest positive normal double before
/// the final normalization. Rejects t < 0.
DiscreteMeasure moser_evolve(const DiscreteMeasure& initial, double t);

/// log of Omega(t) = sum_k w_k(0) e^{2 lambda_k t}.
double log_omega(const DiscreteMeasure& initial, double t);

/// Moments of the time-t spectral measure as a ratio of two shifted sums:
/// s_k(t) = sum lambda^k e^{2 lambda t} w(0) / sum e^{2 lambda t} w(0).
/// s_0(t) is exactly 1.
MomentSequence evolve_moments(const DiscreteMeasure& initial, double t, std::size_t count);

/// |s_k' + (log Omega)' s_k - 2 s_{k+1}| for k = 0 .. count-2, with both
/// time derivatives taken by central differences of step h. A consistency
/// check on the moment recurrence; the residuals are O(h^2).
std::vector<double> moment_recurrence_residual(const DiscreteMeasure& initial, double t,
                                               std::size_t count, double h);

/// |sigma_k' + (b_1 - lambda_k) sigma_k| per node, sigma_k = sqrt(w_k(t)),
/// with b_1 = sum_j lambda_j w_j(t) and a central difference for sigma_k'.
std::vector<double> weight_ode_residual(const DiscreteMeasure& initial, double t, double h);

/// Finite Toda lattice by the moment method: the spectral measure of J0 is
/// pushed forward with the Moser weights and each state is rebuilt with
/// jacobi_from_measure. States are computed independently per time point,
/// the t = 0 state is J0 itself, and the spectrum never changes.
TodaTrajectory solve_toda_finite(const JacobiMatrix& initial, std::span<const double> times);

enum class WeylConvention {
  /// m = ((H - lambda)^{-1} e_1, e_1) = sum w_k / (lambda_k - lambda).
  resolvent,
  /// m = sum w_k / (lambda - lambda_k), i.e. weyl_function.
  stieltjes,
};

/// |dm/dt - 2(1 - (b_1 - lambda) m)| at time t along solve_toda_finite, with
/// a central difference of step h for dm/dt.
///
/// The equation holds for the resolvent convention. Under the Stieltjes
/// convention the residual is O(1), which is how the convention was pinned.
double weyl_evolution_residual(const JacobiMatrix& initial, double lambda, double t, double h,
                               WeylConvention convention = WeylConvention::resolvent);

} // namespace toda
