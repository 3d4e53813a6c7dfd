#pragma once

// Node-parallel reductions over discrete measures.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant picked at runtime from CPUID. Both are compensated (Neumaier) sums;
// they differ only in summation order, so results agree to a few ulp.

#include <span>
#include <string_view>

namespace toda::kernels {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);

/// Best instruction set supported by the running CPU.
Isa detected_isa();

/// Instruction set currently used by the dispatching entry points.
Isa active_isa();

/// Forces the dispatch target. Throws InvalidArgument if the CPU lacks it.
void set_active_isa(Isa isa);

/// out[k] = sum_j nodes[j]^k * weights[j] for k = 0 .. out.size()-1.
void power_sums(std::span<const double> nodes, std::span<const double> weights,
                std::span<double> out);

/// out[j] = weights[j] * exp(rate * (nodes[j] - shift)); returns sum_j out[j].
///
/// Callers pick shift so every exponent is <= 0. Exponents below the
/// smallest normal result give 0.
double scaled_exp_weights(std::span<const double> nodes, std::span<const double> weights,
                          double rate, double shift, std::span<double> out);

/// out[k-1] = sum_j U_k(nodes[j]) * weights[j] for k = 1 .. out.size(), with
/// U_0 = 0, U_1 = 1, U_{k+1} = lambda U_k - U_{k-1}.
void chebyshev_sums(std::span<const double> nodes, std::span<const double> weights,
                    std::span<double> out);

/// sum_j weights[j] / (z - nodes[j]).
double stieltjes_sum(std::span<const double> nodes, std::span<const double> weights, double z);

namespace scalar {
void power_sums(std::span<const double>, std::span<const double>, std::span<double>);
double scaled_exp_weights(std::span<const double>, std::span<const double>, double, double,
                          std::span<double>);
void chebyshev_sums(std::span<const double>, std::span<const double>, std::span<double>);
double stieltjes_sum(std::span<const double>, std::span<const double>, double);
} // namespace scalar

namespace avx2 {
/// False when the library was built for a non-x86 target.
bool compiled();
void power_sums(std::span<const double>, std::span<const double>, std::span<double>);
double scaled_exp_weights(std::span<const double>, std::span<const double>, double, double,
                          std::span<double>);
void chebyshev_sums(std::span<const double>, std::span<const double>, std::span<double>);
double stieltjes_sum(std::span<const double>, std::span<const double>, double);
} // namespace avx2

} // namespace toda::kernels
