#include <atomic>

#include "toda/error.hpp"
#include "toda/kernels.hpp"

namespace toda::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  return avx2::compiled() && __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

} // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
  case Isa::scalar:
    return "scalar";
  case Isa::avx2:
    return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const Isa isa = cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw InvalidArgument("kernels: AVX2 requested but not supported by this CPU");
  }
  active().store(isa, std::memory_order_relaxed);
}

void power_sums(std::span<const double> nodes, std::span<const double> weights,
                std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::power_sums(nodes, weights, out);
  } else {
    scalar::power_sums(nodes, weights, out);
  }
}

double scaled_exp_weights(std::span<const double> nodes, std::span<const double> weights,
                          double rate, double shift, std::span<double> out) {
  if (active_isa() == Isa::avx2) return avx2::scaled_exp_weights(nodes, weights, rate, shift, out);
  return scalar::scaled_exp_weights(nodes, weights, rate, shift, out);
}

void chebyshev_sums(std::span<const double> nodes, std::span<const double> weights,
                    std::span<double> out) {
  if (active_isa() == Isa::avx2) {
    avx2::chebyshev_sums(nodes, weights, out);
  } else {
    scalar::chebyshev_sums(nodes, weights, out);
  }
}

double stieltjes_sum(std::span<const double> nodes, std::span<const double> weights, double z) {
  if (active_isa() == Isa::avx2) return avx2::stieltjes_sum(nodes, weights, z);
  return scalar::stieltjes_sum(nodes, weights, z);
}

} // namespace toda::kernels
