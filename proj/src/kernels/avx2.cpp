#include "toda/kernels.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kernels/compensated.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define TODA_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define TODA_HAVE_AVX2_KERNELS 0
#endif

namespace toda::kernels::avx2 {

#if TODA_HAVE_AVX2_KERNELS

#define TODA_AVX2 __attribute__((target("avx2,fma")))

namespace {

constexpr std::size_t kLanes = 4;

struct Acc {
  __m256d sum;
  __m256d carry;
};

TODA_AVX2 inline Acc acc_zero() { return {_mm256_setzero_pd(), _mm256_setzero_pd()}; }

TODA_AVX2 inline void acc_add(Acc& a, __m256d x) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d t = _mm256_add_pd(a.sum, x);
  const __m256d big_sum = _mm256_cmp_pd(_mm256_andnot_pd(sign, a.sum),
                                        _mm256_andnot_pd(sign, x), _CMP_GE_OQ);
  const __m256d from_sum = _mm256_add_pd(_mm256_sub_pd(a.sum, t), x);
  const __m256d from_x = _mm256_add_pd(_mm256_sub_pd(x, t), a.sum);
  a.carry = _mm256_add_pd(a.carry, _mm256_blendv_pd(from_x, from_sum, big_sum));
  a.sum = t;
}

TODA_AVX2 inline double acc_reduce(const Acc& a) {
  alignas(32) std::array<double, kLanes> s{};
  alignas(32) std::array<double, kLanes> c{};
  _mm256_store_pd(s.data(), a.sum);
  _mm256_store_pd(c.data(), a.carry);
  CompensatedSum total;
  for (double v : s) total.add(v);
  for (double v : c) total.add(v);
  return total.value();
}

// One accumulator per output, kept in plain double storage: heap blocks are
// not guaranteed to be 32-byte aligned, so vectors of __m256d are unsafe.
class AccBank {
public:
  explicit AccBank(std::size_t n) : sum_(n * kLanes, 0.0), carry_(n * kLanes, 0.0) {}

  TODA_AVX2 void add(std::size_t k, __m256d x) {
    Acc a{_mm256_loadu_pd(&sum_[k * kLanes]), _mm256_loadu_pd(&carry_[k * kLanes])};
    acc_add(a, x);
    _mm256_storeu_pd(&sum_[k * kLanes], a.sum);
    _mm256_storeu_pd(&carry_[k * kLanes], a.carry);
  }

  TODA_AVX2 double reduce(std::size_t k) const {
    return acc_reduce({_mm256_loadu_pd(&sum_[k * kLanes]), _mm256_loadu_pd(&carry_[k * kLanes])});
  }

private:
  std::vector<double> sum_;
  std::vector<double> carry_;
};

// Loads up to four doubles, padding the missing lanes with `fill`.
TODA_AVX2 inline __m256d load_partial(const double* p, std::size_t count, double fill) {
  if (count >= kLanes) return _mm256_loadu_pd(p);
  alignas(32) std::array<double, kLanes> tmp{fill, fill, fill, fill};
  for (std::size_t i = 0; i < count; ++i) tmp[i] = p[i];
  return _mm256_load_pd(tmp.data());
}

TODA_AVX2 inline void store_partial(double* p, std::size_t count, __m256d v) {
  if (count >= kLanes) {
    _mm256_storeu_pd(p, v);
    return;
  }
  alignas(32) std::array<double, kLanes> tmp{};
  _mm256_store_pd(tmp.data(), v);
  for (std::size_t i = 0; i < count; ++i) p[i] = tmp[i];
}

TODA_AVX2 inline __m256d pow2(__m256d k, __m256d magic, __m256i bias) {
  const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, magic)),
                                      _mm256_castpd_si256(magic));
  return _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(ki, bias), 52));
}

// exp(x) via Cephes' Pade form after reduction x = n ln2 + r, |r| <= ln2/2.
// Lanes below kMinExpArgument return 0, lanes above ~709.78 return +inf.
TODA_AVX2 __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(kMinExpArgument);
  const __m256d hi = _mm256_set1_pd(709.78);
  const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d overflow = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d n = _mm256_floor_pd(
      _mm256_add_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                    _mm256_set1_pd(0.5)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(6.93145751953125E-1)));
  x = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(1.42860682030941723212E-6)));

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d p = _mm256_set1_pd(1.26177193074810590878E-4);
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(3.02994407707441961300E-2));
  p = _mm256_add_pd(_mm256_mul_pd(p, xx), _mm256_set1_pd(9.99999999999999999910E-1));
  p = _mm256_mul_pd(p, x);
  __m256d q = _mm256_set1_pd(3.00198505138664455042E-6);
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.52448340349684104192E-3));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.27265548208155028766E-1));
  q = _mm256_add_pd(_mm256_mul_pd(q, xx), _mm256_set1_pd(2.00000000000000000009E0));
  __m256d r = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  r = _mm256_add_pd(_mm256_set1_pd(1.0), _mm256_add_pd(r, r));

  // 2^n with n integral in [-1021, 1024], applied as two halves so n = 1024
  // stays representable. The magic-number add leaves each half in the low
  // mantissa bits.
  const __m256d n1 = _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.5)));
  const __m256d n2 = _mm256_sub_pd(n, n1);
  const __m256d magic = _mm256_set1_pd(6755399441055744.0);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d scale1 = pow2(n1, magic, bias);
  const __m256d scale2 = pow2(n2, magic, bias);
  r = _mm256_mul_pd(_mm256_mul_pd(r, scale1), scale2);

  r = _mm256_blendv_pd(r, _mm256_setzero_pd(), underflow);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(HUGE_VAL), overflow);
  return r;
}

} // namespace

bool compiled() { return true; }

TODA_AVX2 void power_sums(std::span<const double> nodes, std::span<const double> weights,
                          std::span<double> out) {
  const std::size_t m = nodes.size();
  AccBank bank(out.size());
  for (std::size_t j = 0; j < m; j += kLanes) {
    const std::size_t count = m - j;
    const __m256d lambda = load_partial(nodes.data() + j, count, 0.0);
    __m256d term = load_partial(weights.data() + j, count, 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      bank.add(k, term);
      term = _mm256_mul_pd(term, lambda);
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = bank.reduce(k);
}

TODA_AVX2 double scaled_exp_weights(std::span<const double> nodes,
                                    std::span<const double> weights, double rate, double shift,
                                    std::span<double> out) {
  const std::size_t m = nodes.size();
  const __m256d vrate = _mm256_set1_pd(rate);
  const __m256d vshift = _mm256_set1_pd(shift);
  Acc total = acc_zero();
  for (std::size_t j = 0; j < m; j += kLanes) {
    const std::size_t count = m - j;
    const __m256d lambda = load_partial(nodes.data() + j, count, shift);
    const __m256d w = load_partial(weights.data() + j, count, 0.0);
    const __m256d e = exp_pd(_mm256_mul_pd(vrate, _mm256_sub_pd(lambda, vshift)));
    const __m256d v = _mm256_mul_pd(w, e);
    store_partial(out.data() + j, count, v);
    acc_add(total, v);
  }
  return acc_reduce(total);
}

TODA_AVX2 void chebyshev_sums(std::span<const double> nodes, std::span<const double> weights,
                              std::span<double> out) {
  const std::size_t m = nodes.size();
  AccBank bank(out.size());
  for (std::size_t j = 0; j < m; j += kLanes) {
    const std::size_t count = m - j;
    const __m256d lambda = load_partial(nodes.data() + j, count, 0.0);
    const __m256d w = load_partial(weights.data() + j, count, 0.0);
    __m256d prev = _mm256_setzero_pd();
    __m256d cur = _mm256_set1_pd(1.0);
    for (std::size_t k = 0; k < out.size(); ++k) {
      bank.add(k, _mm256_mul_pd(cur, w));
      const __m256d next = _mm256_sub_pd(_mm256_mul_pd(lambda, cur), prev);
      prev = cur;
      cur = next;
    }
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = bank.reduce(k);
}

TODA_AVX2 double stieltjes_sum(std::span<const double> nodes, std::span<const double> weights,
                               double z) {
  const std::size_t m = nodes.size();
  const __m256d vz = _mm256_set1_pd(z);
  constexpr std::array<double, kLanes> ones{1.0, 1.0, 1.0, 1.0};
  Acc total = acc_zero();
  for (std::size_t j = 0; j < m; j += kLanes) {
    const std::size_t count = m - j;
    // Padding lanes get weight 0 over denominator 1, adding exactly 0.
    const __m256d lambda = load_partial(nodes.data() + j, count, 0.0);
    const __m256d w = load_partial(weights.data() + j, count, 0.0);
    const __m256d live = load_partial(ones.data(), count, 0.0);
    const __m256d denom = _mm256_blendv_pd(_mm256_set1_pd(1.0), _mm256_sub_pd(vz, lambda),
                                           _mm256_cmp_pd(live, _mm256_setzero_pd(), _CMP_NEQ_OQ));
    acc_add(total, _mm256_div_pd(w, denom));
  }
  return acc_reduce(total);
}

#else

bool compiled() { return false; }

void power_sums(std::span<const double> nodes, std::span<const double> weights,
                std::span<double> out) {
  scalar::power_sums(nodes, weights, out);
}

double scaled_exp_weights(std::span<const double> nodes, std::span<const double> weights,
                          double rate, double shift, std::span<double> out) {
  return scalar::scaled_exp_weights(nodes, weights, rate, shift, out);
}

void chebyshev_sums(std::span<const double> nodes, std::span<const double> weights,
                    std::span<double> out) {
  scalar::chebyshev_sums(nodes, weights, out);
}

double stieltjes_sum(std::span<const double> nodes, std::span<const double> weights, double z) {
  return scalar::stieltjes_sum(nodes, weights, z);
}

#endif

} // namespace toda::kernels::avx2
