#include <immintrin.h>

#include <array>
#include <cstring>

#include "gscnoma/simd.hpp"
#include "simd/compensated.hpp"

namespace gscnoma::simd::detail {
namespace {

constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kLog2e = 1.44269504088896340736;
constexpr double kSqrt2 = 1.41421356237309504880;

inline __m256d broadcast(double x) { return _mm256_set1_pd(x); }

// int64 lanes (|v| < 2^51) -> double
inline __m256d int64_to_double(__m256i v) {
  const __m256d magic = broadcast(6755399441055744.0);  // 1.5 * 2^52
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, _mm256_castpd_si256(magic))), magic);
}

// round-to-nearest integral double (|x| < 2^51) -> int64 lanes
inline __m256i double_to_int64(__m256d x) {
  const __m256d magic = broadcast(6755399441055744.0);
  return _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(x, magic)), _mm256_castpd_si256(magic));
}

// ln x for positive normal x: x = 2^e m with m in [sqrt(2)/2, sqrt(2)),
// ln m = 2 atanh(f), f = (m - 1)/(m + 1), |f| <= 0.1716.
inline __m256d vlog(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256d e = _mm256_sub_pd(int64_to_double(_mm256_srli_epi64(bits, 52)), broadcast(1023.0));
  __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
                                                  _mm256_set1_epi64x(0x3FF0000000000000LL)));
  const __m256d big = _mm256_cmp_pd(m, broadcast(kSqrt2), _CMP_GE_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, broadcast(0.5)), big);
  e = _mm256_add_pd(e, _mm256_and_pd(big, broadcast(1.0)));

  const __m256d f = _mm256_div_pd(_mm256_sub_pd(m, broadcast(1.0)), _mm256_add_pd(m, broadcast(1.0)));
  const __m256d s = _mm256_mul_pd(f, f);
  // sum_{k=0}^{11} s^k / (2k + 1), Horner
  __m256d p = broadcast(1.0 / 23.0);
  for (int k = 10; k >= 0; --k) p = _mm256_fmadd_pd(p, s, broadcast(1.0 / (2 * k + 1)));
  const __m256d ln_m = _mm256_mul_pd(_mm256_add_pd(f, f), p);
  return _mm256_add_pd(_mm256_fmadd_pd(e, broadcast(kLn2Lo), ln_m), _mm256_mul_pd(e, broadcast(kLn2Hi)));
}

// ln(1 + v) for v >= 0 with the rounding of u = 1 + v corrected to first order.
inline __m256d vlog1p(__m256d v) {
  const __m256d u = _mm256_add_pd(broadcast(1.0), v);
  const __m256d correction = _mm256_div_pd(_mm256_sub_pd(_mm256_sub_pd(u, broadcast(1.0)), v), u);
  return _mm256_sub_pd(vlog(u), correction);
}

// e^r - 1 for |r| <= ln2/2 by Taylor series to degree 13.
inline __m256d expm1_reduced(__m256d r) {
  __m256d p = broadcast(1.0 / 6227020800.0);  // 1/13!
  double factorial = 6227020800.0;
  for (int k = 12; k >= 1; --k) {
    factorial /= (k + 1);
    p = _mm256_fmadd_pd(p, r, broadcast(1.0 / factorial));
  }
  return _mm256_mul_pd(p, r);
}

// e^t - 1 for t <= ~700; returns -1 below -708.
inline __m256d vexpm1(__m256d t) {
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(t, broadcast(kLog2e)), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  const __m256d r = _mm256_fnmadd_pd(k, broadcast(kLn2Lo), _mm256_fnmadd_pd(k, broadcast(kLn2Hi), t));
  const __m256d em1_r = expm1_reduced(r);
  // 2^k (1 + em1_r) - 1 = 2^k em1_r + (2^k - 1)
  const __m256i kk = double_to_int64(_mm256_max_pd(k, broadcast(-1022.0)));
  const __m256d scale = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_add_epi64(kk, _mm256_set1_epi64x(1023)), 52));
  const __m256d far = _mm256_fmadd_pd(scale, em1_r, _mm256_sub_pd(scale, broadcast(1.0)));
  const __m256d near = expm1_reduced(t);
  const __m256d small = _mm256_cmp_pd(_mm256_andnot_pd(broadcast(-0.0), t), broadcast(0.5 * kLn2Hi), _CMP_LT_OQ);
  const __m256d result = _mm256_blendv_pd(far, near, small);
  const __m256d underflow = _mm256_cmp_pd(t, broadcast(-708.0), _CMP_LT_OQ);
  return _mm256_blendv_pd(result, broadcast(-1.0), underflow);
}

inline __m256d vrate(__m256d g, RateModel rate) {
  return _mm256_div_pd(_mm256_mul_pd(broadcast(rate.signal), g),
                       _mm256_fmadd_pd(broadcast(rate.interference), g, broadcast(1.0)));
}

// Per-lane Neumaier sums, reduced with the scalar compensated sum.
struct LaneSum {
  __m256d s = _mm256_setzero_pd();
  __m256d c = _mm256_setzero_pd();

  void add(__m256d x) {
    const __m256d t = _mm256_add_pd(s, x);
    const __m256d sign_mask = broadcast(-0.0);
    const __m256d s_bigger =
        _mm256_cmp_pd(_mm256_andnot_pd(sign_mask, s), _mm256_andnot_pd(sign_mask, x), _CMP_GE_OQ);
    const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    const __m256d when_x = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(when_x, when_s, s_bigger));
    s = t;
  }

  double value() const {
    alignas(32) std::array<double, 4> ls;
    alignas(32) std::array<double, 4> lc;
    _mm256_store_pd(ls.data(), s);
    _mm256_store_pd(lc.data(), c);
    CompensatedSum total;
    for (double v : ls) total.add(v);
    for (double v : lc) total.add(v);
    return total.value();
  }
};

// Tails are padded with g = 0, where both functionals vanish.
inline __m256d load_padded(std::span<const double> gains, std::size_t i) {
  if (i + 4 <= gains.size()) return _mm256_loadu_pd(gains.data() + i);
  alignas(32) std::array<double, 4> tail{};
  std::memcpy(tail.data(), gains.data() + i, (gains.size() - i) * sizeof(double));
  return _mm256_load_pd(tail.data());
}

MomentSums ec_terms(std::span<const double> gains, RateModel rate, double exponent, double shift) {
  LaneSum sum, sum_sq;
  const __m256d neg_exponent = broadcast(-exponent);
  const __m256d vshift = broadcast(shift);
  for (std::size_t i = 0; i < gains.size(); i += 4) {
    const __m256d g = load_padded(gains, i);
    __m256d y = vexpm1(_mm256_fmadd_pd(neg_exponent, vlog1p(vrate(g, rate)), vshift));
    if (i + 4 > gains.size()) {
      // a padded g = 0 gives expm1(shift), which is zero only without a shift
      const std::size_t valid = gains.size() - i;
      const __m256i lane = _mm256_set_epi64x(3, 2, 1, 0);
      const __m256d keep = _mm256_castsi256_pd(_mm256_cmpgt_epi64(_mm256_set1_epi64x(static_cast<long long>(valid)), lane));
      y = _mm256_and_pd(y, keep);
    }
    sum.add(y);
    sum_sq.add(_mm256_mul_pd(y, y));
  }
  return {sum.value(), sum_sq.value(), gains.size()};
}

MomentSums log2_rate(std::span<const double> gains, RateModel rate) {
  LaneSum sum, sum_sq;
  for (std::size_t i = 0; i < gains.size(); i += 4) {
    const __m256d r = _mm256_mul_pd(vlog1p(vrate(load_padded(gains, i), rate)), broadcast(kLog2e));
    sum.add(r);
    sum_sq.add(_mm256_mul_pd(r, r));
  }
  return {sum.value(), sum_sq.value(), gains.size()};
}

void exponential(std::span<const std::uint64_t> bits, double mean, std::span<double> out) {
  const __m256d neg_mean = broadcast(-mean);
  const __m256i one_exponent = _mm256_set1_epi64x(0x3FF0000000000000LL);
  std::size_t i = 0;
  for (; i + 4 <= bits.size(); i += 4) {
    const __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits.data() + i));
    const __m256d one_two = _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(b, 12), one_exponent));
    const __m256d u = _mm256_sub_pd(broadcast(2.0), one_two);
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(neg_mean, vlog(u)));
  }
  if (i < bits.size()) {
    alignas(32) std::array<std::uint64_t, 4> tail{};
    alignas(32) std::array<double, 4> result{};
    std::memcpy(tail.data(), bits.data() + i, (bits.size() - i) * sizeof(std::uint64_t));
    const __m256i b = _mm256_load_si256(reinterpret_cast<const __m256i*>(tail.data()));
    const __m256d one_two = _mm256_castsi256_pd(_mm256_or_si256(_mm256_srli_epi64(b, 12), one_exponent));
    _mm256_store_pd(result.data(), _mm256_mul_pd(neg_mean, vlog(_mm256_sub_pd(broadcast(2.0), one_two))));
    std::memcpy(out.data() + i, result.data(), (bits.size() - i) * sizeof(double));
  }
}

void minimum(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  std::size_t i = 0;
  for (; i + 4 <= a.size(); i += 4) {
    _mm256_storeu_pd(out.data() + i, _mm256_min_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i)));
  }
  for (; i < a.size(); ++i) out[i] = b[i] < a[i] ? b[i] : a[i];
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{ec_terms, log2_rate, exponential, minimum};
  return &table;
}

}  // namespace gscnoma::simd::detail
