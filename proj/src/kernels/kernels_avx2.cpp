// Compiled with -mavx2 (no FMA, so products and sums round exactly like the
// scalar reference).

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace qbm::kernels::detail {

namespace {

constexpr std::int64_t kInt32Max = 0x7fffffff;

// Arithmetic right shift of 64-bit lanes; AVX2 only has the logical one.
inline __m256i srai_epi64(__m256i x, int shift) {
  const __m128i count = _mm_cvtsi32_si128(shift);
  const __m128i fill_count = _mm_cvtsi32_si128(64 - shift);
  const __m256i neg = _mm256_cmpgt_epi64(_mm256_setzero_si256(), x);
  return _mm256_or_si256(_mm256_srl_epi64(x, count), _mm256_sll_epi64(neg, fill_count));
}

}  // namespace

bool fx_scale_mul_avx2(std::int64_t scale, const std::int64_t* in, std::int64_t* out,
                       std::size_t n, int frac_bits, std::int64_t max_raw) {
  // _mm256_mul_epi32 multiplies the signed low halves, so operands must fit
  // in 32 bits; wider words take the reference path.
  if (max_raw > kInt32Max || scale > kInt32Max || scale < -kInt32Max) {
    return fx_scale_mul_scalar(scale, in, out, n, frac_bits, max_raw);
  }
  const __m256i vscale = _mm256_set1_epi64x(scale);
  const __m256i hi = _mm256_set1_epi64x(max_raw);
  const __m256i lo = _mm256_set1_epi64x(-max_raw);
  __m256i bad = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    const __m256i prod = _mm256_mul_epi32(v, vscale);
    const __m256i r = srai_epi64(prod, frac_bits);
    bad = _mm256_or_si256(bad, _mm256_cmpgt_epi64(r, hi));
    bad = _mm256_or_si256(bad, _mm256_cmpgt_epi64(lo, r));
    _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), r);
  }
  bool ok = _mm256_testz_si256(bad, bad) != 0;
  if (i < n) ok &= fx_scale_mul_scalar(scale, in + i, out + i, n - i, frac_bits, max_raw);
  return ok;
}

void raw_to_real_avx2(const std::int64_t* in, double* out, std::size_t n, double resolution) {
  // For |x| < 2^51, the bits of (x + bits(1.5 * 2^52)) read as a double equal
  // 1.5 * 2^52 + x exactly.
  const __m256i magic_i = _mm256_castpd_si256(_mm256_set1_pd(6755399441055744.0));
  const __m256d magic_d = _mm256_set1_pd(6755399441055744.0);
  const __m256d vres = _mm256_set1_pd(resolution);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(in + i));
    const __m256d d = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_add_epi64(v, magic_i)), magic_d);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, vres));
  }
  if (i < n) raw_to_real_scalar(in + i, out + i, n - i, resolution);
}

void scale_f64_avx2(double scale, const double* in, double* out, std::size_t n) {
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(s, _mm256_loadu_pd(in + i)));
  }
  if (i < n) scale_f64_scalar(scale, in + i, out + i, n - i);
}

Moments moments_avx2(const double* x, const double* y, std::size_t n) {
  __m256d sx = _mm256_setzero_pd(), sy = _mm256_setzero_pd();
  __m256d sxx = _mm256_setzero_pd(), syy = _mm256_setzero_pd(), sxy = _mm256_setzero_pd();
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m256d a = _mm256_loadu_pd(x + i);
    const __m256d b = _mm256_loadu_pd(y + i);
    sx = _mm256_add_pd(sx, a);
    sy = _mm256_add_pd(sy, b);
    sxx = _mm256_add_pd(sxx, _mm256_mul_pd(a, a));
    syy = _mm256_add_pd(syy, _mm256_mul_pd(b, b));
    sxy = _mm256_add_pd(sxy, _mm256_mul_pd(a, b));
  }
  auto fold = [](__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    return (t[0] + t[1]) + (t[2] + t[3]);
  };
  Moments m{fold(sx), fold(sy), fold(sxx), fold(syy), fold(sxy), n};
  for (std::size_t i = n4; i < n; ++i) {
    m.sum_x += x[i];
    m.sum_y += y[i];
    const double aa = x[i] * x[i];
    const double bb = y[i] * y[i];
    const double ab = x[i] * y[i];
    m.sum_xx += aa;
    m.sum_yy += bb;
    m.sum_xy += ab;
  }
  return m;
}

}  // namespace qbm::kernels::detail
