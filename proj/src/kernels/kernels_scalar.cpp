#include "kernels_impl.hpp"

namespace qbm::kernels::detail {

bool fx_scale_mul_scalar(std::int64_t scale, const std::int64_t* in, std::int64_t* out,
                         std::size_t n, int frac_bits, std::int64_t max_raw) {
  bool ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    const __int128 prod = static_cast<__int128>(scale) * in[i];
    const __int128 r = prod >> frac_bits;
    ok &= (r <= max_raw) & (r >= -max_raw);
    out[i] = static_cast<std::int64_t>(r);
  }
  return ok;
}

void raw_to_real_scalar(const std::int64_t* in, double* out, std::size_t n, double resolution) {
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(in[i]) * resolution;
}

void scale_f64_scalar(double scale, const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = scale * in[i];
}

Moments moments_scalar(const double* x, const double* y, std::size_t n) {
  // Four lanes, combined as (l0 + l1) + (l2 + l3), then the tail in order.
  double sx[4] = {}, sy[4] = {}, sxx[4] = {}, syy[4] = {}, sxy[4] = {};
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    for (std::size_t l = 0; l < 4; ++l) {
      const double a = x[i + l];
      const double b = y[i + l];
      sx[l] += a;
      sy[l] += b;
      const double aa = a * a;
      const double bb = b * b;
      const double ab = a * b;
      sxx[l] += aa;
      syy[l] += bb;
      sxy[l] += ab;
    }
  }
  auto fold = [](const double* v) { return (v[0] + v[1]) + (v[2] + v[3]); };
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
