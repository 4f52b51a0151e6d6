#pragma once

#include <cstddef>
#include <cstdint>

#include "qbm/kernels.hpp"

namespace qbm::kernels::detail {

bool fx_scale_mul_scalar(std::int64_t scale, const std::int64_t* in, std::int64_t* out,
                         std::size_t n, int frac_bits, std::int64_t max_raw);
void raw_to_real_scalar(const std::int64_t* in, double* out, std::size_t n, double resolution);
void scale_f64_scalar(double scale, const double* in, double* out, std::size_t n);
Moments moments_scalar(const double* x, const double* y, std::size_t n);

#if defined(QBM_HAVE_AVX2)
bool fx_scale_mul_avx2(std::int64_t scale, const std::int64_t* in, std::int64_t* out,
                       std::size_t n, int frac_bits, std::int64_t max_raw);
void raw_to_real_avx2(const std::int64_t* in, double* out, std::size_t n, double resolution);
void scale_f64_avx2(double scale, const double* in, double* out, std::size_t n);
Moments moments_avx2(const double* x, const double* y, std::size_t n);
#endif

}  // namespace qbm::kernels::detail
