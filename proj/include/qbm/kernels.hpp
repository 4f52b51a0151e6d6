#pragma once

// Data-parallel inner loops behind the grid generator and the sample
// statistics. Each kernel has a scalar reference and an AVX2 variant; the
// variants are bit-identical to the reference (the scalar code reproduces the
// vector lane order), so results never depend on the selected ISA.
//
// Selection happens once at first use: AVX2 when the CPU reports it, unless
// the environment variable QBM_SIMD is set to "scalar".

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace qbm::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa) noexcept;

struct Moments {
  double sum_x = 0.0;
  double sum_y = 0.0;
  double sum_xx = 0.0;
  double sum_yy = 0.0;
  double sum_xy = 0.0;
  std::size_t count = 0;
};

struct KernelTable {
  Isa isa;
  // out[i] = floor(scale * in[i] / 2^frac_bits). Returns false when any
  // result leaves [-max_raw, max_raw] (outputs are still written).
  bool (*fx_scale_mul)(std::int64_t scale, const std::int64_t* in, std::int64_t* out,
                       std::size_t n, int frac_bits, std::int64_t max_raw);
  // out[i] = in[i] * resolution, for |in[i]| < 2^51.
  void (*raw_to_real)(const std::int64_t* in, double* out, std::size_t n, double resolution);
  // out[i] = scale * in[i].
  void (*scale_f64)(double scale, const double* in, double* out, std::size_t n);
  // Raw sums over paired samples, accumulated in four interleaved lanes.
  Moments (*moments)(const double* x, const double* y, std::size_t n);
};

const KernelTable& scalar_table() noexcept;
// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;
const KernelTable& active() noexcept;

// Span conveniences over the active table.
bool fx_scale_mul(std::int64_t scale, std::span<const std::int64_t> in,
                  std::span<std::int64_t> out, int frac_bits, std::int64_t max_raw);
void raw_to_real(std::span<const std::int64_t> in, std::span<double> out, double resolution);
void scale_f64(double scale, std::span<const double> in, std::span<double> out);
Moments moments(std::span<const double> x, std::span<const double> y);

}  // namespace qbm::kernels
