#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "qbm/error.hpp"

namespace qbm::kernels {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{Isa::Scalar, detail::fx_scale_mul_scalar,
                                 detail::raw_to_real_scalar, detail::scale_f64_scalar,
                                 detail::moments_scalar};
  return table;
}

const KernelTable* avx2_table() noexcept {
#if defined(QBM_HAVE_AVX2)
  static const KernelTable table{Isa::Avx2, detail::fx_scale_mul_avx2, detail::raw_to_real_avx2,
                                 detail::scale_f64_avx2, detail::moments_avx2};
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() noexcept {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("QBM_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
    if (const KernelTable* t = avx2_table()) return *t;
    return scalar_table();
  }();
  return chosen;
}

namespace {

void require_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorKind::DimensionMismatch, "kernel input/output sizes differ");
}

}  // namespace

bool fx_scale_mul(std::int64_t scale, std::span<const std::int64_t> in,
                  std::span<std::int64_t> out, int frac_bits, std::int64_t max_raw) {
  require_sizes(in.size(), out.size());
  return active().fx_scale_mul(scale, in.data(), out.data(), in.size(), frac_bits, max_raw);
}

void raw_to_real(std::span<const std::int64_t> in, std::span<double> out, double resolution) {
  require_sizes(in.size(), out.size());
  active().raw_to_real(in.data(), out.data(), in.size(), resolution);
}

void scale_f64(double scale, std::span<const double> in, std::span<double> out) {
  require_sizes(in.size(), out.size());
  active().scale_f64(scale, in.data(), out.data(), in.size());
}

Moments moments(std::span<const double> x, std::span<const double> y) {
  require_sizes(x.size(), y.size());
  return active().moments(x.data(), y.data(), x.size());
}

}  // namespace qbm::kernels
