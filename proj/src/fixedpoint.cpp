#include "qbm/fixedpoint.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qbm/error.hpp"

namespace qbm {

namespace {

thread_local std::uint64_t mul_calls = 0;

void require_same_format(const FxNum& a, const FxNum& b) {
  if (!(a.format == b.format)) {
    throw Error(ErrorKind::InvalidFormat, "operands have different fixed-point formats");
  }
}

FxNum checked(__int128 raw, const FixedPointFormat& fmt, const char* op) {
  const __int128 lim = fmt.max_raw();
  if (raw > lim || raw < -lim) {
    throw Error(ErrorKind::Overflow, std::string(op) + " leaves the (" +
                                         std::to_string(fmt.word_bits) + "," +
                                         std::to_string(fmt.int_bits) + ") range");
  }
  return FxNum{fmt, static_cast<std::int64_t>(raw)};
}

}  // namespace

FixedPointFormat::FixedPointFormat(int word_bits_, int int_bits_)
    : word_bits(word_bits_), int_bits(int_bits_) {
  if (int_bits < 1 || int_bits >= word_bits || word_bits > kMaxWordBits) {
    throw Error(ErrorKind::InvalidFormat,
                "need 1 <= int_bits < word_bits <= 62, got word_bits=" +
                    std::to_string(word_bits) + " int_bits=" + std::to_string(int_bits));
  }
}

double FixedPointFormat::resolution() const noexcept { return std::ldexp(1.0, -frac_bits()); }

double FixedPointFormat::limit() const noexcept { return std::ldexp(1.0, int_bits - 1); }

double FxNum::value() const noexcept {
  return std::ldexp(static_cast<double>(raw), -format.frac_bits());
}

FxNum fx_from_raw(std::int64_t raw, const FixedPointFormat& fmt) {
  return checked(raw, fmt, "fx_from_raw");
}

FxNum fx_from_real(double x, const FixedPointFormat& fmt) {
  if (!std::isfinite(x) || std::fabs(x) >= fmt.limit()) {
    throw Error(ErrorKind::Overflow,
                "value " + std::to_string(x) + " not representable with " +
                    std::to_string(fmt.int_bits) + " integer bits");
  }
  const double scaled = std::floor(std::ldexp(x, fmt.frac_bits()));
  return checked(static_cast<__int128>(scaled), fmt, "fx_from_real");
}

FxNum fx_add(const FxNum& a, const FxNum& b) {
  require_same_format(a, b);
  return checked(static_cast<__int128>(a.raw) + b.raw, a.format, "fx_add");
}

FxNum fx_sub(const FxNum& a, const FxNum& b) {
  require_same_format(a, b);
  return checked(static_cast<__int128>(a.raw) - b.raw, a.format, "fx_sub");
}

FxNum fx_neg(const FxNum& a) { return FxNum{a.format, -a.raw}; }

FxNum fx_mul(const FxNum& a, const FxNum& b) {
  require_same_format(a, b);
  ++mul_calls;
  const __int128 prod = static_cast<__int128>(a.raw) * b.raw;
  // Arithmetic shift on a signed 128-bit value floors.
  return checked(prod >> a.format.frac_bits(), a.format, "fx_mul");
}

FxNum fx_mul_int(const FxNum& a, std::int64_t k) {
  return checked(static_cast<__int128>(a.raw) * k, a.format, "fx_mul_int");
}

FxNum fx_shift(const FxNum& a, int k) {
  if (k >= 0) {
    if (k >= 64) {
      if (a.raw == 0) return a;
      throw Error(ErrorKind::Overflow, "fx_shift by " + std::to_string(k));
    }
    return checked(static_cast<__int128>(a.raw) << k, a.format, "fx_shift");
  }
  if (-k >= 63) return FxNum{a.format, a.raw < 0 ? -1 : 0};
  return FxNum{a.format, a.raw >> (-k)};
}

int leading_bit_index(const FxNum& a) {
  if (a.raw <= 0) {
    throw Error(ErrorKind::NonPositiveInput, "leading_bit_index needs a positive argument");
  }
  // value = raw * 2^-f; ceil(log2 raw) = bit_width(raw - 1) for raw >= 1.
  const auto r = static_cast<std::uint64_t>(a.raw);
  return static_cast<int>(std::bit_width(r - 1)) - a.format.frac_bits();
}

std::uint64_t fx_mul_calls() noexcept { return mul_calls; }

}  // namespace qbm
