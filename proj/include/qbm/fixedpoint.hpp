#pragma once

// Two's-complement fixed-point words with `word_bits` total bits, of which
// `int_bits` sit before the binary point (the top one acting as sign).
// Every operation lands on the 2^(int_bits - word_bits) grid or throws
// ErrorKind::Overflow; products are truncated toward -infinity.

#include <compare>
#include <cstdint>

namespace qbm {

struct FixedPointFormat {
  int word_bits = 16;
  int int_bits = 4;

  // Largest supported word. Products are formed in 128-bit intermediates.
  static constexpr int kMaxWordBits = 62;

  FixedPointFormat() = default;
  FixedPointFormat(int word_bits, int int_bits);

  int frac_bits() const noexcept { return word_bits - int_bits; }
  double resolution() const noexcept;
  // Largest magnitude raw word; the range is symmetric.
  std::int64_t max_raw() const noexcept { return (std::int64_t{1} << (word_bits - 1)) - 1; }
  // Exclusive bound on |value|: 2^(int_bits - 1).
  double limit() const noexcept;

  friend bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;
};

struct FxNum {
  FixedPointFormat format;
  std::int64_t raw = 0;

  double value() const noexcept;

  friend bool operator==(const FxNum&, const FxNum&) = default;
};

// Checked construction from a raw word.
FxNum fx_from_raw(std::int64_t raw, const FixedPointFormat& fmt);

// Truncates toward -infinity onto the format grid.
FxNum fx_from_real(double x, const FixedPointFormat& fmt);

FxNum fx_add(const FxNum& a, const FxNum& b);
FxNum fx_sub(const FxNum& a, const FxNum& b);
FxNum fx_neg(const FxNum& a);

// floor(a * b / 2^frac_bits), computed exactly.
FxNum fx_mul(const FxNum& a, const FxNum& b);

// Exact product with an integer register (no rescaling).
FxNum fx_mul_int(const FxNum& a, std::int64_t k);

// a * 2^k; left shifts are exact, right shifts truncate toward -infinity.
FxNum fx_shift(const FxNum& a, int k);

// ceil(log2(value(a))), so value(a) / 2^k lies in (1/2, 1].
int leading_bit_index(const FxNum& a);

// Number of fx_mul calls made on the current thread; lets tests check the
// multiplication count of composite evaluations.
std::uint64_t fx_mul_calls() noexcept;

}  // namespace qbm
