#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qbm/error.hpp"
#include "qbm/kernels.hpp"

using namespace qbm::kernels;

namespace {

const std::vector<std::size_t> kLengths{0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 1000, 1027};

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

std::vector<std::int64_t> random_raw(std::size_t n, std::int64_t bound, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> d(-bound, bound);
  std::vector<std::int64_t> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<double> random_real(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.3, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

#define REQUIRE_AVX2()                                     \
  if (avx2_table() == nullptr) GTEST_SKIP() << "no AVX2"; \
  const KernelTable& vec = *avx2_table()

TEST(Kernels, ScalarReferenceSemantics) {
  const auto& s = scalar_table();
  EXPECT_EQ(s.isa, Isa::Scalar);
  const std::vector<std::int64_t> in{7, -7, 1, -1, 0, 1000};
  std::vector<std::int64_t> out(in.size());
  // floor(3 * x / 4).
  EXPECT_TRUE(s.fx_scale_mul(3, in.data(), out.data(), in.size(), 2, 1 << 20));
  EXPECT_EQ(out, (std::vector<std::int64_t>{5, -6, 0, -1, 0, 750}));
  EXPECT_FALSE(s.fx_scale_mul(3, in.data(), out.data(), in.size(), 2, 749));
  EXPECT_EQ(out.back(), 750);  // outputs still written
  EXPECT_EQ(to_string(Isa::Avx2), "avx2");
}

TEST(Kernels, FxScaleMulBitExact) {
  REQUIRE_AVX2();
  EXPECT_EQ(vec.isa, Isa::Avx2);
  for (std::size_t n : kLengths) {
    for (int frac : {0, 3, 12, 30}) {
      for (std::int64_t scale : {std::int64_t{1}, std::int64_t{-3}, std::int64_t{92682},
                                 std::int64_t{-(1LL << 31) + 5}}) {
        const auto in = random_raw(n, (1LL << 31) - 1, n * 131 + frac);
        std::vector<std::int64_t> a(n), b(n);
        const std::int64_t max_raw = (1LL << 40) - 1;
        const bool oa = scalar_table().fx_scale_mul(scale, in.data(), a.data(), n, frac, max_raw);
        const bool ob = vec.fx_scale_mul(scale, in.data(), b.data(), n, frac, max_raw);
        EXPECT_EQ(a, b) << n << " " << frac << " " << scale;
        EXPECT_EQ(oa, ob) << n << " " << frac << " " << scale;
      }
    }
  }
}

TEST(Kernels, FxScaleMulOverflowFlagAgrees) {
  REQUIRE_AVX2();
  for (std::size_t n : kLengths) {
    if (n == 0) continue;
    // A single out-of-range element at every position, including the tail.
    for (std::size_t pos : {std::size_t{0}, n / 2, n - 1}) {
      std::vector<std::int64_t> in(n, 3);
      in[pos] = 5000;
      std::vector<std::int64_t> a(n), b(n);
      for (std::int64_t scale : {std::int64_t{4}, std::int64_t{-4}}) {
        const bool oa = scalar_table().fx_scale_mul(scale, in.data(), a.data(), n, 2, 4000);
        const bool ob = vec.fx_scale_mul(scale, in.data(), b.data(), n, 2, 4000);
        EXPECT_FALSE(oa);
        EXPECT_EQ(oa, ob) << n << " " << pos;
        EXPECT_EQ(a, b);
      }
      const bool fine = vec.fx_scale_mul(4, in.data(), b.data(), n, 2, 5000);
      EXPECT_TRUE(fine);
    }
  }
}

TEST(Kernels, RawToRealBitExact) {
  REQUIRE_AVX2();
  for (std::size_t n : kLengths) {
    const auto in = random_raw(n, (1LL << 51) - 1, n + 5);
    std::vector<double> a(n), b(n);
    for (double res : {1.0, 0.0625, std::ldexp(1.0, -40), 0.1}) {
      scalar_table().raw_to_real(in.data(), a.data(), n, res);
      vec.raw_to_real(in.data(), b.data(), n, res);
      for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(a[i], b[i])) << n << " " << i;
    }
  }
}

TEST(Kernels, ScaleBitExact) {
  REQUIRE_AVX2();
  for (std::size_t n : kLengths) {
    const auto in = random_real(n, n);
    std::vector<double> a(n), b(n);
    for (double s : {0.6, -1.0 / 3.0, 1e300}) {
      scalar_table().scale_f64(s, in.data(), a.data(), n);
      vec.scale_f64(s, in.data(), b.data(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_TRUE(same_bits(a[i], b[i])) << n << " " << i;
    }
  }
}

TEST(Kernels, MomentsBitExact) {
  REQUIRE_AVX2();
  for (std::size_t n : kLengths) {
    const auto x = random_real(n, 2 * n + 1);
    const auto y = random_real(n, 2 * n + 2);
    const auto a = scalar_table().moments(x.data(), y.data(), n);
    const auto b = vec.moments(x.data(), y.data(), n);
    EXPECT_EQ(a.count, b.count);
    EXPECT_TRUE(same_bits(a.sum_x, b.sum_x)) << n;
    EXPECT_TRUE(same_bits(a.sum_y, b.sum_y)) << n;
    EXPECT_TRUE(same_bits(a.sum_xx, b.sum_xx)) << n;
    EXPECT_TRUE(same_bits(a.sum_yy, b.sum_yy)) << n;
    EXPECT_TRUE(same_bits(a.sum_xy, b.sum_xy)) << n;
  }
}

TEST(Kernels, MomentsMatchNaiveSums) {
  const auto x = random_real(1001, 11);
  const auto y = random_real(1001, 12);
  const auto m = moments(x, y);
  long double sx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sxy += x[i] * y[i];
  EXPECT_NEAR(m.sum_x, static_cast<double>(sx), 1e-10);
  EXPECT_NEAR(m.sum_xy, static_cast<double>(sxy), 1e-9);
  EXPECT_EQ(m.count, 1001u);
}

TEST(Kernels, SpanSizeMismatch) {
  std::vector<double> in(4), out(3);
  EXPECT_THROW(scale_f64(1.0, in, out), qbm::Error);
  std::vector<std::int64_t> raw(4), raw_out(5);
  EXPECT_THROW(fx_scale_mul(1, raw, raw_out, 0, 10), qbm::Error);
}
