#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "qbm/error.hpp"
#include "qbm/qae.hpp"

using namespace qbm;

namespace {

// Direct evaluation of the phase-estimation sum for one eigenphase.
double fejer_direct(double phase, int M, int y) {
  std::complex<double> acc = 0.0;
  for (int x = 0; x < M; ++x) {
    acc += std::polar(1.0, x * (phase - 2 * std::numbers::pi * y / M));
  }
  return std::norm(acc / static_cast<double>(M));
}

QaeConfig config(int t, int reps, std::uint64_t seed) {
  QaeConfig c;
  c.grover_power = t;
  c.repetitions = reps;
  c.rng_seed = seed;
  return c;
}

}  // namespace

TEST(QaeDistribution, Examples) {
  auto p = qae_outcome_distribution(0.0, 16);
  EXPECT_NEAR(p[0], 1.0, 1e-12);
  p = qae_outcome_distribution(1.0, 16);
  EXPECT_NEAR(p[8], 1.0, 1e-12);
  p = qae_outcome_distribution(0.5, 4);
  EXPECT_NEAR(p[1], 0.5, 1e-12);
  EXPECT_NEAR(p[3], 0.5, 1e-12);
  EXPECT_NEAR(p[0], 0.0, 1e-12);
  EXPECT_NEAR(p[2], 0.0, 1e-12);
  EXPECT_THROW(qae_outcome_distribution(1.2, 8), Error);
  EXPECT_THROW(qae_outcome_distribution(0.5, 12), Error);
}

TEST(QaeDistribution, MatchesDirectSumAndNormalises) {
  for (double a : {0.013, 0.3, 0.5, 0.77, 0.999}) {
    for (int M : {2, 8, 64, 512}) {
      const auto p = qae_outcome_distribution(a, M);
      const double phi = std::asin(std::sqrt(a));
      EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
      for (int y = 0; y < M; y += std::max(1, M / 16)) {
        const double expect = 0.5 * (fejer_direct(2 * phi, M, y) + fejer_direct(-2 * phi, M, y));
        EXPECT_NEAR(p[static_cast<std::size_t>(y)], expect, 1e-10) << a << " " << M << " " << y;
      }
    }
  }
}

TEST(QaeDistribution, MostProbableOutcomeIsNearTruth) {
  // The mode sits within half a grid step of the phase, Delta <= pi / (2M),
  // so |sin^2(phi + Delta) - sin^2(phi)| <= sin(Delta) (2 sqrt(a(1-a)) + sin(Delta)).
  for (int k = 1; k <= 99; ++k) {
    const double a = 0.01 * k;
    for (int M = 8; M <= 1024; M *= 2) {
      const auto p = qae_outcome_distribution(a, M);
      const int y = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
      const double s = std::sin(std::numbers::pi / (2 * M));
      const double bound = s * (2 * std::sqrt(a * (1 - a)) + s);
      ASSERT_LE(std::fabs(qae_amplitude(y, M) - a), bound + 1e-12) << a << " " << M;
    }
  }
}

TEST(QaeEstimate, Examples) {
  EXPECT_EQ(qae_estimate(0.0, config(64, 15, 1)), 0.0);
  int hits = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    if (std::fabs(qae_estimate(0.25, config(1024, 15, s)) - 0.25) <=
        qae_error_bound(0.25, 1024, 5.0)) {
      ++hits;
    }
  }
  EXPECT_GE(hits, 99);
  const double a = std::pow(std::sin(std::numbers::pi / 8), 2);
  for (std::uint64_t s = 0; s < 20; ++s) {
    EXPECT_NEAR(qae_estimate(a, config(8, 1, s)), a, 1e-15);
  }
}

TEST(QaeEstimate, ReproducibleAndRoundsUp) {
  EXPECT_EQ(qae_estimate(0.3, config(100, 7, 42)), qae_estimate(0.3, config(100, 7, 42)));
  EXPECT_EQ(phase_register_size(100), 128);
  EXPECT_EQ(phase_register_size(1), 2);
  EXPECT_EQ(phase_register_size(64), 64);
  EXPECT_THROW(config(8, 4, 0).validate(), Error);
}

TEST(QaeEstimate, RmsErrorScalesLikeOneOverM) {
  std::vector<double> rms;
  for (int M = 16; M <= 4096; M *= 2) {
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 500; ++s) {
      const double e = qae_estimate(0.3, config(M, 15, derive_seed(s, M))) - 0.3;
      acc += e * e;
    }
    rms.push_back(std::sqrt(acc / 500));
  }
  // The median snaps to the nearest grid amplitude, and the grids are nested,
  // so RMS falls in steps; the O(1/M) envelope is what holds at every M.
  for (std::size_t i = 0; i < rms.size(); ++i) {
    const int M = 16 << i;
    EXPECT_LE(rms[i], qae_error_bound(0.3, M, kQaeConstant)) << M;
  }
  EXPECT_LE(rms.back(), rms.front() * 16.0 / 4096.0 * 8.0);
}

TEST(QaeEstimate, MedianAmplification) {
  const double a = 0.3;
  const int M = 64;
  std::vector<double> fail;
  for (int reps : {1, 3, 5, 7}) {
    int bad = 0;
    for (std::uint64_t s = 0; s < 4000; ++s) {
      if (std::fabs(qae_estimate(a, config(M, reps, derive_seed(s, reps))) - a) >
          qae_error_bound(a, M, 1.0)) {
        ++bad;
      }
    }
    fail.push_back(bad / 4000.0);
  }
  for (std::size_t i = 1; i < fail.size(); ++i) {
    if (fail[i - 1] > 0.01) {
      EXPECT_LE(fail[i], 0.5 * fail[i - 1] + 0.005) << i;
    }
  }
}

TEST(QaeErrorBound, Examples) {
  EXPECT_DOUBLE_EQ(qae_error_bound(0.0, 10, 1.0), 0.01);
  EXPECT_DOUBLE_EQ(qae_error_bound(1.0, 10, 1.0), 0.11);
  double prev = 1e9;
  for (int t = 1; t < 2000; t *= 3) {
    const double b = qae_error_bound(0.4, t, 5.0);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(RepetitionsForDelta, OddAndGrowing) {
  int prev = 0;
  for (double d : {0.5, 0.1, 0.05, 0.01, 1e-4}) {
    const int r = repetitions_for_delta(d);
    EXPECT_EQ(r % 2, 1);
    EXPECT_GE(r, prev);
    prev = r;
  }
}

TEST(DeriveSeed, StreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(9, 3), derive_seed(9, 3));
}
