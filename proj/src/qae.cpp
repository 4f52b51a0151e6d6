#include "qbm/qae.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "qbm/error.hpp"

namespace qbm {

namespace {

// Fejer kernel |(1/M) sum_x e^{i x d}|^2.
double fejer(double d, int M) {
  const double den = std::sin(d / 2.0);
  if (std::fabs(den) < 1e-300) return 1.0;
  const double num = std::sin(M * d / 2.0);
  return (num * num) / (static_cast<double>(M) * M * den * den);
}

// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void QaeConfig::validate() const {
  if (grover_power < 1) throw Error(ErrorKind::InvalidArgument, "grover_power must be >= 1");
  if (repetitions < 1 || repetitions % 2 == 0) {
    throw Error(ErrorKind::InvalidArgument, "repetitions must be odd and positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "need 0 < delta < 1");
}

int phase_register_size(int grover_power) {
  if (grover_power < 1) throw Error(ErrorKind::InvalidArgument, "grover_power must be >= 1");
  if (grover_power > (1 << 24)) throw Error(ErrorKind::InvalidArgument, "grover_power too large");
  return std::max(2, static_cast<int>(std::bit_ceil(static_cast<unsigned>(grover_power))));
}

int repetitions_for_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "need 0 < delta < 1");
  // 2 (1/2 - (1 - 8/pi^2))^2
  const double rate = 2.0 * std::pow(8.0 / (std::numbers::pi * std::numbers::pi) - 0.5, 2);
  int r = std::max(1, static_cast<int>(std::ceil(std::log(1.0 / delta) / rate)));
  if (r % 2 == 0) ++r;
  return r;
}

std::vector<double> qae_outcome_distribution(double a, int M) {
  if (!(a >= 0.0 && a <= 1.0)) {
    throw Error(ErrorKind::BadAmplitude, "amplitude " + std::to_string(a) + " outside [0, 1]");
  }
  if (M < 2 || !std::has_single_bit(static_cast<unsigned>(M))) {
    throw Error(ErrorKind::InvalidArgument, "M must be a power of two >= 2");
  }
  const double phi = std::asin(std::sqrt(a));
  std::vector<double> p(static_cast<std::size_t>(M));
  for (int y = 0; y < M; ++y) {
    const double grid = 2.0 * std::numbers::pi * y / M;
    p[static_cast<std::size_t>(y)] = 0.5 * (fejer(2.0 * phi - grid, M) + fejer(-2.0 * phi - grid, M));
  }
  return p;
}

double qae_amplitude(int y, int M) {
  const int folded = std::min(y, M - y);
  const double s = std::sin(std::numbers::pi * folded / M);
  return s * s;
}

double qae_estimate(double a, const QaeConfig& cfg) {
  cfg.validate();
  if (!(a >= 0.0 && a <= 1.0)) {
    throw Error(ErrorKind::BadAmplitude, "amplitude " + std::to_string(a) + " outside [0, 1]");
  }
  if (a == 0.0) return 0.0;
  const int M = phase_register_size(cfg.grover_power);
  const std::vector<double> p = qae_outcome_distribution(a, M);
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];

  std::vector<double> estimates(static_cast<std::size_t>(cfg.repetitions));
  for (int r = 0; r < cfg.repetitions; ++r) {
    std::mt19937_64 rng(derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(r)));
    const double target = unit_uniform(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it == cdf.end()) --it;
    estimates[static_cast<std::size_t>(r)] = qae_amplitude(static_cast<int>(it - cdf.begin()), M);
  }
  auto mid = estimates.begin() + cfg.repetitions / 2;
  std::nth_element(estimates.begin(), mid, estimates.end());
  return *mid;
}

double qae_error_bound(double a, int t, double C) {
  if (t < 1) throw Error(ErrorKind::InvalidArgument, "t must be >= 1");
  if (!(C > 0.0)) throw Error(ErrorKind::InvalidArgument, "C must be positive");
  const double tt = static_cast<double>(t);
  return C * (std::sqrt(std::max(a, 0.0)) / tt + 1.0 / (tt * tt));
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace qbm
