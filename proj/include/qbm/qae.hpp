#pragma once

// Amplitude estimation simulated exactly in the two-dimensional invariant
// subspace: the Grover iterate is a rotation by 2*phi with sin^2(phi) = a, so
// phase estimation with an M-point register has a closed-form outcome
// distribution. Estimates are medians over independent repetitions.

#include <cstdint>
#include <vector>

namespace qbm {

struct QaeConfig {
  int grover_power = 64;  // t; the phase register uses the next power of two
  int repetitions = 15;   // odd, for the median
  double delta = 0.05;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Smallest power of two >= max(t, 2).
int phase_register_size(int grover_power);

// Odd repetition count making the median fail with probability <= delta,
// from Hoeffding with single-shot success >= 8/pi^2.
int repetitions_for_delta(double delta);

// P(y) for y in [0, M): the average of the Fejer kernels centred on the two
// eigenphases +-2 phi.
std::vector<double> qae_outcome_distribution(double a, int M);

// sin^2(pi y / M), symmetrised so that y and M - y give the same value.
double qae_amplitude(int y, int M);

double qae_estimate(double a, const QaeConfig& cfg);

// C (sqrt(a)/t + 1/t^2).
double qae_error_bound(double a, int t, double C);

// The constant C used throughout; calibrated, see the test suite.
inline constexpr double kQaeConstant = 5.0;

// Independent child seed for stream `stream` of `seed` (splitmix64).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace qbm
