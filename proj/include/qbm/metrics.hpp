#pragma once

// Sample-quality metrics for a Box-Muller multiset: relative error of
// E[exp Z] against e^{1/2}, RMS error of the 5%..95% quantiles, moments, QQ
// points and a fixed histogram.

#include <array>
#include <ostream>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qbm/boxmuller.hpp"

namespace qbm {

double normal_cdf(double x);
// |result - Phi^{-1}(p)| < 1e-8 for 0 < p < 1; OutOfRange otherwise.
double inverse_normal_cdf(double p);

// p = 0.05, 0.10, ..., 0.95.
const std::array<double, 19>& quantile_levels();

// Linear interpolation between order statistics at rank p (K - 1) + 1.
double sample_quantile(std::span<const double> sorted, double p);

double exp_error(std::span<const double> z);
// Sorts a copy; TooFewSamples below 20 values.
double quantile_error(std::span<const double> z);
double quantile_error_sorted(std::span<const double> sorted);

struct QqPoint {
  double p;
  double q_exact;
  double q_sample;
};

struct HistogramBin {
  double left;
  double right;
  std::size_t count;
};

inline constexpr int kHistogramBins = 64;
inline constexpr double kHistogramRange = 4.0;

struct MetricReport {
  double eps_exp = 0.0;
  double eps_quantile = 0.0;
  std::array<double, 2> mean{};  // per coordinate
  std::array<double, 2> std{};
  double pearson = 0.0;
  double pooled_mean = 0.0;
  double pooled_std = 0.0;
  std::size_t sample_count = 0;  // pairs
  std::vector<QqPoint> qq;       // p = 0.01 .. 0.99
  std::vector<HistogramBin> histogram;
};

// Error metrics, QQ and histogram over the pooled z1 and z2 values; moments
// per coordinate (population convention).
MetricReport report(const BoxMullerSampleSet& samples);

// --- fixed-point error sweeps ---------------------------------------------

// Grid used for the word-size sweeps: m = min(n - p - 1, cap). The
// midpoints (j + 1/2) / 2^m then sit exactly on the n - p fractional bits, so
// no grid value rounds to 0, and the smallest u = 2^-(cap+1) keeps -ln u
// inside the p-bit integer range for cap <= 10.
inline constexpr int kSweepGridCap = 10;
int sweep_grid_qubits(int word_bits, int int_bits, int cap = kSweepGridCap);

struct SweepPoint {
  int n = 0;
  int p = 0;
  int d = 0;
  int M = 0;
  int grid_qubits = 0;
  double eps_exp = 0.0;  // NaN when the pipeline overflows
  double eps_quantile = 0.0;
};

SweepPoint sweep_point(int n, int p, int d, int M, int cap = kSweepGridCap);
std::vector<SweepPoint> sweep(const std::vector<int>& ns, int p, const std::vector<int>& ds,
                              const std::vector<int>& Ms, int cap = kSweepGridCap);

// Long format `metric,n,p,d,M,value`: all eps_exp rows, then eps_quantile.
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);

// True if the sequence is non-increasing apart from at most `inversions`
// upward steps.
bool decreasing_with_inversions(const std::vector<double>& values, int inversions = 1);

void write_qq_csv(std::ostream& out, const std::vector<QqPoint>& qq);
void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins);
void to_json(nlohmann::json& j, const MetricReport& r);

}  // namespace qbm
