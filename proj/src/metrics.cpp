#include "qbm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "qbm/error.hpp"
#include "qbm/io.hpp"
#include "qbm/kernels.hpp"

namespace qbm {

namespace {

// Acklam's rational approximation, relative error below 1.2e-9.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double low = 0.02425;
  if (p < low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - low) return -acklam(1.0 - p);
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "inverse_normal_cdf needs 0 < p < 1, got " + std::to_string(p));
  }
  const double x = acklam(p);
  // One Halley step against erfc lifts the accuracy to near machine level.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

const std::array<double, 19>& quantile_levels() {
  static const std::array<double, 19> levels = [] {
    std::array<double, 19> out{};
    for (int i = 0; i < 19; ++i) out[static_cast<std::size_t>(i)] = (i + 1) / 20.0;
    return out;
  }();
  return levels;
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double exp_error(std::span<const double> z) {
  if (z.empty()) throw Error(ErrorKind::EmptySample, "no samples");
  long double sum = 0.0L;
  for (double v : z) sum += std::exp(static_cast<long double>(v));
  const long double mean = sum / static_cast<long double>(z.size());
  const long double target = std::exp(0.5L);
  return static_cast<double>(std::fabs(mean - target) / target);
}

double quantile_error_sorted(std::span<const double> sorted) {
  if (sorted.size() < 20) throw Error(ErrorKind::TooFewSamples, "quantile error needs >= 20 samples");
  double acc = 0.0;
  for (double p : quantile_levels()) {
    const double d = inverse_normal_cdf(p) - sample_quantile(sorted, p);
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(quantile_levels().size()));
}

double quantile_error(std::span<const double> z) {
  std::vector<double> sorted(z.begin(), z.end());
  std::sort(sorted.begin(), sorted.end());
  return quantile_error_sorted(sorted);
}

MetricReport report(const BoxMullerSampleSet& s) {
  if (s.size() == 0) throw Error(ErrorKind::EmptySample, "empty sample set");
  MetricReport r;
  r.sample_count = s.size();

  std::vector<double> pooled;
  pooled.reserve(2 * s.size());
  pooled.insert(pooled.end(), s.z1.begin(), s.z1.end());
  pooled.insert(pooled.end(), s.z2.begin(), s.z2.end());
  r.eps_exp = exp_error(pooled);
  std::sort(pooled.begin(), pooled.end());
  r.eps_quantile = pooled.size() >= 20 ? quantile_error_sorted(pooled) : std::nan("");

  const kernels::Moments m = kernels::moments(s.z1, s.z2);
  const double n = static_cast<double>(m.count);
  r.mean = {m.sum_x / n, m.sum_y / n};
  const double vx = std::max(0.0, m.sum_xx / n - r.mean[0] * r.mean[0]);
  const double vy = std::max(0.0, m.sum_yy / n - r.mean[1] * r.mean[1]);
  r.std = {std::sqrt(vx), std::sqrt(vy)};
  const double cov = m.sum_xy / n - r.mean[0] * r.mean[1];
  r.pearson = (vx > 0.0 && vy > 0.0) ? cov / std::sqrt(vx * vy) : 0.0;
  r.pooled_mean = (m.sum_x + m.sum_y) / (2.0 * n);
  r.pooled_std = std::sqrt(
      std::max(0.0, (m.sum_xx + m.sum_yy) / (2.0 * n) - r.pooled_mean * r.pooled_mean));

  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    r.qq.push_back({p, inverse_normal_cdf(p), sample_quantile(pooled, p)});
  }

  const double width = 2.0 * kHistogramRange / kHistogramBins;
  r.histogram.resize(kHistogramBins);
  for (int b = 0; b < kHistogramBins; ++b) {
    r.histogram[static_cast<std::size_t>(b)] = {-kHistogramRange + b * width,
                                                -kHistogramRange + (b + 1) * width, 0};
  }
  for (double v : pooled) {
    if (v < -kHistogramRange || v > kHistogramRange) continue;
    const int b = std::min(kHistogramBins - 1, static_cast<int>((v + kHistogramRange) / width));
    ++r.histogram[static_cast<std::size_t>(b)].count;
  }
  return r;
}

int sweep_grid_qubits(int word_bits, int int_bits, int cap) {
  const int m = std::min(word_bits - int_bits - 1, cap);
  if (m < 1) {
    throw Error(ErrorKind::InvalidArgument, "word too narrow for a sweep grid");
  }
  return m;
}

SweepPoint sweep_point(int n, int p, int d, int M, int cap) {
  SweepPoint pt{n, p, d, M, sweep_grid_qubits(n, p, cap), 0.0, 0.0};
  GridConfig grid;
  grid.grid_qubits = pt.grid_qubits;
  try {
    const auto pipeline = FixedPointPipeline::standard(FixedPointFormat(n, p), M, d);
    const MetricReport r = report(generate_samples(grid, pipeline));
    pt.eps_exp = r.eps_exp;
    pt.eps_quantile = r.eps_quantile;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Overflow) throw;
    pt.eps_exp = pt.eps_quantile = std::nan("");
  }
  return pt;
}

std::vector<SweepPoint> sweep(const std::vector<int>& ns, int p, const std::vector<int>& ds,
                              const std::vector<int>& Ms, int cap) {
  std::vector<SweepPoint> out;
  out.reserve(ns.size() * ds.size() * Ms.size());
  for (int n : ns) {
    for (int d : ds) {
      for (int M : Ms) out.push_back(sweep_point(n, p, d, M, cap));
    }
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
  io::CsvWriter w(out);
  w.header({"metric", "n", "p", "d", "M", "value"});
  for (const char* metric : {"eps_exp", "eps_quantile"}) {
    const bool exp = std::string_view(metric) == "eps_exp";
    for (const auto& pt : points) {
      w.field(metric).field(pt.n).field(pt.p).field(pt.d).field(pt.M);
      w.field(exp ? pt.eps_exp : pt.eps_quantile);
      w.end_row();
    }
  }
}

bool decreasing_with_inversions(const std::vector<double>& values, int inversions) {
  int ups = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] <= values[i - 1])) ++ups;
  }
  return ups <= inversions;
}

void write_qq_csv(std::ostream& out, const std::vector<QqPoint>& qq) {
  io::CsvWriter w(out);
  w.header({"p", "q_exact", "q_sample"});
  for (const auto& q : qq) {
    w.field(q.p).field(q.q_exact).field(q.q_sample);
    w.end_row();
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<HistogramBin>& bins) {
  io::CsvWriter w(out);
  w.header({"bin_left", "bin_right", "count"});
  for (const auto& b : bins) {
    w.field(b.left).field(b.right).field(b.count);
    w.end_row();
  }
}

void to_json(nlohmann::json& j, const MetricReport& r) {
  j = {{"eps_exp", r.eps_exp},
       {"eps_quantile", r.eps_quantile},
       {"mean", r.mean},
       {"std", r.std},
       {"pearson", r.pearson},
       {"pooled_mean", r.pooled_mean},
       {"pooled_std", r.pooled_std},
       {"sample_count", r.sample_count}};
}

}  // namespace qbm
