#include "qbm/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "qbm/error.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// theta at every sample; rows are filled in parallel.
std::vector<double> evaluate(const Payoff& payoff, const BoxMullerSampleSet& s) {
  std::vector<double> out(s.size());
  const std::size_t n = s.u.size();
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t i = j * n; i < (j + 1) * n; ++i) out[i] = payoff(s.z1[i], s.z2[i]);
  });
  return out;
}

// Row sums first, then rows in order: the result does not depend on the
// thread count.
double ordered_mean(const std::vector<double>& values, std::size_t row) {
  const std::size_t rows = values.size() / row;
  std::vector<double> partial(rows);
  parallel_for(rows, [&](std::size_t r) {
    double s = 0.0;
    for (std::size_t i = r * row; i < (r + 1) * row; ++i) s += values[i];
    partial[r] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total / static_cast<double>(values.size());
}

GridConfig level_grid(const TruncationParams& t, int qubits, GridConvention conv) {
  GridConfig g;
  g.grid_qubits = qubits;
  g.u_min = t.u_min;
  g.u_max = t.u_max;
  g.convention = conv;
  return g;
}

double level_floor(int l) { return l == 0 ? 0.0 : std::ldexp(1.0, l - 1); }
double level_ceil(int l) { return std::ldexp(1.0, l); }

void check_case2(const Case2Config& c) {
  if (!(c.B >= 0.0 && std::isfinite(c.B))) throw Error(ErrorKind::InvalidArgument, "need finite B >= 0");
  if (!(c.epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "need epsilon > 0");
  if (!(c.delta > 0.0 && c.delta < 1.0)) throw Error(ErrorKind::InvalidArgument, "need 0 < delta < 1");
  if (!(c.D > 0.0 && c.D_tilde > 0.0)) throw Error(ErrorKind::InvalidArgument, "need D, D_tilde > 0");
  if (c.max_grid_qubits < 1 || c.max_grid_qubits > 13) {
    throw Error(ErrorKind::InvalidArgument, "max_grid_qubits must be in [1, 13]");
  }
}

}  // namespace

UMaxForm umax_form_from_string(std::string_view name) {
  if (name == "exp") return UMaxForm::Exp;
  if (name == "exp-pi") return UMaxForm::ExpPi;
  throw Error(ErrorKind::InvalidArgument, "unknown u_max form '" + std::string(name) + "'");
}

std::string_view to_string(UMaxForm form) noexcept {
  return form == UMaxForm::Exp ? "exp" : "exp-pi";
}

TruncationParams select_truncation(double c1, double epsilon, UMaxForm form) {
  if (!(c1 > 0.0) || !(epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "need c1 > 0 and epsilon > 0");
  }
  TruncationParams p;
  p.c1 = c1;
  p.epsilon = epsilon;
  p.u_min = c1 * epsilon / 2.0;
  const double exponent = form == UMaxForm::Exp ? c1 * epsilon / 2.0
                                                 : c1 * std::numbers::pi * epsilon / 2.0;
  p.u_max = std::exp(-exponent);
  if (p.u_min >= p.u_max) {
    throw Error(ErrorKind::EpsilonTooLarge, "u_min = " + std::to_string(p.u_min) +
                                                " is not below u_max = " + std::to_string(p.u_max));
  }
  p.l = std::sqrt(2.0 * exponent);
  p.L = std::sqrt(-2.0 * std::log(p.u_min));
  return p;
}

double truncation_bound(const TruncationParams& p) { return p.l * p.l / 2.0 + p.u_min; }

double disc_m_u(double d1, double d2, const TruncationParams& p) {
  auto at = [&](double u) {
    const double w = -2.0 * std::log(u);
    return (d1 * (1.0 / w + 1.0) / std::sqrt(w) + d2 / w) / (u * u);
  };
  return std::max(at(p.u_min), at(p.u_max));
}

double disc_m_v(double d1, double d2, const TruncationParams& p) {
  const double w = -2.0 * std::log(p.u_min);
  return kTwoPi * kTwoPi * (std::sqrt(w) * d1 + w * d2);
}

double disc_bound(double d1, double d2, const TruncationParams& p, std::size_t N) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, "need N >= 2");
  if (d1 == 0.0 && d2 == 0.0) return 0.0;
  const double hu = p.u_max - p.u_min;
  const double nn = static_cast<double>(N);
  return (disc_m_u(d1, d2, p) * hu * hu + disc_m_v(d1, d2, p)) / (24.0 * nn * nn);
}

double disc_bound(const Payoff& payoff, const TruncationParams& p, std::size_t N) {
  return disc_bound(payoff.d1, payoff.d2, p, N);
}

void to_json(nlohmann::json& j, const ErrorBudget& b) {
  j = {{"eps_trunc", b.eps_trunc}, {"eps_disc", b.eps_disc}, {"eps_qae", b.eps_qae},
       {"total", b.total()}};
}

void to_json(nlohmann::json& j, const LevelDiagnostics& d) {
  j = {{"side", d.side},           {"level", d.level},         {"epsilon", d.epsilon},
       {"u_min", d.u_min},         {"u_max", d.u_max},         {"grid_qubits", d.grid_qubits},
       {"grid_mean", d.grid_mean}, {"estimate", d.estimate},   {"repetitions", d.repetitions},
       {"seed", d.seed}};
}

void to_json(nlohmann::json& j, const EstimateResult& r) {
  j = {{"algorithm", r.algorithm},
       {"mu_hat", r.mu_hat},
       {"budget", r.budget},
       {"grid_qubits", r.grid_qubits},
       {"grover_power", r.grover_power},
       {"true_grid_mean", r.true_grid_mean},
       {"seed", r.seed},
       {"levels", r.levels}};
  if (r.mu_prime) j["mu_prime"] = *r.mu_prime;
}

// --- Algorithm 1 -----------------------------------------------------------

Case1Config case1_recipe(double epsilon, int grid_qubits, double delta) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidArgument, "need epsilon > 0");
  Case1Config c;
  c.epsilon = epsilon;
  c.grid_qubits = grid_qubits;
  c.c1 = 1.0 / 3.0;
  c.delta = delta;
  c.grover_power = static_cast<int>(std::ceil(3.0 * kQaeConstant / epsilon));
  return c;
}

Algorithm1Plan::Algorithm1Plan(Payoff payoff, Case1Config cfg)
    : payoff_(std::move(payoff)), cfg_(std::move(cfg)) {
  trunc_ = select_truncation(cfg_.c1, cfg_.epsilon, cfg_.umax_form);
  const GridConfig g = grid();
  const BoxMullerSampleSet s =
      cfg_.pipeline ? generate_samples(g, *cfg_.pipeline) : generate_samples(g);
  const std::vector<double> values = evaluate(payoff_, s);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo >= 0.0 && *hi <= 1.0)) {
    throw Error(ErrorKind::PayoffOutOfRange, payoff_.name + " takes values in [" +
                                                 std::to_string(*lo) + ", " + std::to_string(*hi) +
                                                 "] on the grid, outside [0, 1]");
  }
  sup_abs_ = *hi;
  grid_mean_ = ordered_mean(values, s.u.size());
}

GridConfig Algorithm1Plan::grid() const {
  return level_grid(trunc_, cfg_.grid_qubits, cfg_.convention);
}

EstimateResult Algorithm1Plan::run(std::uint64_t seed) const {
  QaeConfig q;
  q.grover_power = cfg_.grover_power;
  q.delta = cfg_.delta;
  q.repetitions = repetitions_for_delta(cfg_.delta);
  q.rng_seed = seed;

  EstimateResult r;
  r.algorithm = "bounded";
  r.seed = seed;
  r.grid_qubits = cfg_.grid_qubits;
  r.grover_power = cfg_.grover_power;
  r.true_grid_mean = grid_mean_;
  r.mu_hat = qae_estimate(grid_mean_, q);
  const double scale = payoff_.relative ? sup_abs_ : 1.0;
  const std::size_t N = std::size_t{1} << cfg_.grid_qubits;
  r.budget.eps_trunc = trunc_.c1 * trunc_.epsilon * sup_abs_;
  r.budget.eps_disc = disc_bound(payoff_.d1 * scale, payoff_.d2 * scale, trunc_, N);
  r.budget.eps_qae = qae_error_bound(grid_mean_, cfg_.grover_power, kQaeConstant);
  r.levels.push_back({"", 0, cfg_.epsilon, trunc_.u_min, trunc_.u_max, cfg_.grid_qubits,
                      grid_mean_, r.mu_hat, q.repetitions, seed});
  return r;
}

EstimateResult algorithm1(const Payoff& payoff, const Case1Config& cfg, std::uint64_t seed) {
  return Algorithm1Plan(payoff, cfg).run(seed);
}

// --- Algorithm 2 -----------------------------------------------------------

Case2Schedule case2_schedule(const Case2Config& cfg) {
  check_case2(cfg);
  Case2Schedule s;
  s.eps_tilde = cfg.epsilon / (3.0 * (cfg.B + 1.0) * (cfg.B + 1.0));
  const double log_inv = std::log2(1.0 / s.eps_tilde);
  s.k = std::max(1, static_cast<int>(std::ceil(log_inv)));
  s.t0 = static_cast<int>(std::ceil(cfg.D_tilde * std::sqrt(std::max(log_inv, 0.0)) / s.eps_tilde));
  s.t0 = std::max(s.t0, 1);
  s.c1 = 1.0 / (3.0 * (s.k + 1));
  for (int l = 0; l <= s.k; ++l) {
    LevelSetup lv;
    lv.level = l;
    lv.epsilon = std::ldexp(cfg.epsilon, -l);
    lv.trunc = select_truncation(s.c1, lv.epsilon, cfg.umax_form);
    lv.requested_points = cfg.D * std::sqrt(s.k + 1.0) / std::pow(lv.epsilon, 1.5);
    const int wanted = static_cast<int>(std::ceil(std::log2(std::max(lv.requested_points, 2.0))));
    lv.grid_qubits = std::clamp(wanted, 1, cfg.max_grid_qubits);
    lv.delta = l == 0 ? cfg.delta / 2.0 : cfg.delta / (2.0 * s.k);
    lv.repetitions = repetitions_for_delta(lv.delta);
    s.levels.push_back(lv);
  }
  return s;
}

SortedGrid::SortedGrid(const Payoff& payoff, const GridConfig& grid) {
  values_ = evaluate(payoff, generate_samples(grid));
  std::sort(values_.begin(), values_.end());
  prefix_.resize(values_.size() + 1);
  prefix_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) prefix_[i + 1] = prefix_[i] + values_[i];
}

double SortedGrid::mean() const noexcept {
  return values_.empty() ? 0.0 : prefix_.back() / static_cast<double>(values_.size());
}

SortedGrid::Slice SortedGrid::slice(double lo, double hi, bool upper_closed) const {
  auto first = upper_closed ? std::upper_bound(values_.begin(), values_.end(), lo)
                            : std::lower_bound(values_.begin(), values_.end(), lo);
  auto last = upper_closed ? std::upper_bound(values_.begin(), values_.end(), hi)
                           : std::lower_bound(values_.begin(), values_.end(), hi);
  if (last <= first) return {};
  const auto a = static_cast<std::size_t>(first - values_.begin());
  const auto b = static_cast<std::size_t>(last - values_.begin());
  return {prefix_[b] - prefix_[a], b - a};
}

Algorithm2Plan::Algorithm2Plan(Payoff payoff, Case2Config cfg)
    : payoff_(std::move(payoff)), cfg_(cfg), schedule_(case2_schedule(cfg)) {
  for (const LevelSetup& lv : schedule_.levels) {
    const GridConfig g = level_grid(lv.trunc, lv.grid_qubits, cfg_.convention);
    const SortedGrid grid(payoff_, g);
    if (grid.values().front() < 0.0) {
      throw Error(ErrorKind::PayoffOutOfRange,
                  payoff_.name + " is negative on the grid (min " +
                      std::to_string(grid.values().front()) + ")");
    }
    const double width = level_ceil(lv.level);
    const auto slice = grid.slice(level_floor(lv.level), width);
    const double mean = slice.sum / width / static_cast<double>(grid.size());
    level_means_.push_back(mean);

    const double weight = lv.level == 0 ? 1.0 : width;
    const double dscale = payoff_.relative ? 1.0 : 1.0 / width;
    deterministic_.eps_trunc += weight * lv.trunc.c1 * lv.epsilon;
    deterministic_.eps_disc += weight * disc_bound(payoff_.d1 * dscale, payoff_.d2 * dscale,
                                                   lv.trunc, g.points_per_axis());
  }
  // Range tail E[theta_{2^k, inf}] <= B^2 / 2^k.
  deterministic_.eps_trunc += cfg_.B * cfg_.B / std::ldexp(1.0, schedule_.k);
}

double Algorithm2Plan::telescoped_mean() const {
  double total = 0.0;
  for (std::size_t l = 0; l < level_means_.size(); ++l) {
    total += (l == 0 ? 1.0 : std::ldexp(1.0, static_cast<int>(l))) * level_means_[l];
  }
  return total;
}

EstimateResult Algorithm2Plan::run(std::uint64_t seed) const {
  EstimateResult r;
  r.algorithm = "l2";
  r.seed = seed;
  r.grover_power = schedule_.t0;
  r.true_grid_mean = telescoped_mean();
  r.budget = deterministic_;
  for (const LevelSetup& lv : schedule_.levels) {
    const double mean = std::clamp(level_means_[static_cast<std::size_t>(lv.level)], 0.0, 1.0);
    QaeConfig q{schedule_.t0, lv.repetitions, lv.delta,
                derive_seed(seed, static_cast<std::uint64_t>(lv.level))};
    const double est = qae_estimate(mean, q);
    const double weight = lv.level == 0 ? 1.0 : level_ceil(lv.level);
    r.mu_hat += weight * est;
    r.budget.eps_qae += weight * qae_error_bound(mean, schedule_.t0, kQaeConstant);
    r.grid_qubits = std::max(r.grid_qubits, lv.grid_qubits);
    r.levels.push_back({"", lv.level, lv.epsilon, lv.trunc.u_min, lv.trunc.u_max, lv.grid_qubits,
                        mean, est, lv.repetitions, q.rng_seed});
  }
  return r;
}

EstimateResult algorithm2(const Payoff& payoff, const Case2Config& cfg, std::uint64_t seed) {
  return Algorithm2Plan(payoff, cfg).run(seed);
}

// --- Algorithm 3 -----------------------------------------------------------

namespace {

Case2Config inner_config(const Case3Config& c) {
  Case2Config inner;
  // |mu' - E theta'| <= 3 except with probability 1/9 (Chebyshev), so
  // E[(theta~ / 4)^2] <= (1 + 9) / 16 < 1.
  inner.B = 1.0;
  inner.epsilon = c.epsilon / (8.0 * c.sigma);
  inner.delta = 1.0 / 9.0;
  inner.D = c.D;
  inner.D_tilde = c.D_tilde;
  inner.max_grid_qubits = c.max_grid_qubits;
  inner.convention = c.convention;
  inner.umax_form = c.umax_form;
  return inner;
}

}  // namespace

Algorithm3Plan::Algorithm3Plan(Payoff payoff, Case3Config cfg)
    : payoff_(std::move(payoff)), cfg_(cfg) {
  if (!(cfg_.sigma > 0.0)) throw Error(ErrorKind::InvalidArgument, "need sigma > 0");
  if (!(cfg_.epsilon > 0.0 && cfg_.epsilon < 4.0 * cfg_.sigma)) {
    throw Error(ErrorKind::EpsilonOutOfRange, "need 0 < epsilon < 4 sigma");
  }
  schedule_ = case2_schedule(inner_config(cfg_));
  const double sigma = cfg_.sigma;
  const auto base = payoff_.eval;
  Payoff scaled{payoff_.name, [base, sigma](double a, double b) { return base(a, b) / sigma; },
                payoff_.d1 / sigma, payoff_.d2 / sigma, payoff_.relative};
  for (const LevelSetup& lv : schedule_.levels) {
    grids_.emplace_back(scaled, level_grid(lv.trunc, lv.grid_qubits, cfg_.convention));
  }
}

EstimateResult Algorithm3Plan::run(std::uint64_t seed) const {
  EstimateResult r;
  r.algorithm = "variance";
  r.seed = seed;
  r.grover_power = schedule_.t0;

  // One measurement of the prepared state: theta' at a uniform grid point.
  std::mt19937_64 rng(derive_seed(seed, 0xA3));
  const auto& first = grids_.front().values();
  const double c = first[static_cast<std::size_t>(rng() % first.size())];
  r.mu_prime = c * cfg_.sigma;

  const Case2Config inner = inner_config(cfg_);
  double est_side[2] = {0.0, 0.0};
  double exact_side[2] = {0.0, 0.0};
  ErrorBudget side_budget;
  for (int side = 0; side < 2; ++side) {
    const bool plus = side == 0;
    for (const LevelSetup& lv : schedule_.levels) {
      const SortedGrid& grid = grids_[static_cast<std::size_t>(lv.level)];
      const double lo = level_floor(lv.level);
      const double hi = level_ceil(lv.level);
      // theta~/4 in [lo, hi) for the plus side; -theta~/4 in [lo, hi) with
      // theta~ < 0 for the minus side.
      const auto s = plus ? grid.slice(c + 4.0 * lo, c + 4.0 * hi)
                          : grid.slice(c - 4.0 * hi, c - 4.0 * lo, true);
      const double count = static_cast<double>(s.count);
      const double level_sum = plus ? (s.sum - c * count) / 4.0 : (c * count - s.sum) / 4.0;
      const double mean =
          std::clamp(level_sum / hi / static_cast<double>(grid.size()), 0.0, 1.0);
      const auto stream = static_cast<std::uint64_t>((side + 1) * 1000 + lv.level);
      QaeConfig q{schedule_.t0, lv.repetitions, lv.delta, derive_seed(seed, stream)};
      const double est = qae_estimate(mean, q);
      const double weight = lv.level == 0 ? 1.0 : hi;
      est_side[side] += weight * est;
      exact_side[side] += weight * mean;

      const double dscale = 1.0 / (4.0 * cfg_.sigma * hi);
      side_budget.eps_trunc += weight * lv.trunc.c1 * lv.epsilon;
      side_budget.eps_disc += weight * disc_bound(payoff_.d1 * dscale, payoff_.d2 * dscale,
                                                  lv.trunc, std::size_t{1} << lv.grid_qubits);
      side_budget.eps_qae += weight * qae_error_bound(mean, schedule_.t0, kQaeConstant);
      r.grid_qubits = std::max(r.grid_qubits, lv.grid_qubits);
      r.levels.push_back({plus ? "plus" : "minus", lv.level, lv.epsilon, lv.trunc.u_min,
                          lv.trunc.u_max, lv.grid_qubits, mean, est, lv.repetitions, q.rng_seed});
    }
    side_budget.eps_trunc += inner.B * inner.B / std::ldexp(1.0, schedule_.k);
  }
  const double sigma = cfg_.sigma;
  r.mu_hat = sigma * (c + 4.0 * est_side[0] - 4.0 * est_side[1]);
  r.true_grid_mean = sigma * (c + 4.0 * exact_side[0] - 4.0 * exact_side[1]);
  r.budget.eps_trunc = 4.0 * sigma * side_budget.eps_trunc;
  r.budget.eps_disc = 4.0 * sigma * side_budget.eps_disc;
  r.budget.eps_qae = 4.0 * sigma * side_budget.eps_qae;
  return r;
}

EstimateResult algorithm3(const Payoff& payoff, const Case3Config& cfg, std::uint64_t seed) {
  return Algorithm3Plan(payoff, cfg).run(seed);
}

// --- derivative probe ------------------------------------------------------

DerivativeProbe probe_derivatives(const Payoff& payoff, const BoxMullerSampleSet& samples,
                                  std::size_t stride) {
  constexpr double h = 1e-4;
  DerivativeProbe p;
  stride = std::max<std::size_t>(stride, 1);
  for (std::size_t i = 0; i < samples.size(); i += stride) {
    const double a = samples.z1[i];
    const double b = samples.z2[i];
    const double f = payoff(a, b);
    const double g1 = (payoff(a + h, b) - payoff(a - h, b)) / (2 * h);
    const double g2 = (payoff(a, b + h) - payoff(a, b - h)) / (2 * h);
    const double h11 = (payoff(a + h, b) - 2 * f + payoff(a - h, b)) / (h * h);
    const double h22 = (payoff(a, b + h) - 2 * f + payoff(a, b - h)) / (h * h);
    const double h12 = (payoff(a + h, b + h) - payoff(a + h, b - h) - payoff(a - h, b + h) +
                        payoff(a - h, b - h)) /
                       (4 * h * h);
    double d1 = std::fabs(g1) + std::fabs(g2);
    double d2 = std::fabs(h11) + std::fabs(h12) + std::fabs(h22);
    if (payoff.relative && f != 0.0) {
      d1 /= std::fabs(f);
      d2 /= std::fabs(f);
    }
    p.d1_observed = std::max(p.d1_observed, d1);
    p.d2_observed = std::max(p.d2_observed, d2);
  }
  // Finite differences carry O(h^2) truncation and O(eps/h^2) rounding error.
  p.d1_ok = p.d1_observed <= payoff.d1 * (1.0 + 1e-3) + 1e-6;
  p.d2_ok = p.d2_observed <= payoff.d2 * (1.0 + 1e-3) + 1e-3;
  return p;
}

}  // namespace qbm
