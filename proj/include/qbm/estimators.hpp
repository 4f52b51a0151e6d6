#pragma once

// Monte-Carlo expectation estimators over the Box-Muller grid:
//   Algorithm 1  theta in [0, 1]                 grid mean + amplitude estimation
//   Algorithm 2  theta >= 0, E[theta^2] <= B^2   dyadic range levels, each via 1
//   Algorithm 3  Var[theta] <= sigma^2           shift by one sample, split, 2 twice
// Each algorithm is a plan (the deterministic grid work, done once) plus
// run(seed) (the randomized amplitude-estimation part), so repeated seeded
// trials do not redo the grid.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qbm/boxmuller.hpp"
#include "qbm/payoff.hpp"
#include "qbm/qae.hpp"

namespace qbm {

// Exp: u_max = exp(-c1 eps / 2), which makes l^2/2 + u_min = c1 eps hold.
// ExpPi: u_max = exp(-c1 pi eps / 2), the alternative form.
enum class UMaxForm { Exp, ExpPi };

UMaxForm umax_form_from_string(std::string_view name);
std::string_view to_string(UMaxForm form) noexcept;

struct TruncationParams {
  double u_min = 0.0;
  double u_max = 1.0;
  double l = 0.0;  // inner radius, e^{-l^2/2} = u_max
  double L = 0.0;  // outer radius, e^{-L^2/2} = u_min
  double c1 = 0.0;
  double epsilon = 0.0;
};

TruncationParams select_truncation(double c1, double epsilon, UMaxForm form = UMaxForm::Exp);

// l^2/2 + e^{-L^2/2}: mass outside the ring.
double truncation_bound(const TruncationParams& p);

// Second-derivative bounds of theta(z(u, v)) over the truncated rectangle.
double disc_m_u(double d1, double d2, const TruncationParams& p);
double disc_m_v(double d1, double d2, const TruncationParams& p);

// Midpoint-rule bound (M_u h_u^2 + M_v h_v^2) / (24 N^2) on the gap between
// the grid mean and the rectangle average, with h the interval widths.
double disc_bound(double d1, double d2, const TruncationParams& p, std::size_t N);
double disc_bound(const Payoff& payoff, const TruncationParams& p, std::size_t N);

struct ErrorBudget {
  double eps_trunc = 0.0;
  double eps_disc = 0.0;
  double eps_qae = 0.0;

  double total() const noexcept { return eps_trunc + eps_disc + eps_qae; }
};

struct LevelDiagnostics {
  std::string side;  // "", "plus" or "minus"
  int level = 0;
  double epsilon = 0.0;
  double u_min = 0.0;
  double u_max = 0.0;
  int grid_qubits = 0;
  double grid_mean = 0.0;  // exact grid mean of the level payoff
  double estimate = 0.0;   // amplitude estimate of grid_mean
  int repetitions = 0;
  std::uint64_t seed = 0;
};

struct EstimateResult {
  std::string algorithm;
  double mu_hat = 0.0;
  ErrorBudget budget;
  int grid_qubits = 0;
  int grover_power = 0;
  double true_grid_mean = 0.0;
  std::uint64_t seed = 0;
  std::optional<double> mu_prime;  // Algorithm 3 only
  std::vector<LevelDiagnostics> levels;
};

void to_json(nlohmann::json& j, const ErrorBudget& b);
void to_json(nlohmann::json& j, const LevelDiagnostics& d);
void to_json(nlohmann::json& j, const EstimateResult& r);

// --- Algorithm 1 -----------------------------------------------------------

struct Case1Config {
  int grid_qubits = 10;
  double c1 = 1.0 / 3.0;
  double epsilon = 0.05;
  int grover_power = 512;
  double delta = 0.05;
  GridConvention convention = GridConvention::Midpoint;
  UMaxForm umax_form = UMaxForm::Exp;
  std::optional<FixedPointPipeline> pipeline;  // fixed-point grid when set
};

// Parameters from the error recipe: c1 = 1/3 and t = 3 C / epsilon, so
// each of the three error terms is about epsilon / 3.
Case1Config case1_recipe(double epsilon, int grid_qubits, double delta = 0.05);

class Algorithm1Plan {
 public:
  Algorithm1Plan(Payoff payoff, Case1Config cfg);

  EstimateResult run(std::uint64_t seed) const;
  double grid_mean() const noexcept { return grid_mean_; }
  const TruncationParams& truncation() const noexcept { return trunc_; }
  GridConfig grid() const;

 private:
  Payoff payoff_;
  Case1Config cfg_;
  TruncationParams trunc_;
  double grid_mean_ = 0.0;
  double sup_abs_ = 0.0;
};

EstimateResult algorithm1(const Payoff& payoff, const Case1Config& cfg, std::uint64_t seed);

// --- Algorithm 2 -----------------------------------------------------------

struct Case2Config {
  double B = 1.0;
  double epsilon = 0.1;
  double delta = 0.05;
  double D = 2.0;
  double D_tilde = 2.0;
  // Desk guardrail: level grids are capped at 2^max_grid_qubits per axis.
  int max_grid_qubits = 10;
  GridConvention convention = GridConvention::Midpoint;
  UMaxForm umax_form = UMaxForm::Exp;
};

struct LevelSetup {
  int level = 0;
  double epsilon = 0.0;
  TruncationParams trunc;
  double requested_points = 0.0;  // N_l before the power-of-two round and cap
  int grid_qubits = 0;
  double delta = 0.0;
  int repetitions = 0;
};

struct Case2Schedule {
  double eps_tilde = 0.0;
  int k = 1;
  int t0 = 1;
  double c1 = 0.0;
  std::vector<LevelSetup> levels;  // l = 0..k
};

Case2Schedule case2_schedule(const Case2Config& cfg);

// Payoff values on a level grid, sorted, with prefix sums: sums over value
// ranges cost two binary searches.
class SortedGrid {
 public:
  SortedGrid() = default;
  SortedGrid(const Payoff& payoff, const GridConfig& grid);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  double mean() const noexcept;

  struct Slice {
    double sum = 0.0;
    std::size_t count = 0;
  };
  // Values in [lo, hi) or, with upper_closed, in (lo, hi].
  Slice slice(double lo, double hi, bool upper_closed = false) const;

 private:
  std::vector<double> values_;
  std::vector<double> prefix_;
};

class Algorithm2Plan {
 public:
  Algorithm2Plan(Payoff payoff, Case2Config cfg);

  EstimateResult run(std::uint64_t seed) const;
  const Case2Schedule& schedule() const noexcept { return schedule_; }
  // Exact grid mean of theta_{2^{l-1}, 2^l} / 2^l (level 0: theta_{0,1}).
  const std::vector<double>& level_means() const noexcept { return level_means_; }
  // sum_l 2^l level_mean(l): the grid mean of theta restricted to [0, 2^k).
  double telescoped_mean() const;

 private:
  Payoff payoff_;
  Case2Config cfg_;
  Case2Schedule schedule_;
  std::vector<double> level_means_;
  ErrorBudget deterministic_;
};

EstimateResult algorithm2(const Payoff& payoff, const Case2Config& cfg, std::uint64_t seed);

// --- Algorithm 3 -----------------------------------------------------------

struct Case3Config {
  double sigma = 1.0;
  double epsilon = 0.2;
  double D = 2.0;
  double D_tilde = 2.0;
  int max_grid_qubits = 10;
  GridConvention convention = GridConvention::Midpoint;
  UMaxForm umax_form = UMaxForm::Exp;
};

class Algorithm3Plan {
 public:
  Algorithm3Plan(Payoff payoff, Case3Config cfg);

  EstimateResult run(std::uint64_t seed) const;
  const Case2Schedule& schedule() const noexcept { return schedule_; }

 private:
  Payoff payoff_;
  Case3Config cfg_;
  Case2Schedule schedule_;
  std::vector<SortedGrid> grids_;  // theta / sigma per level
};

EstimateResult algorithm3(const Payoff& payoff, const Case3Config& cfg, std::uint64_t seed);

// --- derivative probe ------------------------------------------------------

struct DerivativeProbe {
  double d1_observed = 0.0;
  double d2_observed = 0.0;
  bool d1_ok = true;
  bool d2_ok = true;
};

// Central differences at every `stride`-th sample; flags bounds the payoff
// visibly exceeds (relative bounds are compared against |theta|-scaled values).
DerivativeProbe probe_derivatives(const Payoff& payoff, const BoxMullerSampleSet& samples,
                                  std::size_t stride = 97);

}  // namespace qbm
