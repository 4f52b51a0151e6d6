#pragma once

// Box-Muller images of a rectangular (u, v) grid: the N^2 equally weighted
// pairs that a grid superposition would hold. Exact mode uses double
// precision; fixed-point mode routes every step through funcapprox.

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "qbm/fixedpoint.hpp"
#include "qbm/funcapprox.hpp"

namespace qbm {

enum class GridConvention { Midpoint, Endpoint };

std::string_view to_string(GridConvention c) noexcept;
GridConvention convention_from_string(std::string_view name);

struct GridConfig {
  int grid_qubits = 5;  // N = 2^grid_qubits points per axis
  double u_min = 0.0;
  double u_max = 1.0;
  double v_min = 0.0;
  double v_max = 1.0;
  GridConvention convention = GridConvention::Midpoint;

  std::size_t points_per_axis() const noexcept { return std::size_t{1} << grid_qubits; }
  double u_at(std::size_t j) const noexcept;
  double v_at(std::size_t k) const noexcept;
  // Throws InvalidArgument on a malformed grid. u_min = 0 is allowed here;
  // whether a zero sample is acceptable is decided by the arithmetic mode.
  void validate() const;
};

// Fixed-point arithmetic for the transform. The standard pipeline computes
// r = sqrt(2) * sqrt(-ln u) and z = r * sin/cos(2 pi v); the mini pipeline
// uses the two linear approximations of the small-circuit experiment, with
// the radius taken directly from a polynomial in u.
struct FixedPointPipeline {
  FixedPointFormat format;
  PiecewisePolySpec sin_spec;
  PiecewisePolySpec ln_spec;
  PiecewisePolySpec sqrt_spec;
  std::optional<PiecewisePolySpec> radius_spec;
  FxNum ln2;
  FxNum sqrt2;

  static FixedPointPipeline standard(const FixedPointFormat& fmt, int pieces, int degree);
  static FixedPointPipeline mini(const FixedPointFormat& fmt);

  FxNum radius(const FxNum& u) const;
  FxNum sin(const FxNum& v) const { return sin2pi_fx(v, sin_spec); }
  FxNum cos(const FxNum& v) const { return cos2pi_fx(v, sin_spec); }
};

struct BoxMullerSampleSet {
  GridConfig config;
  std::optional<FixedPointFormat> format;  // set in fixed-point mode
  double rho = 0.0;
  std::vector<double> u;  // per-axis grid values, length N
  std::vector<double> v;
  // Row-major over (j, k): index j * N + k.
  std::vector<double> z1;
  std::vector<double> z2;
  std::vector<std::int64_t> z1_raw;  // fixed-point mode only
  std::vector<std::int64_t> z2_raw;

  std::size_t size() const noexcept { return z1.size(); }
  bool fixed_point() const noexcept { return format.has_value(); }
};

// (sqrt(-2 ln u) sin 2 pi v, sqrt(-2 ln u) cos 2 pi v); NonPositiveU if u <= 0.
std::pair<double, double> transform_point(double u, double v);

BoxMullerSampleSet generate_samples(const GridConfig& cfg);
BoxMullerSampleSet generate_samples(const GridConfig& cfg, const FixedPointPipeline& pipeline);

// (z1, rho z1 + sqrt(1 - rho^2) z2) per pair. Raw words are dropped.
BoxMullerSampleSet correlate(const BoxMullerSampleSet& samples, double rho);

struct MultivariateSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd chol_lower;
};

// Points x = mean + L z, one row per grid pair, from ceil(D/2) sample sets.
Eigen::MatrixXd multivariate(const std::vector<BoxMullerSampleSet>& pair_sets,
                             const MultivariateSpec& spec);

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& cov);

struct JacobianCheck {
  double analytic;
  double numeric;
};

// Determinant of d(x1, x2)/d(u, v) for the correlated transform.
JacobianCheck jacobian_check(double u, double v, double rho);

double bivariate_normal_pdf(double x1, double x2, double rho);

// f_X(x(u, v)) * |J(u, v)|, identically 1 for the exact transform.
double change_of_variables_product(double u, double v, double rho);

void write_samples_csv(std::ostream& out, const BoxMullerSampleSet& samples);
nlohmann::json samples_to_json(const BoxMullerSampleSet& samples);
void to_json(nlohmann::json& j, const GridConfig& cfg);

}  // namespace qbm
