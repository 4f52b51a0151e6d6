#include "qbm/boxmuller.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "qbm/error.hpp"
#include "qbm/io.hpp"
#include "qbm/kernels.hpp"
#include "qbm/parallel.hpp"

namespace qbm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxGridQubits = 20;

// Raw words convert through the kernel only while they fit a double mantissa.
void raw_to_real(std::span<const std::int64_t> in, std::span<double> out,
                 const FixedPointFormat& fmt) {
  if (fmt.word_bits <= 52) {
    kernels::raw_to_real(in, out, fmt.resolution());
    return;
  }
  for (std::size_t i = 0; i < in.size(); ++i) {
    out[i] = std::ldexp(static_cast<double>(in[i]), -fmt.frac_bits());
  }
}

BoxMullerSampleSet empty_set(const GridConfig& cfg) {
  cfg.validate();
  BoxMullerSampleSet s;
  s.config = cfg;
  const std::size_t n = cfg.points_per_axis();
  s.u.resize(n);
  s.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.u[i] = cfg.u_at(i);
    s.v[i] = cfg.v_at(i);
  }
  s.z1.resize(n * n);
  s.z2.resize(n * n);
  return s;
}

}  // namespace

std::string_view to_string(GridConvention c) noexcept {
  return c == GridConvention::Midpoint ? "midpoint" : "endpoint";
}

GridConvention convention_from_string(std::string_view name) {
  if (name == "midpoint") return GridConvention::Midpoint;
  if (name == "endpoint") return GridConvention::Endpoint;
  throw Error(ErrorKind::InvalidArgument, "unknown grid convention '" + std::string(name) + "'");
}

double GridConfig::u_at(std::size_t j) const noexcept {
  const double n = static_cast<double>(points_per_axis());
  const double jj = static_cast<double>(j);
  if (convention == GridConvention::Midpoint) return u_min + (jj + 0.5) * (u_max - u_min) / n;
  return u_min + jj * (u_max - u_min) / (n - 1.0);
}

double GridConfig::v_at(std::size_t k) const noexcept {
  const double n = static_cast<double>(points_per_axis());
  const double kk = static_cast<double>(k);
  if (convention == GridConvention::Midpoint) return v_min + (kk + 0.5) * (v_max - v_min) / n;
  return v_min + kk * (v_max - v_min) / (n - 1.0);
}

void GridConfig::validate() const {
  if (grid_qubits < 1 || grid_qubits > kMaxGridQubits) {
    throw Error(ErrorKind::InvalidArgument,
                "grid_qubits must be in [1, " + std::to_string(kMaxGridQubits) + "]");
  }
  if (!(0.0 <= u_min && u_min < u_max && u_max <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= u_min < u_max <= 1");
  }
  if (!(0.0 <= v_min && v_min < v_max && v_max <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= v_min < v_max <= 1");
  }
}

FixedPointPipeline FixedPointPipeline::standard(const FixedPointFormat& fmt, int pieces,
                                                int degree) {
  FixedPointPipeline p;
  p.format = fmt;
  p.sin_spec = build_poly_spec(TargetFunction::Sin2Pi, fmt, pieces, degree, {0.0, 0.25});
  p.ln_spec = build_poly_spec(TargetFunction::Ln, fmt, pieces, degree, {0.5, 1.0});
  p.sqrt_spec = build_poly_spec(TargetFunction::Sqrt, fmt, pieces, degree, {0.25, 1.0});
  p.ln2 = fx_from_real(std::numbers::ln2, fmt);
  p.sqrt2 = fx_from_real(std::numbers::sqrt2, fmt);
  return p;
}

FixedPointPipeline FixedPointPipeline::mini(const FixedPointFormat& fmt) {
  FixedPointPipeline p;
  p.format = fmt;
  p.sin_spec = mini_sin_spec(fmt);
  p.radius_spec = mini_radius_spec(fmt);
  p.ln2 = fx_from_real(std::numbers::ln2, fmt);
  p.sqrt2 = fx_from_real(std::numbers::sqrt2, fmt);
  return p;
}

FxNum FixedPointPipeline::radius(const FxNum& u) const {
  if (radius_spec) return eval_poly(*radius_spec, u);
  if (u.raw <= 0) throw Error(ErrorKind::NonPositiveU, "grid value u quantizes to 0");
  // sqrt(-2 ln u) = sqrt(2) * sqrt(-ln u): -ln u stays in range for u down
  // to exp(-2^(int_bits-1)), where -2 ln u would already overflow at half that
  // exponent.
  // Near u = 1 the ln approximation can land a few ulps above 0; -ln u is
  // clamped at 0 since u <= 1.
  FxNum w = fx_neg(ln_fx(u, ln_spec, ln2));
  if (w.raw < 0) w.raw = 0;
  return fx_mul(sqrt_fx(w, sqrt_spec), sqrt2);
}

std::pair<double, double> transform_point(double u, double v) {
  if (!(u > 0.0)) throw Error(ErrorKind::NonPositiveU, "transform_point needs u > 0");
  const double r = std::sqrt(-2.0 * std::log(u));
  return {r * std::sin(kTwoPi * v), r * std::cos(kTwoPi * v)};
}

BoxMullerSampleSet generate_samples(const GridConfig& cfg) {
  BoxMullerSampleSet s = empty_set(cfg);
  const std::size_t n = cfg.points_per_axis();
  std::vector<double> sin_k(n), cos_k(n);
  for (std::size_t k = 0; k < n; ++k) {
    sin_k[k] = std::sin(kTwoPi * s.v[k]);
    cos_k[k] = std::cos(kTwoPi * s.v[k]);
  }
  for (double u : s.u) {
    if (!(u > 0.0)) throw Error(ErrorKind::NonPositiveU, "grid contains u = 0");
  }
  parallel_for(n, [&](std::size_t j) {
    const double r = std::sqrt(-2.0 * std::log(s.u[j]));
    kernels::scale_f64(r, sin_k, std::span(s.z1).subspan(j * n, n));
    kernels::scale_f64(r, cos_k, std::span(s.z2).subspan(j * n, n));
  });
  return s;
}

BoxMullerSampleSet generate_samples(const GridConfig& cfg, const FixedPointPipeline& pipeline) {
  BoxMullerSampleSet s = empty_set(cfg);
  const FixedPointFormat& fmt = pipeline.format;
  s.format = fmt;
  const std::size_t n = cfg.points_per_axis();

  std::vector<std::int64_t> sin_k(n), cos_k(n), r_j(n);
  for (std::size_t k = 0; k < n; ++k) {
    const FxNum v = fx_from_real(s.v[k], fmt);
    s.v[k] = v.value();
    sin_k[k] = pipeline.sin(v).raw;
    cos_k[k] = pipeline.cos(v).raw;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const FxNum u = fx_from_real(s.u[j], fmt);
    s.u[j] = u.value();
    r_j[j] = pipeline.radius(u).raw;
  }

  s.z1_raw.resize(n * n);
  s.z2_raw.resize(n * n);
  parallel_for(n, [&](std::size_t j) {
    auto row1 = std::span(s.z1_raw).subspan(j * n, n);
    auto row2 = std::span(s.z2_raw).subspan(j * n, n);
    const bool ok1 = kernels::fx_scale_mul(r_j[j], sin_k, row1, fmt.frac_bits(), fmt.max_raw());
    const bool ok2 = kernels::fx_scale_mul(r_j[j], cos_k, row2, fmt.frac_bits(), fmt.max_raw());
    if (!ok1 || !ok2) throw Error(ErrorKind::Overflow, "final product leaves the format range");
    raw_to_real(row1, std::span(s.z1).subspan(j * n, n), fmt);
    raw_to_real(row2, std::span(s.z2).subspan(j * n, n), fmt);
  });
  return s;
}

BoxMullerSampleSet correlate(const BoxMullerSampleSet& samples, double rho) {
  if (!(std::fabs(rho) <= 1.0)) throw Error(ErrorKind::InvalidArgument, "need |rho| <= 1");
  if (rho == 0.0) return samples;
  BoxMullerSampleSet out = samples;
  out.rho = rho;
  out.z1_raw.clear();
  out.z2_raw.clear();
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.z2[i] = rho * samples.z1[i] + s * samples.z2[i];
  }
  return out;
}

Eigen::MatrixXd multivariate(const std::vector<BoxMullerSampleSet>& pair_sets,
                             const MultivariateSpec& spec) {
  const auto dim = spec.mean.size();
  if (dim < 1 || spec.chol_lower.rows() != dim || spec.chol_lower.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "mean and chol_lower disagree in dimension");
  }
  if (pair_sets.size() != static_cast<std::size_t>((dim + 1) / 2)) {
    throw Error(ErrorKind::DimensionMismatch, "need ceil(D/2) sample sets");
  }
  const std::size_t count = pair_sets.front().size();
  for (const auto& s : pair_sets) {
    if (s.size() != count) throw Error(ErrorKind::DimensionMismatch, "sample sets differ in length");
  }
  Eigen::MatrixXd z(static_cast<Eigen::Index>(count), dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    const auto& set = pair_sets[static_cast<std::size_t>(c / 2)];
    const auto& col = (c % 2 == 0) ? set.z1 : set.z2;
    z.col(c) = Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(count));
  }
  Eigen::MatrixXd x = z * spec.chol_lower.transpose();
  x.rowwise() += spec.mean.transpose();
  return x;
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols() || cov.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "covariance must be square");
  }
  if (!cov.isApprox(cov.transpose(), 1e-12)) {
    throw Error(ErrorKind::NotPositiveDefinite, "covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NotPositiveDefinite, "covariance is not positive definite");
  }
  return llt.matrixL();
}

JacobianCheck jacobian_check(double u, double v, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  auto x = [&](double uu, double vv) {
    const auto [z1, z2] = transform_point(uu, vv);
    return std::pair{z1, rho * z1 + s * z2};
  };
  constexpr double h = 1e-6;
  const auto [x1_up, x2_up] = x(u + h, v);
  const auto [x1_um, x2_um] = x(u - h, v);
  const auto [x1_vp, x2_vp] = x(u, v + h);
  const auto [x1_vm, x2_vm] = x(u, v - h);
  const double dx1_du = (x1_up - x1_um) / (2 * h);
  const double dx2_du = (x2_up - x2_um) / (2 * h);
  const double dx1_dv = (x1_vp - x1_vm) / (2 * h);
  const double dx2_dv = (x2_vp - x2_vm) / (2 * h);
  return {kTwoPi * s / u, dx1_du * dx2_dv - dx1_dv * dx2_du};
}

double bivariate_normal_pdf(double x1, double x2, double rho) {
  const double s2 = 1.0 - rho * rho;
  const double q = (x1 * x1 - 2.0 * rho * x1 * x2 + x2 * x2) / s2;
  return std::exp(-0.5 * q) / (kTwoPi * std::sqrt(s2));
}

double change_of_variables_product(double u, double v, double rho) {
  const auto [z1, z2] = transform_point(u, v);
  const double x2 = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
  const double jac = kTwoPi * std::sqrt(1.0 - rho * rho) / u;
  return bivariate_normal_pdf(z1, x2, rho) * jac;
}

void write_samples_csv(std::ostream& out, const BoxMullerSampleSet& s) {
  io::CsvWriter w(out);
  if (s.z1_raw.empty()) {
    w.header({"j", "k", "u", "v", "z1", "z2"});
  } else {
    w.header({"j", "k", "u", "v", "z1", "z2", "z1_raw", "z2_raw"});
  }
  const std::size_t n = s.u.size();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t i = j * n + k;
      w.field(j).field(k).field(s.u[j]).field(s.v[k]).field(s.z1[i]).field(s.z2[i]);
      if (!s.z1_raw.empty()) w.field(s.z1_raw[i]).field(s.z2_raw[i]);
      w.end_row();
    }
  }
}

void to_json(nlohmann::json& j, const GridConfig& cfg) {
  j = nlohmann::json{
      {"grid_qubits", cfg.grid_qubits}, {"u_min", cfg.u_min}, {"u_max", cfg.u_max},
      {"v_min", cfg.v_min},             {"v_max", cfg.v_max},
      {"convention", to_string(cfg.convention)},
  };
}

nlohmann::json samples_to_json(const BoxMullerSampleSet& s) {
  nlohmann::json j{
      {"config", s.config},
      {"mode", s.fixed_point() ? "fixedpoint" : "exact"},
      {"rho", s.rho},
      {"count", s.size()},
      {"u", s.u},
      {"v", s.v},
      {"z1", s.z1},
      {"z2", s.z2},
  };
  if (s.format) {
    j["format"] = {{"word_bits", s.format->word_bits}, {"int_bits", s.format->int_bits}};
  }
  if (!s.z1_raw.empty()) {
    j["z1_raw"] = s.z1_raw;
    j["z2_raw"] = s.z2_raw;
  }
  return j;
}

}  // namespace qbm
