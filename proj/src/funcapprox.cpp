#include "qbm/funcapprox.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <nlohmann/json.hpp>

#include "qbm/error.hpp"

namespace qbm {

namespace {

constexpr long double kTwoPi = 2.0L * std::numbers::pi_v<long double>;

// Monomial coefficients (ascending) of the Lagrange interpolant through
// (xs[i], ys[i]).
std::vector<long double> lagrange_monomial(const std::vector<long double>& xs,
                                           const std::vector<long double>& ys) {
  const std::size_t n = xs.size();
  std::vector<long double> out(n, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<long double> basis{1.0L};
    long double denom = 1.0L;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<long double> next(basis.size() + 1, 0.0L);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] += basis[k];
        next[k] -= basis[k] * xs[j];
      }
      basis = std::move(next);
      denom *= xs[i] - xs[j];
    }
    for (std::size_t k = 0; k < n; ++k) out[k] += ys[i] * basis[k] / denom;
  }
  return out;
}

void validate_shape(int pieces, int degree, Interval domain) {
  if (pieces < 1 || !std::has_single_bit(static_cast<unsigned>(pieces))) {
    throw Error(ErrorKind::InvalidArgument, "pieces must be a power of two");
  }
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  if (!(domain.lo < domain.hi)) throw Error(ErrorKind::InvalidArgument, "empty domain");
}

void check_singularity(TargetFunction f, Interval d) {
  bool bad = false;
  switch (f) {
    case TargetFunction::Ln: bad = d.lo <= 0.0; break;
    case TargetFunction::Sqrt: bad = d.lo < 0.0; break;
    case TargetFunction::SqrtNeg2Ln: bad = d.lo <= 0.0 || d.hi > 1.0; break;
    case TargetFunction::Sin2Pi:
    case TargetFunction::Cos2Pi: break;
  }
  if (bad) {
    throw Error(ErrorKind::DomainContainsSingularity,
                std::string(to_string(f)) + " is singular on [" + std::to_string(d.lo) + ", " +
                    std::to_string(d.hi) + "]");
  }
}

}  // namespace

std::string_view to_string(TargetFunction f) noexcept {
  switch (f) {
    case TargetFunction::Sin2Pi: return "sin2pi";
    case TargetFunction::Cos2Pi: return "cos2pi";
    case TargetFunction::Ln: return "ln";
    case TargetFunction::Sqrt: return "sqrt";
    case TargetFunction::SqrtNeg2Ln: return "sqrt_neg2ln";
  }
  return "unknown";
}

TargetFunction target_from_string(std::string_view name) {
  for (auto f : {TargetFunction::Sin2Pi, TargetFunction::Cos2Pi, TargetFunction::Ln,
                 TargetFunction::Sqrt, TargetFunction::SqrtNeg2Ln}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown target function '" + std::string(name) + "'");
}

long double reference_value(TargetFunction f, long double x) {
  switch (f) {
    case TargetFunction::Sin2Pi: return std::sin(kTwoPi * x);
    case TargetFunction::Cos2Pi: return std::cos(kTwoPi * x);
    case TargetFunction::Ln: return std::log(x);
    case TargetFunction::Sqrt: return std::sqrt(x);
    case TargetFunction::SqrtNeg2Ln: return std::sqrt(-2.0L * std::log(x));
  }
  return 0.0L;
}

std::span<const FxNum> PiecewisePolySpec::piece(int index) const {
  const auto width = static_cast<std::size_t>(degree + 1);
  return std::span<const FxNum>(coeffs).subspan(static_cast<std::size_t>(index) * width, width);
}

int PiecewisePolySpec::piece_index(const FxNum& x) const {
  const double v = x.value();
  if (v < domain.lo || v > domain.hi) {
    throw Error(ErrorKind::OutOfDomain, "argument " + std::to_string(v) + " outside [" +
                                            std::to_string(domain.lo) + ", " +
                                            std::to_string(domain.hi) + "]");
  }
  if (pieces == 1) return 0;
  const double t = (v - domain.lo) / (domain.hi - domain.lo) * pieces;
  const int idx = static_cast<int>(std::floor(t));
  return idx >= pieces ? pieces - 1 : idx;
}

FxNum PiecewisePolySpec::piece_start(int index) const {
  const double width = (domain.hi - domain.lo) / pieces;
  return fx_from_real(domain.lo + index * width, format);
}

FxNum PiecewisePolySpec::argument(const FxNum& x, int index) const {
  if (basis == PolyBasis::Global) return x;
  return fx_shift(fx_sub(x, piece_start(index)), local_shift);
}

PiecewisePolySpec build_poly_spec(TargetFunction target, const FixedPointFormat& fmt, int pieces,
                                  int degree, Interval domain, PolyBasis basis) {
  validate_shape(pieces, degree, domain);
  check_singularity(target, domain);

  PiecewisePolySpec spec{target, pieces, degree, domain, fmt, {}};
  spec.basis = basis;
  const long double width = (static_cast<long double>(domain.hi) - domain.lo) / pieces;
  if (basis == PolyBasis::Local) {
    // Largest shift keeping the local coordinate within [0, 1].
    spec.local_shift = static_cast<int>(std::floor(-std::log2(width)));
  }
  spec.coeffs.reserve(static_cast<std::size_t>(pieces) * (degree + 1));
  const int nodes = degree + 1;
  for (int p = 0; p < pieces; ++p) {
    const long double lo = domain.lo + p * width;
    const long double mid = lo + width / 2;
    const long double origin = basis == PolyBasis::Local ? spec.piece_start(p).value() : 0.0L;
    const long double scale = std::ldexp(1.0L, spec.local_shift);
    std::vector<long double> ts(nodes), ys(nodes);
    for (int i = 0; i < nodes; ++i) {
      const long double angle = std::numbers::pi_v<long double> * (2 * i + 1) / (2 * nodes);
      const long double x = mid + (width / 2) * std::cos(angle);
      ts[i] = (x - origin) * scale;
      ys[i] = reference_value(target, x);
    }
    for (long double c : lagrange_monomial(ts, ys)) {
      spec.coeffs.push_back(fx_from_real(static_cast<double>(c), fmt));
    }
  }
  return spec;
}

PiecewisePolySpec make_poly_spec(TargetFunction target, const FixedPointFormat& fmt,
                                 Interval domain, std::span<const double> coeffs) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "no coefficients");
  validate_shape(1, static_cast<int>(coeffs.size()) - 1, domain);
  PiecewisePolySpec spec{target, 1, static_cast<int>(coeffs.size()) - 1, domain, fmt, {}};
  for (double c : coeffs) spec.coeffs.push_back(fx_from_real(c, fmt));
  return spec;
}

PiecewisePolySpec mini_sin_spec(const FixedPointFormat& fmt) {
  const double c[] = {0.125, 4.0};
  return make_poly_spec(TargetFunction::Sin2Pi, fmt, {0.0, 0.25}, c);
}

PiecewisePolySpec mini_radius_spec(const FixedPointFormat& fmt) {
  const double c[] = {2.5, -2.5};
  return make_poly_spec(TargetFunction::SqrtNeg2Ln, fmt, {0.0, 1.0}, c);
}

FxNum eval_poly(const PiecewisePolySpec& spec, const FxNum& x) {
  if (!(x.format == spec.format)) {
    throw Error(ErrorKind::InvalidFormat, "argument format differs from the spec format");
  }
  const int index = spec.piece_index(x);
  const auto c = spec.piece(index);
  const FxNum t = spec.argument(x, index);
  FxNum acc = c[static_cast<std::size_t>(spec.degree)];
  for (int i = spec.degree - 1; i >= 0; --i) {
    acc = fx_add(fx_mul(acc, t), c[static_cast<std::size_t>(i)]);
  }
  return acc;
}

FxNum sin2pi_fx(const FxNum& x, const PiecewisePolySpec& sin_spec) {
  const FixedPointFormat& fmt = x.format;
  if (fmt.frac_bits() < 2) throw Error(ErrorKind::InvalidFormat, "need at least 2 fraction bits");
  const std::int64_t quarter = std::int64_t{1} << (fmt.frac_bits() - 2);
  const std::int64_t r = x.raw;
  if (r < 0 || r > 4 * quarter) {
    throw Error(ErrorKind::OutOfDomain, "sin2pi_fx expects x in [0, 1]");
  }
  auto at = [&](std::int64_t folded) { return eval_poly(sin_spec, FxNum{fmt, folded}); };
  if (r <= quarter) return at(r);
  if (r < 2 * quarter) return at(2 * quarter - r);
  if (r == 2 * quarter) return FxNum{fmt, 0};  // the only point equal to its own mirror
  if (r <= 3 * quarter) return fx_neg(at(r - 2 * quarter));
  return fx_neg(at(4 * quarter - r));
}

FxNum cos2pi_fx(const FxNum& x, const PiecewisePolySpec& sin_spec) {
  const FixedPointFormat& fmt = x.format;
  if (fmt.frac_bits() < 2) throw Error(ErrorKind::InvalidFormat, "need at least 2 fraction bits");
  const std::int64_t quarter = std::int64_t{1} << (fmt.frac_bits() - 2);
  if (x.raw < 0 || x.raw > 4 * quarter) {
    throw Error(ErrorKind::OutOfDomain, "cos2pi_fx expects x in [0, 1]");
  }
  // cos(2 pi x) = sin(2 pi (1/4 - x)), wrapped into [0, 1).
  std::int64_t shifted = quarter - x.raw;
  if (shifted < 0) shifted += 4 * quarter;
  return sin2pi_fx(FxNum{fmt, shifted}, sin_spec);
}

FxNum ln_fx(const FxNum& x, const PiecewisePolySpec& ln_spec, const FxNum& ln2_const) {
  if (x.raw <= 0) throw Error(ErrorKind::NonPositiveInput, "ln_fx needs x > 0");
  const int k = leading_bit_index(x);
  if (k > 0) throw Error(ErrorKind::OutOfDomain, "ln_fx expects x <= 1");
  const FxNum reduced = fx_shift(x, -k);
  return fx_add(eval_poly(ln_spec, reduced), fx_mul_int(ln2_const, k));
}

FxNum sqrt_fx(const FxNum& x, const PiecewisePolySpec& sqrt_spec) {
  if (x.raw < 0) throw Error(ErrorKind::NegativeInput, "sqrt_fx needs x >= 0");
  if (x.raw == 0) return x;
  // value in [2^(top-1), 2^top)
  const int top = static_cast<int>(std::bit_width(static_cast<std::uint64_t>(x.raw))) -
                  x.format.frac_bits();
  const int e = (top % 2 == 0) ? top : top + 1;
  const FxNum reduced = fx_shift(x, -e);
  return fx_shift(eval_poly(sqrt_spec, reduced), e / 2);
}

double approx_error_report(const PiecewisePolySpec& spec, int probes) {
  if (probes < 2) throw Error(ErrorKind::InvalidArgument, "need at least 2 probes");
  double worst = 0.0;
  const double lo = spec.domain.lo;
  const double hi = spec.domain.hi;
  for (int i = 0; i < probes; ++i) {
    const double t = lo + (hi - lo) * i / (probes - 1);
    FxNum x = fx_from_real(t, spec.format);
    if (x.value() < lo) x.raw += 1;
    const double got = eval_poly(spec, x).value();
    const long double want = reference_value(spec.target, x.value());
    worst = std::max(worst, static_cast<double>(std::fabs(got - want)));
  }
  return worst;
}

void to_json(nlohmann::json& j, const PiecewisePolySpec& spec) {
  nlohmann::json rows = nlohmann::json::array();
  for (int p = 0; p < spec.pieces; ++p) {
    nlohmann::json row = nlohmann::json::array();
    for (const FxNum& c : spec.piece(p)) row.push_back(c.raw);
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{
      {"target", to_string(spec.target)},
      {"pieces", spec.pieces},
      {"degree", spec.degree},
      {"domain", {spec.domain.lo, spec.domain.hi}},
      {"format", {{"word_bits", spec.format.word_bits}, {"int_bits", spec.format.int_bits}}},
      {"basis", spec.basis == PolyBasis::Local ? "local" : "global"},
      {"local_shift", spec.local_shift},
      {"coeffs_raw", std::move(rows)},
  };
}

void from_json(const nlohmann::json& j, PiecewisePolySpec& spec) {
  spec.target = target_from_string(j.at("target").get<std::string>());
  spec.pieces = j.at("pieces").get<int>();
  spec.degree = j.at("degree").get<int>();
  spec.domain = {j.at("domain").at(0).get<double>(), j.at("domain").at(1).get<double>()};
  spec.format = FixedPointFormat(j.at("format").at("word_bits").get<int>(),
                                 j.at("format").at("int_bits").get<int>());
  validate_shape(spec.pieces, spec.degree, spec.domain);
  const std::string basis = j.value("basis", std::string("global"));
  if (basis != "global" && basis != "local") {
    throw Error(ErrorKind::InvalidArgument, "unknown basis '" + basis + "'");
  }
  spec.basis = basis == "local" ? PolyBasis::Local : PolyBasis::Global;
  spec.local_shift = j.value("local_shift", 0);
  const auto& rows = j.at("coeffs_raw");
  if (rows.size() != static_cast<std::size_t>(spec.pieces)) {
    throw Error(ErrorKind::DimensionMismatch, "coeffs_raw has the wrong number of pieces");
  }
  spec.coeffs.clear();
  for (const auto& row : rows) {
    if (row.size() != static_cast<std::size_t>(spec.degree + 1)) {
      throw Error(ErrorKind::DimensionMismatch, "coeffs_raw row has the wrong length");
    }
    for (const auto& raw : row) spec.coeffs.push_back(fx_from_raw(raw.get<std::int64_t>(), spec.format));
  }
}

}  // namespace qbm
