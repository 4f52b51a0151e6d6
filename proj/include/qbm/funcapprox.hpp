#pragma once

// Piecewise-polynomial evaluation of sin(2*pi*x), ln x and sqrt x in fixed
// point, with the range reductions an arithmetic circuit would use. Each
// piece carries monomial coefficients, quantized to the working format, and
// is evaluated by Horner's rule with fx_mul/fx_add.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qbm/fixedpoint.hpp"

namespace qbm {

enum class TargetFunction {
  Sin2Pi,      // sin(2 pi x)
  Cos2Pi,      // cos(2 pi x)
  Ln,          // ln x
  Sqrt,        // sqrt x
  SqrtNeg2Ln,  // sqrt(-2 ln x), the Box-Muller radius
};

std::string_view to_string(TargetFunction f) noexcept;
TargetFunction target_from_string(std::string_view name);

// High-precision reference value.
long double reference_value(TargetFunction f, long double x);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Global: coefficients are in x itself. Local: in t = (x - piece start) *
// 2^local_shift, which a circuit gets for free from the low bits of x after
// the piece-select bits; keeps coefficients small for any degree.
enum class PolyBasis { Global, Local };

struct PiecewisePolySpec {
  TargetFunction target = TargetFunction::Sin2Pi;
  int pieces = 1;
  int degree = 1;
  Interval domain;
  FixedPointFormat format;
  // pieces x (degree + 1), ascending powers within each piece.
  std::vector<FxNum> coeffs;
  PolyBasis basis = PolyBasis::Global;
  int local_shift = 0;

  std::span<const FxNum> piece(int index) const;
  // Left end of piece `index`, truncated onto the format grid.
  FxNum piece_start(int index) const;
  // Polynomial argument for x: x itself, or the local coordinate.
  FxNum argument(const FxNum& x, int index) const;
  // Piece containing x; throws OutOfDomain outside [lo, hi].
  int piece_index(const FxNum& x) const;

  friend bool operator==(const PiecewisePolySpec&, const PiecewisePolySpec&) = default;
};

// Chebyshev interpolant of `target` on each of `pieces` equal subintervals.
PiecewisePolySpec build_poly_spec(TargetFunction target, const FixedPointFormat& fmt, int pieces,
                                  int degree, Interval domain,
                                  PolyBasis basis = PolyBasis::Local);

// Single-piece spec from explicit ascending coefficients.
PiecewisePolySpec make_poly_spec(TargetFunction target, const FixedPointFormat& fmt,
                                 Interval domain, std::span<const double> coeffs);

// The two-coefficient approximations of the small-circuit experiment:
// sin(2 pi x) ~ 1/8 + 4x on [0, 1/4] and sqrt(-2 ln x) ~ 2.5 (1 - x) on [0, 1].
PiecewisePolySpec mini_sin_spec(const FixedPointFormat& fmt);
PiecewisePolySpec mini_radius_spec(const FixedPointFormat& fmt);

// Horner evaluation of the piece containing x: exactly `degree` fx_mul calls.
FxNum eval_poly(const PiecewisePolySpec& spec, const FxNum& x);

// x in [0, 1]. The spec covers sin(2 pi x) on [0, 1/4]; other quadrants fold
// onto it. sin2pi_fx(x) == -sin2pi_fx(1 - x) holds bit for bit.
FxNum sin2pi_fx(const FxNum& x, const PiecewisePolySpec& sin_spec);
FxNum cos2pi_fx(const FxNum& x, const PiecewisePolySpec& sin_spec);

// 0 < x <= 1. ln x = p(x * 2^-k) + k ln 2 with k = ceil(log2 x); the spec
// covers [1/2, 1].
FxNum ln_fx(const FxNum& x, const PiecewisePolySpec& ln_spec, const FxNum& ln2_const);

// x >= 0. sqrt x = 2^(e/2) p(x * 2^-e) with even e chosen so the argument
// lies in [1/4, 1); the spec covers [1/4, 1].
FxNum sqrt_fx(const FxNum& x, const PiecewisePolySpec& sqrt_spec);

// Max |fixed-point evaluation - reference| over `probes` equispaced points.
double approx_error_report(const PiecewisePolySpec& spec, int probes);

void to_json(nlohmann::json& j, const PiecewisePolySpec& spec);
void from_json(const nlohmann::json& j, PiecewisePolySpec& spec);

}  // namespace qbm
