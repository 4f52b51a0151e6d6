#include "qbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qbm {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kMaxDepth = 20;
constexpr double kNegligible = 1e-300;

}  // namespace

double integrate(const Fn1& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  // A single Kronrod pass settles integrands that underflow to zero, where a
  // relative tolerance alone never terminates before the depth cap.
  double err = 0.0;
  double l1 = 0.0;
  const double coarse = GK::integrate(f, a, b, 0, tol, &err, &l1);
  if (err <= tol * l1 || err < kNegligible) return coarse;
  return GK::integrate(f, a, b, kMaxDepth, tol);
}

double integrate_2d(const Fn2& f, double ax, double bx, double ay, double by, double tol) {
  return integrate(
      [&](double x) { return integrate([&](double y) { return f(x, y); }, ay, by, tol); }, ax, bx,
      tol);
}

double gaussian_expectation(const Fn2& f, double r_lo, double r_hi, double tol) {
  r_hi = std::min(r_hi, 40.0);
  if (!(r_lo < r_hi)) return 0.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  auto angular = [&](double r) {
    const double w = r * std::exp(-0.5 * r * r) / two_pi;
    if (w == 0.0) return 0.0;
    const double ring = integrate(
        [&](double phi) { return f(r * std::cos(phi), r * std::sin(phi)); }, 0.0, two_pi, tol);
    return w * ring;
  };
  // Split the radial range so the bulk near r ~ 1 is resolved before the tail.
  double total = 0.0;
  double lo = r_lo;
  for (double cut : {2.0, 5.0, 10.0}) {
    if (cut > lo && cut < r_hi) {
      total += integrate(angular, lo, cut, tol);
      lo = cut;
    }
  }
  return total + integrate(angular, lo, r_hi, tol);
}

}  // namespace qbm
