#include "qbm/payoff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qbm/error.hpp"

namespace qbm {

namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

double or_default(double param, double fallback) { return std::isnan(param) ? fallback : param; }

}  // namespace

const std::vector<std::string>& builtin_payoff_names() {
  static const std::vector<std::string> names{"gaussian-bell", "half-sine", "clipped-linear",
                                              "exp-z1",        "linear",    "shifted-linear",
                                              "constant"};
  return names;
}

Payoff builtin_payoff(std::string_view name) { return builtin_payoff(name, kUnset); }

Payoff builtin_payoff(std::string_view name, double param) {
  const std::string n(name);
  if (n == "gaussian-bell") {
    // |grad| sum <= sqrt(2) r e^{-r^2/2} <= sqrt(2/e); the Hessian sum peaks
    // at 2.0 at the origin and stays below 2.15 everywhere (probed in tests).
    return {n, [](double a, double b) { return std::exp(-0.5 * (a * a + b * b)); },
            std::sqrt(2.0 / std::numbers::e), 2.15, false};
  }
  if (n == "half-sine") {
    return {n, [](double a, double) { return 0.5 * (1.0 + std::sin(a)); }, 0.5, 0.5, false};
  }
  if (n == "clipped-linear") {
    // Kinks at |z1| = 5 lie outside every ring this toolkit builds.
    return {n, [](double a, double) { return std::clamp(0.5 + 0.1 * a, 0.0, 1.0); }, 0.1, 0.0,
            false};
  }
  if (n == "exp-z1") {
    return {n, [](double a, double) { return std::exp(a); }, 1.0, 1.0, true};
  }
  if (n == "linear") {
    return {n, [](double a, double) { return a; }, 1.0, 0.0, false};
  }
  if (n == "shifted-linear") {
    const double c = or_default(param, 3.0);
    return {n, [c](double a, double) { return c + a; }, 1.0, 0.0, false};
  }
  if (n == "constant") {
    const double c = or_default(param, 0.5);
    return {n, [c](double, double) { return c; }, 0.0, 0.0, false};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown payoff '" + n + "'");
}

double builtin_payoff_mean(std::string_view name, double param) {
  const std::string n(name);
  if (n == "gaussian-bell" || n == "half-sine" || n == "clipped-linear") return 0.5;
  if (n == "exp-z1") return std::exp(0.5);
  if (n == "linear") return 0.0;
  if (n == "shifted-linear") return or_default(param, 3.0);
  if (n == "constant") return or_default(param, 0.5);
  throw Error(ErrorKind::InvalidArgument, "unknown payoff '" + n + "'");
}

}  // namespace qbm
