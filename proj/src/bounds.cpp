#include "qbm/bounds.hpp"

#include <cmath>
#include <numbers>

#include "qbm/error.hpp"

namespace qbm {

namespace {

void require_cells(int n, double a, double b) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "need n >= 1");
  if (!(a < b)) throw Error(ErrorKind::InvalidArgument, "empty interval");
}

RiemannResult finish(double sum, double integral, double bound) {
  return {sum, integral, std::fabs(sum - integral), bound};
}

// offset 1 samples right endpoints, 0.5 midpoints.
double sum_1d(const Fn1& f, double a, double b, int n, double offset) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(a + (i + offset) * h);
  return s * h;
}

double sum_2d(const Fn2& f, double a, double b, int n, double offset) {
  const double h = (b - a) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s += f(a + (i + offset) * h, a + (j + offset) * h);
  }
  return s * h * h;
}

}  // namespace

RiemannResult riemann_right_1d(const Fn1& f, double a, double b, int n, double m1) {
  require_cells(n, a, b);
  const double w = b - a;
  return finish(sum_1d(f, a, b, n, 1.0), integrate(f, a, b), m1 * w * w / (2.0 * n));
}

RiemannResult riemann_mid_1d(const Fn1& f, double a, double b, int n, double m2) {
  require_cells(n, a, b);
  const double w = b - a;
  return finish(sum_1d(f, a, b, n, 0.5), integrate(f, a, b),
                m2 * w * w * w / (24.0 * n * n));
}

RiemannResult riemann_right_2d(const Fn2& f, double a, double b, int n, double mx, double my) {
  require_cells(n, a, b);
  const double w = b - a;
  return finish(sum_2d(f, a, b, n, 1.0), integrate_2d(f, a, b, a, b),
                (mx + my) * w * w * w / (2.0 * n));
}

RiemannResult riemann_mid_2d(const Fn2& f, double a, double b, int n, double mx, double my) {
  require_cells(n, a, b);
  const double w = b - a;
  return finish(sum_2d(f, a, b, n, 0.5), integrate_2d(f, a, b, a, b),
                (mx + my) * w * w * w * w / (24.0 * n * n));
}

std::string_view to_string(RiemannRule rule) noexcept {
  switch (rule) {
    case RiemannRule::Right1d: return "right_1d";
    case RiemannRule::Mid1d: return "mid_1d";
    case RiemannRule::Right2d: return "right_2d";
    case RiemannRule::Mid2d: return "mid_2d";
  }
  return "unknown";
}

std::vector<RiemannCase> builtin_riemann_suite() {
  constexpr double e = std::numbers::e;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  struct Case1 {
    const char* name;
    Fn1 f;
    double a, b, m1, m2;
  };
  struct Case2 {
    const char* name;
    Fn2 f;
    double a, b, mx1, my1, mx2, my2;
  };
  const Case1 one[] = {
      {"linear", [](double x) { return x; }, 0.0, 1.0, 1.0, 0.0},
      {"square", [](double x) { return x * x; }, 0.0, 1.0, 2.0, 2.0},
      {"cube", [](double x) { return x * x * x; }, 0.0, 1.0, 3.0, 6.0},
      {"constant", [](double) { return 3.0; }, 0.0, 1.0, 0.0, 0.0},
      {"exp", [](double x) { return std::exp(x); }, 0.0, 1.0, e, e},
      {"sin2pi", [=](double x) { return std::sin(two_pi * x); }, 0.0, 1.0, two_pi, two_pi * two_pi},
      {"cos3x", [](double x) { return std::cos(3.0 * x); }, 0.0, 2.0, 3.0, 9.0},
  };
  const Case2 two[] = {
      {"sum", [](double x, double y) { return x + y; }, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0},
      {"squares", [](double x, double y) { return x * x + y * y; }, 0.0, 1.0, 2.0, 2.0, 2.0, 2.0},
      {"bilinear", [](double x, double y) { return x * y; }, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0},
      {"constant", [](double, double) { return -2.0; }, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0},
      {"separable_square", [](double x, double) { return x * x; }, 0.0, 1.0, 2.0, 0.0, 2.0, 0.0},
      {"sin_plus_cos", [](double x, double y) { return std::sin(x) + std::cos(y); }, 0.0, 1.0,
       1.0, std::sin(1.0), std::sin(1.0), 1.0},
      {"exp_sum", [](double x, double y) { return std::exp(x + y); }, 0.0, 1.0, e * e, e * e,
       e * e, e * e},
  };
  std::vector<RiemannCase> out;
  for (const auto& c : one) {
    for (int n : {1, 2, 4, 8, 16, 64}) {
      out.push_back({c.name, RiemannRule::Right1d, n, riemann_right_1d(c.f, c.a, c.b, n, c.m1)});
      out.push_back({c.name, RiemannRule::Mid1d, n, riemann_mid_1d(c.f, c.a, c.b, n, c.m2)});
    }
  }
  for (const auto& c : two) {
    for (int n : {1, 2, 4, 8, 16, 32}) {
      out.push_back(
          {c.name, RiemannRule::Right2d, n, riemann_right_2d(c.f, c.a, c.b, n, c.mx1, c.my1)});
      // The midpoint lemma drops an O(1/n^4) remainder; it is asserted from n = 2.
      if (n >= 2) {
        out.push_back(
            {c.name, RiemannRule::Mid2d, n, riemann_mid_2d(c.f, c.a, c.b, n, c.mx2, c.my2)});
      }
    }
  }
  return out;
}

}  // namespace qbm
