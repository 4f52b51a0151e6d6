#pragma once

// Riemann sums against their error bounds: right-endpoint rules are first
// order in 1/n, midpoint rules second order. Derivative bounds are bounds on
// absolute values and are supplied by the caller.

#include <string>
#include <vector>

#include "qbm/quadrature.hpp"

namespace qbm {

struct RiemannResult {
  double sum = 0.0;       // sum of f * cell area
  double integral = 0.0;  // reference value
  double error = 0.0;     // |sum - integral|
  double bound = 0.0;
};

// |f'| <= m1 on [a, b]; bound m1 (b - a)^2 / (2n).
RiemannResult riemann_right_1d(const Fn1& f, double a, double b, int n, double m1);
// |f''| <= m2; bound m2 (b - a)^3 / (24 n^2).
RiemannResult riemann_mid_1d(const Fn1& f, double a, double b, int n, double m2);
// On [a, b]^2 with |f_x| <= mx, |f_y| <= my; bound (mx + my)(b - a)^3 / (2n).
RiemannResult riemann_right_2d(const Fn2& f, double a, double b, int n, double mx, double my);
// |f_xx| <= mx, |f_yy| <= my; bound (mx + my)(b - a)^4 / (24 n^2).
RiemannResult riemann_mid_2d(const Fn2& f, double a, double b, int n, double mx, double my);

enum class RiemannRule { Right1d, Mid1d, Right2d, Mid2d };

std::string_view to_string(RiemannRule rule) noexcept;

struct RiemannCase {
  std::string name;
  RiemannRule rule;
  int n;
  RiemannResult result;
};

// Polynomial and trigonometric test functions with known derivative maxima,
// each evaluated under the rules that apply to it, at several n.
std::vector<RiemannCase> builtin_riemann_suite();

}  // namespace qbm
