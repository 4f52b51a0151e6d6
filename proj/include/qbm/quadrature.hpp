#pragma once

// Adaptive Gauss-Kronrod reference integrals (Boost.Math underneath).

#include <functional>

namespace qbm {

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

double integrate(const Fn1& f, double a, double b, double tol = 1e-13);

// Iterated integral over [ax, bx] x [ay, by].
double integrate_2d(const Fn2& f, double ax, double bx, double ay, double by, double tol = 1e-13);

// E[f(Z1, Z2)] restricted to the ring r_lo <= |Z| <= r_hi, for independent
// standard normals, in polar coordinates. r_hi is clipped at 40 where the
// density is below 1e-340.
double gaussian_expectation(const Fn2& f, double r_lo = 0.0, double r_hi = 40.0,
                            double tol = 1e-12);

}  // namespace qbm
