#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace qbm {

// theta(z1, z2) with certified bounds D1 >= |d1 theta| + |d2 theta| and
// D2 >= |d11 theta| + |d12 theta| + |d22 theta|. With `relative` set, the
// bounds hold for the derivatives divided by theta (exp-type payoffs).
struct Payoff {
  std::string name;
  std::function<double(double, double)> eval;
  double d1 = 0.0;
  double d2 = 0.0;
  bool relative = false;

  double operator()(double z1, double z2) const { return eval(z1, z2); }
};

// gaussian-bell   exp(-(z1^2 + z2^2)/2)          mean 1/2
// half-sine       (1 + sin z1)/2                 mean 1/2
// clipped-linear  clamp(1/2 + z1/10, 0, 1)       mean 1/2
// exp-z1          exp(z1)                        mean e^(1/2)
// linear          z1                             mean 0
// shifted-linear  param + z1 (param default 3)   mean param
// constant        param (default 1/2)
Payoff builtin_payoff(std::string_view name, double param);
Payoff builtin_payoff(std::string_view name);
const std::vector<std::string>& builtin_payoff_names();

// Closed-form E[theta(Z1, Z2)] for the builtins.
double builtin_payoff_mean(std::string_view name, double param);

}  // namespace qbm
