#pragma once

// One-sided statistics: D_n^+ / D_n^- of a probability-integral-transformed
// sample, the exact finite-n survival function of D_n^+, and its asymptotics.

#include <span>

namespace kolmo::smirnov {

inline constexpr int kMaxExactN = 10000;

struct EcdfStats {
  int n = 0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  double d = 0.0;
};

// P(D_n^+ >= x), exact.  1 <= n <= 10^4, 0 <= x <= 1.  Accuracy degrades
// slowly with n beyond ~10^3 (log-gamma cancellation).
double smirnov_sf_exact(int n, double x);

// exp(-2 x^2): limit of P(sqrt(n) D_n^+ >= x).
double smirnov_sf_limit(double x);

// exp(-(6nx + 1)^2 / (18n)), the tightened finite-n asymptotic.
double maag_dicaire_sf(int n, double x);

// D_n^+ = max_i (i/n - u_(i)), D_n^- = max_i (u_(i) - (i-1)/n), D_n = max.
EcdfStats ecdf_statistics(std::span<const double> pit_values);

}  // namespace kolmo::smirnov
