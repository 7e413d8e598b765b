#include "kolmo/smirnov.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kolmo/errors.hpp"

namespace kolmo::smirnov {

double smirnov_sf_exact(int n, double x) {
  if (n < 1 || n > kMaxExactN) {
    throw DomainError("smirnov_sf_exact: n must lie in [1, 10000], got " + std::to_string(n));
  }
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("smirnov_sf_exact: x must lie in [0, 1]");
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;

  const double nd = n;
  // j = 0: the leading x cancels (x + 0)^-1.
  double sum = std::pow(1.0 - x, nd);
  const int jmax = static_cast<int>(std::floor(nd * (1.0 - x)));
  const double log_x = std::log(x);
  const double lg_n1 = std::lgamma(nd + 1.0);
  for (int j = 1; j <= jmax; ++j) {
    const double jd = j;
    double base = 1.0 - x - jd / nd;
    if (base < 0.0) base = 0.0;
    const int power = n - j;
    if (base == 0.0 && power > 0) continue;
    const double log_binom = lg_n1 - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0);
    double log_term = log_binom + log_x + (jd - 1.0) * std::log(x + jd / nd);
    if (power > 0) log_term += power * std::log(base);
    sum += std::exp(log_term);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double smirnov_sf_limit(double x) {
  if (!(x >= 0.0)) throw DomainError("smirnov_sf_limit: x must be non-negative");
  return std::exp(-2.0 * x * x);
}

double maag_dicaire_sf(int n, double x) {
  if (n < 1) throw DomainError("maag_dicaire_sf: n must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("maag_dicaire_sf: x must lie in [0, 1]");
  const double nd = n;
  const double a = 6.0 * nd * x + 1.0;
  return std::exp(-a * a / (18.0 * nd));
}

EcdfStats ecdf_statistics(std::span<const double> pit_values) {
  if (pit_values.empty()) throw DomainError("ecdf_statistics: empty sample");
  std::vector<double> u(pit_values.begin(), pit_values.end());
  for (double v : u) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("ecdf_statistics: value outside [0, 1]: " + std::to_string(v));
    }
  }
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  EcdfStats s;
  s.n = static_cast<int>(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double rank = static_cast<double>(i);
    s.d_plus = std::max(s.d_plus, (rank + 1.0) / n - u[i]);
    s.d_minus = std::max(s.d_minus, u[i] - rank / n);
  }
  s.d = std::max(s.d_plus, s.d_minus);
  return s;
}

}  // namespace kolmo::smirnov
