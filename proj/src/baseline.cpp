#include "kolmo/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kolmo/errors.hpp"

namespace kolmo::baseline {

namespace {

// Legacy entry point: arguments below 1.1e-16 short-circuit to 1.
BaselineResult legacy_sf(double y) {
  if (y < 1.1e-16) return {1.0, 0, false};
  return baseline_sf(y);
}

}  // namespace

BaselineResult baseline_sf(double x) {
  if (!(x > 0.0)) throw DomainError("baseline_sf: x must be positive");
  const double a = -2.0 * x * x;
  BaselineResult out;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= kCap; ++k) {
    const double kk = static_cast<double>(k);
    const double term = std::exp(a * kk * kk);
    sum += sign * term;
    sign = -sign;
    out.terms_or_iters = k;
    if (term == 0.0 || std::abs(term / sum) < kTermTolerance) break;
  }
  out.hit_cap = out.terms_or_iters == kCap;
  out.value = 2.0 * sum;
  return out;
}

BaselineIsfResult baseline_isf(double p_sf) {
  if (!(p_sf > 0.0 && p_sf < 1.0)) {
    throw DomainError("baseline_isf: p_sf must lie in (0, 1)");
  }
  BaselineIsfResult out;
  // Start from the inverse of p = 2q.
  const double q0 = std::clamp(0.5 * p_sf, std::numeric_limits<double>::min(),
                               std::nextafter(1.0, 0.0));
  double y = std::sqrt(-0.5 * std::log(q0));
  for (;;) {
    const double dpdy = -8.0 * y * std::exp(-2.0 * y * y);
    const BaselineResult k = legacy_sf(y);
    out.exp_calls += k.terms_or_iters + 1;
    const double step = (p_sf - k.value) / dpdy;
    y += step;
    ++out.terms_or_iters;
    if (out.terms_or_iters >= kCap) break;
    if (!(std::abs(step / y) > kStepTolerance)) break;
  }
  out.hit_cap = out.terms_or_iters >= kCap;
  out.value = y;
  return out;
}

}  // namespace kolmo::baseline
