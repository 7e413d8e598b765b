#include "kolmo/quantile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kolmo {

namespace {

constexpr double kPi = 3.141592653589793;
constexpr double kLogSqrt2Pi = 0.91893853320467274;  // log(sqrt(2 pi))
constexpr double kLn2 = 0.69314718055994531;

// Both bracket families are widened by this relative amount to absorb
// log/exp rounding at the endpoints.
constexpr double kBracketSlack = 256.0 * kMachineEpsilon;

// Upper end of the p_cdf range covered by the fixed-point bracket; x = 1
// maps to L(1) = 0.7300003...
constexpr double kLargePMax = 0.73;

// Below this the quadratic t(p) estimate is not used.
constexpr double kQuadraticSwitch = 0.1;

// Floor on the lower starting point of the fixed-point iteration.
constexpr double kLowStart = 0.04;

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

double ulp(double v) {
  return std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
}

}  // namespace

ProbPair::ProbPair(double p_sf, double p_cdf) : sf_(p_sf), cdf_(p_cdf) {
  if (!is_probability(p_sf) || !is_probability(p_cdf)) {
    throw InvalidPairError("ProbPair: probabilities must lie in [0, 1], got (" +
                           std::to_string(p_sf) + ", " + std::to_string(p_cdf) + ")");
  }
  const double smaller = std::min(p_sf, p_cdf);
  const double larger = std::max(p_sf, p_cdf);
  if (smaller > 0.0 && smaller < std::numeric_limits<double>::min()) {
    if (1.0 - larger > kMachineEpsilon) {
      throw InvalidPairError("ProbPair: subnormal probability must pair with 1");
    }
  } else if (std::abs(p_sf + p_cdf - 1.0) > kPairTolerance) {
    throw InvalidPairError("ProbPair: p_sf + p_cdf differs from 1 by more than 1e-9");
  }
}

ProbPair ProbPair::from_sf(double p_sf) {
  if (!is_probability(p_sf)) throw InvalidPairError("ProbPair: p_sf outside [0, 1]");
  return {p_sf, 1.0 - p_sf};
}

ProbPair ProbPair::from_cdf(double p_cdf) {
  if (!is_probability(p_cdf)) throw InvalidPairError("ProbPair: p_cdf outside [0, 1]");
  return {1.0 - p_cdf, p_cdf};
}

Bracket bracket_small_p(double p_sf) {
  if (!(p_sf > 0.0 && p_sf <= 0.5)) {
    throw DomainError("bracket_small_p: p_sf must lie in (0, 0.5]");
  }
  // 2q lies between p_sf and p_sf / (1 - q^3) with q <= exp(-2 * 0.8275^2).
  // Logs of p_sf / 2 are formed without halving a subnormal p_sf.
  const double log_p = std::log(p_sf) - kLn2;
  const double log_q_lo = log_p - std::log1p(-std::exp(-4.0)) + std::log1p(kBracketSlack);
  const double log_q_hi = log_p + std::log1p(-kBracketSlack);
  return {std::sqrt(-0.5 * log_q_lo), std::sqrt(-0.5 * log_q_hi)};
}

double initial_guess_small_p(double p_sf) {
  if (!(p_sf > 0.0 && p_sf <= 0.5)) {
    throw DomainError("initial_guess_small_p: p_sf must lie in (0, 0.5]");
  }
  // Reversion of p = q - q^4 + q^9 - ..., truncated after the p^13 term.
  // Written as p * (1 + c) so log(p) can be taken from p_sf directly.
  const double p = 0.5 * p_sf;
  const double p3 = p * p * p;
  const double p6 = p3 * p3;
  const double p8 = p6 * p * p;
  const double p9 = p6 * p3;
  const double p11 = p8 * p3;
  const double p12 = p9 * p3;
  const double c = p3 + 4.0 * p6 - p8 + 22.0 * p9 - 13.0 * p11 + 140.0 * p12;
  return std::sqrt(-0.5 * (std::log(p_sf) - kLn2 + std::log1p(c)));
}

double g_p(double x, double p_cdf) {
  if (!(x > 0.0) || !(p_cdf > 0.0)) {
    throw DomainError("g_p: x and p_cdf must be positive");
  }
  // Logs taken separately so that subnormal p_cdf keeps its precision.
  const double log_arg = std::log(p_cdf) + std::log(x) - kLogSqrt2Pi;
  if (!(log_arg < 0.0)) throw DomainError("g_p: p_cdf * x / sqrt(2 pi) must be < 1");
  return kPi / std::sqrt(-8.0 * log_arg);
}

Bracket bracket_large_p(double p_cdf) {
  if (!(p_cdf > 0.0 && p_cdf <= kLargePMax)) {
    throw DomainError("bracket_large_p: p_cdf must lie in (0, 0.73]");
  }
  const double a0 = std::max(std::sqrt(p_cdf), kLowStart);
  const double b0 = 1.0;
  const double a = g_p(g_p(a0, p_cdf), p_cdf);
  const double b = g_p(g_p(b0, p_cdf), p_cdf);
  return {a * (1.0 - kBracketSlack), b * (1.0 + kBracketSlack)};
}

double initial_guess_large_p(double p_cdf, const Bracket& bracket) {
  if (!(p_cdf > 0.0 && p_cdf <= kLargePMax)) {
    throw DomainError("initial_guess_large_p: p_cdf must lie in (0, 0.73]");
  }
  if (p_cdf < kQuadraticSwitch) return bracket.midpoint();
  // The quadratic estimates t = exp(-pi^2 / (8 x^2)), not x itself.
  const double t = (0.2353 * p_cdf + 0.2136) * p_cdf - 0.000764;
  return bracket.clamp(kPi / std::sqrt(-8.0 * std::log(t)));
}

QuantileResult kolmogi(const ProbPair& pair, double rel_tol, int max_iter) {
  const double p_sf = pair.sf();
  const double p_cdf = pair.cdf();
  QuantileResult out;
  if (p_cdf == 0.0) {
    out.x = 0.0;
    out.report = {0, true, 0.0};
    return out;
  }
  if (p_sf == 0.0) {
    out.x = std::numeric_limits<double>::infinity();
    out.report = {0, true, 0.0};
    return out;
  }

  NewtonOptions opts;
  opts.rel_tol = rel_tol;
  opts.max_iter = max_iter;
  opts.f_tol = 2.0 * ulp(std::min(p_sf, p_cdf));

  NewtonResult solved;
  if (p_sf <= 0.5) {
    out.bracket = bracket_small_p(p_sf);
    out.start = out.bracket.clamp(initial_guess_small_p(p_sf));
    solved = bracketed_newton(
        [p_sf](double x) {
          const DistTriple d = kolmogorov(x);
          return Objective{d.sf - p_sf, -d.pdf};
        },
        out.start, out.bracket, opts);
  } else {
    out.bracket = bracket_large_p(p_cdf);
    out.start = out.bracket.clamp(initial_guess_large_p(p_cdf, out.bracket));
    solved = bracketed_newton(
        [p_cdf](double x) {
          const DistTriple d = kolmogorov(x);
          return Objective{p_cdf - d.cdf, -d.pdf};
        },
        out.start, out.bracket, opts);
  }
  out.x = solved.root;
  out.report = solved.report;
  return out;
}

}  // namespace kolmo
