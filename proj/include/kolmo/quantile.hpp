#pragma once

// Inverse of the limiting Kolmogorov distribution.
//
// The caller supplies both tail probabilities so that whichever one is small
// can be used at full relative precision.  For p_sf <= 0.5 the root of
// K(x) = p_sf is bracketed from the q-series inequalities and started from a
// truncated power-series reversion; otherwise L(x) = p_cdf is bracketed by
// iterating the one-term fixed-point map g_p.  A bracketed Newton-Raphson
// finishes the job with the exact derivative.

#include <cmath>
#include <concepts>
#include <limits>
#include <utility>

#include "kolmo/dist.hpp"
#include "kolmo/errors.hpp"

namespace kolmo {

inline constexpr double kPairTolerance = 1e-9;
inline constexpr int kDefaultMaxIterations = 100;

// Complementary probabilities (p_sf, p_cdf).
class ProbPair {
 public:
  // Throws InvalidPairError unless the two values are complementary.
  ProbPair(double p_sf, double p_cdf);

  static ProbPair from_sf(double p_sf);
  static ProbPair from_cdf(double p_cdf);

  double sf() const { return sf_; }
  double cdf() const { return cdf_; }

 private:
  double sf_;
  double cdf_;
};

struct Bracket {
  double lo;
  double hi;

  bool contains(double x) const { return lo <= x && x <= hi; }
  double clamp(double x) const { return x < lo ? lo : (x > hi ? hi : x); }
  double midpoint() const { return lo + 0.5 * (hi - lo); }
};

struct NRReport {
  int iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::quiet_NaN();
};

struct NewtonOptions {
  double rel_tol = kMachineEpsilon;
  // Stop as soon as |f| is at or below this.
  double f_tol = 0.0;
  int max_iter = kDefaultMaxIterations;
};

struct NewtonResult {
  double root;
  NRReport report;
};

// Value and first derivative of an objective at one point.
struct Objective {
  double value;
  double deriv;
};

template <typename F>
concept ObjectiveFunction = requires(F f, double x) {
  { f(x) } -> std::convertible_to<Objective>;
};

// Newton-Raphson confined to a bracket.  Any step that would leave the
// current bracket, or a zero derivative, is replaced by bisection.  The
// bracket is tightened after every evaluation using the sign of f and the
// orientation (increasing/decreasing) seen at the start point.
//
// `iterations` counts applied updates, including a final one below the step
// tolerance; stopping on |f| <= f_tol at x0 reports 0.
template <ObjectiveFunction F>
NewtonResult bracketed_newton(F&& f, double x0, Bracket bracket,
                              const NewtonOptions& opts = {});

// Two-callable form: f(x) -> double, f_deriv(x) -> double.
template <typename F, typename D>
  requires std::invocable<F, double> && std::invocable<D, double>
NewtonResult bracketed_newton(F&& f, D&& f_deriv, double x0, Bracket bracket,
                              const NewtonOptions& opts = {}) {
  return bracketed_newton(
      [&](double x) { return Objective{f(x), f_deriv(x)}; }, x0, bracket, opts);
}

// [A, B] around the root of K(x) = p_sf, 0 < p_sf <= 0.5.
Bracket bracket_small_p(double p_sf);

// Reversion-series estimate of the root of K(x) = p_sf, 0 < p_sf <= 0.5.
double initial_guess_small_p(double p_sf);

// pi / sqrt(-8 log(p_cdf * x / sqrt(2 pi))): one-term fixed-point map for
// L(x) = p_cdf.
double g_p(double x, double p_cdf);

// [g_p(g_p(A0)), g_p(g_p(1))] with A0 = max(sqrt(p_cdf), 0.04), 0 < p_cdf <= 0.73.
Bracket bracket_large_p(double p_cdf);

// Quadratic t(p) estimate for p_cdf >= 0.1, else the bracket midpoint.
double initial_guess_large_p(double p_cdf, const Bracket& bracket);

struct QuantileResult {
  double x;
  NRReport report;
  Bracket bracket{0.0, 0.0};  // initial bracket; empty for the special cases
  double start = 0.0;         // clamped initial estimate
};

// x with kolmogorov(x) == (p_sf, p_cdf).  Never throws on non-convergence;
// check report.converged.
QuantileResult kolmogi(const ProbPair& pair, double rel_tol = kMachineEpsilon,
                       int max_iter = kDefaultMaxIterations);

// ---------------------------------------------------------------------------

template <ObjectiveFunction F>
NewtonResult bracketed_newton(F&& f, double x0, Bracket bracket,
                              const NewtonOptions& opts) {
  if (!(bracket.lo <= bracket.hi)) throw DomainError("bracketed_newton: empty bracket");
  const Bracket original = bracket;
  double x = bracket.clamp(x0);
  NRReport report;

  Objective y = f(x);
  // +1: f increases through the root, -1: decreases.
  const double orientation = y.deriv < 0.0 ? -1.0 : 1.0;

  for (;;) {
    report.residual = y.value;
    if (y.value == 0.0 || std::abs(y.value) <= opts.f_tol) {
      report.converged = true;
      break;
    }
    if (y.value * orientation > 0.0) {
      bracket.hi = x;
    } else {
      bracket.lo = x;
    }

    const double step = y.deriv != 0.0 ? -y.value / y.deriv : 0.0;
    const bool newton_ok = y.deriv != 0.0 && std::isfinite(step);
    if (report.iterations >= opts.max_iter) break;
    ++report.iterations;
    if (newton_ok && std::abs(step) <= opts.rel_tol * std::abs(x)) {
      x = original.clamp(x + step);
      report.converged = true;
      break;
    }
    double next = x + step;
    if (!newton_ok || !(bracket.lo < next && next < bracket.hi)) next = bracket.midpoint();

    const double delta = std::abs(next - x);
    x = next;
    if (delta <= opts.rel_tol * std::abs(x) ||
        bracket.hi - bracket.lo <= opts.rel_tol * std::abs(x)) {
      report.converged = true;
      break;
    }
    y = f(x);
  }
  return {x, report};
}

}  // namespace kolmo
