#include "kolmo/dist.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kolmo/errors.hpp"

namespace kolmo {

namespace {

// pi^2 and sqrt(2 pi) as unevaluated double-double sums.
constexpr double kPi2Hi = 9.869604401089358;
constexpr double kPi2Lo = 6.265295508739711e-16;
constexpr double kSqrt2Pi = 2.5066282746310007;
constexpr double kLn2Hi = 0.6931471805599453;
constexpr double kLn2Lo = 2.3190468138462996e-17;

constexpr double kPi = 3.141592653589793;

// Below this, L(x) < 1e-900 and every output is exactly zero.
constexpr double kUnderflowX = 0.03;

// Exponents beyond this are evaluated as m * 2^-kScaleBits to keep t out of
// the subnormal range until the final product.
constexpr double kScaleThreshold = 700.0;
constexpr int kScaleBits = 128;

struct DoubleDouble {
  double hi;
  double lo;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DoubleDouble square(double x) {
  const double hi = x * x;
  return {hi, std::fma(x, x, -hi)};
}

// (num.hi + num.lo) / (den.hi + den.lo), good to about 2^-104.
DoubleDouble divide(DoubleDouble num, DoubleDouble den) {
  const double q1 = num.hi / den.hi;
  double r = std::fma(-q1, den.hi, num.hi);
  r += num.lo - q1 * den.lo;
  const double q2 = r / den.hi;
  return two_sum(q1, q2);
}

// exp(-(a.hi + a.lo)) as mantissa * 2^exponent.
struct ScaledExp {
  double mantissa;
  int exponent;
};

ScaledExp exp_neg(DoubleDouble a) {
  if (a.hi <= kScaleThreshold) {
    return {std::exp(-a.hi) * (1.0 - a.lo), 0};
  }
  // a - kScaleBits * ln2, carried to double-double.
  const DoubleDouble s = two_sum(a.hi, -kScaleBits * kLn2Hi);
  const double lo = s.lo + a.lo - kScaleBits * kLn2Lo;
  return {std::exp(-s.hi) * (1.0 - lo), -kScaleBits};
}

// base^n by squaring.
double ipow(double base, int n) {
  double result = 1.0;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

double log_eps_root(double eps) { return std::sqrt(-2.0 * std::log(eps)); }

void check_args(const char* op, double x, double eps) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError(std::string(op) + ": x must be positive and finite, got " +
                      std::to_string(x));
  }
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError(std::string(op) + ": eps must lie in (0, 1), got " +
                      std::to_string(eps));
  }
}

// pi^2 / (8 x^2)
DoubleDouble theta_exponent(double x) {
  const DoubleDouble x2 = square(x);
  return divide({kPi2Hi, kPi2Lo}, {8.0 * x2.hi, 8.0 * x2.lo});
}

}  // namespace

namespace detail {

int small_x_budget(double x, double eps) {
  const double r = std::floor(log_eps_root(eps) * x / kPi + 1.0);
  if (eps >= kMachineEpsilon) return static_cast<int>(std::clamp(r, 1.0, 2.0));
  return static_cast<int>(std::max(r, 1.0));
}

// Smallest R whose first dropped term, q^((R+2)^2 - 1) relative to the
// leading one, is at most eps.  The closed form floor(sqrt(-2 log eps) / 3x)
// undercounts by one on (0.943, 1.107) and (1.415, 1.5) at eps = 2^-52.
int large_x_budget(double x, double eps) {
  const double r = std::ceil(std::sqrt(1.0 - std::log(eps) / (2.0 * x * x))) - 2.0;
  if (eps >= kMachineEpsilon) return static_cast<int>(std::clamp(r, 0.0, 4.0));
  // Past ~1e6 passes the terms are all zero in double anyway.
  return static_cast<int>(std::clamp(r, 0.0, 1e6));
}

SeriesState small_x_state(double x, double eps) {
  check_args("small_x_state", x, eps);
  SeriesState s;
  s.budget = small_x_budget(x, eps);
  if (x < kUnderflowX) return s;
  const DoubleDouble a = theta_exponent(x);
  const ScaledExp t = exp_neg(a);
  s.t = std::ldexp(t.mantissa, t.exponent);
  s.u = std::exp(-8.0 * a.hi) * (1.0 - 8.0 * a.lo);
  s.q = std::exp(-2.0 * x * x);
  return s;
}

SeriesState large_x_state(double x, double eps) {
  check_args("large_x_state", x, eps);
  SeriesState s;
  s.budget = large_x_budget(x, eps);
  const DoubleDouble x2 = square(x);
  s.q = std::exp(-2.0 * x2.hi) * (1.0 - 2.0 * x2.lo);
  return s;
}

}  // namespace detail

SeriesValue eval_small_x(double x, double eps) {
  check_args("eval_small_x", x, eps);
  const int budget = detail::small_x_budget(x, eps);
  if (x < kUnderflowX) return {0.0, 0.0, budget};

  const DoubleDouble a = theta_exponent(x);
  const ScaledExp t = exp_neg(a);
  // U = t^8
  const double u = std::exp(-8.0 * a.hi) * (1.0 - 8.0 * a.lo);

  double s = 1.0;
  const double top = 2.0 * budget + 1.0;
  double d = top * top;
  for (int r = budget; r >= 1; --r) {
    const double ur = ipow(u, r);
    const double odd = 2.0 * r - 1.0;
    s = 1.0 + ur * s;
    d = odd * odd + ur * d;
  }

  // pi^2 / (4 x^2) == 2a
  const double scaled = kSqrt2Pi * t.mantissa / x;
  const double cdf = std::ldexp(scaled * s, t.exponent);
  const double pdf = std::ldexp(scaled * (2.0 * a.hi * d - s) / x, t.exponent);
  return {cdf, pdf, budget};
}

SeriesValue eval_large_x(double x, double eps) {
  check_args("eval_large_x", x, eps);
  const int budget = detail::large_x_budget(x, eps);

  const DoubleDouble x2 = square(x);
  const double q = std::exp(-2.0 * x2.hi) * (1.0 - 2.0 * x2.lo);
  const double q2 = q * q;

  double s = 1.0;
  const double top = budget + 1.0;
  double d = top * top;
  for (int r = budget; r >= 1; --r) {
    const double qr = q * ipow(q2, r);  // q^(2r+1)
    const double rr = static_cast<double>(r) * r;
    s = 1.0 - qr * s;
    d = rr - qr * d;
  }
  return {2.0 * q * s, 8.0 * q * x * d, budget};
}

DistTriple kolmogorov(double x, double eps) {
  if (std::isnan(x)) throw DomainError("kolmogorov: x is NaN");
  if (x <= 0.0) return {1.0, 0.0, 0.0, Branch::Degenerate, 0};
  if (std::isinf(x)) return {0.0, 1.0, 0.0, Branch::Degenerate, 0};

  DistTriple out;
  if (x <= kBranchCutoff) {
    const SeriesValue v = eval_small_x(x, eps);
    out.cdf = v.value;
    out.sf = 1.0 - v.value;
    out.pdf = v.deriv;
    out.branch = Branch::SmallX;
    out.terms = v.terms;
  } else {
    const SeriesValue v = eval_large_x(x, eps);
    out.sf = v.value;
    out.cdf = 1.0 - v.value;
    out.pdf = v.deriv;
    out.branch = Branch::LargeX;
    out.terms = v.terms;
  }
  out.sf = std::clamp(out.sf, 0.0, 1.0);
  out.cdf = std::clamp(out.cdf, 0.0, 1.0);
  out.pdf = std::max(out.pdf, 0.0);
  return out;
}

}  // namespace kolmo
