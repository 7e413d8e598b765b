#pragma once

// Extended-precision reference values for the limiting distribution, backed by
// MPFR.  Slow; meant for tests, audits and debugging.

#include <mpfr.h>

#include <string>

namespace kolmo::oracle {

inline constexpr int kDefaultDigits = 200;
inline constexpr int kMinDigits = 50;

// Owning MPFR value.  Immutable through the public interface.
class BigReal {
 public:
  explicit BigReal(int digits = kDefaultDigits);
  BigReal(double value, int digits);
  BigReal(const BigReal& other);
  BigReal(BigReal&& other) noexcept;
  BigReal& operator=(const BigReal& other);
  BigReal& operator=(BigReal&& other) noexcept;
  ~BigReal();

  int digits() const { return digits_; }
  double to_double() const;
  // Scientific notation with `significant` digits (0: all working digits).
  std::string to_string(int significant = 0) const;

  mpfr_ptr raw() { return value_; }
  mpfr_srcptr raw() const { return value_; }

 private:
  int digits_;
  mpfr_t value_;
};

// Working precision in bits for a decimal-digit budget (with guard bits).
mpfr_prec_t precision_bits(int digits);

// |a - b| / |b|, as a double.  b == 0 yields |a|.
double relative_difference(const BigReal& a, const BigReal& b);

// Relative error of a double result against a reference.  The denominator is
// floored at the smallest normal double so that underflowed results are
// judged by their absolute error.
double relative_error(double computed, const BigReal& reference);

// L(x) from the all-positive theta series.
BigReal cdf_theta_series(double x, int digits = kDefaultDigits);
// K(x) from the alternating series.
BigReal sf_alternating_series(double x, int digits = kDefaultDigits);

// CDF/SF pick the cancellation-free series (theta for x <= 1).
BigReal cdf(double x, int digits = kDefaultDigits);
// Same, for an argument that is not a double; works at x.digits().
BigReal cdf(const BigReal& x);
BigReal sf(double x, int digits = kDefaultDigits);
BigReal pdf(double x, int digits = kDefaultDigits);

// Roots of K(x) = p_sf and L(x) = p_cdf by bisection to 10^(-digits/2)
// relative.  Inputs in (0, 1).
BigReal quantile_sf(double p_sf, int digits = kDefaultDigits);
BigReal quantile_cdf(double p_cdf, int digits = kDefaultDigits);

}  // namespace kolmo::oracle
