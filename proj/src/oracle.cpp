#include "kolmo/oracle.hpp"

#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>

#include "kolmo/errors.hpp"

namespace kolmo::oracle {

namespace {

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

void check_digits(int digits) {
  if (digits < kMinDigits) {
    throw DomainError("oracle: at least " + std::to_string(kMinDigits) +
                      " digits required, got " + std::to_string(digits));
  }
}

void check_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("oracle: x must be positive and finite");
  }
}

// Stop once a term drops below 10^-digits relative to the running sum.
bool negligible(const BigReal& term, const BigReal& sum, const BigReal& cutoff) {
  BigReal ratio(cutoff.digits());
  mpfr_div(ratio.raw(), term.raw(), sum.raw(), kRound);
  mpfr_abs(ratio.raw(), ratio.raw(), kRound);
  return mpfr_cmp(ratio.raw(), cutoff.raw()) < 0;
}

BigReal relative_cutoff(int digits) {
  BigReal c(digits);
  mpfr_set_ui(c.raw(), 10, kRound);
  mpfr_pow_si(c.raw(), c.raw(), -digits, kRound);
  return c;
}

// pi^2 / (8 x^2)
BigReal theta_exponent(const BigReal& x) {
  const int digits = x.digits();
  BigReal a(digits), x2(digits);
  mpfr_sqr(x2.raw(), x.raw(), kRound);
  mpfr_mul_ui(x2.raw(), x2.raw(), 8, kRound);
  mpfr_const_pi(a.raw(), kRound);
  mpfr_sqr(a.raw(), a.raw(), kRound);
  mpfr_div(a.raw(), a.raw(), x2.raw(), kRound);
  return a;
}

// sqrt(2 pi)
BigReal sqrt_two_pi(int digits) {
  BigReal c(digits);
  mpfr_const_pi(c.raw(), kRound);
  mpfr_mul_ui(c.raw(), c.raw(), 2, kRound);
  mpfr_sqrt(c.raw(), c.raw(), kRound);
  return c;
}

// sum over odd n of weight(n) * exp(-n^2 a), weight(n) given as n^2 * w2 + w0.
BigReal theta_sum(const BigReal& a, const BigReal& w2, const BigReal& w0,
                  int digits) {
  const BigReal cutoff = relative_cutoff(digits);
  BigReal sum(digits), term(digits), weight(digits);
  mpfr_set_ui(sum.raw(), 0, kRound);
  for (unsigned long n = 1;; n += 2) {
    mpfr_mul_ui(term.raw(), a.raw(), n * n, kRound);
    mpfr_neg(term.raw(), term.raw(), kRound);
    mpfr_exp(term.raw(), term.raw(), kRound);
    mpfr_mul_ui(weight.raw(), w2.raw(), n * n, kRound);
    mpfr_add(weight.raw(), weight.raw(), w0.raw(), kRound);
    mpfr_mul(term.raw(), term.raw(), weight.raw(), kRound);
    mpfr_add(sum.raw(), sum.raw(), term.raw(), kRound);
    if (mpfr_zero_p(sum.raw()) || negligible(term, sum, cutoff)) break;
  }
  return sum;
}

// sum_{k>=1} (-1)^(k-1) k^power exp(-2 k^2 x^2)
BigReal alternating_sum(const BigReal& x, unsigned power) {
  const int digits = x.digits();
  const BigReal cutoff = relative_cutoff(digits);
  BigReal two_x2(digits);
  mpfr_sqr(two_x2.raw(), x.raw(), kRound);
  mpfr_mul_ui(two_x2.raw(), two_x2.raw(), 2, kRound);
  BigReal sum(digits), term(digits);
  mpfr_set_ui(sum.raw(), 0, kRound);
  for (unsigned long k = 1;; ++k) {
    mpfr_mul_ui(term.raw(), two_x2.raw(), k * k, kRound);
    mpfr_neg(term.raw(), term.raw(), kRound);
    mpfr_exp(term.raw(), term.raw(), kRound);
    for (unsigned i = 0; i < power; ++i) mpfr_mul_ui(term.raw(), term.raw(), k, kRound);
    if (k % 2 == 0) {
      mpfr_sub(sum.raw(), sum.raw(), term.raw(), kRound);
    } else {
      mpfr_add(sum.raw(), sum.raw(), term.raw(), kRound);
    }
    if (mpfr_zero_p(term.raw()) || negligible(term, sum, cutoff)) break;
  }
  return sum;
}

BigReal one_minus(const BigReal& v) {
  BigReal r(v.digits());
  mpfr_ui_sub(r.raw(), 1, v.raw(), kRound);
  return r;
}

// Bisection for a decreasing function g with g(root) == target.
template <typename G>
BigReal bisect_decreasing(G&& g, const BigReal& target, double lo_init,
                          double hi_init, int digits) {
  BigReal lo(lo_init, digits), hi(hi_init, digits), mid(digits);
  BigReal width(digits), tol(digits);
  mpfr_set_ui(tol.raw(), 10, kRound);
  mpfr_pow_si(tol.raw(), tol.raw(), -(digits / 2), kRound);
  for (;;) {
    mpfr_sub(width.raw(), hi.raw(), lo.raw(), kRound);
    mpfr_div(width.raw(), width.raw(), lo.raw(), kRound);
    if (mpfr_cmp(width.raw(), tol.raw()) <= 0) break;
    mpfr_add(mid.raw(), lo.raw(), hi.raw(), kRound);
    mpfr_div_2ui(mid.raw(), mid.raw(), 1, kRound);
    const BigReal value = g(mid);
    if (mpfr_cmp(value.raw(), target.raw()) > 0) {
      mpfr_set(lo.raw(), mid.raw(), kRound);
    } else {
      mpfr_set(hi.raw(), mid.raw(), kRound);
    }
  }
  mpfr_add(mid.raw(), lo.raw(), hi.raw(), kRound);
  mpfr_div_2ui(mid.raw(), mid.raw(), 1, kRound);
  return mid;
}

// Big-argument variants used by the bisection.
BigReal theta_cdf_big(const BigReal& x) {
  const int digits = x.digits();
  const BigReal a = theta_exponent(x);
  BigReal zero(digits), one(digits);
  mpfr_set_ui(zero.raw(), 0, kRound);
  mpfr_set_ui(one.raw(), 1, kRound);
  BigReal sum = theta_sum(a, zero, one, digits);
  mpfr_mul(sum.raw(), sum.raw(), sqrt_two_pi(digits).raw(), kRound);
  mpfr_div(sum.raw(), sum.raw(), x.raw(), kRound);
  return sum;
}

BigReal alternating_sf_big(const BigReal& x) {
  BigReal sum = alternating_sum(x, 0);
  mpfr_mul_ui(sum.raw(), sum.raw(), 2, kRound);
  return sum;
}

BigReal sf_big(const BigReal& x) {
  if (mpfr_cmp_ui(x.raw(), 1) <= 0) return one_minus(theta_cdf_big(x));
  return alternating_sf_big(x);
}

BigReal cdf_big(const BigReal& x) {
  if (mpfr_cmp_ui(x.raw(), 1) <= 0) return theta_cdf_big(x);
  return one_minus(alternating_sf_big(x));
}

void check_probability(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("oracle: probability must lie in (0, 1)");
}

}  // namespace

mpfr_prec_t precision_bits(int digits) {
  return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 32;
}

BigReal::BigReal(int digits) : digits_(digits) {
  mpfr_init2(value_, precision_bits(digits));
  mpfr_set_ui(value_, 0, kRound);
}

BigReal::BigReal(double value, int digits) : BigReal(digits) {
  mpfr_set_d(value_, value, kRound);
}

BigReal::BigReal(const BigReal& other) : BigReal(other.digits_) {
  mpfr_set(value_, other.value_, kRound);
}

BigReal::BigReal(BigReal&& other) noexcept : digits_(other.digits_) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_swap(value_, other.value_);
}

BigReal& BigReal::operator=(const BigReal& other) {
  if (this != &other) {
    digits_ = other.digits_;
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

BigReal& BigReal::operator=(BigReal&& other) noexcept {
  std::swap(digits_, other.digits_);
  mpfr_swap(value_, other.value_);
  return *this;
}

BigReal::~BigReal() { mpfr_clear(value_); }

double BigReal::to_double() const { return mpfr_get_d(value_, kRound); }

std::string BigReal::to_string(int significant) const {
  if (significant <= 0) significant = digits_;
  const std::unique_ptr<char, void (*)(char*)> text(
      [&] {
        char* buf = nullptr;
        mpfr_asprintf(&buf, "%.*Re", significant - 1, value_);
        return buf;
      }(),
      [](char* p) { mpfr_free_str(p); });
  return text ? std::string(text.get()) : std::string("nan");
}

double relative_difference(const BigReal& a, const BigReal& b) {
  BigReal diff(std::max(a.digits(), b.digits()));
  mpfr_sub(diff.raw(), a.raw(), b.raw(), kRound);
  mpfr_abs(diff.raw(), diff.raw(), kRound);
  if (!mpfr_zero_p(b.raw())) {
    mpfr_div(diff.raw(), diff.raw(), b.raw(), kRound);
    mpfr_abs(diff.raw(), diff.raw(), kRound);
  }
  return diff.to_double();
}

double relative_error(double computed, const BigReal& reference) {
  BigReal diff(computed, reference.digits());
  mpfr_sub(diff.raw(), diff.raw(), reference.raw(), kRound);
  mpfr_abs(diff.raw(), diff.raw(), kRound);
  BigReal denom(reference);
  mpfr_abs(denom.raw(), denom.raw(), kRound);
  if (mpfr_cmp_d(denom.raw(), DBL_MIN) < 0) mpfr_set_d(denom.raw(), DBL_MIN, kRound);
  mpfr_div(diff.raw(), diff.raw(), denom.raw(), kRound);
  return diff.to_double();
}

BigReal cdf_theta_series(double x, int digits) {
  check_digits(digits);
  check_x(x);
  return theta_cdf_big(BigReal(x, digits));
}

BigReal sf_alternating_series(double x, int digits) {
  check_digits(digits);
  check_x(x);
  return alternating_sf_big(BigReal(x, digits));
}

BigReal cdf(double x, int digits) {
  check_digits(digits);
  check_x(x);
  return cdf_big(BigReal(x, digits));
}

BigReal cdf(const BigReal& x) {
  check_digits(x.digits());
  if (!(mpfr_sgn(x.raw()) > 0) || !mpfr_number_p(x.raw())) {
    throw DomainError("oracle: x must be positive and finite");
  }
  return cdf_big(x);
}

BigReal sf(double x, int digits) {
  check_digits(digits);
  check_x(x);
  return sf_big(BigReal(x, digits));
}

BigReal pdf(double x, int digits) {
  check_digits(digits);
  check_x(x);
  if (x <= 1.0) {
    // sqrt(2 pi) / (4 x^4) * sum_{n odd} (pi^2 n^2 - 4 x^2) t^(n^2)
    const BigReal a = theta_exponent(BigReal(x, digits));
    BigReal w2(digits), w0(x, digits);
    mpfr_const_pi(w2.raw(), kRound);
    mpfr_sqr(w2.raw(), w2.raw(), kRound);
    mpfr_sqr(w0.raw(), w0.raw(), kRound);
    mpfr_mul_si(w0.raw(), w0.raw(), -4, kRound);
    BigReal sum = theta_sum(a, w2, w0, digits);
    BigReal x4(x, digits);
    mpfr_pow_ui(x4.raw(), x4.raw(), 4, kRound);
    mpfr_mul_ui(x4.raw(), x4.raw(), 4, kRound);
    mpfr_mul(sum.raw(), sum.raw(), sqrt_two_pi(digits).raw(), kRound);
    mpfr_div(sum.raw(), sum.raw(), x4.raw(), kRound);
    return sum;
  }
  // 8 x sum (-1)^(k-1) k^2 q^(k^2)
  BigReal sum = alternating_sum(BigReal(x, digits), 2);
  mpfr_mul_d(sum.raw(), sum.raw(), 8.0 * x, kRound);  // 8x is exact
  return sum;
}

BigReal quantile_sf(double p_sf, int digits) {
  check_digits(digits);
  check_probability(p_sf);
  const BigReal target(p_sf, digits);
  return bisect_decreasing([](const BigReal& x) { return sf_big(x); }, target,
                           1e-3, 30.0, digits);
}

BigReal quantile_cdf(double p_cdf, int digits) {
  check_digits(digits);
  check_probability(p_cdf);
  BigReal target(p_cdf, digits);
  mpfr_neg(target.raw(), target.raw(), kRound);
  // -L(x) is decreasing.
  return bisect_decreasing(
      [](const BigReal& x) {
        BigReal v = cdf_big(x);
        mpfr_neg(v.raw(), v.raw(), kRound);
        return v;
      },
      target, 0.03, 30.0, digits);
}

}  // namespace kolmo::oracle
