#pragma once

// Limiting distribution of sqrt(n) * D_n (two-sided Kolmogorov statistic).
//
//   K(x) = P(X >= x) = 2 sum_{k>=1} (-1)^(k-1) exp(-2 k^2 x^2)
//   L(x) = P(X <= x) = sqrt(2 pi) / x * sum_{k>=1} exp(-(2k-1)^2 pi^2 / (8 x^2))
//
// The second series comes from the theta-function functional equation and
// converges quickly where the first one cancels badly.  Each evaluation picks
// the series that computes the smaller of the two probabilities directly and
// obtains the other one as its complement.

#include <limits>

namespace kolmo {

inline constexpr double kMachineEpsilon = 0x1p-52;

// Branch switch between the theta series (x <= cutoff) and the alternating
// series.  0.82 sits near the median, so the directly computed probability is
// always the smaller one.  A cutoff around 1.10-1.15 would minimise the number
// of terms instead, at the cost of complementing probabilities above 0.5.
inline constexpr double kBranchCutoff = 0.82;

enum class Branch { SmallX, LargeX, Degenerate };

struct DistTriple {
  double sf = 1.0;
  double cdf = 0.0;
  double pdf = 0.0;
  Branch branch = Branch::Degenerate;
  // Loop budget R of the series that was evaluated.
  int terms = 0;
};

struct SeriesValue {
  double value = 0.0;   // L(x) for the small-x series, K(x) for the large-x one
  double deriv = 0.0;   // L'(x) = -K'(x) >= 0
  int terms = 0;
};

// Theta series for L(x) and L'(x).  Requires x > 0 and 0 < eps < 1.
SeriesValue eval_small_x(double x, double eps);

// Alternating (Horner) series for K(x) and -K'(x).  Requires x > 0 and 0 < eps < 1.
SeriesValue eval_large_x(double x, double eps);

// SF, CDF and PDF at x.  NaN is the only rejected input.
DistTriple kolmogorov(double x, double eps = kMachineEpsilon);

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::SmallX: return "small-x";
    case Branch::LargeX: return "large-x";
    case Branch::Degenerate: return "degenerate";
  }
  return "?";
}

namespace detail {

// Intermediate quantities of one evaluation.  Exposed for tests.
struct SeriesState {
  double q = 0.0;  // exp(-2 x^2)
  double t = 0.0;  // exp(-pi^2 / (8 x^2))
  double u = 0.0;  // exp(-pi^2 / x^2) == t^8
  int budget = 0;  // loop count R
};

SeriesState small_x_state(double x, double eps);
SeriesState large_x_state(double x, double eps);

int small_x_budget(double x, double eps);
int large_x_budget(double x, double eps);

}  // namespace detail

}  // namespace kolmo
