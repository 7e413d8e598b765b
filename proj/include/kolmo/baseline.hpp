#pragma once

// Legacy evaluation of K(x) and its inverse, kept as a comparison subject.
//
// The SF is the plain alternating sum 2 * sum (-1)^(k-1) q^(k^2) in ascending
// k, stopped once a term falls below 1e-16 of the partial sum.  For small x
// this needs O(1/x) terms, cancels badly, can exceed 1 and is not monotone.
// The ISF is an unbracketed Newton iteration using the one-term derivative
// -8 x exp(-2 x^2), which stalls far from the root as p_sf -> 1.
//
// Both are reproduced as-is: no compensation, clipping or complement tricks.

namespace kolmo::baseline {

inline constexpr int kCap = 500;
inline constexpr double kTermTolerance = 1e-16;
inline constexpr double kStepTolerance = 1e-10;

struct BaselineResult {
  double value = 0.0;
  int terms_or_iters = 0;
  bool hit_cap = false;
};

BaselineResult baseline_sf(double x);

// Also reports the total number of exp() calls made by inner SF evaluations.
struct BaselineIsfResult : BaselineResult {
  long exp_calls = 0;
};

BaselineIsfResult baseline_isf(double p_sf);

}  // namespace kolmo::baseline
