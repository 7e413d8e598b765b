#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "kolmo/dist.hpp"
#include "kolmo/errors.hpp"
#include "kolmo/oracle.hpp"
#include "kolmo/quantile.hpp"

namespace {

using kolmo::Bracket;
using kolmo::kolmogi;
using kolmo::kMachineEpsilon;
using kolmo::ProbPair;

constexpr double kMedian = 0.8275735551899077;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double oracle_root_sf(double p) { return kolmo::oracle::quantile_sf(p).to_double(); }
double oracle_root_cdf(double p) { return kolmo::oracle::quantile_cdf(p).to_double(); }

TEST(ProbPair, AcceptsComplements) {
  EXPECT_NO_THROW(ProbPair(0.25, 0.75));
  EXPECT_NO_THROW(ProbPair(1.0, 0.0));
  EXPECT_NO_THROW(ProbPair(0.3, 0.7 + 5e-10));
  EXPECT_NO_THROW(ProbPair(1.0, 0x1p-1073));
  EXPECT_NO_THROW(ProbPair(0x1p-1074, 1.0));
  const auto a = ProbPair::from_sf(0.2);
  EXPECT_EQ(a.sf(), 0.2);
  EXPECT_EQ(a.cdf(), 0.8);
  const auto b = ProbPair::from_cdf(1e-300);
  EXPECT_EQ(b.cdf(), 1e-300);
  EXPECT_EQ(b.sf(), 1.0);
}

TEST(ProbPair, RejectsInvalid) {
  EXPECT_THROW(ProbPair(0.3, 0.6), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair(-0.1, 1.1), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair(1.5, -0.5), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair(std::nan(""), 0.5), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair(0.5, 1e-320), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair::from_sf(1.5), kolmo::InvalidPairError);
  EXPECT_THROW(ProbPair::from_cdf(-1e-3), kolmo::InvalidPairError);
}

TEST(BracketSmallP, Examples) {
  EXPECT_TRUE(kolmo::bracket_small_p(0.5).contains(kMedian));
  const Bracket b = kolmo::bracket_small_p(2.0 * std::exp(-32.0));
  EXPECT_NEAR(b.hi, 4.0, 1e-12);
  EXPECT_LT(rel(b.lo, 4.0), 0.01);
  const Bracket c = kolmo::bracket_small_p(1e-3);
  EXPECT_TRUE(c.contains(oracle_root_sf(1e-3)));
  EXPECT_THROW(kolmo::bracket_small_p(0.0), kolmo::DomainError);
  EXPECT_THROW(kolmo::bracket_small_p(0.6), kolmo::DomainError);
}

TEST(BracketSmallP, ContainsOracleRoot) {
  for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-3, 0.01, 0.1, 0.25, 0.4, 0.5}) {
    EXPECT_TRUE(kolmo::bracket_small_p(p).contains(oracle_root_sf(p))) << p;
  }
  EXPECT_GT(kolmo::bracket_small_p(4.9e-324).lo, 19.0);
}

TEST(InitialGuessSmallP, Examples) {
  EXPECT_DOUBLE_EQ(kolmo::initial_guess_small_p(1e-6), std::sqrt(-0.5 * std::log(5e-7)));
  EXPECT_LT(rel(kolmo::initial_guess_small_p(0.5), kMedian), 1e-3);
  EXPECT_LT(rel(kolmo::initial_guess_small_p(0.2), oracle_root_sf(0.2)), 0.01);
  EXPECT_TRUE(std::isfinite(kolmo::initial_guess_small_p(4.9e-324)));
}

TEST(InitialGuessSmallP, InsideBracketAfterClamp) {
  for (int i = 1; i <= 500; ++i) {
    const double p = i * 0.001;
    const Bracket b = kolmo::bracket_small_p(p);
    const double g = kolmo::initial_guess_small_p(p);
    EXPECT_TRUE(b.contains(b.clamp(g))) << p;
    EXPECT_LT(rel(g, b.midpoint()), 0.1) << p;
  }
}

TEST(GP, ContractiveFixedPoint) {
  const double p = 0.01;
  double x = 1.0;
  for (int i = 0; i < 200; ++i) x = kolmo::g_p(x, p);
  EXPECT_NEAR(kolmo::g_p(x, p), x, 1e-15);
  EXPECT_LT(4.0 * x * x / (M_PI * M_PI), 1.0);
}

TEST(GP, TwoStepsGiveUpperBound) {
  const double p = 0.05;
  const double upper = kolmo::g_p(kolmo::g_p(1.0, p), p);
  const double root = oracle_root_cdf(p);
  // Independently: g(g(1)) = 0.524063225, root = 0.519610379.
  EXPECT_GE(upper, root);
  EXPECT_NEAR(upper - root, 0.004453, 1e-5);
}

TEST(GP, LowStartsAreLowerBounds) {
  for (double p : {1e-3, 0.01, 0.05, 0.2}) {
    const double root = oracle_root_cdf(p);
    for (double x0 : {p, std::sqrt(p), 0.04}) {
      EXPECT_LE(kolmo::g_p(x0, p), root) << p << " " << x0;
    }
  }
}

// L(x) = 2^-1074 at x = 0.040596694; 2^-1073 sits slightly higher.
TEST(GP, SubnormalFixedPoints) {
  double x = 0.04;
  for (int i = 0; i < 50; ++i) x = kolmo::g_p(x, 0x1p-1074);
  EXPECT_LT(rel(x, 0.040596694), 1e-6);
  x = 0.04;
  for (int i = 0; i < 50; ++i) x = kolmo::g_p(x, 0x1p-1073);
  EXPECT_LT(rel(x, 0.0406155162), 1e-6);
}

TEST(GP, DomainErrors) {
  EXPECT_THROW(kolmo::g_p(0.0, 0.5), kolmo::DomainError);
  EXPECT_THROW(kolmo::g_p(1.0, 0.0), kolmo::DomainError);
  EXPECT_THROW(kolmo::g_p(10.0, 0.7), kolmo::DomainError);
}

TEST(BracketLargeP, Examples) {
  const Bracket b = kolmo::bracket_large_p(0.3);
  EXPECT_TRUE(b.contains(oracle_root_cdf(0.3)));
  EXPECT_LT(b.hi - b.lo, 0.25);
  // g(g(1)) = 1.0000292 at p = 0.73: the one-term map ignores t^9 at x = 1.
  EXPECT_NEAR(kolmo::bracket_large_p(0.73).hi, 1.0000292, 1e-6);
  // The first step from 1 lands 1.4e-4 away, so two steps leave 1.67e-6.
  const Bracket tiny = kolmo::bracket_large_p(1e-300);
  EXPECT_NEAR(rel(tiny.lo, tiny.hi), 1.67e-6, 1e-8);
  EXPECT_THROW(kolmo::bracket_large_p(0.8), kolmo::DomainError);
  EXPECT_THROW(kolmo::bracket_large_p(0.0), kolmo::DomainError);
}

TEST(BracketLargeP, ContainsOracleRoot) {
  for (double p : {0x1p-1074, 0x1p-1073, 1e-300, 1e-100, 1e-10, 1e-3, 0.05, 0.1, 0.3, 0.5, 0.73}) {
    EXPECT_TRUE(kolmo::bracket_large_p(p).contains(oracle_root_cdf(p))) << p;
  }
}

TEST(InitialGuessLargeP, Examples) {
  const Bracket b = kolmo::bracket_large_p(0.05);
  EXPECT_EQ(kolmo::initial_guess_large_p(0.05, b), b.midpoint());
  const Bracket c = kolmo::bracket_large_p(0.3);
  EXPECT_LT(rel(kolmo::initial_guess_large_p(0.3, c), oracle_root_cdf(0.3)), 0.01);
  const Bracket d = kolmo::bracket_large_p(0.73);
  const double g = kolmo::initial_guess_large_p(0.73, d);
  EXPECT_TRUE(d.contains(g));
  EXPECT_LT(rel(g, 1.0), 0.02);
}

TEST(BracketedNewton, LinearConvergesInOneStep) {
  const auto r = kolmo::bracketed_newton([](double x) { return 3.0 * x - 1.5; },
                                         [](double) { return 3.0; }, 0.2, Bracket{0.0, 2.0});
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_EQ(r.root, 0.5);
}

TEST(BracketedNewton, MedianWithinFourSteps) {
  const Bracket b = kolmo::bracket_small_p(0.5);
  const auto r = kolmo::bracketed_newton(
      [](double x) { return kolmo::kolmogorov(x).sf - 0.5; },
      [](double x) { return -kolmo::kolmogorov(x).pdf; }, b.midpoint(), b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 4);
  EXPECT_LT(rel(r.root, kMedian), 4 * kMachineEpsilon);
}

TEST(BracketedNewton, WrongDerivativeFallsBackToBisection) {
  const Bracket b{0.5, 1.5};
  const auto r = kolmo::bracketed_newton(
      [](double x) { return kolmo::kolmogorov(x).sf - 0.5; },
      [](double x) { return -0.5 * kolmo::kolmogorov(x).pdf; }, 1.4, b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_TRUE(b.contains(r.root));
  EXPECT_LT(rel(r.root, kMedian), 1e-14);
}

TEST(BracketedNewton, ZeroDerivativeBisects) {
  const Bracket b{0.0, 1.0};
  const auto r = kolmo::bracketed_newton([](double x) { return x - 0.3; },
                                         [](double) { return 0.0; }, 0.9, b);
  EXPECT_TRUE(r.report.converged);
  EXPECT_NEAR(r.root, 0.3, 1e-15);
}

TEST(BracketedNewton, ReportsNonConvergence) {
  kolmo::NewtonOptions opts;
  opts.max_iter = 3;
  const auto r = kolmo::bracketed_newton([](double x) { return x - 0.3; },
                                         [](double) { return 0.0; }, 0.9, Bracket{0.0, 1.0}, opts);
  EXPECT_FALSE(r.report.converged);
  EXPECT_LE(r.report.iterations, 3);
  EXPECT_GE(r.root, 0.0);
  EXPECT_LE(r.root, 1.0);
}

TEST(BracketedNewton, StaysInOriginalBracket) {
  // Root outside the bracket: the result must still lie inside it.
  const Bracket b{2.0, 3.0};
  const auto r = kolmo::bracketed_newton([](double x) { return x - 1.0; },
                                         [](double) { return 1.0; }, 2.5, b);
  EXPECT_TRUE(b.contains(r.root));
  EXPECT_THROW(kolmo::bracketed_newton([](double x) { return x; }, [](double) { return 1.0; },
                                       0.0, Bracket{1.0, 0.0}),
               kolmo::DomainError);
}

TEST(Kolmogi, SpecialCases) {
  const auto zero = kolmogi(ProbPair(1.0, 0.0));
  EXPECT_EQ(zero.x, 0.0);
  EXPECT_EQ(zero.report.iterations, 0);
  const auto inf = kolmogi(ProbPair(0.0, 1.0));
  EXPECT_EQ(inf.x, std::numeric_limits<double>::infinity());
  EXPECT_EQ(inf.report.iterations, 0);
}

TEST(Kolmogi, Median) {
  const auto r = kolmogi(ProbPair(0.5, 0.5));
  EXPECT_TRUE(r.report.converged);
  EXPECT_LT(rel(r.x, kMedian), 2 * kMachineEpsilon);
}

TEST(Kolmogi, SubnormalCdf) {
  EXPECT_LT(rel(kolmogi(ProbPair(1.0, 0x1p-1074)).x, 0.040596694), 1e-6);
  EXPECT_LT(rel(kolmogi(ProbPair(1.0, 0x1p-1073)).x, oracle_root_cdf(0x1p-1073)), 1e-6);
}

TEST(Kolmogi, ReachesBelowLegacyFloor) {
  const auto r = kolmogi(ProbPair::from_sf(1.0 - 0x1p-53));
  EXPECT_LT(r.x, 0.18);
  EXPECT_LT(kolmogi(ProbPair::from_cdf(1e-300)).x, 0.1);
  EXPECT_GT(kolmogi(ProbPair::from_cdf(1e-300)).x, 0.04);
}

TEST(Kolmogi, MatchesOracle) {
  for (double p : {1e-200, 1e-12, 1e-3, 0.1, 0.5, 0.9}) {
    EXPECT_LT(rel(kolmogi(ProbPair::from_sf(p)).x, oracle_root_sf(p)), 1e-14) << p;
  }
  for (double p : {1e-300, 1e-30, 1e-6, 0.01, 0.3}) {
    EXPECT_LT(rel(kolmogi(ProbPair::from_cdf(p)).x, oracle_root_cdf(p)), 1e-14) << p;
  }
}

TEST(Kolmogi, RoundTrip) {
  for (double x = 0.045; x <= 5.0; x *= 1.003) {
    const auto d = kolmo::kolmogorov(x);
    const auto r = kolmogi(ProbPair(d.sf, d.cdf));
    EXPECT_LT(rel(r.x, x), 1e-10) << x;
  }
}

TEST(Kolmogi, RootInsideBracket) {
  for (int i = 1; i < 1000; ++i) {
    const auto r = kolmogi(ProbPair::from_cdf(i * 0.001));
    EXPECT_TRUE(r.bracket.contains(r.start));
    EXPECT_TRUE(r.bracket.contains(r.x)) << i;
  }
}

TEST(Kolmogi, IterationBound) {
  double total = 0.0;
  for (int i = 1; i < 1000; ++i) {
    const auto r = kolmogi(ProbPair::from_sf(i * 0.001));
    EXPECT_TRUE(r.report.converged);
    EXPECT_LE(r.report.iterations, 6) << i;
    total += r.report.iterations;
  }
  EXPECT_LE(total / 999.0, 3.0);
}

TEST(Kolmogi, Monotone) {
  double prev = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 1000; ++i) {
    const double x = kolmogi(ProbPair::from_sf(i * 0.001)).x;
    EXPECT_LT(x, prev) << i;
    prev = x;
  }
}

// The starting estimate is already the answer for tiny p_sf.
TEST(Kolmogi, TinySfNeedsNoCorrection) {
  for (double p : {0x1p-50, 0x1p-60, 1e-20, 1e-100, 1e-300, 4.9e-324}) {
    const auto r = kolmogi(ProbPair::from_sf(p));
    EXPECT_LE(std::abs(r.x - r.start), kMachineEpsilon * r.start) << p;
    EXPECT_LE(r.report.iterations, 1) << p;
  }
}

}  // namespace
