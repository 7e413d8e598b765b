#include <gtest/gtest.h>

#include <cstring>
#include <vector>

#include "kolmo/batch.hpp"
#include "kolmo/errors.hpp"

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(Batch, KolmogorovMatchesSerial) {
  std::vector<double> x;
  for (double v = -0.5; v < 8.0; v += 0.0007) x.push_back(v);
  std::vector<kolmo::DistTriple> par(x.size()), ser(x.size());
  kolmo::kolmogorov_batch(x, par);
  kolmo::kolmogorov_batch_serial(x, ser);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_TRUE(same_bits(par[i].sf, ser[i].sf)) << x[i];
    EXPECT_TRUE(same_bits(par[i].cdf, ser[i].cdf)) << x[i];
    EXPECT_TRUE(same_bits(par[i].pdf, ser[i].pdf)) << x[i];
    EXPECT_EQ(par[i].terms, ser[i].terms);
    EXPECT_EQ(par[i].branch, ser[i].branch);
  }
}

TEST(Batch, KolmogiMatchesSerial) {
  std::vector<kolmo::ProbPair> pairs;
  for (int i = 0; i <= 2000; ++i) pairs.push_back(kolmo::ProbPair::from_sf(i / 2000.0));
  for (double p : {1e-300, 1e-100, 1e-10}) pairs.push_back(kolmo::ProbPair::from_cdf(p));
  std::vector<kolmo::QuantileResult> par(pairs.size()), ser(pairs.size());
  kolmo::kolmogi_batch(pairs, par);
  kolmo::kolmogi_batch_serial(pairs, ser);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    EXPECT_TRUE(same_bits(par[i].x, ser[i].x)) << i;
    EXPECT_EQ(par[i].report.iterations, ser[i].report.iterations) << i;
    EXPECT_EQ(par[i].report.converged, ser[i].report.converged) << i;
  }
}

TEST(Batch, LengthMismatch) {
  std::vector<double> x(3, 1.0);
  std::vector<kolmo::DistTriple> out(2);
  EXPECT_THROW(kolmo::kolmogorov_batch(x, out), kolmo::DomainError);
  std::vector<kolmo::ProbPair> pairs(2, kolmo::ProbPair(0.5, 0.5));
  std::vector<kolmo::QuantileResult> res(3);
  EXPECT_THROW(kolmo::kolmogi_batch(pairs, res), kolmo::DomainError);
}

TEST(Batch, ThreadCountIsPositive) { EXPECT_GE(kolmo::parallel_threads(), 1); }

}  // namespace
