#include <set>

#include <gtest/gtest.h>

#include "svre/rng.hpp"

namespace svre {
namespace {

TEST(Rng, SameSeedSameSequence) {
  Rng a(42);
  Rng b(42);
  for (int k = 0; k < 100; ++k) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
    EXPECT_EQ(a.index(17), b.index(17));
    EXPECT_EQ(a.geometric(0.1), b.geometric(0.1));
  }
}

TEST(Rng, DrawsStayInRange) {
  Rng rng(7);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.index(5), 5u);
    EXPECT_GE(rng.geometric(0.3), 1u);
  }
  EXPECT_EQ(rng.geometric(1.0), 1u);
}

TEST(Rng, IndexCoversEveryValue) {
  Rng rng(3);
  std::set<std::size_t> seen;
  for (int k = 0; k < 1000; ++k) seen.insert(rng.index(6));
  EXPECT_EQ(seen.size(), 6u);
}

TEST(Rng, NormalMomentsAreSane) {
  Rng rng(5);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(Streams, DerivedSeedsDifferPerStream) {
  std::set<std::uint64_t> seeds;
  for (Stream s : {Stream::kProblem, Stream::kEpochLength, Stream::kExtrapolationIndex, Stream::kUpdateIndex,
                   Stream::kRestartCoin, Stream::kInit, Stream::kAnalysis})
    seeds.insert(derive_seed(1, s));
  EXPECT_EQ(seeds.size(), 7u);
  EXPECT_NE(derive_seed(1, Stream::kInit), derive_seed(2, Stream::kInit));
  EXPECT_EQ(derive_seed(9, Stream::kUpdateIndex), derive_seed(9, Stream::kUpdateIndex));
}

}  // namespace
}  // namespace svre
