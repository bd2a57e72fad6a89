#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "helpers.hpp"

using namespace rlab;
using V = std::vector<double>;

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(entropy(V{0, 1, 0}), 0.0);
  EXPECT_NEAR(entropy(V{0.25, 0.25, 0.25, 0.25}), std::log(4.0), 1e-15);
  EXPECT_NEAR(entropy(V{0.75, 0.25}), -(0.75 * std::log(0.75) + 0.25 * std::log(0.25)), 1e-15);
}

TEST(CrossEntropy, Examples) {
  const V q{0.2, 0.3, 0.5};
  EXPECT_NEAR(cross_entropy(q, q), entropy(q), 1e-15);
  EXPECT_NEAR(cross_entropy(V{1, 0}, V{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_EQ(cross_entropy(V{1, 0}, V{0, 1}), std::numeric_limits<double>::infinity());
}

TEST(KlDivergence, Examples) {
  const V q{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(kl_divergence(q, q), 0.0);
  EXPECT_NEAR(kl_divergence(V{1, 0}, V{0.5, 0.5}), std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_divergence(V{0.5, 0.5}, V{0.25, 0.75}),
              0.5 * std::log(0.5 / 0.25) + 0.5 * std::log(0.5 / 0.75), 1e-15);
  EXPECT_EQ(kl_divergence(V{0.5, 0.5}, V{1, 0}), std::numeric_limits<double>::infinity());
  EXPECT_TRUE(std::isfinite(kl_divergence(V{1, 0}, V{0.5, 0.5})));
}

TEST(KlDivergence, NonnegativeAndDecomposesCrossEntropy) {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 1000; ++rep) {
    const auto q = testutil::random_simplex(rng, 4), x = testutil::random_simplex(rng, 4);
    const double kl = kl_divergence(q, x);
    EXPECT_GE(kl, 0.0);
    EXPECT_NEAR(cross_entropy(q, x), entropy(q) + kl, 1e-12);
  }
}
