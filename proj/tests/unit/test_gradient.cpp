// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "gradcheck.hpp"

using namespace robotid;

TEST(Gradient, MatchesFiniteDifferencesAcrossConfigurations) {
  for (int i = 0; i < 12; ++i) {
    const auto c = oracle::random_grad_case(i);
    const auto r = oracle::check_gradient(c.frames, c.initial, c.params, 0.0);
    EXPECT_LT(r.max_relative_error, 1e-4) << "configuration " << i;
    EXPECT_GT(r.parameters, 0u);
  }
}

TEST(Gradient, IncludesWeightDecay) {
  const auto c = oracle::random_grad_case(3);
  const auto r = oracle::check_gradient(c.frames, c.initial, c.params, 0.05);
  EXPECT_LT(r.max_relative_error, 1e-4);
}

TEST(Gradient, DecayTermIsTwoLambdaW) {
  const auto c = oracle::random_grad_case(4);
  const double lambda = 0.3;
  const auto with = net::backward(c.frames, c.initial, c.params, lambda);
  const auto without = net::backward(c.frames, c.initial, c.params, 0.0);
  for (std::size_t i = 0; i < with.size(); ++i) {
    const double expected = c.params.weights.is_weight(i) ? 2.0 * lambda * c.params.weights.values()[i] : 0.0;
    EXPECT_NEAR(with.values()[i] - without.values()[i], expected, 1e-12);
  }
}

TEST(Gradient, EmptyWindowGivesZero) {
  const auto c = oracle::random_grad_case(1);
  const auto g = net::backward({}, c.initial, c.params, 0.1);
  EXPECT_EQ(g.size(), c.params.weights.size());
  EXPECT_DOUBLE_EQ(g.squared_norm(), 0.0);
}

TEST(Gradient, ZeroInitialStateCaseAlsoMatches) {
  auto c = oracle::random_grad_case(7);
  c.initial.reset();
  const auto r = oracle::check_gradient(c.frames, c.initial, c.params, 0.0);
  EXPECT_LT(r.max_relative_error, 1e-4);
}
