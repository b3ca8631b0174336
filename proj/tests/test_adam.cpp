#include <gtest/gtest.h>

#include <cmath>

#include "banditsum/adam.hpp"

using namespace banditsum::model;

namespace {

ParamVector make_params(std::initializer_list<double> values) {
  ParamVector p;
  p.add_segment("w", values.size());
  std::size_t i = 0;
  for (double v : values) p.values()(i++) = v;
  return p;
}

GradVector make_grad(std::initializer_list<double> values) {
  GradVector g;
  g.values.resize(static_cast<Eigen::Index>(values.size()));
  std::size_t i = 0;
  for (double v : values) g.values(i++) = v;
  return g;
}

}  // namespace

TEST(Adam, DefaultsAreThePublishedSettings) {
  const AdamConfig c;
  EXPECT_EQ(c.lr, 5e-5);
  EXPECT_EQ(c.beta1, 0.0);
  EXPECT_EQ(c.beta2, 0.999);
  EXPECT_EQ(c.weight_decay, 1e-6);
  EXPECT_EQ(c.clip_norm, 1.0);
}

TEST(Adam, FirstStepIsSignedLearningRate) {
  for (double beta1 : {0.0, 0.9}) {
    auto p = make_params({1.0, -2.0, 0.5});
    const auto g = make_grad({0.3, -4.0, 0.0});
    AdamConfig c;
    c.lr = 0.01;
    c.beta1 = beta1;
    c.weight_decay = 0.0;
    c.clip_norm = 0.0;
    auto state = AdamState::for_params(p, c);
    adam_step(p, g, state);
    // Ascent: each coordinate moves by lr * g / (|g| + eps).
    EXPECT_NEAR(p.values()(0), 1.0 + 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
    EXPECT_NEAR(p.values()(1), -2.0 - 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
    EXPECT_EQ(p.values()(2), 0.5);
    EXPECT_EQ(state.t, 1u);
  }
}

TEST(Adam, ClipsByGlobalNorm) {
  auto p = make_params({0.0, 0.0});
  const auto g = make_grad({6.0, 8.0});
  AdamConfig c;
  c.weight_decay = 0.0;
  c.clip_norm = 1.0;
  auto state = AdamState::for_params(p, c);
  adam_step(p, g, state);
  EXPECT_NEAR(state.m(0), -0.6, 1e-15);
  EXPECT_NEAR(state.m(1), -0.8, 1e-15);
  EXPECT_NEAR(state.v(0), 0.001 * 0.36, 1e-15);
}

TEST(Adam, WeightDecayPullsTowardZeroWithoutGradient) {
  auto p = make_params({2.0, -3.0});
  const auto g = make_grad({0.0, 0.0});
  AdamConfig c;
  c.lr = 0.1;
  c.weight_decay = 0.01;
  auto state = AdamState::for_params(p, c);
  adam_step(p, g, state);
  EXPECT_LT(p.values()(0), 2.0);
  EXPECT_GT(p.values()(1), -3.0);
}

TEST(Adam, RejectsBadInput) {
  auto p = make_params({1.0, 2.0});
  auto state = AdamState::for_params(p, AdamConfig{});
  EXPECT_THROW(adam_step(p, make_grad({1.0}), state), std::invalid_argument);
  EXPECT_THROW(adam_step(p, make_grad({1.0, std::nan("")}), state), std::invalid_argument);
}

TEST(ParamVector, SegmentTable) {
  ParamVector p;
  EXPECT_EQ(p.add_segment("a", 3), 0u);
  EXPECT_EQ(p.add_segment("b", 2), 3u);
  EXPECT_EQ(p.size(), 5u);
  EXPECT_TRUE(p.has_segment("b"));
  EXPECT_FALSE(p.has_segment("c"));
  p.view("b")[1] = 7.0;
  EXPECT_EQ(p.values()(4), 7.0);
  EXPECT_THROW(p.segment("c"), std::exception);
  EXPECT_THROW(p.add_segment("a", 1), std::exception);
}
