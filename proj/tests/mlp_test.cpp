// Copyright 2026 The gesdrs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "gesdrs/harness/grad_check.hpp"
#include "gesdrs/mlp.hpp"
#include "test_util.hpp"

namespace gesdrs {
namespace {

using harness::max_relative_error;

MlpSpec net(int in, int hidden, int out, OutputSquash squash = OutputSquash::kTanh) {
  return MlpSpec{in, {hidden}, out, squash};
}

TEST(MlpTest, ParamCountIsSumOfLayerSizes) {
  EXPECT_EQ(total_param_count(net(2, 4, 1)), 17);
  EXPECT_EQ(total_param_count(net(8, 16, 1)), 161);
  EXPECT_EQ(total_param_count(MlpSpec{3, {5, 7}, 2}), (3 + 1) * 5 + (5 + 1) * 7 + (7 + 1) * 2);
  EXPECT_EQ(init_params(net(2, 4, 1), 0).size(), 17);
}

TEST(MlpTest, InitIsDeterministicAndSeedDependent) {
  const auto spec = net(8, 16, 1);
  EXPECT_EQ(init_params(spec, 7), init_params(spec, 7));
  EXPECT_NE(init_params(spec, 7), init_params(spec, 8));
}

TEST(MlpTest, InitBoundsAndZeroBiases) {
  const auto spec = net(8, 16, 1);
  const ParamVector p = init_params(spec, 3);
  for (const auto& r : layer_ranges(spec)) {
    const double bound = 1.0 / std::sqrt(double(r.fan_in));
    const Eigen::Index nw = Eigen::Index(r.fan_in) * r.fan_out;
    EXPECT_LE(p.segment(r.begin, nw).cwiseAbs().maxCoeff(), bound);
    EXPECT_TRUE(p.segment(r.begin + nw, r.fan_out).isZero(0.0));
  }
}

TEST(MlpTest, ZeroParamsGiveZeroOutput) {
  const auto spec = net(8, 16, 1);
  const Vec obs = Vec::LinSpaced(8, -3.0, 5.0);
  EXPECT_EQ(mlp_forward(spec, ParamVector::Zero(161), obs)[0], 0.0);
}

TEST(MlpTest, TanhSquashedOutputStaysInOpenInterval) {
  const auto spec = net(3, 6, 2);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 3.0);
  const ParamVector p = init_params(spec, 5) * 4.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Vec obs(3);
    for (auto& x : obs) x = normal(rng);
    const Vec y = mlp_forward(spec, p, obs);
    EXPECT_LT(y.cwiseAbs().maxCoeff(), 1.0);
  }
}

// 2-2-1 net: W1 = [[0.5,-0.3],[0.2,0.8]], b1 = [0.1,-0.2], W2 = [1.5,-0.7],
// b2 = 0.05, obs = [0.4,-1.0]. Expected values evaluated by hand:
// h = tanh([0.6, -0.92]), y = tanh(1.5 h0 - 0.7 h1 + 0.05).
TEST(MlpTest, MatchesHandComputedChain) {
  ParamVector p(9);
  p << 0.5, -0.3, 0.2, 0.8, 0.1, -0.2, 1.5, -0.7, 0.05;
  Vec obs(2);
  obs << 0.4, -1.0;
  EXPECT_NEAR(mlp_forward(net(2, 2, 1), p, obs)[0], 0.87724903557650247, 1e-15);
  EXPECT_NEAR(mlp_forward(net(2, 2, 1, OutputSquash::kNone), p, obs)[0], 1.3637025408914092, 1e-15);
}

TEST(MlpTest, DimensionMismatchThrows) {
  const auto spec = net(2, 4, 1);
  EXPECT_THROW(mlp_forward(spec, ParamVector::Zero(16), Vec::Zero(2)), DimensionError);
  EXPECT_THROW(mlp_forward(spec, ParamVector::Zero(17), Vec::Zero(3)), DimensionError);
  EXPECT_THROW(mlp_forward_backward(spec, ParamVector::Zero(17), Vec::Zero(2), Vec::Zero(2)),
               DimensionError);
  EXPECT_THROW(validate(MlpSpec{2, {0}, 1}), DimensionError);
}

TEST(MlpTest, ZeroAdjointGivesZeroGradients) {
  const auto spec = net(2, 4, 1);
  const auto r = mlp_forward_backward(spec, init_params(spec, 1), Vec::Ones(2), Vec::Zero(1));
  EXPECT_TRUE(r.param_grad.isZero(0.0));
  EXPECT_TRUE(r.obs_grad.isZero(0.0));
}

TEST(MlpTest, BackwardOutputMatchesForward) {
  const auto spec = net(3, 5, 2);
  const ParamVector p = init_params(spec, 9);
  const Vec obs = Vec::LinSpaced(3, -1.0, 1.0);
  EXPECT_EQ(mlp_forward_backward(spec, p, obs, Vec::Ones(2)).output, mlp_forward(spec, p, obs));
}

// Property: reverse-mode gradients agree with central differences (step 1e-5)
// away from tanh saturation (parameters ~ N(0, 0.25))
// over 100 random (params, obs, adjoint) triples, for both output modes.
TEST(MlpTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = net(2, 4, trial % 2 == 0 ? 1 : 3,
                          trial % 3 == 0 ? OutputSquash::kNone : OutputSquash::kTanh);
    ParamVector p(total_param_count(spec));
    for (auto& x : p) x = 0.5 * normal(rng);
    Vec obs(2), adj(spec.output_dim);
    for (auto& x : obs) x = normal(rng);
    for (auto& x : adj) x = normal(rng);

    const auto r = mlp_forward_backward(spec, p, obs, adj);
    const Vec fd_p = testing::central_differences(
        [&](const Vec& q) { return adj.dot(mlp_forward(spec, q, obs)); }, p, 1e-5);
    const Vec fd_o = testing::central_differences(
        [&](const Vec& o) { return adj.dot(mlp_forward(spec, p, o)); }, obs, 1e-5);
    worst = std::max({worst, max_relative_error(r.param_grad, fd_p), max_relative_error(r.obs_grad, fd_o)});
  }
  EXPECT_LE(worst, 1e-6);
}

}  // namespace
}  // namespace gesdrs
