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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "gesdrs/optim.hpp"

namespace gesdrs {
namespace {

OptimizerConfig cfg(OptimizerKind kind, double lr) {
  OptimizerConfig c;
  c.kind = kind;
  c.lr = lr;
  return c;
}

Vec random_vec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

TEST(OptimTest, ParseKind) {
  EXPECT_EQ(parse_optimizer_kind("sgd"), OptimizerKind::kSgd);
  EXPECT_EQ(parse_optimizer_kind("adam"), OptimizerKind::kAdam);
  EXPECT_EQ(parse_optimizer_kind("fromage"), OptimizerKind::kFromage);
  EXPECT_THROW(parse_optimizer_kind("rmsprop"), std::invalid_argument);
  EXPECT_EQ(to_string(OptimizerKind::kFromage), "fromage");
}

TEST(OptimTest, SgdStep) {
  auto s = make_optimizer(cfg(OptimizerKind::kSgd, 0.1), 2);
  const Vec out = opt_step(s, Vec::Ones(2), Vec::Unit(2, 0));
  EXPECT_EQ(out, (Vec(2) << 0.9, 1.0).finished());
  EXPECT_EQ(s.step, 1);
}

TEST(OptimTest, SgdIsLinearInTheGradient) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = make_optimizer(cfg(OptimizerKind::kSgd, 0.25), 7);
    const Vec th = random_vec(7, rng), g1 = random_vec(7, rng), g2 = random_vec(7, rng);
    const double a = 0.5, b = -2.0;
    const Vec g = a * g1 + b * g2;
    EXPECT_EQ(opt_step(s, th, g), th - 0.25 * g);
  }
}

TEST(OptimTest, NormalizedSgdStepHasLengthLr) {
  auto c = cfg(OptimizerKind::kSgd, 0.05);
  c.normalize_grad = true;
  auto s = make_optimizer(c, 3);
  const Vec th = Vec::Zero(3);
  EXPECT_NEAR(opt_step(s, th, (Vec(3) << 300.0, -400.0, 0.0).finished()).norm(), 0.05, 1e-15);
}

TEST(OptimTest, AdamFirstStepIsSignTimesLr) {
  auto s = make_optimizer(cfg(OptimizerKind::kAdam, 0.01), 3);
  const Vec g = (Vec(3) << 2.0, -0.5, 1e-3).finished();
  const Vec out = opt_step(s, Vec::Zero(3), g);
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(out[i], -0.01 * g[i] / (std::abs(g[i]) + 1e-8), 1e-15);
  }
  EXPECT_EQ(s.m.size(), 3);
  EXPECT_EQ(s.v.size(), 3);
}

// The per-coordinate bound |dtheta| <= lr holds whenever |g_i| is constant
// over time (then v_hat = g^2 and |m_hat| <= |g|).
TEST(OptimTest, AdamStepBoundForConstantMagnitudeGradients) {
  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.5);
  const double lr = 0.003;
  auto s = make_optimizer(cfg(OptimizerKind::kAdam, lr), 5);
  const Vec mag = (Vec(5) << 1e-4, 0.1, 1.0, 10.0, 1e3).finished();
  Vec th = Vec::Zero(5);
  for (int t = 0; t < 2000; ++t) {
    Vec g = mag;
    for (auto& x : g) x *= coin(rng) ? 1.0 : -1.0;
    const Vec next = opt_step(s, th, g);
    EXPECT_LE((next - th).cwiseAbs().maxCoeff(), lr * (1.0 + 1e-6)) << "step " << t;
    th = next;
  }
}

// For arbitrary gradient sequences the step is bounded by
// lr * (1 - beta1) / sqrt(1 - beta2) ~ 3.16 lr, and that bound is approached.
TEST(OptimTest, AdamGeneralStepBound) {
  const double lr = 0.01;
  auto s = make_optimizer(cfg(OptimizerKind::kAdam, lr), 1);
  Vec th = Vec::Zero(1);
  double worst = 0.0;
  for (int t = 0; t < 3000; ++t) {
    const Vec g = Vec::Constant(1, t == 2999 ? 1.0 : 1e-6);
    const Vec next = opt_step(s, th, g);
    worst = std::max(worst, std::abs(next[0] - th[0]));
    th = next;
  }
  const double bound = lr * 0.1 / std::sqrt(0.001);
  EXPECT_LE(worst, bound);
  EXPECT_GT(worst, 1.5 * lr);
}

TEST(OptimTest, FromageScaleInvariance) {
  std::mt19937_64 rng(3);
  const MlpSpec spec{4, {5}, 2, OutputSquash::kTanh};
  const Eigen::Index n = total_param_count(spec);
  for (bool global : {false, true}) {
    auto c = cfg(OptimizerKind::kFromage, 0.01);
    c.fromage_global = global;
    for (int trial = 0; trial < 20; ++trial) {
      const Vec th = random_vec(n, rng), g = random_vec(n, rng);
      auto ref_state = make_optimizer(c, n, param_groups(spec));
      const Vec ref = opt_step(ref_state, th, g);
      for (double scale : {1e-3, 1.0, 1e3, 10.0}) {
        auto st = make_optimizer(c, n, param_groups(spec));
        const Vec out = opt_step(st, th, scale * g);
        EXPECT_LE((out - ref).cwiseAbs().maxCoeff(), 1e-14 * th.cwiseAbs().maxCoeff()) << scale;
      }
    }
  }
}

TEST(OptimTest, FromageMatchesFormulaPerGroup) {
  auto s = make_optimizer(cfg(OptimizerKind::kFromage, 0.1), 4, {{0, 2}, {2, 4}});
  const Vec th = (Vec(4) << 3.0, 4.0, 1.0, 0.0).finished();
  const Vec g = (Vec(4) << 0.0, 2.0, 0.0, 5.0).finished();
  const Vec out = opt_step(s, th, g);
  const double k = 1.0 / std::sqrt(1.01);
  // group 0: |theta| = 5, |g| = 2; group 1: |theta| = 1, |g| = 5
  EXPECT_NEAR(out[0], 3.0 * k, 1e-15);
  EXPECT_NEAR(out[1], (4.0 - 0.1 * 2.5 * 2.0) * k, 1e-15);
  EXPECT_NEAR(out[2], 1.0 * k, 1e-15);
  EXPECT_NEAR(out[3], (0.0 - 0.1 * 0.2 * 5.0) * k, 1e-15);
}

TEST(OptimTest, FromageZeroGroupFallsBackToNormalizedStep) {
  auto s = make_optimizer(cfg(OptimizerKind::kFromage, 0.1), 4, {{0, 2}, {2, 4}});
  const Vec th = (Vec(4) << 0.0, 0.0, 1.0, 1.0).finished();
  const Vec g = (Vec(4) << 30.0, 40.0, 0.0, 0.0).finished();
  const Vec out = opt_step(s, th, g);
  EXPECT_NEAR(out[0], -0.06, 1e-15);
  EXPECT_NEAR(out[1], -0.08, 1e-15);
  // zero gradient in a nonzero group only shrinks it
  EXPECT_NEAR(out[2], 1.0 / std::sqrt(1.01), 1e-15);
}

TEST(OptimTest, FromageNormBound) {
  std::mt19937_64 rng(9);
  const double eta = 0.01;
  for (int trial = 0; trial < 200; ++trial) {
    auto s = make_optimizer(cfg(OptimizerKind::kFromage, eta), 12);
    const Vec th = random_vec(12, rng), g = random_vec(12, rng);
    const Vec out = opt_step(s, th, g);
    EXPECT_LE(out.norm(), th.norm() * (1.0 + eta) / std::sqrt(1.0 + eta * eta) * (1.0 + 1e-15));
  }
}

TEST(OptimTest, NonFiniteGradientLeavesStateUntouched) {
  auto s = make_optimizer(cfg(OptimizerKind::kAdam, 0.01), 2);
  opt_step(s, Vec::Zero(2), Vec::Ones(2));
  const auto before = s;
  Vec bad = Vec::Ones(2);
  bad[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(opt_step(s, Vec::Zero(2), bad), std::domain_error);
  EXPECT_EQ(s.step, before.step);
  EXPECT_EQ(s.m, before.m);
  EXPECT_EQ(s.v, before.v);
}

TEST(OptimTest, RejectsBadShapes) {
  EXPECT_THROW(make_optimizer(cfg(OptimizerKind::kSgd, 0.0), 2), std::invalid_argument);
  EXPECT_THROW(make_optimizer(cfg(OptimizerKind::kSgd, 0.1), 4, {{0, 2}, {3, 4}}), std::invalid_argument);
  EXPECT_THROW(make_optimizer(cfg(OptimizerKind::kSgd, 0.1), 4, {{0, 2}}), std::invalid_argument);
  auto s = make_optimizer(cfg(OptimizerKind::kSgd, 0.1), 3);
  EXPECT_THROW(opt_step(s, Vec::Zero(2), Vec::Zero(2)), DimensionError);
}

TEST(OptimTest, ParamGroupsFollowLayers) {
  const MlpSpec spec{3, {4, 5}, 2, OutputSquash::kTanh};
  const auto groups = param_groups(spec);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].end - groups[0].begin, 4 * 3 + 4);
  EXPECT_EQ(groups[1].end - groups[1].begin, 5 * 4 + 5);
  EXPECT_EQ(groups[2].end, total_param_count(spec));
}

TEST(OptimTest, Deterministic) {
  std::mt19937_64 rng(5);
  const Vec th = random_vec(6, rng), g = random_vec(6, rng);
  for (auto kind : {OptimizerKind::kSgd, OptimizerKind::kAdam, OptimizerKind::kFromage}) {
    auto a = make_optimizer(cfg(kind, 0.01), 6);
    auto b = make_optimizer(cfg(kind, 0.01), 6);
    EXPECT_EQ(opt_step(a, th, g), opt_step(b, th, g));
  }
}

}  // namespace
}  // namespace gesdrs
