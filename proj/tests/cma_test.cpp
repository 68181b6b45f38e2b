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

#include "gesdrs/cma.hpp"
#include "gesdrs/runners.hpp"

namespace gesdrs {
namespace {

double sphere(const ParamVector& x) { return x.squaredNorm(); }

TEST(CmaTest, DefaultsAndValidation) {
  EXPECT_EQ(cma_init(Vec::Zero(10), 0.5).lambda, 10);  // 4 + floor(3 ln 10)
  EXPECT_EQ(cma_init(Vec::Zero(1), 0.5).lambda, 4);
  const auto s = cma_init(Vec::Zero(10), 0.5, 12);
  EXPECT_EQ(s.mu, 6);
  EXPECT_NEAR(s.weights.sum(), 1.0, 1e-15);
  for (int i = 1; i < s.mu; ++i) EXPECT_LT(s.weights[i], s.weights[i - 1]);
  EXPECT_THROW(cma_init(Vec::Zero(3), 0.5, 3), std::invalid_argument);
  EXPECT_THROW(cma_init(Vec::Zero(3), 0.0), std::invalid_argument);
  EXPECT_THROW(cma_init(Vec(0), 0.5), std::invalid_argument);
}

TEST(CmaTest, MeanMovesToWeightedRecombination) {
  auto s = cma_init(Vec::Ones(5), 0.3);
  Rng rng(3);
  const auto cands = cma_ask(s, rng);
  std::vector<double> losses;
  for (const auto& c : cands) losses.push_back(sphere(c));
  std::vector<std::size_t> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return losses[a] < losses[b]; });
  Vec expected = Vec::Zero(5);
  for (int i = 0; i < s.mu; ++i) expected += s.weights[i] * cands[order[std::size_t(i)]];
  const Vec old_mean = s.mean;
  cma_tell(s, cands, losses);
  EXPECT_LE((s.mean - expected).norm(), 1e-14);
  const Vec step = s.mean - old_mean, target = expected - old_mean;
  EXPECT_NEAR(step.dot(target) / (step.norm() * target.norm()), 1.0, 1e-12);
}

TEST(CmaTest, CovarianceStaysSymmetricPositiveDefinite) {
  auto s = cma_init(Vec::Constant(6, 2.0), 0.5);
  for (int gen = 0; gen < 200; ++gen) {
    Rng rng = substream(1, std::uint64_t(gen), 0);
    const auto cands = cma_ask(s, rng);
    std::vector<double> losses;
    for (const auto& c : cands) losses.push_back(c[0] * c[0] * 1e4 + c.tail(5).squaredNorm());
    cma_tell(s, cands, losses);
    ASSERT_LE((s.cov - s.cov.transpose()).norm(), 1e-12 * s.cov.norm());
    ASSERT_GT(s.eig_sqrt.minCoeff(), 0.0);
  }
}

TEST(CmaTest, ReconditionsIllConditionedCovariance) {
  auto s = cma_init(Vec::Zero(3), 1.0);
  Rng rng(0);
  const auto cands = cma_ask(s, rng);
  std::vector<double> losses{1, 2, 3, 4, 5, 6, 7};
  ASSERT_EQ(cands.size(), 7u);
  s.cov = Vec(Vec::LinSpaced(3, 1.0, 3.0)).asDiagonal();
  s.cov(0, 0) = 1e20;
  cma_tell(s, cands, losses);
  EXPECT_EQ(s.reconditions, 1);
  const double cond = (s.eig_sqrt.maxCoeff() / s.eig_sqrt.minCoeff());
  EXPECT_LE(cond * cond, kCmaMaxCondition * (1.0 + 1e-6));
}

TEST(CmaTest, TellRejectsBadInput) {
  auto s = cma_init(Vec::Zero(2), 1.0);
  Rng rng(0);
  auto cands = cma_ask(s, rng);
  std::vector<double> losses(cands.size(), 1.0);
  losses[2] = std::nan("");
  EXPECT_THROW(cma_tell(s, cands, losses), std::domain_error);
  cands.pop_back();
  EXPECT_THROW(cma_tell(s, cands, std::vector<double>(cands.size(), 1.0)), std::invalid_argument);
}

TEST(CmaTest, DeterministicGivenSeed) {
  RunOptions opts;
  opts.seed = 4;
  opts.budget = 600;
  const auto a = cma_es_run(sphere, 0.5, 0, Vec::Ones(5), opts);
  const auto b = cma_es_run(sphere, 0.5, 0, Vec::Ones(5), opts);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].best_cost, b.records[i].best_cost);
  EXPECT_EQ(a.theta, b.theta);
}

TEST(CmaTest, SolvesTenDimensionalSphere) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vec x0(10);
    for (auto& v : x0) v = u(rng);
    RunOptions opts;
    opts.seed = seed;
    opts.budget = 5000;
    const auto r = cma_es_run(sphere, 0.3, 0, x0, opts);
    ASSERT_FALSE(r.records.empty());
    EXPECT_LE(r.records.back().episodes, 5000);
    EXPECT_LE(r.records.back().best_cost, 1e-8) << "seed " << seed;
  }
}

}  // namespace
}  // namespace gesdrs
