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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "gesdrs/harness/grad_check.hpp"
#include "gesdrs/mass_spring.hpp"
#include "gesdrs/rng.hpp"

namespace gesdrs {
namespace {

using harness::max_relative_error;

MassSpringSpec single_mass(double y) {
  MassSpringSpec spec;
  spec.masses = {{0.0, y, 0.1}};
  return spec;
}

MassSpringSpec two_masses(double stiffness) {
  MassSpringSpec spec;
  spec.masses = {{0.0, 1.0, 0.1}, {0.2, 1.0, 0.3}};
  spec.springs = {{0, 1, 0.0, stiffness, false}};
  assign_rest_lengths(spec);
  return spec;
}

TEST(MassSpringTest, DefaultRobot) {
  const auto spec = default_robot();
  ASSERT_EQ(spec.masses.size(), 4u);
  ASSERT_EQ(spec.springs.size(), 6u);
  EXPECT_EQ(actuated_count(spec), 4);
  EXPECT_NEAR(spec.dt * double(spec.horizon), 8.0, 1e-12);
  for (const auto& s : spec.springs) {
    const auto& a = spec.masses[std::size_t(s.i)];
    const auto& b = spec.masses[std::size_t(s.j)];
    EXPECT_DOUBLE_EQ(s.rest_length, std::hypot(b.x - a.x, b.y - a.y));
  }
  EXPECT_NO_THROW(validate(spec));
  const auto mlp = mass_spring_policy(spec);
  EXPECT_EQ(mlp.input_dim, 6);
  EXPECT_EQ(mlp.output_dim, 4);
}

TEST(MassSpringTest, ValidateRejectsBadSprings) {
  auto spec = default_robot();
  spec.springs[0].j = 9;
  EXPECT_THROW(validate(spec), std::invalid_argument);
  spec = default_robot();
  spec.springs[0].j = spec.springs[0].i;
  EXPECT_THROW(validate(spec), std::invalid_argument);
}

TEST(MassSpringTest, CenterOfMassIsMassWeighted) {
  const auto spec = two_masses(100.0);
  const auto s = initial_state(spec);
  // (0.1 * 0 + 0.3 * 0.2) / 0.4
  EXPECT_NEAR(center_of_mass(s.positions, spec).x(), 0.15, 1e-15);
  EXPECT_NEAR(center_of_mass(s.positions, spec).y(), 1.0, 1e-15);
}

TEST(MassSpringTest, FreeFall) {
  const auto spec = single_mass(1.0);
  const auto s1 = ms_step(initial_state(spec), Vec(0), spec);
  EXPECT_DOUBLE_EQ(s1.velocities(1, 0), -spec.gravity * spec.dt);
  EXPECT_DOUBLE_EQ(s1.velocities(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(s1.positions(1, 0), 1.0 - spec.gravity * spec.dt * spec.dt);
}

TEST(MassSpringTest, ContactProjectionSticks) {
  const auto spec = single_mass(0.001);
  auto s = initial_state(spec);
  s.velocities.col(0) << 0.7, -1.0;
  const auto s1 = ms_step(s, Vec(0), spec);
  EXPECT_EQ(s1.positions(1, 0), spec.ground_y);
  EXPECT_EQ(s1.velocities(0, 0), 0.0);
  EXPECT_EQ(s1.velocities(1, 0), 0.0);
  EXPECT_EQ(s1.positions(0, 0), s.positions(0, 0) + spec.dt * s.velocities(0, 0) * (1.0 - spec.damping * spec.dt));
}

TEST(MassSpringTest, HookeForceOnStretchedSpring) {
  auto spec = two_masses(250.0);
  spec.gravity = 0.0;
  spec.damping = 0.0;
  auto s = initial_state(spec);
  s.positions(0, 1) = 0.22;  // 10% stretch of l0 = 0.2
  const auto s1 = ms_step(s, Vec(0), spec);
  const double f = 250.0 * 0.1 * 0.2;
  EXPECT_NEAR(0.1 * s1.velocities(0, 0) / spec.dt, f, 1e-9);
  EXPECT_NEAR(0.3 * s1.velocities(0, 1) / spec.dt, -f, 1e-9);
  EXPECT_EQ(s1.velocities(1, 0), 0.0);
}

TEST(MassSpringTest, CoincidentEndpointsThrow) {
  auto spec = two_masses(100.0);
  auto s = initial_state(spec);
  s.positions.col(1) = s.positions.col(0);
  EXPECT_THROW(ms_step(s, Vec(0), spec), std::domain_error);
}

TEST(MassSpringTest, ActuationLengthIsChecked) {
  const auto spec = default_robot();
  EXPECT_THROW(ms_step(initial_state(spec), Vec::Ones(3), spec), DimensionError);
}

// Property: with gravity, damping and contact disabled, internal spring forces
// conserve total momentum.
TEST(MassSpringTest, MomentumConservedWithoutExternalForces) {
  auto spec = default_robot();
  spec.gravity = 0.0;
  spec.damping = 0.0;
  spec.ground_y = -1e9;
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.85, 1.15);
  auto s = initial_state(spec);
  s.velocities = Eigen::Matrix2Xd::Random(2, 4);
  auto momentum = [&](const MassSpringState& st) {
    Eigen::Vector2d p = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < spec.masses.size(); ++i) p += spec.masses[i].mass * st.velocities.col(Eigen::Index(i));
    return p;
  };
  for (int t = 0; t < 500; ++t) {
    Vec act(4);
    for (auto& a : act) a = u(rng);
    const auto next = ms_step(s, act, spec);
    EXPECT_LE((momentum(next) - momentum(s)).norm(), 1e-10) << "step " << t;
    s = next;
  }
}

TEST(MassSpringTest, ZeroParamsGiveUnitMultipliers) {
  const auto spec = default_robot();
  const auto mlp = mass_spring_policy(spec);
  const Vec c = ms_controls(17, initial_state(spec), mlp, Vec::Zero(total_param_count(mlp)), spec);
  EXPECT_EQ(c, Vec::Ones(4));
}

TEST(MassSpringTest, ControlsStayInAmplitudeBand) {
  const auto spec = default_robot();
  const auto mlp = mass_spring_policy(spec);
  const ParamVector p = 3.0 * init_params(mlp, 4);
  Rng rng(11);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = initial_state(spec);
    s.positions += 0.05 * Eigen::Matrix2Xd::NullaryExpr(2, 4, [&] { return n(rng); });
    s.velocities = 2.0 * Eigen::Matrix2Xd::NullaryExpr(2, 4, [&] { return n(rng); });
    const Vec c = ms_controls(trial, s, mlp, p, spec);
    EXPECT_GE(c.minCoeff(), 1.0 - spec.amplitude);
    EXPECT_LE(c.maxCoeff(), 1.0 + spec.amplitude);
  }
}

TEST(MassSpringTest, ControlsMatchHandComputation) {
  MassSpringSpec spec;
  spec.masses = {{0.0, 0.2, 0.1}, {0.1, 0.2, 0.3}};
  spec.springs = {{0, 1, 0.0, 500.0, true}};
  assign_rest_lengths(spec);
  auto s = initial_state(spec);
  s.velocities.col(0) << 0.5, 0.0;
  s.velocities.col(1) << -0.1, 0.0;
  const MlpSpec mlp{6, {2}, 1, OutputSquash::kTanh};
  ParamVector p(17);
  p << 0.1, -0.2, 0.3, 0.05, 1.0, -0.5,  //
      0.4, 0.1, -0.1, 0.2, -2.0, 0.3,    //
      0.01, -0.02,                       //
      0.7, -1.1, 0.1;
  EXPECT_NEAR(ms_controls(3, s, mlp, p, spec)[0], 1.023191040122829, 1e-14);
}

TEST(MassSpringTest, ZeroPolicyDoesNotLocomote) {
  const auto spec = default_robot();
  const auto mlp = mass_spring_policy(spec);
  EXPECT_LE(std::abs(ms_cost(spec, mlp, Vec::Zero(total_param_count(mlp)))), 1e-3);
}

// Two hidden units carry sin/cos of the 5 rad/s clock; each actuated spring
// follows it at a fixed phase (bottom 270, right 90, top 90, left 270 deg).
TEST(MassSpringTest, ScriptedGaitMovesRight) {
  const auto spec = default_robot();
  const MlpSpec mlp{6, {2}, 4, OutputSquash::kTanh};
  ParamVector p = ParamVector::Zero(total_param_count(mlp));
  p[0] = 3.0;
  p[6 + 1] = 3.0;
  const double phases[4] = {270.0, 90.0, 90.0, 270.0};
  for (int i = 0; i < 4; ++i) {
    const double a = phases[i] * std::numbers::pi / 180.0;
    p[14 + 2 * i] = 2.0 * std::cos(a);
    p[14 + 2 * i + 1] = 2.0 * std::sin(a);
  }
  const auto r = ms_rollout(spec, mlp, p);
  EXPECT_LT(r.cost, 0.0);
  const auto n = Eigen::Index(spec.masses.size());
  for (Eigen::Index t = 0; t < r.trajectory.rows(); ++t) {
    for (Eigen::Index i = 0; i < n; ++i) ASSERT_GE(r.trajectory(t, 2 * i + 1), spec.ground_y);
  }
}

TEST(MassSpringTest, RolloutShapeAndDeterminism) {
  const auto spec = default_robot();
  const auto mlp = mass_spring_policy(spec);
  const ParamVector p = init_params(mlp, 3);
  const auto a = ms_rollout(spec, mlp, p);
  const auto b = ms_rollout(spec, mlp, p);
  EXPECT_EQ(a.trajectory.rows(), spec.horizon + 1);
  EXPECT_EQ(a.trajectory.cols(), 16);
  EXPECT_EQ(a.cost, b.cost);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_EQ(ms_cost(spec, mlp, p), a.cost);
  EXPECT_EQ(ms_rollout_grad(spec, mlp, p).cost, a.cost);
}

TEST(MassSpringTest, FullEpisodeGradientIsFinite) {
  const auto spec = default_robot();
  const auto mlp = mass_spring_policy(spec);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto cg = ms_rollout_grad(spec, mlp, 2.0 * init_params(mlp, seed));
    EXPECT_TRUE(all_finite(cg.grad));
    EXPECT_GT(cg.grad.norm(), 0.0);
  }
}

// Without contact the centre-of-mass cost is constant in the parameters.
TEST(MassSpringTest, ContactFreeCostHasZeroGradient) {
  const auto spec = harness::contact_free_variant(default_robot());
  const auto mlp = mass_spring_policy(spec);
  const auto cg = ms_rollout_grad(spec, mlp, init_params(mlp, 1));
  EXPECT_LE(cg.grad.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(cg.cost, ms_cost(spec, mlp, init_params(mlp, 2)), 1e-12);
}

TEST(MassSpringTest, ContactFreeAdjointMatchesFiniteDifferences) {
  const auto spec = harness::contact_free_variant(default_robot());
  const auto mlp = mass_spring_policy(spec);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng = substream(seed, 0, 0);
    const ParamVector p = init_params(mlp, seed) + 0.1 * standard_normal(total_param_count(mlp), rng);
    const auto r = ms_rollout(spec, mlp, p);
    for (Eigen::Index t = 0; t < r.trajectory.rows(); ++t) {
      for (Eigen::Index i = 0; i < 4; ++i) ASSERT_GT(r.trajectory(t, 2 * i + 1), spec.ground_y);
    }
    const Vec w = harness::contact_free_weights(spec);
    const auto cg = ms_terminal_x_grad(spec, mlp, p, w);
    EXPECT_GT(cg.grad.norm(), 1e-3);
    std::vector<Eigen::Index> all(std::size_t(p.size()));
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = Eigen::Index(i);
    const Vec fd = harness::central_differences(
        [&](const Vec& q) { return ms_terminal_x_grad(spec, mlp, q, w).cost; }, p, all, 1e-6);
    EXPECT_LE(max_relative_error(cg.grad, fd), 1e-4) << "seed " << seed;
  }
}

}  // namespace
}  // namespace gesdrs
