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

#pragma once

#include <cstdint>

#include "gesdrs/common.hpp"
#include "gesdrs/mlp.hpp"

namespace gesdrs {

// Cost plus the full state trajectory (one row per state, t = 0..T).
struct RolloutResult {
  double cost = 0.0;
  Mat trajectory;
};

struct CostAndGrad {
  double cost = 0.0;
  ParamVector grad;
};

// Torque-limited pendulum. Angle is measured from the horizontal; hanging
// straight down is -pi/2, so potential energy is m*g*l*sin(angle).
struct PendulumSpec {
  double m = 1.0;
  double l = 0.5;
  double j = 0.25;
  double g = 9.81;
  double b = 0.05;
  double u_max = 0.5 * 1.0 * 9.81 * 0.5;
  double dt = 0.01;
  long horizon = 400;
  int obs_history = 4;
};

struct PendulumState {
  double angle = 0.0;
  double velocity = 0.0;
};

// Multiplicative sim-to-real gap on (m, l, b). With jitter > 0 each factor is
// additionally scaled by a seeded draw from U(1 - jitter, 1 + jitter).
struct GapSpec {
  double m = 1.0;
  double l = 1.0;
  double b = 1.0;
  double jitter = 0.0;
};

void validate(const PendulumSpec& spec);

// Default policy: 2*obs_history inputs, one tanh hidden layer, one squashed output.
MlpSpec pendulum_policy(const PendulumSpec& spec, int hidden = 16);

double pendulum_energy(const PendulumState& state, const PendulumSpec& spec);
double target_energy(const PendulumSpec& spec);

// Semi-implicit Euler; the caller is responsible for |torque| <= u_max.
PendulumState pendulum_step(const PendulumState& state, double torque, const PendulumSpec& spec);

// Trajectory columns: angle, velocity.
RolloutResult pendulum_rollout(const PendulumSpec& spec, const MlpSpec& mlp,
                               const ParamVector& params);

// Same forward pass as pendulum_rollout without keeping the trajectory.
double pendulum_cost(const PendulumSpec& spec, const MlpSpec& mlp, const ParamVector& params);

// Exact gradient of the rollout cost from an adjoint sweep over the stored trajectory.
CostAndGrad pendulum_rollout_grad(const PendulumSpec& spec, const MlpSpec& mlp,
                                  const ParamVector& params);

PendulumSpec perturb_spec(const PendulumSpec& spec, const GapSpec& gap, std::uint64_t seed);

}  // namespace gesdrs
