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

#include <vector>

#include <Eigen/Core>

#include "gesdrs/common.hpp"
#include "gesdrs/mlp.hpp"
#include "gesdrs/pendulum.hpp"

namespace gesdrs {

struct PointMass {
  double x = 0.0;
  double y = 0.0;
  double mass = 0.1;
};

struct Spring {
  int i = 0;
  int j = 0;
  double rest_length = 0.0;
  double stiffness = 500.0;
  bool actuated = false;
};

// 2D mass-spring robot on flat ground with naive (projection) contact.
struct MassSpringSpec {
  std::vector<PointMass> masses;
  std::vector<Spring> springs;
  double amplitude = 0.15;
  double damping = 2.0;  // velocity damping rate, 1/s
  double gravity = 9.81;
  double ground_y = 0.0;
  double dt = 0.004;
  long horizon = 2000;
  int control_features = 6;
};

// Positions and velocities as 2 x N matrices (column i is mass i).
struct MassSpringState {
  Eigen::Matrix2Xd positions;
  Eigen::Matrix2Xd velocities;
};

inline constexpr int kMassSpringFeatures = 6;

// Four 0.1 kg masses on a 0.1 m square resting on the ground, four actuated
// edge springs and two passive diagonals.
MassSpringSpec default_robot();

// Sets every spring's rest length to its initial endpoint distance.
void assign_rest_lengths(MassSpringSpec& spec);

void validate(const MassSpringSpec& spec);
int actuated_count(const MassSpringSpec& spec);
MassSpringState initial_state(const MassSpringSpec& spec);
MlpSpec mass_spring_policy(const MassSpringSpec& spec, int hidden = 16);

// Mass-weighted center of mass.
Eigen::Vector2d center_of_mass(const Eigen::Matrix2Xd& positions, const MassSpringSpec& spec);

// sin/cos of 5 and 10 rad/s, CoM height above ground, mean x-velocity.
Vec ms_features(long t, const MassSpringState& state, const MassSpringSpec& spec);

// Rest-length multipliers l_rest / l0 = 1 + a * out, one per actuated spring.
Vec ms_controls(long t, const MassSpringState& state, const MlpSpec& mlp,
                const ParamVector& params, const MassSpringSpec& spec);

MassSpringState ms_step(const MassSpringState& state, const Vec& actuation,
                        const MassSpringSpec& spec);

// cost = -(x_com(T) - x_com(0)). Trajectory row t holds x0,y0,x1,y1,...
// followed by vx0,vy0,vx1,vy1,...
RolloutResult ms_rollout(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params);
double ms_cost(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params);

// Reverse-mode gradient of the naive dynamics. Clamped contact components
// pass zero adjoint.
CostAndGrad ms_rollout_grad(const MassSpringSpec& spec, const MlpSpec& mlp,
                            const ParamVector& params);

// Cost sum_i w_i * x_i(T) and its gradient through the same adjoint sweep.
// Without ground contact the centre-of-mass displacement does not depend on
// the policy (internal forces conserve momentum), so this is the observable
// used to check the adjoint in the contact-free regime.
CostAndGrad ms_terminal_x_grad(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params,
                               const Vec& x_weights);

}  // namespace gesdrs
