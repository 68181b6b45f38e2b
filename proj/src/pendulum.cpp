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

#include "gesdrs/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace gesdrs {
namespace {

struct Trace {
  std::vector<double> angle;
  std::vector<double> velocity;
  double cost = 0.0;
};

void check_policy(const PendulumSpec& spec, const MlpSpec& mlp) {
  if (mlp.input_dim != 2 * spec.obs_history || mlp.output_dim != 1) {
    throw DimensionError("pendulum policy must map " + std::to_string(2 * spec.obs_history) +
                         " observations to 1 torque");
  }
  if (mlp.output_squash != OutputSquash::kTanh) {
    throw std::invalid_argument("pendulum policy output must be tanh-squashed");
  }
}

// [a_t, v_t, a_{t-1}, v_{t-1}, ...]; slots before the start repeat state 0.
void fill_observation(const Trace& tr, long t, int history, Vec& obs) {
  for (int h = 0; h < history; ++h) {
    const long s = std::max(t - h, 0L);
    obs[2 * h] = tr.angle[s];
    obs[2 * h + 1] = tr.velocity[s];
  }
}

Trace simulate(const PendulumSpec& spec, const MlpSpec& mlp, const ParamVector& params) {
  validate(spec);
  check_policy(spec, mlp);
  const long horizon = spec.horizon;
  const double target = target_energy(spec);

  Trace tr;
  tr.angle.resize(horizon + 1);
  tr.velocity.resize(horizon + 1);
  PendulumState state{-std::numbers::pi / 2.0, 0.0};
  tr.angle[0] = state.angle;
  tr.velocity[0] = state.velocity;
  double e = pendulum_energy(state, spec) - target;
  tr.cost = e * e;

  Vec obs(2 * spec.obs_history);
  for (long t = 0; t < horizon; ++t) {
    fill_observation(tr, t, spec.obs_history, obs);
    const double torque = spec.u_max * mlp_forward(mlp, params, obs)[0];
    state = pendulum_step(state, torque, spec);
    if (!std::isfinite(state.angle) || !std::isfinite(state.velocity)) {
      throw NonFiniteError("pendulum: non-finite state", t + 1);
    }
    tr.angle[t + 1] = state.angle;
    tr.velocity[t + 1] = state.velocity;
    e = pendulum_energy(state, spec) - target;
    tr.cost += e * e;
  }
  return tr;
}

}  // namespace

void validate(const PendulumSpec& spec) {
  if (!(spec.m > 0 && spec.l > 0 && spec.j > 0 && spec.g > 0 && spec.b >= 0 &&
        spec.u_max > 0 && spec.dt > 0)) {
    throw std::invalid_argument("PendulumSpec: physical constants must be positive");
  }
  if (spec.horizon < 0) throw std::invalid_argument("PendulumSpec: horizon must be >= 0");
  if (spec.obs_history < 1) throw std::invalid_argument("PendulumSpec: obs_history must be >= 1");
}

MlpSpec pendulum_policy(const PendulumSpec& spec, int hidden) {
  return MlpSpec{2 * spec.obs_history, {hidden}, 1, OutputSquash::kTanh};
}

double pendulum_energy(const PendulumState& state, const PendulumSpec& spec) {
  return 0.5 * spec.j * state.velocity * state.velocity +
         spec.m * spec.g * spec.l * std::sin(state.angle);
}

// m*g*l*sin(2*pi). sin of a full turn is zero; std::sin(2*pi) would leave a
// -2.4e-16 rounding residue, so the value is returned exactly.
double target_energy(const PendulumSpec& spec) {
  return spec.m * spec.g * spec.l * 0.0;
}

PendulumState pendulum_step(const PendulumState& state, double torque, const PendulumSpec& spec) {
  const double gravity_torque = -spec.m * spec.g * spec.l * std::cos(state.angle);
  const double accel = (gravity_torque - spec.b * state.velocity + torque) / spec.j;
  PendulumState next;
  next.velocity = state.velocity + spec.dt * accel;
  next.angle = state.angle + spec.dt * next.velocity;
  return next;
}

RolloutResult pendulum_rollout(const PendulumSpec& spec, const MlpSpec& mlp,
                               const ParamVector& params) {
  Trace tr = simulate(spec, mlp, params);
  RolloutResult out;
  out.cost = tr.cost;
  out.trajectory.resize(static_cast<Eigen::Index>(tr.angle.size()), 2);
  for (std::size_t t = 0; t < tr.angle.size(); ++t) {
    out.trajectory(Eigen::Index(t), 0) = tr.angle[t];
    out.trajectory(Eigen::Index(t), 1) = tr.velocity[t];
  }
  return out;
}

double pendulum_cost(const PendulumSpec& spec, const MlpSpec& mlp, const ParamVector& params) {
  return simulate(spec, mlp, params).cost;
}

CostAndGrad pendulum_rollout_grad(const PendulumSpec& spec, const MlpSpec& mlp,
                                  const ParamVector& params) {
  const Trace tr = simulate(spec, mlp, params);
  const long horizon = spec.horizon;
  const double mgl = spec.m * spec.g * spec.l;
  const double target = target_energy(spec);

  // Adjoints of (angle_t, velocity_t), seeded with d(cost)/d(state_t).
  std::vector<double> ga(horizon + 1), gv(horizon + 1);
  for (long t = 0; t <= horizon; ++t) {
    const double c = 2.0 * (pendulum_energy({tr.angle[t], tr.velocity[t]}, spec) - target);
    ga[t] = c * mgl * std::cos(tr.angle[t]);
    gv[t] = c * spec.j * tr.velocity[t];
  }

  CostAndGrad out;
  out.cost = tr.cost;
  out.grad = ParamVector::Zero(params.size());
  Vec obs(2 * spec.obs_history);
  Vec out_adj(1);
  for (long t = horizon - 1; t >= 0; --t) {
    // angle_{t+1} = angle_t + dt * velocity_{t+1}
    const double gv_next = gv[t + 1] + spec.dt * ga[t + 1];
    ga[t] += ga[t + 1];
    // velocity_{t+1} = velocity_t + dt * (-mgl cos(angle_t) - b velocity_t + u_t) / J
    gv[t] += gv_next * (1.0 - spec.dt * spec.b / spec.j);
    ga[t] += gv_next * spec.dt * mgl * std::sin(tr.angle[t]) / spec.j;
    const double gu = gv_next * spec.dt / spec.j;

    fill_observation(tr, t, spec.obs_history, obs);
    out_adj[0] = gu * spec.u_max;
    const auto mg = mlp_forward_backward(mlp, params, obs, out_adj);
    out.grad += mg.param_grad;
    for (int h = 0; h < spec.obs_history; ++h) {
      const long s = std::max(t - h, 0L);
      ga[s] += mg.obs_grad[2 * h];
      gv[s] += mg.obs_grad[2 * h + 1];
    }
  }
  return out;
}

PendulumSpec perturb_spec(const PendulumSpec& spec, const GapSpec& gap, std::uint64_t seed) {
  for (double f : {gap.m, gap.l, gap.b}) {
    if (!(f >= 0.5 && f <= 2.0)) {
      throw std::invalid_argument("GapSpec: multipliers must lie in [0.5, 2.0], got " +
                                  std::to_string(f));
    }
  }
  if (!(gap.jitter >= 0.0 && gap.jitter < 0.5)) {
    throw std::invalid_argument("GapSpec: jitter must lie in [0, 0.5)");
  }
  double fm = gap.m, fl = gap.l, fb = gap.b;
  if (gap.jitter > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(1.0 - gap.jitter, 1.0 + gap.jitter);
    fm *= u(rng);
    fl *= u(rng);
    fb *= u(rng);
  }
  PendulumSpec out = spec;
  out.m *= fm;
  out.l *= fl;
  out.b *= fb;
  return out;
}

}  // namespace gesdrs
