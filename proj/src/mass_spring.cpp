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

#include "gesdrs/mass_spring.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gesdrs {
namespace {

constexpr double kMinSpringLength = 1e-9;

struct SpringGeometry {
  Eigen::Vector2d dir;  // unit vector from i to j
  double length = 0.0;
};

SpringGeometry geometry(const Eigen::Matrix2Xd& pos, const Spring& s) {
  const Eigen::Vector2d d = pos.col(s.j) - pos.col(s.i);
  const double len = d.norm();
  if (len < kMinSpringLength) {
    throw std::domain_error("mass-spring: spring " + std::to_string(s.i) + "-" +
                            std::to_string(s.j) + " has coincident endpoints");
  }
  return {d / len, len};
}

Eigen::Matrix2Xd forces(const Eigen::Matrix2Xd& pos, const Vec& actuation,
                        const MassSpringSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.masses.size());
  Eigen::Matrix2Xd f = Eigen::Matrix2Xd::Zero(2, n);
  for (Eigen::Index i = 0; i < n; ++i) f(1, i) = -spec.masses[i].mass * spec.gravity;
  Eigen::Index k = 0;
  for (const auto& s : spec.springs) {
    const auto geo = geometry(pos, s);
    const double rest = s.actuated ? s.rest_length * actuation[k++] : s.rest_length;
    const Eigen::Vector2d fj = -s.stiffness * (geo.length - rest) * geo.dir;
    f.col(s.j) += fj;
    f.col(s.i) -= fj;
  }
  return f;
}

// One integration step; `contact` receives which masses were projected.
MassSpringState step_impl(const MassSpringState& state, const Vec& actuation,
                          const MassSpringSpec& spec, std::vector<char>* contact) {
  if (actuation.size() != actuated_count(spec)) {
    throw DimensionError("ms_step: actuation has length " + std::to_string(actuation.size()) +
                         ", expected " + std::to_string(actuated_count(spec)));
  }
  const Eigen::Matrix2Xd f = forces(state.positions, actuation, spec);
  MassSpringState next;
  next.velocities = state.velocities * (1.0 - spec.damping * spec.dt);
  for (std::size_t i = 0; i < spec.masses.size(); ++i) {
    next.velocities.col(Eigen::Index(i)) += spec.dt * f.col(Eigen::Index(i)) / spec.masses[i].mass;
  }
  next.positions = state.positions + spec.dt * next.velocities;
  if (contact) contact->assign(spec.masses.size(), 0);
  for (Eigen::Index i = 0; i < next.positions.cols(); ++i) {
    if (next.positions(1, i) < spec.ground_y) {
      next.positions(1, i) = spec.ground_y;
      next.velocities.col(i).setZero();
      if (contact) (*contact)[std::size_t(i)] = 1;
    }
  }
  return next;
}

struct Trace {
  std::vector<MassSpringState> states;
  std::vector<std::vector<char>> contacts;
  double cost = 0.0;
};

void check_policy(const MassSpringSpec& spec, const MlpSpec& mlp) {
  if (mlp.input_dim != spec.control_features || mlp.output_dim != actuated_count(spec)) {
    throw DimensionError("mass-spring policy must map " + std::to_string(spec.control_features) +
                         " features to " + std::to_string(actuated_count(spec)) + " actuators");
  }
}

double simulate(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params,
                Trace* trace) {
  validate(spec);
  check_policy(spec, mlp);
  MassSpringState state = initial_state(spec);
  const double x0 = center_of_mass(state.positions, spec).x();
  if (trace) {
    trace->states.reserve(std::size_t(spec.horizon) + 1);
    trace->contacts.reserve(std::size_t(spec.horizon));
    trace->states.push_back(state);
  }
  std::vector<char> contact;
  for (long t = 0; t < spec.horizon; ++t) {
    const Vec act = ms_controls(t, state, mlp, params, spec);
    state = step_impl(state, act, spec, trace ? &contact : nullptr);
    if (!state.positions.allFinite() || !state.velocities.allFinite()) {
      throw NonFiniteError("mass-spring: non-finite state", t + 1);
    }
    if (trace) {
      trace->states.push_back(state);
      trace->contacts.push_back(contact);
    }
  }
  const double cost = -(center_of_mass(state.positions, spec).x() - x0);
  if (trace) trace->cost = cost;
  return cost;
}

}  // namespace

MassSpringSpec default_robot() {
  MassSpringSpec spec;
  spec.masses = {{0.0, 0.0, 0.1}, {0.1, 0.0, 0.1}, {0.1, 0.1, 0.1}, {0.0, 0.1, 0.1}};
  spec.springs = {
      {0, 1, 0.0, 500.0, true}, {1, 2, 0.0, 500.0, true}, {2, 3, 0.0, 500.0, true},
      {3, 0, 0.0, 500.0, true}, {0, 2, 0.0, 500.0, false}, {1, 3, 0.0, 500.0, false},
  };
  assign_rest_lengths(spec);
  return spec;
}

void assign_rest_lengths(MassSpringSpec& spec) {
  for (auto& s : spec.springs) {
    const auto& a = spec.masses.at(std::size_t(s.i));
    const auto& b = spec.masses.at(std::size_t(s.j));
    s.rest_length = std::hypot(b.x - a.x, b.y - a.y);
  }
}

void validate(const MassSpringSpec& spec) {
  const int n = static_cast<int>(spec.masses.size());
  if (n == 0) throw std::invalid_argument("MassSpringSpec: no masses");
  for (const auto& m : spec.masses) {
    if (!(m.mass > 0)) throw std::invalid_argument("MassSpringSpec: masses must be positive");
  }
  for (const auto& s : spec.springs) {
    if (s.i < 0 || s.j < 0 || s.i >= n || s.j >= n || s.i == s.j) {
      throw std::invalid_argument("MassSpringSpec: spring endpoints must be distinct valid indices");
    }
    if (!(s.rest_length > 0) || !(s.stiffness > 0)) {
      throw std::invalid_argument("MassSpringSpec: springs need positive rest length and stiffness");
    }
  }
  if (!(spec.dt > 0) || spec.horizon < 0 || spec.damping < 0 || spec.amplitude < 0 ||
      spec.amplitude >= 1) {
    throw std::invalid_argument("MassSpringSpec: need dt > 0, horizon >= 0, damping >= 0, 0 <= a < 1");
  }
  if (spec.control_features != kMassSpringFeatures) {
    throw std::invalid_argument("MassSpringSpec: control_features must be 6");
  }
}

int actuated_count(const MassSpringSpec& spec) {
  int count = 0;
  for (const auto& s : spec.springs) count += s.actuated ? 1 : 0;
  return count;
}

MassSpringState initial_state(const MassSpringSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.masses.size());
  MassSpringState state{Eigen::Matrix2Xd(2, n), Eigen::Matrix2Xd::Zero(2, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    state.positions(0, i) = spec.masses[std::size_t(i)].x;
    state.positions(1, i) = spec.masses[std::size_t(i)].y;
  }
  return state;
}

MlpSpec mass_spring_policy(const MassSpringSpec& spec, int hidden) {
  return MlpSpec{spec.control_features, {hidden}, actuated_count(spec), OutputSquash::kTanh};
}

Eigen::Vector2d center_of_mass(const Eigen::Matrix2Xd& positions, const MassSpringSpec& spec) {
  Eigen::Vector2d acc = Eigen::Vector2d::Zero();
  double total = 0.0;
  for (std::size_t i = 0; i < spec.masses.size(); ++i) {
    acc += spec.masses[i].mass * positions.col(Eigen::Index(i));
    total += spec.masses[i].mass;
  }
  return acc / total;
}

Vec ms_features(long t, const MassSpringState& state, const MassSpringSpec& spec) {
  const double time = double(t) * spec.dt;
  Vec f(kMassSpringFeatures);
  f << std::sin(5.0 * time), std::cos(5.0 * time), std::sin(10.0 * time), std::cos(10.0 * time),
      center_of_mass(state.positions, spec).y() - spec.ground_y, state.velocities.row(0).mean();
  return f;
}

Vec ms_controls(long t, const MassSpringState& state, const MlpSpec& mlp,
                const ParamVector& params, const MassSpringSpec& spec) {
  if (mlp.output_dim != actuated_count(spec)) {
    throw DimensionError("ms_controls: policy output_dim must equal the actuated spring count");
  }
  const Vec out = mlp_forward(mlp, params, ms_features(t, state, spec));
  return (1.0 + spec.amplitude * out.array()).matrix();
}

MassSpringState ms_step(const MassSpringState& state, const Vec& actuation,
                        const MassSpringSpec& spec) {
  return step_impl(state, actuation, spec, nullptr);
}

RolloutResult ms_rollout(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params) {
  Trace tr;
  simulate(spec, mlp, params, &tr);
  const auto n = static_cast<Eigen::Index>(spec.masses.size());
  RolloutResult out;
  out.cost = tr.cost;
  out.trajectory.resize(static_cast<Eigen::Index>(tr.states.size()), 4 * n);
  for (std::size_t t = 0; t < tr.states.size(); ++t) {
    out.trajectory.row(Eigen::Index(t)).head(2 * n) = tr.states[t].positions.reshaped().transpose();
    out.trajectory.row(Eigen::Index(t)).tail(2 * n) = tr.states[t].velocities.reshaped().transpose();
  }
  return out;
}

double ms_cost(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params) {
  return simulate(spec, mlp, params, nullptr);
}

namespace {

// Reverse sweep for a cost linear in the final x coordinates,
// sum_i x_weights[i] * x_i(T).
ParamVector terminal_x_adjoint(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params,
                               const Trace& tr, const Vec& x_weights) {
  const auto n = static_cast<Eigen::Index>(spec.masses.size());
  double total_mass = 0.0;
  for (const auto& m : spec.masses) total_mass += m.mass;
  ParamVector grad = ParamVector::Zero(params.size());

  // Adjoints of the state entering step t+1.
  Eigen::Matrix2Xd ax = Eigen::Matrix2Xd::Zero(2, n);
  Eigen::Matrix2Xd av = Eigen::Matrix2Xd::Zero(2, n);
  ax.row(0) = x_weights.transpose();

  const double keep = 1.0 - spec.damping * spec.dt;
  const int n_act = actuated_count(spec);
  for (long t = spec.horizon - 1; t >= 0; --t) {
    const MassSpringState& s = tr.states[std::size_t(t)];
    const auto& contact = tr.contacts[std::size_t(t)];

    // Contact projection: clamped components pass no adjoint.
    Eigen::Matrix2Xd ax_pre = ax;
    Eigen::Matrix2Xd av_pre = av;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (contact[std::size_t(i)]) {
        ax_pre(1, i) = 0.0;
        av_pre.col(i).setZero();
      }
    }
    // x' = x + dt v'
    Eigen::Matrix2Xd ax_t = ax_pre;
    av_pre += spec.dt * ax_pre;
    // v' = keep * v + dt F / m
    Eigen::Matrix2Xd av_t = keep * av_pre;
    Eigen::Matrix2Xd af(2, n);
    for (Eigen::Index i = 0; i < n; ++i) af.col(i) = spec.dt * av_pre.col(i) / spec.masses[std::size_t(i)].mass;

    const Vec feats = ms_features(t, s, spec);
    const Vec out_raw = mlp_forward(mlp, params, feats);
    const Vec act = (1.0 + spec.amplitude * out_raw.array()).matrix();

    Vec a_act = Vec::Zero(n_act);
    Eigen::Index k = 0;
    for (const auto& sp : spec.springs) {
      const auto geo = geometry(s.positions, sp);
      const double rest = sp.actuated ? sp.rest_length * act[k] : sp.rest_length;
      const double ext = geo.length - rest;
      const Eigen::Vector2d w = af.col(sp.j) - af.col(sp.i);
      const double wn = w.dot(geo.dir);
      // d/dd of w . (-k ext dir)
      const Eigen::Vector2d ad =
          -sp.stiffness * (wn * geo.dir + (ext / geo.length) * (w - wn * geo.dir));
      ax_t.col(sp.j) += ad;
      ax_t.col(sp.i) -= ad;
      if (sp.actuated) {
        a_act[k] += sp.stiffness * wn * sp.rest_length;
        ++k;
      }
    }

    const Vec out_adj = spec.amplitude * a_act;
    const auto mg = mlp_forward_backward(mlp, params, feats, out_adj);
    grad += mg.param_grad;
    for (Eigen::Index i = 0; i < n; ++i) {
      ax_t(1, i) += mg.obs_grad[4] * spec.masses[std::size_t(i)].mass / total_mass;
      av_t(0, i) += mg.obs_grad[5] / double(n);
    }
    ax = std::move(ax_t);
    av = std::move(av_t);
  }
  return grad;
}

Vec com_x_weights(const MassSpringSpec& spec) {
  Vec w(Eigen::Index(spec.masses.size()));
  double total = 0.0;
  for (const auto& m : spec.masses) total += m.mass;
  for (std::size_t i = 0; i < spec.masses.size(); ++i) w[Eigen::Index(i)] = spec.masses[i].mass / total;
  return w;
}

}  // namespace

CostAndGrad ms_rollout_grad(const MassSpringSpec& spec, const MlpSpec& mlp,
                            const ParamVector& params) {
  Trace tr;
  simulate(spec, mlp, params, &tr);
  return {tr.cost, terminal_x_adjoint(spec, mlp, params, tr, -com_x_weights(spec))};
}

CostAndGrad ms_terminal_x_grad(const MassSpringSpec& spec, const MlpSpec& mlp, const ParamVector& params,
                               const Vec& x_weights) {
  if (x_weights.size() != Eigen::Index(spec.masses.size())) {
    throw DimensionError("ms_terminal_x_grad: one weight per mass required");
  }
  Trace tr;
  simulate(spec, mlp, params, &tr);
  const double cost = tr.states.back().positions.row(0).dot(x_weights);
  return {cost, terminal_x_adjoint(spec, mlp, params, tr, x_weights)};
}

}  // namespace gesdrs
