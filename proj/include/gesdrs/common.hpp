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
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gesdrs {

using Scalar = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Flat policy parameters. Layout is owned by the policy (see mlp.hpp).
using ParamVector = Vec;

// A rollout produced a NaN/Inf state. `step` is the simulation step index.
class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(const std::string& what, long step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One logged optimizer iteration.
struct RunRecord {
  long iteration = 0;
  long episodes = 0;       // objective evaluations consumed so far
  double cost = 0.0;       // cost observed this iteration
  double best_cost = 0.0;  // min cost over all evaluations so far
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  long drs_rollouts = 0;   // differentiable-sim rollouts; not part of the budget
};

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& x) {
  return x.allFinite();
}

}  // namespace gesdrs
