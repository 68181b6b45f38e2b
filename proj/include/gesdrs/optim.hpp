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

#include <string>
#include <vector>

#include "gesdrs/common.hpp"
#include "gesdrs/mlp.hpp"

namespace gesdrs {

enum class OptimizerKind { kSgd, kAdam, kFromage };

OptimizerKind parse_optimizer_kind(const std::string& name);
std::string to_string(OptimizerKind kind);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgd;
  double lr = 0.01;
  // g <- g / |g| before sgd/adam updates. Fromage is already scale invariant.
  bool normalize_grad = false;
  // Fromage over the whole vector instead of per parameter group.
  bool fromage_global = false;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct ParamGroup {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;
};

// One group per network layer (weights and bias together).
std::vector<ParamGroup> param_groups(const MlpSpec& spec);

struct OptimizerState {
  OptimizerConfig config;
  std::vector<ParamGroup> groups;  // partition of [0, n)
  Vec m;                           // adam first moment
  Vec v;                           // adam second moment
  long step = 0;
};

// Empty `groups` means a single group covering all n parameters.
OptimizerState make_optimizer(const OptimizerConfig& config, Eigen::Index n,
                              std::vector<ParamGroup> groups = {});

// Returns the updated parameters and advances `state`. Throws
// std::domain_error on a non-finite gradient, leaving `state` untouched.
ParamVector opt_step(OptimizerState& state, const ParamVector& params, const ParamVector& grad);

}  // namespace gesdrs
