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

#include "gesdrs/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gesdrs {
namespace {

constexpr double kNormGuard = 1e-12;

void fromage_group(const OptimizerConfig& cfg, Eigen::Ref<Vec> out, const Eigen::Ref<const Vec>& p,
                   const Eigen::Ref<const Vec>& g) {
  const double eta = cfg.lr;
  const double pnorm = p.norm();
  const double gnorm = std::max(g.norm(), kNormGuard);
  if (pnorm < kNormGuard) {
    out = p - eta * g / gnorm;
    return;
  }
  out = (p - eta * (pnorm / gnorm) * g) / std::sqrt(1.0 + eta * eta);
}

}  // namespace

OptimizerKind parse_optimizer_kind(const std::string& name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "fromage") return OptimizerKind::kFromage;
  throw std::invalid_argument("unknown optimizer '" + name + "' (expected sgd, adam or fromage)");
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kFromage: return "fromage";
  }
  return "?";
}

std::vector<ParamGroup> param_groups(const MlpSpec& spec) {
  std::vector<ParamGroup> groups;
  for (const auto& r : layer_ranges(spec)) groups.push_back({r.begin, r.end});
  return groups;
}

OptimizerState make_optimizer(const OptimizerConfig& config, Eigen::Index n,
                              std::vector<ParamGroup> groups) {
  if (!(config.lr > 0)) throw std::invalid_argument("optimizer learning rate must be positive");
  if (groups.empty()) groups.push_back({0, n});
  Eigen::Index expect = 0;
  for (const auto& g : groups) {
    if (g.begin != expect || g.end <= g.begin) {
      throw std::invalid_argument("optimizer parameter groups must partition [0, n) in order");
    }
    expect = g.end;
  }
  if (expect != n) throw std::invalid_argument("optimizer parameter groups must cover [0, n)");
  OptimizerState state;
  state.config = config;
  state.groups = std::move(groups);
  if (config.kind == OptimizerKind::kAdam) {
    state.m = Vec::Zero(n);
    state.v = Vec::Zero(n);
  }
  return state;
}

ParamVector opt_step(OptimizerState& state, const ParamVector& params, const ParamVector& grad) {
  const auto& cfg = state.config;
  const Eigen::Index n = state.groups.back().end;
  if (params.size() != n || grad.size() != n) {
    throw DimensionError("opt_step: parameter/gradient length does not match optimizer");
  }
  if (!grad.allFinite()) throw std::domain_error("opt_step: non-finite gradient");

  Vec g = grad;
  if (cfg.normalize_grad && cfg.kind != OptimizerKind::kFromage) {
    g /= std::max(g.norm(), kNormGuard);
  }

  ParamVector out(n);
  switch (cfg.kind) {
    case OptimizerKind::kSgd:
      out = params - cfg.lr * g;
      break;
    case OptimizerKind::kAdam: {
      const long t = state.step + 1;
      state.m = cfg.beta1 * state.m + (1.0 - cfg.beta1) * g;
      state.v = cfg.beta2 * state.v + (1.0 - cfg.beta2) * g.cwiseAbs2();
      const double c1 = 1.0 - std::pow(cfg.beta1, double(t));
      const double c2 = 1.0 - std::pow(cfg.beta2, double(t));
      out = params.array() -
            cfg.lr * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + cfg.eps);
      break;
    }
    case OptimizerKind::kFromage:
      if (cfg.fromage_global) {
        fromage_group(cfg, out, params, g);
      } else {
        for (const auto& grp : state.groups) {
          const Eigen::Index len = grp.end - grp.begin;
          fromage_group(cfg, out.segment(grp.begin, len), params.segment(grp.begin, len),
                        g.segment(grp.begin, len));
        }
      }
      break;
  }
  ++state.step;
  return out;
}

}  // namespace gesdrs
