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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gesdrs/cma.hpp"
#include "gesdrs/common.hpp"
#include "gesdrs/ges.hpp"
#include "gesdrs/optim.hpp"
#include "gesdrs/pendulum.hpp"

namespace gesdrs {

// Objective oracles must be pure: they are called concurrently.
using CostFn = std::function<double(const ParamVector&)>;
using GradFn = std::function<CostAndGrad(const ParamVector&)>;
using RecordSink = std::function<void(const RunRecord&)>;
using WarningSink = std::function<void(const std::string&)>;

struct RunOptions {
  std::uint64_t seed = 0;
  long budget = 0;  // objective evaluations (episodes)
  int threads = 1;
  bool wall_clock = false;  // fill RunRecord::wall_ms; off keeps logs reproducible
  RecordSink on_record;
  WarningSink on_warning;
};

struct RunResult {
  std::vector<RunRecord> records;
  ParamVector theta;
  long warnings = 0;
};

// Evaluates f on every point. Results are indexed by position, so the output
// does not depend on `threads`. The exception of the lowest failing index is
// rethrown after all workers finish.
std::vector<double> evaluate_batch(const CostFn& f, const std::vector<ParamVector>& points,
                                   int threads);

// Guided-ES driven by a surrogate gradient taken at the current iterate.
// An empty `surrogate` or alpha = 1 reduces to Vanilla-ES. Each iteration
// consumes 2*pop episodes; iterations that would exceed the budget are not run.
RunResult guided_es_run(const CostFn& objective, const GradFn& surrogate, const GesConfig& cfg,
                        const OptimizerState& opt, ParamVector theta0, const RunOptions& opts);

RunResult vanilla_es_run(const CostFn& objective, const GesConfig& cfg, const OptimizerState& opt,
                         ParamVector theta0, const RunOptions& opts);

// Guided-ES against `f_real` with the surrogate direction theta_sim - theta_t
// obtained from `t_sim` optimizer steps on the differentiable simulator.
// The inner optimizer restarts from `opt_sim` each outer iteration. A
// diverging inner run skips the surrogate for that iteration.
RunResult sim_guided_real_run(const CostFn& f_real, const GradFn& drs, const GesConfig& cfg,
                              const OptimizerState& opt_real, const OptimizerState& opt_sim,
                              int t_sim, ParamVector theta0, const RunOptions& opts);

// Computes the surrogate direction of one sim_guided_real_run outer iteration.
// Returns nullopt when the inner run diverges.
std::optional<ParamVector> simulated_descent_direction(const GradFn& drs, const OptimizerState& opt_sim,
                                                       int t_sim, const ParamVector& theta,
                                                       long* drs_rollouts = nullptr);

RunResult cma_es_run(const CostFn& objective, double sigma0, int lambda, ParamVector theta0,
                     const RunOptions& opts);

// Plain descent on the simulator gradient. With `evaluate` set, the iterate is
// scored on that objective (one episode per iteration) and simulator calls are
// metered as DRS rollouts; otherwise each gradient rollout is the episode.
RunResult first_order_run(const GradFn& drs, const OptimizerState& opt, ParamVector theta0,
                          const RunOptions& opts, const CostFn& evaluate = {});

}  // namespace gesdrs
