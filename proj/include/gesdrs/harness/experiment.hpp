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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gesdrs/harness/config.hpp"
#include "gesdrs/runners.hpp"

namespace gesdrs::harness {

inline constexpr const char* kCsvHeader = "iteration,episodes,cost,best_cost,wall_ms,seed,drs_rollouts";
inline constexpr int kCsvSchemaVersion = 1;

// Objective, simulator gradient and starting point of one experiment seed.
struct Problem {
  MlpSpec policy;  // unused by synthetic-quadratic
  std::vector<ParamGroup> groups;
  ParamVector theta0;
  CostFn objective;  // budgeted ("real") cost
  GradFn drs;        // differentiable simulator or synthetic surrogate
  bool drs_is_objective = false;  // drs cost equals objective cost
  double zero_policy_cost = 0.0;  // objective at all-zero parameters
};

// The pendulum-gap "real" system for `seed`: the nominal spec perturbed by
// the configured gap.
PendulumSpec real_pendulum(const ExperimentConfig& cfg, std::uint64_t seed);

// Direction the synthetic surrogate is rotated toward, fixed per seed.
Vec synthetic_bias_direction(int dim, std::uint64_t seed);

// grad rotated by `angle_deg` toward the component of `bias` orthogonal to
// grad, keeping |grad|.
Vec rotate_toward(const Vec& grad, const Vec& bias, double angle_deg);

Problem make_problem(const ExperimentConfig& cfg, std::uint64_t seed);

// Runs the configured algorithm for one seed. Records are streamed to
// opts.on_record as they are produced.
RunResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed, RunOptions opts);

std::string format_record(const RunRecord& r);

struct SeedStatus {
  std::uint64_t seed = 0;
  std::string csv;
  bool ok = true;
  std::string error;
  long records = 0;
  double final_best = 0.0;  // +inf when no iteration fit in the budget
};

struct ExperimentOutcome {
  std::string out_dir;
  std::vector<SeedStatus> seeds;
  bool ok() const;
};

// Writes <out>/seed_<s>.csv per seed and <out>/manifest.json. Failing seeds
// keep their partial CSV; the remaining seeds still run.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, int threads, std::ostream* log = nullptr);

// Thread count from the THREADS environment variable, else available cores.
int threads_from_env();

}  // namespace gesdrs::harness
