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
#include <string>
#include <vector>

#include "gesdrs/common.hpp"
#include "gesdrs/harness/config.hpp"

namespace gesdrs::harness {

// Per-coordinate relative error |a - b| / max(|a|, |b|, floor) with
// floor = 1e-3 * max(|a|_inf, |b|_inf), or 1e-3 * scale when scale > 0.
// A zero pair has error 0.
Vec relative_errors(const Vec& a, const Vec& b, double scale = 0.0);
double max_relative_error(const Vec& a, const Vec& b);

// Central differences of f along the listed coordinates.
Vec central_differences(const std::function<double(const Vec&)>& f, const Vec& x,
                        const std::vector<Eigen::Index>& coords, double step);

// Robot lifted `lift` metres and truncated to `horizon` steps so that no mass
// reaches the ground.
MassSpringSpec contact_free_variant(MassSpringSpec spec, double lift = 1.0, long horizon = 100);

// Per-mass weights (+1, -2, +3, ...)/n of the terminal-x observable checked
// in the contact-free regime.
Vec contact_free_weights(const MassSpringSpec& spec);

struct StepReport {
  double step = 0.0;
  double max_rel = 0.0;
  double median_rel = 0.0;
};

struct GradCheckCase {
  std::string name;
  bool smooth = true;  // false: mismatch expected, never a failure
  std::vector<StepReport> steps;
  double best_max_rel() const;  // min over step sizes
};

struct GradCheckReport {
  std::string experiment;
  std::vector<GradCheckCase> cases;
  double tolerance = 1e-3;
  bool passed() const;
};

// Compares the adjoint gradient against central differences on `coords`
// sampled coordinates at a random parameter vector drawn from `seed`.
// pendulum-gap checks the nominal simulator; mass-spring-naive checks a
// contact-free variant (terminal-x observable) and reports the full episode
// as non-smooth.
GradCheckReport grad_check(const ExperimentConfig& cfg, const std::vector<double>& steps, int coords,
                           std::uint64_t seed);

std::string format_report(const GradCheckReport& report);

}  // namespace gesdrs::harness
