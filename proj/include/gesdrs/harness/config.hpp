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
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "gesdrs/ges.hpp"
#include "gesdrs/mass_spring.hpp"
#include "gesdrs/optim.hpp"
#include "gesdrs/pendulum.hpp"

namespace gesdrs::harness {

// Invalid configuration. The message carries the origin and line (or key).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat string map from dotted keys to values. Accepts either `key = value`
// lines (`#` starts a comment) or a JSON object, whose nested objects are
// flattened with '.'.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  void merge(const Config& other);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void erase(const std::string& key);

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // "file:line" of a key, or the origin when it was set programmatically.
  std::string where(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

  // `key = value` lines in key order; parse(to_text()) round-trips.
  std::string to_text() const;

 private:
  std::string origin_ = "<config>";
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

enum class Experiment { kPendulumGap, kMassSpringNaive, kSyntheticQuadratic };
enum class Algorithm { kGuidedEs, kVanillaEs, kCmaEs, kFirstOrder };

std::string to_string(Experiment e);
std::string to_string(Algorithm a);
Experiment parse_experiment(const std::string& name);
Algorithm parse_algorithm(const std::string& name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kPendulumGap;
  Algorithm algorithm = Algorithm::kGuidedEs;

  PendulumSpec pendulum;
  GapSpec gap{1.15, 1.0, 2.0, 0.0};
  MassSpringSpec mass_spring = default_robot();
  int hidden = 16;

  int quad_dim = 20;
  double quad_angle_deg = 0.0;  // rotation of the synthetic surrogate away from the gradient

  GesConfig ges;
  int t_sim = 0;  // 0: surrogate is the simulator gradient at theta_t; >= 1: inner descent steps
  OptimizerConfig opt;
  OptimizerConfig sim_opt;
  double cma_sigma = 0.1;
  int cma_lambda = 0;

  std::vector<std::uint64_t> seeds{0};
  long budget = 1000;
  std::string output_dir = "runs/out";
  bool wall_clock = false;
};

// Validates keys and values. Unknown keys are rejected.
ExperimentConfig resolve(const Config& config);

// Fully resolved config with every documented key, suitable for the manifest
// and for feeding back into resolve().
Config to_config(const ExperimentConfig& cfg);

// Documentation of every key, used by --help.
std::string config_help();

// Robot description: ms.masses = "x,y,mass; ...", ms.springs =
// "i,j,stiffness,actuated; ...". Rest lengths come from the initial layout.
MassSpringSpec parse_robot(const Config& config, MassSpringSpec base = default_robot());
std::string format_robot_masses(const MassSpringSpec& spec);
std::string format_robot_springs(const MassSpringSpec& spec);

std::vector<std::uint64_t> parse_seed_list(const std::string& text);

// Shortest representation that parses back to the same double.
std::string format_double(double v);

}  // namespace gesdrs::harness
