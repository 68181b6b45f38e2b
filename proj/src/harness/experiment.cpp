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

#include "gesdrs/harness/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <thread>

#include <json.hpp>

#include "gesdrs/mass_spring.hpp"
#include "gesdrs/rng.hpp"

#ifndef GESDRS_VERSION
#define GESDRS_VERSION "unknown"
#endif

namespace gesdrs::harness {

namespace fs = std::filesystem;

PendulumSpec real_pendulum(const ExperimentConfig& cfg, std::uint64_t seed) {
  return perturb_spec(cfg.pendulum, cfg.gap, seed);
}

Vec synthetic_bias_direction(int dim, std::uint64_t seed) {
  Rng rng(splitmix64(seed ^ 0x5bd1e995ULL));
  Vec b = standard_normal(dim, rng);
  return b / b.norm();
}

Vec rotate_toward(const Vec& grad, const Vec& bias, double angle_deg) {
  const double norm = grad.norm();
  if (norm == 0.0 || angle_deg == 0.0) return grad;
  const Vec g = grad / norm;
  Vec perp = bias - bias.dot(g) * g;
  const double pn = perp.norm();
  if (pn < 1e-12) return grad;
  perp /= pn;
  const double phi = angle_deg * M_PI / 180.0;
  return norm * (std::cos(phi) * g + std::sin(phi) * perp);
}

Problem make_problem(const ExperimentConfig& cfg, std::uint64_t seed) {
  Problem p;
  switch (cfg.experiment) {
    case Experiment::kPendulumGap: {
      const PendulumSpec nominal = cfg.pendulum;
      const PendulumSpec real = real_pendulum(cfg, seed);
      p.policy = pendulum_policy(nominal, cfg.hidden);
      p.theta0 = init_params(p.policy, seed);
      const MlpSpec policy = p.policy;
      p.objective = [real, policy](const ParamVector& th) { return pendulum_cost(real, policy, th); };
      p.drs = [nominal, policy](const ParamVector& th) { return pendulum_rollout_grad(nominal, policy, th); };
      p.zero_policy_cost = pendulum_cost(real, policy, Vec::Zero(p.theta0.size()));
      break;
    }
    case Experiment::kMassSpringNaive: {
      const MassSpringSpec spec = cfg.mass_spring;
      p.policy = mass_spring_policy(spec, cfg.hidden);
      p.theta0 = init_params(p.policy, seed);
      const MlpSpec policy = p.policy;
      p.objective = [spec, policy](const ParamVector& th) { return ms_cost(spec, policy, th); };
      p.drs = [spec, policy](const ParamVector& th) { return ms_rollout_grad(spec, policy, th); };
      p.drs_is_objective = true;
      p.zero_policy_cost = ms_cost(spec, policy, Vec::Zero(p.theta0.size()));
      break;
    }
    case Experiment::kSyntheticQuadratic: {
      const int n = cfg.quad_dim;
      Rng rng(splitmix64(seed));
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      p.theta0.resize(n);
      for (int i = 0; i < n; ++i) p.theta0[i] = u(rng);
      const Vec bias = synthetic_bias_direction(n, seed);
      const double angle = cfg.quad_angle_deg;
      p.objective = [](const ParamVector& th) { return th.squaredNorm(); };
      p.drs = [bias, angle](const ParamVector& th) {
        return CostAndGrad{th.squaredNorm(), rotate_toward(2.0 * th, bias, angle)};
      };
      p.zero_policy_cost = 0.0;
      break;
    }
  }
  if (cfg.experiment != Experiment::kSyntheticQuadratic) p.groups = param_groups(p.policy);
  return p;
}

RunResult run_seed(const ExperimentConfig& cfg, std::uint64_t seed, RunOptions opts) {
  const Problem p = make_problem(cfg, seed);
  opts.seed = seed;
  opts.budget = cfg.budget;
  opts.wall_clock = cfg.wall_clock;
  const auto n = p.theta0.size();
  const OptimizerState opt = make_optimizer(cfg.opt, n, p.groups);
  switch (cfg.algorithm) {
    case Algorithm::kGuidedEs:
      if (cfg.t_sim == 0) return guided_es_run(p.objective, p.drs, cfg.ges, opt, p.theta0, opts);
      return sim_guided_real_run(p.objective, p.drs, cfg.ges, opt, make_optimizer(cfg.sim_opt, n, p.groups),
                                 cfg.t_sim, p.theta0, opts);
    case Algorithm::kVanillaEs:
      return vanilla_es_run(p.objective, cfg.ges, opt, p.theta0, opts);
    case Algorithm::kCmaEs:
      return cma_es_run(p.objective, cfg.cma_sigma, cfg.cma_lambda, p.theta0, opts);
    case Algorithm::kFirstOrder:
      return first_order_run(p.drs, opt, p.theta0, opts, p.drs_is_objective ? CostFn{} : p.objective);
  }
  throw std::logic_error("unhandled algorithm");
}

std::string format_record(const RunRecord& r) {
  return std::to_string(r.iteration) + "," + std::to_string(r.episodes) + "," + format_double(r.cost) + "," +
         format_double(r.best_cost) + "," + format_double(r.wall_ms) + "," + std::to_string(r.seed) + "," +
         std::to_string(r.drs_rollouts);
}

bool ExperimentOutcome::ok() const {
  for (const auto& s : seeds) {
    if (!s.ok) return false;
  }
  return true;
}

namespace {

nlohmann::json number_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

void write_manifest(const ExperimentConfig& cfg, const ExperimentOutcome& outcome) {
  nlohmann::ordered_json doc;
  doc["software"] = "gesdrs";
  doc["version"] = GESDRS_VERSION;
  nlohmann::ordered_json schema;
  schema["version"] = kCsvSchemaVersion;
  schema["header"] = kCsvHeader;
  doc["csv_schema"] = schema;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  const Config resolved = to_config(cfg);
  for (const auto& [k, v] : resolved.entries()) config[k] = v;
  doc["config"] = config;
  nlohmann::ordered_json seeds = nlohmann::ordered_json::array();
  for (const auto& s : outcome.seeds) {
    nlohmann::ordered_json e;
    e["seed"] = s.seed;
    e["csv"] = fs::path(s.csv).filename().string();
    e["status"] = s.ok ? "ok" : "failed";
    if (!s.ok) e["error"] = s.error;
    e["records"] = s.records;
    e["final_best_cost"] = number_or_null(s.final_best);
    seeds.push_back(e);
  }
  doc["seeds"] = seeds;
  doc["status"] = outcome.ok() ? "ok" : "failed";

  const fs::path final_path = fs::path(outcome.out_dir) / "manifest.json";
  const fs::path tmp = fs::path(outcome.out_dir) / "manifest.json.tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, final_path);
}

}  // namespace

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, int threads, std::ostream* log) {
  ExperimentOutcome outcome;
  outcome.out_dir = cfg.output_dir;
  fs::create_directories(cfg.output_dir);
  for (const auto seed : cfg.seeds) {
    SeedStatus status;
    status.seed = seed;
    status.csv = (fs::path(cfg.output_dir) / ("seed_" + std::to_string(seed) + ".csv")).string();
    status.final_best = std::numeric_limits<double>::infinity();
    std::ofstream csv(status.csv, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + status.csv);
    csv << kCsvHeader << "\n" << std::flush;

    RunOptions opts;
    opts.threads = threads;
    opts.on_record = [&](const RunRecord& r) {
      csv << format_record(r) << "\n" << std::flush;
      ++status.records;
      status.final_best = r.best_cost;
    };
    opts.on_warning = [&](const std::string& w) {
      if (log) *log << "seed " << seed << ": warning: " << w << "\n";
    };
    try {
      run_seed(cfg, seed, opts);
    } catch (const std::exception& e) {
      status.ok = false;
      status.error = e.what();
    }
    if (log) {
      *log << "seed " << seed << ": " << (status.ok ? "ok" : "FAILED: " + status.error) << ", " << status.records
           << " iterations, final best_cost " << status.final_best << "\n";
    }
    outcome.seeds.push_back(status);
  }
  write_manifest(cfg, outcome);
  return outcome;
}

int threads_from_env() {
  if (const char* env = std::getenv("THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw ConfigError(std::string("THREADS: expected a positive integer, got '") + env + "'");
    }
    return int(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace gesdrs::harness
