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

// gesdrs: run, aggregate, grad-check and sweep experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gesdrs/harness/aggregate.hpp"
#include "gesdrs/harness/config.hpp"
#include "gesdrs/harness/experiment.hpp"
#include "gesdrs/harness/grad_check.hpp"
#include "gesdrs/harness/sweep.hpp"

namespace {

using namespace gesdrs::harness;

enum ExitCode { kOk = 0, kConfigError = 1, kRuntimeError = 2, kCheckFailed = 3 };

void apply_overrides(Config& cfg, const std::vector<std::string>& sets) {
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set: expected key=value, got '" + s + "'");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
}

std::vector<double> parse_steps(const std::string& text) {
  std::vector<double> steps;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ConfigError("--steps: '" + item + "' is not a number");
    steps.push_back(v);
  }
  return steps;
}

int thread_count(int flag) { return flag > 0 ? flag : threads_from_env(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guided evolution strategies with differentiable-simulator surrogate gradients"};
  app.set_version_flag("--version", GESDRS_VERSION);
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "Evaluation threads (default: THREADS env var, else all cores)");

  auto* run = app.add_subcommand("run", "Run an experiment: one CSV per seed plus manifest.json");
  std::string config_path;
  std::string seed_list;
  std::string out_dir;
  std::vector<std::string> sets;
  run->add_option("--config", config_path, "Config file (key = value lines or JSON)")->required();
  run->add_option("--seed-list", seed_list, "Comma-separated seeds (overrides 'seeds')");
  run->add_option("--out", out_dir, "Output directory (overrides 'run.out')");
  run->add_option("--set", sets, "Override a config key: --set key=value (repeatable)");
  run->footer(config_help());

  auto* agg = app.add_subcommand("aggregate", "Quantile / CI curves across runs as CSV");
  std::vector<std::string> agg_inputs;
  std::string agg_out;
  std::string metric = "best_cost";
  agg->add_option("inputs", agg_inputs, "Run directories or seed CSVs")->required();
  agg->add_option("--out", agg_out, "Output CSV")->required();
  agg->add_option("--metric", metric, "best_cost or cost")->check(CLI::IsMember({"best_cost", "cost"}));

  auto* gc = app.add_subcommand("grad-check", "Adjoint gradient vs central finite differences");
  std::string gc_experiment;
  std::string gc_steps = "1e-4,1e-5,1e-6";
  int gc_coords = 20;
  std::uint64_t gc_seed = 0;
  std::string gc_config;
  std::vector<std::string> gc_sets;
  gc->add_option("--experiment", gc_experiment, "pendulum-gap | mass-spring-naive")->required();
  gc->add_option("--steps", gc_steps, "Comma-separated finite-difference step sizes");
  gc->add_option("--coords", gc_coords, "Sampled coordinates (0 = all)");
  gc->add_option("--seed", gc_seed, "Seed of the random parameter vector");
  gc->add_option("--config", gc_config, "Optional config file for simulator overrides");
  gc->add_option("--set", gc_sets, "Override a config key (repeatable)");

  auto* sw = app.add_subcommand("sweep", "Cartesian hyperparameter sweep at reduced budget");
  std::string grid_path;
  std::string sweep_out;
  sw->add_option("--grid", grid_path, "Grid file: config lines, 'key = a | b | c' for swept keys")->required();
  sw->add_option("--out", sweep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) {
      Config cfg = Config::load(config_path);
      if (!seed_list.empty()) cfg.set("seeds", seed_list);
      if (!out_dir.empty()) cfg.set("run.out", out_dir);
      apply_overrides(cfg, sets);
      const ExperimentConfig resolved = resolve(cfg);
      const int n_threads = thread_count(threads);
      ExperimentOutcome outcome;
      try {
        outcome = run_experiment(resolved, n_threads, &std::cerr);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
      }
      std::cout << "wrote " << outcome.seeds.size() << " run(s) to " << outcome.out_dir << "\n";
      return outcome.ok() ? kOk : kRuntimeError;
    }

    if (*agg) {
      const auto files = collect_run_csvs(agg_inputs);
      if (files.size() < 2) throw ConfigError("aggregate: need at least 2 runs, found " + std::to_string(files.size()));
      std::vector<Curve> curves;
      try {
        for (const auto& f : files) curves.push_back(curve_from_records(read_run_csv(f), metric));
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
      const AggregateTable table = aggregate_curves(curves);
      if (table.resampled) {
        std::cerr << "warning: episode grids differ; resampled to the coarsest common grid with carry-forward\n";
      }
      if (const auto parent = std::filesystem::path(agg_out).parent_path(); !parent.empty()) {
        std::filesystem::create_directories(parent);
      }
      std::ofstream out(agg_out);
      if (!out) {
        std::cerr << "error: cannot write " << agg_out << "\n";
        return kRuntimeError;
      }
      write_aggregate_csv(out, table);
      std::cout << "aggregated " << files.size() << " runs into " << table.rows.size() << " checkpoints: " << agg_out
                << "\n";
      return kOk;
    }

    if (*gc) {
      Config cfg = gc_config.empty() ? Config{} : Config::load(gc_config);
      cfg.set("experiment", gc_experiment);
      apply_overrides(cfg, gc_sets);
      const ExperimentConfig resolved = resolve(cfg);
      GradCheckReport report;
      try {
        report = grad_check(resolved, parse_steps(gc_steps), gc_coords, gc_seed);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
      }
      std::cout << format_report(report);
      return report.passed() ? kOk : kCheckFailed;
    }

    if (*sw) {
      const SweepGrid grid = load_grid(grid_path);
      std::cerr << "sweep: " << grid_size(grid) << " configuration(s)\n";
      SweepResult result;
      try {
        result = run_sweep(grid, sweep_out, thread_count(threads), &std::cerr);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
      }
      std::cout << "ranking: " << (std::filesystem::path(sweep_out) / "ranking.csv").string() << "\n"
                << "best config: " << (std::filesystem::path(sweep_out) / "best.cfg").string() << "\n";
      bool all_ok = true;
      for (const auto& e : result.ranked) all_ok = all_ok && e.ok;
      return all_ok ? kOk : kRuntimeError;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
