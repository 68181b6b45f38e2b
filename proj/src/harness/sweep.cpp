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

#include "gesdrs/harness/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "gesdrs/harness/aggregate.hpp"
#include "gesdrs/harness/experiment.hpp"

namespace gesdrs::harness {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_alternatives(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, '|')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : item.substr(b, e - b + 1));
  }
  return out;
}

}  // namespace

SweepGrid parse_grid(const Config& raw, const std::string& origin_dir) {
  SweepGrid grid;
  if (raw.has("sweep.base")) {
    fs::path base = raw.get("sweep.base", "");
    if (base.is_relative()) base = fs::path(origin_dir) / base;
    grid.base = Config::load(base.string());
  }
  for (const auto& [key, value] : raw.entries()) {
    if (key == "sweep.base") continue;
    if (key == "sweep.budget") {
      grid.budget = raw.get_long(key, 0);
      if (*grid.budget < 0) throw ConfigError(raw.where(key) + ": must be >= 0");
      continue;
    }
    if (key == "sweep.max_configs") {
      grid.max_configs = raw.get_long(key, grid.max_configs);
      continue;
    }
    if (key.rfind("sweep.", 0) == 0) throw ConfigError(raw.where(key) + ": unknown sweep key");
    if (value.find('|') == std::string::npos) {
      grid.base.set(key, value);
      continue;
    }
    GridAxis axis{key, split_alternatives(value)};
    for (const auto& v : axis.values) {
      if (v.empty()) throw ConfigError(raw.where(key) + ": empty alternative in '" + value + "'");
    }
    grid.axes.push_back(std::move(axis));
  }
  return grid;
}

SweepGrid load_grid(const std::string& path) {
  return parse_grid(Config::load(path), fs::path(path).parent_path().string().empty()
                                            ? "."
                                            : fs::path(path).parent_path().string());
}

std::size_t grid_size(const SweepGrid& grid) {
  std::size_t n = 1;
  for (const auto& a : grid.axes) n *= a.values.size();
  return n;
}

std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(const SweepGrid& grid) {
  const std::size_t total = grid_size(grid);
  if (long(total) > grid.max_configs) {
    throw ConfigError("sweep: grid has " + std::to_string(total) + " configurations, above the cap of " +
                      std::to_string(grid.max_configs) + " (raise sweep.max_configs)");
  }
  std::vector<std::vector<std::pair<std::string, std::string>>> out;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<std::pair<std::string, std::string>> point(grid.axes.size());
    std::size_t rem = flat;
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
      const auto& vals = grid.axes[a].values;
      point[a] = {grid.axes[a].key, vals[rem % vals.size()]};
      rem /= vals.size();
    }
    out.push_back(std::move(point));
  }
  return out;
}

SweepResult run_sweep(const SweepGrid& grid, const std::string& out_dir, int threads, std::ostream* log) {
  const auto points = expand_grid(grid);
  fs::create_directories(out_dir);

  // Resolve everything first so a bad grid point fails before any run.
  std::vector<ExperimentConfig> configs;
  std::vector<SweepEntry> entries;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Config c = grid.base;
    for (const auto& [k, v] : points[i]) c.set(k, v);
    char name[32];
    std::snprintf(name, sizeof name, "cfg_%03zu", i);
    SweepEntry e;
    e.index = int(i);
    e.settings = points[i];
    e.dir = (fs::path(out_dir) / name).string();
    c.set("run.out", e.dir);
    if (grid.budget) c.set("run.budget", std::to_string(*grid.budget));
    configs.push_back(resolve(c));
    entries.push_back(std::move(e));
  }

  for (std::size_t i = 0; i < configs.size(); ++i) {
    if (log) {
      *log << "[" << i + 1 << "/" << configs.size() << "]";
      for (const auto& [k, v] : entries[i].settings) *log << " " << k << "=" << v;
      *log << "\n";
    }
    const ExperimentOutcome outcome = run_experiment(configs[i], threads, nullptr);
    std::vector<double> finals;
    for (const auto& s : outcome.seeds) finals.push_back(s.ok ? s.final_best : std::numeric_limits<double>::infinity());
    entries[i].ok = outcome.ok();
    entries[i].median_final_best = percentile(finals, 0.5);
    if (log) *log << "    median final best_cost " << entries[i].median_final_best << "\n";
  }

  SweepResult result;
  result.ranked = entries;
  std::stable_sort(result.ranked.begin(), result.ranked.end(), [](const SweepEntry& a, const SweepEntry& b) {
    return a.median_final_best < b.median_final_best;
  });

  {
    std::ofstream out(fs::path(out_dir) / "ranking.csv");
    out << "rank,config,median_final_best,status";
    for (const auto& a : grid.axes) out << "," << a.key;
    out << "\n";
    char buf[64];
    for (std::size_t r = 0; r < result.ranked.size(); ++r) {
      const auto& e = result.ranked[r];
      std::snprintf(buf, sizeof buf, "%.17g", e.median_final_best);
      out << r + 1 << "," << fs::path(e.dir).filename().string() << "," << buf << "," << (e.ok ? "ok" : "failed");
      for (const auto& [k, v] : e.settings) out << "," << v;
      out << "\n";
    }
  }

  if (!result.ranked.empty()) {
    Config best = grid.base;
    for (const auto& [k, v] : result.ranked.front().settings) best.set(k, v);
    best.set("run.out", (fs::path(out_dir) / "best").string());
    result.best = to_config(resolve(best));
    std::ofstream out(fs::path(out_dir) / "best.cfg");
    out << "# best of " << result.ranked.size() << " sweep configurations";
    for (const auto& [k, v] : result.ranked.front().settings) out << "; " << k << "=" << v;
    out << "\n" << result.best.to_text();
  }
  return result;
}

}  // namespace gesdrs::harness
