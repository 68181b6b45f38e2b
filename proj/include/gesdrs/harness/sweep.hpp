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

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gesdrs/harness/config.hpp"

namespace gesdrs::harness {

struct GridAxis {
  std::string key;
  std::vector<std::string> values;
};

// Grid file: config lines where `key = a | b | c` enumerates values.
// Reserved keys: sweep.base (config file the grid extends, relative to the
// grid file), sweep.budget (reduced run.budget for sweep runs) and
// sweep.max_configs (refusal cap, default 256).
struct SweepGrid {
  Config base;
  std::vector<GridAxis> axes;
  std::optional<long> budget;
  long max_configs = 256;
};

SweepGrid parse_grid(const Config& raw, const std::string& origin_dir = ".");
SweepGrid load_grid(const std::string& path);

std::size_t grid_size(const SweepGrid& grid);

// Cartesian product in row-major order (last axis fastest). Throws
// ConfigError naming the count when it exceeds max_configs.
std::vector<std::vector<std::pair<std::string, std::string>>> expand_grid(const SweepGrid& grid);

struct SweepEntry {
  int index = 0;
  std::vector<std::pair<std::string, std::string>> settings;
  std::string dir;
  double median_final_best = 0.0;  // +inf if any seed failed or ran no iteration
  bool ok = true;
};

struct SweepResult {
  std::vector<SweepEntry> ranked;  // ascending median_final_best, ties by index
  Config best;                     // full-budget config of the winner
};

// Runs every grid point under <out>/cfg_NNN and writes <out>/ranking.csv and
// <out>/best.cfg.
SweepResult run_sweep(const SweepGrid& grid, const std::string& out_dir, int threads, std::ostream* log = nullptr);

}  // namespace gesdrs::harness
