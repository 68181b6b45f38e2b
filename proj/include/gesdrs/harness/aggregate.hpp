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
#include <vector>

#include "gesdrs/common.hpp"

namespace gesdrs::harness {

// Reads a run CSV written by run_experiment. Throws std::runtime_error on a
// missing file, wrong header or malformed row (message names file:line).
std::vector<RunRecord> read_run_csv(const std::string& path);

// Expands directories into their seed CSVs (sorted by name) and keeps plain
// file arguments as given.
std::vector<std::string> collect_run_csvs(const std::vector<std::string>& inputs);

// Linear-interpolation percentile, q in [0, 1] (the "linear" method of
// numpy.percentile).
double percentile(std::vector<double> values, double q);

struct Summary {
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  double mean = 0.0;
  double ci_low = 0.0;   // mean - 1.96 * sd / sqrt(n), sample sd
  double ci_high = 0.0;
};

Summary summarize(const std::vector<double>& values);

struct Curve {
  std::vector<long> episodes;
  std::vector<double> values;
};

Curve curve_from_records(const std::vector<RunRecord>& records, const std::string& metric);

struct AggregateRow {
  long episodes = 0;
  std::size_t runs = 0;
  Summary stats;
};

struct AggregateTable {
  std::vector<AggregateRow> rows;
  bool resampled = false;
};

// Checkpoint-wise statistics across runs. Runs with different episode grids
// are resampled onto the coarsest grid (fewest checkpoints) with carry-forward
// of each run's last value at or before the checkpoint; checkpoints beyond the
// shortest run are dropped.
AggregateTable aggregate_curves(const std::vector<Curve>& curves);

void write_aggregate_csv(std::ostream& out, const AggregateTable& table);

// Episodes consumed when best_cost first reaches <= threshold.
std::optional<long> episodes_to_threshold(const std::vector<RunRecord>& records, double threshold);

}  // namespace gesdrs::harness
