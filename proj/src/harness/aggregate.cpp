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

#include "gesdrs/harness/aggregate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gesdrs/harness/experiment.hpp"

namespace gesdrs::harness {

namespace fs = std::filesystem;

std::vector<RunRecord> read_run_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error(path + ":1: expected header '" + std::string(kCsvHeader) + "'");
  }
  std::vector<RunRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    RunRecord r;
    unsigned long long seed = 0;
    int used = 0;
    const int got = std::sscanf(line.c_str(), "%ld,%ld,%lf,%lf,%lf,%llu,%ld%n", &r.iteration, &r.episodes, &r.cost,
                                &r.best_cost, &r.wall_ms, &seed, &r.drs_rollouts, &used);
    if (got != 7 || used != int(line.size())) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed row");
    }
    r.seed = seed;
    records.push_back(r);
  }
  return records;
}

std::vector<std::string> collect_run_csvs(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(in)) {
        const auto name = entry.path().filename().string();
        if (entry.is_regular_file() && name.rfind("seed_", 0) == 0 && entry.path().extension() == ".csv") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * double(values.size() - 1);
  const auto lo = std::size_t(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - double(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Summary summarize(const std::vector<double>& values) {
  Summary s;
  s.median = percentile(values, 0.5);
  s.p25 = percentile(values, 0.25);
  s.p75 = percentile(values, 0.75);
  const double n = double(values.size());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double half = 0.0;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    half = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

Curve curve_from_records(const std::vector<RunRecord>& records, const std::string& metric) {
  if (metric != "best_cost" && metric != "cost") {
    throw std::invalid_argument("metric must be best_cost or cost, got '" + metric + "'");
  }
  Curve c;
  for (const auto& r : records) {
    c.episodes.push_back(r.episodes);
    c.values.push_back(metric == "cost" ? r.cost : r.best_cost);
  }
  return c;
}

AggregateTable aggregate_curves(const std::vector<Curve>& curves) {
  AggregateTable table;
  if (curves.empty()) return table;
  bool same = true;
  for (const auto& c : curves) same = same && c.episodes == curves.front().episodes;

  if (same) {
    for (std::size_t k = 0; k < curves.front().episodes.size(); ++k) {
      std::vector<double> vals;
      for (const auto& c : curves) vals.push_back(c.values[k]);
      table.rows.push_back({curves.front().episodes[k], curves.size(), summarize(vals)});
    }
    return table;
  }

  table.resampled = true;
  const Curve* coarsest = &curves.front();
  long horizon = std::numeric_limits<long>::max();
  for (const auto& c : curves) {
    if (c.episodes.size() < coarsest->episodes.size()) coarsest = &c;
    horizon = std::min(horizon, c.episodes.empty() ? -1L : c.episodes.back());
  }
  for (long e : coarsest->episodes) {
    if (e > horizon) break;
    std::vector<double> vals;
    for (const auto& c : curves) {
      const auto it = std::upper_bound(c.episodes.begin(), c.episodes.end(), e);
      if (it == c.episodes.begin()) break;
      vals.push_back(c.values[std::size_t(it - c.episodes.begin()) - 1]);
    }
    if (vals.size() != curves.size()) continue;
    table.rows.push_back({e, curves.size(), summarize(vals)});
  }
  return table;
}

void write_aggregate_csv(std::ostream& out, const AggregateTable& table) {
  out << "episodes,runs,median,p25,p75,mean,ci_low,ci_high,resampled\n";
  char buf[512];
  for (const auto& r : table.rows) {
    const auto& s = r.stats;
    std::snprintf(buf, sizeof buf, "%ld,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.episodes, r.runs, s.median,
                  s.p25, s.p75, s.mean, s.ci_low, s.ci_high, table.resampled ? 1 : 0);
    out << buf;
  }
}

std::optional<long> episodes_to_threshold(const std::vector<RunRecord>& records, double threshold) {
  for (const auto& r : records) {
    if (r.best_cost <= threshold) return r.episodes;
  }
  return std::nullopt;
}

}  // namespace gesdrs::harness
