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

#include "gesdrs/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gesdrs::harness {
namespace {

using nlohmann::json;

struct KeyDoc {
  const char* key;
  const char* fallback;
  const char* help;
};

// Every accepted key. Defaults shown here are the ones resolve() applies.
const std::vector<KeyDoc>& key_docs() {
  static const std::vector<KeyDoc> docs = {
      {"experiment", "pendulum-gap", "pendulum-gap | mass-spring-naive | synthetic-quadratic"},
      {"algorithm", "guided-es", "guided-es | vanilla-es | cma-es | first-order"},
      {"seeds", "0", "comma-separated distinct seeds; one CSV per seed"},
      {"run.budget", "1000", "objective evaluations (episodes) per seed; simulator rollouts are free"},
      {"run.out", "runs/out", "output directory"},
      {"run.wall_clock", "false", "fill the wall_ms column (makes CSVs run-dependent)"},
      {"policy.hidden", "16", "hidden units of the tanh policy"},
      {"pendulum.m", "1.0", "mass, kg"},
      {"pendulum.l", "0.5", "length, m"},
      {"pendulum.j", "0.25", "inertia, kg m^2"},
      {"pendulum.g", "9.81", "gravity, m/s^2"},
      {"pendulum.b", "0.05", "viscous damping, N m s/rad"},
      {"pendulum.u_max", "2.4525", "torque limit, N m"},
      {"pendulum.dt", "0.01", "timestep, s"},
      {"pendulum.horizon", "400", "steps per episode"},
      {"gap.m", "1.15", "mass multiplier of the 'real' pendulum"},
      {"gap.l", "1.0", "length multiplier of the 'real' pendulum"},
      {"gap.b", "2.0", "damping multiplier of the 'real' pendulum"},
      {"gap.jitter", "0.0", "extra seeded relative jitter on the gap multipliers"},
      {"ms.robot", "", "robot-description file (same keys as ms.*); overridden by inline ms.* keys"},
      {"ms.masses", "0,0,0.1; 0.1,0,0.1; 0.1,0.1,0.1; 0,0.1,0.1", "x,y,mass per mass"},
      {"ms.springs", "0,1,500,1; 1,2,500,1; 2,3,500,1; 3,0,500,1; 0,2,500,0; 1,3,500,0",
       "i,j,stiffness,actuated per spring"},
      {"ms.amplitude", "0.15", "actuation amplitude a: rest length in [1-a, 1+a] * l0"},
      {"ms.damping", "2.0", "velocity damping rate, 1/s"},
      {"ms.gravity", "9.81", "gravity, m/s^2"},
      {"ms.ground", "0.0", "ground height, m"},
      {"ms.dt", "0.004", "timestep, s"},
      {"ms.horizon", "2000", "steps per episode"},
      {"quad.dim", "20", "dimension of the synthetic quadratic"},
      {"quad.angle_deg", "0", "angle between the synthetic surrogate and the true gradient"},
      {"ges.alpha", "0.5", "isotropic share of the search covariance, [0, 1]"},
      {"ges.sigma", "0.1", "perturbation scale"},
      {"ges.beta", "2.0", "gradient estimate scale"},
      {"ges.pop", "10", "antithetic pairs per iteration (2*pop episodes)"},
      {"ges.k", "1", "number of surrogate directions kept"},
      {"ges.t_sim", "20 for pendulum-gap, else 0",
       "0: surrogate = simulator gradient at theta; >=1: simulator descent steps per iteration"},
      {"ges.rank_shaping", "false", "replace losses by centered ranks"},
      {"opt.kind", "sgd", "outer optimizer: sgd | adam | fromage"},
      {"opt.lr", "0.01", "outer learning rate"},
      {"opt.normalize_grad", "false", "normalize gradients before sgd/adam steps"},
      {"opt.fromage_global", "false", "fromage over the whole vector instead of per layer"},
      {"sim_opt.kind", "fromage", "simulator-descent / first-order optimizer"},
      {"sim_opt.lr", "0.01", "simulator-descent learning rate"},
      {"sim_opt.normalize_grad", "false", "normalize simulator gradients before sgd/adam steps"},
      {"sim_opt.fromage_global", "false", "fromage over the whole vector instead of per layer"},
      {"cma.sigma", "0.1", "initial CMA-ES step size"},
      {"cma.lambda", "0", "CMA-ES population; 0 = 4 + floor(3 ln n)"},
  };
  return docs;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "" || !std::isfinite(v)) {
    throw ConfigError(context + ": expected a finite number, got '" + text + "'");
  }
  return v;
}

long to_long(const std::string& text, const std::string& context) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "") {
    throw ConfigError(context + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::string json_scalar(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void flatten(const json& node, const std::string& prefix, Config& out) {
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    return;
  }
  if (node.is_array()) {
    std::string joined;
    for (std::size_t i = 0; i < node.size(); ++i) {
      const json& item = node[i];
      std::string part;
      if (item.is_array()) {
        for (std::size_t j = 0; j < item.size(); ++j) part += (j ? "," : "") + json_scalar(item[j]);
      } else {
        part = json_scalar(item);
      }
      const bool nested = item.is_array();
      joined += (i ? (nested ? "; " : ",") : "") + part;
    }
    out.set(prefix, joined);
    return;
  }
  out.set(prefix, json_scalar(node));
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    json doc;
    try {
      doc = json::parse(body);
    } catch (const json::parse_error& e) {
      throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
    flatten(doc, "", cfg);
    cfg.origin_ = origin;
    return cfg;
  }
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.has(key)) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    cfg.values_[key] = trim(line.substr(eq + 1));
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_.erase(key);
}

void Config::merge(const Config& other) {
  for (const auto& [k, v] : other.values_) {
    values_[k] = v;
    const auto it = other.lines_.find(k);
    if (it != other.lines_.end()) {
      lines_[k] = it->second;
    } else {
      lines_.erase(k);
    }
  }
}

void Config::erase(const std::string& key) {
  values_.erase(key);
  lines_.erase(key);
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::string Config::where(const std::string& key) const {
  const auto it = lines_.find(key);
  std::string loc = origin_;
  if (it != lines_.end()) loc += ":" + std::to_string(it->second);
  return loc + ": key '" + key + "'";
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? to_double(get(key, ""), where(key)) : fallback;
}

long Config::get_long(const std::string& key, long fallback) const {
  return has(key) ? to_long(get(key, ""), where(key)) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = get(key, "");
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(where(key) + ": expected true/false, got '" + get(key, "") + "'");
}

std::string Config::to_text() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::kPendulumGap: return "pendulum-gap";
    case Experiment::kMassSpringNaive: return "mass-spring-naive";
    case Experiment::kSyntheticQuadratic: return "synthetic-quadratic";
  }
  return "?";
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kGuidedEs: return "guided-es";
    case Algorithm::kVanillaEs: return "vanilla-es";
    case Algorithm::kCmaEs: return "cma-es";
    case Algorithm::kFirstOrder: return "first-order";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::kPendulumGap, Experiment::kMassSpringNaive, Experiment::kSyntheticQuadratic}) {
    if (to_string(e) == name) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::kGuidedEs, Algorithm::kVanillaEs, Algorithm::kCmaEs, Algorithm::kFirstOrder}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown algorithm '" + name + "'");
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.front() == '-') {
      throw ConfigError("seed list: '" + item + "' is not a non-negative integer");
    }
    if (std::find(seeds.begin(), seeds.end(), v) != seeds.end()) {
      throw ConfigError("seed list: duplicate seed " + item);
    }
    seeds.push_back(v);
  }
  if (seeds.empty()) throw ConfigError("seed list: at least one seed is required");
  return seeds;
}

MassSpringSpec parse_robot(const Config& config, MassSpringSpec spec) {
  if (config.has("ms.masses")) {
    spec.masses.clear();
    for (const auto& tuple : split(config.get("ms.masses", ""), ';')) {
      if (tuple.empty()) continue;
      const auto f = split(tuple, ',');
      if (f.size() != 3) throw ConfigError(config.where("ms.masses") + ": expected 'x,y,mass' per entry");
      const auto ctx = config.where("ms.masses");
      spec.masses.push_back({to_double(f[0], ctx), to_double(f[1], ctx), to_double(f[2], ctx)});
    }
  }
  if (config.has("ms.springs")) {
    spec.springs.clear();
    for (const auto& tuple : split(config.get("ms.springs", ""), ';')) {
      if (tuple.empty()) continue;
      const auto f = split(tuple, ',');
      const auto ctx = config.where("ms.springs");
      if (f.size() != 4) throw ConfigError(ctx + ": expected 'i,j,stiffness,actuated' per entry");
      Spring s;
      s.i = int(to_long(f[0], ctx));
      s.j = int(to_long(f[1], ctx));
      s.stiffness = to_double(f[2], ctx);
      s.actuated = to_long(f[3], ctx) != 0;
      spec.springs.push_back(s);
    }
  }
  const int n = int(spec.masses.size());
  for (const auto& s : spec.springs) {
    if (s.i < 0 || s.j < 0 || s.i >= n || s.j >= n || s.i == s.j) {
      throw ConfigError(config.where("ms.springs") + ": spring endpoints must be distinct indices below " +
                        std::to_string(n));
    }
  }
  assign_rest_lengths(spec);
  spec.amplitude = config.get_double("ms.amplitude", spec.amplitude);
  spec.damping = config.get_double("ms.damping", spec.damping);
  spec.gravity = config.get_double("ms.gravity", spec.gravity);
  spec.ground_y = config.get_double("ms.ground", spec.ground_y);
  spec.dt = config.get_double("ms.dt", spec.dt);
  spec.horizon = config.get_long("ms.horizon", spec.horizon);
  return spec;
}

std::string format_robot_masses(const MassSpringSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.masses.size(); ++i) {
    const auto& m = spec.masses[i];
    out += (i ? "; " : "") + fmt(m.x) + "," + fmt(m.y) + "," + fmt(m.mass);
  }
  return out;
}

std::string format_robot_springs(const MassSpringSpec& spec) {
  std::string out;
  for (std::size_t i = 0; i < spec.springs.size(); ++i) {
    const auto& s = spec.springs[i];
    out += (i ? "; " : "") + std::to_string(s.i) + "," + std::to_string(s.j) + "," + fmt(s.stiffness) +
           "," + (s.actuated ? "1" : "0");
  }
  return out;
}

ExperimentConfig resolve(const Config& config) {
  for (const auto& [key, value] : config.entries()) {
    const auto& docs = key_docs();
    const bool known = std::any_of(docs.begin(), docs.end(), [&](const KeyDoc& d) { return key == d.key; });
    if (!known) throw ConfigError(config.where(key) + ": unknown key (see --help for the list)");
  }

  ExperimentConfig cfg;
  try {
    cfg.experiment = parse_experiment(config.get("experiment", "pendulum-gap"));
  } catch (const ConfigError& e) {
    throw ConfigError(config.where("experiment") + ": " + e.what());
  }
  try {
    cfg.algorithm = parse_algorithm(config.get("algorithm", "guided-es"));
  } catch (const ConfigError& e) {
    throw ConfigError(config.where("algorithm") + ": " + e.what());
  }
  try {
    cfg.seeds = parse_seed_list(config.get("seeds", "0"));
  } catch (const ConfigError& e) {
    throw ConfigError(config.where("seeds") + ": " + e.what());
  }
  cfg.budget = config.get_long("run.budget", cfg.budget);
  if (cfg.budget < 0) throw ConfigError(config.where("run.budget") + ": must be >= 0");
  cfg.output_dir = config.get("run.out", cfg.output_dir);
  cfg.wall_clock = config.get_bool("run.wall_clock", cfg.wall_clock);
  cfg.hidden = int(config.get_long("policy.hidden", cfg.hidden));
  if (cfg.hidden < 1) throw ConfigError(config.where("policy.hidden") + ": must be >= 1");

  auto& p = cfg.pendulum;
  p.m = config.get_double("pendulum.m", p.m);
  p.l = config.get_double("pendulum.l", p.l);
  p.j = config.get_double("pendulum.j", p.j);
  p.g = config.get_double("pendulum.g", p.g);
  p.b = config.get_double("pendulum.b", p.b);
  p.u_max = config.get_double("pendulum.u_max", p.u_max);
  p.dt = config.get_double("pendulum.dt", p.dt);
  p.horizon = config.get_long("pendulum.horizon", p.horizon);
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("pendulum.*: ") + e.what());
  }

  cfg.gap.m = config.get_double("gap.m", cfg.gap.m);
  cfg.gap.l = config.get_double("gap.l", cfg.gap.l);
  cfg.gap.b = config.get_double("gap.b", cfg.gap.b);
  cfg.gap.jitter = config.get_double("gap.jitter", cfg.gap.jitter);
  try {
    perturb_spec(p, cfg.gap, 0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("gap.*: ") + e.what());
  }

  MassSpringSpec robot = default_robot();
  if (config.has("ms.robot")) {
    std::filesystem::path file = config.get("ms.robot", "");
    const auto origin = config.where("ms.robot");
    const std::string from = origin.substr(0, origin.find(':'));
    if (file.is_relative() && std::filesystem::exists(from)) {
      file = std::filesystem::path(from).parent_path() / file;
    }
    Config robot_cfg = Config::load(file.string());
    robot = parse_robot(robot_cfg, robot);
  }
  cfg.mass_spring = parse_robot(config, robot);
  try {
    validate(cfg.mass_spring);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ms.*: ") + e.what());
  }

  cfg.quad_dim = int(config.get_long("quad.dim", cfg.quad_dim));
  if (cfg.quad_dim < 1) throw ConfigError(config.where("quad.dim") + ": must be >= 1");
  cfg.quad_angle_deg = config.get_double("quad.angle_deg", cfg.quad_angle_deg);
  if (!(cfg.quad_angle_deg >= 0.0 && cfg.quad_angle_deg < 90.0)) {
    throw ConfigError(config.where("quad.angle_deg") + ": must lie in [0, 90)");
  }

  auto& g = cfg.ges;
  g.alpha = config.get_double("ges.alpha", g.alpha);
  g.sigma = config.get_double("ges.sigma", g.sigma);
  g.beta = config.get_double("ges.beta", g.beta);
  g.pop = int(config.get_long("ges.pop", g.pop));
  g.k = int(config.get_long("ges.k", g.k));
  g.rank_shaping = config.get_bool("ges.rank_shaping", g.rank_shaping);
  try {
    validate(g);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("ges.*: ") + e.what());
  }
  cfg.t_sim = int(config.get_long("ges.t_sim", cfg.experiment == Experiment::kPendulumGap ? 20 : 0));
  if (cfg.t_sim < 0) throw ConfigError(config.where("ges.t_sim") + ": must be >= 0");

  auto read_opt = [&](const std::string& prefix, OptimizerConfig o) {
    try {
      o.kind = parse_optimizer_kind(config.get(prefix + ".kind", to_string(o.kind)));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(config.where(prefix + ".kind") + ": " + e.what());
    }
    o.lr = config.get_double(prefix + ".lr", o.lr);
    if (!(o.lr > 0)) throw ConfigError(config.where(prefix + ".lr") + ": must be > 0");
    o.normalize_grad = config.get_bool(prefix + ".normalize_grad", o.normalize_grad);
    o.fromage_global = config.get_bool(prefix + ".fromage_global", o.fromage_global);
    return o;
  };
  cfg.opt = read_opt("opt", cfg.opt);
  OptimizerConfig sim_default;
  sim_default.kind = OptimizerKind::kFromage;
  cfg.sim_opt = read_opt("sim_opt", sim_default);

  cfg.cma_sigma = config.get_double("cma.sigma", cfg.cma_sigma);
  if (!(cfg.cma_sigma > 0)) throw ConfigError(config.where("cma.sigma") + ": must be > 0");
  cfg.cma_lambda = int(config.get_long("cma.lambda", cfg.cma_lambda));
  if (cfg.cma_lambda != 0 && cfg.cma_lambda < 4) {
    throw ConfigError(config.where("cma.lambda") + ": must be 0 (default) or >= 4");
  }
  return cfg;
}

Config to_config(const ExperimentConfig& cfg) {
  Config c;
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  c.set("experiment", to_string(cfg.experiment));
  c.set("algorithm", to_string(cfg.algorithm));
  std::string seeds;
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) seeds += (i ? "," : "") + std::to_string(cfg.seeds[i]);
  c.set("seeds", seeds);
  c.set("run.budget", std::to_string(cfg.budget));
  c.set("run.out", cfg.output_dir);
  c.set("run.wall_clock", b(cfg.wall_clock));
  c.set("policy.hidden", std::to_string(cfg.hidden));
  const auto& p = cfg.pendulum;
  c.set("pendulum.m", fmt(p.m));
  c.set("pendulum.l", fmt(p.l));
  c.set("pendulum.j", fmt(p.j));
  c.set("pendulum.g", fmt(p.g));
  c.set("pendulum.b", fmt(p.b));
  c.set("pendulum.u_max", fmt(p.u_max));
  c.set("pendulum.dt", fmt(p.dt));
  c.set("pendulum.horizon", std::to_string(p.horizon));
  c.set("gap.m", fmt(cfg.gap.m));
  c.set("gap.l", fmt(cfg.gap.l));
  c.set("gap.b", fmt(cfg.gap.b));
  c.set("gap.jitter", fmt(cfg.gap.jitter));
  const auto& ms = cfg.mass_spring;
  c.set("ms.masses", format_robot_masses(ms));
  c.set("ms.springs", format_robot_springs(ms));
  c.set("ms.amplitude", fmt(ms.amplitude));
  c.set("ms.damping", fmt(ms.damping));
  c.set("ms.gravity", fmt(ms.gravity));
  c.set("ms.ground", fmt(ms.ground_y));
  c.set("ms.dt", fmt(ms.dt));
  c.set("ms.horizon", std::to_string(ms.horizon));
  c.set("quad.dim", std::to_string(cfg.quad_dim));
  c.set("quad.angle_deg", fmt(cfg.quad_angle_deg));
  c.set("ges.alpha", fmt(cfg.ges.alpha));
  c.set("ges.sigma", fmt(cfg.ges.sigma));
  c.set("ges.beta", fmt(cfg.ges.beta));
  c.set("ges.pop", std::to_string(cfg.ges.pop));
  c.set("ges.k", std::to_string(cfg.ges.k));
  c.set("ges.t_sim", std::to_string(cfg.t_sim));
  c.set("ges.rank_shaping", b(cfg.ges.rank_shaping));
  for (const auto& [prefix, o] : {std::pair{"opt", cfg.opt}, std::pair{"sim_opt", cfg.sim_opt}}) {
    c.set(std::string(prefix) + ".kind", to_string(o.kind));
    c.set(std::string(prefix) + ".lr", fmt(o.lr));
    c.set(std::string(prefix) + ".normalize_grad", b(o.normalize_grad));
    c.set(std::string(prefix) + ".fromage_global", b(o.fromage_global));
  }
  c.set("cma.sigma", fmt(cfg.cma_sigma));
  c.set("cma.lambda", std::to_string(cfg.cma_lambda));
  return c;
}

std::string config_help() {
  std::ostringstream os;
  os << "Config keys (file: 'key = value' lines or a JSON object; CLI --set overrides):\n";
  for (const auto& d : key_docs()) {
    os << "  " << d.key << "  [default: " << d.fallback << "]\n      " << d.help << "\n";
  }
  return os.str();
}

}  // namespace gesdrs::harness
