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

#include "gesdrs/harness/grad_check.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "gesdrs/harness/aggregate.hpp"
#include "gesdrs/mass_spring.hpp"
#include "gesdrs/pendulum.hpp"
#include "gesdrs/rng.hpp"

namespace gesdrs::harness {

Vec relative_errors(const Vec& a, const Vec& b, double scale) {
  if (a.size() != b.size()) throw DimensionError("relative_errors: size mismatch");
  if (scale <= 0.0) scale = a.size() == 0 ? 0.0 : std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  const double floor = 1e-3 * scale;
  Vec err(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    err[i] = denom == 0.0 ? 0.0 : std::abs(a[i] - b[i]) / denom;
  }
  return err;
}

double max_relative_error(const Vec& a, const Vec& b) {
  const Vec e = relative_errors(a, b);
  return e.size() == 0 ? 0.0 : e.maxCoeff();
}

Vec central_differences(const std::function<double(const Vec&)>& f, const Vec& x,
                        const std::vector<Eigen::Index>& coords, double step) {
  Vec out(Eigen::Index(coords.size()));
  Vec probe = x;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const auto i = coords[k];
    probe[i] = x[i] + step;
    const double fp = f(probe);
    probe[i] = x[i] - step;
    const double fm = f(probe);
    probe[i] = x[i];
    out[Eigen::Index(k)] = (fp - fm) / (2.0 * step);
  }
  return out;
}

MassSpringSpec contact_free_variant(MassSpringSpec spec, double lift, long horizon) {
  for (auto& m : spec.masses) m.y += lift;
  spec.horizon = horizon;
  return spec;
}

Vec contact_free_weights(const MassSpringSpec& spec) {
  const auto n = Eigen::Index(spec.masses.size());
  Vec w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = (i % 2 == 0 ? 1.0 : -1.0) * double(i + 1) / double(n);
  return w;
}

double GradCheckCase::best_max_rel() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) best = std::min(best, s.max_rel);
  return best;
}

bool GradCheckReport::passed() const {
  for (const auto& c : cases) {
    if (c.smooth && !(c.best_max_rel() <= tolerance)) return false;
  }
  return true;
}

namespace {

GradCheckCase check_case(const std::string& name, bool smooth, const std::function<double(const Vec&)>& cost,
                         const std::function<Vec(const Vec&)>& grad, const Vec& theta,
                         const std::vector<double>& steps, int coords, std::uint64_t seed) {
  std::vector<Eigen::Index> idx(std::size_t(theta.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index(0));
  if (coords > 0 && coords < theta.size()) {
    Rng rng = substream(seed, 0, 1);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(std::size_t(coords));
    std::sort(idx.begin(), idx.end());
  }
  const Vec full = grad(theta);
  Vec adjoint(Eigen::Index(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) adjoint[Eigen::Index(k)] = full[idx[k]];
  const double scale = full.cwiseAbs().maxCoeff();

  GradCheckCase c;
  c.name = name;
  c.smooth = smooth;
  for (double h : steps) {
    const Vec fd = central_differences(cost, theta, idx, h);
    const Vec err = relative_errors(adjoint, fd, scale);
    std::vector<double> e(err.data(), err.data() + err.size());
    c.steps.push_back({h, err.maxCoeff(), percentile(e, 0.5)});
  }
  return c;
}

Vec random_theta(const MlpSpec& policy, std::uint64_t seed) {
  Rng rng = substream(seed, 0, 0);
  return init_params(policy, seed) + 0.1 * standard_normal(total_param_count(policy), rng);
}

}  // namespace

GradCheckReport grad_check(const ExperimentConfig& cfg, const std::vector<double>& steps, int coords,
                           std::uint64_t seed) {
  if (steps.empty()) throw ConfigError("grad-check: at least one step size is required");
  for (double h : steps) {
    if (!(h > 0.0)) throw ConfigError("grad-check: step sizes must be positive");
  }
  GradCheckReport report;
  report.experiment = to_string(cfg.experiment);
  switch (cfg.experiment) {
    case Experiment::kPendulumGap: {
      const PendulumSpec spec = cfg.pendulum;
      const MlpSpec policy = pendulum_policy(spec, cfg.hidden);
      report.cases.push_back(check_case(
          "pendulum full episode", true, [&](const Vec& th) { return pendulum_cost(spec, policy, th); },
          [&](const Vec& th) { return pendulum_rollout_grad(spec, policy, th).grad; }, random_theta(policy, seed),
          steps, coords, seed));
      break;
    }
    case Experiment::kMassSpringNaive: {
      const MassSpringSpec free = contact_free_variant(cfg.mass_spring);
      const MassSpringSpec full = cfg.mass_spring;
      const MlpSpec policy = mass_spring_policy(full, cfg.hidden);
      const Vec theta = random_theta(policy, seed);
      const Vec w = contact_free_weights(free);
      report.cases.push_back(check_case(
          "mass-spring contact-free", true, [&](const Vec& th) { return ms_terminal_x_grad(free, policy, th, w).cost; },
          [&](const Vec& th) { return ms_terminal_x_grad(free, policy, th, w).grad; }, theta, steps, coords, seed));
      report.cases.push_back(check_case(
          "mass-spring with contacts", false, [&](const Vec& th) { return ms_cost(full, policy, th); },
          [&](const Vec& th) { return ms_rollout_grad(full, policy, th).grad; }, theta, steps, coords, seed));
      break;
    }
    case Experiment::kSyntheticQuadratic:
      throw ConfigError("grad-check: synthetic-quadratic has no differentiable simulator");
  }
  return report;
}

std::string format_report(const GradCheckReport& report) {
  std::ostringstream os;
  char buf[256];
  os << "grad-check " << report.experiment << " (tolerance " << report.tolerance << ")\n";
  for (const auto& c : report.cases) {
    os << "  " << c.name << (c.smooth ? " [smooth]" : " [non-smooth: mismatch expected, not checked]") << "\n";
    os << "    step        max_rel      median_rel\n";
    for (const auto& s : c.steps) {
      std::snprintf(buf, sizeof buf, "    %-10.3g  %-11.4e  %-11.4e\n", s.step, s.max_rel, s.median_rel);
      os << buf;
    }
    if (c.smooth) {
      os << "    best max_rel " << c.best_max_rel() << (c.best_max_rel() <= report.tolerance ? "  PASS" : "  FAIL")
         << "\n";
    }
  }
  os << (report.passed() ? "PASS\n" : "FAIL\n");
  return os.str();
}

}  // namespace gesdrs::harness
