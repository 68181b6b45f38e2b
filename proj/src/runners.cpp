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

#include "gesdrs/runners.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "gesdrs/rng.hpp"
#include "gesdrs/subspace.hpp"

namespace gesdrs {
namespace {

using Clock = std::chrono::steady_clock;

struct Surrogate {
  std::optional<ParamVector> direction;
  long drs_rollouts = 0;
  std::string warning;
};
using SurrogateProvider = std::function<Surrogate(const ParamVector&)>;

class Logger {
 public:
  explicit Logger(const RunOptions& opts) : opts_(opts), start_(Clock::now()) {}

  void record(RunResult& result, RunRecord rec) {
    rec.seed = opts_.seed;
    if (opts_.wall_clock) {
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }
    result.records.push_back(rec);
    if (opts_.on_record) opts_.on_record(rec);
  }

  void warn(RunResult& result, const std::string& msg) {
    ++result.warnings;
    if (opts_.on_warning) opts_.on_warning(msg);
  }

 private:
  const RunOptions& opts_;
  Clock::time_point start_;
};

RunResult guided_loop(const CostFn& objective, const SurrogateProvider& surrogate,
                      const GesConfig& cfg, const OptimizerState& opt_init, ParamVector theta,
                      const RunOptions& opts) {
  validate(cfg);
  RunResult result;
  Logger log(opts);
  OptimizerState opt = opt_init;
  GuidingSubspace sub(theta.size(), std::min<Eigen::Index>(cfg.k, theta.size()));
  const long per_iter = 2L * cfg.pop;
  long episodes = 0;
  long drs_rollouts = 0;
  double best = std::numeric_limits<double>::infinity();

  for (long it = 0; episodes + per_iter <= opts.budget; ++it) {
    // With alpha = 1 the subspace is never sampled, so the surrogate is not fetched.
    if (surrogate && cfg.alpha < 1.0) {
      Surrogate s = surrogate(theta);
      drs_rollouts += s.drs_rollouts;
      if (!s.direction) {
        log.warn(result, "iteration " + std::to_string(it) + ": surrogate skipped: " + s.warning);
      } else if (subspace_update(sub, *s.direction) == SubspaceUpdate::kZeroGradient) {
        log.warn(result, "iteration " + std::to_string(it) + ": zero surrogate, subspace unchanged");
      }
    }

    PerturbationBatch batch;
    std::vector<ParamVector> points;
    points.reserve(std::size_t(per_iter));
    for (int i = 0; i < cfg.pop; ++i) {
      Rng rng = substream(opts.seed, std::uint64_t(it), std::uint64_t(i));
      batch.epsilons.push_back(sample_perturbation(sub, cfg, rng));
      points.push_back(theta + batch.epsilons.back());
      points.push_back(theta - batch.epsilons.back());
    }
    const std::vector<double> losses = evaluate_batch(objective, points, opts.threads);
    episodes += per_iter;
    for (int i = 0; i < cfg.pop; ++i) {
      batch.loss_plus.push_back(losses[2 * std::size_t(i)]);
      batch.loss_minus.push_back(losses[2 * std::size_t(i) + 1]);
    }
    const double mean_loss = std::accumulate(losses.begin(), losses.end(), 0.0) / double(losses.size());
    best = std::min(best, *std::min_element(losses.begin(), losses.end()));
    if (cfg.rank_shaping) apply_rank_shaping(batch);

    const Vec g = ges_gradient_estimate(batch, cfg);
    theta = opt_step(opt, theta, g);

    RunRecord rec;
    rec.iteration = it;
    rec.episodes = episodes;
    rec.cost = mean_loss;
    rec.best_cost = best;
    rec.drs_rollouts = drs_rollouts;
    log.record(result, rec);
  }
  result.theta = std::move(theta);
  return result;
}

}  // namespace

std::vector<double> evaluate_batch(const CostFn& f, const std::vector<ParamVector>& points,
                                   int threads) {
  const std::size_t n = points.size();
  std::vector<double> out(n, 0.0);
  std::vector<std::exception_ptr> errors(n);
  const std::size_t workers = std::min<std::size_t>(std::size_t(std::max(threads, 1)), n);
  auto work = [&](std::size_t w) {
    for (std::size_t i = w; i < n; i += workers) {
      try {
        out[i] = f(points[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

RunResult guided_es_run(const CostFn& objective, const GradFn& surrogate, const GesConfig& cfg,
                        const OptimizerState& opt, ParamVector theta0, const RunOptions& opts) {
  SurrogateProvider provider;
  if (surrogate) {
    provider = [&surrogate](const ParamVector& theta) {
      Surrogate s;
      s.drs_rollouts = 1;
      try {
        ParamVector g = surrogate(theta).grad;
        if (g.allFinite()) {
          s.direction = std::move(g);
        } else {
          s.warning = "non-finite simulator gradient";
        }
      } catch (const std::exception& e) {
        s.warning = e.what();
      }
      return s;
    };
  }
  return guided_loop(objective, provider, cfg, opt, std::move(theta0), opts);
}

RunResult vanilla_es_run(const CostFn& objective, const GesConfig& cfg, const OptimizerState& opt,
                         ParamVector theta0, const RunOptions& opts) {
  GesConfig iso = cfg;
  iso.alpha = 1.0;
  return guided_loop(objective, {}, iso, opt, std::move(theta0), opts);
}

std::optional<ParamVector> simulated_descent_direction(const GradFn& drs, const OptimizerState& opt_sim,
                                                       int t_sim, const ParamVector& theta,
                                                       long* drs_rollouts) {
  OptimizerState inner = opt_sim;
  ParamVector theta_sim = theta;
  for (int j = 0; j < t_sim; ++j) {
    if (drs_rollouts) ++*drs_rollouts;
    CostAndGrad cg;
    try {
      cg = drs(theta_sim);
    } catch (const NonFiniteError&) {
      return std::nullopt;
    }
    if (!cg.grad.allFinite()) return std::nullopt;
    theta_sim = opt_step(inner, theta_sim, cg.grad);
    if (!theta_sim.allFinite()) return std::nullopt;
  }
  return ParamVector(theta_sim - theta);
}

RunResult sim_guided_real_run(const CostFn& f_real, const GradFn& drs, const GesConfig& cfg,
                              const OptimizerState& opt_real, const OptimizerState& opt_sim,
                              int t_sim, ParamVector theta0, const RunOptions& opts) {
  if (t_sim < 1) throw std::invalid_argument("sim_guided_real_run: t_sim must be >= 1");
  SurrogateProvider provider = [&](const ParamVector& theta) {
    Surrogate s;
    s.direction = simulated_descent_direction(drs, opt_sim, t_sim, theta, &s.drs_rollouts);
    if (!s.direction) s.warning = "simulator descent diverged";
    return s;
  };
  return guided_loop(f_real, provider, cfg, opt_real, std::move(theta0), opts);
}

RunResult cma_es_run(const CostFn& objective, double sigma0, int lambda, ParamVector theta0,
                     const RunOptions& opts) {
  RunResult result;
  Logger log(opts);
  CmaState state = cma_init(theta0, sigma0, lambda);
  long episodes = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long gen = 0; episodes + state.lambda <= opts.budget; ++gen) {
    Rng rng = substream(opts.seed, std::uint64_t(gen), 0);
    const std::vector<ParamVector> candidates = cma_ask(state, rng);
    const std::vector<double> losses = evaluate_batch(objective, candidates, opts.threads);
    episodes += state.lambda;
    cma_tell(state, candidates, losses);
    best = std::min(best, *std::min_element(losses.begin(), losses.end()));

    RunRecord rec;
    rec.iteration = gen;
    rec.episodes = episodes;
    rec.cost = std::accumulate(losses.begin(), losses.end(), 0.0) / double(losses.size());
    rec.best_cost = best;
    log.record(result, rec);
  }
  result.theta = state.mean;
  return result;
}

RunResult first_order_run(const GradFn& drs, const OptimizerState& opt_init, ParamVector theta,
                          const RunOptions& opts, const CostFn& evaluate) {
  RunResult result;
  Logger log(opts);
  OptimizerState opt = opt_init;
  long episodes = 0;
  long drs_rollouts = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long it = 0; episodes + 1 <= opts.budget; ++it) {
    const CostAndGrad cg = drs(theta);
    double cost = cg.cost;
    if (evaluate) {
      ++drs_rollouts;
      cost = evaluate(theta);
    }
    ++episodes;
    best = std::min(best, cost);

    RunRecord rec;
    rec.iteration = it;
    rec.episodes = episodes;
    rec.cost = cost;
    rec.best_cost = best;
    rec.drs_rollouts = drs_rollouts;
    log.record(result, rec);
    theta = opt_step(opt, theta, cg.grad);
  }
  result.theta = std::move(theta);
  return result;
}

}  // namespace gesdrs
