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

#include "gesdrs/ges.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gesdrs {

void validate(const GesConfig& cfg) {
  if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) throw std::invalid_argument("ges.alpha must lie in [0, 1]");
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("ges.sigma must be > 0");
  if (!(cfg.beta > 0.0)) throw std::invalid_argument("ges.beta must be > 0");
  if (cfg.pop < 1) throw std::invalid_argument("ges.pop must be >= 1");
  if (cfg.k < 1) throw std::invalid_argument("ges.k must be >= 1");
}

Vec sample_perturbation(const GuidingSubspace& sub, const GesConfig& cfg, Rng& rng) {
  const Eigen::Index n = sub.dim;
  const int k = sub.k_eff();
  const double alpha = k == 0 ? 1.0 : cfg.alpha;
  Vec eps = Vec::Zero(n);
  if (alpha > 0.0) eps = std::sqrt(alpha / double(n)) * standard_normal(n, rng);
  if (alpha < 1.0) {
    const Vec xi = standard_normal(k, rng);
    eps += std::sqrt((1.0 - alpha) / double(k)) * (sub.basis * xi);
  }
  return cfg.sigma * eps;
}

Mat search_covariance(const GuidingSubspace& sub, const GesConfig& cfg) {
  const Eigen::Index n = sub.dim;
  const int k = sub.k_eff();
  const double alpha = k == 0 ? 1.0 : cfg.alpha;
  Mat cov = (alpha / double(n)) * Mat::Identity(n, n);
  if (k > 0) cov += ((1.0 - alpha) / double(k)) * sub.basis * sub.basis.transpose();
  return cfg.sigma * cfg.sigma * cov;
}

Vec ges_gradient_estimate(const PerturbationBatch& batch, const GesConfig& cfg) {
  const std::size_t pop = batch.epsilons.size();
  if (pop == 0 || batch.loss_plus.size() != pop || batch.loss_minus.size() != pop) {
    throw std::invalid_argument("ges_gradient_estimate: incomplete perturbation batch");
  }
  Vec g = Vec::Zero(batch.epsilons.front().size());
  for (std::size_t i = 0; i < pop; ++i) {
    const double diff = batch.loss_plus[i] - batch.loss_minus[i];
    if (!std::isfinite(batch.loss_plus[i]) || !std::isfinite(batch.loss_minus[i])) {
      throw std::domain_error("ges_gradient_estimate: non-finite loss at perturbation " +
                              std::to_string(i));
    }
    g += diff * batch.epsilons[i];
  }
  return (cfg.beta / (2.0 * cfg.sigma * cfg.sigma * double(pop))) * g;
}

Vec vanilla_es_gradient(const PerturbationBatch& batch, double sigma, double beta) {
  GesConfig cfg;
  cfg.alpha = 1.0;
  cfg.sigma = sigma;
  cfg.beta = beta;
  return ges_gradient_estimate(batch, cfg);
}

void apply_rank_shaping(PerturbationBatch& batch) {
  const std::size_t pop = batch.loss_plus.size();
  std::vector<double> all(batch.loss_plus);
  all.insert(all.end(), batch.loss_minus.begin(), batch.loss_minus.end());
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return all[a] < all[b]; });
  const double denom = all.size() > 1 ? double(all.size() - 1) : 1.0;
  std::vector<double> shaped(all.size());
  for (std::size_t r = 0; r < order.size(); ++r) shaped[order[r]] = double(r) / denom - 0.5;
  for (std::size_t i = 0; i < pop; ++i) {
    batch.loss_plus[i] = shaped[i];
    batch.loss_minus[i] = shaped[pop + i];
  }
}

}  // namespace gesdrs
