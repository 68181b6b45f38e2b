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

#include <vector>

#include "gesdrs/common.hpp"
#include "gesdrs/rng.hpp"
#include "gesdrs/subspace.hpp"

namespace gesdrs {

struct GesConfig {
  double alpha = 0.5;  // weight of the isotropic part of the search covariance
  double sigma = 0.1;
  double beta = 2.0;
  int pop = 10;        // antithetic pairs per iteration
  int k = 1;           // subspace capacity
  bool rank_shaping = false;
};

void validate(const GesConfig& cfg);

// eps = sigma * (sqrt(alpha/n) xi_full + sqrt((1-alpha)/k_eff) U xi_sub).
// Covariance sigma^2 ((alpha/n) I + ((1-alpha)/k_eff) U U^T), never formed.
// With an empty basis alpha is treated as 1. xi_full is drawn before xi_sub.
Vec sample_perturbation(const GuidingSubspace& sub, const GesConfig& cfg, Rng& rng);

// sigma^2 * Sigma as a dense matrix; for checks only.
Mat search_covariance(const GuidingSubspace& sub, const GesConfig& cfg);

struct PerturbationBatch {
  std::vector<Vec> epsilons;
  std::vector<double> loss_plus;   // f(theta + eps_i)
  std::vector<double> loss_minus;  // f(theta - eps_i)
};

// g = beta / (2 sigma^2 P) * sum_i eps_i (f(theta + eps_i) - f(theta - eps_i)).
// Throws std::domain_error naming the first perturbation with a non-finite loss.
Vec ges_gradient_estimate(const PerturbationBatch& batch, const GesConfig& cfg);

// Isotropic antithetic estimator; the alpha = 1 case of the guided one.
Vec vanilla_es_gradient(const PerturbationBatch& batch, double sigma, double beta);

// Centered ranks in [-0.5, 0.5] over all 2P losses (ties broken by position).
void apply_rank_shaping(PerturbationBatch& batch);

}  // namespace gesdrs
