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

namespace gesdrs {

// (mu/mu_w, lambda)-CMA-ES with rank-one and rank-mu covariance updates and
// cumulative step-size adaptation. Full covariance; intended for n up to a
// few hundred.
struct CmaState {
  Vec mean;
  double sigma = 0.0;
  Mat cov;
  Vec path_sigma;
  Vec path_c;
  Mat eig_basis;  // columns: eigenvectors of cov
  Vec eig_sqrt;   // square roots of the eigenvalues
  long generation = 0;
  long reconditions = 0;

  int lambda = 0;
  int mu = 0;
  Vec weights;
  double mu_eff = 0.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c1 = 0.0;
  double c_mu = 0.0;
  double chi_n = 0.0;
};

inline constexpr double kCmaMaxCondition = 1e14;

// lambda <= 0 selects the default 4 + floor(3 ln n).
CmaState cma_init(const Vec& mean, double sigma, int lambda = 0);

std::vector<Vec> cma_ask(const CmaState& state, Rng& rng);

void cma_tell(CmaState& state, const std::vector<Vec>& candidates, const std::vector<double>& losses);

}  // namespace gesdrs
