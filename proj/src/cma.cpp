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

#include "gesdrs/cma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace gesdrs {
namespace {

void decompose(CmaState& s) {
  s.cov = 0.5 * (s.cov + s.cov.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(s.cov);
  Vec evals = es.eigenvalues();
  const double lmax = evals.maxCoeff();
  const double lmin = evals.minCoeff();
  if (lmin <= 0.0 || lmax > kCmaMaxCondition * lmin) {
    // Lift the spectrum so the condition number is exactly the cap.
    const double shift = (lmax - kCmaMaxCondition * lmin) / (kCmaMaxCondition - 1.0);
    s.cov.diagonal().array() += shift;
    evals.array() += shift;
    ++s.reconditions;
  }
  s.eig_basis = es.eigenvectors();
  s.eig_sqrt = evals.cwiseSqrt();
}

}  // namespace

CmaState cma_init(const Vec& mean, double sigma, int lambda) {
  const Eigen::Index n = mean.size();
  if (n < 1) throw std::invalid_argument("cma_init: empty mean");
  if (!(sigma > 0)) throw std::invalid_argument("cma_init: sigma must be positive");
  const double nd = double(n);
  CmaState s;
  s.mean = mean;
  s.sigma = sigma;
  s.lambda = lambda > 0 ? lambda : 4 + int(std::floor(3.0 * std::log(nd)));
  if (s.lambda < 4) throw std::invalid_argument("cma_init: lambda must be >= 4");
  s.mu = s.lambda / 2;
  s.weights.resize(s.mu);
  for (int i = 0; i < s.mu; ++i) {
    s.weights[i] = std::log((s.lambda + 1) / 2.0) - std::log(double(i + 1));
  }
  s.weights /= s.weights.sum();
  s.mu_eff = 1.0 / s.weights.squaredNorm();

  s.c_sigma = (s.mu_eff + 2.0) / (nd + s.mu_eff + 5.0);
  s.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((s.mu_eff - 1.0) / (nd + 1.0)) - 1.0) + s.c_sigma;
  s.c_c = (4.0 + s.mu_eff / nd) / (nd + 4.0 + 2.0 * s.mu_eff / nd);
  s.c1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + s.mu_eff);
  s.c_mu = std::min(1.0 - s.c1, 2.0 * (s.mu_eff - 2.0 + 1.0 / s.mu_eff) /
                                    ((nd + 2.0) * (nd + 2.0) + s.mu_eff));
  s.chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));

  s.cov = Mat::Identity(n, n);
  s.path_sigma = Vec::Zero(n);
  s.path_c = Vec::Zero(n);
  s.eig_basis = Mat::Identity(n, n);
  s.eig_sqrt = Vec::Ones(n);
  return s;
}

std::vector<Vec> cma_ask(const CmaState& s, Rng& rng) {
  std::vector<Vec> out;
  out.reserve(std::size_t(s.lambda));
  for (int k = 0; k < s.lambda; ++k) {
    const Vec z = standard_normal(s.mean.size(), rng);
    out.push_back(s.mean + s.sigma * (s.eig_basis * s.eig_sqrt.cwiseProduct(z)));
  }
  return out;
}

void cma_tell(CmaState& s, const std::vector<Vec>& candidates, const std::vector<double>& losses) {
  if (candidates.size() != std::size_t(s.lambda) || losses.size() != candidates.size()) {
    throw std::invalid_argument("cma_tell: expected lambda candidates and losses");
  }
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i])) {
      throw std::domain_error("cma_tell: non-finite loss for candidate " + std::to_string(i));
    }
  }
  const Eigen::Index n = s.mean.size();
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return losses[a] < losses[b]; });

  Mat y(n, s.mu);
  for (int i = 0; i < s.mu; ++i) y.col(i) = (candidates[order[std::size_t(i)]] - s.mean) / s.sigma;
  const Vec y_w = y * s.weights;
  s.mean += s.sigma * y_w;

  // C^{-1/2} y_w = B D^{-1} B^T y_w
  const Vec c_inv_sqrt_y =
      s.eig_basis * (s.eig_basis.transpose() * y_w).cwiseQuotient(s.eig_sqrt);
  s.path_sigma = (1.0 - s.c_sigma) * s.path_sigma +
                 std::sqrt(s.c_sigma * (2.0 - s.c_sigma) * s.mu_eff) * c_inv_sqrt_y;
  const double ps_norm = s.path_sigma.norm();
  const double decay = 1.0 - std::pow(1.0 - s.c_sigma, 2.0 * double(s.generation + 1));
  const bool h_sigma = ps_norm / std::sqrt(decay) < (1.4 + 2.0 / (double(n) + 1.0)) * s.chi_n;
  s.path_c = (1.0 - s.c_c) * s.path_c +
             (h_sigma ? std::sqrt(s.c_c * (2.0 - s.c_c) * s.mu_eff) : 0.0) * y_w;
  const double delta_h = h_sigma ? 0.0 : s.c_c * (2.0 - s.c_c);

  Mat rank_mu = y * s.weights.asDiagonal() * y.transpose();
  s.cov = (1.0 + s.c1 * delta_h - s.c1 - s.c_mu) * s.cov +
          s.c1 * s.path_c * s.path_c.transpose() + s.c_mu * rank_mu;
  s.sigma *= std::exp((s.c_sigma / s.d_sigma) * (ps_norm / s.chi_n - 1.0));
  ++s.generation;
  decompose(s);
}

}  // namespace gesdrs
