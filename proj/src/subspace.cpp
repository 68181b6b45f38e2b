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

#include "gesdrs/subspace.hpp"

#include <stdexcept>

#include <Eigen/QR>

namespace gesdrs {

constexpr double kRankThreshold = 1e-10;

GuidingSubspace::GuidingSubspace(Eigen::Index dim_, int capacity_)
    : dim(dim_), capacity(capacity_), basis(dim_, 0) {
  if (dim_ < 1) throw std::invalid_argument("GuidingSubspace: dimension must be >= 1");
  if (capacity_ < 1 || capacity_ > dim_) {
    throw std::invalid_argument("GuidingSubspace: need 1 <= k <= n");
  }
}

SubspaceUpdate subspace_update(GuidingSubspace& sub, const ParamVector& grad) {
  if (grad.size() != sub.dim) throw DimensionError("subspace_update: gradient length mismatch");
  if (!grad.allFinite()) throw std::domain_error("subspace_update: non-finite gradient");
  if (grad.isZero(0.0)) return SubspaceUpdate::kZeroGradient;

  sub.history.push_back(grad);
  while (static_cast<int>(sub.history.size()) > sub.capacity) sub.history.pop_front();

  Mat columns(sub.dim, static_cast<Eigen::Index>(sub.history.size()));
  for (std::size_t c = 0; c < sub.history.size(); ++c) columns.col(Eigen::Index(c)) = sub.history[c];

  Eigen::ColPivHouseholderQR<Mat> qr(columns);
  qr.setThreshold(kRankThreshold);
  const Eigen::Index rank = qr.rank();
  sub.basis = qr.householderQ() * Mat::Identity(sub.dim, rank);
  return SubspaceUpdate::kUpdated;
}

double orthonormality_error(const GuidingSubspace& sub) {
  const Eigen::Index k = sub.basis.cols();
  return (sub.basis.transpose() * sub.basis - Mat::Identity(k, k)).norm();
}

}  // namespace gesdrs
