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

#include <deque>

#include "gesdrs/common.hpp"

namespace gesdrs {

// Ring buffer of the last `capacity` surrogate gradients and an orthonormal
// basis of their span.
struct GuidingSubspace {
  GuidingSubspace(Eigen::Index dim, int capacity);

  Eigen::Index dim;
  int capacity;
  std::deque<Vec> history;  // oldest first
  Mat basis;                // dim x k_eff, orthonormal columns

  int k_eff() const { return static_cast<int>(basis.cols()); }
};

enum class SubspaceUpdate { kUpdated, kZeroGradient };

// Appends `grad` (evicting the oldest entry beyond capacity) and rebuilds the
// basis by column-pivoted QR, dropping directions whose residual norm falls
// below 1e-10 of the largest column norm. An all-zero gradient leaves the
// subspace untouched and returns kZeroGradient.
SubspaceUpdate subspace_update(GuidingSubspace& sub, const ParamVector& grad);

// Frobenius norm of U^T U - I.
double orthonormality_error(const GuidingSubspace& sub);

}  // namespace gesdrs
