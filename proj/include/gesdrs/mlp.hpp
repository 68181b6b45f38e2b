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

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "gesdrs/common.hpp"

namespace gesdrs {

enum class OutputSquash { kTanh, kNone };

// Fully connected tanh network. Hidden activations are always tanh.
//
// Packing order of the flat parameter vector is layer-major: for each layer
// (input -> hidden_0 -> ... -> output) the weight matrix W (fan_out x fan_in)
// in row-major order, followed by its bias vector (fan_out).
struct MlpSpec {
  int input_dim = 0;
  std::vector<int> hidden_dims;
  int output_dim = 0;
  OutputSquash output_squash = OutputSquash::kTanh;
};

struct LayerRange {
  Eigen::Index begin = 0;
  Eigen::Index end = 0;  // one past the last parameter of the layer
  int fan_in = 0;
  int fan_out = 0;
};

inline std::vector<int> layer_widths(const MlpSpec& spec) {
  std::vector<int> widths{spec.input_dim};
  widths.insert(widths.end(), spec.hidden_dims.begin(), spec.hidden_dims.end());
  widths.push_back(spec.output_dim);
  return widths;
}

inline void validate(const MlpSpec& spec) {
  for (int w : layer_widths(spec)) {
    if (w <= 0) throw DimensionError("MlpSpec: every layer width must be positive");
  }
}

inline std::vector<LayerRange> layer_ranges(const MlpSpec& spec) {
  validate(spec);
  const auto widths = layer_widths(spec);
  std::vector<LayerRange> ranges;
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const Eigen::Index count = static_cast<Eigen::Index>(widths[l] + 1) * widths[l + 1];
    ranges.push_back({offset, offset + count, widths[l], widths[l + 1]});
    offset += count;
  }
  return ranges;
}

inline Eigen::Index total_param_count(const MlpSpec& spec) {
  return layer_ranges(spec).back().end;
}

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
inline ParamVector init_params(const MlpSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ParamVector params = ParamVector::Zero(total_param_count(spec));
  for (const auto& layer : layer_ranges(spec)) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.fan_in));
    std::uniform_real_distribution<double> uniform(-bound, bound);
    const Eigen::Index weights = static_cast<Eigen::Index>(layer.fan_in) * layer.fan_out;
    for (Eigen::Index i = 0; i < weights; ++i) params[layer.begin + i] = uniform(rng);
  }
  return params;
}

namespace detail {

template <typename S>
using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

template <typename DerivedP, typename DerivedO>
void check_dims(const MlpSpec& spec, const Eigen::MatrixBase<DerivedP>& params,
                const Eigen::MatrixBase<DerivedO>& obs) {
  if (params.size() != total_param_count(spec)) {
    throw DimensionError("mlp: expected " + std::to_string(total_param_count(spec)) +
                         " parameters, got " + std::to_string(params.size()));
  }
  if (obs.size() != spec.input_dim) {
    throw DimensionError("mlp: expected observation of length " +
                         std::to_string(spec.input_dim) + ", got " + std::to_string(obs.size()));
  }
}

}  // namespace detail

template <typename DerivedP, typename DerivedO>
Eigen::Matrix<typename DerivedP::Scalar, Eigen::Dynamic, 1> mlp_forward(
    const MlpSpec& spec, const Eigen::MatrixBase<DerivedP>& params,
    const Eigen::MatrixBase<DerivedO>& obs) {
  using S = typename DerivedP::Scalar;
  using VecS = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  detail::check_dims(spec, params, obs);
  const auto ranges = layer_ranges(spec);
  const Eigen::Matrix<S, Eigen::Dynamic, 1> p = params;
  VecS x = obs.template cast<S>();
  for (std::size_t l = 0; l < ranges.size(); ++l) {
    const auto& r = ranges[l];
    detail::RowMajorMap<S> w(p.data() + r.begin, r.fan_out, r.fan_in);
    Eigen::Map<const VecS> b(p.data() + r.begin + Eigen::Index(r.fan_out) * r.fan_in, r.fan_out);
    VecS z = w * x + b;
    const bool last = l + 1 == ranges.size();
    if (!last || spec.output_squash == OutputSquash::kTanh) {
      x = z.array().tanh().matrix();
    } else {
      x = std::move(z);
    }
  }
  return x;
}

template <typename S>
struct MlpGradients {
  Eigen::Matrix<S, Eigen::Dynamic, 1> output;
  Eigen::Matrix<S, Eigen::Dynamic, 1> param_grad;
  Eigen::Matrix<S, Eigen::Dynamic, 1> obs_grad;
};

// Reverse-mode derivatives of out_adjoint^T * output.
template <typename DerivedP, typename DerivedO, typename DerivedA>
MlpGradients<typename DerivedP::Scalar> mlp_forward_backward(
    const MlpSpec& spec, const Eigen::MatrixBase<DerivedP>& params,
    const Eigen::MatrixBase<DerivedO>& obs, const Eigen::MatrixBase<DerivedA>& out_adjoint) {
  using S = typename DerivedP::Scalar;
  using VecS = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  detail::check_dims(spec, params, obs);
  if (out_adjoint.size() != spec.output_dim) {
    throw DimensionError("mlp: output adjoint has length " + std::to_string(out_adjoint.size()) +
                         ", expected " + std::to_string(spec.output_dim));
  }
  const auto ranges = layer_ranges(spec);
  const VecS p = params;

  // activations[l] is the input to layer l; activations.back() is the output.
  std::vector<VecS> activations{obs.template cast<S>()};
  for (std::size_t l = 0; l < ranges.size(); ++l) {
    const auto& r = ranges[l];
    detail::RowMajorMap<S> w(p.data() + r.begin, r.fan_out, r.fan_in);
    Eigen::Map<const VecS> b(p.data() + r.begin + Eigen::Index(r.fan_out) * r.fan_in, r.fan_out);
    VecS z = w * activations.back() + b;
    const bool last = l + 1 == ranges.size();
    if (!last || spec.output_squash == OutputSquash::kTanh) z = z.array().tanh().matrix();
    activations.push_back(std::move(z));
  }

  MlpGradients<S> out;
  out.output = activations.back();
  out.param_grad = VecS::Zero(p.size());
  VecS adj = out_adjoint.template cast<S>();
  for (std::size_t l = ranges.size(); l-- > 0;) {
    const auto& r = ranges[l];
    const bool last = l + 1 == ranges.size();
    if (!last || spec.output_squash == OutputSquash::kTanh) {
      adj = (adj.array() * (S(1) - activations[l + 1].array().square())).matrix();
    }
    const VecS& input = activations[l];
    Eigen::Map<Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> gw(
        out.param_grad.data() + r.begin, r.fan_out, r.fan_in);
    gw.noalias() = adj * input.transpose();
    out.param_grad.segment(r.begin + Eigen::Index(r.fan_out) * r.fan_in, r.fan_out) = adj;
    detail::RowMajorMap<S> w(p.data() + r.begin, r.fan_out, r.fan_in);
    adj = w.transpose() * adj;
  }
  out.obs_grad = std::move(adj);
  return out;
}

}  // namespace gesdrs
