/*
 * Copyright (c) 2026 The FCPN Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FCPN_OPS_HPP
#define FCPN_OPS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "fcpn/autodiff.hpp"

namespace fcpn {

using Rng = std::mt19937_64;

namespace ops {

enum class Padding {
  none,
  // Replicates the border plane, so a 3x3x3 kernel keeps spatial extents.
  symmetric,
};

/// 3D convolution over a [X,Y,Z,Cin] volume with weights [k,k,k,Cin,Cout].
/// stride must be 1 or 2; symmetric padding requires k == 3 and stride 1.
template <typename T>
Var<T> conv3d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, int stride,
              Padding padding = Padding::none);

/// Non-overlapping transposed convolution: kernel size equals stride (2 or 3).
/// Weights are laid out [k,k,k,Cout,Cin] so that the weight tensor of a
/// k=s conv3d can be reused as-is for its adjoint.
template <typename T>
Var<T> deconv3d(const Var<T>& input, const Var<T>& weights, const Var<T>& bias, int stride);

/// Same affine map [Cin,Cout] applied at every position of a [...,Cin] tensor.
template <typename T>
Var<T> pointwise_linear(const Var<T>& input, const Var<T>& weights, const Var<T>& bias);

/// Channelwise max over the first counts[i] rows of each [Pmax, C] group.
/// Empty groups produce zeros. Gradient goes to the first maximal row.
template <typename T>
Var<T> group_max(const Var<T>& input, std::span<const std::size_t> counts);

/// Ragged variant of group_max over a packed [R, C] tensor: group i covers
/// rows [starts[i], starts[i] + counts[i]).
template <typename T>
Var<T> range_max(const Var<T>& input, std::span<const std::size_t> starts, std::span<const std::size_t> counts);

template <typename T>
Var<T> relu(const Var<T>& x);

/// Inverted dropout; identity when !training or rate == 0.
template <typename T>
Var<T> dropout(const Var<T>& x, double rate, bool training, Rng& rng);

/// Concatenates along the last axis; all other extents must match.
template <typename T>
Var<T> concat_channels(const std::vector<Var<T>>& parts);

template <typename T>
Var<T> concat_channels(const Var<T>& a, const Var<T>& b) {
  return concat_channels<T>(std::vector<Var<T>>{a, b});
}

template <typename T>
Var<T> reshape(const Var<T>& x, Shape shape);

template <typename T>
Var<T> add(const Var<T>& a, const Var<T>& b);

template <typename T>
Var<T> scale(const Var<T>& x, double factor);

/// Scalar sum(x * coeffs). Used to project tensor outputs for gradient checks.
template <typename T>
Var<T> weighted_sum(const Var<T>& x, const Tensor<T>& coeffs);

/// Sparse row-mixing matrix: out[i] = sum_k weight[k] * in[col[k]] for k in
/// [row_ptr[i], row_ptr[i+1]).
struct MixMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<double> weight;

  void push(std::size_t c, double w) {
    col.push_back(c);
    weight.push_back(w);
  }
  void end_row() {
    row_ptr.push_back(col.size());
    ++rows;
  }
};

/// Applies a MixMatrix to the rows of a [cols, C] tensor giving [rows, C].
template <typename T>
Var<T> mix_rows(const Var<T>& input, const MixMatrix& mix);

/// mean_n w[t_n] * -log softmax(logits_n)[t_n] over logits [N, K].
template <typename T>
Var<T> weighted_softmax_xent(const Var<T>& logits, std::span<const std::int32_t> targets,
                             std::span<const double> class_weights);

/// Mean over entries of weighted binary cross-entropy with logits.
template <typename T>
Var<T> sigmoid_bce(const Var<T>& logits, std::span<const std::int32_t> targets, std::span<const double> weights);

/// Row softmax over the last axis (no graph).
template <typename T>
Tensor<T> softmax_last(const Tensor<T>& logits);

/// Index of the row maximum over the last axis, first index on ties.
template <typename T>
std::vector<std::int32_t> argmax_last(const Tensor<T>& logits);

}  // namespace ops
}  // namespace fcpn

#endif  // FCPN_OPS_HPP
