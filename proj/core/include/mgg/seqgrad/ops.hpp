// Copyright 2026 The MGG Authors.
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

#include "mgg/seqgrad/graph.hpp"

#include <cstdint>
#include <random>
#include <span>

namespace mgg::seqgrad {

enum class Activation { kNone, kReLU, kSigmoid };
enum class Padding { kSame, kValid };

// Conv(n_f, n_k, activation) along time. Weights are stored as a
// (kernel * in_channels) x filters matrix; row `tap * in_channels + c` holds
// the coefficients for input channel c at kernel offset `tap`. Bias is 1 x filters.
struct ConvSpec {
    int filters = 1;
    int kernel = 1;
    int stride = 1;
    Activation activation = Activation::kNone;
    Padding padding = Padding::kSame;

    void validate() const;
    // Output time length for an input of `time` frames.
    Eigen::Index output_time(Eigen::Index time) const;
    // Zero frames inserted before frame 0.
    int left_pad() const { return padding == Padding::kSame ? (kernel - 1) / 2 : 0; }
};

// Cross-correlation along time followed by `spec.activation`.
template <typename S>
Var conv1d(Graph<S>& g, Var input, Var weight, Var bias, const ConvSpec& spec);

// Transposed convolution with upscale factor `spec.stride`: the exact adjoint of
// conv1d with the same stride and padding, so output time = stride * input time.
// `weight` has shape (kernel * filters) x in_channels, i.e. the weight of the
// forward convolution that maps `filters` channels back to in_channels.
template <typename S>
Var deconv1d(Graph<S>& g, Var input, Var weight, Var bias, const ConvSpec& spec);

// Per-channel max over windows. Gradient goes to the first maximal index.
template <typename S>
Var maxpool1d(Graph<S>& g, Var input, int window, int stride);

template <typename S>
Var relu(Graph<S>& g, Var x);
template <typename S>
Var sigmoid(Graph<S>& g, Var x);
template <typename S>
Var activate(Graph<S>& g, Var x, Activation act);

template <typename S>
Var add(Graph<S>& g, Var a, Var b);
// Elementwise product.
template <typename S>
Var mul(Graph<S>& g, Var a, Var b);
template <typename S>
Var scale(Graph<S>& g, Var x, S factor);
// Sum of all entries as a 1x1 tensor.
template <typename S>
Var sum(Graph<S>& g, Var x);

// Reinterprets each input (rows x k*width, row-major) as (rows*k) x width and
// stacks the results vertically in argument order.
template <typename S>
Var flatten_rows(Graph<S>& g, std::span<const Var> inputs, int width);

// Factorized bilinear matching. For every frame n and output channel i:
//   out(n, i) = (h1[n] W_i + b_i) . (h2[n] W_i + b_i)
// where W_i is the d x rank column block i of `weight` (d x d*rank) and b_i the
// matching block of `bias` (1 x d*rank). The same projection is applied to both
// inputs.
template <typename S>
Var bilinear_match(Graph<S>& g, Var h1, Var h2, Var weight, Var bias, int rank);

// Uniform in +-sqrt(6 / fan_in).
template <typename S>
Matrix<S> uniform_fan_in(Eigen::Index rows, Eigen::Index cols, Eigen::Index fan_in, std::mt19937_64& rng);

}  // namespace mgg::seqgrad
