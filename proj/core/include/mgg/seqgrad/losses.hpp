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

namespace mgg::seqgrad {

// Probabilities are clamped to [kProbEpsilon, 1 - kProbEpsilon] before log().
inline constexpr double kProbEpsilon = 1e-7;

// -sum_j weight_j * (t_j log p_j + (1 - t_j) log(1 - p_j)) / normalizer.
// `target` and `weight` have the shape of `pred`. Clamped entries pass no gradient.
template <typename S>
Var binary_cross_entropy(Graph<S>& g, Var pred, const Matrix<S>& target, const Matrix<S>& weight, S normalizer);

// -mean over masked entries of (pos_weight * t log p + neg_weight * (1 - t) log(1 - p)).
// An empty mask means every entry counts.
template <typename S>
Var weighted_bce(Graph<S>& g, Var pred, const Matrix<S>& target, S pos_weight, S neg_weight,
                 const Matrix<S>& mask = Matrix<S>());

// Per-coordinate smooth L1: 0.5 x^2 if |x| < 1 else |x| - 0.5.
double smooth_l1_value(double x);

// sum_r row_weight_r * sum_c smooth_l1(pred(r, c) - target(r, c)) / normalizer.
// `row_weight` is rows x 1.
template <typename S>
Var smooth_l1(Graph<S>& g, Var pred, const Matrix<S>& target, const Matrix<S>& row_weight, S normalizer);

// Inverse class frequency weights over the masked entries of a binary target:
// pos = N / (2 N_pos), neg = N / (2 N_neg). An absent class gets weight 0.
struct ClassWeights {
    double positive = 0.0;
    double negative = 0.0;
};
template <typename S>
ClassWeights inverse_frequency_weights(const Matrix<S>& target, const Matrix<S>& mask = Matrix<S>());

}  // namespace mgg::seqgrad
