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
#include "mgg/seqgrad/ops.hpp"

#include <random>

namespace mgg::basenet {

struct BaseNetConfig {
    int input_dim = 48;
    int hidden = 512;  // d_h
    int kernel = 5;
    int rank = 32;  // g, must stay below hidden
    bool bilinear = true;

    void validate() const;
    seqgrad::ConvSpec conv_spec() const {
        return {hidden, kernel, 1, seqgrad::Activation::kReLU, seqgrad::Padding::kSame};
    }
    // d_h * (d_h * g + g)
    long long bilinear_parameter_count() const {
        return static_cast<long long>(hidden) * (static_cast<long long>(hidden) * rank + rank);
    }
};

// Both convolutions share the architecture but not the weights. The bilinear
// projections W_i (d_h x g) are stored side by side as one d_h x (d_h * g)
// matrix; the biases b_i likewise as 1 x (d_h * g).
template <typename S>
struct BaseNetParams {
    seqgrad::Parameter<S> conv1_weight;
    seqgrad::Parameter<S> conv1_bias;
    seqgrad::Parameter<S> conv2_weight;
    seqgrad::Parameter<S> conv2_bias;
    seqgrad::Parameter<S> bilinear_weight;
    seqgrad::Parameter<S> bilinear_bias;

    static BaseNetParams init(const BaseNetConfig& config, std::mt19937_64& rng);

    bool has_bilinear() const { return bilinear_weight.size() > 0; }

    template <typename F>
    void visit(F&& f) {
        f("conv1.weight", conv1_weight);
        f("conv1.bias", conv1_bias);
        f("conv2.weight", conv2_weight);
        f("conv2.bias", conv2_bias);
        if (has_bilinear()) {
            f("bilinear.weight", bilinear_weight);
            f("bilinear.bias", bilinear_bias);
        }
    }
};

struct BaseNetOutputs {
    seqgrad::Var h1;
    seqgrad::Var h2;
    seqgrad::Var out;  // T, or H_2 when bilinear matching is disabled
};

template <typename S>
BaseNetOutputs basenet_forward(seqgrad::Graph<S>& g, seqgrad::Var input, BaseNetParams<S>& params,
                               const BaseNetConfig& config);

// H_2 = conv2(conv1(L)) without the bilinear block.
template <typename S>
BaseNetOutputs basenet_forward_ablated(seqgrad::Graph<S>& g, seqgrad::Var input, BaseNetParams<S>& params,
                                       const BaseNetConfig& config);

}  // namespace mgg::basenet
