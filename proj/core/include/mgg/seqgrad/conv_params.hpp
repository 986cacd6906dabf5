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
#include <string>

namespace mgg::seqgrad {

// Weight and bias of one temporal convolution layer.
template <typename S>
struct ConvParams {
    Parameter<S> weight;
    Parameter<S> bias;

    static ConvParams make(int in_channels, int out_channels, int kernel, std::mt19937_64& rng) {
        ConvParams p;
        p.weight = Parameter<S>(uniform_fan_in<S>(kernel * in_channels, out_channels, kernel * in_channels, rng));
        p.bias = Parameter<S>(Matrix<S>::Zero(1, out_channels));
        return p;
    }

    Var conv(Graph<S>& g, Var x, const ConvSpec& spec) {
        return conv1d(g, x, g.parameter(weight), g.parameter(bias), spec);
    }
    Var deconv(Graph<S>& g, Var x, const ConvSpec& spec) {
        return deconv1d(g, x, g.parameter(weight), g.parameter(bias), spec);
    }

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        f(prefix + ".weight", weight);
        f(prefix + ".bias", bias);
    }
};

}  // namespace mgg::seqgrad
