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

#include "mgg/basenet.hpp"

#include <stdexcept>
#include <string>

namespace mgg::basenet {

using seqgrad::Matrix;
using seqgrad::Parameter;
using seqgrad::Var;

void BaseNetConfig::validate() const {
    if (input_dim < 1) throw std::invalid_argument("basenet: input_dim must be >= 1");
    if (hidden < 1) throw std::invalid_argument("basenet: hidden must be >= 1");
    if (kernel < 1 || kernel % 2 == 0) throw std::invalid_argument("basenet: kernel must be odd");
    if (bilinear && (rank < 1 || rank >= hidden)) {
        throw std::invalid_argument("basenet: bilinear rank must be in [1, hidden), got " + std::to_string(rank));
    }
}

template <typename S>
BaseNetParams<S> BaseNetParams<S>::init(const BaseNetConfig& config, std::mt19937_64& rng) {
    config.validate();
    BaseNetParams p;
    const int h = config.hidden;
    const int k = config.kernel;
    p.conv1_weight = Parameter<S>(seqgrad::uniform_fan_in<S>(k * config.input_dim, h, k * config.input_dim, rng));
    p.conv1_bias = Parameter<S>(Matrix<S>::Zero(1, h));
    p.conv2_weight = Parameter<S>(seqgrad::uniform_fan_in<S>(k * h, h, k * h, rng));
    p.conv2_bias = Parameter<S>(Matrix<S>::Zero(1, h));
    if (config.bilinear) {
        p.bilinear_weight = Parameter<S>(seqgrad::uniform_fan_in<S>(h, h * config.rank, h, rng));
        p.bilinear_bias = Parameter<S>(Matrix<S>::Zero(1, h * config.rank));
    }
    return p;
}

namespace {

template <typename S>
BaseNetOutputs conv_stack(seqgrad::Graph<S>& g, Var input, BaseNetParams<S>& params, const BaseNetConfig& config) {
    const seqgrad::ConvSpec spec = config.conv_spec();
    BaseNetOutputs out;
    out.h1 = seqgrad::conv1d(g, input, g.parameter(params.conv1_weight), g.parameter(params.conv1_bias), spec);
    out.h2 = seqgrad::conv1d(g, out.h1, g.parameter(params.conv2_weight), g.parameter(params.conv2_bias), spec);
    out.out = out.h2;
    return out;
}

}  // namespace

template <typename S>
BaseNetOutputs basenet_forward(seqgrad::Graph<S>& g, Var input, BaseNetParams<S>& params,
                               const BaseNetConfig& config) {
    if (!params.has_bilinear()) throw std::invalid_argument("basenet_forward: model has no bilinear block");
    BaseNetOutputs out = conv_stack(g, input, params, config);
    out.out = seqgrad::bilinear_match(g, out.h1, out.h2, g.parameter(params.bilinear_weight),
                                      g.parameter(params.bilinear_bias), config.rank);
    return out;
}

template <typename S>
BaseNetOutputs basenet_forward_ablated(seqgrad::Graph<S>& g, Var input, BaseNetParams<S>& params,
                                       const BaseNetConfig& config) {
    return conv_stack(g, input, params, config);
}

template struct BaseNetParams<float>;
template struct BaseNetParams<double>;
template BaseNetOutputs basenet_forward<float>(seqgrad::Graph<float>&, Var, BaseNetParams<float>&,
                                               const BaseNetConfig&);
template BaseNetOutputs basenet_forward<double>(seqgrad::Graph<double>&, Var, BaseNetParams<double>&,
                                                const BaseNetConfig&);
template BaseNetOutputs basenet_forward_ablated<float>(seqgrad::Graph<float>&, Var, BaseNetParams<float>&,
                                                       const BaseNetConfig&);
template BaseNetOutputs basenet_forward_ablated<double>(seqgrad::Graph<double>&, Var, BaseNetParams<double>&,
                                                        const BaseNetConfig&);

}  // namespace mgg::basenet
