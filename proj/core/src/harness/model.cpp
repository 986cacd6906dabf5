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

#include "mgg/harness/model.hpp"

#include "mgg/seqgrad/ops.hpp"

#include <stdexcept>

namespace mgg::harness {

using seqgrad::Graph;
using seqgrad::Matrix;
using seqgrad::Parameter;
using seqgrad::Var;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    // splitmix64 finalizer over a running mix
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(base) ^ a) ^ b);
}

void ModelSpec::validate() const {
    model.validate();
    flags.validate();
    if (feature_dim < 1) throw std::invalid_argument("model: feature_dim must be >= 1");
}

basenet::BaseNetConfig ModelSpec::basenet_config() const {
    basenet::BaseNetConfig c;
    c.input_dim = input_dim();
    c.hidden = model.hidden;
    c.kernel = model.basenet_kernel;
    c.rank = model.rank;
    c.bilinear = !flags.disable_bilinear;
    return c;
}

spp::SppConfig ModelSpec::spp_config() const {
    spp::SppConfig c;
    c.pyramid.levels = model.levels;
    c.pyramid.base_stride = model.base_stride;
    c.pyramid.scales = model.scales;
    c.input_dim = model.hidden;
    c.channels = model.hidden;
    c.head_kernel = model.head_kernel;
    c.lateral = !flags.disable_lateral;
    c.share_heads = model.share_heads;
    return c;
}

fap::FapConfig ModelSpec::fap_config() const {
    fap::FapConfig c;
    c.input_dim = model.hidden;
    c.hidden = model.fap_hidden;
    c.kernel = model.fap_kernel;
    return c;
}

int ModelSpec::padded_length(int length) const {
    if (length < 1) throw std::invalid_argument("model: empty feature sequence");
    const int m = required_multiple();
    return (length + m - 1) / m * m;
}

template <typename S>
Model<S>::Model(const ModelSpec& spec, std::uint64_t seed) : spec_(spec) {
    spec_.validate();
    std::mt19937_64 rng(seed);
    basenet_ = basenet::BaseNetParams<S>::init(spec_.basenet_config(), rng);
    spp_ = spp::SppParams<S>::init(spec_.spp_config(), rng);
    fap_ = fap::FapParams<S>::init(spec_.fap_config(), rng);
    if (spec_.stagewise) fap_basenet_ = basenet::BaseNetParams<S>::init(spec_.basenet_config(), rng);
}

template <typename S>
Matrix<S> Model<S>::prepare_input(const Matrix<float>& features) const {
    if (features.cols() != spec_.feature_dim) {
        throw std::invalid_argument("model: expected " + std::to_string(spec_.feature_dim) +
                                    " feature channels, got " + std::to_string(features.cols()));
    }
    const int length = static_cast<int>(features.rows());
    const int padded = spec_.padded_length(length);
    Matrix<S> x = Matrix<S>::Zero(padded, features.cols());
    x.topRows(length) = features.template cast<S>();
    if (spec_.flags.disable_position) return embed::features_only<S>(x).values;
    return embed::fuse<S>(x, embed::build_embedding(padded, spec_.model.position_dim)).values;
}

template <typename S>
Var Model<S>::trunk(Graph<S>& g, Var input, basenet::BaseNetParams<S>& params) {
    const basenet::BaseNetConfig cfg = spec_.basenet_config();
    if (spec_.flags.disable_bilinear) return basenet::basenet_forward_ablated(g, input, params, cfg).out;
    return basenet::basenet_forward(g, input, params, cfg).out;
}

template <typename S>
ForwardResult<S> Model<S>::forward(Graph<S>& g, const Matrix<float>& features, Branch branch) {
    ForwardResult<S> out;
    out.length = static_cast<int>(features.rows());
    out.padded = spec_.padded_length(out.length);
    const Var input = g.constant(prepare_input(features));
    const bool split = fap_basenet_.has_value();
    Var shared;
    if (has_spp(branch) || !split) shared = trunk(g, input, basenet_);
    if (has_spp(branch)) {
        out.anchors = spp::generate_anchors(spec_.pyramid(), out.padded);
        out.spp = spp::spp_forward(g, shared, spp_, spec_.spp_config());
    }
    if (has_fap(branch)) {
        const Var t = split ? trunk(g, input, *fap_basenet_) : shared;
        out.fap = fap::fap_forward(g, t, fap_, spec_.fap_config());
    }
    return out;
}

template <typename S>
LossResult<S> Model<S>::loss(Graph<S>& g, const Video& video, Branch branch, double beta, std::uint64_t sample_seed) {
    ForwardResult<S> fwd = forward(g, video.features, branch);
    LossResult<S> out;
    if (fwd.spp) {
        const spp::LabelAssignment labels = spp::assign_labels(fwd.anchors, video.annotations);
        const spp::MinibatchSample sample = spp::sample_minibatch(labels.labels, sample_seed);
        out.spp = spp::spp_loss(g, fwd.spp->scores, fwd.spp->offsets, fwd.anchors, labels, sample);
    }
    if (fwd.fap) {
        const fap::FrameLabels labels =
            fap::assign_frame_labels(video.annotations, fwd.padded, fap::kBoundaryRatio, fwd.length);
        out.fap = fap::fap_loss(g, *fwd.fap, labels).total;
    }
    if (out.spp.valid() && out.fap.valid()) {
        out.joint = seqgrad::add(g, out.spp, seqgrad::scale(g, out.fap, static_cast<S>(beta)));
    } else {
        out.joint = out.spp.valid() ? out.spp : out.fap;
    }
    return out;
}

template <typename S>
std::vector<Parameter<S>*> Model<S>::parameters(Branch branch) {
    std::vector<Parameter<S>*> out;
    auto take = [&out](const std::string&, Parameter<S>& p) { out.push_back(&p); };
    const bool split = fap_basenet_.has_value();
    if (has_spp(branch) || !split) basenet_.visit(take);
    if (split && has_fap(branch)) fap_basenet_->visit(take);
    if (has_spp(branch)) spp_.visit([&](const std::string& n, Parameter<S>& p) { take(n, p); });
    if (has_fap(branch)) fap_.visit([&](const std::string& n, Parameter<S>& p) { take(n, p); });
    return out;
}

template <typename S>
long long Model<S>::parameter_count() {
    long long n = 0;
    visit([&n](const std::string&, Parameter<S>& p) { n += static_cast<long long>(p.size()); });
    return n;
}

template class Model<float>;
template class Model<double>;

}  // namespace mgg::harness
