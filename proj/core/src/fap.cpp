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

#include "mgg/fap.hpp"

#include "mgg/seqgrad/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mgg::fap {

using seqgrad::Activation;
using seqgrad::ConvParams;
using seqgrad::ConvSpec;
using seqgrad::Graph;
using seqgrad::Matrix;
using seqgrad::Padding;
using seqgrad::Var;

void FapConfig::validate() const {
    if (input_dim < 1 || hidden < 1) throw std::invalid_argument("fap: input_dim and hidden must be >= 1");
    if (kernel < 1 || kernel % 2 == 0) throw std::invalid_argument("fap: kernel must be odd");
}

template <typename S>
FapParams<S> FapParams<S>::init(const FapConfig& config, std::mt19937_64& rng) {
    config.validate();
    auto head = [&] {
        FapHeadParams<S> h;
        h.conv1 = ConvParams<S>::make(config.input_dim, config.hidden, config.kernel, rng);
        h.conv2 = ConvParams<S>::make(config.hidden, 1, config.kernel, rng);
        return h;
    };
    FapParams p;
    p.start = head();
    p.end = head();
    p.middle = head();
    return p;
}

template <typename S>
ActionnessVars fap_forward(Graph<S>& g, Var input, FapParams<S>& params, const FapConfig& config) {
    const ConvSpec hidden{config.hidden, config.kernel, 1, Activation::kReLU, Padding::kSame};
    const ConvSpec prob{1, config.kernel, 1, Activation::kSigmoid, Padding::kSame};
    auto run = [&](FapHeadParams<S>& head) { return head.conv2.conv(g, head.conv1.conv(g, input, hidden), prob); };
    ActionnessVars out;
    out.start = run(params.start);
    out.end = run(params.end);
    out.middle = run(params.middle);
    return out;
}

template <typename S>
ActionnessTriple read_actionness(const Graph<S>& g, const ActionnessVars& vars, std::size_t valid_length) {
    auto read = [&](Var v) {
        const Matrix<S>& m = g.value(v);
        const auto n = std::min<std::size_t>(valid_length, static_cast<std::size_t>(m.rows()));
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(m(static_cast<Eigen::Index>(i), 0));
        return out;
    };
    return {read(vars.start), read(vars.end), read(vars.middle)};
}

FrameLabels assign_frame_labels(const SegmentList& gt, int length, double eta, int valid_length) {
    if (length < 0) throw std::invalid_argument("assign_frame_labels: negative length");
    if (!(eta > 0.0)) throw std::invalid_argument("assign_frame_labels: eta must be positive");
    if (valid_length < 0 || valid_length > length) valid_length = length;
    const auto n = static_cast<std::size_t>(length);
    FrameLabels labels{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                       std::vector<double>(n, 0.0)};
    std::fill(labels.valid.begin(), labels.valid.begin() + valid_length, 1.0);

    auto mark = [&](std::vector<double>& seq, double lo, double hi) {
        const int first = std::max(0, static_cast<int>(std::ceil(lo)));
        const int last = std::min(length - 1, static_cast<int>(std::floor(hi)));
        for (int f = first; f <= last; ++f) seq[static_cast<std::size_t>(f)] = 1.0;
    };
    for (const Segment& s : gt) {
        const double half = s.duration() / eta;
        mark(labels.start, s.t_s - half, s.t_s + half);
        mark(labels.end, s.t_e - half, s.t_e + half);
        mark(labels.middle, s.t_s, s.t_e);
    }
    return labels;
}

template <typename S>
FapLossTerms fap_loss(Graph<S>& g, const ActionnessVars& vars, const FrameLabels& labels,
                      const FapLossWeights& lambdas) {
    const auto n = static_cast<Eigen::Index>(labels.length());
    if (g.value(vars.middle).rows() != n) {
        throw std::invalid_argument("fap_loss: predictions have " + std::to_string(g.value(vars.middle).rows()) +
                                    " frames but labels have " + std::to_string(n));
    }
    Matrix<S> mask(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) mask(i, 0) = static_cast<S>(labels.valid[static_cast<std::size_t>(i)]);

    auto term = [&](Var pred, const std::vector<double>& seq) {
        Matrix<S> target(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) target(i, 0) = static_cast<S>(seq[static_cast<std::size_t>(i)]);
        const seqgrad::ClassWeights w = seqgrad::inverse_frequency_weights(target, mask);
        return seqgrad::weighted_bce(g, pred, target, static_cast<S>(w.positive), static_cast<S>(w.negative), mask);
    };
    FapLossTerms out;
    out.start = term(vars.start, labels.start);
    out.end = term(vars.end, labels.end);
    out.middle = term(vars.middle, labels.middle);
    out.total = seqgrad::add(g,
                             seqgrad::add(g, seqgrad::scale(g, out.start, static_cast<S>(lambdas.start)),
                                          seqgrad::scale(g, out.end, static_cast<S>(lambdas.end))),
                             seqgrad::scale(g, out.middle, static_cast<S>(lambdas.middle)));
    return out;
}

#define MGG_INSTANTIATE_FAP(S)                                                                          \
    template struct FapParams<S>;                                                                      \
    template ActionnessVars fap_forward<S>(Graph<S>&, Var, FapParams<S>&, const FapConfig&);           \
    template ActionnessTriple read_actionness<S>(const Graph<S>&, const ActionnessVars&, std::size_t); \
    template FapLossTerms fap_loss<S>(Graph<S>&, const ActionnessVars&, const FrameLabels&, const FapLossWeights&);

MGG_INSTANTIATE_FAP(float)
MGG_INSTANTIATE_FAP(double)

#undef MGG_INSTANTIATE_FAP

}  // namespace mgg::fap
