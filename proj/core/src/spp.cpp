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

#include "mgg/spp.hpp"

#include "mgg/seqgrad/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mgg::spp {

using seqgrad::Activation;
using seqgrad::ConvParams;
using seqgrad::ConvSpec;
using seqgrad::Graph;
using seqgrad::Matrix;
using seqgrad::Padding;
using seqgrad::Var;

void PyramidConfig::validate() const {
    if (levels < 1) throw std::invalid_argument("pyramid: levels must be >= 1");
    if (base_stride < 1) throw std::invalid_argument("pyramid: base_stride must be >= 1");
    if (scales.empty()) throw std::invalid_argument("pyramid: at least one anchor scale is required");
    for (double s : scales) {
        if (!(s > 0.0)) throw std::invalid_argument("pyramid: anchor scales must be positive");
    }
}

int PyramidConfig::anchor_count(int length) const {
    int total = 0;
    for (int n = 0; n < levels; ++n) total += level_length(length, n) * anchors_per_location();
    return total;
}

AnchorGrid generate_anchors(const PyramidConfig& config, int length) {
    config.validate();
    AnchorGrid grid;
    grid.reserve(static_cast<std::size_t>(config.anchor_count(length)));
    for (int level = 0; level < config.levels; ++level) {
        const int stride = config.stride(level);
        for (int loc = 0; loc < config.level_length(length, level); ++loc) {
            for (int k = 0; k < config.anchors_per_location(); ++k) {
                grid.push_back(Anchor{level, loc, k, (loc + 0.5) * stride,
                                      stride * config.scales[static_cast<std::size_t>(k)]});
            }
        }
    }
    return grid;
}

OffsetPair encode_offsets(const Anchor& anchor, const Segment& gt) {
    if (!(anchor.length > 0.0) || !(gt.duration() > 0.0)) {
        throw std::invalid_argument("encode_offsets: anchor and ground truth lengths must be positive");
    }
    return {(gt.center() - anchor.center) / anchor.length, std::log(gt.duration() / anchor.length)};
}

Segment decode_offsets_unclamped(const Anchor& anchor, const OffsetPair& offsets) {
    if (!(anchor.length > 0.0)) throw std::invalid_argument("decode_offsets: anchor length must be positive");
    const double center = anchor.center + offsets.center_shift * anchor.length;
    const double len = anchor.length * std::exp(offsets.log_length_ratio);
    return {center - 0.5 * len, center + 0.5 * len, 0.0};
}

Segment decode_offsets(const Anchor& anchor, const OffsetPair& offsets, double length) {
    Segment s = decode_offsets_unclamped(anchor, offsets);
    s.t_s = std::clamp(s.t_s, 0.0, length);
    s.t_e = std::clamp(s.t_e, 0.0, length);
    return s;
}

int LabelAssignment::count(AnchorClass cls) const {
    return static_cast<int>(std::count_if(labels.begin(), labels.end(), [cls](const AnchorLabel& l) {
        return l.cls == cls;
    }));
}

LabelAssignment assign_labels(const AnchorGrid& anchors, const SegmentList& gt) {
    LabelAssignment out;
    out.labels.resize(anchors.size());
    if (gt.empty()) {
        out.empty_ground_truth = true;
        return out;
    }
    const std::size_t na = anchors.size();
    const std::size_t ng = gt.size();
    std::vector<double> iou(na * ng);
    std::vector<double> gt_best(ng, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
        const Segment seg = anchors[a].segment();
        for (std::size_t j = 0; j < ng; ++j) {
            const double v = tiou(seg, gt[j]);
            iou[a * ng + j] = v;
            gt_best[j] = std::max(gt_best[j], v);
        }
    }
    for (std::size_t a = 0; a < na; ++a) {
        AnchorLabel& label = out.labels[a];
        std::size_t best = 0;
        bool is_gt_argmax = false;
        for (std::size_t j = 0; j < ng; ++j) {
            const double v = iou[a * ng + j];
            if (v > iou[a * ng + best]) best = j;
            if (gt_best[j] > 0.0 && v == gt_best[j]) is_gt_argmax = true;
        }
        label.max_tiou = iou[a * ng + best];
        if (label.max_tiou >= kPositiveTiou || is_gt_argmax) {
            label.cls = AnchorClass::kPositive;
            label.matched_gt = gt[best];
        } else if (label.max_tiou < kNegativeTiou) {
            label.cls = AnchorClass::kNegative;
        } else {
            label.cls = AnchorClass::kIgnored;
        }
    }
    return out;
}

MinibatchSample sample_minibatch(const std::vector<AnchorLabel>& labels, std::uint64_t seed) {
    std::vector<int> pos;
    std::vector<int> neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].cls == AnchorClass::kPositive) pos.push_back(static_cast<int>(i));
        if (labels[i].cls == AnchorClass::kNegative) neg.push_back(static_cast<int>(i));
    }
    MinibatchSample sample;
    if (pos.empty()) {
        sample.no_positives = true;
        sample.indices = neg;
        sample.negatives = static_cast<int>(neg.size());
        return sample;
    }
    const std::size_t take = std::min(pos.size(), neg.size());
    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, neg.size() - 1);
        std::swap(neg[i], neg[pick(rng)]);
    }
    sample.indices = pos;
    sample.indices.insert(sample.indices.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(sample.indices.begin(), sample.indices.end());
    sample.positives = static_cast<int>(pos.size());
    sample.negatives = static_cast<int>(take);
    return sample;
}

void SppConfig::validate() const {
    pyramid.validate();
    if (input_dim < 1 || channels < 1) throw std::invalid_argument("spp: input_dim and channels must be >= 1");
    if (head_kernel < 1 || head_kernel % 2 == 0) throw std::invalid_argument("spp: head_kernel must be odd");
    if (contract_kernel < 1 || contract_kernel % 2 == 0) throw std::invalid_argument("spp: contract_kernel must be odd");
}

template <typename S>
SppParams<S> SppParams<S>::init(const SppConfig& config, std::mt19937_64& rng) {
    config.validate();
    const int c = config.channels;
    const int m = config.pyramid.levels;
    const int rho = config.pyramid.anchors_per_location();
    const int k = config.head_kernel;
    SppParams p;
    p.contract = ConvParams<S>::make(config.input_dim, c, config.contract_kernel, rng);
    for (int n = 1; n < m; ++n) p.down.push_back(ConvParams<S>::make(c, c, config.contract_kernel, rng));
    if (config.lateral) {
        for (int n = 0; n + 1 < m; ++n) p.lateral.push_back(ConvParams<S>::make(c, c, 1, rng));
        // Deconv weights are stored as the adjoint conv (k*C_out x C_in).
        for (int n = 0; n + 1 < m; ++n) p.deconv.push_back(ConvParams<S>::make(c, c, config.contract_kernel, rng));
    }
    const int head_count = config.share_heads ? 1 : m;
    for (int n = 0; n < head_count; ++n) {
        HeadParams<S> h;
        h.cls1 = ConvParams<S>::make(c, c, k, rng);
        h.cls2 = ConvParams<S>::make(c, rho, k, rng);
        h.reg1 = ConvParams<S>::make(c, c, k, rng);
        h.reg2 = ConvParams<S>::make(c, 2 * rho, k, rng);
        p.heads.push_back(std::move(h));
    }
    return p;
}

namespace {

template <typename S>
Var apply(Graph<S>& g, Var x, ConvParams<S>& p, const ConvSpec& spec) {
    return seqgrad::conv1d(g, x, g.parameter(p.weight), g.parameter(p.bias), spec);
}

}  // namespace

template <typename S>
std::vector<Var> build_pyramid(Graph<S>& g, Var input, SppParams<S>& params, const SppConfig& config) {
    config.validate();
    const auto length = g.value(input).rows();
    const int multiple = config.pyramid.required_multiple();
    if (length % multiple != 0) {
        throw std::invalid_argument("build_pyramid: input length " + std::to_string(length) +
                                    " is not a multiple of " + std::to_string(multiple) + "; pad the sequence first");
    }
    const int c = config.channels;
    const int m = config.pyramid.levels;
    const ConvSpec down{c, config.contract_kernel, 2, Activation::kReLU, Padding::kSame};

    Var x = apply(g, input, params.contract, down);
    x = seqgrad::maxpool1d(g, x, 2, 2);
    x = seqgrad::maxpool1d(g, x, 2, 2);

    std::vector<Var> low{x};
    for (int n = 1; n < m; ++n) low.push_back(apply(g, low.back(), params.down[static_cast<std::size_t>(n - 1)], down));
    if (!config.lateral) return low;

    const ConvSpec lateral{c, 1, 1, Activation::kNone, Padding::kSame};
    const ConvSpec up{c, config.contract_kernel, 2, Activation::kReLU, Padding::kSame};
    std::vector<Var> high(static_cast<std::size_t>(m));
    high.back() = low.back();
    for (int n = m - 2; n >= 0; --n) {
        const auto i = static_cast<std::size_t>(n);
        Var upsampled = seqgrad::deconv1d(g, high[i + 1], g.parameter(params.deconv[i].weight),
                                          g.parameter(params.deconv[i].bias), up);
        high[i] = seqgrad::add(g, upsampled, apply(g, low[i], params.lateral[i], lateral));
    }
    return high;
}

template <typename S>
SppOutputs predict_heads(Graph<S>& g, const std::vector<Var>& pyramid, SppParams<S>& params,
                         const SppConfig& config) {
    const int c = config.channels;
    const int rho = config.pyramid.anchors_per_location();
    const int k = config.head_kernel;
    const ConvSpec hidden{c, k, 1, Activation::kReLU, Padding::kSame};
    const ConvSpec cls{rho, k, 1, Activation::kSigmoid, Padding::kSame};
    const ConvSpec reg{2 * rho, k, 1, Activation::kNone, Padding::kSame};

    SppOutputs out;
    out.pyramid = pyramid;
    for (std::size_t n = 0; n < pyramid.size(); ++n) {
        HeadParams<S>& head = params.heads[config.share_heads ? 0 : n];
        out.level_scores.push_back(apply(g, apply(g, pyramid[n], head.cls1, hidden), head.cls2, cls));
        out.level_offsets.push_back(apply(g, apply(g, pyramid[n], head.reg1, hidden), head.reg2, reg));
    }
    out.scores = seqgrad::flatten_rows<S>(g, out.level_scores, 1);
    out.offsets = seqgrad::flatten_rows<S>(g, out.level_offsets, 2);
    return out;
}

template <typename S>
SppOutputs spp_forward(Graph<S>& g, Var input, SppParams<S>& params, const SppConfig& config) {
    return predict_heads(g, build_pyramid(g, input, params, config), params, config);
}

template <typename S>
Var spp_loss(Graph<S>& g, Var scores, Var offsets, const AnchorGrid& anchors, const LabelAssignment& labels,
             const MinibatchSample& sample, double regression_weight) {
    const auto n = static_cast<Eigen::Index>(anchors.size());
    if (g.value(scores).rows() != n || g.value(offsets).rows() != n || labels.labels.size() != anchors.size()) {
        throw std::invalid_argument("spp_loss: scores, offsets, labels and anchors disagree in count");
    }
    if (sample.indices.empty()) throw std::invalid_argument("spp_loss: empty minibatch");

    Matrix<S> target = Matrix<S>::Zero(n, 1);
    Matrix<S> cls_weight = Matrix<S>::Zero(n, 1);
    Matrix<S> reg_target = Matrix<S>::Zero(n, 2);
    Matrix<S> reg_weight = Matrix<S>::Zero(n, 1);
    int n_reg = 0;
    for (int i : sample.indices) {
        const AnchorLabel& label = labels.labels[static_cast<std::size_t>(i)];
        cls_weight(i, 0) = S(1);
        if (label.cls != AnchorClass::kPositive) continue;
        target(i, 0) = S(1);
        const OffsetPair t = encode_offsets(anchors[static_cast<std::size_t>(i)], *label.matched_gt);
        reg_target(i, 0) = static_cast<S>(t.center_shift);
        reg_target(i, 1) = static_cast<S>(t.log_length_ratio);
        reg_weight(i, 0) = S(1);
        ++n_reg;
    }
    const Var cls_loss =
        seqgrad::binary_cross_entropy(g, scores, target, cls_weight, static_cast<S>(sample.indices.size()));
    if (n_reg == 0) return cls_loss;
    const Var reg_loss = seqgrad::smooth_l1(g, offsets, reg_target, reg_weight, static_cast<S>(n_reg));
    return seqgrad::add(g, cls_loss, seqgrad::scale(g, reg_loss, static_cast<S>(regression_weight)));
}

template <typename S>
SegmentList decode_proposals(const AnchorGrid& anchors, const Matrix<S>& scores, const Matrix<S>& offsets,
                             double length) {
    const auto n = static_cast<Eigen::Index>(anchors.size());
    if (scores.rows() != n || offsets.rows() != n || offsets.cols() != 2) {
        throw std::invalid_argument("decode_proposals: head outputs do not match the anchor grid");
    }
    SegmentList out;
    out.reserve(anchors.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const OffsetPair t{static_cast<double>(offsets(i, 0)), static_cast<double>(offsets(i, 1))};
        Segment s = decode_offsets(anchors[static_cast<std::size_t>(i)], t, length);
        if (!(s.t_e > s.t_s) || !std::isfinite(s.t_s) || !std::isfinite(s.t_e)) continue;
        s.score = static_cast<double>(scores(i, 0));
        out.push_back(s);
    }
    return out;
}

#define MGG_INSTANTIATE_SPP(S)                                                                                 \
    template struct SppParams<S>;                                                                             \
    template std::vector<Var> build_pyramid<S>(Graph<S>&, Var, SppParams<S>&, const SppConfig&);             \
    template SppOutputs predict_heads<S>(Graph<S>&, const std::vector<Var>&, SppParams<S>&, const SppConfig&); \
    template SppOutputs spp_forward<S>(Graph<S>&, Var, SppParams<S>&, const SppConfig&);                     \
    template Var spp_loss<S>(Graph<S>&, Var, Var, const AnchorGrid&, const LabelAssignment&,                  \
                             const MinibatchSample&, double);                                                 \
    template SegmentList decode_proposals<S>(const AnchorGrid&, const Matrix<S>&, const Matrix<S>&, double);

MGG_INSTANTIATE_SPP(float)
MGG_INSTANTIATE_SPP(double)

#undef MGG_INSTANTIATE_SPP

}  // namespace mgg::spp
