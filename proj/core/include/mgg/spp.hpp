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

#include "mgg/segment.hpp"
#include "mgg/seqgrad/conv_params.hpp"
#include "mgg/seqgrad/graph.hpp"
#include "mgg/seqgrad/ops.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mgg::spp {

// Segment proposal producer: anchor pyramid, heads, label assignment and loss.

inline constexpr double kPositiveTiou = 0.7;
inline constexpr double kNegativeTiou = 0.3;
inline constexpr double kRegressionWeight = 0.001;  // gamma

struct PyramidConfig {
    int levels = 3;  // M
    int base_stride = 8;
    std::vector<double> scales{1.0, 1.5, 2.0};  // anchor length = stride(level) * scale

    void validate() const;
    int anchors_per_location() const { return static_cast<int>(scales.size()); }
    int stride(int level) const { return base_stride << level; }
    // Input length must be a multiple of this so every level halves exactly.
    int required_multiple() const { return stride(levels - 1); }
    int level_length(int length, int level) const { return length / stride(level); }
    int anchor_count(int length) const;
};

struct Anchor {
    int level = 0;
    int location = 0;
    int scale_index = 0;
    double center = 0.0;
    double length = 0.0;

    Segment segment() const { return {center - 0.5 * length, center + 0.5 * length, 0.0}; }
};

// Ordered by level, then location, then scale; this is also the row order of
// the flattened head outputs.
using AnchorGrid = std::vector<Anchor>;

AnchorGrid generate_anchors(const PyramidConfig& config, int length);

struct OffsetPair {
    double center_shift = 0.0;       // t_c = (c* - c) / l
    double log_length_ratio = 0.0;   // t_l = log(l* / l)
};

OffsetPair encode_offsets(const Anchor& anchor, const Segment& gt);
// Inverse of encode_offsets, then clamped to [0, length]. Score is left at 0.
Segment decode_offsets(const Anchor& anchor, const OffsetPair& offsets, double length);
// Same without clamping.
Segment decode_offsets_unclamped(const Anchor& anchor, const OffsetPair& offsets);

enum class AnchorClass { kPositive, kNegative, kIgnored };

struct AnchorLabel {
    AnchorClass cls = AnchorClass::kNegative;
    std::optional<Segment> matched_gt;
    double max_tiou = 0.0;
};

struct LabelAssignment {
    std::vector<AnchorLabel> labels;
    bool empty_ground_truth = false;

    int count(AnchorClass cls) const;
};

// Positive: max tIoU >= 0.7, or the anchor attains the best tIoU of some gt.
// Negative: max tIoU < 0.3 and not positive. Everything else is ignored.
LabelAssignment assign_labels(const AnchorGrid& anchors, const SegmentList& gt);

struct MinibatchSample {
    std::vector<int> indices;  // ascending anchor indices
    int positives = 0;
    int negatives = 0;
    bool no_positives = false;  // fell back to all negatives
};

// 1:1 positive/negative sampling. All positives are kept; min(P, N) negatives
// are drawn uniformly without replacement.
MinibatchSample sample_minibatch(const std::vector<AnchorLabel>& labels, std::uint64_t seed);

struct SppConfig {
    PyramidConfig pyramid;
    int input_dim = 512;
    int channels = 512;
    int contract_kernel = 3;
    int head_kernel = 3;
    bool lateral = true;
    bool share_heads = false;

    void validate() const;
};

template <typename S>
struct HeadParams {
    seqgrad::ConvParams<S> cls1, cls2, reg1, reg2;

    template <typename F>
    void visit(const std::string& prefix, F&& f) {
        cls1.visit(prefix + ".cls1", f);
        cls2.visit(prefix + ".cls2", f);
        reg1.visit(prefix + ".reg1", f);
        reg2.visit(prefix + ".reg2", f);
    }
};

template <typename S>
struct SppParams {
    seqgrad::ConvParams<S> contract;
    std::vector<seqgrad::ConvParams<S>> down;     // f_L^(n-1) -> f_L^(n), stride 2
    std::vector<seqgrad::ConvParams<S>> lateral;  // 1x1 lateral convs on f_L^(0..M-2)
    std::vector<seqgrad::ConvParams<S>> deconv;   // f_H^(n+1) -> f_H^(n), upscale 2
    std::vector<HeadParams<S>> heads;    // one per level, or a single shared head

    static SppParams init(const SppConfig& config, std::mt19937_64& rng);

    template <typename F>
    void visit(F&& f) {
        contract.visit("contract", f);
        for (std::size_t i = 0; i < down.size(); ++i) down[i].visit("down" + std::to_string(i + 1), f);
        for (std::size_t i = 0; i < lateral.size(); ++i) lateral[i].visit("lateral" + std::to_string(i), f);
        for (std::size_t i = 0; i < deconv.size(); ++i) deconv[i].visit("deconv" + std::to_string(i), f);
        for (std::size_t i = 0; i < heads.size(); ++i) heads[i].visit("head" + std::to_string(i), f);
    }
};

struct SppOutputs {
    std::vector<seqgrad::Var> pyramid;        // f_H^(n), n = 0..M-1
    std::vector<seqgrad::Var> level_scores;   // L_n x rho, sigmoid
    std::vector<seqgrad::Var> level_offsets;  // L_n x 2 rho
    seqgrad::Var scores;                      // anchors x 1
    seqgrad::Var offsets;                     // anchors x 2 (t_c, t_l)
};

// Contracting stack (stride-2 conv + two max-pools) to T_c at length/8, then
// stride-2 convs for F_L, then stride-2 deconvs summed with 1x1 lateral convs
// for F_H. Without lateral connections F_H = F_L.
template <typename S>
std::vector<seqgrad::Var> build_pyramid(seqgrad::Graph<S>& g, seqgrad::Var input, SppParams<S>& params,
                                        const SppConfig& config);

template <typename S>
SppOutputs predict_heads(seqgrad::Graph<S>& g, const std::vector<seqgrad::Var>& pyramid, SppParams<S>& params,
                         const SppConfig& config);

template <typename S>
SppOutputs spp_forward(seqgrad::Graph<S>& g, seqgrad::Var input, SppParams<S>& params, const SppConfig& config);

// (1/N_cls) sum CE + gamma (1/N_reg) sum_{positives} smooth_l1 over the sampled anchors.
template <typename S>
seqgrad::Var spp_loss(seqgrad::Graph<S>& g, seqgrad::Var scores, seqgrad::Var offsets, const AnchorGrid& anchors,
                      const LabelAssignment& labels, const MinibatchSample& sample,
                      double regression_weight = kRegressionWeight);

// Scored, clamped segments for every anchor; degenerate ones are dropped.
template <typename S>
SegmentList decode_proposals(const AnchorGrid& anchors, const seqgrad::Matrix<S>& scores,
                             const seqgrad::Matrix<S>& offsets, double length);

}  // namespace mgg::spp
