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

#include "gradcheck.hpp"
#include "oracles.hpp"

#include "mgg/spp.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <set>

namespace mgg::spp {
namespace {

using seqgrad::Graph;
using seqgrad::Matrix;
using seqgrad::Parameter;
using seqgrad::Var;

SegmentList random_segments(std::mt19937_64& rng, int count, double length) {
    std::uniform_real_distribution<double> pos(0.0, length);
    SegmentList out;
    while (static_cast<int>(out.size()) < count) {
        double a = std::round(pos(rng) * 4.0) / 4.0;  // coarse grid so exact ties happen
        double b = std::round(pos(rng) * 4.0) / 4.0;
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        out.push_back({a, b, 0.0});
    }
    return out;
}

TEST(Anchors, CountAndOrder) {
    PyramidConfig c;
    const AnchorGrid grid = generate_anchors(c, 64);
    ASSERT_EQ(static_cast<int>(grid.size()), (8 + 4 + 2) * 3);
    ASSERT_EQ(c.anchor_count(64), 42);
    EXPECT_EQ(grid[0].center, 4.0);
    EXPECT_EQ(grid[0].length, 8.0);
    EXPECT_EQ(grid[2].length, 16.0);
    EXPECT_EQ(grid[3].center, 12.0);
    const Anchor& top = grid.back();
    EXPECT_EQ(top.level, 2);
    EXPECT_EQ(top.location, 1);
    EXPECT_EQ(top.center, 48.0);
    EXPECT_EQ(top.length, 64.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto key = [](const Anchor& a) { return std::tuple(a.level, a.location, a.scale_index); };
        EXPECT_LT(key(grid[i - 1]), key(grid[i]));
    }
}

TEST(Anchors, InvalidPyramidRejected) {
    PyramidConfig c;
    c.scales = {};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c.scales = {1.0, -1.0};
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Offsets, WorkedExample) {
    const Anchor a{0, 0, 0, 20.0, 10.0};
    const OffsetPair t = encode_offsets(a, Segment{18.0, 38.0, 0.0});
    EXPECT_DOUBLE_EQ(t.center_shift, 0.8);
    EXPECT_DOUBLE_EQ(t.log_length_ratio, std::log(2.0));
}

TEST(Offsets, ClosedForm) {
    const Anchor a{0, 0, 0, 100.0, 50.0};
    const OffsetPair t = encode_offsets(a, Segment{60.0, 160.0, 0.0});
    EXPECT_DOUBLE_EQ(t.center_shift, 0.2);
    EXPECT_DOUBLE_EQ(t.log_length_ratio, std::log(2.0));
    const OffsetPair same = encode_offsets(a, a.segment());
    EXPECT_EQ(same.center_shift, 0.0);
    EXPECT_EQ(same.log_length_ratio, 0.0);
}

TEST(Offsets, RoundTripOnRandomPairs) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> c(0.0, 512.0);
    std::uniform_real_distribution<double> l(1.0, 256.0);
    for (int i = 0; i < 1000; ++i) {
        const Anchor a{0, 0, 0, c(rng), l(rng)};
        const double center = c(rng);
        const double len = l(rng);
        const Segment gt{center - 0.5 * len, center + 0.5 * len, 0.0};
        const Segment back = decode_offsets_unclamped(a, encode_offsets(a, gt));
        EXPECT_NEAR(back.t_s, gt.t_s, 1e-9);
        EXPECT_NEAR(back.t_e, gt.t_e, 1e-9);
    }
}

TEST(Offsets, DecodeClampsToSequence) {
    const Anchor a{0, 0, 0, 4.0, 8.0};
    const Segment s = decode_offsets(a, OffsetPair{0.0, std::log(4.0)}, 20.0);
    EXPECT_EQ(s.t_s, 0.0);
    EXPECT_EQ(s.t_e, 20.0);
}

TEST(Offsets, DegenerateInputsRejected) {
    const Anchor a{0, 0, 0, 4.0, 8.0};
    EXPECT_THROW(encode_offsets(a, Segment{3.0, 3.0, 0.0}), std::invalid_argument);
    EXPECT_THROW(decode_offsets(Anchor{0, 0, 0, 4.0, 0.0}, OffsetPair{}, 10.0), std::invalid_argument);
}

TEST(AssignLabels, ThresholdsAndArgmaxRule) {
    AnchorGrid anchors{{0, 0, 0, 5.0, 10.0}, {0, 1, 0, 15.0, 10.0}, {0, 2, 0, 35.0, 10.0}, {0, 3, 0, 60.0, 10.0}};
    // gt [0, 12): tIoU 10/12 with anchor 0, 2/20 with anchor 1
    // gt [30, 50): tIoU 0.5 with anchor 2, which is still its best anchor
    const SegmentList gt{{0.0, 12.0, 0.0}, {30.0, 50.0, 0.0}};
    const LabelAssignment labels = assign_labels(anchors, gt);
    EXPECT_EQ(labels.labels[0].cls, AnchorClass::kPositive);
    EXPECT_EQ(labels.labels[1].cls, AnchorClass::kNegative);
    EXPECT_EQ(labels.labels[2].cls, AnchorClass::kPositive);
    EXPECT_EQ(*labels.labels[2].matched_gt, gt[1]);
    EXPECT_EQ(labels.labels[3].cls, AnchorClass::kNegative);
}

TEST(AssignLabels, EmptyGroundTruthIsAllNegative) {
    const AnchorGrid anchors = generate_anchors(PyramidConfig{}, 32);
    const LabelAssignment labels = assign_labels(anchors, {});
    EXPECT_TRUE(labels.empty_ground_truth);
    EXPECT_EQ(labels.count(AnchorClass::kNegative), static_cast<int>(anchors.size()));
}

TEST(AssignLabels, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> na(1, 50);
    std::uniform_int_distribution<int> ng(0, 10);
    for (int trial = 0; trial < 300; ++trial) {
        const SegmentList segs = random_segments(rng, na(rng), 64.0);
        const SegmentList gt = random_segments(rng, ng(rng), 64.0);
        AnchorGrid anchors;
        for (const Segment& s : segs) anchors.push_back({0, 0, 0, s.center(), s.duration()});
        // the oracle sees the anchors through the same center/length view
        SegmentList as_segments;
        for (const Anchor& a : anchors) as_segments.push_back(a.segment());
        const LabelAssignment got = assign_labels(anchors, gt);
        const auto want = oracle::anchor_labels(as_segments, gt);
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            const auto cls = got.labels[i].cls;
            const auto expect = want[i].label == oracle::Label::kPositive   ? AnchorClass::kPositive
                                : want[i].label == oracle::Label::kNegative ? AnchorClass::kNegative
                                                                            : AnchorClass::kIgnored;
            ASSERT_EQ(cls, expect) << "trial " << trial << " anchor " << i;
            if (cls == AnchorClass::kPositive) {
                ASSERT_EQ(*got.labels[i].matched_gt, gt[static_cast<std::size_t>(want[i].matched)]);
            }
        }
    }
}

std::vector<AnchorLabel> make_labels(int pos, int neg, int ignored) {
    std::vector<AnchorLabel> out;
    for (int i = 0; i < pos; ++i) out.push_back({AnchorClass::kPositive, Segment{0, 1, 0}, 1.0});
    for (int i = 0; i < neg; ++i) out.push_back({AnchorClass::kNegative, std::nullopt, 0.0});
    for (int i = 0; i < ignored; ++i) out.push_back({AnchorClass::kIgnored, std::nullopt, 0.5});
    std::shuffle(out.begin(), out.end(), std::mt19937_64(3));
    return out;
}

TEST(SampleMinibatch, BalancedAndComplete) {
    const auto labels = make_labels(7, 40, 5);
    const MinibatchSample s = sample_minibatch(labels, 99);
    EXPECT_EQ(s.positives, 7);
    EXPECT_EQ(s.negatives, 7);
    EXPECT_EQ(s.indices.size(), 14u);
    EXPECT_TRUE(std::is_sorted(s.indices.begin(), s.indices.end()));
    EXPECT_EQ(std::set<int>(s.indices.begin(), s.indices.end()).size(), s.indices.size());
    int pos = 0;
    for (int i : s.indices) {
        EXPECT_NE(labels[static_cast<std::size_t>(i)].cls, AnchorClass::kIgnored);
        pos += labels[static_cast<std::size_t>(i)].cls == AnchorClass::kPositive;
    }
    EXPECT_EQ(pos, 7);
}

TEST(SampleMinibatch, DeterministicPerSeed) {
    const auto labels = make_labels(5, 60, 0);
    EXPECT_EQ(sample_minibatch(labels, 4).indices, sample_minibatch(labels, 4).indices);
    EXPECT_NE(sample_minibatch(labels, 4).indices, sample_minibatch(labels, 5).indices);
}

TEST(SampleMinibatch, FewNegatives) {
    const MinibatchSample s = sample_minibatch(make_labels(9, 3, 2), 1);
    EXPECT_EQ(s.positives, 9);
    EXPECT_EQ(s.negatives, 3);
}

TEST(SampleMinibatch, NoPositivesFallsBackToNegatives) {
    const MinibatchSample s = sample_minibatch(make_labels(0, 12, 3), 1);
    EXPECT_TRUE(s.no_positives);
    EXPECT_EQ(s.negatives, 12);
    EXPECT_EQ(s.indices.size(), 12u);
}

SppConfig small_config(bool lateral = true) {
    SppConfig c;
    c.pyramid.levels = 2;
    c.input_dim = 3;
    c.channels = 4;
    c.lateral = lateral;
    return c;
}

TEST(SppForward, ShapesFollowAnchorGrid) {
    std::mt19937_64 rng(13);
    for (bool lateral : {true, false}) {
        SppConfig c;
        c.input_dim = 5;
        c.channels = 8;
        c.lateral = lateral;
        SppParams<float> p = SppParams<float>::init(c, rng);
        EXPECT_EQ(p.lateral.size(), lateral ? 2u : 0u);
        Graph<float> g;
        const SppOutputs out = spp_forward(g, g.constant(Matrix<float>::Random(64, 5)), p, c);
        ASSERT_EQ(out.pyramid.size(), 3u);
        EXPECT_EQ(g.value(out.pyramid[0]).rows(), 8);
        EXPECT_EQ(g.value(out.pyramid[2]).rows(), 2);
        EXPECT_EQ(g.value(out.scores).rows(), c.pyramid.anchor_count(64));
        EXPECT_EQ(g.value(out.offsets).cols(), 2);
        EXPECT_GE(g.value(out.scores).minCoeff(), 0.0f);
        EXPECT_LE(g.value(out.scores).maxCoeff(), 1.0f);
    }
}

TEST(SppForward, UnpaddedLengthRejected) {
    std::mt19937_64 rng(14);
    SppConfig c = small_config();
    SppParams<float> p = SppParams<float>::init(c, rng);
    Graph<float> g;
    EXPECT_THROW(spp_forward(g, g.constant(Matrix<float>::Random(20, 3)), p, c), std::invalid_argument);
}

TEST(SppForward, SharedHeadsUseOneHead) {
    std::mt19937_64 rng(15);
    SppConfig c = small_config();
    c.share_heads = true;
    EXPECT_EQ(SppParams<float>::init(c, rng).heads.size(), 1u);
}

TEST(SppLoss, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(16);
    for (bool lateral : {true, false}) {
        const SppConfig c = small_config(lateral);
        SppParams<double> p = SppParams<double>::init(c, rng);
        p.visit([](const std::string& n, Parameter<double>& q) {
            if (n.ends_with(".bias")) q.value.setConstant(0.03);
        });
        Parameter<double> x(Matrix<double>::Random(32, 3));
        const AnchorGrid anchors = generate_anchors(c.pyramid, 32);
        const SegmentList gt{{3.0, 13.0, 0.0}, {17.0, 30.0, 0.0}};
        const LabelAssignment labels = assign_labels(anchors, gt);
        const MinibatchSample sample = sample_minibatch(labels.labels, 5);
        ASSERT_GT(sample.positives, 0);
        testing::NamedParams named{{"x", &x}};
        p.visit([&](const std::string& n, Parameter<double>& q) { named.emplace_back(n, &q); });
        const auto res = testing::gradcheck(named, [&](Graph<double>& g) {
            const SppOutputs out = spp_forward(g, g.parameter(x), p, c);
            return spp_loss(g, out.scores, out.offsets, anchors, labels, sample, 0.5);
        }, testing::GradCheckOptions{1e-5});
        EXPECT_TRUE(res.passed(1e-4)) << (lateral ? "lateral " : "plain ") << res.worst;
    }
}

TEST(SppLoss, ClassificationOnlyWithoutPositives) {
    const AnchorGrid anchors = generate_anchors(PyramidConfig{}, 32);
    const LabelAssignment labels = assign_labels(anchors, {});
    const MinibatchSample sample = sample_minibatch(labels.labels, 1);
    Graph<double> g;
    const auto n = static_cast<Eigen::Index>(anchors.size());
    const Var loss = spp_loss(g, g.constant(Matrix<double>::Constant(n, 1, 0.5)), g.constant(Matrix<double>::Zero(n, 2)),
                              anchors, labels, sample);
    EXPECT_NEAR(g.value(loss)(0, 0), std::log(2.0), 1e-12);
}

// Hand-written version of the sampled loss over plain arrays.
double reference_spp_loss(const std::vector<double>& p, const std::vector<std::array<double, 2>>& w,
                          const AnchorGrid& anchors, const LabelAssignment& labels, const MinibatchSample& sample,
                          double gamma) {
    double ce = 0.0, reg = 0.0;
    int n_reg = 0;
    for (int i : sample.indices) {
        const auto& l = labels.labels[static_cast<std::size_t>(i)];
        const double q = p[static_cast<std::size_t>(i)];
        if (l.cls == AnchorClass::kPositive) {
            ce -= std::log(q);
            const Anchor& a = anchors[static_cast<std::size_t>(i)];
            const double tc = (l.matched_gt->center() - a.center) / a.length;
            const double tl = std::log(l.matched_gt->duration() / a.length);
            for (double d : {w[static_cast<std::size_t>(i)][0] - tc, w[static_cast<std::size_t>(i)][1] - tl}) {
                reg += std::abs(d) < 1.0 ? 0.5 * d * d : std::abs(d) - 0.5;
            }
            ++n_reg;
        } else {
            ce -= std::log(1.0 - q);
        }
    }
    return ce / static_cast<double>(sample.indices.size()) + (n_reg ? gamma * reg / n_reg : 0.0);
}

TEST(SppLoss, MatchesHandWrittenLoss) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::normal_distribution<double> n(0.0, 1.5);
    for (int trial = 0; trial < 100; ++trial) {
        AnchorGrid anchors;
        for (const Segment& s : random_segments(rng, 20, 80.0)) anchors.push_back({0, 0, 0, s.center(), s.duration()});
        const LabelAssignment labels = assign_labels(anchors, random_segments(rng, 1 + trial % 5, 80.0));
        const MinibatchSample sample = sample_minibatch(labels.labels, static_cast<std::uint64_t>(trial));
        if (sample.indices.empty()) continue;
        std::vector<double> p(20);
        std::vector<std::array<double, 2>> w(20);
        Matrix<double> pm(20, 1), wm(20, 2);
        for (int i = 0; i < 20; ++i) {
            p[static_cast<std::size_t>(i)] = pm(i, 0) = u(rng);
            w[static_cast<std::size_t>(i)] = {wm(i, 0) = n(rng), wm(i, 1) = n(rng)};
        }
        const double gamma = trial % 2 ? kRegressionWeight : 0.7;
        Graph<double> g;
        const Var loss = spp_loss(g, g.constant(pm), g.constant(wm), anchors, labels, sample, gamma);
        ASSERT_NEAR(g.value(loss)(0, 0), reference_spp_loss(p, w, anchors, labels, sample, gamma), 1e-10)
            << "trial " << trial;
    }
}

TEST(SppLoss, PerfectPredictionIsNearZero) {
    const AnchorGrid anchors{{0, 0, 0, 5.0, 10.0}, {0, 1, 0, 40.0, 10.0}};
    const SegmentList gt{{2.0, 12.0, 0.0}};
    const LabelAssignment labels = assign_labels(anchors, gt);
    const MinibatchSample sample = sample_minibatch(labels.labels, 1);
    ASSERT_EQ(sample.indices.size(), 2u);
    Matrix<double> p(2, 1), w = Matrix<double>::Zero(2, 2);
    p << 1.0 - 1e-9, 1e-9;
    const OffsetPair t = encode_offsets(anchors[0], gt[0]);
    w(0, 0) = t.center_shift;
    w(0, 1) = t.log_length_ratio;
    Graph<double> g;
    EXPECT_LT(g.value(spp_loss(g, g.constant(p), g.constant(w), anchors, labels, sample))(0, 0), 1e-6);
}

TEST(DecodeProposals, ScoresCarriedAndDegenerateDropped) {
    const AnchorGrid anchors{{0, 0, 0, 4.0, 8.0}, {0, 1, 0, 100.0, 8.0}};
    Matrix<double> scores(2, 1);
    scores << 0.9, 0.4;
    const SegmentList out = decode_proposals(anchors, scores, Matrix<double>(Matrix<double>::Zero(2, 2)), 32.0);
    ASSERT_EQ(out.size(), 1u);  // the second anchor clamps to an empty segment
    EXPECT_EQ(out[0], (Segment{0.0, 8.0, 0.9}));
}

}  // namespace
}  // namespace mgg::spp
