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

#include "oracles.hpp"

#include "mgg/tba.hpp"

#include <gtest/gtest.h>

#include <random>

namespace mgg::tba {
namespace {

SegmentList random_scored(std::mt19937_64& rng, int count, double length) {
    std::uniform_real_distribution<double> pos(0.0, length);
    std::uniform_int_distribution<int> score(0, 10);
    SegmentList out;
    while (static_cast<int>(out.size()) < count) {
        double a = std::round(pos(rng));
        double b = std::round(pos(rng));
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        out.push_back({a, b, score(rng) / 10.0});  // coarse scores force ties
    }
    return out;
}

std::vector<double> random_probs(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> level(0, 10);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (double& v : p) v = level(rng) / 10.0;
    return p;
}

TEST(Tiou, BasicCases) {
    EXPECT_DOUBLE_EQ(tiou({0, 10, 0}, {5, 15, 0}), 5.0 / 15.0);
    EXPECT_EQ(tiou({0, 10, 0}, {10, 20, 0}), 0.0);
    EXPECT_EQ(tiou({0, 10, 0}, {0, 10, 0}), 1.0);
    EXPECT_DOUBLE_EQ(tiou({2, 4, 0}, {0, 10, 0}), 0.2);
}

TEST(Tiou, MatchesOracleAndIsSymmetric) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 200; ++trial) {
        const SegmentList s = random_scored(rng, 2, 50.0);
        const double v = tiou(s[0], s[1]);
        ASSERT_DOUBLE_EQ(v, oracle::interval_iou(s[0], s[1]));
        ASSERT_EQ(v, tiou(s[1], s[0]));
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
    }
}

TEST(Nms, WorkedExample) {
    const SegmentList in{{0, 10, 0.9}, {1, 10, 0.8}, {20, 30, 0.7}, {0, 9, 0.95}};
    const SegmentList out = nms(in, 0.7);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0], in[3]);
    EXPECT_EQ(out[1], in[2]);
}

TEST(Nms, TiesBrokenByStartThenInputOrder) {
    const SegmentList in{{5, 8, 0.5}, {1, 3, 0.5}, {1, 3, 0.5}};
    const SegmentList out = nms(in, 0.7);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].t_s, 1.0);
    EXPECT_EQ(out[1].t_s, 5.0);
}

TEST(Nms, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> count(0, 50);
    for (int trial = 0; trial < 300; ++trial) {
        const SegmentList in = random_scored(rng, count(rng), 60.0);
        const double thr = trial % 3 == 0 ? 0.5 : 0.7;
        const SegmentList got = nms(in, thr);
        ASSERT_EQ(got, oracle::nms(in, thr)) << "trial " << trial;
        for (std::size_t i = 0; i < got.size(); ++i) {
            for (std::size_t j = i + 1; j < got.size(); ++j) ASSERT_LE(tiou(got[i], got[j]), thr);
        }
    }
}

TEST(Nms, Idempotent) {
    std::mt19937_64 rng(32);
    const SegmentList once = nms(random_scored(rng, 50, 80.0), 0.6);
    EXPECT_EQ(nms(once, 0.6), once);
}

TEST(SearchSpaces, WorkedExample) {
    const SearchSpaces s = search_spaces({20.0, 70.0, 0.0}, 5.0, 75.0);
    EXPECT_DOUBLE_EQ(s.start.lo, 10.0);
    EXPECT_DOUBLE_EQ(s.start.hi, 30.0);
    EXPECT_DOUBLE_EQ(s.end.lo, 60.0);
    EXPECT_DOUBLE_EQ(s.end.hi, 75.0);
    const SearchSpaces c = search_spaces({2.0, 12.0, 0.0}, 2.0, 100.0);
    EXPECT_DOUBLE_EQ(c.start.lo, 0.0);
    EXPECT_DOUBLE_EQ(c.start.hi, 7.0);
}

TEST(SearchSpaces, HundredToTwoHundred) {
    const SearchSpaces s = search_spaces({100.0, 200.0, 0.0}, 5.0, 1000.0);
    EXPECT_EQ(s.start.lo, 80.0);
    EXPECT_EQ(s.start.hi, 120.0);
    EXPECT_EQ(s.end.lo, 180.0);
    EXPECT_EQ(s.end.hi, 220.0);
}

TEST(Stage1, FullReplacementWithUnitDelta) {
    std::vector<double> ps(300, 0.0), pe(300, 0.0);
    ps[90] = 0.95;
    TbaConfig c;
    c.delta = 1.0;
    const SegmentList out = stage1_adjust({{100.0, 200.0, 0.3}}, ps, pe, c);
    EXPECT_EQ(out[0].t_s, 90.0);
    EXPECT_EQ(out[0].t_e, 200.0);
}

TEST(Stage1, FlatBelowSigmaIsIdentity) {
    const std::vector<double> p(120, 0.4);
    const SegmentList in{{10.0, 50.0, 0.7}, {60.0, 110.0, 0.2}};
    EXPECT_EQ(stage1_adjust(in, p, p, TbaConfig{}), in);
}

TEST(Stage1, BoundariesStayInsideSearchSpaces) {
    std::mt19937_64 rng(35);
    std::uniform_int_distribution<int> len(10, 80);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = len(rng);
        std::vector<double> ps(static_cast<std::size_t>(n)), pe(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            ps[static_cast<std::size_t>(i)] = u(rng);
            pe[static_cast<std::size_t>(i)] = u(rng);
        }
        TbaConfig c;
        c.delta = u(rng);
        c.sigma = u(rng);
        const SegmentList in = random_scored(rng, 20, n);
        const SegmentList out = stage1_adjust(in, ps, pe, c);
        ASSERT_EQ(out.size(), in.size());
        for (std::size_t i = 0; i < in.size(); ++i) {
            const SearchSpaces w = search_spaces(in[i], c.search_divisor, n);
            ASSERT_EQ(out[i].score, in[i].score);
            ASSERT_LT(out[i].t_s, out[i].t_e);
            if (out[i].t_s != in[i].t_s) {
                ASSERT_GE(out[i].t_s, std::min(w.start.lo, in[i].t_s) - 1e-12);
                ASSERT_LE(out[i].t_s, std::max(w.start.hi, in[i].t_s) + 1e-12);
            }
            if (out[i].t_e != in[i].t_e) {
                ASSERT_GE(out[i].t_e, std::min(w.end.lo, in[i].t_e) - 1e-12);
                ASSERT_LE(out[i].t_e, std::max(w.end.hi, in[i].t_e) + 1e-12);
            }
        }
        c.sigma = 1.0 + 1e-9;
        ASSERT_EQ(stage1_adjust(in, ps, pe, c), in);
    }
}

TEST(Stage1, BlendsTowardPeaks) {
    std::vector<double> ps(100, 0.1), pe(100, 0.1);
    ps[24] = 0.9;
    pe[66] = 0.7;
    pe[90] = 1.0;  // outside the end search space [60, 80]
    TbaConfig c;
    const SegmentList out = stage1_adjust({{20.0, 70.0, 0.4}}, ps, pe, c);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out[0].t_s, 22.0);
    EXPECT_DOUBLE_EQ(out[0].t_e, 68.0);
    EXPECT_EQ(out[0].score, 0.4);
}

TEST(Stage1, WeakPeakLeavesBoundary) {
    std::vector<double> ps(100, 0.2), pe(100, 0.2);
    ps[25] = 0.5;  // not above sigma
    pe[75] = 0.8;
    TbaConfig c;
    const SegmentList out = stage1_adjust({{20.0, 70.0, 0.4}}, ps, pe, c);
    EXPECT_EQ(out[0].t_s, 20.0);
    EXPECT_DOUBLE_EQ(out[0].t_e, 72.5);
}

TEST(Stage1, SigmaAboveOneDisables) {
    std::vector<double> p(50, 1.0);
    TbaConfig c;
    c.sigma = 1.5;
    const SegmentList in{{10.0, 30.0, 0.3}, {2.0, 5.0, 0.2}};
    EXPECT_EQ(stage1_adjust(in, p, p, c), in);
}

TEST(Stage1, FirstPeakWinsOnTies) {
    std::vector<double> ps(60, 0.0), pe(60, 0.0);
    ps[16] = ps[18] = 0.9;
    TbaConfig c;
    c.delta = 1.0;
    const SegmentList out = stage1_adjust({{20.0, 40.0, 0.0}}, ps, pe, c);
    EXPECT_EQ(out[0].t_s, 16.0);
}

TEST(Stage1, LengthMismatchRejected) {
    std::vector<double> a(10, 0.0), b(9, 0.0);
    EXPECT_THROW(stage1_adjust({}, a, b, TbaConfig{}), std::invalid_argument);
}

TEST(TbaConfig, Validation) {
    TbaConfig c;
    c.delta = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = TbaConfig{};
    c.search_divisor = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = TbaConfig{};
    c.sigma = 2.0;
    EXPECT_NO_THROW(c.validate());
}

TEST(TagGroup, WorkedExample) {
    const std::vector<double> p{0.1, 0.8, 0.9, 0.2, 0.7, 0.75, 0.1};
    TbaConfig c;
    c.group_thresholds = {0.5, 0.85};
    const SegmentList out = tag_group(p, c);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(out[0].t_s, 1.0);
    EXPECT_EQ(out[0].t_e, 3.0);
    EXPECT_DOUBLE_EQ(out[0].score, 0.85);
    EXPECT_EQ(out[1].t_s, 4.0);
    EXPECT_EQ(out[1].t_e, 6.0);
    EXPECT_DOUBLE_EQ(out[1].score, 0.725);
    EXPECT_EQ(out[2], (Segment{2.0, 3.0, 0.9}));
}

TEST(TagGroup, GapToleranceJoinsRuns) {
    const std::vector<double> p{0.9, 0.9, 0.1, 0.9, 0.1, 0.1, 0.9};
    TbaConfig c;
    c.group_thresholds = {0.5};
    c.gap_tolerance = 2;
    const SegmentList out = tag_group(p, c);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].t_s, 0.0);
    EXPECT_EQ(out[0].t_e, 4.0);
    EXPECT_EQ(out[1].t_s, 6.0);
}

TEST(TagGroup, SingleRun) {
    std::vector<double> p(20, 0.1);
    std::fill(p.begin(), p.begin() + 10, 0.9);
    TbaConfig c;
    c.group_thresholds = {0.5};
    const SegmentList out = tag_group(p, c);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].t_s, 0.0);
    EXPECT_EQ(out[0].t_e, 10.0);
    EXPECT_DOUBLE_EQ(out[0].score, 0.9);
}

TEST(TagGroup, NothingAboveThreshold) {
    const std::vector<double> p(20, 0.1);
    EXPECT_TRUE(tag_group(p, TbaConfig{}).empty());
}

TEST(TagGroup, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(33);
    std::uniform_int_distribution<int> len(1, 40);
    std::uniform_int_distribution<int> gap(0, 3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::vector<double> p = random_probs(rng, len(rng));
        TbaConfig c;
        c.gap_tolerance = gap(rng);
        const SegmentList got = tag_group(p, c);
        const SegmentList want = oracle::tag_group(p, c.group_thresholds, c.gap_tolerance);
        ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
        for (std::size_t i = 0; i < got.size(); ++i) {
            ASSERT_EQ(got[i].t_s, want[i].t_s);
            ASSERT_EQ(got[i].t_e, want[i].t_e);
            ASSERT_NEAR(got[i].score, want[i].score, 1e-9);
        }
    }
}

TEST(Stage2, SnapsOnlyAboveThreshold) {
    const SegmentList groups{{10.0, 20.0, 0.9}, {30.0, 60.0, 0.8}};
    const SegmentList segs{{10.0, 21.0, 0.5}, {30.0, 40.0, 0.4}};
    const SegmentList out = stage2_fuse(segs, groups);
    EXPECT_EQ(out[0], (Segment{10.0, 20.0, 0.5}));
    EXPECT_EQ(out[1], segs[1]);
}

TEST(Stage2, NoGroupsIsIdentity) {
    const SegmentList segs{{1.0, 5.0, 0.5}};
    EXPECT_EQ(stage2_fuse(segs, {}), segs);
}

TEST(Stage2, MatchesOracleOnRandomInstances) {
    std::mt19937_64 rng(34);
    std::uniform_int_distribution<int> count(0, 50);
    std::uniform_int_distribution<int> ng(0, 10);
    for (int trial = 0; trial < 300; ++trial) {
        const SegmentList segs = random_scored(rng, count(rng), 30.0);
        // reuse some segments, nudged, as groups so snaps actually happen
        SegmentList groups = random_scored(rng, ng(rng), 30.0);
        for (std::size_t i = 0; i < segs.size() && i < 5; ++i) groups.push_back({segs[i].t_s, segs[i].t_e + 1.0, 0.5});
        ASSERT_EQ(stage2_fuse(segs, groups), oracle::stage2(segs, groups)) << "trial " << trial;
    }
}

}  // namespace
}  // namespace mgg::tba
