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

#include <span>
#include <vector>

namespace mgg::tba {

// Temporal boundary adjustment: fuses segment proposals with frame actionness.

// A segment takes a group's boundaries only above this overlap.
inline constexpr double kStage2Tiou = 0.8;

struct TbaConfig {
    double nms_tiou = 0.7;
    double search_divisor = 5.0;  // epsilon
    double sigma = 0.5;           // actionness threshold
    double delta = 0.5;           // weight of the actionness peak in the blended boundary
    std::vector<double> group_thresholds{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    int gap_tolerance = 1;  // runs separated by fewer frames are merged

    void validate() const;
};

// Greedy NMS. Order: score descending, then t_s ascending, then input order.
// A segment is dropped when its tIoU with a kept one exceeds `threshold`.
SegmentList nms(const SegmentList& segments, double threshold);

struct SearchWindow {
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchSpaces {
    SearchWindow start;
    SearchWindow end;
};

// [t - d/epsilon, t + d/epsilon] around each boundary, clipped to [0, length].
SearchSpaces search_spaces(const Segment& segment, double search_divisor, double length);

// Stage I. Each boundary independently moves to delta * t_max + (1 - delta) * t
// when the peak start (end) probability in its search space exceeds sigma.
SegmentList stage1_adjust(const SegmentList& segments, std::span<const double> start_prob,
                          std::span<const double> end_prob, const TbaConfig& config);

// Thresholded grouping of the middle probabilities. For each threshold, runs of
// frames with p >= threshold (frames a..b become [a, b + 1)) are candidates;
// the score is the mean probability over the span. Duplicates across
// thresholds are removed by exact boundaries, keeping the first.
SegmentList tag_group(std::span<const double> middle_prob, const TbaConfig& config);

// Stage II. A segment whose best tIoU with any group exceeds 0.8 takes that
// group's boundaries (earliest group on ties) and keeps its own score.
SegmentList stage2_fuse(const SegmentList& segments, const SegmentList& groups);

}  // namespace mgg::tba
