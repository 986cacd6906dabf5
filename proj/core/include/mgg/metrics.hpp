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

#include <limits>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mgg::metrics {

using mgg::tiou;

enum class TiouGrid {
    kThumos,       // 0.50, 0.55, ..., 1.00
    kActivityNet,  // 0.50, 0.55, ..., 0.95
};

std::vector<double> tiou_thresholds(TiouGrid grid);
// lo, lo + step, ... up to hi inclusive (with rounding tolerance).
std::vector<double> threshold_range(double lo, double hi, double step);

struct VideoEval {
    SegmentList proposals;  // ranked, best first
    SegmentList gt;
};

// One-to-one greedy matching: proposals are visited in rank order (first
// `top_k` only) and each takes the unmatched gt with the highest tIoU >= theta,
// lowest index on ties. Returns the number of matched gt.
int greedy_matches(const SegmentList& proposals, const SegmentList& gt, std::size_t top_k, double theta);

// Matched gt over all gt in the corpus, using the top `an` proposals per video.
double recall(std::span<const VideoEval> corpus, int an, double theta);

// Mean of recall() over `thresholds`. Zero if the corpus has no gt.
double average_recall(std::span<const VideoEval> corpus, int an, std::span<const double> thresholds);

// AR at AN = 1..max_an.
std::vector<double> ar_an_curve(std::span<const VideoEval> corpus, std::span<const double> thresholds, int max_an = 100);

// Trapezoidal area under AR over the AN grid 1..max_an, as a percentage of the
// unit box (so AR == 1 everywhere gives 100).
double auc_from_curve(std::span<const double> ar);
double auc_ar_an(std::span<const VideoEval> corpus, std::span<const double> thresholds, int max_an = 100);

struct DurationBucket {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();  // exclusive
    std::string label;

    bool contains(double d) const { return lo <= d && d < hi; }
};

struct BucketRecall {
    DurationBucket bucket;
    int gt_count = 0;
    int matched = 0;
    double recall = 0.0;
};

// Recall restricted to gt whose duration falls in each bucket. Matching is the
// same greedy pass over all gt of the video. Buckets with no gt are omitted.
std::vector<BucketRecall> recall_by_duration(std::span<const VideoEval> corpus, int an, double theta,
                                             std::span<const DurationBucket> buckets);

struct EvalReport {
    std::map<int, double> ar_at_an;
    double auc = 0.0;
    std::vector<double> ar_curve;                        // AN = 1..max_an
    std::map<std::pair<int, double>, double> recall_curves;  // (AN, tIoU) -> recall
    std::vector<BucketRecall> duration_recall;
};

struct EvalOptions {
    TiouGrid grid = TiouGrid::kActivityNet;
    int max_an = 100;
    std::vector<int> report_ans{1, 5, 10, 30, 50, 80, 100, 200, 500, 1000};
    std::vector<int> curve_ans{10, 50, 100};
    std::vector<double> curve_thresholds = threshold_range(0.05, 1.0, 0.05);
    int duration_an = 100;
    double duration_tiou = 0.75;
    std::vector<DurationBucket> buckets{
        {0.0, 16.0, "0-16"}, {16.0, 32.0, "16-32"}, {32.0, 64.0, "32-64"},
        {64.0, std::numeric_limits<double>::infinity(), "64+"}};
};

EvalReport evaluate_corpus(std::span<const VideoEval> corpus, const EvalOptions& options);

}  // namespace mgg::metrics
