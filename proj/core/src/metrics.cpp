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

#include "mgg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgg::metrics {

std::vector<double> threshold_range(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("threshold_range: step must be positive");
    std::vector<double> out;
    const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) {
        // rounded to 1e-12 so 0.5 + 9 * 0.05 prints and compares as 0.95
        out.push_back(std::round((lo + i * step) * 1e12) / 1e12);
    }
    return out;
}

std::vector<double> tiou_thresholds(TiouGrid grid) {
    return grid == TiouGrid::kThumos ? threshold_range(0.5, 1.0, 0.05) : threshold_range(0.5, 0.95, 0.05);
}

int greedy_matches(const SegmentList& proposals, const SegmentList& gt, std::size_t top_k, double theta) {
    std::vector<bool> taken(gt.size(), false);
    int matched = 0;
    const std::size_t n = std::min(top_k, proposals.size());
    for (std::size_t p = 0; p < n && matched < static_cast<int>(gt.size()); ++p) {
        double best = -1.0;
        std::size_t best_j = gt.size();
        for (std::size_t j = 0; j < gt.size(); ++j) {
            if (taken[j]) continue;
            const double v = tiou(proposals[p], gt[j]);
            if (v >= theta && v > best) {
                best = v;
                best_j = j;
            }
        }
        if (best_j < gt.size()) {
            taken[best_j] = true;
            ++matched;
        }
    }
    return matched;
}

namespace {

std::vector<bool> matched_mask(const SegmentList& proposals, const SegmentList& gt, std::size_t top_k, double theta) {
    std::vector<bool> taken(gt.size(), false);
    const std::size_t n = std::min(top_k, proposals.size());
    for (std::size_t p = 0; p < n; ++p) {
        double best = -1.0;
        std::size_t best_j = gt.size();
        for (std::size_t j = 0; j < gt.size(); ++j) {
            if (taken[j]) continue;
            const double v = tiou(proposals[p], gt[j]);
            if (v >= theta && v > best) {
                best = v;
                best_j = j;
            }
        }
        if (best_j < gt.size()) taken[best_j] = true;
    }
    return taken;
}

}  // namespace

double recall(std::span<const VideoEval> corpus, int an, double theta) {
    if (an < 0) throw std::invalid_argument("recall: AN must be non-negative");
    long total = 0;
    long hit = 0;
    for (const VideoEval& v : corpus) {
        total += static_cast<long>(v.gt.size());
        hit += greedy_matches(v.proposals, v.gt, static_cast<std::size_t>(an), theta);
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

double average_recall(std::span<const VideoEval> corpus, int an, std::span<const double> thresholds) {
    if (thresholds.empty()) throw std::invalid_argument("average_recall: empty threshold set");
    double acc = 0.0;
    for (double t : thresholds) acc += recall(corpus, an, t);
    return acc / static_cast<double>(thresholds.size());
}

std::vector<double> ar_an_curve(std::span<const VideoEval> corpus, std::span<const double> thresholds, int max_an) {
    if (max_an < 1) throw std::invalid_argument("ar_an_curve: max_an must be >= 1");
    std::vector<double> curve;
    curve.reserve(static_cast<std::size_t>(max_an));
    for (int an = 1; an <= max_an; ++an) curve.push_back(average_recall(corpus, an, thresholds));
    return curve;
}

double auc_from_curve(std::span<const double> ar) {
    if (ar.size() < 2) return ar.empty() ? 0.0 : 100.0 * ar.front();
    double area = 0.0;
    for (std::size_t i = 1; i < ar.size(); ++i) area += 0.5 * (ar[i - 1] + ar[i]);
    return 100.0 * area / static_cast<double>(ar.size() - 1);
}

double auc_ar_an(std::span<const VideoEval> corpus, std::span<const double> thresholds, int max_an) {
    const std::vector<double> curve = ar_an_curve(corpus, thresholds, max_an);
    return auc_from_curve(curve);
}

std::vector<BucketRecall> recall_by_duration(std::span<const VideoEval> corpus, int an, double theta,
                                             std::span<const DurationBucket> buckets) {
    std::vector<BucketRecall> acc;
    for (const DurationBucket& b : buckets) acc.push_back(BucketRecall{b, 0, 0, 0.0});
    for (const VideoEval& v : corpus) {
        const std::vector<bool> hit = matched_mask(v.proposals, v.gt, static_cast<std::size_t>(an), theta);
        for (std::size_t j = 0; j < v.gt.size(); ++j) {
            for (BucketRecall& b : acc) {
                if (!b.bucket.contains(v.gt[j].duration())) continue;
                ++b.gt_count;
                if (hit[j]) ++b.matched;
                break;
            }
        }
    }
    std::vector<BucketRecall> out;
    for (BucketRecall& b : acc) {
        if (b.gt_count == 0) continue;
        b.recall = static_cast<double>(b.matched) / static_cast<double>(b.gt_count);
        out.push_back(b);
    }
    return out;
}

EvalReport evaluate_corpus(std::span<const VideoEval> corpus, const EvalOptions& options) {
    const std::vector<double> thresholds = tiou_thresholds(options.grid);
    EvalReport report;
    report.ar_curve = ar_an_curve(corpus, thresholds, options.max_an);
    report.auc = auc_from_curve(report.ar_curve);
    for (int an : options.report_ans) report.ar_at_an[an] = average_recall(corpus, an, thresholds);
    for (int an : options.curve_ans) {
        for (double t : options.curve_thresholds) report.recall_curves[{an, t}] = recall(corpus, an, t);
    }
    report.duration_recall = recall_by_duration(corpus, options.duration_an, options.duration_tiou, options.buckets);
    return report;
}

}  // namespace mgg::metrics
