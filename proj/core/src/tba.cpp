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

#include "mgg/tba.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mgg::tba {

void TbaConfig::validate() const {
    if (!(search_divisor > 0.0)) throw std::invalid_argument("tba: search_divisor must be positive");
    // sigma > 1 is accepted and disables stage I
    if (!(sigma >= 0.0)) throw std::invalid_argument("tba: sigma must be non-negative");
    if (delta < 0.0 || delta > 1.0) throw std::invalid_argument("tba: delta must be in [0, 1]");
    if (nms_tiou < 0.0 || nms_tiou > 1.0) throw std::invalid_argument("tba: nms_tiou must be in [0, 1]");
    if (gap_tolerance < 0) throw std::invalid_argument("tba: gap_tolerance must be >= 0");
}

SegmentList nms(const SegmentList& segments, double threshold) {
    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (segments[a].score != segments[b].score) return segments[a].score > segments[b].score;
        return segments[a].t_s < segments[b].t_s;
    });
    SegmentList kept;
    for (std::size_t idx : order) {
        const Segment& cand = segments[idx];
        const bool suppressed =
            std::any_of(kept.begin(), kept.end(), [&](const Segment& k) { return tiou(k, cand) > threshold; });
        if (!suppressed) kept.push_back(cand);
    }
    return kept;
}

SearchSpaces search_spaces(const Segment& segment, double search_divisor, double length) {
    const double reach = segment.duration() / search_divisor;
    auto clip = [length](double lo, double hi) {
        return SearchWindow{std::clamp(lo, 0.0, length), std::clamp(hi, 0.0, length)};
    };
    return {clip(segment.t_s - reach, segment.t_s + reach), clip(segment.t_e - reach, segment.t_e + reach)};
}

namespace {

struct Peak {
    bool found = false;
    double frame = 0.0;
    double value = 0.0;
};

// First maximal frame n with lo <= n <= hi.
Peak peak_in(std::span<const double> prob, const SearchWindow& w) {
    Peak p;
    if (prob.empty()) return p;
    const long first = std::max(0L, static_cast<long>(std::ceil(w.lo)));
    const long last = std::min(static_cast<long>(prob.size()) - 1, static_cast<long>(std::floor(w.hi)));
    for (long n = first; n <= last; ++n) {
        const double v = prob[static_cast<std::size_t>(n)];
        if (!p.found || v > p.value) {
            p = {true, static_cast<double>(n), v};
        }
    }
    return p;
}

}  // namespace

SegmentList stage1_adjust(const SegmentList& segments, std::span<const double> start_prob,
                          std::span<const double> end_prob, const TbaConfig& config) {
    config.validate();
    if (start_prob.size() != end_prob.size()) {
        throw std::invalid_argument("stage1_adjust: start and end sequences differ in length");
    }
    const auto length = static_cast<double>(start_prob.size());
    SegmentList out;
    out.reserve(segments.size());
    for (const Segment& seg : segments) {
        Segment adjusted = seg;
        const SearchSpaces spaces = search_spaces(seg, config.search_divisor, length);
        const Peak ps = peak_in(start_prob, spaces.start);
        const Peak pe = peak_in(end_prob, spaces.end);
        if (ps.found && ps.value > config.sigma) adjusted.t_s = config.delta * ps.frame + (1.0 - config.delta) * seg.t_s;
        if (pe.found && pe.value > config.sigma) adjusted.t_e = config.delta * pe.frame + (1.0 - config.delta) * seg.t_e;
        out.push_back(adjusted.t_s < adjusted.t_e ? adjusted : seg);
    }
    return out;
}

SegmentList tag_group(std::span<const double> middle_prob, const TbaConfig& config) {
    SegmentList out;
    const std::size_t n = middle_prob.size();
    auto span_mean = [&](std::size_t a, std::size_t b) {
        double s = 0.0;
        for (std::size_t i = a; i <= b; ++i) s += middle_prob[i];
        return s / static_cast<double>(b - a + 1);
    };
    for (double tau : config.group_thresholds) {
        // maximal runs as inclusive frame ranges
        std::vector<std::pair<std::size_t, std::size_t>> runs;
        std::size_t i = 0;
        while (i < n) {
            if (middle_prob[i] < tau) {
                ++i;
                continue;
            }
            std::size_t j = i;
            while (j + 1 < n && middle_prob[j + 1] >= tau) ++j;
            const std::size_t gap = runs.empty() ? 0 : i - runs.back().second - 1;
            if (!runs.empty() && gap < static_cast<std::size_t>(config.gap_tolerance)) {
                runs.back().second = j;
            } else {
                runs.emplace_back(i, j);
            }
            i = j + 1;
        }
        for (const auto& [a, b] : runs) {
            const Segment s{static_cast<double>(a), static_cast<double>(b + 1), span_mean(a, b)};
            const bool dup = std::any_of(out.begin(), out.end(),
                                         [&](const Segment& o) { return o.t_s == s.t_s && o.t_e == s.t_e; });
            if (!dup) out.push_back(s);
        }
    }
    return out;
}

SegmentList stage2_fuse(const SegmentList& segments, const SegmentList& groups) {
    SegmentList out = segments;
    if (groups.empty()) return out;
    for (Segment& seg : out) {
        double best = -1.0;
        std::size_t best_idx = 0;
        for (std::size_t j = 0; j < groups.size(); ++j) {
            const double v = tiou(seg, groups[j]);
            if (v > best) {
                best = v;
                best_idx = j;
            }
        }
        if (best > kStage2Tiou) {
            seg.t_s = groups[best_idx].t_s;
            seg.t_e = groups[best_idx].t_e;
        }
    }
    return out;
}

}  // namespace mgg::tba
