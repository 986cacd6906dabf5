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

#include <algorithm>
#include <vector>

namespace mgg {

// Half-open interval [t_s, t_e) in frame units with a confidence score.
struct Segment {
    double t_s = 0.0;
    double t_e = 0.0;
    double score = 0.0;

    double duration() const { return t_e - t_s; }
    double center() const { return 0.5 * (t_s + t_e); }
    bool valid_within(double length) const { return 0.0 <= t_s && t_s < t_e && t_e <= length; }

    friend bool operator==(const Segment&, const Segment&) = default;
};

using SegmentList = std::vector<Segment>;

// Temporal intersection-over-union. Touching or disjoint intervals give 0.
inline double tiou(const Segment& a, const Segment& b) {
    const double inter = std::max(0.0, std::min(a.t_e, b.t_e) - std::max(a.t_s, b.t_s));
    if (inter <= 0.0) return 0.0;
    const double uni = a.duration() + b.duration() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

}  // namespace mgg
