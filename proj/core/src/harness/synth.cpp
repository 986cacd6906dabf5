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

#include "mgg/harness/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace mgg::harness {

namespace {

int draw_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double draw_duration(const SynthConfig& c, std::mt19937_64& rng) {
    const double lo = std::log(c.min_duration);
    const double hi = std::log(c.max_duration);
    const double d = std::exp(std::uniform_real_distribution<double>(lo, hi)(rng));
    return std::max(std::ceil(c.min_duration), std::round(d));
}

std::string video_id(const char* split, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%04d", split, index);
    return buf;
}

Video make_video(const SynthConfig& c, const std::vector<Prototype>& protos, std::string id, std::mt19937_64& rng) {
    Video v;
    v.id = std::move(id);
    v.features = seqgrad::Matrix<float>::Zero(c.length, c.feature_dim);
    v.annotations = place_instances(c, rng);
    for (const Segment& s : v.annotations) {
        const Prototype& p = protos[static_cast<std::size_t>(draw_int(rng, 0, static_cast<int>(protos.size()) - 1))];
        const std::vector<float> env = instance_envelope(c, s, rng);
        const int t0 = static_cast<int>(s.t_s);
        for (std::size_t i = 0; i < env.size(); ++i) {
            for (int ch = 0; ch < c.feature_dim; ++ch) v.features(t0 + static_cast<int>(i), ch) += env[i] * p[ch];
        }
    }
    if (c.noise > 0.0) {
        std::normal_distribution<float> noise(0.0f, static_cast<float>(c.noise));
        for (Eigen::Index i = 0; i < v.features.size(); ++i) v.features.data()[i] += noise(rng);
    }
    return v;
}

}  // namespace

std::vector<Prototype> make_prototypes(const SynthConfig& c, std::mt19937_64& rng) {
    std::vector<Prototype> out;
    std::vector<int> channels(static_cast<std::size_t>(c.feature_dim));
    std::iota(channels.begin(), channels.end(), 0);
    std::uniform_real_distribution<float> amp(0.8f, 1.5f);
    for (int p = 0; p < c.prototypes; ++p) {
        std::shuffle(channels.begin(), channels.end(), rng);
        Prototype proto(static_cast<std::size_t>(c.feature_dim), 0.0f);
        for (int k = 0; k < c.active_channels; ++k) proto[static_cast<std::size_t>(channels[k])] = amp(rng);
        out.push_back(std::move(proto));
    }
    return out;
}

SegmentList place_instances(const SynthConfig& c, std::mt19937_64& rng) {
    const int k = draw_int(rng, c.min_instances, c.max_instances);
    if (k == 0) return {};
    const int budget = c.length - (k + 1) * c.min_gap;
    std::vector<int> durations;
    for (int attempt = 0; attempt < 50; ++attempt) {
        durations.clear();
        for (int i = 0; i < k; ++i) durations.push_back(static_cast<int>(draw_duration(c, rng)));
        if (std::accumulate(durations.begin(), durations.end(), 0) <= budget) break;
    }
    // still too long: shrink the longest until it fits
    const int floor_d = static_cast<int>(std::ceil(c.min_duration));
    while (std::accumulate(durations.begin(), durations.end(), 0) > budget) {
        auto it = std::max_element(durations.begin(), durations.end());
        const int excess = std::accumulate(durations.begin(), durations.end(), 0) - budget;
        *it = std::max(floor_d, *it - excess);
    }
    const int free = budget - std::accumulate(durations.begin(), durations.end(), 0);
    std::vector<int> cuts;
    for (int i = 0; i < k; ++i) cuts.push_back(draw_int(rng, 0, free));
    std::sort(cuts.begin(), cuts.end());
    SegmentList out;
    int prev_cut = 0;
    int cursor = 0;
    for (int i = 0; i < k; ++i) {
        cursor += c.min_gap + (cuts[i] - prev_cut);
        prev_cut = cuts[i];
        out.push_back({static_cast<double>(cursor), static_cast<double>(cursor + durations[i]), 0.0});
        cursor += durations[i];
    }
    return out;
}

std::vector<float> instance_envelope(const SynthConfig& c, const Segment& s, std::mt19937_64& rng) {
    const int d = static_cast<int>(s.t_e - s.t_s);
    std::vector<float> env(static_cast<std::size_t>(d), 1.0f);
    if (c.pattern == PatternKind::kBlock) return env;
    const float r = static_cast<float>(c.ramp + 1);
    for (int i = 0; i < d; ++i) {
        env[i] = std::min({1.0f, static_cast<float>(i + 1) / r, static_cast<float>(d - i) / r});
    }
    if (c.pattern == PatternKind::kSegmented && d >= c.pause_min_duration) {
        const int len = std::max(c.pause_min_length, static_cast<int>(c.pause_fraction * d));
        // keep at least a fifth of the instance active on either side
        const int lo = std::max(1, d / 5);
        const int hi = std::max(lo, d - d / 5 - len);
        const int at = draw_int(rng, lo, hi);
        for (int i = at; i < at + len && i < d - 1; ++i) env[i] = static_cast<float>(c.pause_level);
    }
    return env;
}

SynthSplits synth_generate(const SynthConfig& config) {
    config.validate();
    std::mt19937_64 rng(config.seed);
    const std::vector<Prototype> protos = make_prototypes(config, rng);
    SynthSplits out;
    for (int i = 0; i < config.train_videos; ++i) out.train.push_back(make_video(config, protos, video_id("train", i), rng));
    for (int i = 0; i < config.val_videos; ++i) out.val.push_back(make_video(config, protos, video_id("val", i), rng));
    return out;
}

}  // namespace mgg::harness
