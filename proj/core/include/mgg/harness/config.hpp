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

#include "mgg/metrics.hpp"
#include "mgg/tba.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mgg::harness {

enum class PatternKind {
    kBlock,      // constant channel-subspace activation over the instance
    kRamp,       // linear onset and offset ramps
    kSegmented,  // ramps, plus a low-signal pause inside long instances
};

struct SynthConfig {
    int train_videos = 200;
    int val_videos = 50;
    int length = 256;      // l_s
    int feature_dim = 16;  // d_f
    int min_instances = 1;
    int max_instances = 4;
    double min_duration = 8.0;
    double max_duration = 96.0;  // durations are log-uniform in [min, max]
    int min_gap = 2;
    int prototypes = 4;
    int active_channels = 4;  // channels carrying one prototype
    PatternKind pattern = PatternKind::kSegmented;
    int ramp = 2;
    double pause_min_duration = 32.0;  // instances at least this long get a pause
    double pause_fraction = 0.3;       // pause length relative to the instance
    int pause_min_length = 8;
    double pause_level = 0.1;  // envelope value inside the pause
    double noise = 0.5;
    std::uint64_t seed = 7;

    void validate() const;
};

struct ModelConfig {
    int position_dim = 32;  // d_p
    int hidden = 64;        // d_h
    int rank = 16;          // g
    int basenet_kernel = 5;
    int levels = 3;  // M
    int base_stride = 8;
    std::vector<double> scales{1.0, 1.5, 2.0};
    int head_kernel = 3;
    bool share_heads = false;
    int fap_hidden = 64;
    int fap_kernel = 3;

    void validate() const;
};

struct AblationFlags {
    bool disable_position = false;  // MGG-P
    bool disable_bilinear = false;  // MGG-B
    bool disable_lateral = false;   // MGG-U
    bool spp_only = false;          // MGG-F
    bool fap_only = false;          // MGG-S

    void validate() const;
    std::string label() const;
};

struct TrainConfig {
    int epochs = 30;
    int batch = 4;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    double beta = 0.1;  // weight of the FAP loss
    bool stagewise = false;
    std::uint64_t seed = 1;

    void validate() const;
};

struct InferConfig {
    bool stage1 = true;
    bool stage2 = true;
    tba::TbaConfig tba;
};

struct EvalConfig {
    metrics::EvalOptions options;
};

struct Config {
    SynthConfig synth;
    ModelConfig model;
    AblationFlags flags;
    TrainConfig train;
    InferConfig infer;
    EvalConfig eval;

    void validate() const;

    // Missing keys keep their defaults; unknown keys are rejected.
    static Config from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static Config load(const std::string& path);

    // Layer sizes at 512 and g = 32.
    static Config large_preset();
};

std::string to_string(PatternKind kind);
PatternKind pattern_from_string(const std::string& name);

}  // namespace mgg::harness
