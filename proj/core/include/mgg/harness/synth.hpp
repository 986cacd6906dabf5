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

#include "mgg/harness/config.hpp"
#include "mgg/harness/dataset.hpp"

#include <random>
#include <vector>

namespace mgg::harness {

struct SynthSplits {
    Dataset train;
    Dataset val;
};

// Activation pattern of one action class: nonnegative amplitudes on a subset
// of the feature channels.
using Prototype = std::vector<float>;

std::vector<Prototype> make_prototypes(const SynthConfig& config, std::mt19937_64& rng);

// Non-overlapping integer intervals inside [0, length], at least min_gap apart
// and from both ends, sorted by start.
SegmentList place_instances(const SynthConfig& config, std::mt19937_64& rng);

// Per-frame signal strength in [0, 1] for frames [t_s, t_e) of one instance.
std::vector<float> instance_envelope(const SynthConfig& config, const Segment& instance, std::mt19937_64& rng);

SynthSplits synth_generate(const SynthConfig& config);

}  // namespace mgg::harness
