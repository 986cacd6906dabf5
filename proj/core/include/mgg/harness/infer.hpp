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
#include "mgg/harness/model.hpp"
#include "mgg/segment.hpp"

#include <string>
#include <vector>

namespace mgg::harness {

enum class InferPath {
    kFull,     // SPP decode, NMS, stage I, stage II
    kSppOnly,  // MGG-F: SPP decode and NMS
    kFapOnly,  // MGG-S: grouped middle probabilities ranked by score
};

InferPath infer_path(const AblationFlags& flags);
const char* to_string(InferPath path);

struct VideoProposals {
    std::string video_id;
    SegmentList proposals;  // score descending
};

// Sorts by score descending, then t_s ascending; stable otherwise.
void rank_proposals(SegmentList& proposals);

VideoProposals infer_video(Model<float>& model, const Video& video, InferPath path, const InferConfig& config);
std::vector<VideoProposals> infer_dataset(Model<float>& model, const Dataset& data, InferPath path,
                                          const InferConfig& config);

// One JSON object per line: {"video_id", "t_s", "t_e", "score"}.
void write_proposals(const std::vector<VideoProposals>& proposals, const std::string& path);
// Groups lines by video in order of first appearance.
std::vector<VideoProposals> read_proposals(const std::string& path);

}  // namespace mgg::harness
