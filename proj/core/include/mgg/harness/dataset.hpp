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
#include "mgg/seqgrad/graph.hpp"

#include <string>
#include <vector>

namespace mgg::harness {

struct Video {
    std::string id;
    seqgrad::Matrix<float> features;  // length x feature_dim
    SegmentList annotations;          // scores unused

    int length() const { return static_cast<int>(features.rows()); }
    int feature_dim() const { return static_cast<int>(features.cols()); }
};

using Dataset = std::vector<Video>;

// Manifest: one JSON object per line,
//   {"video_id", "l_s", "d_f", "feature_file", "annotations": [[t_s, t_e], ...]}
// with feature_file relative to the manifest directory, holding raw
// little-endian float32 values, row-major time x channels.
void write_dataset(const Dataset& videos, const std::string& manifest_path, const std::string& feature_subdir = "features");
Dataset read_dataset(const std::string& manifest_path);

void write_features(const seqgrad::Matrix<float>& features, const std::string& path);
seqgrad::Matrix<float> read_features(const std::string& path, int length, int dim);

}  // namespace mgg::harness
