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

#include "mgg/seqgrad/graph.hpp"

#include <Eigen/Core>

namespace mgg::embed {

// Sinusoidal frame-position table. Row r describes frame n = r + 1:
//   table(r, 2i)     = sin(n / 10000^(2i / dim))
//   table(r, 2i + 1) = cos(n / 10000^(2i / dim))
class PositionEmbedding {
   public:
    PositionEmbedding(int length, int dim);

    int length() const { return static_cast<int>(table_.rows()); }
    int dim() const { return static_cast<int>(table_.cols()); }
    const seqgrad::Matrix<double>& table() const { return table_; }

   private:
    seqgrad::Matrix<double> table_;
};

PositionEmbedding build_embedding(int length, int dim);

// Row-wise [features | embedding]. Columns [0, d_f) are the raw features.
template <typename S>
struct FusedRepresentation {
    seqgrad::Matrix<S> values;
    int feature_dim = 0;

    int dim() const { return static_cast<int>(values.cols()); }
    int length() const { return static_cast<int>(values.rows()); }
};

template <typename S>
FusedRepresentation<S> fuse(const seqgrad::Matrix<S>& features, const PositionEmbedding& embedding);

// Position-free representation used when the position ablation is active.
template <typename S>
FusedRepresentation<S> features_only(const seqgrad::Matrix<S>& features);

}  // namespace mgg::embed
