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

#include "mgg/embed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mgg::embed {

PositionEmbedding::PositionEmbedding(int length, int dim) {
    if (length < 1) throw std::invalid_argument("position embedding: length must be >= 1");
    if (dim < 2 || dim % 2 != 0) {
        throw std::invalid_argument("position embedding: dimension must be even and >= 2, got " + std::to_string(dim));
    }
    table_.resize(length, dim);
    for (int i = 0; 2 * i < dim; ++i) {
        const double wavelength = std::pow(10000.0, static_cast<double>(2 * i) / static_cast<double>(dim));
        for (int r = 0; r < length; ++r) {
            const double angle = static_cast<double>(r + 1) / wavelength;
            table_(r, 2 * i) = std::sin(angle);
            table_(r, 2 * i + 1) = std::cos(angle);
        }
    }
}

PositionEmbedding build_embedding(int length, int dim) { return PositionEmbedding(length, dim); }

template <typename S>
FusedRepresentation<S> fuse(const seqgrad::Matrix<S>& features, const PositionEmbedding& embedding) {
    if (features.rows() != embedding.length()) {
        throw std::invalid_argument("fuse: feature sequence has " + std::to_string(features.rows()) +
                                    " frames but the embedding covers " + std::to_string(embedding.length()));
    }
    FusedRepresentation<S> out;
    out.feature_dim = static_cast<int>(features.cols());
    out.values.resize(features.rows(), features.cols() + embedding.dim());
    out.values.leftCols(features.cols()) = features;
    out.values.rightCols(embedding.dim()) = embedding.table().cast<S>();
    return out;
}

template <typename S>
FusedRepresentation<S> features_only(const seqgrad::Matrix<S>& features) {
    return FusedRepresentation<S>{features, static_cast<int>(features.cols())};
}

template FusedRepresentation<float> fuse<float>(const seqgrad::Matrix<float>&, const PositionEmbedding&);
template FusedRepresentation<double> fuse<double>(const seqgrad::Matrix<double>&, const PositionEmbedding&);
template FusedRepresentation<float> features_only<float>(const seqgrad::Matrix<float>&);
template FusedRepresentation<double> features_only<double>(const seqgrad::Matrix<double>&);

}  // namespace mgg::embed
