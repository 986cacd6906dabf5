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
#include "mgg/seqgrad/conv_params.hpp"
#include "mgg/seqgrad/graph.hpp"

#include <random>
#include <vector>

namespace mgg::fap {

// Boundary regions extend duration / eta around each start and end.
inline constexpr double kBoundaryRatio = 10.0;

struct FapConfig {
    int input_dim = 512;
    int hidden = 64;
    int kernel = 3;

    void validate() const;
};

// Conv(hidden, k, ReLU) -> Conv(1, k, Sigmoid).
template <typename S>
struct FapHeadParams {
    seqgrad::ConvParams<S> conv1;
    seqgrad::ConvParams<S> conv2;
};

// Three unshared heads for start, end and middle probabilities.
template <typename S>
struct FapParams {
    FapHeadParams<S> start;
    FapHeadParams<S> end;
    FapHeadParams<S> middle;

    static FapParams init(const FapConfig& config, std::mt19937_64& rng);

    template <typename F>
    void visit(F&& f) {
        start.conv1.visit("start.conv1", f);
        start.conv2.visit("start.conv2", f);
        end.conv1.visit("end.conv1", f);
        end.conv2.visit("end.conv2", f);
        middle.conv1.visit("middle.conv1", f);
        middle.conv2.visit("middle.conv2", f);
    }
};

// Graph handles for P_s, P_e, P_m (each length x 1).
struct ActionnessVars {
    seqgrad::Var start;
    seqgrad::Var end;
    seqgrad::Var middle;
};

// Plain probability sequences, typically read back after a forward pass.
struct ActionnessTriple {
    std::vector<double> start;
    std::vector<double> end;
    std::vector<double> middle;

    std::size_t length() const { return middle.size(); }
};

template <typename S>
ActionnessVars fap_forward(seqgrad::Graph<S>& g, seqgrad::Var input, FapParams<S>& params, const FapConfig& config);

template <typename S>
ActionnessTriple read_actionness(const seqgrad::Graph<S>& g, const ActionnessVars& vars, std::size_t valid_length);

// Binary frame labels. Frame n (integer) belongs to a region [a, b] iff a <= n <= b.
struct FrameLabels {
    std::vector<double> start;
    std::vector<double> end;
    std::vector<double> middle;
    std::vector<double> valid;  // 1 for real frames, 0 for padding

    std::size_t length() const { return middle.size(); }
};

// Start region [t_s - d/eta, t_s + d/eta], end region [t_e - d/eta, t_e + d/eta],
// middle region [t_s, t_e]; regions of different instances are unioned. Frames
// at or beyond `valid_length` are marked invalid.
FrameLabels assign_frame_labels(const SegmentList& gt, int length, double eta = kBoundaryRatio,
                                int valid_length = -1);

struct FapLossWeights {
    double start = 1.0;
    double end = 1.0;
    double middle = 1.0;
};

struct FapLossTerms {
    seqgrad::Var start;
    seqgrad::Var end;
    seqgrad::Var middle;
    seqgrad::Var total;
};

// lambda_s L_s + lambda_e L_e + lambda_m L_m; each term is a weighted BCE with
// inverse class frequency weights computed over the valid frames of that sequence.
template <typename S>
FapLossTerms fap_loss(seqgrad::Graph<S>& g, const ActionnessVars& vars, const FrameLabels& labels,
                      const FapLossWeights& lambdas = {});

}  // namespace mgg::fap
