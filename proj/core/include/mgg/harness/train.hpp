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

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace mgg::harness {

class TrainingDiverged : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class Adam {
   public:
    Adam(std::vector<seqgrad::Parameter<float>*> params, const TrainConfig& config);

    void zero_grad();
    void step();
    long long steps() const { return t_; }

   private:
    std::vector<seqgrad::Parameter<float>*> params_;
    std::vector<seqgrad::Matrix<float>> m_, v_;
    double lr_, beta1_, beta2_, eps_;
    long long t_ = 0;
};

struct LossSummary {
    double joint = 0.0;
    double spp = 0.0;
    double fap = 0.0;
};

struct EpochLog {
    int epoch = 0;
    LossSummary loss;  // running mean over the epoch
    double seconds = 0.0;
};

struct PhaseResult {
    Branch branch = Branch::kBoth;
    LossSummary initial;  // forward-only pass before the first update
    LossSummary final;    // same pass, same samples, after the last update
    std::vector<EpochLog> epochs;
};

struct TrainResult {
    std::vector<PhaseResult> phases;
    double seconds = 0.0;
};

// Branch optimized under the ablation flags.
Branch training_branch(const AblationFlags& flags);

// Mean losses over the dataset without updating anything. Anchor samples are
// drawn from (seed, epoch 0, video index).
LossSummary dataset_loss(Model<float>& model, const Dataset& data, Branch branch, double beta, std::uint64_t seed);

// Mini-batch Adam on the joint objective. Stagewise mode runs an SPP-only
// phase, then a FAP-only phase on the second trunk. Per-epoch lines go to log
// when given. Throws TrainingDiverged on a non-finite loss.
TrainResult train(Model<float>& model, const Dataset& data, const TrainConfig& config, Branch branch,
                  std::ostream* log = nullptr);

}  // namespace mgg::harness
