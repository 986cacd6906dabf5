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

#include "mgg/harness/checkpoint.hpp"
#include "mgg/harness/config.hpp"
#include "mgg/harness/dataset.hpp"
#include "mgg/harness/infer.hpp"
#include "mgg/harness/model.hpp"
#include "mgg/harness/train.hpp"
#include "mgg/metrics.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace mgg::harness {

ModelSpec model_spec(const Config& config, int feature_dim);
Seeds seeds(const Config& config);
int feature_dim_of(const Dataset& data);

// Builds a freshly initialized model, trains it, and saves the checkpoint when
// a path is given.
TrainResult train_and_save(const Config& config, const Dataset& train_set, const std::string& checkpoint_path,
                           std::ostream* log, Model<float>* trained = nullptr);

// Model built from the config and filled from a checkpoint whose fingerprint
// must agree with it.
Model<float> load_model(const Config& config, int feature_dim, const std::string& checkpoint_path);

struct AblationEntry {
    std::string label;
    std::string description;
    metrics::EvalReport report;
    long long parameters = 0;
    double train_seconds = 0.0;
};

struct AblationResult {
    std::vector<AblationEntry> variants;  // MGG, MGG-P, MGG-B, MGG-U, MGG-F, MGG-S
    std::vector<AblationEntry> tba;       // SPP path, + stage I, + stage I and II on the full model
};

// Trains every ablation variant on train_set, evaluates on val_set and writes
// per-variant outputs plus ablation.csv, ablation.md, tba.csv and
// duration_recall.csv into out_dir.
AblationResult run_ablation(const Config& config, const Dataset& train_set, const Dataset& val_set,
                            const std::string& out_dir, std::ostream* log);

}  // namespace mgg::harness
