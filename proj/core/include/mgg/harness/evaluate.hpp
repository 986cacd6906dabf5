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

#include "mgg/harness/dataset.hpp"
#include "mgg/harness/infer.hpp"
#include "mgg/metrics.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace mgg::harness {

// Pairs proposals with annotations by video id. Every proposal id must exist
// in the dataset; dataset videos without proposals get an empty list.
std::vector<metrics::VideoEval> build_corpus(const Dataset& data, const std::vector<VideoProposals>& proposals);

metrics::EvalReport evaluate(const Dataset& data, const std::vector<VideoProposals>& proposals,
                             const metrics::EvalOptions& options);

nlohmann::json report_to_json(const metrics::EvalReport& report, const metrics::EvalOptions& options);

// Writes report.json, ar_an.csv, recall_tiou.csv, duration_recall.csv,
// ar_an.svg and recall_tiou.svg into out_dir (created if missing).
void write_eval_outputs(const std::string& out_dir, const metrics::EvalReport& report,
                        const metrics::EvalOptions& options);

// Formats a double with up to 10 significant digits.
std::string format_number(double v);

}  // namespace mgg::harness
