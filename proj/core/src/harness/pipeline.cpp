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

#include "mgg/harness/pipeline.hpp"

#include "mgg/harness/evaluate.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mgg::harness {

namespace fs = std::filesystem;

ModelSpec model_spec(const Config& config, int feature_dim) {
    ModelSpec s;
    s.model = config.model;
    s.flags = config.flags;
    s.stagewise = config.train.stagewise;
    s.feature_dim = feature_dim;
    s.validate();
    return s;
}

Seeds seeds(const Config& config) { return {config.synth.seed, config.train.seed}; }

int feature_dim_of(const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("dataset is empty");
    const int d = data.front().feature_dim();
    for (const Video& v : data) {
        if (v.feature_dim() != d) throw std::invalid_argument("dataset: video " + v.id + " has a different d_f");
    }
    return d;
}

TrainResult train_and_save(const Config& config, const Dataset& train_set, const std::string& checkpoint_path,
                           std::ostream* log, Model<float>* trained) {
    config.validate();
    const ModelSpec spec = model_spec(config, feature_dim_of(train_set));
    Model<float> model(spec, config.train.seed);
    TrainResult result = train(model, train_set, config.train, training_branch(config.flags), log);
    if (!checkpoint_path.empty()) save_checkpoint(checkpoint_path, model, fingerprint(spec, seeds(config)));
    if (trained) *trained = std::move(model);
    return result;
}

Model<float> load_model(const Config& config, int feature_dim, const std::string& checkpoint_path) {
    const ModelSpec spec = model_spec(config, feature_dim);
    Model<float> model(spec, config.train.seed);
    load_checkpoint(checkpoint_path, model, fingerprint(spec, seeds(config)));
    return model;
}

namespace {

struct Variant {
    const char* label;
    const char* description;
    AblationFlags flags;
};

std::vector<Variant> variants() {
    std::vector<Variant> v;
    v.push_back({"MGG", "full model", {}});
    v.push_back({"MGG-P", "no position embedding", {}});
    v.back().flags.disable_position = true;
    v.push_back({"MGG-B", "no bilinear matching", {}});
    v.back().flags.disable_bilinear = true;
    v.push_back({"MGG-U", "no lateral connections", {}});
    v.back().flags.disable_lateral = true;
    v.push_back({"MGG-F", "SPP only", {}});
    v.back().flags.spp_only = true;
    v.push_back({"MGG-S", "FAP only", {}});
    v.back().flags.fap_only = true;
    return v;
}

double ar_at(const metrics::EvalReport& r, int an) {
    auto it = r.ar_at_an.find(an);
    return it == r.ar_at_an.end() ? 0.0 : it->second;
}

void write_tables(const std::string& out_dir, const AblationResult& res) {
    const fs::path dir(out_dir);
    {
        std::ofstream csv(dir / "ablation.csv", std::ios::trunc);
        std::ofstream md(dir / "ablation.md", std::ios::trunc);
        csv << "method,description,parameters,ar_at_10,ar_at_50,ar_at_100,auc\n";
        md << "| Method | Description | Parameters | AR@10 | AR@50 | AR@100 | AUC |\n";
        md << "|---|---|---:|---:|---:|---:|---:|\n";
        for (const AblationEntry& e : res.variants) {
            char row[256];
            std::snprintf(row, sizeof(row), "%s,%s,%lld,%.4f,%.4f,%.4f,%.2f\n", e.label.c_str(),
                          e.description.c_str(), e.parameters, ar_at(e.report, 10), ar_at(e.report, 50),
                          ar_at(e.report, 100), e.report.auc);
            csv << row;
            std::snprintf(row, sizeof(row), "| %s | %s | %lld | %.4f | %.4f | %.4f | %.2f |\n", e.label.c_str(),
                          e.description.c_str(), e.parameters, ar_at(e.report, 10), ar_at(e.report, 50),
                          ar_at(e.report, 100), e.report.auc);
            md << row;
        }
    }
    {
        std::ofstream csv(dir / "tba.csv", std::ios::trunc);
        csv << "method,ar_at_10,ar_at_100,auc\n";
        for (const AblationEntry& e : res.tba) {
            char row[200];
            std::snprintf(row, sizeof(row), "%s,%.4f,%.4f,%.2f\n", e.label.c_str(), ar_at(e.report, 10),
                          ar_at(e.report, 100), e.report.auc);
            csv << row;
        }
    }
    {
        std::ofstream csv(dir / "duration_recall.csv", std::ios::trunc);
        csv << "method,bucket,gt_count,matched,recall\n";
        for (const AblationEntry& e : res.variants) {
            for (const auto& b : e.report.duration_recall) {
                csv << e.label << ',' << b.bucket.label << ',' << b.gt_count << ',' << b.matched << ','
                    << format_number(b.recall) << '\n';
            }
        }
    }
}

}  // namespace

AblationResult run_ablation(const Config& config, const Dataset& train_set, const Dataset& val_set,
                            const std::string& out_dir, std::ostream* log) {
    fs::create_directories(out_dir);
    AblationResult res;
    const metrics::EvalOptions& opts = config.eval.options;
    for (const Variant& v : variants()) {
        Config c = config;
        c.flags = v.flags;
        c.train.stagewise = false;
        const fs::path dir = fs::path(out_dir) / v.label;
        fs::create_directories(dir);
        if (log) *log << "== " << v.label << " (" << v.description << ")\n";
        Model<float> model(model_spec(c, feature_dim_of(train_set)), c.train.seed);
        const TrainResult tr = train_and_save(c, train_set, (dir / "model.ckpt").string(), log, &model);
        const std::vector<VideoProposals> props = infer_dataset(model, val_set, infer_path(c.flags), c.infer);
        write_proposals(props, (dir / "proposals.jsonl").string());
        AblationEntry e{v.label, v.description, evaluate(val_set, props, opts), model.parameter_count(), tr.seconds};
        write_eval_outputs(dir.string(), e.report, opts);
        res.variants.push_back(e);

        if (std::string(v.label) == "MGG") {
            const struct {
                const char* label;
                InferPath path;
                bool stage1, stage2;
            } steps[] = {{"SPP+NMS", InferPath::kSppOnly, false, false},
                         {"+stage I", InferPath::kFull, true, false},
                         {"+stage I+II", InferPath::kFull, true, true}};
            for (const auto& s : steps) {
                InferConfig ic = c.infer;
                ic.stage1 = s.stage1;
                ic.stage2 = s.stage2;
                const auto p = infer_dataset(model, val_set, s.path, ic);
                res.tba.push_back({s.label, "", evaluate(val_set, p, opts), e.parameters, 0.0});
            }
        }
        if (log) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%s: AUC %.2f AR@10 %.4f AR@100 %.4f (%.0fs)\n", v.label, e.report.auc,
                          ar_at(e.report, 10), ar_at(e.report, 100), tr.seconds);
            *log << buf << std::flush;
        }
    }
    write_tables(out_dir, res);
    return res;
}

}  // namespace mgg::harness
