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

#include "CLI11.hpp"

#include "mgg/harness/config.hpp"
#include "mgg/harness/dataset.hpp"
#include "mgg/harness/evaluate.hpp"
#include "mgg/harness/infer.hpp"
#include "mgg/harness/pipeline.hpp"
#include "mgg/harness/synth.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace mgg::harness;

namespace {

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

struct FlagOptions {
    bool no_position = false;
    bool no_bilinear = false;
    bool no_lateral = false;
    bool spp_only = false;
    bool fap_only = false;

    void add_to(CLI::App* app) {
        app->add_flag("--no-position", no_position, "MGG-P: drop the position embedding");
        app->add_flag("--no-bilinear", no_bilinear, "MGG-B: drop bilinear matching");
        app->add_flag("--no-lateral", no_lateral, "MGG-U: drop lateral connections");
        app->add_flag("--spp-only", spp_only, "MGG-F: segment proposals only");
        app->add_flag("--fap-only", fap_only, "MGG-S: frame actionness only");
    }
    void apply(Config& c) const {
        c.flags.disable_position |= no_position;
        c.flags.disable_bilinear |= no_bilinear;
        c.flags.disable_lateral |= no_lateral;
        c.flags.spp_only |= spp_only;
        c.flags.fap_only |= fap_only;
    }
};

Config load_config(const Globals& g) {
    Config c = g.config_path.empty() ? Config{} : Config::load(g.config_path);
    if (g.seed) c.train.seed = *g.seed;
    return c;
}

void ensure_parent(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

int cmd_synth(const Globals& g, const std::string& out_dir) {
    Config c = g.config_path.empty() ? Config{} : Config::load(g.config_path);
    if (g.seed) c.synth.seed = *g.seed;
    const SynthSplits splits = synth_generate(c.synth);
    fs::create_directories(out_dir);
    write_dataset(splits.train, (fs::path(out_dir) / "train.jsonl").string());
    write_dataset(splits.val, (fs::path(out_dir) / "val.jsonl").string());
    std::cout << "wrote " << splits.train.size() << " train and " << splits.val.size() << " val videos to "
              << out_dir << "\n";
    return 0;
}

int cmd_train(const Globals& g, const FlagOptions& flags, bool stagewise, std::optional<int> epochs,
              const std::string& data, const std::string& out, const std::string& log_path) {
    Config c = load_config(g);
    flags.apply(c);
    c.train.stagewise |= stagewise;
    if (epochs) c.train.epochs = *epochs;
    c.validate();
    const Dataset train_set = read_dataset(data);
    ensure_parent(out);
    const TrainResult r = train_and_save(c, train_set, out, &std::cout);
    if (!log_path.empty()) {
        ensure_parent(log_path);
        std::ofstream log(log_path, std::ios::trunc);
        for (const PhaseResult& p : r.phases) {
            const char* phase = p.branch == Branch::kSpp ? "spp" : p.branch == Branch::kFap ? "fap" : "joint";
            log << nlohmann::json{{"phase", phase}, {"epoch", 0}, {"loss", p.initial.joint},
                                  {"spp", p.initial.spp}, {"fap", p.initial.fap}}.dump()
                << '\n';
            for (const EpochLog& e : p.epochs) {
                log << nlohmann::json{{"phase", phase}, {"epoch", e.epoch}, {"loss", e.loss.joint},
                                      {"spp", e.loss.spp}, {"fap", e.loss.fap}}.dump()
                    << '\n';
            }
        }
    }
    std::cout << "saved " << out << " (" << r.seconds << " s)\n";
    return 0;
}

int cmd_infer(const Globals& g, const FlagOptions& flags, bool no_stage1, bool no_stage2, const std::string& ckpt,
              const std::string& data, const std::string& out) {
    Config c = load_config(g);
    flags.apply(c);
    if (no_stage1) c.infer.stage1 = false;
    if (no_stage2) c.infer.stage2 = false;
    c.validate();
    const Dataset videos = read_dataset(data);
    Model<float> model = load_model(c, feature_dim_of(videos), ckpt);
    const std::vector<VideoProposals> props = infer_dataset(model, videos, infer_path(c.flags), c.infer);
    ensure_parent(out);
    write_proposals(props, out);
    std::cout << "wrote proposals for " << props.size() << " videos to " << out << " (path "
              << to_string(infer_path(c.flags)) << ")\n";
    return 0;
}

int cmd_eval(const Globals& g, const std::string& proposals, const std::string& data, const std::string& out_dir) {
    const Config c = load_config(g);
    const Dataset videos = read_dataset(data);
    const std::vector<VideoProposals> props = read_proposals(proposals);
    const mgg::metrics::EvalReport report = evaluate(videos, props, c.eval.options);
    write_eval_outputs(out_dir, report, c.eval.options);
    std::cout << "AUC " << report.auc;
    for (const auto& [an, ar] : report.ar_at_an) {
        if (an == 10 || an == 50 || an == 100) std::cout << "  AR@" << an << " " << ar;
    }
    std::cout << "\n";
    for (const auto& b : report.duration_recall) {
        std::cout << "  duration " << b.bucket.label << ": recall " << b.recall << " (" << b.matched << "/"
                  << b.gt_count << ")\n";
    }
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

int cmd_ablate(const Globals& g, std::optional<int> epochs, const std::string& train_path,
               const std::string& val_path, const std::string& out_dir) {
    Config c = load_config(g);
    if (epochs) c.train.epochs = *epochs;
    c.validate();
    const Dataset train_set = read_dataset(train_path);
    const Dataset val_set = read_dataset(val_path);
    run_ablation(c, train_set, val_set, out_dir, &std::cout);
    std::ifstream md(fs::path(out_dir) / "ablation.md");
    std::cout << md.rdbuf();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-granularity temporal action proposal generator"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "override the seed (dataset seed for synth, training seed otherwise)");

    std::string synth_out = "data";
    CLI::App* synth = app.add_subcommand("synth", "generate the synthetic corpus");
    synth->add_option("--out", synth_out, "output directory");

    FlagOptions train_flags;
    bool stagewise = false;
    std::optional<int> train_epochs;
    std::string train_data = "data/train.jsonl", train_out = "model.ckpt", train_log;
    CLI::App* train = app.add_subcommand("train", "train a model");
    train->add_option("--data", train_data, "training manifest");
    train->add_option("--out", train_out, "checkpoint path");
    train->add_option("--log", train_log, "per-epoch loss log (JSON lines)");
    train->add_option("--epochs", train_epochs, "override the epoch count");
    train->add_flag("--stagewise", stagewise, "train SPP and FAP separately, each with its own BaseNet");
    train_flags.add_to(train);

    FlagOptions infer_flags;
    bool no_stage1 = false, no_stage2 = false;
    std::string infer_ckpt = "model.ckpt", infer_data = "data/val.jsonl", infer_out = "proposals.jsonl";
    CLI::App* infer = app.add_subcommand("infer", "generate proposals");
    infer->add_option("--checkpoint", infer_ckpt, "checkpoint path");
    infer->add_option("--data", infer_data, "manifest of videos to process");
    infer->add_option("--out", infer_out, "proposals output (JSON lines)");
    infer->add_flag("--no-stage1", no_stage1, "skip stage I boundary adjustment");
    infer->add_flag("--no-stage2", no_stage2, "skip stage II fusion");
    infer_flags.add_to(infer);

    std::string eval_props = "proposals.jsonl", eval_data = "data/val.jsonl", eval_out = "eval";
    CLI::App* eval = app.add_subcommand("eval", "evaluate proposals");
    eval->add_option("--proposals", eval_props, "proposals file");
    eval->add_option("--data", eval_data, "manifest with ground truth");
    eval->add_option("--out", eval_out, "output directory");

    std::optional<int> ablate_epochs;
    std::string ablate_train = "data/train.jsonl", ablate_val = "data/val.jsonl", ablate_out = "ablation";
    CLI::App* ablate = app.add_subcommand("ablate", "train and compare the P/B/U/F/S ablations");
    ablate->add_option("--train", ablate_train, "training manifest");
    ablate->add_option("--val", ablate_val, "validation manifest");
    ablate->add_option("--out", ablate_out, "output directory");
    ablate->add_option("--epochs", ablate_epochs, "override the epoch count");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*synth) return cmd_synth(g, synth_out);
        if (*train) return cmd_train(g, train_flags, stagewise, train_epochs, train_data, train_out, train_log);
        if (*infer) return cmd_infer(g, infer_flags, no_stage1, no_stage2, infer_ckpt, infer_data, infer_out);
        if (*eval) return cmd_eval(g, eval_props, eval_data, eval_out);
        if (*ablate) return cmd_ablate(g, ablate_epochs, ablate_train, ablate_val, ablate_out);
    } catch (const std::exception& e) {
        std::cerr << "mgg: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
