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

#include "mgg/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

namespace mgg::harness {

using nlohmann::json;

namespace {

// Reads fields of one JSON object, remembering which keys were consumed.
class Section {
   public:
    Section(const json& j, std::string name) : j_(j), name_(std::move(name)) {
        if (!j_.is_object()) throw std::invalid_argument("config: '" + name_ + "' must be an object");
    }

    template <typename T>
    void get(const char* key, T& out) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) return;
        try {
            out = it->template get<T>();
        } catch (const json::exception& e) {
            throw std::invalid_argument("config: " + name_ + "." + key + ": " + e.what());
        }
    }

    const json* child(const char* key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw std::invalid_argument("config: unknown key " + name_ + "." + it.key());
        }
    }

   private:
    const json& j_;
    std::string name_;
    std::set<std::string> seen_;
};

const char* grid_name(metrics::TiouGrid g) { return g == metrics::TiouGrid::kThumos ? "thumos" : "activitynet"; }

metrics::TiouGrid grid_from_string(const std::string& s) {
    if (s == "thumos") return metrics::TiouGrid::kThumos;
    if (s == "activitynet") return metrics::TiouGrid::kActivityNet;
    throw std::invalid_argument("config: unknown tIoU grid '" + s + "'");
}

}  // namespace

std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::kBlock: return "block";
        case PatternKind::kRamp: return "ramp";
        case PatternKind::kSegmented: return "segmented";
    }
    return "block";
}

PatternKind pattern_from_string(const std::string& name) {
    if (name == "block") return PatternKind::kBlock;
    if (name == "ramp") return PatternKind::kRamp;
    if (name == "segmented") return PatternKind::kSegmented;
    throw std::invalid_argument("config: unknown pattern kind '" + name + "'");
}

void SynthConfig::validate() const {
    if (train_videos < 0 || val_videos < 0) throw std::invalid_argument("synth: video counts must be >= 0");
    if (length < 1 || feature_dim < 1) throw std::invalid_argument("synth: length and feature_dim must be >= 1");
    if (min_instances < 0 || max_instances < min_instances) {
        throw std::invalid_argument("synth: need 0 <= min_instances <= max_instances");
    }
    if (!(min_duration >= 1.0) || max_duration < min_duration) {
        throw std::invalid_argument("synth: need 1 <= min_duration <= max_duration");
    }
    if (min_gap < 0 || ramp < 0) throw std::invalid_argument("synth: min_gap and ramp must be >= 0");
    if (prototypes < 1 || active_channels < 1 || active_channels > feature_dim) {
        throw std::invalid_argument("synth: need prototypes >= 1 and 1 <= active_channels <= feature_dim");
    }
    if (!(noise >= 0.0)) throw std::invalid_argument("synth: noise must be >= 0");
    if (!(pause_fraction >= 0.0 && pause_fraction < 0.5) || pause_min_length < 0) {
        throw std::invalid_argument("synth: need 0 <= pause_fraction < 0.5 and pause_min_length >= 0");
    }
    const double packed = max_instances * std::ceil(min_duration) + (max_instances + 1.0) * min_gap;
    if (max_instances > 0 && packed > length) {
        throw std::invalid_argument("synth: " + std::to_string(max_instances) + " instances of length >= " +
                                    std::to_string(min_duration) + " cannot be packed into " +
                                    std::to_string(length) + " frames");
    }
}

void ModelConfig::validate() const {
    if (position_dim < 2 || position_dim % 2 != 0) throw std::invalid_argument("model: position_dim must be even and >= 2");
    if (hidden < 2) throw std::invalid_argument("model: hidden must be >= 2");
    if (rank < 1 || rank >= hidden) throw std::invalid_argument("model: rank must be in [1, hidden)");
    if (basenet_kernel < 1 || basenet_kernel % 2 == 0) throw std::invalid_argument("model: basenet_kernel must be odd");
    if (head_kernel < 1 || head_kernel % 2 == 0) throw std::invalid_argument("model: head_kernel must be odd");
    if (fap_kernel < 1 || fap_kernel % 2 == 0) throw std::invalid_argument("model: fap_kernel must be odd");
    if (levels < 1) throw std::invalid_argument("model: levels must be >= 1");
    if (base_stride != 8) throw std::invalid_argument("model: base_stride is fixed at 8");
    if (scales.empty()) throw std::invalid_argument("model: scales must not be empty");
    for (double s : scales) {
        if (!(s > 0.0)) throw std::invalid_argument("model: scales must be positive");
    }
    if (fap_hidden < 1) throw std::invalid_argument("model: fap_hidden must be >= 1");
}

void AblationFlags::validate() const {
    if (spp_only && fap_only) throw std::invalid_argument("ablation: spp_only and fap_only are mutually exclusive");
}

std::string AblationFlags::label() const {
    std::string s;
    if (disable_position) s += "P";
    if (disable_bilinear) s += "B";
    if (disable_lateral) s += "U";
    if (spp_only) s += "F";
    if (fap_only) s += "S";
    return s.empty() ? "MGG" : "MGG-" + s;
}

void TrainConfig::validate() const {
    if (epochs < 0) throw std::invalid_argument("train: epochs must be >= 0");
    if (batch < 1) throw std::invalid_argument("train: batch must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be positive");
    if (!(beta >= 0.0)) throw std::invalid_argument("train: beta must be >= 0");
}

void Config::validate() const {
    synth.validate();
    model.validate();
    flags.validate();
    train.validate();
    infer.tba.validate();
    if (train.stagewise && (flags.spp_only || flags.fap_only)) {
        throw std::invalid_argument("config: stagewise training already trains both branches");
    }
}

Config Config::from_json(const json& j) {
    Config c;
    Section root(j, "config");
    if (const json* s = root.child("synth")) {
        Section r(*s, "synth");
        r.get("train_videos", c.synth.train_videos);
        r.get("val_videos", c.synth.val_videos);
        r.get("length", c.synth.length);
        r.get("feature_dim", c.synth.feature_dim);
        r.get("min_instances", c.synth.min_instances);
        r.get("max_instances", c.synth.max_instances);
        r.get("min_duration", c.synth.min_duration);
        r.get("max_duration", c.synth.max_duration);
        r.get("min_gap", c.synth.min_gap);
        r.get("prototypes", c.synth.prototypes);
        r.get("active_channels", c.synth.active_channels);
        std::string pattern = to_string(c.synth.pattern);
        r.get("pattern", pattern);
        c.synth.pattern = pattern_from_string(pattern);
        r.get("ramp", c.synth.ramp);
        r.get("pause_min_duration", c.synth.pause_min_duration);
        r.get("pause_fraction", c.synth.pause_fraction);
        r.get("pause_min_length", c.synth.pause_min_length);
        r.get("pause_level", c.synth.pause_level);
        r.get("noise", c.synth.noise);
        r.get("seed", c.synth.seed);
        r.finish();
    }
    if (const json* s = root.child("model")) {
        Section r(*s, "model");
        r.get("position_dim", c.model.position_dim);
        r.get("hidden", c.model.hidden);
        r.get("rank", c.model.rank);
        r.get("basenet_kernel", c.model.basenet_kernel);
        r.get("levels", c.model.levels);
        r.get("base_stride", c.model.base_stride);
        r.get("scales", c.model.scales);
        r.get("head_kernel", c.model.head_kernel);
        r.get("share_heads", c.model.share_heads);
        r.get("fap_hidden", c.model.fap_hidden);
        r.get("fap_kernel", c.model.fap_kernel);
        r.finish();
    }
    if (const json* s = root.child("ablation")) {
        Section r(*s, "ablation");
        r.get("disable_position", c.flags.disable_position);
        r.get("disable_bilinear", c.flags.disable_bilinear);
        r.get("disable_lateral", c.flags.disable_lateral);
        r.get("spp_only", c.flags.spp_only);
        r.get("fap_only", c.flags.fap_only);
        r.finish();
    }
    if (const json* s = root.child("train")) {
        Section r(*s, "train");
        r.get("epochs", c.train.epochs);
        r.get("batch", c.train.batch);
        r.get("learning_rate", c.train.learning_rate);
        r.get("adam_beta1", c.train.adam_beta1);
        r.get("adam_beta2", c.train.adam_beta2);
        r.get("adam_epsilon", c.train.adam_epsilon);
        r.get("beta", c.train.beta);
        r.get("stagewise", c.train.stagewise);
        r.get("seed", c.train.seed);
        r.finish();
    }
    if (const json* s = root.child("infer")) {
        Section r(*s, "infer");
        r.get("stage1", c.infer.stage1);
        r.get("stage2", c.infer.stage2);
        r.get("nms_tiou", c.infer.tba.nms_tiou);
        r.get("search_divisor", c.infer.tba.search_divisor);
        r.get("sigma", c.infer.tba.sigma);
        r.get("delta", c.infer.tba.delta);
        r.get("group_thresholds", c.infer.tba.group_thresholds);
        r.get("gap_tolerance", c.infer.tba.gap_tolerance);
        r.finish();
    }
    if (const json* s = root.child("eval")) {
        Section r(*s, "eval");
        metrics::EvalOptions& o = c.eval.options;
        std::string grid = grid_name(o.grid);
        r.get("grid", grid);
        o.grid = grid_from_string(grid);
        r.get("max_an", o.max_an);
        r.get("report_ans", o.report_ans);
        r.get("curve_ans", o.curve_ans);
        r.get("curve_thresholds", o.curve_thresholds);
        r.get("duration_an", o.duration_an);
        r.get("duration_tiou", o.duration_tiou);
        if (const json* b = r.child("duration_buckets")) {
            o.buckets.clear();
            for (const json& e : *b) {
                metrics::DurationBucket bucket;
                bucket.label = e.at("label").get<std::string>();
                bucket.lo = e.at("lo").get<double>();
                bucket.hi = e.at("hi").is_null() ? std::numeric_limits<double>::infinity() : e.at("hi").get<double>();
                o.buckets.push_back(bucket);
            }
        }
        r.finish();
    }
    root.finish();
    c.validate();
    return c;
}

json Config::to_json() const {
    json j;
    j["synth"] = {{"train_videos", synth.train_videos},
                  {"val_videos", synth.val_videos},
                  {"length", synth.length},
                  {"feature_dim", synth.feature_dim},
                  {"min_instances", synth.min_instances},
                  {"max_instances", synth.max_instances},
                  {"min_duration", synth.min_duration},
                  {"max_duration", synth.max_duration},
                  {"min_gap", synth.min_gap},
                  {"prototypes", synth.prototypes},
                  {"active_channels", synth.active_channels},
                  {"pattern", to_string(synth.pattern)},
                  {"ramp", synth.ramp},
                  {"pause_min_duration", synth.pause_min_duration},
                  {"pause_fraction", synth.pause_fraction},
                  {"pause_min_length", synth.pause_min_length},
                  {"pause_level", synth.pause_level},
                  {"noise", synth.noise},
                  {"seed", synth.seed}};
    j["model"] = {{"position_dim", model.position_dim},     {"hidden", model.hidden},
                  {"rank", model.rank},                     {"basenet_kernel", model.basenet_kernel},
                  {"levels", model.levels},                 {"base_stride", model.base_stride},
                  {"scales", model.scales},                 {"head_kernel", model.head_kernel},
                  {"share_heads", model.share_heads},       {"fap_hidden", model.fap_hidden},
                  {"fap_kernel", model.fap_kernel}};
    j["ablation"] = {{"disable_position", flags.disable_position},
                     {"disable_bilinear", flags.disable_bilinear},
                     {"disable_lateral", flags.disable_lateral},
                     {"spp_only", flags.spp_only},
                     {"fap_only", flags.fap_only}};
    j["train"] = {{"epochs", train.epochs},
                  {"batch", train.batch},
                  {"learning_rate", train.learning_rate},
                  {"adam_beta1", train.adam_beta1},
                  {"adam_beta2", train.adam_beta2},
                  {"adam_epsilon", train.adam_epsilon},
                  {"beta", train.beta},
                  {"stagewise", train.stagewise},
                  {"seed", train.seed}};
    j["infer"] = {{"stage1", infer.stage1},
                  {"stage2", infer.stage2},
                  {"nms_tiou", infer.tba.nms_tiou},
                  {"search_divisor", infer.tba.search_divisor},
                  {"sigma", infer.tba.sigma},
                  {"delta", infer.tba.delta},
                  {"group_thresholds", infer.tba.group_thresholds},
                  {"gap_tolerance", infer.tba.gap_tolerance}};
    const metrics::EvalOptions& o = eval.options;
    json buckets = json::array();
    for (const auto& b : o.buckets) {
        buckets.push_back({{"label", b.label}, {"lo", b.lo}, {"hi", std::isinf(b.hi) ? json(nullptr) : json(b.hi)}});
    }
    j["eval"] = {{"grid", grid_name(o.grid)},
                 {"max_an", o.max_an},
                 {"report_ans", o.report_ans},
                 {"curve_ans", o.curve_ans},
                 {"curve_thresholds", o.curve_thresholds},
                 {"duration_an", o.duration_an},
                 {"duration_tiou", o.duration_tiou},
                 {"duration_buckets", buckets}};
    return j;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + path + ": " + e.what());
    }
    return from_json(j);
}

Config Config::large_preset() {
    Config c;
    c.model.hidden = 512;
    c.model.rank = 32;
    c.model.position_dim = 32;
    c.model.fap_hidden = 64;
    return c;
}

}  // namespace mgg::harness
