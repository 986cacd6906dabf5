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

#include "gradcheck.hpp"

#include "mgg/harness/checkpoint.hpp"
#include "mgg/harness/config.hpp"
#include "mgg/harness/dataset.hpp"
#include "mgg/harness/evaluate.hpp"
#include "mgg/harness/infer.hpp"
#include "mgg/harness/model.hpp"
#include "mgg/harness/plot.hpp"
#include "mgg/harness/synth.hpp"
#include "mgg/harness/train.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <unistd.h>

namespace mgg::harness {
namespace {

namespace fs = std::filesystem;

class TempDir {
   public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("mgg_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

   private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SynthConfig tiny_synth() {
    SynthConfig c;
    c.train_videos = 6;
    c.val_videos = 3;
    c.length = 64;
    c.feature_dim = 6;
    c.max_instances = 3;
    c.max_duration = 24.0;
    c.pause_min_duration = 16.0;
    return c;
}

ModelSpec tiny_spec(int feature_dim) {
    ModelSpec s;
    s.model.position_dim = 4;
    s.model.hidden = 6;
    s.model.rank = 2;
    s.model.basenet_kernel = 3;
    s.model.levels = 2;
    s.model.fap_hidden = 4;
    s.feature_dim = feature_dim;
    return s;
}

// Config -------------------------------------------------------------------

TEST(Config, DefaultsValidate) {
    const Config c;
    EXPECT_NO_THROW(c.validate());
    EXPECT_EQ(c.synth.length, 256);
    EXPECT_EQ(c.synth.feature_dim, 16);
    EXPECT_EQ(c.synth.seed, 7u);
    EXPECT_EQ(c.eval.options.grid, metrics::TiouGrid::kActivityNet);
}

TEST(Config, JsonRoundTrip) {
    Config c;
    c.model.hidden = 32;
    c.flags.disable_lateral = true;
    c.train.epochs = 3;
    c.synth.pattern = PatternKind::kRamp;
    c.infer.tba.sigma = 0.6;
    const Config back = Config::from_json(c.to_json());
    EXPECT_EQ(back.to_json(), c.to_json());
    EXPECT_EQ(back.model.hidden, 32);
    EXPECT_TRUE(back.flags.disable_lateral);
    EXPECT_EQ(back.synth.pattern, PatternKind::kRamp);
}

TEST(Config, PartialJsonKeepsDefaults) {
    const Config c = Config::from_json(nlohmann::json::parse(R"({"train": {"epochs": 2}})"));
    EXPECT_EQ(c.train.epochs, 2);
    EXPECT_EQ(c.train.batch, TrainConfig{}.batch);
}

TEST(Config, UnknownKeysRejected) {
    EXPECT_ANY_THROW(Config::from_json(nlohmann::json::parse(R"({"train": {"epoch": 2}})")));
    EXPECT_ANY_THROW(Config::from_json(nlohmann::json::parse(R"({"trainer": {}})")));
}

TEST(Config, LoadFromFile) {
    TempDir dir;
    std::ofstream(dir / "c.json") << R"({"model": {"hidden": 24, "rank": 4}})";
    EXPECT_EQ(Config::load(dir / "c.json").model.hidden, 24);
    EXPECT_ANY_THROW(Config::load(dir / "missing.json"));
}

TEST(Config, LargePreset) {
    const Config c = Config::large_preset();
    EXPECT_EQ(c.model.hidden, 512);
    EXPECT_EQ(c.model.rank, 32);
    EXPECT_NO_THROW(c.validate());
}

TEST(Config, PatternNames) {
    for (PatternKind k : {PatternKind::kBlock, PatternKind::kRamp, PatternKind::kSegmented}) {
        EXPECT_EQ(pattern_from_string(to_string(k)), k);
    }
    EXPECT_ANY_THROW(pattern_from_string("wavy"));
}

TEST(AblationFlags, LabelsAndExclusion) {
    AblationFlags f;
    EXPECT_EQ(f.label(), "MGG");
    f.disable_lateral = true;
    EXPECT_EQ(f.label(), "MGG-U");
    AblationFlags g;
    g.spp_only = g.fap_only = true;
    EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(ModelConfig, OddPositionDimRejected) {
    ModelConfig m;
    m.position_dim = 3;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

// Synthetic data -------------------------------------------------------------

TEST(Synth, AnnotationsRespectLayout) {
    SynthConfig c = tiny_synth();
    c.train_videos = 40;
    const SynthSplits s = synth_generate(c);
    ASSERT_EQ(s.train.size(), 40u);
    ASSERT_EQ(s.val.size(), 3u);
    for (const Video& v : s.train) {
        ASSERT_EQ(v.length(), c.length);
        ASSERT_EQ(v.feature_dim(), c.feature_dim);
        ASSERT_GE(static_cast<int>(v.annotations.size()), c.min_instances);
        ASSERT_LE(static_cast<int>(v.annotations.size()), c.max_instances);
        double prev_end = 0.0;
        for (const Segment& a : v.annotations) {
            EXPECT_EQ(a.t_s, std::floor(a.t_s));
            EXPECT_EQ(a.t_e, std::floor(a.t_e));
            EXPECT_GE(a.t_s - prev_end, c.min_gap);
            EXPECT_GT(a.duration(), 0.0);
            prev_end = a.t_e;
        }
        EXPECT_GE(c.length - prev_end, c.min_gap);
        EXPECT_TRUE(v.features.allFinite());
    }
}

TEST(Synth, DeterministicPerSeed) {
    const SynthConfig c = tiny_synth();
    const SynthSplits a = synth_generate(c);
    const SynthSplits b = synth_generate(c);
    for (std::size_t i = 0; i < a.train.size(); ++i) {
        EXPECT_EQ(a.train[i].id, b.train[i].id);
        EXPECT_EQ(a.train[i].annotations, b.train[i].annotations);
        EXPECT_TRUE(a.train[i].features == b.train[i].features);
    }
    SynthConfig other = c;
    other.seed = 8;
    EXPECT_FALSE(synth_generate(other).train[0].features == a.train[0].features);
}

TEST(Synth, IdsAreUnique) {
    const SynthSplits s = synth_generate(tiny_synth());
    std::set<std::string> ids;
    for (const Video& v : s.train) ids.insert(v.id);
    for (const Video& v : s.val) ids.insert(v.id);
    EXPECT_EQ(ids.size(), s.train.size() + s.val.size());
    EXPECT_EQ(s.train[0].id, "train_0000");
    EXPECT_EQ(s.val[2].id, "val_0002");
}

TEST(Synth, EnvelopeShapes) {
    std::mt19937_64 rng(1);
    SynthConfig c = tiny_synth();
    c.pattern = PatternKind::kBlock;
    for (float v : instance_envelope(c, {0.0, 20.0, 0.0}, rng)) EXPECT_EQ(v, 1.0f);
    c.pattern = PatternKind::kRamp;
    const auto ramp = instance_envelope(c, {0.0, 20.0, 0.0}, rng);
    ASSERT_EQ(ramp.size(), 20u);
    EXPECT_LT(ramp.front(), 1.0f);
    EXPECT_LT(ramp.back(), 1.0f);
    EXPECT_EQ(ramp[10], 1.0f);
    c.pattern = PatternKind::kSegmented;
    const auto seg = instance_envelope(c, {0.0, 40.0, 0.0}, rng);
    const long paused = std::count(seg.begin(), seg.end(), static_cast<float>(c.pause_level));
    EXPECT_GE(paused, c.pause_min_length);
    for (float v : seg) {
        EXPECT_GE(v, 0.0f);
        EXPECT_LE(v, 1.0f);
    }
}

TEST(Synth, ImpossiblePackingRejected) {
    SynthConfig c = tiny_synth();
    c.length = 32;
    c.max_instances = 4;
    c.min_duration = 8.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

// Dataset files ----------------------------------------------------------------

TEST(Dataset, RoundTrip) {
    TempDir dir;
    const SynthSplits s = synth_generate(tiny_synth());
    write_dataset(s.train, dir / "train.jsonl");
    const Dataset back = read_dataset(dir / "train.jsonl");
    ASSERT_EQ(back.size(), s.train.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back[i].id, s.train[i].id);
        EXPECT_EQ(back[i].annotations, s.train[i].annotations);
        EXPECT_TRUE(back[i].features == s.train[i].features);
    }
    const auto line = nlohmann::json::parse(slurp(dir / "train.jsonl").substr(0, slurp(dir / "train.jsonl").find('\n')));
    for (const char* key : {"video_id", "l_s", "d_f", "feature_file", "annotations"}) EXPECT_TRUE(line.contains(key));
    EXPECT_EQ(fs::file_size(dir / ("features/" + s.train[0].id + ".f32")), 64u * 6u * 4u);
}

TEST(Dataset, TruncatedFeatureFileRejected) {
    TempDir dir;
    const SynthSplits s = synth_generate(tiny_synth());
    write_dataset(s.val, dir / "val.jsonl");
    const auto first = nlohmann::json::parse(slurp(dir / "val.jsonl").substr(0, slurp(dir / "val.jsonl").find('\n')));
    fs::resize_file(dir / first["feature_file"].get<std::string>(), 100);
    EXPECT_ANY_THROW(read_dataset(dir / "val.jsonl"));
}

TEST(Dataset, BadAnnotationRejected) {
    TempDir dir;
    write_features(seqgrad::Matrix<float>::Zero(8, 2), dir / "a.f32");
    std::ofstream(dir / "m.jsonl")
        << R"({"video_id": "a", "l_s": 8, "d_f": 2, "feature_file": "a.f32", "annotations": [[5, 3]]})" << "\n";
    EXPECT_ANY_THROW(read_dataset(dir / "m.jsonl"));
}

// Model ----------------------------------------------------------------------

TEST(Model, ForwardShapes) {
    const SynthSplits s = synth_generate(tiny_synth());
    Model<float> m(tiny_spec(6), 3);
    seqgrad::Graph<float> g;
    Video v = s.train[0];
    v.features.conservativeResize(60, Eigen::NoChange);  // not a multiple of 16
    const ForwardResult<float> r = m.forward(g, v.features, Branch::kBoth);
    EXPECT_EQ(r.length, 60);
    EXPECT_EQ(r.padded, 64);
    ASSERT_TRUE(r.spp.has_value());
    ASSERT_TRUE(r.fap.has_value());
    EXPECT_EQ(g.value(r.spp->scores).rows(), static_cast<Eigen::Index>(r.anchors.size()));
    EXPECT_EQ(g.value(r.fap->middle).rows(), 64);
    const ForwardResult<float> only = m.forward(g, v.features, Branch::kSpp);
    EXPECT_FALSE(only.fap.has_value());
}

TEST(Model, AblationsChangeParameterSet) {
    ModelSpec full = tiny_spec(6);
    ModelSpec no_bilinear = full;
    no_bilinear.flags.disable_bilinear = true;
    ModelSpec no_lateral = full;
    no_lateral.flags.disable_lateral = true;
    ModelSpec no_position = full;
    no_position.flags.disable_position = true;
    EXPECT_EQ(no_position.input_dim(), 6);
    EXPECT_EQ(full.input_dim(), 10);
    const long long base = Model<float>(full, 1).parameter_count();
    EXPECT_LT(Model<float>(no_bilinear, 1).parameter_count(), base);
    EXPECT_LT(Model<float>(no_lateral, 1).parameter_count(), base);
    EXPECT_LT(Model<float>(no_position, 1).parameter_count(), base);
}

TEST(Model, SameSeedSameWeights) {
    Model<float> a(tiny_spec(6), 9);
    Model<float> b(tiny_spec(6), 9);
    std::vector<seqgrad::Matrix<float>> wa, wb;
    a.visit([&](const std::string&, seqgrad::Parameter<float>& p) { wa.push_back(p.value); });
    b.visit([&](const std::string&, seqgrad::Parameter<float>& p) { wb.push_back(p.value); });
    ASSERT_EQ(wa.size(), wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) EXPECT_TRUE(wa[i] == wb[i]);
}

TEST(Model, JointLossGradientMatchesFiniteDifferences) {
    const SynthSplits s = synth_generate(tiny_synth());
    Video v = s.train[1];
    v.features.conservativeResize(32, Eigen::NoChange);
    v.annotations = {{3.0, 12.0, 0.0}, {17.0, 29.0, 0.0}};
    Model<double> m(tiny_spec(6), 4);
    m.visit([](const std::string& n, seqgrad::Parameter<double>& p) {
        if (n.ends_with(".bias")) p.value.setConstant(0.02);
    });
    testing::NamedParams named;
    m.visit([&](const std::string& n, seqgrad::Parameter<double>& p) { named.emplace_back(n, &p); });
    const auto res = testing::gradcheck(named, [&](seqgrad::Graph<double>& g) {
        return m.loss(g, v, Branch::kBoth, 0.1, 77).joint;
    }, testing::GradCheckOptions{1e-5, 1e-6, 12});
    EXPECT_TRUE(res.passed(1e-4)) << res.worst;
}

TEST(DeriveSeed, DistinctStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a) {
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(1, a, b));
    }
    EXPECT_EQ(seen.size(), 400u);
    EXPECT_EQ(derive_seed(5, 1, 2), derive_seed(5, 1, 2));
}

// Checkpoints ----------------------------------------------------------------

TEST(Checkpoint, RoundTrip) {
    TempDir dir;
    const ModelSpec spec = tiny_spec(6);
    Model<float> a(spec, 1);
    const auto fp = fingerprint(spec, Seeds{7, 1});
    save_checkpoint(dir / "m.ckpt", a, fp);
    EXPECT_EQ(read_fingerprint(dir / "m.ckpt"), fp);
    Model<float> b(spec, 2);
    load_checkpoint(dir / "m.ckpt", b, fp);
    std::vector<seqgrad::Matrix<float>> wa, wb;
    a.visit([&](const std::string&, seqgrad::Parameter<float>& p) { wa.push_back(p.value); });
    b.visit([&](const std::string&, seqgrad::Parameter<float>& p) { wb.push_back(p.value); });
    for (std::size_t i = 0; i < wa.size(); ++i) EXPECT_TRUE(wa[i] == wb[i]);
    EXPECT_EQ(slurp(dir / "m.ckpt").substr(0, 7), "MGGCKPT");
}

TEST(Checkpoint, LayoutMismatchRejected) {
    TempDir dir;
    const ModelSpec spec = tiny_spec(6);
    Model<float> a(spec, 1);
    save_checkpoint(dir / "m.ckpt", a, fingerprint(spec, Seeds{7, 1}));
    ModelSpec other = spec;
    other.model.hidden = 8;
    Model<float> b(other, 1);
    EXPECT_THROW(load_checkpoint(dir / "m.ckpt", b, fingerprint(other, Seeds{7, 1})), FingerprintMismatch);
}

TEST(Checkpoint, InferenceFlagsDoNotConflict) {
    ModelSpec joint = tiny_spec(6);
    ModelSpec spp_only = joint;
    spp_only.flags.spp_only = true;
    EXPECT_EQ(fingerprint_conflict(fingerprint(joint, {7, 1}), fingerprint(spp_only, {7, 2})), "");
    ModelSpec no_lat = joint;
    no_lat.flags.disable_lateral = true;
    EXPECT_NE(fingerprint_conflict(fingerprint(joint, {7, 1}), fingerprint(no_lat, {7, 1})), "");
}

TEST(Checkpoint, SpecRecoveredFromFingerprint) {
    ModelSpec spec = tiny_spec(6);
    spec.flags.disable_bilinear = true;
    const ModelSpec back = spec_from_fingerprint(fingerprint(spec, {1, 2}));
    EXPECT_EQ(fingerprint(back, {1, 2}), fingerprint(spec, {1, 2}));
}

TEST(Checkpoint, CorruptFileRejected) {
    TempDir dir;
    std::ofstream(dir / "bad.ckpt") << "NOTACHECKPOINT";
    EXPECT_ANY_THROW(read_fingerprint(dir / "bad.ckpt"));
    Model<float> m(tiny_spec(6), 1);
    save_checkpoint(dir / "m.ckpt", m, fingerprint(tiny_spec(6), {}));
    fs::resize_file(dir / "m.ckpt", fs::file_size(dir / "m.ckpt") - 10);
    EXPECT_ANY_THROW(load_checkpoint(dir / "m.ckpt", m, fingerprint(tiny_spec(6), {})));
}

// Training -------------------------------------------------------------------

TEST(Adam, FirstStepMovesByLearningRate) {
    seqgrad::Parameter<float> p(seqgrad::Matrix<float>::Zero(1, 2));
    TrainConfig c;
    c.learning_rate = 0.01;
    Adam opt({&p}, c);
    p.grad << 3.0f, -0.5f;
    opt.step();
    EXPECT_NEAR(p.value(0, 0), -0.01f, 1e-6f);
    EXPECT_NEAR(p.value(0, 1), 0.01f, 1e-6f);
    opt.zero_grad();
    EXPECT_EQ(p.grad.cwiseAbs().sum(), 0.0f);
}

TEST(Train, LossDecreasesAndRunsAreReproducible) {
    const SynthSplits s = synth_generate(tiny_synth());
    TrainConfig c;
    c.epochs = 8;
    c.batch = 2;
    c.learning_rate = 3e-3;
    std::vector<std::vector<seqgrad::Matrix<float>>> weights;
    std::vector<TrainResult> results;
    for (int run = 0; run < 2; ++run) {
        Model<float> m(tiny_spec(6), 5);
        std::ostringstream log;
        results.push_back(train(m, s.train, c, Branch::kBoth, &log));
        EXPECT_NE(log.str().find("epoch 8/8"), std::string::npos);
        weights.emplace_back();
        m.visit([&](const std::string&, seqgrad::Parameter<float>& p) { weights.back().push_back(p.value); });
    }
    const PhaseResult& ph = results[0].phases.at(0);
    EXPECT_LT(ph.final.joint, ph.initial.joint);
    EXPECT_EQ(ph.epochs.size(), 8u);
    for (std::size_t i = 0; i < weights[0].size(); ++i) {
        ASSERT_EQ(0, std::memcmp(weights[0][i].data(), weights[1][i].data(), sizeof(float) * weights[0][i].size()));
    }
}

TEST(Train, StagewiseRunsTwoPhases) {
    const SynthSplits s = synth_generate(tiny_synth());
    ModelSpec spec = tiny_spec(6);
    spec.stagewise = true;
    Model<float> m(spec, 5);
    TrainConfig c;
    c.epochs = 1;
    c.stagewise = true;
    const TrainResult r = train(m, s.train, c, Branch::kBoth);
    ASSERT_EQ(r.phases.size(), 2u);
    EXPECT_EQ(r.phases[0].branch, Branch::kSpp);
    EXPECT_EQ(r.phases[1].branch, Branch::kFap);
}

TEST(Train, BranchFollowsFlags) {
    AblationFlags f;
    EXPECT_EQ(training_branch(f), Branch::kBoth);
    f.spp_only = true;
    EXPECT_EQ(training_branch(f), Branch::kSpp);
    f = AblationFlags{};
    f.fap_only = true;
    EXPECT_EQ(training_branch(f), Branch::kFap);
}

// Inference and evaluation -----------------------------------------------------

TEST(Infer, RankingOrder) {
    SegmentList p{{5, 9, 0.2}, {3, 4, 0.9}, {1, 2, 0.2}, {0, 8, 0.9}};
    rank_proposals(p);
    EXPECT_EQ(p[0], (Segment{0, 8, 0.9}));
    EXPECT_EQ(p[1], (Segment{3, 4, 0.9}));
    EXPECT_EQ(p[2], (Segment{1, 2, 0.2}));
    EXPECT_EQ(p[3], (Segment{5, 9, 0.2}));
}

TEST(Infer, ProposalsAreValidOnEveryPath) {
    const SynthSplits s = synth_generate(tiny_synth());
    Model<float> m(tiny_spec(6), 2);
    Video v = s.val[0];
    v.features.conservativeResize(56, Eigen::NoChange);
    InferConfig cfg;
    cfg.tba.sigma = 0.0;  // random weights rarely clear the default threshold
    for (InferPath path : {InferPath::kFull, InferPath::kSppOnly, InferPath::kFapOnly}) {
        const VideoProposals out = infer_video(m, v, path, cfg);
        EXPECT_EQ(out.video_id, v.id);
        for (std::size_t i = 0; i < out.proposals.size(); ++i) {
            const Segment& p = out.proposals[i];
            EXPECT_TRUE(p.valid_within(56.0)) << to_string(path) << " " << p.t_s << " " << p.t_e;
            if (i > 0) EXPECT_GE(out.proposals[i - 1].score, p.score);
        }
        if (path != InferPath::kFapOnly) EXPECT_FALSE(out.proposals.empty());
    }
}

TEST(Infer, PathFromFlags) {
    AblationFlags f;
    EXPECT_EQ(infer_path(f), InferPath::kFull);
    f.spp_only = true;
    EXPECT_EQ(infer_path(f), InferPath::kSppOnly);
    f = AblationFlags{};
    f.fap_only = true;
    EXPECT_EQ(infer_path(f), InferPath::kFapOnly);
}

TEST(Infer, ProposalFileRoundTrip) {
    TempDir dir;
    const std::vector<VideoProposals> in{{"a", {{0, 4, 0.5}, {1, 3, 0.25}}}, {"b", {}}, {"c", {{2, 9, 0.125}}}};
    write_proposals(in, dir / "p.jsonl");
    const auto back = read_proposals(dir / "p.jsonl");
    ASSERT_EQ(back.size(), 2u);  // a video without proposals writes no lines
    EXPECT_EQ(back[0].video_id, "a");
    EXPECT_EQ(back[0].proposals, in[0].proposals);
    EXPECT_EQ(back[1].proposals, in[2].proposals);
}

TEST(Evaluate, UnknownVideoRejected) {
    const SynthSplits s = synth_generate(tiny_synth());
    const std::vector<VideoProposals> p{{"nope", {{0, 4, 0.5}}}};
    EXPECT_ANY_THROW(build_corpus(s.val, p));
}

TEST(Evaluate, MissingVideosCountAsUnmatched) {
    const SynthSplits s = synth_generate(tiny_synth());
    std::vector<VideoProposals> p;
    p.push_back({s.val[0].id, s.val[0].annotations});
    const auto corpus = build_corpus(s.val, p);
    ASSERT_EQ(corpus.size(), s.val.size());
    int total = 0;
    for (const Video& v : s.val) total += static_cast<int>(v.annotations.size());
    const double expect = static_cast<double>(s.val[0].annotations.size()) / total;
    EXPECT_DOUBLE_EQ(metrics::recall(corpus, 100, 0.95), expect);
}

TEST(Evaluate, OutputFiles) {
    TempDir dir;
    const SynthSplits s = synth_generate(tiny_synth());
    std::vector<VideoProposals> p;
    for (const Video& v : s.val) p.push_back({v.id, v.annotations});
    const metrics::EvalOptions opt;
    const auto report = evaluate(s.val, p, opt);
    EXPECT_DOUBLE_EQ(report.ar_at_an.at(1), report.ar_curve[0]);
    write_eval_outputs(dir / "ev", report, opt);
    for (const char* f : {"report.json", "ar_an.csv", "recall_tiou.csv", "duration_recall.csv", "ar_an.svg",
                          "recall_tiou.svg"}) {
        EXPECT_TRUE(fs::exists(dir / ("ev/" + std::string(f)))) << f;
    }
    const std::string csv = slurp(dir / "ev/ar_an.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
    EXPECT_EQ(csv.substr(0, 6), "an,ar\n");
    const auto j = nlohmann::json::parse(slurp(dir / "ev/report.json"));
    EXPECT_TRUE(j.contains("auc"));
}

TEST(Plot, SvgDocument) {
    PlotSpec spec;
    spec.title = "a < b";
    const std::string svg = render_line_plot(spec, {{"s", {0.0, 0.5, 1.0}, {0.0, 0.2, 0.9}}});
    EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.find("<svg") != std::string::npos, true);
    EXPECT_NE(svg.find("</svg>"), std::string::npos);
    EXPECT_NE(svg.find("a &lt; b"), std::string::npos);
}

TEST(FormatNumber, Compact) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
}

}  // namespace
}  // namespace mgg::harness
