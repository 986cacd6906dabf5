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

#include "mgg/harness/model.hpp"
#include "mgg/harness/synth.hpp"
#include "mgg/metrics.hpp"
#include "mgg/seqgrad/ops.hpp"
#include "mgg/tba.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace mgg;
using seqgrad::Graph;
using seqgrad::Matrix;
using seqgrad::Parameter;
using seqgrad::Var;

Matrix<float> random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<float> n(0.0f, 1.0f);
    Matrix<float> m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
    return m;
}

void BM_Conv1dForwardBackward(benchmark::State& state) {
    const auto t = state.range(0);
    const auto ch = state.range(1);
    Parameter<float> x(random_matrix(t, ch, 1));
    Parameter<float> w(random_matrix(5 * ch, ch, 2));
    Parameter<float> b(Matrix<float>::Zero(1, ch));
    const seqgrad::ConvSpec spec{static_cast<int>(ch), 5, 1, seqgrad::Activation::kReLU};
    for (auto _ : state) {
        Graph<float> g;
        const Var y = seqgrad::conv1d(g, g.parameter(x), g.parameter(w), g.parameter(b), spec);
        g.backward(seqgrad::sum(g, y));
        benchmark::DoNotOptimize(w.grad.data());
    }
    state.SetItemsProcessed(state.iterations() * t);
}
BENCHMARK(BM_Conv1dForwardBackward)->Args({256, 64})->Args({256, 512})->Unit(benchmark::kMicrosecond);

void BM_BilinearMatch(benchmark::State& state) {
    const auto d = state.range(0);
    const auto rank = state.range(1);
    Parameter<float> h1(random_matrix(256, d, 1)), h2(random_matrix(256, d, 2));
    Parameter<float> w(random_matrix(d, d * rank, 3)), b(Matrix<float>::Zero(1, d * rank));
    for (auto _ : state) {
        Graph<float> g;
        const Var y = seqgrad::bilinear_match(g, g.parameter(h1), g.parameter(h2), g.parameter(w), g.parameter(b),
                                              static_cast<int>(rank));
        g.backward(seqgrad::sum(g, y));
        benchmark::DoNotOptimize(w.grad.data());
    }
}
BENCHMARK(BM_BilinearMatch)->Args({64, 16})->Args({128, 32})->Unit(benchmark::kMicrosecond);

void BM_ModelStep(benchmark::State& state) {
    harness::SynthConfig sc;
    sc.train_videos = 1;
    sc.val_videos = 0;
    const harness::SynthSplits data = harness::synth_generate(sc);
    harness::ModelSpec spec;
    spec.feature_dim = sc.feature_dim;
    harness::Model<float> model(spec, 1);
    for (auto _ : state) {
        Graph<float> g;
        const auto loss = model.loss(g, data.train[0], harness::Branch::kBoth, 0.1, 3);
        g.backward(loss.joint);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_ModelStep)->Unit(benchmark::kMillisecond);

SegmentList random_segments(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(0.0, 1000.0), len(4.0, 120.0), score(0.0, 1.0);
    SegmentList out;
    for (int i = 0; i < count; ++i) {
        const double a = pos(rng);
        out.push_back({a, a + len(rng), score(rng)});
    }
    return out;
}

void BM_Nms(benchmark::State& state) {
    const SegmentList segs = random_segments(static_cast<int>(state.range(0)), 5);
    for (auto _ : state) benchmark::DoNotOptimize(tba::nms(segs, 0.7));
}
BENCHMARK(BM_Nms)->Arg(200)->Arg(2000)->Unit(benchmark::kMicrosecond);

void BM_AucArAn(benchmark::State& state) {
    std::vector<metrics::VideoEval> corpus(50);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        corpus[i].proposals = random_segments(100, 10 + i);
        corpus[i].gt = random_segments(4, 1000 + i);
    }
    const auto grid = metrics::tiou_thresholds(metrics::TiouGrid::kActivityNet);
    for (auto _ : state) benchmark::DoNotOptimize(metrics::auc_ar_an(corpus, grid));
}
BENCHMARK(BM_AucArAn)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
