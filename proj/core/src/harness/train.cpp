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

#include "mgg/harness/train.hpp"

#include "mgg/seqgrad/ops.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

namespace mgg::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::kSpp: return "spp";
        case Branch::kFap: return "fap";
        case Branch::kBoth: return "joint";
    }
    return "joint";
}

struct Accumulator {
    LossSummary sum;
    int n = 0;

    void add(const LossSummary& l) {
        sum.joint += l.joint;
        sum.spp += l.spp;
        sum.fap += l.fap;
        ++n;
    }
    LossSummary mean() const {
        if (n == 0) return {};
        return {sum.joint / n, sum.spp / n, sum.fap / n};
    }
};

LossSummary read_losses(const seqgrad::Graph<float>& g, const LossResult<float>& l) {
    LossSummary s;
    s.joint = g.value(l.joint)(0, 0);
    if (l.spp.valid()) s.spp = g.value(l.spp)(0, 0);
    if (l.fap.valid()) s.fap = g.value(l.fap)(0, 0);
    return s;
}

void check_finite(const LossSummary& s, const Video& v, int epoch) {
    if (std::isfinite(s.joint)) return;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "training diverged at epoch %d on video %s: loss %g (spp %g, fap %g)", epoch,
                  v.id.c_str(), s.joint, s.spp, s.fap);
    throw TrainingDiverged(buf);
}

PhaseResult run_phase(Model<float>& model, const Dataset& data, const TrainConfig& cfg, Branch branch,
                      std::ostream* log) {
    PhaseResult out;
    out.branch = branch;
    out.initial = dataset_loss(model, data, branch, cfg.beta, cfg.seed);
    check_finite(out.initial, data.empty() ? Video{} : data.front(), 0);
    if (log) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "[%s] initial loss %.6f (spp %.6f, fap %.6f)\n", branch_name(branch),
                      out.initial.joint, out.initial.spp, out.initial.fap);
        *log << buf << std::flush;
    }
    Adam opt(model.parameters(branch), cfg);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    const float inv_batch = 1.0f / static_cast<float>(cfg.batch);
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = Clock::now();
        std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 0x5eedULL, static_cast<std::uint64_t>(epoch)));
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        Accumulator acc;
        for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(cfg.batch)) {
            const std::size_t stop = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch));
            opt.zero_grad();
            for (std::size_t k = start; k < stop; ++k) {
                const Video& v = data[order[k]];
                seqgrad::Graph<float> g;
                const std::uint64_t sample_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch), order[k]);
                LossResult<float> l = model.loss(g, v, branch, cfg.beta, sample_seed);
                const LossSummary s = read_losses(g, l);
                check_finite(s, v, epoch);
                acc.add(s);
                g.backward(seqgrad::scale(g, l.joint, inv_batch));
            }
            opt.step();
        }
        EpochLog e{epoch, acc.mean(), seconds_since(t0)};
        out.epochs.push_back(e);
        if (log) {
            char buf[160];
            std::snprintf(buf, sizeof(buf), "[%s] epoch %d/%d loss %.6f (spp %.6f, fap %.6f) %.1fs\n",
                          branch_name(branch), epoch, cfg.epochs, e.loss.joint, e.loss.spp, e.loss.fap, e.seconds);
            *log << buf << std::flush;
        }
    }
    out.final = dataset_loss(model, data, branch, cfg.beta, cfg.seed);
    check_finite(out.final, data.empty() ? Video{} : data.front(), cfg.epochs);
    if (log) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "[%s] final loss %.6f (spp %.6f, fap %.6f)\n", branch_name(branch),
                      out.final.joint, out.final.spp, out.final.fap);
        *log << buf << std::flush;
    }
    return out;
}

}  // namespace

Adam::Adam(std::vector<seqgrad::Parameter<float>*> params, const TrainConfig& config)
    : params_(std::move(params)),
      lr_(config.learning_rate),
      beta1_(config.adam_beta1),
      beta2_(config.adam_beta2),
      eps_(config.adam_epsilon) {
    for (auto* p : params_) {
        m_.push_back(seqgrad::Matrix<float>::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(seqgrad::Matrix<float>::Zero(p->value.rows(), p->value.cols()));
    }
}

void Adam::zero_grad() {
    for (auto* p : params_) p->zero_grad();
}

void Adam::step() {
    ++t_;
    const auto b1 = static_cast<float>(beta1_);
    const auto b2 = static_cast<float>(beta2_);
    const auto c1 = static_cast<float>(1.0 - std::pow(beta1_, static_cast<double>(t_)));
    const auto c2 = static_cast<float>(1.0 - std::pow(beta2_, static_cast<double>(t_)));
    const auto lr = static_cast<float>(lr_);
    const auto eps = static_cast<float>(eps_);
    for (std::size_t i = 0; i < params_.size(); ++i) {
        auto& p = *params_[i];
        m_[i] = b1 * m_[i] + (1.0f - b1) * p.grad;
        v_[i] = b2 * v_[i] + (1.0f - b2) * p.grad.cwiseAbs2();
        p.value.array() -= lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps);
    }
}

Branch training_branch(const AblationFlags& flags) {
    if (flags.spp_only) return Branch::kSpp;
    if (flags.fap_only) return Branch::kFap;
    return Branch::kBoth;
}

LossSummary dataset_loss(Model<float>& model, const Dataset& data, Branch branch, double beta, std::uint64_t seed) {
    Accumulator acc;
    for (std::size_t i = 0; i < data.size(); ++i) {
        seqgrad::Graph<float> g;
        const LossResult<float> l = model.loss(g, data[i], branch, beta, derive_seed(seed, 0, i));
        acc.add(read_losses(g, l));
    }
    return acc.mean();
}

TrainResult train(Model<float>& model, const Dataset& data, const TrainConfig& config, Branch branch,
                  std::ostream* log) {
    config.validate();
    if (data.empty()) throw std::invalid_argument("train: empty training set");
    const auto t0 = Clock::now();
    TrainResult out;
    if (config.stagewise) {
        if (branch != Branch::kBoth) throw std::invalid_argument("train: stagewise mode trains both branches");
        if (!model.spec().stagewise) throw std::invalid_argument("train: stagewise mode needs a model with two trunks");
        out.phases.push_back(run_phase(model, data, config, Branch::kSpp, log));
        out.phases.push_back(run_phase(model, data, config, Branch::kFap, log));
    } else {
        out.phases.push_back(run_phase(model, data, config, branch, log));
    }
    out.seconds = seconds_since(t0);
    return out;
}

}  // namespace mgg::harness
