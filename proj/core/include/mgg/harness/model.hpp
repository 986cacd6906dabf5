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

#include "mgg/basenet.hpp"
#include "mgg/embed.hpp"
#include "mgg/fap.hpp"
#include "mgg/harness/config.hpp"
#include "mgg/harness/dataset.hpp"
#include "mgg/spp.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgg::harness {

struct ModelSpec {
    ModelConfig model;
    AblationFlags flags;
    bool stagewise = false;  // separate BaseNet for the FAP branch
    int feature_dim = 16;

    void validate() const;
    int input_dim() const { return feature_dim + (flags.disable_position ? 0 : model.position_dim); }
    basenet::BaseNetConfig basenet_config() const;
    spp::SppConfig spp_config() const;
    fap::FapConfig fap_config() const;
    spp::PyramidConfig pyramid() const { return spp_config().pyramid; }
    // Inputs are right-padded with zero features to a multiple of this.
    int required_multiple() const { return pyramid().required_multiple(); }
    int padded_length(int length) const;
};

enum class Branch { kSpp = 1, kFap = 2, kBoth = 3 };

inline bool has_spp(Branch b) { return (static_cast<int>(b) & 1) != 0; }
inline bool has_fap(Branch b) { return (static_cast<int>(b) & 2) != 0; }

template <typename S>
struct ForwardResult {
    int length = 0;  // valid frames
    int padded = 0;
    spp::AnchorGrid anchors;
    std::optional<spp::SppOutputs> spp;
    std::optional<fap::ActionnessVars> fap;
};

template <typename S>
struct LossResult {
    seqgrad::Var spp;    // invalid when the SPP branch is off
    seqgrad::Var fap;    // invalid when the FAP branch is off
    seqgrad::Var joint;  // spp + beta * fap over the active branches
};

template <typename S>
class Model {
   public:
    Model(const ModelSpec& spec, std::uint64_t seed);

    const ModelSpec& spec() const { return spec_; }

    // Zero-padded, optionally position-embedded input of padded_length rows.
    seqgrad::Matrix<S> prepare_input(const seqgrad::Matrix<float>& features) const;

    ForwardResult<S> forward(seqgrad::Graph<S>& g, const seqgrad::Matrix<float>& features, Branch branch);

    LossResult<S> loss(seqgrad::Graph<S>& g, const Video& video, Branch branch, double beta,
                       std::uint64_t sample_seed);

    // Visits every parameter as f(name, Parameter&), in a fixed order.
    template <typename F>
    void visit(F&& f) {
        basenet_.visit([&](const std::string& n, seqgrad::Parameter<S>& p) { f("basenet." + n, p); });
        if (fap_basenet_) {
            fap_basenet_->visit([&](const std::string& n, seqgrad::Parameter<S>& p) { f("fap_basenet." + n, p); });
        }
        spp_.visit([&](const std::string& n, seqgrad::Parameter<S>& p) { f("spp." + n, p); });
        fap_.visit([&](const std::string& n, seqgrad::Parameter<S>& p) { f("fap." + n, p); });
    }

    // Parameters that receive gradient when training the given branch.
    std::vector<seqgrad::Parameter<S>*> parameters(Branch branch);
    long long parameter_count();

    basenet::BaseNetParams<S>& basenet() { return basenet_; }
    spp::SppParams<S>& spp_params() { return spp_; }
    fap::FapParams<S>& fap_params() { return fap_; }

   private:
    seqgrad::Var trunk(seqgrad::Graph<S>& g, seqgrad::Var input, basenet::BaseNetParams<S>& params);

    ModelSpec spec_;
    basenet::BaseNetParams<S> basenet_;
    std::optional<basenet::BaseNetParams<S>> fap_basenet_;
    spp::SppParams<S> spp_;
    fap::FapParams<S> fap_;
};

extern template class Model<float>;
extern template class Model<double>;

// Mixes a base seed with indices into an independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace mgg::harness
