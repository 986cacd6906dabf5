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

#include "mgg/harness/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <vector>

namespace mgg::harness {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

namespace {

constexpr std::size_t kMagicSize = sizeof(kCheckpointMagic) - 1;

void put_u32(std::ostream& out, std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), sizeof(v)); }

std::uint32_t get_u32(std::istream& in, const std::string& path) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw std::runtime_error("checkpoint: truncated file " + path);
    return v;
}

std::string get_bytes(std::istream& in, std::uint32_t n, const std::string& path) {
    std::string s(n, '\0');
    in.read(s.data(), n);
    if (!in) throw std::runtime_error("checkpoint: truncated file " + path);
    return s;
}

json read_header(std::istream& in, const std::string& path) {
    char magic[kMagicSize];
    in.read(magic, kMagicSize);
    if (!in || std::memcmp(magic, kCheckpointMagic, kMagicSize) != 0) {
        throw std::runtime_error("checkpoint: " + path + " is not a checkpoint (bad magic)");
    }
    const std::uint32_t version = get_u32(in, path);
    if (version != kCheckpointVersion) {
        throw std::runtime_error("checkpoint: " + path + " has format version " + std::to_string(version) +
                                 ", expected " + std::to_string(kCheckpointVersion));
    }
    const std::uint32_t n = get_u32(in, path);
    try {
        return json::parse(get_bytes(in, n, path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error("checkpoint: " + path + ": bad fingerprint block: " + e.what());
    }
}

}  // namespace

json fingerprint(const ModelSpec& spec, const Seeds& seeds) {
    const ModelConfig& m = spec.model;
    json layout = {{"feature_dim", spec.feature_dim},
                   {"position_dim", m.position_dim},
                   {"hidden", m.hidden},
                   {"rank", m.rank},
                   {"basenet_kernel", m.basenet_kernel},
                   {"levels", m.levels},
                   {"base_stride", m.base_stride},
                   {"anchors_per_location", m.scales.size()},
                   {"scales", m.scales},
                   {"head_kernel", m.head_kernel},
                   {"share_heads", m.share_heads},
                   {"fap_hidden", m.fap_hidden},
                   {"fap_kernel", m.fap_kernel},
                   {"stagewise", spec.stagewise},
                   {"disable_position", spec.flags.disable_position},
                   {"disable_bilinear", spec.flags.disable_bilinear},
                   {"disable_lateral", spec.flags.disable_lateral}};
    return {{"layout", layout},
            {"training", {{"spp_only", spec.flags.spp_only}, {"fap_only", spec.flags.fap_only}}},
            {"seeds", {{"synth", seeds.synth}, {"train", seeds.train}}}};
}

std::string fingerprint_conflict(const json& expected, const json& found) {
    if (!found.contains("layout") || !found["layout"].is_object()) return "layout";
    const json& want = expected.at("layout");
    const json& got = found["layout"];
    for (auto it = want.begin(); it != want.end(); ++it) {
        auto f = got.find(it.key());
        if (f == got.end() || *f != it.value()) return it.key();
    }
    for (auto it = got.begin(); it != got.end(); ++it) {
        if (!want.contains(it.key())) return it.key();
    }
    return {};
}

void save_checkpoint(const std::string& path, Model<float>& model, const json& fp) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot write " + path);
    out.write(kCheckpointMagic, kMagicSize);
    put_u32(out, kCheckpointVersion);
    const std::string fp_text = fp.dump();
    put_u32(out, static_cast<std::uint32_t>(fp_text.size()));
    out.write(fp_text.data(), static_cast<std::streamsize>(fp_text.size()));
    std::uint32_t count = 0;
    model.visit([&count](const std::string&, seqgrad::Parameter<float>&) { ++count; });
    put_u32(out, count);
    model.visit([&out](const std::string& name, seqgrad::Parameter<float>& p) {
        put_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        put_u32(out, static_cast<std::uint32_t>(p.value.rows()));
        put_u32(out, static_cast<std::uint32_t>(p.value.cols()));
        out.write(reinterpret_cast<const char*>(p.value.data()),
                  static_cast<std::streamsize>(p.value.size() * sizeof(float)));
    });
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

json read_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    return read_header(in, path);
}

void load_checkpoint(const std::string& path, Model<float>& model, const json& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    const json found = read_header(in, path);
    const std::string conflict = fingerprint_conflict(expected, found);
    if (!conflict.empty()) {
        auto show = [&conflict](const json& fp) {
            if (!fp.contains("layout") || !fp["layout"].contains(conflict)) return std::string("<absent>");
            return fp["layout"][conflict].dump();
        };
        const std::string want = show(expected);
        const std::string got = show(found);
        throw FingerprintMismatch("checkpoint: " + path + " was trained with " + conflict + " = " + got +
                                  " but the configuration has " + want);
    }
    const std::uint32_t count = get_u32(in, path);
    std::map<std::string, seqgrad::Matrix<float>> blobs;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::string name = get_bytes(in, get_u32(in, path), path);
        const std::uint32_t rows = get_u32(in, path);
        const std::uint32_t cols = get_u32(in, path);
        seqgrad::Matrix<float> m(rows, cols);
        in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(float)));
        if (!in) throw std::runtime_error("checkpoint: truncated file " + path);
        blobs.emplace(name, std::move(m));
    }
    std::size_t used = 0;
    model.visit([&](const std::string& name, seqgrad::Parameter<float>& p) {
        auto it = blobs.find(name);
        if (it == blobs.end()) throw std::runtime_error("checkpoint: " + path + " lacks parameter " + name);
        if (it->second.rows() != p.value.rows() || it->second.cols() != p.value.cols()) {
            throw std::runtime_error("checkpoint: " + path + ": parameter " + name + " has the wrong shape");
        }
        p.value = it->second;
        p.zero_grad();
        ++used;
    });
    if (used != blobs.size()) throw std::runtime_error("checkpoint: " + path + " has unexpected parameters");
}

ModelSpec spec_from_fingerprint(const json& fp) {
    ModelSpec s;
    try {
        const json& l = fp.at("layout");
        s.feature_dim = l.at("feature_dim").get<int>();
        s.model.position_dim = l.at("position_dim").get<int>();
        s.model.hidden = l.at("hidden").get<int>();
        s.model.rank = l.at("rank").get<int>();
        s.model.basenet_kernel = l.at("basenet_kernel").get<int>();
        s.model.levels = l.at("levels").get<int>();
        s.model.base_stride = l.at("base_stride").get<int>();
        s.model.scales = l.at("scales").get<std::vector<double>>();
        s.model.head_kernel = l.at("head_kernel").get<int>();
        s.model.share_heads = l.at("share_heads").get<bool>();
        s.model.fap_hidden = l.at("fap_hidden").get<int>();
        s.model.fap_kernel = l.at("fap_kernel").get<int>();
        s.stagewise = l.at("stagewise").get<bool>();
        s.flags.disable_position = l.at("disable_position").get<bool>();
        s.flags.disable_bilinear = l.at("disable_bilinear").get<bool>();
        s.flags.disable_lateral = l.at("disable_lateral").get<bool>();
        const json& t = fp.at("training");
        s.flags.spp_only = t.at("spp_only").get<bool>();
        s.flags.fap_only = t.at("fap_only").get<bool>();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("checkpoint: incomplete fingerprint: ") + e.what());
    }
    s.validate();
    return s;
}

}  // namespace mgg::harness
