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

#include "mgg/harness/dataset.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace mgg::harness {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "feature files are written in native byte order");

void write_features(const seqgrad::Matrix<float>& features, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("dataset: cannot write " + path);
    out.write(reinterpret_cast<const char*>(features.data()),
              static_cast<std::streamsize>(features.size() * sizeof(float)));
    if (!out) throw std::runtime_error("dataset: short write to " + path);
}

seqgrad::Matrix<float> read_features(const std::string& path, int length, int dim) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    const auto expected = static_cast<std::uintmax_t>(length) * static_cast<std::uintmax_t>(dim) * sizeof(float);
    const auto actual = fs::file_size(path);
    if (actual != expected) {
        throw std::runtime_error("dataset: " + path + " has " + std::to_string(actual) + " bytes, expected " +
                                 std::to_string(expected));
    }
    seqgrad::Matrix<float> m(length, dim);
    in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(expected));
    if (!in) throw std::runtime_error("dataset: short read from " + path);
    return m;
}

void write_dataset(const Dataset& videos, const std::string& manifest_path, const std::string& feature_subdir) {
    const fs::path manifest(manifest_path);
    const fs::path root = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
    fs::create_directories(root / feature_subdir);
    std::ofstream out(manifest_path, std::ios::trunc);
    if (!out) throw std::runtime_error("dataset: cannot write " + manifest_path);
    for (const Video& v : videos) {
        const std::string rel = (fs::path(feature_subdir) / (v.id + ".f32")).generic_string();
        write_features(v.features, (root / rel).string());
        json ann = json::array();
        for (const Segment& s : v.annotations) ann.push_back({s.t_s, s.t_e});
        json rec = {{"video_id", v.id},
                    {"l_s", v.length()},
                    {"d_f", v.feature_dim()},
                    {"feature_file", rel},
                    {"annotations", ann}};
        out << rec.dump() << '\n';
    }
    if (!out) throw std::runtime_error("dataset: write failed for " + manifest_path);
}

Dataset read_dataset(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("dataset: cannot open " + manifest_path);
    const fs::path manifest(manifest_path);
    const fs::path root = manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
    Dataset out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = manifest_path + ":" + std::to_string(line_no);
        try {
            const json rec = json::parse(line);
            Video v;
            v.id = rec.at("video_id").get<std::string>();
            const int length = rec.at("l_s").get<int>();
            const int dim = rec.at("d_f").get<int>();
            if (length < 1 || dim < 1) throw std::runtime_error("l_s and d_f must be positive");
            v.features = read_features((root / rec.at("feature_file").get<std::string>()).string(), length, dim);
            for (const json& a : rec.at("annotations")) {
                const Segment s{a.at(0).get<double>(), a.at(1).get<double>(), 0.0};
                if (!s.valid_within(length)) throw std::runtime_error("annotation outside [0, l_s] or empty");
                v.annotations.push_back(s);
            }
            out.push_back(std::move(v));
        } catch (const json::exception& e) {
            throw std::runtime_error("dataset: " + where + ": " + e.what());
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("dataset: " + where + ": " + e.what());
        }
    }
    return out;
}

}  // namespace mgg::harness
