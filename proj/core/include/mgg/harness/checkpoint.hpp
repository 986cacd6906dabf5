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

#include "mgg/harness/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mgg::harness {

inline constexpr char kCheckpointMagic[] = "MGGCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

class FingerprintMismatch : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct Seeds {
    std::uint64_t synth = 0;
    std::uint64_t train = 0;
};

// {"layout": hyperparameters that determine the parameters,
//  "training": branch flags, "seeds": dataset and training seeds}.
nlohmann::json fingerprint(const ModelSpec& spec, const Seeds& seeds);

// Only "layout" has to agree; the other blocks are provenance. Returns an
// empty string when compatible, else the first differing layout key.
std::string fingerprint_conflict(const nlohmann::json& expected, const nlohmann::json& found);

// Layout: 7-byte magic, uint32 version, uint32 length + fingerprint JSON,
// uint32 parameter count, then per parameter: uint32 name length, name,
// uint32 rows, uint32 cols, rows * cols float32. Integers and floats are
// little-endian.
void save_checkpoint(const std::string& path, Model<float>& model, const nlohmann::json& fingerprint);

// Reads the fingerprint block only.
nlohmann::json read_fingerprint(const std::string& path);

// Loads into the model after checking the stored fingerprint against the expected one.
// Throws FingerprintMismatch on incompatible fingerprints.
void load_checkpoint(const std::string& path, Model<float>& model, const nlohmann::json& expected);

ModelSpec spec_from_fingerprint(const nlohmann::json& fp);

}  // namespace mgg::harness
