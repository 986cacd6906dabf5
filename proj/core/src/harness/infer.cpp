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

#include "mgg/harness/infer.hpp"

#include "mgg/tba.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

namespace mgg::harness {

using nlohmann::json;

InferPath infer_path(const AblationFlags& flags) {
    if (flags.spp_only) return InferPath::kSppOnly;
    if (flags.fap_only) return InferPath::kFapOnly;
    return InferPath::kFull;
}

const char* to_string(InferPath path) {
    switch (path) {
        case InferPath::kFull: return "full";
        case InferPath::kSppOnly: return "spp_only";
        case InferPath::kFapOnly: return "fap_only";
    }
    return "full";
}

void rank_proposals(SegmentList& proposals) {
    std::stable_sort(proposals.begin(), proposals.end(), [](const Segment& a, const Segment& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.t_s < b.t_s;
    });
}

VideoProposals infer_video(Model<float>& model, const Video& video, InferPath path, const InferConfig& config) {
    const Branch branch = path == InferPath::kFull      ? Branch::kBoth
                          : path == InferPath::kSppOnly ? Branch::kSpp
                                                        : Branch::kFap;
    seqgrad::Graph<float> g;
    const ForwardResult<float> fwd = model.forward(g, video.features, branch);
    const double length = video.length();
    VideoProposals out{video.id, {}};
    if (path == InferPath::kFapOnly) {
        const fap::ActionnessTriple a = fap::read_actionness(g, *fwd.fap, static_cast<std::size_t>(fwd.length));
        out.proposals = tba::tag_group(a.middle, config.tba);
        rank_proposals(out.proposals);
        return out;
    }
    SegmentList segs = spp::decode_proposals(fwd.anchors, g.value(fwd.spp->scores), g.value(fwd.spp->offsets), length);
    segs = tba::nms(segs, config.tba.nms_tiou);
    if (path == InferPath::kFull) {
        const fap::ActionnessTriple a = fap::read_actionness(g, *fwd.fap, static_cast<std::size_t>(fwd.length));
        if (config.stage1) segs = tba::stage1_adjust(segs, a.start, a.end, config.tba);
        if (config.stage2) segs = tba::stage2_fuse(segs, tba::tag_group(a.middle, config.tba));
    }
    rank_proposals(segs);
    out.proposals = std::move(segs);
    return out;
}

std::vector<VideoProposals> infer_dataset(Model<float>& model, const Dataset& data, InferPath path,
                                          const InferConfig& config) {
    config.tba.validate();
    std::vector<VideoProposals> out;
    out.reserve(data.size());
    for (const Video& v : data) out.push_back(infer_video(model, v, path, config));
    return out;
}

void write_proposals(const std::vector<VideoProposals>& proposals, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("proposals: cannot write " + path);
    for (const VideoProposals& v : proposals) {
        for (const Segment& s : v.proposals) {
            out << json{{"video_id", v.video_id}, {"t_s", s.t_s}, {"t_e", s.t_e}, {"score", s.score}}.dump() << '\n';
        }
    }
    if (!out) throw std::runtime_error("proposals: write failed for " + path);
}

std::vector<VideoProposals> read_proposals(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("proposals: cannot open " + path);
    std::vector<VideoProposals> out;
    std::map<std::string, std::size_t> index;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json rec = json::parse(line);
            const std::string id = rec.at("video_id").get<std::string>();
            const Segment s{rec.at("t_s").get<double>(), rec.at("t_e").get<double>(), rec.at("score").get<double>()};
            auto [it, fresh] = index.emplace(id, out.size());
            if (fresh) out.push_back({id, {}});
            out[it->second].proposals.push_back(s);
        } catch (const json::exception& e) {
            throw std::runtime_error("proposals: " + path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace mgg::harness
