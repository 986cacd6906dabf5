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

#include "mgg/harness/evaluate.hpp"

#include "mgg/harness/plot.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace mgg::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<metrics::VideoEval> build_corpus(const Dataset& data, const std::vector<VideoProposals>& proposals) {
    std::map<std::string, const VideoProposals*> by_id;
    for (const VideoProposals& p : proposals) {
        if (!by_id.emplace(p.video_id, &p).second) {
            throw std::invalid_argument("evaluate: duplicate proposal block for video " + p.video_id);
        }
    }
    std::set<std::string> known;
    std::vector<metrics::VideoEval> corpus;
    corpus.reserve(data.size());
    for (const Video& v : data) {
        known.insert(v.id);
        metrics::VideoEval e;
        e.gt = v.annotations;
        if (auto it = by_id.find(v.id); it != by_id.end()) e.proposals = it->second->proposals;
        corpus.push_back(std::move(e));
    }
    for (const auto& [id, _] : by_id) {
        if (!known.count(id)) throw std::invalid_argument("evaluate: proposals for unknown video " + id);
    }
    return corpus;
}

metrics::EvalReport evaluate(const Dataset& data, const std::vector<VideoProposals>& proposals,
                             const metrics::EvalOptions& options) {
    const std::vector<metrics::VideoEval> corpus = build_corpus(data, proposals);
    return metrics::evaluate_corpus(corpus, options);
}

json report_to_json(const metrics::EvalReport& report, const metrics::EvalOptions& options) {
    json ar = json::object();
    for (const auto& [an, v] : report.ar_at_an) ar[std::to_string(an)] = v;
    json curves = json::array();
    for (const auto& [key, v] : report.recall_curves) curves.push_back({{"an", key.first}, {"tiou", key.second}, {"recall", v}});
    json buckets = json::array();
    for (const auto& b : report.duration_recall) {
        buckets.push_back({{"bucket", b.bucket.label},
                           {"lo", b.bucket.lo},
                           {"hi", std::isinf(b.bucket.hi) ? json(nullptr) : json(b.bucket.hi)},
                           {"gt_count", b.gt_count},
                           {"matched", b.matched},
                           {"recall", b.recall}});
    }
    return {{"tiou_grid", options.grid == metrics::TiouGrid::kThumos ? "thumos" : "activitynet"},
            {"tiou_thresholds", metrics::tiou_thresholds(options.grid)},
            {"auc", report.auc},
            {"ar_at_an", ar},
            {"recall_curves", curves},
            {"duration_recall", {{"an", options.duration_an}, {"tiou", options.duration_tiou}, {"buckets", buckets}}}};
}

void write_eval_outputs(const std::string& out_dir, const metrics::EvalReport& report,
                        const metrics::EvalOptions& options) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream f(dir / name, std::ios::trunc);
        if (!f) throw std::runtime_error("evaluate: cannot write " + (dir / name).string());
        return f;
    };
    {
        std::ofstream f = open("report.json");
        f << report_to_json(report, options).dump(2) << '\n';
    }
    {
        std::ofstream f = open("ar_an.csv");
        f << "an,ar\n";
        for (std::size_t i = 0; i < report.ar_curve.size(); ++i) {
            f << (i + 1) << ',' << format_number(report.ar_curve[i]) << '\n';
        }
    }
    {
        std::ofstream f = open("recall_tiou.csv");
        f << "tiou";
        for (int an : options.curve_ans) f << ",recall_at_" << an;
        f << '\n';
        for (double t : options.curve_thresholds) {
            f << format_number(t);
            for (int an : options.curve_ans) f << ',' << format_number(report.recall_curves.at({an, t}));
            f << '\n';
        }
    }
    {
        std::ofstream f = open("duration_recall.csv");
        f << "bucket,lo,hi,gt_count,matched,recall\n";
        for (const auto& b : report.duration_recall) {
            f << b.bucket.label << ',' << format_number(b.bucket.lo) << ','
              << (std::isinf(b.bucket.hi) ? std::string("inf") : format_number(b.bucket.hi)) << ',' << b.gt_count
              << ',' << b.matched << ',' << format_number(b.recall) << '\n';
        }
    }
    PlotSeries ar{"AR", {}, report.ar_curve};
    for (std::size_t i = 0; i < report.ar_curve.size(); ++i) ar.x.push_back(static_cast<double>(i + 1));
    PlotSpec ar_spec{"AR vs AN", "average number of proposals", "average recall", 0.0,
                     static_cast<double>(std::max<std::size_t>(report.ar_curve.size(), 2)), 0.0, 1.0};
    write_line_plot((dir / "ar_an.svg").string(), ar_spec, {ar});

    std::vector<PlotSeries> rt;
    for (int an : options.curve_ans) {
        PlotSeries s{"AN=" + std::to_string(an), {}, {}};
        for (double t : options.curve_thresholds) {
            s.x.push_back(t);
            s.y.push_back(report.recall_curves.at({an, t}));
        }
        rt.push_back(std::move(s));
    }
    PlotSpec rt_spec{"Recall vs tIoU", "tIoU", "recall", 0.0, 1.0, 0.0, 1.0};
    write_line_plot((dir / "recall_tiou.svg").string(), rt_spec, rt);
}

}  // namespace mgg::harness
