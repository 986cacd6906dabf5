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

#include "mgg/harness/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mgg::harness {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_line_plot(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    if (!(spec.x_max > spec.x_min) || !(spec.y_max > spec.y_min)) {
        throw std::invalid_argument("plot: empty axis range");
    }
    const double left = 64, right = 16, top = 36, bottom = 52;
    const double pw = spec.width - left - right;
    const double ph = spec.height - top - bottom;
    auto sx = [&](double x) { return left + (x - spec.x_min) / (spec.x_max - spec.x_min) * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - spec.y_min) / (spec.y_max - spec.y_min)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(spec.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(spec.title) << "</text>\n";
    // grid and ticks, 5 divisions per axis
    for (int i = 0; i <= 5; ++i) {
        const double xv = spec.x_min + (spec.x_max - spec.x_min) * i / 5.0;
        const double yv = spec.y_min + (spec.y_max - spec.y_min) * i / 5.0;
        o << "<line x1=\"" << num(sx(xv)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(sx(xv)) << "\" y2=\""
          << num(top + ph) << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<line x1=\"" << num(left) << "\" y1=\"" << num(sy(yv)) << "\" x2=\"" << num(left + pw) << "\" y2=\""
          << num(sy(yv)) << "\" stroke=\"#e0e0e0\"/>\n";
        o << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
          << num(xv) << "</text>\n";
        o << "<text x=\"" << num(left - 6) << "\" y=\"" << num(sy(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
          << "</text>\n";
    }
    o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(spec.height - 12.0)
      << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
    o << "<text transform=\"translate(16," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(spec.y_label) << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const PlotSeries& s = series[k];
        if (s.x.size() != s.y.size()) throw std::invalid_argument("plot: series '" + s.name + "' is ragged");
        const char* color = kPalette[k % std::size(kPalette)];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double x = std::clamp(s.x[i], spec.x_min, spec.x_max);
            const double y = std::clamp(s.y[i], spec.y_min, spec.y_max);
            o << (i ? " " : "") << num(sx(x)) << "," << num(sy(y));
        }
        o << "\"/>\n";
        const double ly = top + 14.0 + 16.0 * static_cast<double>(k);
        o << "<line x1=\"" << num(left + pw - 120) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw - 100)
          << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << num(left + pw - 94) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.name)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_line_plot(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("plot: cannot write " + path);
    out << render_line_plot(spec, series);
}

}  // namespace mgg::harness
