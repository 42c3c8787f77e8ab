// Copyright 2026 The qeraser Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Artifact writers: probability series as CSV and SVG, joint tables as
 * JSON or CSV. Every artifact embeds the effective configuration that
 * produced it, and none embeds anything else that varies between runs.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "nchannel.hpp"
#include "twoslit.hpp"

namespace qeraser::io {

/// Raised when an artifact cannot be read or written.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// One plotted/tabulated probability curve.
struct Series {
    std::string x_label;
    std::vector<double> x;
    std::vector<double> probability;
    std::optional<std::string> condition;
    /// Detector-style data is drawn as bars, screen data as a line.
    bool discrete = false;
};

inline std::string condition_label(const MarkerState &m) {
    const auto basis = erasure_basis(0.0);
    const auto [d1, d2] = which_path_basis();
    const auto same = [&](const MarkerState &ref) {
        return std::abs(overlap_probability(ref, m) - 1.0) < kTolerance;
    };
    if (same(basis.plus)) {
        return "dplus";
    }
    if (same(basis.minus)) {
        return "dminus";
    }
    if (same(d1)) {
        return "d1";
    }
    if (same(d2)) {
        return "d2";
    }
    std::ostringstream os;
    os.precision(17);
    os << "marker(" << m.c1().real() << (m.c1().imag() < 0 ? "" : "+") << m.c1().imag()
       << "i;" << m.c2().real() << (m.c2().imag() < 0 ? "" : "+") << m.c2().imag() << "i)";
    return os.str();
}

inline std::string condition_label(const twoslit::ScreenCondition &c) {
    std::ostringstream os;
    os.precision(17);
    os << "theta=" << c.theta << ':' << (c.sign == twoslit::Sign::Plus ? "plus" : "minus");
    return os.str();
}

inline Series to_series(const nchannel::DetectorDistribution &dist) {
    Series s{"index", {}, dist.probabilities, std::nullopt, true};
    for (std::size_t j = 1; j <= dist.probabilities.size(); ++j) {
        s.x.push_back(static_cast<double>(j));
    }
    if (dist.condition) {
        s.condition = condition_label(*dist.condition);
    }
    return s;
}

inline Series to_series(const twoslit::ScreenPattern &pattern) {
    Series s{"x", pattern.x, pattern.probabilities, std::nullopt, false};
    if (pattern.condition) {
        s.condition = condition_label(*pattern.condition);
    }
    return s;
}

namespace detail {

inline void require_nonempty(const Series &s) {
    if (s.probability.empty() || s.x.size() != s.probability.size()) {
        throw Error(ErrorCode::EmptyResult, "nothing to emit");
    }
}

inline void write_config_comment(std::ostream &os, const nlohmann::json &config) {
    if (!config.is_null()) {
        os << "# config: " << config.dump() << '\n';
    }
}

inline std::string xml_escape(const std::string &text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

inline std::string fmt(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

} // namespace detail

/// `index_or_x,probability[,condition]` with 17 significant digits.
inline void emit_pattern_csv(std::ostream &os, const Series &s,
                             const nlohmann::json &config = nullptr) {
    detail::require_nonempty(s);
    detail::write_config_comment(os, config);
    os << s.x_label << ",probability" << (s.condition ? ",condition" : "") << '\n';
    const auto old = os.precision(17);
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        os << s.x[i] << ',' << s.probability[i];
        if (s.condition) {
            os << ',' << *s.condition;
        }
        os << '\n';
    }
    os.precision(old);
    if (!os) {
        throw IoError("failed writing CSV");
    }
}

/// Inverse of emit_pattern_csv; comment lines are skipped.
inline Series read_pattern_csv(std::istream &is) {
    Series s;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        if (!header) {
            if (fields.size() < 2 || fields[1] != "probability") {
                throw IoError("unexpected CSV header: " + line);
            }
            s.x_label = fields[0];
            s.discrete = s.x_label == "index";
            header = true;
            continue;
        }
        if (fields.size() < 2) {
            throw IoError("short CSV row: " + line);
        }
        try {
            s.x.push_back(std::stod(fields[0]));
            s.probability.push_back(std::stod(fields[1]));
        } catch (const std::exception &) {
            throw IoError("bad number in CSV row: " + line);
        }
        if (fields.size() > 2) {
            s.condition = fields[2];
        }
    }
    if (!header) {
        throw IoError("CSV has no header");
    }
    return s;
}

inline nlohmann::json to_json(const analysis::JointTable &table) {
    nlohmann::json probs = nlohmann::json::array();
    for (std::size_t r = 0; r < table.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < table.cols(); ++c) {
            row.push_back(table.at(r, c));
        }
        probs.push_back(std::move(row));
    }
    return {{"rows", table.row_labels},
            {"cols", table.col_labels},
            {"probabilities", std::move(probs)},
            {"mutual_information", analysis::mutual_information(table)}};
}

inline void emit_joint_json(std::ostream &os, const analysis::JointTable &table,
                            const nlohmann::json &config = nullptr) {
    if (table.rows() == 0 || table.cols() == 0) {
        throw Error(ErrorCode::EmptyResult, "empty joint table");
    }
    nlohmann::json doc;
    if (!config.is_null()) {
        doc["config"] = config;
    }
    doc["table"] = to_json(table);
    os << doc.dump(2) << '\n';
    if (!os) {
        throw IoError("failed writing JSON");
    }
}

inline void emit_series_json(std::ostream &os, const Series &s,
                             const nlohmann::json &config = nullptr) {
    detail::require_nonempty(s);
    nlohmann::json doc;
    if (!config.is_null()) {
        doc["config"] = config;
    }
    doc["x_label"] = s.x_label;
    doc["x"] = s.x;
    doc["probability"] = s.probability;
    if (s.condition) {
        doc["condition"] = *s.condition;
    }
    os << doc.dump(2) << '\n';
    if (!os) {
        throw IoError("failed writing JSON");
    }
}

/// `row,col,probability` long-form table.
inline void emit_joint_csv(std::ostream &os, const analysis::JointTable &table,
                           const nlohmann::json &config = nullptr) {
    if (table.rows() == 0 || table.cols() == 0) {
        throw Error(ErrorCode::EmptyResult, "empty joint table");
    }
    detail::write_config_comment(os, config);
    os << "row,col,probability\n";
    const auto old = os.precision(17);
    for (std::size_t r = 0; r < table.rows(); ++r) {
        for (std::size_t c = 0; c < table.cols(); ++c) {
            os << table.row_labels[r] << ',' << table.col_labels[c] << ',' << table.at(r, c)
               << '\n';
        }
    }
    os.precision(old);
    if (!os) {
        throw IoError("failed writing CSV");
    }
}

/**
 * Self-contained SVG chart. Several series share the axes; line series
 * cycle through solid, dashed and dotted strokes.
 */
inline void emit_svg(std::ostream &os, const std::vector<Series> &series,
                     const std::string &title, const nlohmann::json &config = nullptr) {
    if (series.empty()) {
        throw Error(ErrorCode::EmptyResult, "nothing to plot");
    }
    for (const auto &s : series) {
        detail::require_nonempty(s);
    }
    constexpr double width = 720.0;
    constexpr double height = 440.0;
    constexpr double left = 80.0;
    constexpr double right = 20.0;
    constexpr double top = 50.0;
    constexpr double bottom = 60.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_hi = 0.0;
    bool discrete = false;
    for (const auto &s : series) {
        x_lo = std::min(x_lo, *std::min_element(s.x.begin(), s.x.end()));
        x_hi = std::max(x_hi, *std::max_element(s.x.begin(), s.x.end()));
        y_hi = std::max(y_hi, *std::max_element(s.probability.begin(), s.probability.end()));
        discrete = discrete || s.discrete;
    }
    if (discrete) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (!(x_hi > x_lo)) {
        x_hi = x_lo + 1.0;
    }
    y_hi = (y_hi > 0.0) ? 1.1 * y_hi : 1.0;
    const auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    const auto py = [&](double y) { return top + plot_h - y / y_hi * plot_h; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<title>" << detail::xml_escape(title) << "</title>\n";
    if (!config.is_null()) {
        os << "<desc>" << detail::xml_escape(config.dump()) << "</desc>\n";
    }
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << detail::xml_escape(title) << "</text>\n";

    // Axes and ticks.
    os << "<g stroke=\"black\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
       << "\" y2=\"" << top + plot_h << "\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
       << top + plot_h << "\"/>\n";
    os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
    constexpr int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double xv = x_lo + (x_hi - x_lo) * t / ticks;
        const double yv = y_hi * t / ticks;
        os << "<text x=\"" << detail::fmt(px(xv)) << "\" y=\"" << top + plot_h + 16
           << "\" text-anchor=\"middle\">" << detail::fmt_g(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt(py(yv) + 4)
           << "\" text-anchor=\"end\">" << detail::fmt_g(yv) << "</text>\n";
    }
    os << "</g>\n";
    os << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << detail::xml_escape(series.front().discrete ? "detector" : series.front().x_label)
       << "</text>\n";
    os << "<text transform=\"translate(20," << top + plot_h / 2
       << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"13\">probability</text>\n";

    static const char *const dashes[] = {"", "8 4", "2 3"};
    static const char *const colors[] = {"#1f4e9c", "#b8412c", "#3c8c3c", "#6b3fa0"};
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto &s = series[si];
        const char *color = colors[si % 4];
        if (s.discrete) {
            const double bar = 0.8 * plot_w / (x_hi - x_lo) / static_cast<double>(series.size());
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double x0 = px(s.x[i]) - 0.5 * bar * static_cast<double>(series.size()) +
                                  bar * static_cast<double>(si);
                os << "<rect x=\"" << detail::fmt(x0) << "\" y=\"" << detail::fmt(py(s.probability[i]))
                   << "\" width=\"" << detail::fmt(bar) << "\" height=\""
                   << detail::fmt(top + plot_h - py(s.probability[i])) << "\" fill=\"" << color
                   << "\"/>\n";
            }
        } else {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
            if (*dashes[si % 3] != '\0') {
                os << " stroke-dasharray=\"" << dashes[si % 3] << '"';
            }
            os << " points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                os << (i ? " " : "") << detail::fmt(px(s.x[i])) << ','
                   << detail::fmt(py(s.probability[i]));
            }
            os << "\"/>\n";
        }
        // Legend entry.
        const double ly = top + 14.0 * static_cast<double>(si);
        os << "<text x=\"" << left + plot_w - 4 << "\" y=\"" << ly + 10
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
           << "\">" << detail::xml_escape(s.condition.value_or("unconditioned")) << "</text>\n";
    }
    os << "</svg>\n";
    if (!os) {
        throw IoError("failed writing SVG");
    }
}

} // namespace qeraser::io
