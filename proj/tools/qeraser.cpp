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
 * qeraser command-line scenario runner.
 *
 *   qeraser [--config FILE] <nchannel|twoslit|epr|sample|check> [flags]
 *
 * Parameters come from the config file's "parameters" object and are
 * overridden by flags. The effective configuration is embedded in every
 * artifact. Artifacts go to --output, else $QERASER_OUTPUT_DIR/<kind>.<ext>,
 * else stdout. Failures print one JSON object on stderr and exit with
 * 2 (parse), 3 (validation) or 4 (I/O).
 */

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qeraser/analysis.hpp"
#include "qeraser/invariants.hpp"
#include "qeraser/io.hpp"
#include "qeraser/nchannel.hpp"
#include "qeraser/twoslit.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using namespace qeraser;

struct ParseFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Type { Int, Number, Text, NumberList };

struct Param {
    std::string key;
    Type type;
    json fallback;
    std::vector<std::string> choices;
    std::string help;
};

const std::vector<Param> &geometry_params() {
    static const std::vector<Param> p = {
        {"preset", Type::Text, "default", {"default"}, "Screen preset"},
        {"d", Type::Number, 2.0, {}, "Slit separation"},
        {"lambda", Type::Number, 1.0, {}, "Wavelength"},
        {"L", Type::Number, 1000.0, {}, "Slit-screen distance"},
        {"x_min", Type::Number, nullptr, {}, "Screen start (default -2w)"},
        {"x_max", Type::Number, nullptr, {}, "Screen end (default 2w)"},
        {"bins", Type::Int, 512, {}, "Number of screen bins"},
        {"envelope", Type::Text, "flat", {"flat", "gaussian"}, "Envelope shape"},
        {"sigma", Type::Number, nullptr, {}, "Gaussian envelope width"},
    };
    return p;
}

const std::vector<Param> &channel_params() {
    static const std::vector<Param> p = {
        {"n", Type::Int, 10, {}, "Number of channels"},
        {"preset", Type::Text, "default", {"default", "dft", "custom"}, "Phase preset"},
        {"thetas", Type::NumberList, nullptr, {}, "Path A phases (custom preset)"},
        {"phis", Type::NumberList, nullptr, {}, "Path B phases (custom preset)"},
    };
    return p;
}

std::vector<Param> concat(std::vector<Param> a, const std::vector<Param> &b) {
    for (const auto &p : b) {
        if (std::none_of(a.begin(), a.end(), [&](const Param &q) { return q.key == p.key; })) {
            a.push_back(p);
        }
    }
    return a;
}

const std::map<std::string, std::vector<Param>> &schemas() {
    static const std::map<std::string, std::vector<Param>> s = [] {
        std::map<std::string, std::vector<Param>> m;
        m["nchannel"] = concat(
            {
                {"state", Type::Text, "marked", {"marked", "bare"}, "With or without path marker"},
                {"condition", Type::Text, "none", {"none", "d1", "d2", "dplus", "dminus"},
                 "Marker outcome to condition on"},
                {"theta", Type::Number, 0.0, {}, "Erasure basis phase for dplus/dminus"},
                {"report", Type::Text, "distribution", {"distribution", "delayed", "joint"},
                 "What to emit"},
                {"basis", Type::Text, "erasure", {"erasure", "which_path"},
                 "Marker basis for the joint report"},
            },
            channel_params());
        m["twoslit"] = concat(
            {
                {"pattern", Type::Text, "conditioned", {"conditioned", "washed", "nomarker", "all"},
                 "Which screen pattern"},
                {"theta", Type::Number, 0.0, {}, "Erasure basis phase"},
                {"sign", Type::Text, "plus", {"plus", "minus"}, "Erasure outcome"},
                {"report", Type::Text, "pattern", {"pattern", "delayed"}, "What to emit"},
            },
            geometry_params());
        m["epr"] = {
            {"basis1", Type::Text, "z", {"z", "x"}, "Spin 1 measurement basis"},
            {"basis2", Type::Text, "z", {"z", "x"}, "Spin 2 measurement basis"},
        };
        auto sample = concat(
            {
                {"scenario", Type::Text, "nchannel", {"nchannel", "twoslit"}, "Scenario to sample"},
                {"scenario_id", Type::Text, nullptr, {}, "Label written into each event"},
                {"basis", Type::Text, "erasure", {"erasure", "which_path"}, "Marker basis"},
                {"theta", Type::Number, 0.0, {}, "Erasure basis phase"},
                {"order", Type::Text, "system_first", {"marker_first", "system_first"},
                 "Measurement order"},
                {"count", Type::Int, 1000, {}, "Number of events"},
                {"seed", Type::Int, 1, {}, "Stream seed"},
            },
            channel_params());
        // The two presets share the key; accept either vocabulary.
        for (auto &p : sample) {
            if (p.key == "preset") {
                p.choices = {"default", "dft", "custom"};
            }
        }
        m["sample"] = concat(sample, geometry_params());
        m["check"] = {};
        return m;
    }();
    return s;
}

const Param &find_param(const std::string &kind, const std::string &key) {
    for (const auto &p : schemas().at(kind)) {
        if (p.key == key) {
            return p;
        }
    }
    throw ValidationFailure("unknown parameter '" + key + "' for " + kind);
}

json check_value(const Param &p, const json &v) {
    switch (p.type) {
    case Type::Int:
        if (!v.is_number_integer()) {
            throw ValidationFailure(p.key + " must be an integer");
        }
        return v;
    case Type::Number:
        if (!v.is_number()) {
            throw ValidationFailure(p.key + " must be a number");
        }
        return v.get<double>();
    case Type::Text:
        if (!v.is_string()) {
            throw ValidationFailure(p.key + " must be a string");
        }
        if (!p.choices.empty() &&
            std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) == p.choices.end()) {
            throw ValidationFailure("invalid " + p.key + " '" + v.get<std::string>() + "'");
        }
        return v;
    case Type::NumberList:
        if (!v.is_array() || !std::all_of(v.begin(), v.end(), [](const json &e) { return e.is_number(); })) {
            throw ValidationFailure(p.key + " must be a list of numbers");
        }
        return v;
    }
    return v;
}

double parse_number(const std::string &key, const std::string &text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != text.size()) {
        throw ParseFailure("--" + key + ": '" + text + "' is not a number");
    }
    return v;
}

json parse_flag(const Param &p, const std::string &text) {
    switch (p.type) {
    case Type::Int: {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != text.size()) {
            throw ParseFailure("--" + p.key + ": '" + text + "' is not an integer");
        }
        return v;
    }
    case Type::Number:
        return parse_number(p.key, text);
    case Type::Text:
        return text;
    case Type::NumberList: {
        json list = json::array();
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            list.push_back(parse_number(p.key, item));
        }
        return list;
    }
    }
    return nullptr;
}

struct Request {
    std::string kind;
    json params = json::object();
    std::string format = "csv";
    std::optional<std::string> output_path;

    [[nodiscard]] json effective() const {
        return {{"kind", kind}, {"parameters", params}, {"output", format}};
    }
    template <typename T> [[nodiscard]] T get(const std::string &key) const {
        return params.at(key).get<T>();
    }
    [[nodiscard]] bool has(const std::string &key) const {
        return params.contains(key) && !params.at(key).is_null();
    }
};

// Scenario construction -----------------------------------------------------

nchannel::PhaseConfig phase_config(const Request &r) {
    const auto n = r.get<long long>("n");
    if (n < 2) {
        throw ValidationFailure("n must be at least 2");
    }
    const auto preset = r.get<std::string>("preset");
    if (preset == "default") {
        return nchannel::default_config(static_cast<std::size_t>(n));
    }
    if (preset == "dft") {
        std::vector<double> thetas(static_cast<std::size_t>(n), 0.0);
        std::vector<double> phis;
        for (long long j = 1; j <= n; ++j) {
            phis.push_back(2 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
        }
        return {thetas, phis};
    }
    if (!r.has("thetas") || !r.has("phis")) {
        throw ValidationFailure("custom preset needs thetas and phis");
    }
    auto thetas = r.get<std::vector<double>>("thetas");
    auto phis = r.get<std::vector<double>>("phis");
    if (thetas.size() != static_cast<std::size_t>(n)) {
        throw ValidationFailure("thetas has " + std::to_string(thetas.size()) + " entries, n is " +
                                std::to_string(n));
    }
    return {std::move(thetas), std::move(phis)};
}

twoslit::ScreenGrid screen_grid(const Request &r) {
    twoslit::ScreenGeometry g;
    g.d = r.get<double>("d");
    g.lambda = r.get<double>("lambda");
    g.L = r.get<double>("L");
    const auto bins = r.get<long long>("bins");
    if (bins < 2) {
        throw ValidationFailure("bins must be at least 2");
    }
    g.bins = static_cast<std::size_t>(bins);
    const double w = g.fringe_width();
    g.x_min = r.has("x_min") ? r.get<double>("x_min") : -2 * w;
    g.x_max = r.has("x_max") ? r.get<double>("x_max") : 2 * w;
    auto envelope = twoslit::Envelope::flat();
    if (r.get<std::string>("envelope") == "gaussian") {
        if (!r.has("sigma")) {
            throw ValidationFailure("gaussian envelope needs sigma");
        }
        envelope = twoslit::Envelope::gaussian(r.get<double>("sigma"));
    }
    return twoslit::build_grid(g, envelope);
}

MarkerPair chosen_basis(const Request &r) {
    if (r.get<std::string>("basis") == "which_path") {
        return which_path_basis();
    }
    return erasure_basis(r.get<double>("theta")).states();
}

// Artifacts -----------------------------------------------------------------

using Writer = std::function<void(std::ostream &)>;

struct Artifact {
    std::string extension;
    Writer write;
};

void require_format(const Request &r, std::initializer_list<const char *> allowed) {
    for (const char *f : allowed) {
        if (r.format == f) {
            return;
        }
    }
    throw ValidationFailure("format '" + r.format + "' is not available for this output");
}

Artifact series_artifact(const Request &r, std::vector<io::Series> series, std::string title) {
    const json config = r.effective();
    if (r.format == "svg") {
        return {"svg", [=](std::ostream &os) { io::emit_svg(os, series, title, config); }};
    }
    if (r.format == "json") {
        require_format(r, {"json"});
        if (series.size() != 1) {
            json doc = {{"config", config}, {"series", json::array()}};
            for (const auto &s : series) {
                io::detail::require_nonempty(s);
                doc["series"].push_back({{"x_label", s.x_label},
                                         {"x", s.x},
                                         {"probability", s.probability},
                                         {"condition", s.condition.value_or("none")}});
            }
            return {"json", [=](std::ostream &os) { os << doc.dump(2) << '\n'; }};
        }
        return {"json", [=](std::ostream &os) { io::emit_series_json(os, series.front(), config); }};
    }
    require_format(r, {"csv"});
    return {"csv", [=](std::ostream &os) {
                for (std::size_t i = 0; i < series.size(); ++i) {
                    auto s = series[i];
                    if (series.size() > 1 && !s.condition) {
                        s.condition = "none";
                    }
                    std::ostringstream block;
                    io::emit_pattern_csv(block, s, i == 0 ? config : json(nullptr));
                    std::string text = block.str();
                    if (i > 0) {
                        text = text.substr(text.find('\n') + 1); // one header only
                    }
                    os << text;
                }
            }};
}

Artifact table_artifact(const Request &r, const analysis::JointTable &table) {
    const json config = r.effective();
    if (r.format == "json") {
        return {"json", [=](std::ostream &os) { io::emit_joint_json(os, table, config); }};
    }
    require_format(r, {"csv"});
    return {"csv", [=](std::ostream &os) { io::emit_joint_csv(os, table, config); }};
}

Artifact run_nchannel(const Request &r) {
    const auto config = phase_config(r);
    const bool marked = r.get<std::string>("state") == "marked";
    const auto state = marked ? nchannel::final_state_marked(config) : nchannel::final_state_bare(config);
    const auto report = r.get<std::string>("report");
    const auto condition = r.get<std::string>("condition");
    if (!marked && (condition != "none" || report != "distribution")) {
        throw ValidationFailure("the bare state has no marker to condition on or report");
    }

    if (report == "joint") {
        std::vector<std::string> rows;
        for (std::size_t j = 1; j <= config.n(); ++j) {
            rows.push_back(std::to_string(j));
        }
        const bool which = r.get<std::string>("basis") == "which_path";
        return table_artifact(r, analysis::joint_distribution(
                                     state, chosen_basis(r), analysis::Order::SystemFirst, rows,
                                     which ? std::vector<std::string>{"d1", "d2"}
                                           : std::vector<std::string>{"plus", "minus"}));
    }
    if (report == "delayed") {
        json rows = json::array();
        std::vector<std::array<double, 5>> values;
        for (std::size_t j = 1; j <= config.n(); ++j) {
            try {
                const auto d = nchannel::delayed_marker_state(state, j);
                values.push_back({static_cast<double>(j), d.probability, d.fidelity_plus,
                                  d.fidelity_minus, d.purity});
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
        const json cfg = r.effective();
        if (r.format == "json") {
            for (const auto &v : values) {
                rows.push_back({{"detector", static_cast<int>(v[0])},
                                {"probability", v[1]},
                                {"fidelity_plus", v[2]},
                                {"fidelity_minus", v[3]},
                                {"purity", v[4]}});
            }
            return {"json", [=](std::ostream &os) {
                        os << json{{"config", cfg}, {"delayed", rows}}.dump(2) << '\n';
                    }};
        }
        require_format(r, {"csv"});
        return {"csv", [=](std::ostream &os) {
                    os << "# config: " << cfg.dump() << '\n';
                    os << "detector,probability,fidelity_plus,fidelity_minus,purity\n";
                    os.precision(17);
                    for (const auto &v : values) {
                        os << static_cast<int>(v[0]) << ',' << v[1] << ',' << v[2] << ',' << v[3]
                           << ',' << v[4] << '\n';
                    }
                }};
    }

    nchannel::DetectorDistribution dist;
    if (condition == "none") {
        dist = nchannel::detector_probabilities(state);
    } else {
        const auto basis = erasure_basis(r.get<double>("theta"));
        const auto [d1, d2] = which_path_basis();
        const MarkerState marker = condition == "d1"      ? d1
                                   : condition == "d2"    ? d2
                                   : condition == "dplus" ? basis.plus
                                                          : basis.minus;
        dist = nchannel::conditioned_distribution(state, marker);
    }
    auto series = io::to_series(dist);
    if (condition != "none") {
        series.condition = condition;
    }
    const std::string title = std::to_string(config.n()) + "-channel detector distribution (" +
                              (marked ? "marked" : "bare") + ", condition " + condition + ")";
    return series_artifact(r, {series}, title);
}

Artifact run_twoslit(const Request &r) {
    const auto grid = screen_grid(r);
    const double theta = r.get<double>("theta");
    if (r.get<std::string>("report") == "delayed") {
        std::vector<twoslit::DelayedScreenReport> reports;
        std::vector<double> xs;
        for (std::size_t k = 0; k < grid.bins(); ++k) {
            try {
                reports.push_back(twoslit::delayed_marker_state_at(grid, k));
                xs.push_back(grid.centers()[k]);
            } catch (const Error &e) {
                if (e.code() != ErrorCode::ZeroProbability) {
                    throw;
                }
            }
        }
        require_format(r, {"csv"});
        const json cfg = r.effective();
        return {"csv", [=](std::ostream &os) {
                    os << "# config: " << cfg.dump() << '\n';
                    os << "x,theta_x,probability,fidelity_to_dplus_thetax,purity\n";
                    os.precision(17);
                    for (std::size_t i = 0; i < reports.size(); ++i) {
                        const auto &d = reports[i];
                        os << xs[i] << ',' << d.theta_x << ',' << d.probability << ','
                           << d.fidelity_to_dplus_thetax << ',' << d.purity << '\n';
                    }
                }};
    }

    const auto pattern = r.get<std::string>("pattern");
    const auto sign = r.get<std::string>("sign") == "plus" ? twoslit::Sign::Plus : twoslit::Sign::Minus;
    std::vector<io::Series> series;
    std::string title;
    if (pattern == "conditioned") {
        series.push_back(io::to_series(twoslit::pattern_conditioned(grid, theta, sign)));
        title = "Recovered fringes, marker in d^theta_" + r.get<std::string>("sign") +
                " (" + *series.back().condition + ")";
    } else if (pattern == "washed") {
        series.push_back(io::to_series(twoslit::pattern_marked_unconditioned(grid)));
        title = "Washed-out pattern, marker unread";
    } else if (pattern == "nomarker") {
        series.push_back(io::to_series(twoslit::pattern_no_marker(grid)));
        series.back().condition = "nomarker";
        title = "Two-slit fringes without marker";
    } else {
        // Joint densities for both outcomes, plotted with their washed-out sum.
        for (auto s : {twoslit::Sign::Plus, twoslit::Sign::Minus}) {
            const auto p = twoslit::pattern_conditioned(grid, theta, s);
            auto ser = io::to_series(p);
            for (auto &v : ser.probability) {
                v *= p.branch_probability;
            }
            series.push_back(std::move(ser));
        }
        series.push_back(io::to_series(twoslit::pattern_marked_unconditioned(grid)));
        series.back().condition = "washed";
        title = "Complementary recovered patterns and washed-out sum";
    }
    return series_artifact(r, series, title);
}

Artifact run_epr(const Request &r) {
    const auto parse = [](const std::string &s) {
        return s == "z" ? analysis::SpinBasis::Z : analysis::SpinBasis::X;
    };
    return table_artifact(r, analysis::epr_correlation_table(parse(r.get<std::string>("basis1")),
                                                             parse(r.get<std::string>("basis2"))));
}

Artifact run_sample(const Request &r) {
    require_format(r, {"csv"});
    const auto count = r.get<long long>("count");
    if (count < 1) {
        throw Error(ErrorCode::InvalidCount, "count must be at least 1");
    }
    const auto seed = r.get<long long>("seed");
    const auto order = analysis::parse_order(r.get<std::string>("order"));
    const bool channels = r.get<std::string>("scenario") == "nchannel";
    std::optional<PureState> state;
    std::string id;
    if (channels) {
        const auto config = phase_config(r);
        state = nchannel::final_state_marked(config);
        id = "nchannel-n" + std::to_string(config.n());
    } else {
        state = twoslit::screen_state_marked(screen_grid(r));
        id = "twoslit";
    }
    if (r.has("scenario_id")) {
        id = r.get<std::string>("scenario_id");
    }
    if (id.find_first_of(",\n") != std::string::npos) {
        throw ValidationFailure("scenario_id may not contain commas or newlines");
    }
    const analysis::SampleRequest req{id, order, static_cast<std::size_t>(count),
                                      static_cast<std::uint64_t>(seed), channels ? 1 : 0};
    auto events = analysis::sample_events(*state, chosen_basis(r), req);
    const json cfg = r.effective();
    return {"csv", [cfg, events = std::move(events)](std::ostream &os) {
                os << "# config: " << cfg.dump() << '\n';
                analysis::write_event_log(os, events);
            }};
}

void write_artifact(const Request &r, const Artifact &artifact) {
    std::optional<fs::path> path;
    if (r.output_path) {
        path = *r.output_path;
    } else if (const char *dir = std::getenv("QERASER_OUTPUT_DIR"); dir && *dir) {
        path = fs::path(dir) / (r.kind + "." + artifact.extension);
    }
    if (!path) {
        artifact.write(std::cout);
        std::cout.flush();
        if (!std::cout) {
            throw io::IoError("failed writing to stdout");
        }
        return;
    }
    std::error_code ec;
    if (path->has_parent_path()) {
        fs::create_directories(path->parent_path(), ec);
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) {
        throw io::IoError("cannot open " + path->string() + " for writing");
    }
    artifact.write(out);
    out.close();
    if (!out) {
        throw io::IoError("failed writing " + path->string());
    }
}

int run_check() {
    bool ok = true;
    for (const auto &c : invariants::run_all()) {
        std::cout << (c.passed() ? "PASS " : "FAIL ") << c.name << " (worst " << c.value
                  << ", tolerance " << c.tolerance << ")\n";
        ok = ok && c.passed();
    }
    return ok ? 0 : 1;
}

int fail(const char *kind, const std::string &message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return code;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Delayed-choice quantum eraser scenarios"};
    app.require_subcommand(0, 1);
    std::string config_file;
    app.add_option("--config", config_file, "JSON scenario file");

    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, std::string> formats;
    std::map<std::string, std::string> outputs;
    std::map<std::string, CLI::App *> subs;
    const std::map<std::string, std::string> descriptions = {
        {"nchannel", "Two-path n-channel interferometer"},
        {"twoslit", "Continuous two-slit screen"},
        {"epr", "Spin-pair correlation tables"},
        {"sample", "Seeded Monte Carlo event log"},
        {"check", "Run the invariant suite"},
    };
    for (const auto &[kind, params] : schemas()) {
        auto *sub = app.add_subcommand(kind, descriptions.at(kind));
        subs[kind] = sub;
        if (kind == "check") {
            continue;
        }
        sub->add_option("--format", formats[kind], "csv, json or svg");
        sub->add_option("--output", outputs[kind], "Output file");
        for (const auto &p : params) {
            sub->add_option("--" + p.key, raw[kind][p.key], p.help);
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return fail("ParseError", e.what(), 2);
    }

    Request req;
    try {
        json file = json::object();
        if (!config_file.empty()) {
            std::ifstream in(config_file);
            if (!in) {
                return fail("IoError", "cannot read " + config_file, 4);
            }
            try {
                file = json::parse(in);
            } catch (const json::parse_error &e) {
                return fail("ParseError", e.what(), 2);
            }
            if (!file.is_object()) {
                throw ValidationFailure("config file must hold a JSON object");
            }
            for (const auto &[key, value] : file.items()) {
                if (key != "kind" && key != "parameters" && key != "output" && key != "output_path") {
                    throw ValidationFailure("unknown config key '" + key + "'");
                }
            }
        }

        for (const auto &[kind, sub] : subs) {
            if (sub->parsed()) {
                req.kind = kind;
            }
        }
        if (file.contains("kind")) {
            const auto file_kind = file.at("kind").get<std::string>();
            if (!schemas().count(file_kind)) {
                throw ValidationFailure("unknown kind '" + file_kind + "'");
            }
            if (!req.kind.empty() && req.kind != file_kind) {
                throw ValidationFailure("config kind '" + file_kind + "' does not match subcommand '" +
                                        req.kind + "'");
            }
            req.kind = file_kind;
        }
        if (req.kind.empty()) {
            return fail("ParseError", "no subcommand given; see --help", 2);
        }
        if (req.kind == "check") {
            return run_check();
        }

        for (const auto &p : schemas().at(req.kind)) {
            req.params[p.key] = p.fallback;
        }
        if (file.contains("parameters")) {
            if (!file.at("parameters").is_object()) {
                throw ValidationFailure("parameters must be an object");
            }
            for (const auto &[key, value] : file.at("parameters").items()) {
                req.params[key] = check_value(find_param(req.kind, key), value);
            }
        }
        if (file.contains("output")) {
            req.format = file.at("output").get<std::string>();
        }
        if (file.contains("output_path")) {
            req.output_path = file.at("output_path").get<std::string>();
        }
        auto *sub = subs.at(req.kind);
        for (const auto &p : schemas().at(req.kind)) {
            if (sub->count("--" + p.key) > 0) {
                req.params[p.key] = check_value(p, parse_flag(p, raw[req.kind][p.key]));
            }
        }
        if (sub->count("--format") > 0) {
            req.format = formats[req.kind];
        }
        if (sub->count("--output") > 0) {
            req.output_path = outputs[req.kind];
        }
        if (req.format != "csv" && req.format != "json" && req.format != "svg") {
            throw ValidationFailure("unknown format '" + req.format + "'");
        }

        Artifact artifact;
        if (req.kind == "nchannel") {
            artifact = run_nchannel(req);
        } else if (req.kind == "twoslit") {
            artifact = run_twoslit(req);
        } else if (req.kind == "epr") {
            artifact = run_epr(req);
        } else {
            artifact = run_sample(req);
        }
        write_artifact(req, artifact);
    } catch (const ParseFailure &e) {
        return fail("ParseError", e.what(), 2);
    } catch (const ValidationFailure &e) {
        return fail("ValidationError", e.what(), 3);
    } catch (const Error &e) {
        return fail("ValidationError", e.what(), 3);
    } catch (const json::exception &e) {
        return fail("ValidationError", e.what(), 3);
    } catch (const io::IoError &e) {
        return fail("IoError", e.what(), 4);
    }
    return 0;
}
