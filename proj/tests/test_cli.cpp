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

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qeraser/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using Catch::Matchers::WithinAbs;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path tmpdir() {
    const fs::path dir = QERASER_TEST_TMPDIR;
    fs::create_directories(dir);
    return dir;
}

Run run(const std::string &args, const std::string &env = "") {
    const auto dir = tmpdir();
    const auto out = dir / "stdout.txt";
    const auto err = dir / "stderr.txt";
    const std::string cmd = "env -u QERASER_OUTPUT_DIR " + env + " '" + QERASER_CLI_PATH + "' " + args +
                            " > '" + out.string() + "' 2> '" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

void write_file(const fs::path &p, const std::string &text) {
    std::ofstream(p) << text;
}

json error_of(const Run &r) { return json::parse(r.err); }

} // namespace

TEST_CASE("nchannel example: recovered odd-detector fringes", "[cli]") {
    const auto r = run("nchannel --n 10 --preset default --condition dplus --format csv");
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const auto s = qeraser::io::read_pattern_csv(in);
    REQUIRE(s.x.size() == 10);
    REQUIRE(s.condition == "dplus");
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(s.x[j] == static_cast<double>(j + 1));
        CHECK_THAT(s.probability[j], WithinAbs(j % 2 == 0 ? 0.2 : 0.0, 1e-12));
    }
    const auto config = json::parse(r.out.substr(10, r.out.find('\n') - 10));
    CHECK(config.at("kind") == "nchannel");
    CHECK(config.at("parameters").at("n") == 10);
    CHECK(config.at("parameters").at("condition") == "dplus");
}

TEST_CASE("twoslit example: SVG chart", "[cli]") {
    const auto r = run("twoslit --preset default --theta 0 --sign plus --format svg");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("<svg", 0) == 0);
    CHECK(r.out.find("theta=0:plus") != std::string::npos);
    CHECK(r.out.find("&quot;kind&quot;:&quot;twoslit&quot;") != std::string::npos);
}

TEST_CASE("epr example: cross-basis table", "[cli]") {
    const auto r = run("epr --basis1 z --basis2 x --format json");
    REQUIRE(r.code == 0);
    const auto doc = json::parse(r.out);
    for (const auto &row : doc.at("table").at("probabilities")) {
        for (const auto &p : row) {
            CHECK_THAT(p.get<double>(), WithinAbs(0.25, 1e-12));
        }
    }
    CHECK(doc.at("table").at("mutual_information").get<double>() < 1e-12);
}

TEST_CASE("washed-out and bare n-channel distributions", "[cli]") {
    const auto washed = run("nchannel --n 6 --format json");
    REQUIRE(washed.code == 0);
    for (const auto &p : json::parse(washed.out).at("probability")) {
        CHECK_THAT(p.get<double>(), WithinAbs(1.0 / 6, 1e-12));
    }
    const auto bare = run("nchannel --n 4 --state bare --format json");
    REQUIRE(bare.code == 0);
    const auto p = json::parse(bare.out).at("probability");
    CHECK_THAT(p[0].get<double>(), WithinAbs(0.5, 1e-12));
    CHECK_THAT(p[1].get<double>(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("config file supplies parameters and flags override", "[cli]") {
    const auto cfg = tmpdir() / "scenario.json";
    write_file(cfg, R"({"kind": "nchannel", "parameters": {"n": 4, "condition": "dminus"}, "output": "json"})");
    const auto r = run("--config '" + cfg.string() + "'");
    REQUIRE(r.code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc.at("config").at("parameters").at("n") == 4);
    CHECK_THAT(doc.at("probability")[1].get<double>(), WithinAbs(0.5, 1e-12));

    const auto o = run("--config '" + cfg.string() + "' nchannel --n 8");
    REQUIRE(o.code == 0);
    doc = json::parse(o.out);
    CHECK(doc.at("config").at("parameters").at("n") == 8);
    CHECK(doc.at("probability").size() == 8);
}

TEST_CASE("output path and output directory", "[cli]") {
    const auto dir = tmpdir() / "artifacts";
    fs::remove_all(dir);
    auto r = run("epr --format csv", "QERASER_OUTPUT_DIR='" + dir.string() + "'");
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(dir / "epr.csv").find("row,col,probability") != std::string::npos);

    const auto file = tmpdir() / "explicit.svg";
    r = run("twoslit --pattern all --format svg --output '" + file.string() + "'");
    REQUIRE(r.code == 0);
    CHECK(slurp(file).find("</svg>") != std::string::npos);
}

TEST_CASE("sample logs are byte-identical for a fixed seed", "[cli]") {
    const auto a = tmpdir() / "log_a.csv";
    const auto b = tmpdir() / "log_b.csv";
    const std::string args = "sample --scenario twoslit --theta 0.4 --order marker_first --count 2000 --seed 7";
    REQUIRE(run(args + " --output '" + a.string() + "'").code == 0);
    REQUIRE(run(args + " --output '" + b.string() + "'").code == 0);
    const auto text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(text.find("scenario_id,event_index,system_outcome,marker_outcome,order,seed\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2002);

    const auto c = run("sample --count 10 --seed 8");
    REQUIRE(c.code == 0);
    CHECK(c.out != text);
}

TEST_CASE("parse errors exit with 2", "[cli]") {
    for (const char *args : {"nchannel --n ten", "nchannel --bogus 1", "frobnicate", "", "twoslit --theta x"}) {
        const auto r = run(args);
        INFO(args);
        CHECK(r.code == 2);
        CHECK(error_of(r).at("error") == "ParseError");
    }
    const auto cfg = tmpdir() / "broken.json";
    write_file(cfg, "{not json");
    CHECK(run("--config '" + cfg.string() + "'").code == 2);
}

TEST_CASE("validation errors exit with 3", "[cli]") {
    for (const char *args : {"nchannel --n 3", "nchannel --n 1", "nchannel --preset custom --n 2 --thetas 0,0 --phis 0,0",
                             "nchannel --preset custom --n 2 --thetas 0,0 --phis 0", "nchannel --condition maybe",
                             "twoslit --bins 0", "twoslit --L 0", "twoslit --envelope gaussian", "sample --count 0",
                             "epr --basis1 y", "epr --format svg", "nchannel --format pdf"}) {
        const auto r = run(args);
        INFO(args);
        CHECK(r.code == 3);
        CHECK(error_of(r).at("error") == "ValidationError");
        CHECK(r.out.empty());
    }
    const auto cfg = tmpdir() / "unknown.json";
    write_file(cfg, R"({"kind": "epr", "colour": "red"})");
    CHECK(run("--config '" + cfg.string() + "'").code == 3);
    write_file(cfg, R"({"kind": "epr", "parameters": {"basis3": "z"}})");
    CHECK(run("--config '" + cfg.string() + "'").code == 3);
    write_file(cfg, R"({"kind": "epr", "parameters": {"basis1": 3}})");
    CHECK(run("--config '" + cfg.string() + "'").code == 3);
}

TEST_CASE("I/O errors exit with 4", "[cli]") {
    const auto blocker = tmpdir() / "not_a_dir";
    write_file(blocker, "x");
    const auto r = run("epr --output '" + (blocker / "out.json").string() + "'");
    CHECK(r.code == 4);
    CHECK(error_of(r).at("error") == "IoError");
    CHECK(run("--config '" + (tmpdir() / "missing.json").string() + "'").code == 4);
}

TEST_CASE("check subcommand passes", "[cli]") {
    const auto r = run("check");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS ordering invariance") != std::string::npos);
}
