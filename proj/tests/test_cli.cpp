/*
 * Copyright 2026 The dartpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <stdexcept>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "dartpim/genomio.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dartpim_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(DARTPIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string capture(const std::string& args) {
    const std::string cmd = std::string(DARTPIM_CLI_PATH) + " " + args + " 2>/dev/null";
    std::string out;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    ::pclose(p);
    return out;
}

std::string slurp(const std::string& path) { return dartpim::read_file(path); }

}  // namespace

TEST_CASE("synth, index, map and report end to end") {
    TempDir d;
    const std::string pre = d / "c";
    REQUIRE(run("--seed 5 synth -o " + pre + " --len 40000 --reads 300") == 0);
    CHECK(fs::exists(pre + ".fa"));
    CHECK(fs::exists(pre + ".fq"));
    CHECK(fs::exists(pre + ".truth.tsv"));

    const std::string idx_out = capture("--seed 5 index " + pre + ".fa -o " + (d / "a.dpi"));
    CHECK(idx_out.find("minimizers\t") == 0);
    CHECK(idx_out.find("riscv_minimizers\t") != std::string::npos);
    REQUIRE(run("--seed 5 index " + pre + ".fa -o " + (d / "b.dpi")) == 0);
    const std::string a = slurp(d / "a.dpi");
    CHECK(a.substr(0, 4) == "DPI1");
    CHECK(a == slurp(d / "b.dpi"));

    REQUIRE(run("--seed 5 map " + (d / "a.dpi") + " " + pre + ".fq -o " + (d / "r.tsv") + " --stats " +
                (d / "s.json") + " --truth " + pre + ".truth.tsv") == 0);
    const auto stats = nlohmann::json::parse(slurp(d / "s.json"));
    CHECK(stats["accuracy"].get<double>() == 1.0);
    CHECK(stats["reads"] == 300);
    CHECK(stats["manifest"]["inputs"].contains("reads"));
    std::istringstream tsv(slurp(d / "r.tsv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(tsv, line)) ++rows;
    CHECK(rows == 300);

    // Everything on the crossbars.
    REQUIRE(run("--seed 5 map " + (d / "a.dpi") + " " + pre + ".fq -o " + (d / "r0.tsv") + " --stats " +
                (d / "s0.json") + " --low-th 0 --max-reads inf") == 0);
    const auto s0 = nlohmann::json::parse(slurp(d / "s0.json"));
    CHECK(s0["riscv"]["instances"] == 0);
    CHECK(s0["K_L"].get<std::uint64_t>() > 0);
    CHECK(s0["max_reads"] == "unlimited");
    CHECK(slurp(d / "r0.tsv") == slurp(d / "r.tsv"));

    const std::string table = capture("report " + (d / "s.json") + " " + (d / "s0.json") + " --csv " + (d / "t.csv"));
    CHECK(table.find("maxReads") != std::string::npos);
    CHECK(slurp(d / "t.csv").rfind("source,max_reads,", 0) == 0);
}

TEST_CASE("CLI error codes") {
    TempDir d;
    const std::string pre = d / "c";
    REQUIRE(run("--seed 1 synth -o " + pre + " --len 20000 --reads 10") == 0);
    CHECK(run("index " + pre + ".fa -o " + (d / "x.dpi") + " --eth 0") == 1);
    CHECK(run("index " + (d / "missing.fa") + " -o " + (d / "x.dpi")) == 2);
    CHECK(run("--no-such-flag") == 1);
    CHECK(run("--seed 1 synth -o " + pre + " --sub 2") == 1);

    REQUIRE(run("--seed 1 index " + pre + ".fa -o " + (d / "x.dpi")) == 0);
    CHECK(run("map " + (d / "x.dpi") + " " + pre + ".fq -o " + (d / "r.tsv") + " --max-reads 0") == 1);
    REQUIRE(run("--seed 2 synth -o " + (d / "other") + " --len 20000 --reads 10") == 0);
    CHECK(run("map " + (d / "x.dpi") + " " + pre + ".fq -o " + (d / "r.tsv") + " --ref " + (d / "other.fa")) == 2);

    std::ofstream(d / "bad.toml") << "[mapping]\nbogus = 1\n";
    CHECK(run("--config " + (d / "bad.toml") + " map " + (d / "x.dpi") + " " + pre + ".fq -o " + (d / "r.tsv")) == 1);
    std::ofstream(d / "bad.json") << "{\"stats_version\": 7}";
    CHECK(run("report " + (d / "bad.json")) == 2);
}

TEST_CASE("report --costs and empty read sets") {
    TempDir d;
    const auto costs = nlohmann::json::parse(capture("report --costs"));
    CHECK(costs["linear_instance"]["magic_cycles"] == 254585);

    const std::string pre = d / "e";
    REQUIRE(run("synth -o " + pre + " --len 20000 --reads 0") == 0);
    REQUIRE(run("index " + pre + ".fa -o " + (d / "e.dpi")) == 0);
    REQUIRE(run("map " + (d / "e.dpi") + " " + pre + ".fq -o " + (d / "e.tsv") + " --stats " + (d / "e.json")) == 0);
    CHECK(slurp(d / "e.tsv").empty());
    const auto s = nlohmann::json::parse(slurp(d / "e.json"));
    CHECK(s["K_L"] == 0);
    CHECK(s["time"]["wall"] == 0.0);
}
