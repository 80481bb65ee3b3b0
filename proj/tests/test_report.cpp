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

#include "doctest.h"

#include "dartpim/error.hpp"
#include "dartpim/report.hpp"

using namespace dartpim;

TEST_CASE("TOML overrides") {
    SystemConfig cfg;
    IndexParams ip;
    apply_config_toml(R"(
[index]
k = 15
eth = 5

[hierarchy]
chips = 16

[controllers]
chip_power = 0.02

[mapping]
max_reads = "inf"
low_th = 0
threads = 3

[weights]
sub = 2
)",
                      cfg, ip);
    CHECK(ip.k == 15);
    CHECK(ip.eth == 5);
    CHECK(ip.W == 30);
    CHECK(cfg.hierarchy.chips == 16);
    CHECK(cfg.controllers.chip.power == doctest::Approx(0.02));
    CHECK(cfg.max_reads == kUnlimitedReads);
    CHECK(cfg.low_th == 0);
    CHECK(cfg.threads == 3);
    CHECK(cfg.weights.sub == 2);
    CHECK(cfg.weights.del == 1);
}

TEST_CASE("TOML rejects unknown keys and bad values") {
    SystemConfig cfg;
    IndexParams ip;
    CHECK_THROWS_AS(apply_config_toml("[mapping]\nmax_read = 5\n", cfg, ip), ConfigError);
    CHECK_THROWS_AS(apply_config_toml("[nosuch]\nx = 1\n", cfg, ip), ConfigError);
    CHECK_THROWS_AS(apply_config_toml("[hierarchy]\nchips = \"many\"\n", cfg, ip), ConfigError);
}

TEST_CASE("config round trip through JSON keys") {
    const auto j = config_to_json(SystemConfig{});
    CHECK(j["hierarchy"]["chips"] == 32);
    CHECK(j["mapping"]["max_reads"] == 25000);
    CHECK(j["crossbar"]["rows"] == 256);
    SystemConfig u;
    u.max_reads = kUnlimitedReads;
    CHECK(config_to_json(u)["mapping"]["max_reads"].is_string());
}

TEST_CASE("stats JSON carries version, counters and breakdowns") {
    SystemConfig cfg;
    RunStats s;
    s.reads = 10;
    s.K_L = 5;
    s.K_A = 2;
    s.J_L = 100;
    s.J_A = 9;
    Manifest m;
    m.config = config_to_json(cfg);
    m.seed = 42;
    const auto j = stats_to_json(s, cfg, 1000, 0.5, m);
    CHECK(j["stats_version"] == kStatsVersion);
    CHECK(j["K_L"] == 5);
    CHECK(j["K_A"] == 2);
    CHECK(j["accuracy"] == 0.5);
    CHECK(j["manifest"]["seed"] == 42);
    CHECK(j["cycles"]["total"] ==
          5 * linear_instance_cost().total_cycles() + 2 * reference_affine_instance_cost().total_cycles());
    const TimeBreakdown t = compute_time(s, cfg);
    CHECK(j["time"]["wall"].get<double>() == doctest::Approx(t.wall));
    CHECK_FALSE(stats_to_json(s, cfg, 1000, std::nullopt, m).contains("accuracy"));

    const ReportRow row = report_row_from_stats(nlohmann::json::parse(j.dump()), "a.json");
    CHECK(row.K_L == 5);
    CHECK(row.max_reads == 25000);
    CHECK(row.accuracy == 0.5);
    CHECK(row.energy.total() == doctest::Approx(j["energy"]["total"].get<double>()));

    auto bad = nlohmann::json::parse(j.dump());
    bad["stats_version"] = 99;
    CHECK_THROWS_AS(report_row_from_stats(bad, "b"), DataError);
    bad = nlohmann::json::parse(j.dump());
    bad.erase("time");
    CHECK_THROWS_AS(report_row_from_stats(bad, "c"), DataError);
}

TEST_CASE("results TSV is sorted by id") {
    std::vector<MappingResult> res(3);
    res[0].id = "r2";
    res[0].status = MapStatus::Mapped;
    res[0].ref_pos = 100;
    res[0].strand = Strand::Reverse;
    res[0].distance = 2;
    res[0].trace = Traceback::from_rle("10M1X5M");
    res[1].id = "r1";
    res[2].id = "r3";
    res[2].status = MapStatus::Saturated;
    res[2].ref_pos = 7;
    res[2].distance = 31;
    CHECK(results_tsv(res) == "r1\t*\t*\t*\t*\nr2\t100\t-\t2\t10M1X5M\nr3\t7\t+\t31\t*\n");
    CHECK(results_tsv({}).empty());
}

TEST_CASE("report table and CSV") {
    ReportRow a;
    a.source = "x";
    a.max_reads = 100;
    a.K_L = 3;
    ReportRow b = a;
    b.source = "y";
    b.max_reads = 0;
    b.accuracy = 0.99;
    const std::string csv = report_csv({a, b});
    CHECK(csv.rfind("source,max_reads,K_L,K_A,accuracy,", 0) == 0);
    CHECK(csv.find("\nx,100,3,0,,") != std::string::npos);
    CHECK(csv.find("\ny,unlimited,3,0,0.99,") != std::string::npos);
    const std::string table = report_table({a});
    CHECK(table.find("maxReads 100") != std::string::npos);
}

TEST_CASE("cost catalog lists every primitive") {
    const auto j = cost_catalog_json();
    CHECK(j["primitives"].size() == kAllPrimitives.size());
    CHECK(j["linear_cell"]["total"] == linear_cell_cycles(3));
    CHECK(j["linear_instance"]["magic_cycles"] == 254585);
    CHECK(j["affine_instance_reference"]["magic_cycles"] == 1288281);
}
