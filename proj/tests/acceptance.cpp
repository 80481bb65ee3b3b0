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

// Runs every acceptance criterion and prints one PASS/FAIL line per
// criterion. Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"
#include "oracles.hpp"

#include "dartpim/magic_cost.hpp"
#include "dartpim/report.hpp"
#include "dartpim/system.hpp"
#include "dartpim/wf.hpp"

using namespace dartpim;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Criterion 1: primitive costs for N = 1..16.
Outcome primitive_table() {
    struct Row {
        Primitive p;
        std::uint64_t slope, intercept;
    };
    const Row rows[] = {
        {Primitive::And, 3, 0},        {Primitive::Xnor, 4, 0},      {Primitive::Xor, 5, 0},
        {Primitive::Copy, 1, 1},       {Primitive::AddTwoNbit, 9, 0}, {Primitive::AddNbitPlus1bit, 5, 0},
        {Primitive::AddConst, 5, 0},   {Primitive::Subtract, 9, 0},  {Primitive::Mux, 3, 1},
        {Primitive::MinTwoNbit, 12, 1},
    };
    std::size_t ok = 0, total = 0;
    for (const Row& r : rows) {
        for (std::uint32_t n = 1; n <= 16; ++n) {
            ++total;
            ok += op_cycles(r.p, n) == r.slope * n + r.intercept;
        }
    }
    return {ok == total && total == 160, std::to_string(ok) + "/" + std::to_string(total) + " entries exact"};
}

// Criterion 2: per-cell composition.
Outcome cell_cost() {
    bool ok = true;
    for (std::uint32_t b = 1; b <= 16; ++b) {
        ok = ok && sum_cycles(linear_cell_steps(b)) == 37ull * b + 19 && linear_cell_cycles(b) == 37ull * b + 19;
    }
    const auto b3 = sum_cycles(linear_cell_steps(3));
    ok = ok && b3 == 130;
    return {ok, "b=3 cell = " + std::to_string(b3) + " cycles"};
}

// Criterion 3: linear instance.
Outcome linear_instance() {
    const InstanceCost c = linear_instance_cost(150, 6, 3);
    const double e = energy_of(c);
    const bool ok = linear_core_cycles(150, 6, 3) == 253500 && c.total_cycles() == 258620 &&
                    c.total_switches() == 509883 && std::abs(e - 45.9e-9) <= 45.9e-9 * 1e-3;
    return {ok, "core " + std::to_string(linear_core_cycles(150, 6, 3)) + ", cycles " +
                    std::to_string(c.total_cycles()) + ", switches " + std::to_string(c.total_switches()) +
                    ", energy " + fmt("%.4f", e * 1e9) + " nJ"};
}

// Criterion 4: composed affine instance.
Outcome affine_instance() {
    const InstanceCost c = affine_instance_cost(150, 6, 5);
    const double dc = static_cast<double>(c.total_cycles()) / 1308699.0 - 1.0;
    const double ds = static_cast<double>(c.total_switches()) / 2549416.0 - 1.0;
    return {std::abs(dc) <= 0.15 && std::abs(ds) <= 0.15,
            "cycles " + std::to_string(c.total_cycles()) + " (" + fmt("%+.2f", dc * 100) + "%), switches " +
                std::to_string(c.total_switches()) + " (" + fmt("%+.2f", ds * 100) + "%)"};
}

DnaSequence from_bits(std::uint32_t bits, std::size_t n) {
    std::vector<Base> codes(n);
    for (std::size_t i = 0; i < n; ++i) codes[i] = static_cast<Base>((bits >> i) & 1u);  // A or C
    return DnaSequence::from_codes(codes);
}

// Criterion 5: kernel/oracle equivalence.
Outcome banded_equivalence() {
    const auto t0 = Clock::now();
    std::size_t pairs = 0, bad = 0;
    auto check = [&](const DnaSequence& read, const DnaSequence& win, std::uint32_t eth) {
        ++pairs;
        const WfParams lin = WfParams::linear(eth);
        const WfParams aff = WfParams::affine(eth);
        const AffineResult a = affine_wf_banded(read, win, aff);
        const bool ok = linear_wf_banded(read, win, lin) == oracle::banded_linear(read, win, eth, lin.sat) &&
                        a.distance == oracle::banded_affine(read, win, eth, aff.sat) &&
                        oracle::trace_consistent(a, read, win, aff);
        bad += !ok;
    };
    // Exhaustive over {A,C} with the window at most 8 bases.
    for (std::uint32_t eth = 1; eth <= 3; ++eth) {
        for (std::size_t n = 1; n + 2 * eth <= 8; ++n) {
            const std::size_t m = n + 2 * eth;
            for (std::uint32_t r = 0; r < (1u << n); ++r) {
                for (std::uint32_t w = 0; w < (1u << m); ++w) check(from_bits(r, n), from_bits(w, m), eth);
            }
        }
    }
    const std::size_t exhaustive = pairs;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 10000; ++i) {
        const DnaSequence win = oracle::random_seq(rng, 162);
        check(oracle::plant_edits(rng, win, 150, 6, rng() % 7), win, 6);
    }
    const double secs = seconds_since(t0);
    return {bad == 0 && secs < 120.0, std::to_string(exhaustive) + " exhaustive + " +
                                          std::to_string(pairs - exhaustive) + " random pairs, " +
                                          std::to_string(bad) + " mismatches, " + fmt("%.1f", secs) + " s"};
}

// Criterion 6: saturation on unrelated pairs.
Outcome saturation() {
    std::mt19937_64 rng(77);
    std::size_t checked = 0, bad = 0;
    const WfParams lin = WfParams::linear();
    const WfParams aff = WfParams::affine();
    for (int i = 0; i < 1000; ++i) {
        const DnaSequence read = oracle::random_seq(rng, 150);
        const DnaSequence win = oracle::random_seq(rng, 162);
        const auto lo = oracle::banded_linear(read, win, 6, oracle::kNoSat);
        const auto ao = oracle::banded_affine(read, win, 6, oracle::kNoSat);
        const auto l = linear_wf_banded(read, win, lin);
        const AffineResult a = affine_wf_banded(read, win, aff);
        if (lo >= lin.sat) {
            ++checked;
            bad += l != 7;
        }
        if (ao >= aff.sat) {
            ++checked;
            bad += a.distance != 31 || !a.saturated;
        }
    }
    return {bad == 0 && checked >= 1000,
            std::to_string(checked) + " saturated results checked, " + std::to_string(bad) + " wrong"};
}

struct Corpus {
    DnaSequence ref;
    MinimizerIndex index;
    std::vector<Read> reads;
};

MappingRun map_corpus(const Corpus& c, std::uint32_t low_th, std::uint64_t max_reads) {
    SystemConfig cfg;
    cfg.low_th = low_th;
    cfg.max_reads = max_reads;
    return run_mapping(assign_crossbars(c.index, low_th), c.index, c.reads, cfg);
}

// Criterion 7: crossbar pipeline against the full-matrix oracle mapper.
Outcome functional_equivalence() {
    const auto t0 = Clock::now();
    Corpus c;
    c.ref = generate_reference({100000, 0, 0, 300, 0.0, 7});
    c.index = build_index(c.ref, IndexParams{});
    c.reads = generate_reads(c.ref, 10000, 150, {0.01, 0.001, 0.001, 8, 4});
    const MappingRun run = map_corpus(c, 0, kUnlimitedReads);
    const auto flat = oracle_map(c.index, c.ref, c.reads);
    const double agree = agreement(run.results, flat);
    const double acc = accuracy(run.results, c.reads);
    const double secs = seconds_since(t0);
    return {agree >= 0.99 && acc >= 0.99 && secs < 300.0,
            "agreement " + fmt("%.4f", agree) + ", accuracy " + fmt("%.4f", acc) + ", oracle accuracy " +
                fmt("%.4f", accuracy(flat, c.reads)) + ", " + fmt("%.1f", secs) + " s"};
}

// Criterion 8: closed-form time, area and power.
Outcome formulas() {
    SystemConfig cfg;
    RunStats s;
    s.K_L = 1;
    const double t = compute_time(s, cfg).dp_memory;
    const double xb_um2 = crossbar_area(cfg) * 1e6;
    const double total_mm2 = compute_area(cfg, 8388608).crossbars;
    const double rv = riscv_power(cfg);
    const bool ok = std::abs(t - 517.24e-6) < 1e-12 && std::round(xb_um2 * 10) / 10 == 943.7 &&
                    std::floor(total_mm2) == 7916.0 && std::abs(rv - 6.144) < 1e-12;
    return {ok, "T_DP " + fmt("%.2f", t * 1e6) + " us, crossbar " + fmt("%.4f", xb_um2) + " um^2, 8M crossbars " +
                    fmt("%.1f", total_mm2) + " mm^2, RISC-V " + fmt("%.3f", rv) + " W"};
}

// Criterion 9: maxReads sweep on a repeat-rich genome.
Outcome max_reads_sweep() {
    Corpus c;
    c.ref = generate_reference({100000, 8, 60, 400, 0.02, 21});
    c.index = build_index(c.ref, IndexParams{});
    c.reads = generate_reads(c.ref, 10000, 150, {0.01, 0.001, 0.001, 22, 4});
    SystemConfig cfg;
    cfg.low_th = 0;
    std::vector<ReportRow> rows;
    for (std::uint64_t m : {100ull, 1000ull, 10000ull}) {
        cfg.max_reads = m;
        const MappingRun run = run_mapping(assign_crossbars(c.index, 0), c.index, c.reads, cfg);
        Manifest man;
        man.config = config_to_json(cfg);
        const auto j = stats_to_json(run.stats, cfg, cfg.hierarchy.crossbars(), accuracy(run.results, c.reads), man);
        rows.push_back(report_row_from_stats(nlohmann::json::parse(j.dump()), "maxReads=" + std::to_string(m)));
    }
    const bool monotone = rows[0].accuracy <= rows[1].accuracy && rows[1].accuracy <= rows[2].accuracy &&
                          rows[0].K_L <= rows[1].K_L && rows[1].K_L <= rows[2].K_L;
    // The cap must bind at the low end for the sweep to show anything.
    const bool shape = rows[0].accuracy < rows[2].accuracy && rows[0].K_L < rows[2].K_L &&
                       rows[0].time.dp_memory < rows[2].time.dp_memory;
    std::cout << report_csv(rows);
    std::string d;
    for (const auto& r : rows) {
        d += r.source + ": K_L " + std::to_string(r.K_L) + " acc " + fmt("%.4f", r.accuracy) + "; ";
    }
    return {monotone && shape, d};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(DARTPIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

// Criterion 10: byte-identical outputs across repeats and thread counts.
Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("dartpim_acc_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string p = (dir / "c").string();
    bool ok = run_cli("--seed 3 synth -o " + p +
                      " --len 60000 --reads 3000 --sub 0.01 --ins 0.001 --del 0.001 --max-edits 4"
                      " --families 4 --copies 40 --divergence 0.02") == 0;
    ok = ok && run_cli("--seed 3 index " + p + ".fa -o " + p + ".dpi --low-th 0") == 0;
    std::vector<std::string> tsv, json;
    for (int threads : {1, 4, 1, 3}) {
        const std::string tag = p + "_" + std::to_string(tsv.size());
        ok = ok && run_cli("--seed 3 --threads " + std::to_string(threads) + " map " + p + ".dpi " + p + ".fq -o " +
                           tag + ".tsv --stats " + tag + ".json --truth " + p + ".truth.tsv --max-reads 200") == 0;
        if (!ok) break;
        tsv.push_back(read_file(tag + ".tsv"));
        json.push_back(read_file(tag + ".json"));
    }
    bool same = ok && !tsv.empty() && !tsv[0].empty();
    for (std::size_t i = 1; same && i < tsv.size(); ++i) same = tsv[i] == tsv[0] && json[i] == json[0];
    fs::remove_all(dir);
    return {same, ok ? "4 runs (threads 1,4,1,3) compared byte for byte" : "CLI invocation failed"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"primitive cycle table", primitive_table},
        {"linear cell composition", cell_cost},
        {"linear instance cost", linear_instance},
        {"affine instance cost", affine_instance},
        {"banded kernels match oracles", banded_equivalence},
        {"saturation on unrelated pairs", saturation},
        {"pipeline vs oracle mapper", functional_equivalence},
        {"time/area/power formulas", formulas},
        {"maxReads sweep", max_reads_sweep},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first
                  << "  [" << o.detail << "]" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
