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

// dartpim: index a reference, map reads on the simulated accelerator,
// synthesize corpora and tabulate run statistics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dartpim/error.hpp"
#include "dartpim/genomio.hpp"
#include "dartpim/minimizer_index.hpp"
#include "dartpim/report.hpp"
#include "dartpim/system.hpp"

namespace {

using namespace dartpim;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct GlobalOptions {
    std::uint64_t seed = 0;
    std::uint32_t threads = 1;
    std::string config_path;
};

struct Settings {
    SystemConfig system;
    IndexParams index;
};

Settings load_settings(const GlobalOptions& g) {
    Settings s;
    if (!g.config_path.empty()) {
        std::string text;
        try {
            text = read_file(g.config_path);
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
        apply_config_toml(text, s.system, s.index);
    }
    s.system.threads = g.threads;
    return s;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

std::string hex_of(std::string_view bytes) { return digest_hex(sha256(bytes)); }

Reference load_reference(const std::string& path, std::uint64_t seed) {
    return concat_records(parse_fasta(read_file(path), seed));
}

// ---------------------------------------------------------------------------

struct IndexArgs {
    std::string ref_path;
    std::string out_path;
    std::optional<std::uint32_t> k, w, rl, eth, low_th;
};

int cmd_index(const IndexArgs& a, const GlobalOptions& g) {
    Settings s = load_settings(g);
    if (a.k) s.index.k = *a.k;
    if (a.w) s.index.W = *a.w;
    if (a.rl) s.index.rl = *a.rl;
    if (a.eth) s.index.eth = *a.eth;
    if (a.low_th) s.system.low_th = *a.low_th;
    s.index.validate();

    const Reference ref = load_reference(a.ref_path, g.seed);
    const MinimizerIndex index = build_index(ref.seq, s.index, ref.ambiguous.empty() ? nullptr : &ref.ambiguous);
    const CrossbarLayout layout = assign_crossbars(index, s.system.low_th, s.system.crossbar.linear_rows);

    IndexFileHeader h;
    h.params = s.index;
    h.low_th = s.system.low_th;
    h.seed = g.seed;
    h.ref_length = ref.seq.size();
    h.digest = reference_digest(ref);
    h.ref_path = a.ref_path;
    const auto bytes = serialize_index(index, h);
    write_text(a.out_path, std::string(bytes.begin(), bytes.end()));

    std::cout << "minimizers\t" << index.entries().size() << '\n'
              << "hits\t" << index.total_hits() << '\n'
              << "crossbars\t" << layout.crossbars.size() << '\n'
              << "riscv_minimizers\t" << layout.riscv_minimizers.size() << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct MapArgs {
    std::string index_path;
    std::string reads_path;
    std::string out_path;
    std::string ref_path;
    std::string stats_path;
    std::string truth_path;
    std::string max_reads;
    std::optional<std::uint32_t> low_th;
    bool composed_affine = false;
};

std::uint64_t parse_max_reads(const std::string& v) {
    if (v == "inf" || v == "unlimited") return kUnlimitedReads;
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size() || x == 0) throw ConfigError("--max-reads expects a positive integer or 'inf'");
    return x;
}

int cmd_map(const MapArgs& a, const GlobalOptions& g) {
    Settings s = load_settings(g);
    if (!a.max_reads.empty()) s.system.max_reads = parse_max_reads(a.max_reads);
    if (a.composed_affine) s.system.composed_affine_cost = true;

    const std::string index_bytes = read_file(a.index_path);
    const std::span<const std::uint8_t> span(reinterpret_cast<const std::uint8_t*>(index_bytes.data()),
                                             index_bytes.size());
    const IndexFileHeader header = read_index_header(span);
    const std::string ref_path = a.ref_path.empty() ? header.ref_path : a.ref_path;
    const std::string ref_text = read_file(ref_path);
    const Reference ref = concat_records(parse_fasta(ref_text, header.seed));
    const LoadedIndex loaded = deserialize_index(span, ref);

    s.system.low_th = a.low_th ? *a.low_th : header.low_th;
    s.system.validate();
    const CrossbarLayout layout =
        assign_crossbars(loaded.index, s.system.low_th, s.system.crossbar.linear_rows);

    const std::string reads_text = read_file(a.reads_path);
    std::vector<Read> reads = parse_fastq(reads_text, g.seed);

    Manifest manifest;
    manifest.seed = g.seed;
    auto config = config_to_json(s.system);
    config["index"] = index_params_to_json(loaded.index.params());
    manifest.config = std::move(config);
    manifest.inputs["index"] = hex_of(index_bytes);
    manifest.inputs["reference"] = hex_of(ref_text);
    manifest.inputs["reads"] = hex_of(reads_text);

    if (!a.truth_path.empty()) {
        const std::string truth_text = read_file(a.truth_path);
        manifest.inputs["truth"] = hex_of(truth_text);
        std::map<std::string, TruthRow> by_id;
        for (auto& row : parse_truth_tsv(truth_text)) by_id.emplace(row.id, row);
        for (auto& r : reads) {
            const auto it = by_id.find(r.id);
            if (it != by_id.end()) r.truth = TruthOrigin{it->second.ref_pos, it->second.strand, 0};
        }
    }

    const MappingRun run = run_mapping(layout, loaded.index, reads, s.system);
    write_text(a.out_path, results_tsv(run.results));

    std::optional<double> acc;
    if (!a.truth_path.empty()) acc = accuracy(run.results, reads);
    if (!a.stats_path.empty()) {
        const auto stats =
            stats_to_json(run.stats, s.system, s.system.hierarchy.crossbars(), acc, manifest);
        write_text(a.stats_path, stats.dump(2) + "\n");
    }
    std::cerr << "mapped " << run.stats.mapped << ", saturated " << run.stats.saturated << ", unmapped "
              << run.stats.unmapped << " of " << reads.size() << " reads\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string prefix = "synth";
    std::size_t length = 50000;
    std::size_t reads = 1000;
    std::uint32_t rl = 150;
    double sub = 0.0, ins = 0.0, del = 0.0;
    std::uint32_t max_edits = 0;
    std::size_t families = 0, copies = 0, element_length = 300;
    double divergence = 0.0;
};

int cmd_synth(const SynthArgs& a, const GlobalOptions& g) {
    ReadErrorModel model{a.sub, a.ins, a.del, g.seed + 1, a.max_edits};
    model.validate();
    if (a.length < a.rl) throw ConfigError("--len must be at least the read length");
    ReferenceModel rm;
    rm.length = a.length;
    rm.families = a.families;
    rm.copies = a.copies;
    rm.element_length = a.element_length;
    rm.divergence = a.divergence;
    rm.seed = g.seed;
    const DnaSequence ref = generate_reference(rm);
    const std::vector<Read> reads = generate_reads(ref, a.reads, a.rl, model);

    std::ostringstream fa, fq, truth;
    write_fasta(fa, "synthetic", ref);
    write_fastq(fq, reads);
    write_truth_tsv(truth, reads);
    write_text(a.prefix + ".fa", fa.str());
    write_text(a.prefix + ".fq", fq.str());
    write_text(a.prefix + ".truth.tsv", truth.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> stats_paths;
    std::string csv_path;
    bool costs = false;
};

int cmd_report(const ReportArgs& a, const GlobalOptions& g) {
    const Settings s = load_settings(g);
    if (a.costs) {
        std::cout << cost_catalog_json(s.index.rl, s.index.eth).dump(2) << '\n';
        if (a.stats_paths.empty()) return kExitOk;
    }
    if (a.stats_paths.empty()) throw ConfigError("report needs at least one stats file or --costs");
    std::vector<ReportRow> rows;
    for (const auto& path : a.stats_paths) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
            throw DataError(path + ": " + e.what());
        }
        rows.push_back(report_row_from_stats(j, path));
    }
    std::cout << report_table(rows);
    if (!a.csv_path.empty()) write_text(a.csv_path, report_csv(rows));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for an in-memory read-mapping accelerator"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Seed for synthetic data and ambiguity placeholders");
    app.add_option("--threads", g.threads, "Worker threads for crossbar evaluation")->check(CLI::PositiveNumber);
    app.add_option("--config", g.config_path, "TOML file overriding architecture constants");

    IndexArgs ia;
    auto* index = app.add_subcommand("index", "Build a minimizer index (.dpi) from a FASTA reference");
    index->fallthrough();
    index->add_option("reference", ia.ref_path, "Reference FASTA")->required();
    index->add_option("-o,--output", ia.out_path, "Index file to write")->required();
    index->add_option("--k", ia.k, "Minimizer length");
    index->add_option("--w", ia.w, "Window size in k-mers");
    index->add_option("--rl", ia.rl, "Read length");
    index->add_option("--eth", ia.eth, "Linear error threshold");
    index->add_option("--low-th", ia.low_th, "Frequency at or below which minimizers go to RISC-V");

    MapArgs ma;
    auto* map = app.add_subcommand("map", "Map reads with the simulated accelerator");
    map->fallthrough();
    map->add_option("index", ma.index_path, "Index file from 'index'")->required();
    map->add_option("reads", ma.reads_path, "Reads FASTQ")->required();
    map->add_option("-o,--output", ma.out_path, "Results TSV")->required();
    map->add_option("--ref", ma.ref_path, "Reference FASTA (default: path recorded in the index)");
    map->add_option("--stats", ma.stats_path, "Stats JSON to write");
    map->add_option("--truth", ma.truth_path, "Truth TSV; adds accuracy to the stats");
    map->add_option("--max-reads", ma.max_reads, "Per-crossbar read cap, or 'inf'");
    map->add_option("--low-th", ma.low_th, "Override the index's RISC-V threshold");
    map->add_flag("--composed-affine", ma.composed_affine, "Use the itemized affine instance cost");

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic reference, reads and truth");
    synth->fallthrough();
    synth->add_option("-o,--prefix", sa.prefix, "Output prefix (.fa, .fq, .truth.tsv)");
    synth->add_option("--len", sa.length, "Reference length");
    synth->add_option("--reads", sa.reads, "Number of reads");
    synth->add_option("--rl", sa.rl, "Read length");
    synth->add_option("--sub", sa.sub, "Substitution rate per base");
    synth->add_option("--ins", sa.ins, "Insertion rate per base");
    synth->add_option("--del", sa.del, "Deletion rate per base");
    synth->add_option("--max-edits", sa.max_edits, "Redraw reads with more edits (0: no cap)");
    synth->add_option("--families", sa.families, "Repeat families");
    synth->add_option("--copies", sa.copies, "Copies per repeat family");
    synth->add_option("--element-length", sa.element_length, "Repeat element length");
    synth->add_option("--divergence", sa.divergence, "Per-base divergence between repeat copies");

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "Tabulate stats files");
    report->fallthrough();
    report->add_option("stats", ra.stats_paths, "Stats JSON files");
    report->add_option("--csv", ra.csv_path, "CSV file to write");
    report->add_flag("--costs", ra.costs, "Print the gate cost catalog as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (index->parsed()) return cmd_index(ia, g);
        if (map->parsed()) return cmd_map(ma, g);
        if (synth->parsed()) return cmd_synth(sa, g);
        if (report->parsed()) return cmd_report(ra, g);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
