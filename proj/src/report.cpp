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

#include "dartpim/report.hpp"

#include <charconv>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "dartpim/error.hpp"

namespace dartpim {

namespace {

using Setter = std::function<void(const std::string&)>;

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\"'");
    const auto e = s.find_last_not_of(" \t\"'");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

template <typename T>
Setter uint_setter(T& field) {
    return [&field](const std::string& v) {
        std::uint64_t x = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc{} || ptr != v.data() + v.size() || x > std::numeric_limits<T>::max()) {
            throw ConfigError("expected a non-negative integer, got '" + v + "'");
        }
        field = static_cast<T>(x);
    };
}

Setter double_setter(double& field) {
    return [&field](const std::string& v) {
        std::size_t used = 0;
        double x = 0;
        try {
            x = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != v.size()) throw ConfigError("expected a number, got '" + v + "'");
        field = x;
    };
}

Setter bool_setter(bool& field) {
    return [&field](const std::string& v) {
        if (v == "true") {
            field = true;
        } else if (v == "false") {
            field = false;
        } else {
            throw ConfigError("expected true or false, got '" + v + "'");
        }
    };
}

void add_unit(std::map<std::string, Setter>& keys, const std::string& prefix, UnitCost& u) {
    keys[prefix + "_power"] = double_setter(u.power);
    keys[prefix + "_area"] = double_setter(u.area);
}

std::map<std::string, Setter> config_keys(SystemConfig& c, IndexParams& ix) {
    std::map<std::string, Setter> k;
    k["index.k"] = uint_setter(ix.k);
    k["index.w"] = uint_setter(ix.W);
    k["index.rl"] = uint_setter(ix.rl);
    k["index.eth"] = uint_setter(ix.eth);
    k["hierarchy.chips"] = uint_setter(c.hierarchy.chips);
    k["hierarchy.banks_per_chip"] = uint_setter(c.hierarchy.banks_per_chip);
    k["hierarchy.crossbars_per_bank"] = uint_setter(c.hierarchy.crossbars_per_bank);
    k["crossbar.rows"] = uint_setter(c.crossbar.rows);
    k["crossbar.cols"] = uint_setter(c.crossbar.cols);
    k["crossbar.fifo_rows"] = uint_setter(c.crossbar.fifo_rows);
    k["crossbar.reads_per_fifo_row"] = uint_setter(c.crossbar.reads_per_fifo_row);
    k["crossbar.linear_rows"] = uint_setter(c.crossbar.linear_rows);
    k["crossbar.affine_rows"] = uint_setter(c.crossbar.affine_rows);
    k["crossbar.rows_per_affine"] = uint_setter(c.crossbar.rows_per_affine);
    k["riscv.cores"] = uint_setter(c.riscv.cores);
    k["riscv.instance_latency"] = double_setter(c.riscv.instance_latency);
    k["riscv.core_power"] = double_setter(c.riscv.core_power);
    k["riscv.cache_power"] = double_setter(c.riscv.cache_power);
    k["riscv.core_area"] = double_setter(c.riscv.core_area);
    k["riscv.cache_area"] = double_setter(c.riscv.cache_area);
    k["transfer.bandwidth"] = double_setter(c.transfer.bandwidth);
    k["transfer.write_energy_per_bit"] = double_setter(c.transfer.write_energy_per_bit);
    k["transfer.read_energy_per_bit"] = double_setter(c.transfer.read_energy_per_bit);
    add_unit(k, "controllers.crossbar", c.controllers.crossbar);
    add_unit(k, "controllers.bank", c.controllers.bank);
    add_unit(k, "controllers.chip", c.controllers.chip);
    add_unit(k, "controllers.pim", c.controllers.pim);
    add_unit(k, "peripherals.decode_drive", c.peripherals.decode_drive);
    add_unit(k, "peripherals.rw_circuit", c.peripherals.rw_circuit);
    add_unit(k, "peripherals.selector_passgate", c.peripherals.selector_passgate);
    add_unit(k, "peripherals.driver_passgate", c.peripherals.driver_passgate);
    k["device.r_on"] = double_setter(c.device.r_on);
    k["device.r_off"] = double_setter(c.device.r_off);
    k["device.feature_size"] = double_setter(c.device.feature_size);
    k["energy.t_clk"] = double_setter(c.energy.t_clk);
    k["energy.e_magic"] = double_setter(c.energy.e_magic);
    k["energy.e_write"] = double_setter(c.energy.e_write);
    k["mapping.low_th"] = uint_setter(c.low_th);
    k["mapping.max_reads"] = [&c](const std::string& v) {
        if (v == "inf" || v == "unlimited") {
            c.max_reads = kUnlimitedReads;
        } else {
            uint_setter(c.max_reads)(v);
        }
    };
    k["mapping.linear_bits"] = uint_setter(c.linear_bits);
    k["mapping.affine_bits"] = uint_setter(c.affine_bits);
    k["mapping.affine_sat"] = uint_setter(c.affine_sat);
    k["mapping.threads"] = uint_setter(c.threads);
    k["mapping.composed_affine_cost"] = bool_setter(c.composed_affine_cost);
    k["weights.del"] = uint_setter(c.weights.del);
    k["weights.ins"] = uint_setter(c.weights.ins);
    k["weights.sub"] = uint_setter(c.weights.sub);
    k["weights.op"] = uint_setter(c.weights.op);
    k["weights.ex"] = uint_setter(c.weights.ex);
    return k;
}

nlohmann::ordered_json unit_json(const UnitCost& u) { return {{"power", u.power}, {"area", u.area}}; }

nlohmann::ordered_json max_reads_json(std::uint64_t v) {
    return v == kUnlimitedReads ? nlohmann::ordered_json("unlimited") : nlohmann::ordered_json(v);
}

}  // namespace

void apply_config_toml(std::string_view text, SystemConfig& cfg, IndexParams& index) {
    std::istringstream in{std::string(text)};
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_config(in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    auto keys = config_keys(cfg, index);
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        const std::string name = item.fullname();
        const auto it = keys.find(name);
        if (it == keys.end()) throw ConfigError("config: unknown key '" + name + "'");
        if (item.inputs.size() != 1) throw ConfigError("config: '" + name + "' expects one value");
        try {
            it->second(trim(item.inputs.front()));
        } catch (const ConfigError& e) {
            throw ConfigError("config: " + name + ": " + e.what());
        }
    }
}

nlohmann::ordered_json index_params_to_json(const IndexParams& p) {
    return {{"k", p.k}, {"w", p.W}, {"rl", p.rl}, {"eth", p.eth}, {"segment_length", p.segment_length()}};
}

nlohmann::ordered_json instance_cost_to_json(const InstanceCost& c) {
    return {{"magic_cycles", c.magic_cycles},     {"write_cycles", c.write_cycles},
            {"read_cycles", c.read_cycles},       {"total_cycles", c.total_cycles()},
            {"magic_switches", c.magic_switches}, {"write_switches", c.write_switches},
            {"total_switches", c.total_switches()}};
}

nlohmann::ordered_json config_to_json(const SystemConfig& c) {
    nlohmann::ordered_json j;
    j["hierarchy"] = {{"chips", c.hierarchy.chips},
                      {"banks_per_chip", c.hierarchy.banks_per_chip},
                      {"crossbars_per_bank", c.hierarchy.crossbars_per_bank}};
    j["crossbar"] = {{"rows", c.crossbar.rows},
                     {"cols", c.crossbar.cols},
                     {"fifo_rows", c.crossbar.fifo_rows},
                     {"reads_per_fifo_row", c.crossbar.reads_per_fifo_row},
                     {"linear_rows", c.crossbar.linear_rows},
                     {"affine_rows", c.crossbar.affine_rows},
                     {"rows_per_affine", c.crossbar.rows_per_affine}};
    j["riscv"] = {{"cores", c.riscv.cores},
                  {"instance_latency", c.riscv.instance_latency},
                  {"core_power", c.riscv.core_power},
                  {"cache_power", c.riscv.cache_power},
                  {"core_area", c.riscv.core_area},
                  {"cache_area", c.riscv.cache_area}};
    j["transfer"] = {{"bandwidth", c.transfer.bandwidth},
                     {"write_energy_per_bit", c.transfer.write_energy_per_bit},
                     {"read_energy_per_bit", c.transfer.read_energy_per_bit}};
    j["controllers"] = {{"crossbar", unit_json(c.controllers.crossbar)},
                        {"bank", unit_json(c.controllers.bank)},
                        {"chip", unit_json(c.controllers.chip)},
                        {"pim", unit_json(c.controllers.pim)}};
    j["peripherals"] = {{"decode_drive", unit_json(c.peripherals.decode_drive)},
                        {"rw_circuit", unit_json(c.peripherals.rw_circuit)},
                        {"selector_passgate", unit_json(c.peripherals.selector_passgate)},
                        {"driver_passgate", unit_json(c.peripherals.driver_passgate)}};
    j["device"] = {{"r_on", c.device.r_on}, {"r_off", c.device.r_off}, {"feature_size", c.device.feature_size}};
    j["energy"] = {{"t_clk", c.energy.t_clk}, {"e_magic", c.energy.e_magic}, {"e_write", c.energy.e_write}};
    j["mapping"] = {{"low_th", c.low_th},
                    {"max_reads", max_reads_json(c.max_reads)},
                    {"linear_bits", c.linear_bits},
                    {"affine_bits", c.affine_bits},
                    {"affine_sat", c.affine_sat},
                    {"composed_affine_cost", c.composed_affine_cost}};
    j["weights"] = {{"del", c.weights.del},
                    {"ins", c.weights.ins},
                    {"sub", c.weights.sub},
                    {"op", c.weights.op},
                    {"ex", c.weights.ex}};
    return j;
}

nlohmann::ordered_json cost_catalog_json(std::uint32_t rl, std::uint32_t eth) {
    nlohmann::ordered_json j;
    auto& prims = j["primitives"];
    prims = nlohmann::ordered_json::array();
    for (Primitive p : kAllPrimitives) {
        const OpFormula f = op_formula(p);
        prims.push_back({{"name", primitive_name(p)}, {"slope", f.slope}, {"intercept", f.intercept}});
    }
    auto steps_json = [](const std::vector<CostStep>& steps) {
        auto a = nlohmann::ordered_json::array();
        for (const auto& s : steps) a.push_back({{"step", s.label}, {"cycles", s.cycles}});
        return a;
    };
    j["linear_cell"] = {{"bits", 3}, {"steps", steps_json(linear_cell_steps(3))}, {"total", linear_cell_cycles(3)}};
    const AffineCostBreakdown a = affine_cost_breakdown(rl, eth, 5);
    j["affine_cell"] = {{"bits", 5}, {"steps", steps_json(a.cell)}, {"total", sum_cycles(a.cell)}};
    j["affine_traceback_step"] = {{"steps", steps_json(a.traceback_step)}, {"total", sum_cycles(a.traceback_step)}};
    j["linear_instance"] = instance_cost_to_json(linear_instance_cost(rl, eth, 3));
    j["affine_instance_composed"] = instance_cost_to_json(affine_instance_cost(rl, eth, 5));
    j["affine_instance_reference"] = instance_cost_to_json(reference_affine_instance_cost());
    j["rl"] = rl;
    j["eth"] = eth;
    return j;
}

nlohmann::ordered_json manifest_to_json(const Manifest& m) {
    return {{"artifact", "dartpim"}, {"version", kArtifactVersion}, {"seed", m.seed}, {"inputs", m.inputs},
            {"config", m.config}};
}

nlohmann::ordered_json stats_to_json(const RunStats& s, const SystemConfig& cfg, std::uint64_t crossbar_count,
                                     std::optional<double> acc, const Manifest& manifest) {
    const TimeBreakdown t = compute_time(s, cfg);
    const EnergyBreakdown e = compute_energy(s, cfg);
    const AreaBreakdown a = compute_area(cfg, crossbar_count);
    const std::uint64_t cyc_l = s.K_L * s.linear_instance.total_cycles();
    const std::uint64_t cyc_a = s.K_A * s.affine_instance.total_cycles();
    const std::uint64_t sw_l = s.J_L * s.linear_instance.total_switches();
    const std::uint64_t sw_a = s.J_A * s.affine_instance.total_switches();

    nlohmann::ordered_json j;
    j["stats_version"] = kStatsVersion;
    j["reads"] = s.reads;
    j["max_reads"] = max_reads_json(cfg.max_reads);
    j["low_th"] = cfg.low_th;
    j["K_L"] = s.K_L;
    j["K_A"] = s.K_A;
    j["J_L"] = s.J_L;
    j["J_A"] = s.J_A;
    j["crossbar_linear_iterations"] = s.crossbar_linear_iterations;
    j["crossbar_affine_iterations"] = s.crossbar_affine_iterations;
    j["batches"] = s.batches;
    j["enqueued"] = s.enqueued;
    j["capped"] = s.capped;
    j["promoted"] = s.promoted;
    j["filtered"] = s.filtered;
    j["riscv"] = {{"instances", s.riscv_instances}, {"linear_filters", s.riscv_linear}};
    j["crossbars"] = {{"assigned", s.crossbars_assigned}, {"used", s.crossbars_used}, {"area_count", crossbar_count}};
    j["results"] = {{"mapped", s.mapped}, {"saturated", s.saturated}, {"unmapped", s.unmapped}};
    j["instance"] = {{"linear", instance_cost_to_json(s.linear_instance)},
                     {"affine", instance_cost_to_json(s.affine_instance)}};
    j["cycles"] = {{"linear", cyc_l}, {"affine", cyc_a}, {"total", cyc_l + cyc_a}};
    j["switches"] = {{"linear", sw_l}, {"affine", sw_a}, {"total", sw_l + sw_a}};
    j["transfer_bits"] = {{"written", s.bits_written}, {"read", s.bits_read}};
    j["time"] = {{"dp_memory", t.dp_memory}, {"transfer", t.transfer}, {"riscv", t.riscv}, {"wall", t.wall}};
    j["energy"] = {{"crossbars", e.crossbars}, {"controllers", e.controllers}, {"peripherals", e.peripherals},
                   {"riscv", e.riscv},         {"transfer", e.transfer},       {"total", e.total()}};
    j["area"] = {{"crossbars", a.crossbars},     {"controllers", a.controllers},   {"peripherals", a.peripherals},
                 {"riscv_cores", a.riscv_cores}, {"riscv_caches", a.riscv_caches}, {"total", a.total()}};
    if (acc) j["accuracy"] = *acc;
    j["manifest"] = manifest_to_json(manifest);
    return j;
}

std::string results_tsv(const std::vector<MappingResult>& results) {
    std::vector<const MappingResult*> order;
    order.reserve(results.size());
    for (const auto& r : results) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const MappingResult* a, const MappingResult* b) {
        return a->id < b->id;
    });
    std::string out;
    for (const MappingResult* r : order) {
        out += r->id;
        if (r->status == MapStatus::Unmapped) {
            out += "\t*\t*\t*\t*\n";
            continue;
        }
        out += '\t';
        out += std::to_string(r->ref_pos);
        out += '\t';
        out += strand_char(r->strand);
        out += '\t';
        out += std::to_string(r->distance);
        out += '\t';
        out += r->trace.ops.empty() ? std::string("*") : r->trace.to_rle();
        out += '\n';
    }
    return out;
}

ReportRow report_row_from_stats(const nlohmann::json& j, std::string source) {
    ReportRow r;
    r.source = std::move(source);
    try {
        if (j.at("stats_version").get<int>() != kStatsVersion) {
            throw DataError(r.source + ": unsupported stats_version");
        }
        const auto& mr = j.at("max_reads");
        r.max_reads = mr.is_string() ? 0 : mr.get<std::uint64_t>();
        r.K_L = j.at("K_L").get<std::uint64_t>();
        r.K_A = j.at("K_A").get<std::uint64_t>();
        if (j.contains("accuracy")) r.accuracy = j.at("accuracy").get<double>();
        const auto& t = j.at("time");
        r.time = {t.at("dp_memory").get<double>(), t.at("transfer").get<double>(), t.at("riscv").get<double>(),
                  t.at("wall").get<double>()};
        const auto& e = j.at("energy");
        r.energy = {e.at("crossbars").get<double>(), e.at("controllers").get<double>(),
                    e.at("peripherals").get<double>(), e.at("riscv").get<double>(), e.at("transfer").get<double>()};
        const auto& a = j.at("area");
        r.area = {a.at("crossbars").get<double>(), a.at("controllers").get<double>(), a.at("peripherals").get<double>(),
                  a.at("riscv_cores").get<double>(), a.at("riscv_caches").get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw DataError(r.source + ": malformed stats: " + e.what());
    }
    return r;
}

namespace {

std::string max_reads_text(std::uint64_t v) { return v == 0 ? "unlimited" : std::to_string(v); }

}  // namespace

std::string report_table(const std::vector<ReportRow>& rows) {
    std::ostringstream o;
    o << std::setprecision(6);
    for (const auto& r : rows) {
        o << r.source << "  (maxReads " << max_reads_text(r.max_reads) << ", K_L " << r.K_L << ", K_A " << r.K_A;
        if (r.accuracy >= 0) o << ", accuracy " << r.accuracy;
        o << ")\n";
        o << "  time [s]     dp_memory " << r.time.dp_memory << "  transfer " << r.time.transfer << "  riscv "
          << r.time.riscv << "  wall " << r.time.wall << '\n';
        o << "  energy [J]   crossbars " << r.energy.crossbars << "  controllers " << r.energy.controllers
          << "  peripherals " << r.energy.peripherals << "  riscv " << r.energy.riscv << "  transfer "
          << r.energy.transfer << "  total " << r.energy.total() << '\n';
        o << "  area [mm^2]  crossbars " << r.area.crossbars << "  controllers " << r.area.controllers
          << "  peripherals " << r.area.peripherals << "  riscv " << r.area.riscv_cores + r.area.riscv_caches
          << "  total " << r.area.total() << '\n';
    }
    return o.str();
}

std::string report_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream o;
    o << std::setprecision(10);
    o << "source,max_reads,K_L,K_A,accuracy,time_dp_memory,time_transfer,time_riscv,time_wall,"
         "energy_crossbars,energy_controllers,energy_peripherals,energy_riscv,energy_transfer,energy_total,"
         "area_total\n";
    for (const auto& r : rows) {
        o << r.source << ',' << max_reads_text(r.max_reads) << ',' << r.K_L << ',' << r.K_A << ',';
        if (r.accuracy >= 0) o << r.accuracy;
        o << ',' << r.time.dp_memory << ',' << r.time.transfer << ',' << r.time.riscv << ',' << r.time.wall << ','
          << r.energy.crossbars << ',' << r.energy.controllers << ',' << r.energy.peripherals << ','
          << r.energy.riscv << ',' << r.energy.transfer << ',' << r.energy.total() << ',' << r.area.total() << '\n';
    }
    return o.str();
}

}  // namespace dartpim
