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

#include "dartpim/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "dartpim/error.hpp"

namespace dartpim {

namespace {

void require_positive(double v, const char* what) {
    if (!(v > 0)) throw ConfigError(std::string(what) + " must be positive");
}

}  // namespace

void SystemConfig::validate() const {
    if (hierarchy.chips == 0 || hierarchy.banks_per_chip == 0 || hierarchy.crossbars_per_bank == 0) {
        throw ConfigError("hierarchy counts must be positive");
    }
    if (riscv.cores == 0) throw ConfigError("riscv.cores must be positive");
    require_positive(riscv.instance_latency, "riscv.instance_latency");
    require_positive(riscv.core_power, "riscv.core_power");
    require_positive(riscv.cache_power, "riscv.cache_power");
    require_positive(riscv.core_area, "riscv.core_area");
    require_positive(riscv.cache_area, "riscv.cache_area");
    require_positive(transfer.bandwidth, "transfer.bandwidth");
    require_positive(transfer.write_energy_per_bit, "transfer.write_energy_per_bit");
    require_positive(transfer.read_energy_per_bit, "transfer.read_energy_per_bit");
    for (const UnitCost* u : {&controllers.crossbar, &controllers.bank, &controllers.chip, &controllers.pim,
                              &peripherals.decode_drive, &peripherals.rw_circuit, &peripherals.selector_passgate,
                              &peripherals.driver_passgate}) {
        require_positive(u->power, "unit power");
        require_positive(u->area, "unit area");
    }
    require_positive(device.r_on, "device.r_on");
    require_positive(device.r_off, "device.r_off");
    require_positive(device.feature_size, "device.feature_size");
    energy.validate();
    if (max_reads == 0) throw ConfigError("max_reads must be at least 1");
    if (threads == 0) throw ConfigError("threads must be at least 1");
    WfParams{6, 6 + 1, linear_bits, weights}.validate();
    WfParams{6, affine_sat, affine_bits, weights}.validate();
}

InstanceCost reference_affine_instance_cost() {
    InstanceCost c;
    c.magic_cycles = 1288281;
    c.write_cycles = 20418;
    c.magic_switches = 1271921;
    c.write_switches = 1277495;
    return c;
}

ResolvedCosts resolve_costs(const SystemConfig& cfg, const IndexParams& params) {
    ResolvedCosts r;
    r.linear = cfg.linear_cost ? *cfg.linear_cost : linear_instance_cost(params.rl, params.eth, cfg.linear_bits);
    if (cfg.affine_cost) {
        r.affine = *cfg.affine_cost;
    } else if (!cfg.composed_affine_cost && params.rl == 150 && params.eth == 6 && cfg.affine_bits == 5) {
        r.affine = reference_affine_instance_cost();
    } else {
        r.affine = affine_instance_cost(params.rl, params.eth, cfg.affine_bits);
    }
    return r;
}

WfParams linear_wf_params(const SystemConfig& cfg, const IndexParams& params) {
    WfParams p{params.eth, params.eth + 1, cfg.linear_bits, cfg.weights};
    p.validate();
    return p;
}

WfParams affine_wf_params(const SystemConfig& cfg, const IndexParams& params) {
    WfParams p{params.eth, cfg.affine_sat, cfg.affine_bits, cfg.weights};
    p.validate();
    return p;
}

namespace {

// Candidates compare by distance, then position, then forward strand first;
// the trace only separates otherwise equal candidates.
bool better(const CandidateResult& a, const CandidateResult& b) {
    return std::tie(a.distance, a.ref_pos, a.strand, a.trace.ops, a.trace.start_offset) <
           std::tie(b.distance, b.ref_pos, b.strand, b.trace.ops, b.trace.start_offset);
}

void offer(std::optional<CandidateResult>& slot, CandidateResult c) {
    if (!slot || better(c, *slot)) slot = std::move(c);
}

std::uint64_t readout_bits(const CandidateResult& c) {
    return (8 + 4 + 1) * 8 + 2 * std::uint64_t{c.trace.ops.size()};
}

struct DrainLog {
    std::uint64_t rounds = 0;                   // linear iterations in this drain
    std::vector<std::uint64_t> affine_rounds;   // round index before which an affine batch ran
    std::vector<CandidateResult> candidates;
    std::uint64_t linear_iterations = 0;
    std::uint64_t affine_iterations = 0;
    std::uint64_t j_l = 0;
    std::uint64_t j_a = 0;
    std::uint64_t promoted = 0;
    std::uint64_t filtered = 0;
};

void drain_crossbar(Crossbar& xb, bool flush, DrainLog& log) {
    auto run_affine = [&](std::uint64_t round) {
        AffineOutcome a = xb.run_affine_iteration();
        if (a.event.rows == 0) return;
        log.affine_rounds.push_back(round);
        ++log.affine_iterations;
        log.j_a += a.event.rows;
        for (auto& c : a.candidates) log.candidates.push_back(std::move(c));
    };
    while (xb.fifo_size() > 0) {
        if (xb.affine_full()) run_affine(log.rounds);
        LinearOutcome l = xb.run_linear_iteration();
        ++log.rounds;
        ++log.linear_iterations;
        log.j_l += l.event.rows;
        if (l.promoted) {
            ++log.promoted;
        } else {
            ++log.filtered;
        }
    }
    // A full buffer is run as soon as it fills; partial ones wait for the flush.
    if (xb.affine_full() || (flush && xb.slots_used() > 0)) run_affine(log.rounds);
}

template <typename Fn>
void parallel_for(std::size_t n, std::uint32_t threads, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

MappingRun run_mapping(const CrossbarLayout& layout, const MinimizerIndex& index, const std::vector<Read>& reads,
                       const SystemConfig& cfg) {
    cfg.validate();
    const IndexParams& params = index.params();
    cfg.crossbar.validate(params.rl);
    if (layout.low_th != cfg.low_th) {
        throw ConfigError("layout built with low_th " + std::to_string(layout.low_th) + " but configuration has " +
                          std::to_string(cfg.low_th));
    }
    if (layout.rows_per_crossbar > cfg.crossbar.linear_rows) {
        throw ConfigError("layout uses more rows per crossbar than the linear buffer holds");
    }

    const ResolvedCosts costs = resolve_costs(cfg, params);
    const WfParams lin = linear_wf_params(cfg, params);
    const WfParams aff = affine_wf_params(cfg, params);
    const std::size_t max_read_len = params.segment_length() - 2 * std::size_t{params.eth};

    MappingRun run;
    RunStats& st = run.stats;
    st.reads = reads.size();
    st.crossbars_assigned = layout.crossbars.size();
    st.linear_instance = costs.linear;
    st.affine_instance = costs.affine;

    std::vector<Crossbar> xbars;
    xbars.reserve(layout.crossbars.size());
    for (const auto& a : layout.crossbars) {
        xbars.emplace_back(cfg.crossbar, lin, aff, layout.segments_of(index, a.id));
    }
    std::vector<std::uint64_t> intake(xbars.size(), 0);
    std::vector<std::optional<CandidateResult>> best(reads.size());

    auto drain = [&](bool flush) {
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < xbars.size(); ++i) {
            if (xbars[i].fifo_size() > 0 || (flush && xbars[i].slots_used() > 0)) active.push_back(i);
        }
        if (active.empty()) return;
        ++st.batches;
        std::vector<DrainLog> logs(active.size());
        parallel_for(active.size(), cfg.threads, [&](std::size_t k) { drain_crossbar(xbars[active[k]], flush, logs[k]); });

        std::uint64_t rounds = 0;
        for (const auto& log : logs) rounds = std::max(rounds, log.rounds);
        std::vector<bool> affine_round(rounds + 1, false);
        for (auto& log : logs) {
            for (auto r : log.affine_rounds) affine_round[r] = true;
            st.crossbar_linear_iterations += log.linear_iterations;
            st.crossbar_affine_iterations += log.affine_iterations;
            st.J_L += log.j_l;
            st.J_A += log.j_a;
            st.promoted += log.promoted;
            st.filtered += log.filtered;
            for (auto& c : log.candidates) {
                st.bits_read += readout_bits(c);
                const std::uint32_t r = c.read_index;
                offer(best[r], std::move(c));
            }
        }
        st.K_L += rounds;
        st.K_A += static_cast<std::uint64_t>(std::count(affine_round.begin(), affine_round.end(), true));
    };

    auto run_riscv = [&](const MinimizerEntry& entry, const QueuedRead& q) {
        std::vector<std::uint32_t> dist;
        std::vector<std::size_t> starts;
        dist.reserve(entry.segments.size());
        for (const auto& seg : entry.segments) {
            const std::size_t start = band_window_start(seg, q.offset, q.seq.size(), lin.eth);
            dist.push_back(linear_wf_banded(q.seq, seg.segment.subseq(start, q.seq.size() + 2 * std::size_t{lin.eth}), lin));
            starts.push_back(start);
        }
        st.riscv_linear += dist.size();
        const std::size_t b = min_extract(dist);
        if (dist[b] >= lin.sat) return;
        const ReferenceSegment& seg = entry.segments[b];
        AffineResult r = affine_wf_banded(q.seq, seg.segment.subseq(starts[b], q.seq.size() + 2 * std::size_t{aff.eth}), aff);
        ++st.riscv_instances;
        CandidateResult c;
        c.read_index = q.read_index;
        c.strand = q.strand;
        c.distance = r.distance;
        c.saturated = r.saturated;
        c.ref_pos = seg.segment_start + starts[b] + (r.saturated ? aff.eth : r.trace.start_offset);
        c.trace = std::move(r.trace);
        offer(best[q.read_index], std::move(c));
    };

    std::vector<bool> touched(xbars.size(), false);
    for (std::size_t ri = 0; ri < reads.size(); ++ri) {
        const Read& read = reads[ri];
        if (read.seq.size() > max_read_len) continue;
        for (Strand strand : {Strand::Forward, Strand::Reverse}) {
            const DnaSequence seq = strand == Strand::Forward ? read.seq : reverse_complement(read.seq);
            for (const MinimizerHit& hit : read_minimizers(seq, params)) {
                const MinimizerEntry* entry = index.find(hit.minimizer);
                if (entry == nullptr) continue;
                QueuedRead q{static_cast<std::uint32_t>(ri), strand, seq, static_cast<std::uint32_t>(hit.position)};
                if (layout.is_riscv(hit.minimizer)) {
                    run_riscv(*entry, q);
                    continue;
                }
                const auto it = layout.by_minimizer.find(hit.minimizer);
                if (it == layout.by_minimizer.end()) continue;
                const auto [first, count] = it->second;
                for (std::uint32_t id = first; id < first + count; ++id) {
                    if (intake[id] >= cfg.max_reads) {
                        ++st.capped;
                        continue;
                    }
                    if (!xbars[id].enqueue(q)) {
                        drain(false);
                        if (!xbars[id].enqueue(q)) throw std::logic_error("Reads FIFO still full after a drain");
                    }
                    ++intake[id];
                    touched[id] = true;
                    ++st.enqueued;
                    st.bits_written += 2 * std::uint64_t{seq.size()} + 8;
                }
            }
        }
    }
    drain(true);
    st.crossbars_used = static_cast<std::uint64_t>(std::count(touched.begin(), touched.end(), true));

    run.results.resize(reads.size());
    for (std::size_t ri = 0; ri < reads.size(); ++ri) {
        MappingResult& m = run.results[ri];
        m.read_index = static_cast<std::uint32_t>(ri);
        m.id = reads[ri].id;
        if (!best[ri]) {
            m.status = MapStatus::Unmapped;
            ++st.unmapped;
            continue;
        }
        CandidateResult& c = *best[ri];
        m.status = c.saturated ? MapStatus::Saturated : MapStatus::Mapped;
        m.ref_pos = c.ref_pos;
        m.strand = c.strand;
        m.distance = c.distance;
        m.trace = std::move(c.trace);
        if (c.saturated) {
            ++st.saturated;
        } else {
            ++st.mapped;
        }
    }
    return run;
}

double riscv_offload(std::uint64_t instances, const SystemConfig& cfg) {
    const std::uint64_t waves = (instances + cfg.riscv.cores - 1) / cfg.riscv.cores;
    return static_cast<double>(waves) * cfg.riscv.instance_latency;
}

TimeBreakdown compute_time(const RunStats& stats, const SystemConfig& cfg) {
    TimeBreakdown t;
    const double cycles = static_cast<double>(stats.K_L) * static_cast<double>(stats.linear_instance.total_cycles()) +
                          static_cast<double>(stats.K_A) * static_cast<double>(stats.affine_instance.total_cycles());
    t.dp_memory = cycles * cfg.energy.t_clk;
    t.transfer = static_cast<double>(stats.bits_written + stats.bits_read) / 8.0 / cfg.transfer.bandwidth;
    t.riscv = riscv_offload(stats.riscv_instances, cfg);
    t.wall = std::max({t.dp_memory, t.transfer, t.riscv});
    return t;
}

double controller_power(const SystemConfig& cfg) {
    const auto& h = cfg.hierarchy;
    const auto& c = cfg.controllers;
    return static_cast<double>(h.crossbars()) * c.crossbar.power + static_cast<double>(h.banks()) * c.bank.power +
           static_cast<double>(h.chips) * c.chip.power + c.pim.power;
}

double peripheral_power(const SystemConfig& cfg) {
    const auto& h = cfg.hierarchy;
    const auto& p = cfg.peripherals;
    const double xb = static_cast<double>(h.crossbars());
    return static_cast<double>(h.banks()) * p.decode_drive.power + xb * p.rw_circuit.power +
           xb * cfg.crossbar.cols * p.selector_passgate.power + xb * cfg.crossbar.rows * p.driver_passgate.power;
}

double riscv_power(const SystemConfig& cfg) {
    return static_cast<double>(cfg.riscv.cores) * (cfg.riscv.core_power + cfg.riscv.cache_power);
}

EnergyBreakdown compute_energy(const RunStats& stats, const SystemConfig& cfg) {
    EnergyBreakdown e;
    e.crossbars = energy_of(stats.linear_instance, cfg.energy) * static_cast<double>(stats.J_L) +
                  energy_of(stats.affine_instance, cfg.energy) * static_cast<double>(stats.J_A);
    const double wall = compute_time(stats, cfg).wall;
    e.controllers = controller_power(cfg) * wall;
    e.peripherals = peripheral_power(cfg) * wall;
    e.riscv = riscv_power(cfg) * wall;
    e.transfer = static_cast<double>(stats.bits_written) * cfg.transfer.write_energy_per_bit +
                 static_cast<double>(stats.bits_read) * cfg.transfer.read_energy_per_bit;
    return e;
}

double crossbar_area(const SystemConfig& cfg) {
    const double f_mm = cfg.device.feature_size * 1e3;
    return static_cast<double>(cfg.crossbar.rows) * cfg.crossbar.cols * 4.0 * f_mm * f_mm;
}

AreaBreakdown compute_area(const SystemConfig& cfg, std::uint64_t crossbar_count) {
    constexpr double kUm2ToMm2 = 1e-6;
    const auto& h = cfg.hierarchy;
    const auto& c = cfg.controllers;
    const auto& p = cfg.peripherals;
    const double xb = static_cast<double>(h.crossbars());
    AreaBreakdown a;
    a.crossbars = static_cast<double>(crossbar_count) * crossbar_area(cfg);
    a.controllers = (xb * c.crossbar.area + static_cast<double>(h.banks()) * c.bank.area +
                     static_cast<double>(h.chips) * c.chip.area + c.pim.area) *
                    kUm2ToMm2;
    a.peripherals = (static_cast<double>(h.banks()) * p.decode_drive.area + xb * p.rw_circuit.area +
                     xb * cfg.crossbar.cols * p.selector_passgate.area + xb * cfg.crossbar.rows * p.driver_passgate.area) *
                    kUm2ToMm2;
    a.riscv_cores = cfg.riscv.cores * cfg.riscv.core_area;
    a.riscv_caches = cfg.riscv.cores * cfg.riscv.cache_area;
    return a;
}

std::vector<MappingResult> oracle_map(const MinimizerIndex& index, const DnaSequence& ref,
                                      const std::vector<Read>& reads, const WfWeights& weights) {
    const IndexParams& params = index.params();
    const std::uint64_t seg_len = params.segment_length();
    std::vector<MappingResult> out(reads.size());
    for (std::size_t ri = 0; ri < reads.size(); ++ri) {
        MappingResult& m = out[ri];
        m.read_index = static_cast<std::uint32_t>(ri);
        m.id = reads[ri].id;
        std::optional<CandidateResult> best;
        for (Strand strand : {Strand::Forward, Strand::Reverse}) {
            const DnaSequence seq = strand == Strand::Forward ? reads[ri].seq : reverse_complement(reads[ri].seq);
            std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
            for (const MinimizerHit& hit : read_minimizers(seq, params)) {
                const MinimizerEntry* entry = index.find(hit.minimizer);
                if (entry == nullptr) continue;
                for (const auto& seg : entry->segments) spans.emplace_back(seg.segment_start, seg.segment_start + seg_len);
            }
            std::sort(spans.begin(), spans.end());
            std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
            for (const auto& s : spans) {
                if (!merged.empty() && s.first <= merged.back().second) {
                    merged.back().second = std::max(merged.back().second, s.second);
                } else {
                    merged.push_back(s);
                }
            }
            for (const auto& [lo, hi] : merged) {
                UnbandedAlignment a = affine_wf_unbanded(seq, ref.subseq(lo, hi - lo), weights);
                CandidateResult c;
                c.read_index = static_cast<std::uint32_t>(ri);
                c.strand = strand;
                c.distance = static_cast<std::uint32_t>(std::min<std::uint64_t>(a.distance, UINT32_MAX));
                c.ref_pos = lo + a.ref_start;
                c.trace = std::move(a.trace);
                c.trace.start_offset = 0;
                offer(best, std::move(c));
            }
        }
        if (!best) continue;
        m.status = MapStatus::Mapped;
        m.ref_pos = best->ref_pos;
        m.strand = best->strand;
        m.distance = best->distance;
        m.trace = std::move(best->trace);
    }
    return out;
}

double accuracy(const std::vector<MappingResult>& results, const std::vector<Read>& reads) {
    std::uint64_t total = 0;
    std::uint64_t hits = 0;
    for (const auto& m : results) {
        if (m.read_index >= reads.size() || !reads[m.read_index].truth) continue;
        const TruthOrigin& t = *reads[m.read_index].truth;
        ++total;
        if (m.status != MapStatus::Unmapped && m.ref_pos == t.ref_pos && m.strand == t.strand) ++hits;
    }
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
}

double agreement(const std::vector<MappingResult>& a, const std::vector<MappingResult>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("result lists differ in length");
    if (a.empty()) return 1.0;
    std::uint64_t same = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool ua = a[i].status == MapStatus::Unmapped;
        const bool ub = b[i].status == MapStatus::Unmapped;
        if (ua || ub) {
            same += ua == ub;
        } else {
            same += a[i].ref_pos == b[i].ref_pos && a[i].strand == b[i].strand;
        }
    }
    return static_cast<double>(same) / static_cast<double>(a.size());
}

}  // namespace dartpim
