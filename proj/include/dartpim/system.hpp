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

#ifndef DARTPIM_SYSTEM_HPP
#define DARTPIM_SYSTEM_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dartpim/crossbar.hpp"
#include "dartpim/genomio.hpp"
#include "dartpim/magic_cost.hpp"
#include "dartpim/minimizer_index.hpp"
#include "dartpim/wf.hpp"

namespace dartpim {

struct HierarchyConfig {
    std::uint32_t chips = 32;
    std::uint32_t banks_per_chip = 512;
    std::uint32_t crossbars_per_bank = 512;

    std::uint64_t banks() const { return std::uint64_t{chips} * banks_per_chip; }
    std::uint64_t crossbars() const { return banks() * crossbars_per_bank; }
};

struct RiscvConfig {
    std::uint32_t cores = 128;
    double instance_latency = 88e-6;  // seconds per affine instance
    double core_power = 40e-3;        // W
    double cache_power = 8e-3;        // W
    double core_area = 0.11;          // mm^2
    double cache_area = 0.05;         // mm^2
};

struct TransferConfig {
    double bandwidth = 32e9;             // bytes per second
    double write_energy_per_bit = 11.7e-12;
    double read_energy_per_bit = 5.64e-12;
};

/// Power (W) and area (um^2) of one unit.
struct UnitCost {
    double power = 0.0;
    double area = 0.0;
};

struct ControllerConfig {
    UnitCost crossbar{9.43e-6, 21.0};
    UnitCost bank{0.42e-3, 939.0};
    UnitCost chip{9.4e-3, 20091.0};
    UnitCost pim{0.5e-3, 938.0};
};

/// Peripheral units: decode/drive per bank, R/W circuit per crossbar,
/// one selector passgate per crossbar column, one driver passgate per row.
struct PeripheralConfig {
    UnitCost decode_drive{129.1e-6, 277.0};
    UnitCost rw_circuit{10e-12, 0.06};
    UnitCost selector_passgate{20e-12, 0.001};
    UnitCost driver_passgate{20e-12, 0.001};
};

/// Informational only; not used by the cost model.
struct DeviceConfig {
    double r_on = 50e3;
    double r_off = 5e6;
    double feature_size = 30e-9;  // m; a cell occupies 4F^2
};

inline constexpr std::uint64_t kUnlimitedReads = std::numeric_limits<std::uint64_t>::max();

struct SystemConfig {
    HierarchyConfig hierarchy;
    CrossbarConfig crossbar;
    RiscvConfig riscv;
    TransferConfig transfer;
    ControllerConfig controllers;
    PeripheralConfig peripherals;
    DeviceConfig device;
    EnergyTimeConstants energy;
    std::uint32_t low_th = 3;
    std::uint64_t max_reads = 25000;  // per-crossbar intake cap
    std::uint32_t linear_bits = 3;
    std::uint32_t affine_bits = 5;
    std::uint32_t affine_sat = 31;
    WfWeights weights;
    /// Per-instance costs; unset means derived from the index parameters.
    std::optional<InstanceCost> linear_cost;
    std::optional<InstanceCost> affine_cost;
    /// Use the itemized affine composition instead of the reference figures.
    bool composed_affine_cost = false;
    std::uint32_t threads = 1;

    /// Throws ConfigError on non-positive constants or max_reads == 0.
    void validate() const;
};

/// Reference affine instance at rl=150, eth=6.
InstanceCost reference_affine_instance_cost();

struct ResolvedCosts {
    InstanceCost linear;
    InstanceCost affine;
};

ResolvedCosts resolve_costs(const SystemConfig& cfg, const IndexParams& params);
WfParams linear_wf_params(const SystemConfig& cfg, const IndexParams& params);
WfParams affine_wf_params(const SystemConfig& cfg, const IndexParams& params);

struct RunStats {
    std::uint64_t reads = 0;
    /// Lock-step iterations across all crossbars; these drive the DP-memory time.
    std::uint64_t K_L = 0;
    std::uint64_t K_A = 0;
    /// Iterations summed over crossbars.
    std::uint64_t crossbar_linear_iterations = 0;
    std::uint64_t crossbar_affine_iterations = 0;
    /// Instance counts: linear rows evaluated and affine slots evaluated.
    std::uint64_t J_L = 0;
    std::uint64_t J_A = 0;
    std::uint64_t batches = 0;              // drains triggered by a full FIFO or end of stream
    std::uint64_t enqueued = 0;             // read copies written to a Reads FIFO
    std::uint64_t capped = 0;               // copies refused by the per-crossbar intake cap
    std::uint64_t promoted = 0;
    std::uint64_t filtered = 0;
    std::uint64_t riscv_instances = 0;      // affine instances run on the RISC-V pool
    std::uint64_t riscv_linear = 0;         // linear filters run on the RISC-V pool
    std::uint64_t bits_written = 0;
    std::uint64_t bits_read = 0;
    std::uint64_t crossbars_used = 0;       // crossbars that received at least one read
    std::uint64_t crossbars_assigned = 0;
    std::uint64_t mapped = 0;
    std::uint64_t saturated = 0;
    std::uint64_t unmapped = 0;
    InstanceCost linear_instance = linear_instance_cost();
    InstanceCost affine_instance = reference_affine_instance_cost();

    friend bool operator==(const RunStats&, const RunStats&) = default;
};

enum class MapStatus : std::uint8_t { Mapped, Saturated, Unmapped };

struct MappingResult {
    std::uint32_t read_index = 0;
    std::string id;
    MapStatus status = MapStatus::Unmapped;
    std::uint64_t ref_pos = 0;
    Strand strand = Strand::Forward;
    std::uint32_t distance = 0;
    Traceback trace;

    friend bool operator==(const MappingResult&, const MappingResult&) = default;
};

struct MappingRun {
    std::vector<MappingResult> results;  // in input order
    RunStats stats;
};

/// Throws ConfigError when the layout threshold differs from cfg.low_th or
/// the layout rows exceed the linear buffer.
MappingRun run_mapping(const CrossbarLayout& layout, const MinimizerIndex& index, const std::vector<Read>& reads,
                       const SystemConfig& cfg);

/// ceil(instances / cores) * latency.
double riscv_offload(std::uint64_t instances, const SystemConfig& cfg);

struct TimeBreakdown {
    double dp_memory = 0.0;
    double transfer = 0.0;
    double riscv = 0.0;
    double wall = 0.0;
};

struct EnergyBreakdown {
    double crossbars = 0.0;
    double controllers = 0.0;
    double peripherals = 0.0;
    double riscv = 0.0;
    double transfer = 0.0;

    double total() const { return crossbars + controllers + peripherals + riscv + transfer; }
};

struct AreaBreakdown {  // mm^2
    double crossbars = 0.0;
    double controllers = 0.0;
    double peripherals = 0.0;
    double riscv_cores = 0.0;
    double riscv_caches = 0.0;

    double total() const { return crossbars + controllers + peripherals + riscv_cores + riscv_caches; }
};

TimeBreakdown compute_time(const RunStats& stats, const SystemConfig& cfg);
EnergyBreakdown compute_energy(const RunStats& stats, const SystemConfig& cfg);
AreaBreakdown compute_area(const SystemConfig& cfg, std::uint64_t crossbar_count);

double controller_power(const SystemConfig& cfg);
double peripheral_power(const SystemConfig& cfg);
double riscv_power(const SystemConfig& cfg);
/// One crossbar in mm^2.
double crossbar_area(const SystemConfig& cfg);

/// Full-matrix affine alignment of each read, both orientations, against
/// every reference segment of every read minimizer; no frequency routing,
/// no intake cap, no band. Overlapping segments are merged first.
std::vector<MappingResult> oracle_map(const MinimizerIndex& index, const DnaSequence& ref,
                                      const std::vector<Read>& reads, const WfWeights& weights = {});

/// Fraction of reads whose result position and strand equal the truth.
/// Reads without truth are skipped; returns 0 for an empty denominator.
double accuracy(const std::vector<MappingResult>& results, const std::vector<Read>& reads);

/// Fraction of reads with the same status, position and strand in both lists.
double agreement(const std::vector<MappingResult>& a, const std::vector<MappingResult>& b);

}  // namespace dartpim

#endif  // DARTPIM_SYSTEM_HPP
