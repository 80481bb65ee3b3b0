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

#include "dartpim/magic_cost.hpp"

#include <algorithm>
#include <stdexcept>

#include "dartpim/error.hpp"

namespace dartpim {

OpFormula op_formula(Primitive p) {
    switch (p) {
        case Primitive::And: return {3, 0};
        case Primitive::Xnor: return {4, 0};
        case Primitive::Xor: return {5, 0};
        case Primitive::Copy: return {1, 1};
        case Primitive::AddTwoNbit: return {9, 0};
        case Primitive::AddNbitPlus1bit: return {5, 0};
        case Primitive::AddConst: return {5, 0};
        case Primitive::Subtract: return {9, 0};
        case Primitive::Mux: return {3, 1};
        case Primitive::MinTwoNbit: return {12, 1};
    }
    throw std::invalid_argument("unknown primitive " + std::to_string(static_cast<int>(p)));
}

std::string_view primitive_name(Primitive p) {
    switch (p) {
        case Primitive::And: return "AND";
        case Primitive::Xnor: return "XNOR";
        case Primitive::Xor: return "XOR";
        case Primitive::Copy: return "Copy";
        case Primitive::AddTwoNbit: return "AddTwoNbit";
        case Primitive::AddNbitPlus1bit: return "AddNbitPlus1bit";
        case Primitive::AddConst: return "AddConst";
        case Primitive::Subtract: return "Subtract";
        case Primitive::Mux: return "Mux";
        case Primitive::MinTwoNbit: return "MinTwoNbit";
    }
    throw std::invalid_argument("unknown primitive " + std::to_string(static_cast<int>(p)));
}

std::uint64_t op_cycles(Primitive p, std::uint32_t n) {
    if (n == 0) throw std::invalid_argument("operand width must be at least 1 bit");
    const OpFormula f = op_formula(p);
    return std::uint64_t{f.slope} * n + f.intercept;
}

std::uint64_t sum_cycles(const std::vector<CostStep>& steps) {
    std::uint64_t total = 0;
    for (const auto& s : steps) total += s.cycles;
    return total;
}

// Each in-cell minimum is sequenced in 13b gates.
std::vector<CostStep> linear_cell_steps(std::uint32_t b) {
    if (b == 0) throw std::invalid_argument("cell width must be at least 1 bit");
    const std::uint64_t bb = b;
    return {
        {"X = min(top, left)", 13 * bb},
        {"Y = min(X, diag)", 13 * bb},
        {"Z = Y + 1", op_cycles(Primitive::AddNbitPlus1bit, b)},
        {"S1 = (Y == all ones), two single-bit ANDs", 6},
        {"MUX1 = S1 ? Y : Z", op_cycles(Primitive::Mux, b)},
        {"S2 = (read base == ref base), two XNORs and an AND", 11},
        {"out = S2 ? diag : MUX1", op_cycles(Primitive::Mux, b)},
    };
}

std::uint64_t linear_cell_cycles(std::uint32_t b) { return sum_cycles(linear_cell_steps(b)); }

std::uint32_t evaluate_linear_cell(std::uint32_t top, std::uint32_t left, std::uint32_t diag, bool match,
                                   std::uint32_t b) {
    const std::uint32_t all_ones = (1u << b) - 1;
    const std::uint32_t x = std::min(top, left);
    const std::uint32_t y = std::min(x, diag);
    const std::uint32_t z = (y + 1) & all_ones;
    const bool s1 = y == all_ones;
    const std::uint32_t mux1 = s1 ? y : z;
    return match ? diag : mux1;
}

std::uint64_t linear_core_cycles(std::uint32_t rl, std::uint32_t eth, std::uint32_t b) {
    return (2 * std::uint64_t{eth} + 1) * rl * linear_cell_cycles(b);
}

namespace {

// Calibration constants of the default instance (rl=150, eth=6):
// min extraction over the buffer rows (922 cycles), the read copy-in beyond
// the per-cell presets (135 write cycles), MAGIC gates whose output already
// sat in the preset state (201), and write switches outside the per-gate
// presets (2*rl read bits plus 614 for offsets and row selects).
constexpr std::uint64_t kLinearMinExtractCycles = 922;
constexpr std::uint64_t kLinearCopyInWrites = 135;
constexpr std::uint64_t kLinearIdleMagicSwitches = 201;
constexpr std::uint64_t kLinearExtraWriteSwitches = 614;

// Gates per output-column preset write: one write presets a 65-gate run.
constexpr std::uint64_t kGatesPerPresetWrite = 65;

}  // namespace

LinearOverhead linear_overhead(std::uint32_t rl, std::uint32_t eth) {
    LinearOverhead o;
    const std::uint64_t cells = (2 * std::uint64_t{eth} + 1) * rl;
    o.init_cycles = rl + 2 * std::uint64_t{eth} + 1;
    o.min_extract_cycles = rl == 0 ? 0 : kLinearMinExtractCycles;
    o.copy_in_writes = rl == 0 ? 0 : kLinearCopyInWrites;
    o.init_writes = 2 * cells;
    return o;
}

InstanceCost linear_instance_cost(std::uint32_t rl, std::uint32_t eth, std::uint32_t b) {
    const LinearOverhead o = linear_overhead(rl, eth);
    InstanceCost c;
    c.magic_cycles = linear_core_cycles(rl, eth, b) + o.init_cycles + o.min_extract_cycles;
    c.write_cycles = o.init_writes + o.copy_in_writes;
    c.magic_switches = c.magic_cycles > kLinearIdleMagicSwitches ? c.magic_cycles - kLinearIdleMagicSwitches : 0;
    c.write_switches = c.magic_cycles + 2 * std::uint64_t{rl} + (rl == 0 ? 0 : kLinearExtraWriteSwitches);
    return c;
}

AffineCostBreakdown affine_cost_breakdown(std::uint32_t rl, std::uint32_t eth, std::uint32_t b) {
    if (b == 0) throw std::invalid_argument("cell width must be at least 1 bit");
    using P = Primitive;
    AffineCostBreakdown a;
    const std::uint64_t min = op_cycles(P::MinTwoNbit, b);
    const std::uint64_t add = op_cycles(P::AddConst, b);
    a.cell = {
        {"M1: extend, M1(top) + ex", add},
        {"M1: open, D(top) + op + ex", add},
        {"M1: min of open and extend", min},
        {"M1: clamp to sat", min},
        {"M1: record extend bit", op_cycles(P::Copy, 1)},
        {"M2: extend, M2(left) + ex", add},
        {"M2: open, D(left) + op + ex", add},
        {"M2: min of open and extend", min},
        {"M2: clamp to sat", min},
        {"M2: record extend bit", op_cycles(P::Copy, 1)},
        {"D: base equality, two XNORs and an AND", 11},
        {"D: diag + sub", add},
        {"D: min with M2", min},
        {"D: min with M1", min},
        {"D: clamp to sat", min},
        {"D: match ? diag : min", op_cycles(P::Mux, b)},
        {"D: record two origin select bits", 2 * op_cycles(P::Copy, 1)},
        {"D: origin forced to match on equality", op_cycles(P::Mux, 2)},
        {"direction nibble to the record row", op_cycles(P::Copy, 4)},
    };
    a.traceback_step = {
        {"select the current column's nibble", 2 * std::uint64_t{eth} * op_cycles(P::Mux, 4)},
        {"next state", op_cycles(P::Mux, 2)},
        {"column update", op_cycles(P::AddConst, 4)},
        {"emit op code", op_cycles(P::Copy, 2)},
    };
    a.cells = (2 * std::uint64_t{eth} + 1) * rl;
    // Longest in-band path: every read base plus at most 2*eth deletions.
    a.traceback_steps = rl == 0 ? 0 : std::uint64_t{rl} + 2 * std::uint64_t{eth};
    a.init_cycles = rl == 0 ? 0 : 3 * (2 * std::uint64_t{eth} + 1);
    a.writes_per_cell = (sum_cycles(a.cell) + kGatesPerPresetWrite - 1) / kGatesPerPresetWrite;
    a.copy_in_writes = rl == 0 ? 0 : kLinearCopyInWrites;
    a.copy_in_bits = rl == 0 ? 0 : 2 * std::uint64_t{rl} + 2 * (std::uint64_t{rl} + 2 * eth);
    return a;
}

InstanceCost affine_instance_cost(std::uint32_t rl, std::uint32_t eth, std::uint32_t b) {
    const AffineCostBreakdown a = affine_cost_breakdown(rl, eth, b);
    InstanceCost c;
    c.magic_cycles = a.cells * sum_cycles(a.cell) + a.traceback_steps * sum_cycles(a.traceback_step) + a.init_cycles;
    c.write_cycles = a.cells * a.writes_per_cell + a.copy_in_writes;
    c.magic_switches = c.magic_cycles;
    c.write_switches = c.magic_cycles + a.copy_in_bits;
    return c;
}

void EnergyTimeConstants::validate() const {
    if (!(t_clk > 0) || !(e_magic > 0) || !(e_write > 0)) {
        throw ConfigError("cycle time and switch energies must be positive");
    }
}

double energy_of(const InstanceCost& cost, const EnergyTimeConstants& c) {
    return static_cast<double>(cost.magic_switches) * c.e_magic + static_cast<double>(cost.write_switches) * c.e_write;
}

double time_of(const InstanceCost& cost, const EnergyTimeConstants& c) {
    return static_cast<double>(cost.total_cycles()) * c.t_clk;
}

}  // namespace dartpim
