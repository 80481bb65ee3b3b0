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

#ifndef DARTPIM_MAGIC_COST_HPP
#define DARTPIM_MAGIC_COST_HPP

// Cycle and switch model for WF instances compiled to MAGIC NOR sequences.
// Every MAGIC NOR gate takes one cycle; a primitive on N-bit operands costs
// slope*N + intercept gates.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dartpim {

enum class Primitive : std::uint8_t {
    And,
    Xnor,
    Xor,
    Copy,
    AddTwoNbit,
    AddNbitPlus1bit,
    AddConst,
    Subtract,
    Mux,
    MinTwoNbit,
};

inline constexpr std::array<Primitive, 10> kAllPrimitives = {
    Primitive::And,      Primitive::Xnor,       Primitive::Xor,
    Primitive::Copy,     Primitive::AddTwoNbit, Primitive::AddNbitPlus1bit,
    Primitive::AddConst, Primitive::Subtract,   Primitive::Mux,
    Primitive::MinTwoNbit,
};

struct OpFormula {
    std::uint32_t slope = 0;
    std::uint32_t intercept = 0;
};

/// Throws std::invalid_argument for a value outside the enumeration.
OpFormula op_formula(Primitive p);
std::string_view primitive_name(Primitive p);
/// Throws std::invalid_argument for N == 0 or an unknown primitive.
std::uint64_t op_cycles(Primitive p, std::uint32_t n);

/// One line of an itemized gate sequence.
struct CostStep {
    std::string label;
    std::uint64_t cycles = 0;
};

std::uint64_t sum_cycles(const std::vector<CostStep>& steps);

/// The linear cell update as a list of primitives; sums to 37b+19.
std::vector<CostStep> linear_cell_steps(std::uint32_t b);
std::uint64_t linear_cell_cycles(std::uint32_t b);

/// Functional model of the linear cell gate sequence with unit weights:
/// Y = min(top, left, diag); result = match ? diag : (Y saturated ? Y : Y+1).
std::uint32_t evaluate_linear_cell(std::uint32_t top, std::uint32_t left, std::uint32_t diag, bool match,
                                   std::uint32_t b);

struct InstanceCost {
    std::uint64_t magic_cycles = 0;
    std::uint64_t write_cycles = 0;
    std::uint64_t read_cycles = 0;
    std::uint64_t magic_switches = 0;
    std::uint64_t write_switches = 0;

    std::uint64_t total_cycles() const { return magic_cycles + write_cycles + read_cycles; }
    std::uint64_t total_switches() const { return magic_switches + write_switches; }

    friend bool operator==(const InstanceCost&, const InstanceCost&) = default;
};

/// (2*eth+1) * rl * linear_cell_cycles(b).
std::uint64_t linear_core_cycles(std::uint32_t rl, std::uint32_t eth, std::uint32_t b);

/// Calibrated terms of the linear instance beyond the band cells.
struct LinearOverhead {
    std::uint64_t init_cycles = 0;         // first row and band edge: rl + 2*eth + 1
    std::uint64_t min_extract_cycles = 0;  // serial minimum over the buffer rows
    std::uint64_t copy_in_writes = 0;      // read broadcast into the buffer rows
    std::uint64_t init_writes = 0;         // output-column presets, two per cell
};

LinearOverhead linear_overhead(std::uint32_t rl, std::uint32_t eth);
InstanceCost linear_instance_cost(std::uint32_t rl = 150, std::uint32_t eth = 6, std::uint32_t b = 3);

/// Itemized affine composition. Totals are derived from these lists; nothing
/// in it is fitted to a target figure.
struct AffineCostBreakdown {
    std::vector<CostStep> cell;            // per band cell
    std::vector<CostStep> traceback_step;  // per traceback step
    std::uint64_t cells = 0;
    std::uint64_t traceback_steps = 0;
    std::uint64_t init_cycles = 0;         // row 0 of the three buffers
    std::uint64_t writes_per_cell = 0;
    std::uint64_t copy_in_writes = 0;
    std::uint64_t copy_in_bits = 0;
};

AffineCostBreakdown affine_cost_breakdown(std::uint32_t rl, std::uint32_t eth, std::uint32_t b);
InstanceCost affine_instance_cost(std::uint32_t rl = 150, std::uint32_t eth = 6, std::uint32_t b = 5);

struct EnergyTimeConstants {
    double t_clk = 2e-9;        // seconds per MAGIC or write cycle
    double e_magic = 90e-15;    // joules per MAGIC bit switch
    double e_write = 90e-15;    // joules per written bit switch

    /// Throws ConfigError unless every constant is positive.
    void validate() const;
};

double energy_of(const InstanceCost& cost, const EnergyTimeConstants& c = {});
double time_of(const InstanceCost& cost, const EnergyTimeConstants& c = {});

}  // namespace dartpim

#endif  // DARTPIM_MAGIC_COST_HPP
