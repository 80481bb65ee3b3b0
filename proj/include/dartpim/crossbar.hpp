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

#ifndef DARTPIM_CROSSBAR_HPP
#define DARTPIM_CROSSBAR_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "dartpim/genomio.hpp"
#include "dartpim/magic_cost.hpp"
#include "dartpim/minimizer_index.hpp"
#include "dartpim/wf.hpp"

namespace dartpim {

struct CrossbarConfig {
    std::uint32_t rows = 256;
    std::uint32_t cols = 1024;
    std::uint32_t fifo_rows = 160;
    std::uint32_t reads_per_fifo_row = 3;
    std::uint32_t linear_rows = 32;
    std::uint32_t affine_rows = 64;
    std::uint32_t rows_per_affine = 8;

    std::size_t fifo_capacity() const { return std::size_t{fifo_rows} * reads_per_fifo_row; }
    std::size_t affine_slots() const { return affine_rows / rows_per_affine; }

    /// Throws ConfigError when the partitions do not add up to `rows` or a
    /// FIFO row cannot hold its reads (2 bits per base plus an 8-bit offset).
    void validate(std::uint32_t rl) const;
};

/// A read copy waiting in a Reads FIFO.
struct QueuedRead {
    std::uint32_t read_index = 0;
    Strand strand = Strand::Forward;
    DnaSequence seq;              // already in the seeded orientation
    std::uint32_t offset = 0;     // minimizer offset inside `seq`
};

struct AffineSlot {
    QueuedRead read;
    std::size_t segment = 0;            // index into the resident segments
    std::size_t window_start = 0;       // segment-local start of the N+2*eth window
    std::uint32_t linear_distance = 0;
};

struct CandidateResult {
    std::uint32_t read_index = 0;
    Strand strand = Strand::Forward;
    std::uint64_t ref_pos = 0;
    std::uint32_t distance = 0;
    Traceback trace;
    bool saturated = false;
};

enum class CostKind : std::uint8_t { Linear, Affine };

/// One instance run: `cycles` are shared by all rows, switches scale with `rows`.
struct CostEvent {
    CostKind kind = CostKind::Linear;
    std::uint32_t rows = 0;
};

struct LinearOutcome {
    std::optional<AffineSlot> promoted;
    std::vector<std::uint32_t> distances;  // one per resident segment
    CostEvent event;
};

struct AffineOutcome {
    std::vector<CandidateResult> candidates;
    CostEvent event;
};

/// Index of the smallest value, ties to the lowest index. Throws
/// std::invalid_argument on an empty list.
std::size_t min_extract(std::span<const std::uint32_t> distances);

/// Segment-local start of the band window, clamped to the segment.
std::size_t band_window_start(const ReferenceSegment& seg, std::size_t read_offset, std::size_t read_length,
                              std::uint32_t eth);

/// One crossbar: a Reads FIFO, a linear buffer holding the resident
/// reference segments of one minimizer, and the affine slots.
class Crossbar {
public:
    Crossbar(const CrossbarConfig& cfg, const WfParams& linear, const WfParams& affine,
             std::span<const ReferenceSegment> segments);

    /// Appends unless the FIFO is at capacity.
    bool enqueue(QueuedRead read);

    /// Pops one read, filters it against every resident segment and promotes
    /// the best window when its distance is below the linear saturation.
    /// The caller must run the affine batch first when all slots are taken.
    LinearOutcome run_linear_iteration();

    /// Aligns every occupied slot and clears them.
    AffineOutcome run_affine_iteration();

    std::size_t fifo_size() const { return fifo_.size(); }
    std::size_t slots_used() const { return slots_.size(); }
    bool affine_full() const { return slots_.size() >= cfg_.affine_slots(); }
    std::size_t resident_segments() const { return segments_.size(); }
    std::uint64_t linear_iterations() const { return linear_iterations_; }
    std::uint64_t affine_iterations() const { return affine_iterations_; }

private:
    CrossbarConfig cfg_;
    WfParams linear_;
    WfParams affine_;
    std::span<const ReferenceSegment> segments_;
    std::deque<QueuedRead> fifo_;
    std::vector<AffineSlot> slots_;
    std::uint64_t linear_iterations_ = 0;
    std::uint64_t affine_iterations_ = 0;
};

}  // namespace dartpim

#endif  // DARTPIM_CROSSBAR_HPP
