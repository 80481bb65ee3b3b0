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

#ifndef DARTPIM_WF_HPP
#define DARTPIM_WF_HPP

// Banded Wagner-Fischer kernels as executed in one crossbar row.
//
// Geometry: the read (length N) indexes rows, the reference window (length
// N + 2*eth) indexes columns. Band cell j in [0, 2*eth] at read position i
// compares read[i] with refwin[i + j]; cell j = eth is the main diagonal.
// Row 0 of the band starts at zero (the alignment may begin at any of the
// first 2*eth+1 window columns) and the result is read from the centre cell
// after the last read position, i.e. the read ends at refwin[N + eth - 1].
// Cells outside the band behave as saturated.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dartpim/dna.hpp"

namespace dartpim {

struct WfWeights {
    std::uint32_t del = 1;  // vertical step, a read base with no reference base
    std::uint32_t ins = 1;  // horizontal step, a reference base with no read base
    std::uint32_t sub = 1;
    std::uint32_t op = 1;   // affine gap open (charged together with one extend)
    std::uint32_t ex = 1;   // affine gap extend

    /// Weights reproducing a gap cost of open + extend*(L-1) under the
    /// open-plus-extend recurrences. Requires open >= extend.
    static WfWeights from_prose_gap_penalty(std::uint32_t open, std::uint32_t extend);

    friend bool operator==(const WfWeights&, const WfWeights&) = default;
};

struct WfParams {
    std::uint32_t eth = 6;   // band half-width
    std::uint32_t sat = 7;   // saturation value
    std::uint32_t bits = 3;  // cell width
    WfWeights weights;

    std::size_t band() const { return 2 * std::size_t{eth} + 1; }

    static WfParams linear(std::uint32_t eth = 6) { return {eth, eth + 1, 3, {}}; }
    static WfParams affine(std::uint32_t eth = 6) { return {eth, 31, 5, {}}; }

    /// Throws ConfigError unless sat < 2^bits.
    void validate() const;
};

/// The 2*eth+1 saturating distance cells of one linear WF row.
class BandState {
public:
    explicit BandState(const WfParams& params);

    void reset();
    /// Processes read position `i` against `refwin`.
    void advance(Base read_base, const DnaSequence& refwin, std::size_t i);
    std::uint32_t center() const { return cells_[params_.eth]; }
    const std::vector<std::uint8_t>& cells() const { return cells_; }

private:
    WfParams params_;
    std::vector<std::uint8_t> cells_;
};

enum class EditOp : std::uint8_t { Match, Substitute, Insert, Delete };

/// Edit script aligning a read to refwin[start_offset, ...). Insert consumes
/// a read base only, Delete a reference base only.
struct Traceback {
    std::vector<EditOp> ops;
    std::size_t start_offset = 0;

    std::size_t read_length() const;
    std::size_t ref_span() const;
    /// Run-length form over {M, X, I, D}, e.g. "72M1X77M".
    std::string to_rle() const;
    static Traceback from_rle(std::string_view rle);

    friend bool operator==(const Traceback&, const Traceback&) = default;
};

/// Three band buffers (D, M1, M2) plus a 4-bit direction record per
/// processed cell: bits 0-1 the origin of D, bit 2 of M1, bit 3 of M2.
class AffineBandState {
public:
    enum DOrigin : std::uint8_t { kMatch = 0, kSub = 1, kFromM1 = 2, kFromM2 = 3 };

    AffineBandState(const WfParams& params, std::size_t read_length);

    void advance(Base read_base, const DnaSequence& refwin, std::size_t i);
    std::uint32_t center() const { return d_[params_.eth]; }
    /// Walks the stored direction bits back from the centre cell.
    Traceback traceback() const;

    std::size_t direction_bits() const { return directions_.size() * 8; }
    std::uint8_t direction(std::size_t i, std::size_t j) const;

private:
    WfParams params_;
    std::size_t rows_;
    std::vector<std::uint8_t> d_, m1_, m2_;
    std::vector<std::uint8_t> directions_;  // two cells per byte

    void set_direction(std::size_t i, std::size_t j, std::uint8_t nibble);
};

struct AffineResult {
    std::uint32_t distance = 0;
    Traceback trace;  // empty when the distance saturated
    bool saturated = false;
};

/// Throws std::invalid_argument if refwin.size() < read.size() + 2*eth.
std::uint32_t linear_wf_banded(const DnaSequence& read, const DnaSequence& refwin, const WfParams& params);
AffineResult affine_wf_banded(const DnaSequence& read, const DnaSequence& refwin, const WfParams& params);

/// Textbook global edit distance, full matrix, no band, no saturation.
std::uint64_t linear_wf_full_oracle(const DnaSequence& s1, const DnaSequence& s2, const WfWeights& w = {});

/// Substitutions cost sub; a gap run of length L costs op + ex*L.
std::uint64_t trace_cost(const Traceback& trace, const WfWeights& w = {});

/// Rebuilds the read by applying `trace` to `refwin`; Insert bases come from `read`.
/// Throws std::invalid_argument when the trace does not fit the inputs.
DnaSequence apply_trace(const Traceback& trace, const DnaSequence& refwin, const DnaSequence& read);

struct UnbandedAlignment {
    std::uint64_t distance = 0;
    std::size_t ref_start = 0;
    std::size_t ref_end = 0;  // exclusive
    Traceback trace;
};

/// Affine alignment of the whole read against any substring of `ref`, full
/// matrix. Ties prefer the leftmost end, then the traceback priorities.
UnbandedAlignment affine_wf_unbanded(const DnaSequence& read, const DnaSequence& ref, const WfWeights& w = {});

}  // namespace dartpim

#endif  // DARTPIM_WF_HPP
