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

#ifndef DARTPIM_MINIMIZER_INDEX_HPP
#define DARTPIM_MINIMIZER_INDEX_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dartpim/dna.hpp"
#include "dartpim/genomio.hpp"

namespace dartpim {

struct IndexParams {
    std::uint32_t k = 12;    // minimizer length in bases
    std::uint32_t W = 30;    // window size in k-mers
    std::uint32_t rl = 150;  // read length
    std::uint32_t eth = 6;   // linear error threshold

    /// Reference bases resident per crossbar row: 2(rl+eth)-k.
    std::size_t segment_length() const { return 2 * (std::size_t{rl} + eth) - k; }
    std::size_t window_span() const { return std::size_t{W} + k - 1; }

    /// Throws ConfigError on out-of-range values (k in [1,32], W >= 1, rl >= k, eth >= 1).
    void validate() const;

    friend bool operator==(const IndexParams&, const IndexParams&) = default;
};

/// Invertible 64-bit mix of a 2k-bit k-mer; minimizer order key.
std::uint64_t minimizer_hash(std::uint64_t kmer, std::uint32_t k) noexcept;

struct MinimizerHit {
    std::uint64_t minimizer = 0;  // 2-bit packed k-mer, first base in the high bits
    std::uint64_t position = 0;   // offset of the k-mer in its sequence

    friend bool operator==(const MinimizerHit&, const MinimizerHit&) = default;
};

/// One hit per window of W k-mers, ordered by (hash, position). Consecutive
/// windows that select the same k-mer value are reported once, at the first
/// position, so the result is ascending in position. K-mers covering a
/// position flagged in `masked` never win a window.
std::vector<MinimizerHit> window_minimizers(const DnaSequence& seq, const IndexParams& params,
                                            const std::vector<bool>* masked = nullptr);

/// Distinct minimizer values of a read with the offset of their first
/// occurrence. Reads shorter than one window are treated as a single window.
std::vector<MinimizerHit> read_minimizers(const DnaSequence& read, const IndexParams& params);

struct ReferenceSegment {
    std::uint64_t minimizer = 0;
    std::uint64_t ref_pos = 0;        // minimizer occurrence in the reference
    std::uint64_t segment_start = 0;  // absolute start of `segment` after edge clamping
    DnaSequence segment;              // exactly IndexParams::segment_length() bases

    /// Offset of the minimizer occurrence inside `segment`.
    std::size_t minimizer_offset() const { return static_cast<std::size_t>(ref_pos - segment_start); }
};

struct MinimizerEntry {
    std::uint64_t minimizer = 0;
    std::vector<ReferenceSegment> segments;  // sorted by ref_pos

    std::size_t frequency() const { return segments.size(); }
};

class MinimizerIndex {
public:
    MinimizerIndex() = default;
    MinimizerIndex(IndexParams params, std::vector<MinimizerEntry> entries);

    const IndexParams& params() const { return params_; }
    /// Entries sorted by minimizer value.
    const std::vector<MinimizerEntry>& entries() const { return entries_; }
    const MinimizerEntry* find(std::uint64_t minimizer) const;
    std::size_t frequency(std::uint64_t minimizer) const;
    std::size_t total_hits() const { return total_hits_; }
    std::size_t total_segment_bases() const { return total_hits_ * params_.segment_length(); }

private:
    IndexParams params_;
    std::vector<MinimizerEntry> entries_;
    std::unordered_map<std::uint64_t, std::size_t> lookup_;
    std::size_t total_hits_ = 0;
};

/// Segment start for a minimizer at `ref_pos`: ref_pos-(rl-k)-eth clamped to
/// [0, ref_length - segment_length].
std::uint64_t segment_start_for(std::uint64_t ref_pos, std::uint64_t ref_length, const IndexParams& params);

/// Requires ref.size() >= max(W+k-1, segment_length()).
MinimizerIndex build_index(const DnaSequence& ref, const IndexParams& params,
                           const std::vector<bool>* masked = nullptr);

inline constexpr std::size_t kDefaultLinearRows = 32;

struct CrossbarAssignment {
    std::uint32_t id = 0;
    std::uint64_t minimizer = 0;
    std::size_t entry = 0;  // index into MinimizerIndex::entries()
    std::size_t first = 0;  // first segment of the slice
    std::size_t count = 0;  // segments in the slice, <= rows per crossbar
};

struct CrossbarLayout {
    std::vector<CrossbarAssignment> crossbars;
    /// Minimizers with frequency <= low_th, handled by the RISC-V pool (sorted).
    std::vector<std::uint64_t> riscv_minimizers;
    /// minimizer -> {first crossbar id, crossbar count}
    std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> by_minimizer;
    std::uint32_t low_th = 0;
    std::size_t rows_per_crossbar = kDefaultLinearRows;

    bool is_riscv(std::uint64_t minimizer) const;
    std::span<const ReferenceSegment> segments_of(const MinimizerIndex& index, std::uint32_t crossbar) const;
};

CrossbarLayout assign_crossbars(const MinimizerIndex& index, std::uint32_t low_th,
                                std::size_t linear_rows = kDefaultLinearRows);

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 over the reference bases and its ambiguity mask.
Digest reference_digest(const Reference& ref);
std::string digest_hex(const Digest& d);
Digest sha256(std::string_view bytes);

struct IndexFileHeader {
    IndexParams params;
    std::uint32_t low_th = 3;
    std::uint64_t seed = 0;
    std::uint64_t ref_length = 0;
    Digest digest{};
    std::string ref_path;
};

/// Binary index: "DPI1", k, W, rl, eth, lowTh, seed, reference length,
/// digest, reference path, then per minimizer (value, count, {ref_pos, segment_start}*).
std::vector<std::uint8_t> serialize_index(const MinimizerIndex& index, const IndexFileHeader& header);

struct LoadedIndex {
    IndexFileHeader header;
    MinimizerIndex index;
};

/// Segments are re-extracted from `ref`; throws DataError on a digest or
/// structure mismatch.
LoadedIndex deserialize_index(std::span<const std::uint8_t> bytes, const Reference& ref);
IndexFileHeader read_index_header(std::span<const std::uint8_t> bytes);

}  // namespace dartpim

#endif  // DARTPIM_MINIMIZER_INDEX_HPP
