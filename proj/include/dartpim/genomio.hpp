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

#ifndef DARTPIM_GENOMIO_HPP
#define DARTPIM_GENOMIO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dartpim/dna.hpp"
#include "dartpim/error.hpp"

namespace dartpim {

enum class Strand : std::uint8_t { Forward = 0, Reverse = 1 };

inline char strand_char(Strand s) { return s == Strand::Forward ? '+' : '-'; }

struct FastaRecord {
    std::string name;
    DnaSequence seq;
    /// Positions that held a non-ACGT character (sorted). They carry a
    /// pseudorandom placeholder base and are excluded from minimizer windows.
    std::vector<std::size_t> ambiguous;
};

/// Replacement base for an ambiguity code at `position`, fixed by `seed`.
Base placeholder_base(std::uint64_t position, std::uint64_t seed) noexcept;

std::vector<FastaRecord> parse_fasta(std::string_view text, std::uint64_t seed = 0);

/// All FASTA records concatenated into one coordinate space.
struct Reference {
    std::vector<std::string> names;
    std::vector<std::size_t> offsets;
    DnaSequence seq;
    std::vector<bool> ambiguous;  // empty when the input was pure ACGT
};

Reference concat_records(std::vector<FastaRecord> records);

struct TruthOrigin {
    std::uint64_t ref_pos = 0;  // reference base aligned with the first read base (forward orientation)
    Strand strand = Strand::Forward;
    std::uint32_t edits = 0;    // edit events injected by the generator
};

struct Read {
    std::string id;
    DnaSequence seq;
    std::optional<TruthOrigin> truth;
};

/// Four-line FASTQ. Qualities are length-checked and dropped.
std::vector<Read> parse_fastq(std::string_view text, std::uint64_t seed = 0);

struct ReadErrorModel {
    double substitution = 0.0;
    double insertion = 0.0;
    double deletion = 0.0;
    std::uint64_t seed = 0;
    /// Reads with more injected edits are redrawn; 0 means no cap.
    std::uint32_t max_edits = 0;

    /// Throws std::invalid_argument unless every rate is in [0,1] and the sum is < 1.
    void validate() const;
};

std::vector<Read> generate_reads(const DnaSequence& ref, std::size_t n, std::size_t rl,
                                 const ReadErrorModel& model);

/// Layout of a synthetic reference: uniform random background with
/// `families` repeat elements, each planted `copies` times with per-base
/// divergence `divergence`.
struct ReferenceModel {
    std::size_t length = 50000;
    std::size_t families = 0;
    std::size_t copies = 0;
    std::size_t element_length = 300;
    double divergence = 0.0;
    std::uint64_t seed = 0;
};

DnaSequence generate_reference(const ReferenceModel& model);

std::string read_file(const std::string& path);
void write_fasta(std::ostream& out, std::string_view name, const DnaSequence& seq,
                 std::size_t line_width = 80);
void write_fastq(std::ostream& out, const std::vector<Read>& reads);
/// `read_id<TAB>ref_pos<TAB>strand` with a header row.
void write_truth_tsv(std::ostream& out, const std::vector<Read>& reads);

struct TruthRow {
    std::string id;
    std::uint64_t ref_pos = 0;
    Strand strand = Strand::Forward;
};

std::vector<TruthRow> parse_truth_tsv(std::string_view text);

}  // namespace dartpim

#endif  // DARTPIM_GENOMIO_HPP
