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

#include "dartpim/genomio.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace dartpim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splits on '\n' and strips a trailing '\r'. Line numbers are 1-based.
class LineCursor {
public:
    explicit LineCursor(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        std::size_t end = text_.find('\n', pos_);
        if (end == std::string_view::npos) end = text_.size();
        line = text_.substr(pos_, end - pos_);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        pos_ = end + 1;
        ++line_no_;
        return true;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

std::string_view first_token(std::string_view s) {
    const auto end = s.find_first_of(" \t");
    return end == std::string_view::npos ? s : s.substr(0, end);
}

// Portable uniform draws; std distributions differ between standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }
Base random_base(std::mt19937_64& rng) { return static_cast<Base>(rng() & 3u); }

}  // namespace

Base placeholder_base(std::uint64_t position, std::uint64_t seed) noexcept {
    return static_cast<Base>(splitmix64(position ^ splitmix64(seed)) & 3u);
}

std::vector<FastaRecord> parse_fasta(std::string_view text, std::uint64_t seed) {
    std::vector<FastaRecord> records;
    std::size_t header_line = 0;
    std::uint64_t global_pos = 0;
    LineCursor cursor(text);
    std::string_view line;

    auto close_record = [&] {
        if (!records.empty() && records.back().seq.empty()) {
            throw ParseError("line " + std::to_string(header_line) + ": empty FASTA record '" +
                             records.back().name + "'");
        }
    };

    while (cursor.next(line)) {
        if (line.empty()) continue;
        if (line.front() == '>') {
            close_record();
            header_line = cursor.line_no();
            const auto name = first_token(line.substr(1));
            if (name.empty()) {
                throw ParseError("line " + std::to_string(header_line) + ": FASTA header without a name");
            }
            records.push_back(FastaRecord{std::string(name), {}, {}});
            continue;
        }
        if (records.empty()) {
            throw ParseError("line " + std::to_string(cursor.line_no()) +
                             ": sequence data before the first FASTA header");
        }
        auto& rec = records.back();
        for (char c : line) {
            if (c == ' ' || c == '\t') continue;
            const int code = base_code(c);
            if (code >= 0) {
                rec.seq.push_back(static_cast<Base>(code));
            } else {
                rec.ambiguous.push_back(rec.seq.size());
                rec.seq.push_back(placeholder_base(global_pos, seed));
            }
            ++global_pos;
        }
    }
    close_record();
    return records;
}

Reference concat_records(std::vector<FastaRecord> records) {
    Reference ref;
    bool any_ambiguous = false;
    std::size_t total = 0;
    for (const auto& r : records) {
        total += r.seq.size();
        any_ambiguous = any_ambiguous || !r.ambiguous.empty();
    }
    ref.seq.reserve(total);
    if (any_ambiguous) ref.ambiguous.assign(total, false);
    for (auto& r : records) {
        const std::size_t offset = ref.seq.size();
        ref.names.push_back(std::move(r.name));
        ref.offsets.push_back(offset);
        for (std::size_t i = 0; i < r.seq.size(); ++i) ref.seq.push_back(r.seq[i]);
        for (std::size_t p : r.ambiguous) ref.ambiguous[offset + p] = true;
    }
    return ref;
}

std::vector<Read> parse_fastq(std::string_view text, std::uint64_t seed) {
    std::vector<Read> reads;
    LineCursor cursor(text);
    std::string_view line;
    std::size_t record = 0;

    auto fail = [&](const std::string& what) -> void {
        throw ParseError("FASTQ record " + std::to_string(record) + " (line " +
                         std::to_string(cursor.line_no()) + "): " + what);
    };

    while (cursor.next(line)) {
        if (line.empty()) continue;
        if (line.front() != '@') fail("header must start with '@'");
        Read read;
        read.id = std::string(first_token(line.substr(1)));
        if (read.id.empty()) fail("header without a read id");

        std::string_view seq_line, plus_line, qual_line;
        if (!cursor.next(seq_line)) fail("truncated record (missing sequence)");
        if (!cursor.next(plus_line)) fail("truncated record (missing '+' line)");
        if (plus_line.empty() || plus_line.front() != '+') fail("expected '+' separator line");
        if (!cursor.next(qual_line)) fail("truncated record (missing quality line)");
        if (qual_line.size() != seq_line.size()) {
            fail("quality length " + std::to_string(qual_line.size()) +
                 " does not match sequence length " + std::to_string(seq_line.size()));
        }

        read.seq.reserve(seq_line.size());
        for (std::size_t i = 0; i < seq_line.size(); ++i) {
            const int code = base_code(seq_line[i]);
            read.seq.push_back(code >= 0 ? static_cast<Base>(code)
                                         : placeholder_base((std::uint64_t{record} << 32) | i, seed));
        }
        reads.push_back(std::move(read));
        ++record;
    }
    return reads;
}

void ReadErrorModel::validate() const {
    for (double r : {substitution, insertion, deletion}) {
        if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("error rates must lie in [0,1]");
    }
    if (!(substitution + insertion + deletion < 1.0)) {
        throw std::invalid_argument("error rates must sum to less than 1");
    }
}

std::vector<Read> generate_reads(const DnaSequence& ref, std::size_t n, std::size_t rl,
                                 const ReadErrorModel& model) {
    model.validate();
    if (rl == 0 || ref.size() < rl) {
        throw std::invalid_argument("reference shorter than the read length");
    }
    std::mt19937_64 rng(model.seed);
    const double p_sub = model.substitution;
    const double p_ins = p_sub + model.insertion;
    const double p_del = p_ins + model.deletion;
    const std::size_t width = std::max<std::size_t>(6, std::to_string(n).size());

    std::vector<Read> reads;
    reads.reserve(n);
    std::vector<Base> codes;
    codes.reserve(rl);
    for (std::size_t r = 0; r < n; ++r) {
        TruthOrigin truth;
        for (;;) {
            codes.clear();
            truth.strand = (rng() & 1u) ? Strand::Reverse : Strand::Forward;
            truth.ref_pos = below(rng, ref.size() - rl + 1);
            truth.edits = 0;
            std::size_t pos = truth.ref_pos;
            while (codes.size() < rl) {
                if (pos >= ref.size()) {  // ran off the reference end: pad like an insertion
                    codes.push_back(random_base(rng));
                    ++truth.edits;
                    continue;
                }
                const double u = unit(rng);
                if (u < p_sub) {
                    codes.push_back(static_cast<Base>((ref[pos] + 1 + below(rng, 3)) & 3u));
                    ++pos;
                    ++truth.edits;
                } else if (u < p_ins) {
                    codes.push_back(random_base(rng));
                    ++truth.edits;
                } else if (u < p_del) {
                    ++pos;
                    // A deletion ahead of the first read base only moves the origin.
                    if (codes.empty()) {
                        ++truth.ref_pos;
                    } else {
                        ++truth.edits;
                    }
                } else {
                    codes.push_back(ref[pos]);
                    ++pos;
                }
            }
            if (model.max_edits == 0 || truth.edits <= model.max_edits) break;
        }
        Read read;
        std::string id = std::to_string(r);
        read.id = "read" + std::string(width - id.size(), '0') + id;
        read.seq = DnaSequence::from_codes(codes);
        if (truth.strand == Strand::Reverse) read.seq = reverse_complement(read.seq);
        read.truth = truth;
        reads.push_back(std::move(read));
    }
    return reads;
}

DnaSequence generate_reference(const ReferenceModel& model) {
    std::mt19937_64 rng(model.seed);
    std::vector<Base> codes(model.length);
    for (auto& b : codes) b = random_base(rng);
    if (model.element_length > 0 && model.element_length <= model.length) {
        for (std::size_t f = 0; f < model.families; ++f) {
            std::vector<Base> element(model.element_length);
            for (auto& b : element) b = random_base(rng);
            for (std::size_t c = 0; c < model.copies; ++c) {
                const std::size_t at = below(rng, model.length - model.element_length + 1);
                for (std::size_t i = 0; i < element.size(); ++i) {
                    Base b = element[i];
                    if (unit(rng) < model.divergence) b = static_cast<Base>((b + 1 + below(rng, 3)) & 3u);
                    codes[at + i] = b;
                }
            }
        }
    }
    return DnaSequence::from_codes(codes);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_fasta(std::ostream& out, std::string_view name, const DnaSequence& seq,
                 std::size_t line_width) {
    out << '>' << name << '\n';
    const std::string text = seq.to_string();
    for (std::size_t i = 0; i < text.size(); i += line_width) {
        out << std::string_view(text).substr(i, line_width) << '\n';
    }
}

void write_fastq(std::ostream& out, const std::vector<Read>& reads) {
    for (const auto& r : reads) {
        out << '@' << r.id << '\n'
            << r.seq.to_string() << "\n+\n"
            << std::string(r.seq.size(), 'I') << '\n';
    }
}

void write_truth_tsv(std::ostream& out, const std::vector<Read>& reads) {
    out << "read_id\tref_pos\tstrand\n";
    for (const auto& r : reads) {
        if (!r.truth) continue;
        out << r.id << '\t' << r.truth->ref_pos << '\t' << strand_char(r.truth->strand) << '\n';
    }
}

std::vector<TruthRow> parse_truth_tsv(std::string_view text) {
    std::vector<TruthRow> rows;
    LineCursor cursor(text);
    std::string_view line;
    while (cursor.next(line)) {
        if (line.empty() || line.rfind("read_id\t", 0) == 0) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string_view::npos) {
            throw ParseError("truth line " + std::to_string(cursor.line_no()) + ": expected 3 columns");
        }
        TruthRow row;
        row.id = std::string(line.substr(0, t1));
        const auto pos = line.substr(t1 + 1, t2 - t1 - 1);
        const auto [ptr, ec] = std::from_chars(pos.data(), pos.data() + pos.size(), row.ref_pos);
        const auto strand = line.substr(t2 + 1);
        if (ec != std::errc{} || ptr != pos.data() + pos.size() || (strand != "+" && strand != "-")) {
            throw ParseError("truth line " + std::to_string(cursor.line_no()) + ": malformed row");
        }
        row.strand = strand == "+" ? Strand::Forward : Strand::Reverse;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace dartpim
