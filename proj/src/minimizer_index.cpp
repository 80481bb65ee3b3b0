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

#include "dartpim/minimizer_index.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstring>
#include <deque>
#include <map>

#include "dartpim/error.hpp"

namespace dartpim {

void IndexParams::validate() const {
    if (k < 1 || k > 32) throw ConfigError("k must lie in [1, 32]");
    if (W < 1) throw ConfigError("W must be at least 1");
    if (rl < k) throw ConfigError("read length must be at least k");
    if (eth < 1) throw ConfigError("eth must be at least 1");
}

std::uint64_t minimizer_hash(std::uint64_t key, std::uint32_t k) noexcept {
    // Thomas Wang's integer mix, restricted to 2k bits so it stays a bijection.
    const std::uint64_t mask = k >= 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * k)) - 1;
    key = (~key + (key << 21)) & mask;
    key = key ^ (key >> 24);
    key = ((key + (key << 3)) + (key << 8)) & mask;
    key = key ^ (key >> 14);
    key = ((key + (key << 2)) + (key << 4)) & mask;
    key = key ^ (key >> 28);
    key = (key + (key << 31)) & mask;
    return key;
}

namespace {

struct KmerTable {
    std::vector<std::uint64_t> value;
    std::vector<std::uint64_t> hash;
    std::vector<bool> valid;
};

KmerTable kmers_of(const DnaSequence& seq, std::uint32_t k, const std::vector<bool>* masked) {
    KmerTable t;
    if (seq.size() < k) return t;
    const std::size_t nk = seq.size() - k + 1;
    t.value.resize(nk);
    t.hash.resize(nk);
    t.valid.assign(nk, true);
    const std::uint64_t mask = k >= 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * k)) - 1;
    std::uint64_t v = 0;
    std::size_t since_masked = 0;  // unmasked bases ending at i
    for (std::size_t i = 0; i < seq.size(); ++i) {
        v = ((v << 2) | seq[i]) & mask;
        const bool m = masked != nullptr && i < masked->size() && (*masked)[i];
        since_masked = m ? 0 : since_masked + 1;
        if (i + 1 >= k) {
            const std::size_t at = i + 1 - k;
            t.value[at] = v;
            t.hash[at] = minimizer_hash(v, k);
            t.valid[at] = since_masked >= k;
        }
    }
    return t;
}

}  // namespace

std::vector<MinimizerHit> window_minimizers(const DnaSequence& seq, const IndexParams& params,
                                            const std::vector<bool>* masked) {
    std::vector<MinimizerHit> hits;
    if (seq.size() < params.window_span()) return hits;
    const KmerTable t = kmers_of(seq, params.k, masked);
    const std::size_t nk = t.value.size();
    const std::size_t W = params.W;

    std::deque<std::size_t> queue;  // candidate k-mers, strictly increasing (hash, position)
    bool have_last = false;
    std::uint64_t last = 0;
    for (std::size_t i = 0; i < nk; ++i) {
        if (t.valid[i]) {
            while (!queue.empty() && t.hash[queue.back()] > t.hash[i]) queue.pop_back();
            queue.push_back(i);
        }
        if (i + 1 < W) continue;
        const std::size_t window = i + 1 - W;
        while (!queue.empty() && queue.front() < window) queue.pop_front();
        if (queue.empty()) {
            have_last = false;
            continue;
        }
        const std::size_t best = queue.front();
        if (!have_last || t.value[best] != last) {
            hits.push_back({t.value[best], best});
            last = t.value[best];
            have_last = true;
        }
    }
    return hits;
}

std::vector<MinimizerHit> read_minimizers(const DnaSequence& read, const IndexParams& params) {
    std::vector<MinimizerHit> hits;
    if (read.size() >= params.window_span()) {
        hits = window_minimizers(read, params);
    } else if (read.size() >= params.k) {
        IndexParams single = params;
        single.W = static_cast<std::uint32_t>(read.size() - params.k + 1);
        hits = window_minimizers(read, single);
    }
    std::vector<MinimizerHit> distinct;
    for (const auto& h : hits) {
        const bool seen = std::any_of(distinct.begin(), distinct.end(),
                                      [&](const MinimizerHit& d) { return d.minimizer == h.minimizer; });
        if (!seen) distinct.push_back(h);
    }
    return distinct;
}

MinimizerIndex::MinimizerIndex(IndexParams params, std::vector<MinimizerEntry> entries)
    : params_(params), entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const MinimizerEntry& a, const MinimizerEntry& b) { return a.minimizer < b.minimizer; });
    lookup_.reserve(entries_.size());
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        lookup_.emplace(entries_[i].minimizer, i);
        total_hits_ += entries_[i].segments.size();
    }
}

const MinimizerEntry* MinimizerIndex::find(std::uint64_t minimizer) const {
    const auto it = lookup_.find(minimizer);
    return it == lookup_.end() ? nullptr : &entries_[it->second];
}

std::size_t MinimizerIndex::frequency(std::uint64_t minimizer) const {
    const auto* e = find(minimizer);
    return e == nullptr ? 0 : e->frequency();
}

std::uint64_t segment_start_for(std::uint64_t ref_pos, std::uint64_t ref_length, const IndexParams& params) {
    const auto len = static_cast<std::int64_t>(params.segment_length());
    const std::int64_t start = static_cast<std::int64_t>(ref_pos) -
                               (static_cast<std::int64_t>(params.rl) - params.k) - params.eth;
    const std::int64_t hi = static_cast<std::int64_t>(ref_length) - len;
    return static_cast<std::uint64_t>(std::clamp<std::int64_t>(start, 0, std::max<std::int64_t>(hi, 0)));
}

MinimizerIndex build_index(const DnaSequence& ref, const IndexParams& params, const std::vector<bool>* masked) {
    params.validate();
    const std::size_t seg_len = params.segment_length();
    if (ref.size() < params.window_span() || ref.size() < seg_len) {
        throw DataError("reference of " + std::to_string(ref.size()) +
                        " bases is shorter than one window or one segment (" + std::to_string(seg_len) + ")");
    }
    std::map<std::uint64_t, std::vector<ReferenceSegment>> grouped;
    for (const auto& hit : window_minimizers(ref, params, masked)) {
        ReferenceSegment seg;
        seg.minimizer = hit.minimizer;
        seg.ref_pos = hit.position;
        seg.segment_start = segment_start_for(hit.position, ref.size(), params);
        seg.segment = ref.subseq(seg.segment_start, seg_len);
        grouped[hit.minimizer].push_back(std::move(seg));
    }
    std::vector<MinimizerEntry> entries;
    entries.reserve(grouped.size());
    for (auto& [value, segs] : grouped) {
        std::stable_sort(segs.begin(), segs.end(),
                         [](const ReferenceSegment& a, const ReferenceSegment& b) { return a.ref_pos < b.ref_pos; });
        entries.push_back({value, std::move(segs)});
    }
    return MinimizerIndex(params, std::move(entries));
}

bool CrossbarLayout::is_riscv(std::uint64_t minimizer) const {
    return std::binary_search(riscv_minimizers.begin(), riscv_minimizers.end(), minimizer);
}

std::span<const ReferenceSegment> CrossbarLayout::segments_of(const MinimizerIndex& index,
                                                              std::uint32_t crossbar) const {
    const auto& a = crossbars.at(crossbar);
    const auto& segs = index.entries().at(a.entry).segments;
    return std::span<const ReferenceSegment>(segs).subspan(a.first, a.count);
}

CrossbarLayout assign_crossbars(const MinimizerIndex& index, std::uint32_t low_th, std::size_t linear_rows) {
    if (linear_rows == 0) throw ConfigError("linear rows per crossbar must be positive");
    CrossbarLayout layout;
    layout.low_th = low_th;
    layout.rows_per_crossbar = linear_rows;
    const auto& entries = index.entries();
    for (std::size_t e = 0; e < entries.size(); ++e) {
        const auto& entry = entries[e];
        if (entry.frequency() <= low_th) {
            layout.riscv_minimizers.push_back(entry.minimizer);
            continue;
        }
        const auto first_id = static_cast<std::uint32_t>(layout.crossbars.size());
        for (std::size_t first = 0; first < entry.frequency(); first += linear_rows) {
            CrossbarAssignment a;
            a.id = static_cast<std::uint32_t>(layout.crossbars.size());
            a.minimizer = entry.minimizer;
            a.entry = e;
            a.first = first;
            a.count = std::min(linear_rows, entry.frequency() - first);
            layout.crossbars.push_back(a);
        }
        layout.by_minimizer.emplace(
            entry.minimizer,
            std::pair{first_id, static_cast<std::uint32_t>(layout.crossbars.size() - first_id)});
    }
    return layout;
}

Digest sha256(std::string_view bytes) {
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    return out;
}

Digest reference_digest(const Reference& ref) {
    Digest out{};
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("EVP_MD_CTX_new failed");
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    const std::string bases = ref.seq.to_string();
    EVP_DigestUpdate(ctx, bases.data(), bases.size());
    for (std::size_t i = 0; i < ref.ambiguous.size(); ++i) {
        if (!ref.ambiguous[i]) continue;
        std::uint64_t pos = i;
        EVP_DigestUpdate(ctx, &pos, sizeof pos);
    }
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, out.data(), &len);
    EVP_MD_CTX_free(ctx);
    return out;
}

std::string digest_hex(const Digest& d) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string s;
    for (auto byte : d) {
        s += kHex[byte >> 4];
        s += kHex[byte & 15];
    }
    return s;
}

namespace {

constexpr char kMagic[4] = {'D', 'P', 'I', '1'};

class ByteWriter {
public:
    template <typename T>
    void put(T v) {
        for (std::size_t i = 0; i < sizeof(T); ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void put_bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        bytes_.insert(bytes_.end(), b, b + n);
    }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T{bytes_[pos_ + i]} << (8 * i));
        pos_ += sizeof(T);
        return v;
    }
    void get_bytes(void* p, std::size_t n) {
        need(n);
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw DataError("index file truncated");
    }
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

IndexFileHeader read_header(ByteReader& in) {
    char magic[4];
    in.get_bytes(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) throw DataError("not a DPI1 index file");
    IndexFileHeader h;
    h.params.k = in.get<std::uint32_t>();
    h.params.W = in.get<std::uint32_t>();
    h.params.rl = in.get<std::uint32_t>();
    h.params.eth = in.get<std::uint32_t>();
    h.low_th = in.get<std::uint32_t>();
    h.seed = in.get<std::uint64_t>();
    h.ref_length = in.get<std::uint64_t>();
    in.get_bytes(h.digest.data(), h.digest.size());
    const auto path_len = in.get<std::uint32_t>();
    h.ref_path.resize(path_len);
    in.get_bytes(h.ref_path.data(), path_len);
    return h;
}

}  // namespace

std::vector<std::uint8_t> serialize_index(const MinimizerIndex& index, const IndexFileHeader& header) {
    ByteWriter out;
    out.put_bytes(kMagic, 4);
    out.put<std::uint32_t>(header.params.k);
    out.put<std::uint32_t>(header.params.W);
    out.put<std::uint32_t>(header.params.rl);
    out.put<std::uint32_t>(header.params.eth);
    out.put<std::uint32_t>(header.low_th);
    out.put<std::uint64_t>(header.seed);
    out.put<std::uint64_t>(header.ref_length);
    out.put_bytes(header.digest.data(), header.digest.size());
    out.put<std::uint32_t>(static_cast<std::uint32_t>(header.ref_path.size()));
    out.put_bytes(header.ref_path.data(), header.ref_path.size());
    out.put<std::uint64_t>(index.entries().size());
    for (const auto& e : index.entries()) {
        out.put<std::uint64_t>(e.minimizer);
        out.put<std::uint32_t>(static_cast<std::uint32_t>(e.segments.size()));
        for (const auto& s : e.segments) {
            out.put<std::uint64_t>(s.ref_pos);
            out.put<std::uint64_t>(s.segment_start);
        }
    }
    return out.take();
}

IndexFileHeader read_index_header(std::span<const std::uint8_t> bytes) {
    ByteReader in(bytes);
    return read_header(in);
}

LoadedIndex deserialize_index(std::span<const std::uint8_t> bytes, const Reference& ref) {
    ByteReader in(bytes);
    LoadedIndex loaded;
    loaded.header = read_header(in);
    const auto& params = loaded.header.params;
    try {
        params.validate();
    } catch (const ConfigError& e) {
        throw DataError(std::string("index header: ") + e.what());
    }
    if (loaded.header.ref_length != ref.seq.size() || loaded.header.digest != reference_digest(ref)) {
        throw DataError("reference digest mismatch: index was built from a different reference");
    }
    const std::size_t seg_len = params.segment_length();
    const auto n = in.get<std::uint64_t>();
    std::vector<MinimizerEntry> entries;
    std::uint64_t prev = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        MinimizerEntry e;
        e.minimizer = in.get<std::uint64_t>();
        if (i > 0 && e.minimizer <= prev) throw DataError("index entries are not sorted");
        prev = e.minimizer;
        const auto count = in.get<std::uint32_t>();
        e.segments.reserve(count);
        for (std::uint32_t c = 0; c < count; ++c) {
            ReferenceSegment s;
            s.minimizer = e.minimizer;
            s.ref_pos = in.get<std::uint64_t>();
            s.segment_start = in.get<std::uint64_t>();
            if (s.segment_start + seg_len > ref.seq.size() || s.ref_pos < s.segment_start ||
                s.ref_pos + params.k > s.segment_start + seg_len) {
                throw DataError("index segment outside the reference");
            }
            s.segment = ref.seq.subseq(s.segment_start, seg_len);
            e.segments.push_back(std::move(s));
        }
        entries.push_back(std::move(e));
    }
    if (!in.done()) throw DataError("trailing bytes after index entries");
    loaded.index = MinimizerIndex(params, std::move(entries));
    return loaded;
}

}  // namespace dartpim
