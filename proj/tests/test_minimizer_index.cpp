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

#include <stdexcept>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "dartpim/error.hpp"
#include "dartpim/minimizer_index.hpp"

using namespace dartpim;

namespace {

DnaSequence repeat_base(char c, std::size_t n) { return DnaSequence::from_string(std::string(n, c)); }

Reference make_reference(const DnaSequence& seq) {
    Reference r;
    r.names = {"r"};
    r.offsets = {0};
    r.seq = seq;
    return r;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(IndexParams{}.validate());
    CHECK_THROWS_AS((IndexParams{0, 30, 150, 6}.validate()), ConfigError);
    CHECK_THROWS_AS((IndexParams{33, 30, 150, 6}.validate()), ConfigError);
    CHECK_THROWS_AS((IndexParams{12, 0, 150, 6}.validate()), ConfigError);
    CHECK_THROWS_AS((IndexParams{12, 30, 150, 0}.validate()), ConfigError);
    CHECK(IndexParams{}.segment_length() == 300);
}

TEST_CASE("single window yields its minimum") {
    std::mt19937_64 rng(4);
    const IndexParams p;
    const DnaSequence s = oracle::random_seq(rng, p.window_span());
    const auto hits = window_minimizers(s, p);
    REQUIRE(hits.size() == 1);
    CHECK(hits == oracle::minimizers(s, p));
}

TEST_CASE("uniform sequences collapse to one hit at position 0") {
    const IndexParams p;
    for (std::size_t n : {52u, 300u}) {
        const auto hits = window_minimizers(repeat_base('A', n), p);
        REQUIRE(hits.size() == 1);
        CHECK(hits[0].position == 0);
        CHECK(hits[0].minimizer == 0);
    }
    CHECK(read_minimizers(repeat_base('A', 150), p).size() == 1);
}

TEST_CASE("window minimizers match the brute-force scan") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        IndexParams p;
        p.k = 1 + static_cast<std::uint32_t>(rng() % 16);
        p.W = 1 + static_cast<std::uint32_t>(rng() % 12);
        const std::size_t n = rng() % 200;
        // Low-entropy sequences exercise ties.
        DnaSequence s;
        for (std::size_t i = 0; i < n; ++i) s.push_back(static_cast<Base>((t % 3 == 0) ? (rng() % 2) : (rng() & 3u)));
        CHECK(window_minimizers(s, p) == oracle::minimizers(s, p));
    }
}

TEST_CASE("masked bases never win a window") {
    std::mt19937_64 rng(6);
    const IndexParams p{8, 10, 150, 6};
    for (int t = 0; t < 50; ++t) {
        const DnaSequence s = oracle::random_seq(rng, 300);
        std::vector<bool> mask(300, false);
        for (int m = 0; m < 10; ++m) mask[rng() % 300] = true;
        const auto hits = window_minimizers(s, p, &mask);
        CHECK(hits == oracle::minimizers(s, p, &mask));
        for (const auto& h : hits) {
            for (std::size_t i = 0; i < p.k; ++i) CHECK_FALSE(mask[h.position + i]);
        }
    }
}

TEST_CASE("read minimizers are distinct and match brute force") {
    std::mt19937_64 rng(7);
    const IndexParams p;
    for (int t = 0; t < 1000; ++t) {
        const DnaSequence r = oracle::random_seq(rng, 150);
        const auto got = read_minimizers(r, p);
        std::vector<MinimizerHit> want;
        std::set<std::uint64_t> seen;
        for (const auto& h : oracle::minimizers(r, p)) {
            if (seen.insert(h.minimizer).second) want.push_back(h);
        }
        REQUIRE(got == want);
    }
    // Shorter than one window: treated as a single window.
    const DnaSequence shortr = oracle::random_seq(rng, 20);
    CHECK(read_minimizers(shortr, p).size() == 1);
    CHECK(read_minimizers(oracle::random_seq(rng, 5), p).empty());
}

TEST_CASE("read minimizers of an exact substring appear in the reference") {
    std::mt19937_64 rng(8);
    const IndexParams p;
    const DnaSequence ref = oracle::random_seq(rng, 20000);
    const MinimizerIndex index = build_index(ref, p);
    for (int t = 0; t < 100; ++t) {
        const std::size_t pos = rng() % (ref.size() - 150);
        for (const auto& h : read_minimizers(ref.subseq(pos, 150), p)) {
            const MinimizerEntry* e = index.find(h.minimizer);
            REQUIRE(e != nullptr);
            bool found = false;
            for (const auto& s : e->segments) found |= s.ref_pos == pos + h.position;
            CHECK(found);
        }
    }
}

TEST_CASE("index of A^300 holds one segment") {
    const MinimizerIndex index = build_index(repeat_base('A', 300), IndexParams{});
    REQUIRE(index.entries().size() == 1);
    CHECK(index.entries()[0].frequency() == 1);
    CHECK(index.entries()[0].segments[0].ref_pos == 0);
    CHECK(index.total_segment_bases() == 300);
}

TEST_CASE("stored segments are verbatim reference substrings") {
    std::mt19937_64 rng(9);
    const IndexParams p;
    const DnaSequence ref = oracle::random_seq(rng, 10000);
    const MinimizerIndex index = build_index(ref, p);
    std::size_t hits = 0;
    for (const auto& e : index.entries()) {
        for (const auto& s : e.segments) {
            ++hits;
            CHECK(s.segment.size() == p.segment_length());
            CHECK(s.segment == ref.subseq(s.segment_start, p.segment_length()));
            CHECK(s.segment_start == segment_start_for(s.ref_pos, ref.size(), p));
            CHECK(s.ref_pos >= s.segment_start);
            CHECK(s.ref_pos + p.k <= s.segment_start + p.segment_length());
        }
    }
    CHECK(hits == index.total_hits());
    CHECK(index.total_segment_bases() == hits * 300);
}

TEST_CASE("segment start clamps at the reference edges") {
    const IndexParams p;
    CHECK(segment_start_for(0, 1000, p) == 0);
    CHECK(segment_start_for(500, 1000, p) == 500 - 138 - 6);
    CHECK(segment_start_for(990, 1000, p) == 700);
}

TEST_CASE("too-short references are rejected") {
    CHECK_THROWS_AS(build_index(repeat_base('C', 200), IndexParams{}), DataError);
}

TEST_CASE("crossbar assignment splits and routes by frequency") {
    const IndexParams p{12, 30, 150, 6};
    auto entry_with = [&](std::uint64_t m, std::size_t freq) {
        MinimizerEntry e;
        e.minimizer = m;
        for (std::size_t i = 0; i < freq; ++i) {
            ReferenceSegment s;
            s.minimizer = m;
            s.ref_pos = 1000 + i;
            s.segment_start = 1000 + i - 144;
            e.segments.push_back(s);
        }
        return e;
    };
    {
        const MinimizerIndex index(p, {entry_with(5, 3)});
        const auto layout = assign_crossbars(index, 3);
        CHECK(layout.crossbars.empty());
        CHECK(layout.riscv_minimizers == std::vector<std::uint64_t>{5});
        CHECK(layout.is_riscv(5));
    }
    {
        const MinimizerIndex index(p, {entry_with(5, 33)});
        const auto layout = assign_crossbars(index, 3);
        REQUIRE(layout.crossbars.size() == 2);
        CHECK(layout.crossbars[0].count == 32);
        CHECK(layout.crossbars[1].count == 1);
        CHECK(layout.segments_of(index, 1)[0].ref_pos == 1032);
        CHECK(layout.by_minimizer.at(5) == std::pair<std::uint32_t, std::uint32_t>{0, 2});
    }
}

TEST_CASE("layout reconciles every segment exactly once") {
    const DnaSequence ref = generate_reference({40000, 6, 40, 300, 0.01, 3});
    const MinimizerIndex index = build_index(ref, IndexParams{});
    for (std::uint32_t low_th : {0u, 1u, 3u, 10u}) {
        const auto layout = assign_crossbars(index, low_th);
        std::size_t xbar_segments = 0;
        for (const auto& a : layout.crossbars) {
            CHECK(a.count >= 1);
            CHECK(a.count <= 32);
            CHECK(index.entries()[a.entry].frequency() > low_th);
            xbar_segments += a.count;
        }
        std::size_t riscv_segments = 0;
        for (auto m : layout.riscv_minimizers) {
            CHECK(index.frequency(m) <= low_th);
            riscv_segments += index.frequency(m);
        }
        CHECK(xbar_segments + riscv_segments == index.total_hits());
    }
}

TEST_CASE("serialization round-trips and detects a foreign reference") {
    std::mt19937_64 rng(10);
    const Reference ref = make_reference(oracle::random_seq(rng, 5000));
    const MinimizerIndex index = build_index(ref.seq, IndexParams{});
    IndexFileHeader h;
    h.params = index.params();
    h.low_th = 2;
    h.seed = 17;
    h.ref_length = ref.seq.size();
    h.digest = reference_digest(ref);
    h.ref_path = "ref.fa";
    const auto bytes = serialize_index(index, h);
    REQUIRE(bytes.size() > 4);
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "DPI1");
    CHECK(serialize_index(index, h) == bytes);

    const LoadedIndex back = deserialize_index(bytes, ref);
    CHECK(back.header.low_th == 2);
    CHECK(back.header.seed == 17);
    CHECK(back.header.ref_path == "ref.fa");
    REQUIRE(back.index.entries().size() == index.entries().size());
    for (std::size_t i = 0; i < index.entries().size(); ++i) {
        CHECK(back.index.entries()[i].minimizer == index.entries()[i].minimizer);
        REQUIRE(back.index.entries()[i].segments.size() == index.entries()[i].segments.size());
        CHECK(back.index.entries()[i].segments[0].segment == index.entries()[i].segments[0].segment);
    }

    const Reference other = make_reference(oracle::random_seq(rng, 5000));
    CHECK_THROWS_AS(deserialize_index(bytes, other), DataError);
    auto truncated = bytes;
    truncated.resize(bytes.size() - 3);
    CHECK_THROWS_AS(deserialize_index(truncated, ref), DataError);
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS(read_index_header(bad_magic), DataError);
}
