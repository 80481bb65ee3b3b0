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

#include "dartpim/crossbar.hpp"

#include <algorithm>
#include <stdexcept>

#include "dartpim/error.hpp"

namespace dartpim {

void CrossbarConfig::validate(std::uint32_t rl) const {
    if (fifo_rows + linear_rows + affine_rows != rows) {
        throw ConfigError("crossbar partitions must add up to the row count");
    }
    if (reads_per_fifo_row == 0 || linear_rows == 0 || rows_per_affine == 0 || affine_rows < rows_per_affine) {
        throw ConfigError("crossbar partitions must be non-empty");
    }
    if (std::uint64_t{reads_per_fifo_row} * (2 * std::uint64_t{rl} + 8) > cols) {
        throw ConfigError("a Reads FIFO row cannot hold " + std::to_string(reads_per_fifo_row) + " reads of length " +
                          std::to_string(rl));
    }
}

std::size_t min_extract(std::span<const std::uint32_t> distances) {
    if (distances.empty()) throw std::invalid_argument("min_extract of an empty list");
    return static_cast<std::size_t>(std::min_element(distances.begin(), distances.end()) - distances.begin());
}

std::size_t band_window_start(const ReferenceSegment& seg, std::size_t read_offset, std::size_t read_length,
                              std::uint32_t eth) {
    const std::size_t window = read_length + 2 * std::size_t{eth};
    const std::size_t seg_len = seg.segment.size();
    if (window > seg_len) throw DataError("read too long for the resident segment");
    const auto local = static_cast<std::int64_t>(seg.minimizer_offset()) - static_cast<std::int64_t>(read_offset) -
                       static_cast<std::int64_t>(eth);
    const auto hi = static_cast<std::int64_t>(seg_len - window);
    return static_cast<std::size_t>(std::clamp<std::int64_t>(local, 0, hi));
}

Crossbar::Crossbar(const CrossbarConfig& cfg, const WfParams& linear, const WfParams& affine,
                   std::span<const ReferenceSegment> segments)
    : cfg_(cfg), linear_(linear), affine_(affine), segments_(segments) {
    if (segments_.empty()) throw std::logic_error("crossbar without resident segments");
    if (segments_.size() > cfg_.linear_rows) throw std::logic_error("more resident segments than linear rows");
    slots_.reserve(cfg_.affine_slots());
}

bool Crossbar::enqueue(QueuedRead read) {
    if (fifo_.size() >= cfg_.fifo_capacity()) return false;
    fifo_.push_back(std::move(read));
    return true;
}

LinearOutcome Crossbar::run_linear_iteration() {
    if (fifo_.empty()) throw std::logic_error("linear iteration on an empty Reads FIFO");
    if (affine_full()) throw std::logic_error("linear iteration with no free affine slot");
    QueuedRead read = std::move(fifo_.front());
    fifo_.pop_front();
    ++linear_iterations_;

    LinearOutcome out;
    out.event = {CostKind::Linear, static_cast<std::uint32_t>(segments_.size())};
    out.distances.reserve(segments_.size());
    std::vector<std::size_t> starts;
    starts.reserve(segments_.size());
    for (const auto& seg : segments_) {
        const std::size_t start = band_window_start(seg, read.offset, read.seq.size(), linear_.eth);
        const DnaSequence window = seg.segment.subseq(start, read.seq.size() + 2 * std::size_t{linear_.eth});
        out.distances.push_back(linear_wf_banded(read.seq, window, linear_));
        starts.push_back(start);
    }
    // Segments are sorted by reference position, so the lowest index is the
    // lowest position among equal distances.
    const std::size_t best = min_extract(out.distances);
    if (out.distances[best] < linear_.sat) {
        AffineSlot slot{std::move(read), best, starts[best], out.distances[best]};
        slots_.push_back(slot);
        out.promoted = std::move(slot);
    }
    return out;
}

AffineOutcome Crossbar::run_affine_iteration() {
    AffineOutcome out;
    out.event = {CostKind::Affine, static_cast<std::uint32_t>(slots_.size())};
    if (slots_.empty()) return out;
    ++affine_iterations_;
    out.candidates.reserve(slots_.size());
    for (const auto& slot : slots_) {
        const ReferenceSegment& seg = segments_[slot.segment];
        const std::size_t n = slot.read.seq.size();
        const DnaSequence window = seg.segment.subseq(slot.window_start, n + 2 * std::size_t{affine_.eth});
        AffineResult r = affine_wf_banded(slot.read.seq, window, affine_);
        CandidateResult c;
        c.read_index = slot.read.read_index;
        c.strand = slot.read.strand;
        c.distance = r.distance;
        c.saturated = r.saturated;
        const std::size_t local = r.saturated ? slot.window_start + affine_.eth : slot.window_start + r.trace.start_offset;
        c.ref_pos = seg.segment_start + local;
        c.trace = std::move(r.trace);
        out.candidates.push_back(std::move(c));
    }
    slots_.clear();
    return out;
}

}  // namespace dartpim
