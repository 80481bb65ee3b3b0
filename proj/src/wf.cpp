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

#include "dartpim/wf.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <stdexcept>

#include "dartpim/error.hpp"

namespace dartpim {

WfWeights WfWeights::from_prose_gap_penalty(std::uint32_t open, std::uint32_t extend) {
    if (open < extend) throw ConfigError("gap open must be at least gap extend");
    WfWeights w;
    w.op = open - extend;
    w.ex = extend;
    return w;
}

void WfParams::validate() const {
    if (bits < 1 || bits > 8) throw ConfigError("cell width must lie in [1, 8] bits");
    if (sat >= (1u << bits)) throw ConfigError("saturation value does not fit the cell width");
    if (sat < 1) throw ConfigError("saturation value must be positive");
}

namespace {

void check_window(const DnaSequence& read, const DnaSequence& refwin, const WfParams& params) {
    if (refwin.size() < read.size() + 2 * std::size_t{params.eth}) {
        throw std::invalid_argument("reference window shorter than read length + 2*eth");
    }
}

inline std::uint32_t clamp_sat(std::uint32_t v, std::uint32_t sat) { return v < sat ? v : sat; }

}  // namespace

// ---------------------------------------------------------------------------
// Linear

BandState::BandState(const WfParams& params) : params_(params), cells_(params.band(), 0) {}

void BandState::reset() { std::fill(cells_.begin(), cells_.end(), std::uint8_t{0}); }

void BandState::advance(Base read_base, const DnaSequence& refwin, std::size_t i) {
    const std::uint32_t sat = params_.sat;
    const auto& w = params_.weights;
    const std::size_t last = cells_.size() - 1;
    // In place, left to right: cells_[j] still holds the diagonal, cells_[j+1]
    // the cell above, cells_[j-1] the freshly computed left neighbour.
    for (std::size_t j = 0; j <= last; ++j) {
        const std::uint32_t diag = cells_[j];
        std::uint32_t v;
        if (read_base == refwin[i + j]) {
            v = diag;
        } else {
            const std::uint32_t top = j < last ? cells_[j + 1] : sat;
            const std::uint32_t left = j > 0 ? cells_[j - 1] : sat;
            v = std::min({diag + w.sub, top + w.del, left + w.ins});
        }
        cells_[j] = static_cast<std::uint8_t>(clamp_sat(v, sat));
    }
}

std::uint32_t linear_wf_banded(const DnaSequence& read, const DnaSequence& refwin, const WfParams& params) {
    check_window(read, refwin, params);
    BandState band(params);
    for (std::size_t i = 0; i < read.size(); ++i) band.advance(read[i], refwin, i);
    return band.center();
}

std::uint64_t linear_wf_full_oracle(const DnaSequence& s1, const DnaSequence& s2, const WfWeights& w) {
    const std::size_t n = s1.size();
    const std::size_t m = s2.size();
    std::vector<std::uint64_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j * std::uint64_t{w.ins};
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i * std::uint64_t{w.del};
        for (std::size_t j = 1; j <= m; ++j) {
            if (s1[i - 1] == s2[j - 1]) {
                cur[j] = prev[j - 1];
            } else {
                cur[j] = std::min({prev[j] + w.del, cur[j - 1] + w.ins, prev[j - 1] + w.sub});
            }
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// ---------------------------------------------------------------------------
// Traceback

std::size_t Traceback::read_length() const {
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](EditOp op) {
        return op != EditOp::Delete;
    }));
}

std::size_t Traceback::ref_span() const {
    return static_cast<std::size_t>(std::count_if(ops.begin(), ops.end(), [](EditOp op) {
        return op != EditOp::Insert;
    }));
}

namespace {

char op_letter(EditOp op) {
    switch (op) {
        case EditOp::Match: return 'M';
        case EditOp::Substitute: return 'X';
        case EditOp::Insert: return 'I';
        case EditOp::Delete: return 'D';
    }
    return '?';
}

}  // namespace

std::string Traceback::to_rle() const {
    std::string out;
    for (std::size_t i = 0; i < ops.size();) {
        std::size_t j = i;
        while (j < ops.size() && ops[j] == ops[i]) ++j;
        out += std::to_string(j - i);
        out += op_letter(ops[i]);
        i = j;
    }
    return out;
}

Traceback Traceback::from_rle(std::string_view rle) {
    Traceback t;
    std::size_t i = 0;
    while (i < rle.size()) {
        std::size_t count = 0;
        const auto [ptr, ec] = std::from_chars(rle.data() + i, rle.data() + rle.size(), count);
        const auto digits = static_cast<std::size_t>(ptr - (rle.data() + i));
        if (ec != std::errc{} || digits == 0 || count == 0 || i + digits >= rle.size()) {
            throw std::invalid_argument("malformed traceback run at offset " + std::to_string(i));
        }
        EditOp op;
        switch (rle[i + digits]) {
            case 'M': op = EditOp::Match; break;
            case 'X': op = EditOp::Substitute; break;
            case 'I': op = EditOp::Insert; break;
            case 'D': op = EditOp::Delete; break;
            default: throw std::invalid_argument(std::string("unknown traceback op '") + rle[i + digits] + "'");
        }
        t.ops.insert(t.ops.end(), count, op);
        i += digits + 1;
    }
    return t;
}

std::uint64_t trace_cost(const Traceback& trace, const WfWeights& w) {
    std::uint64_t cost = 0;
    const auto& ops = trace.ops;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        switch (ops[i]) {
            case EditOp::Match: break;
            case EditOp::Substitute: cost += w.sub; break;
            case EditOp::Insert:
            case EditOp::Delete:
                cost += w.ex;
                if (i == 0 || ops[i - 1] != ops[i]) cost += w.op;
                break;
        }
    }
    return cost;
}

DnaSequence apply_trace(const Traceback& trace, const DnaSequence& refwin, const DnaSequence& read) {
    DnaSequence out;
    std::size_t r = trace.start_offset;
    for (EditOp op : trace.ops) {
        switch (op) {
            case EditOp::Match:
                if (r >= refwin.size()) throw std::invalid_argument("trace runs past the reference window");
                out.push_back(refwin[r++]);
                break;
            case EditOp::Substitute:
            case EditOp::Insert:
                if (out.size() >= read.size()) throw std::invalid_argument("trace longer than the read");
                if (op == EditOp::Substitute) {
                    if (r >= refwin.size()) throw std::invalid_argument("trace runs past the reference window");
                    if (refwin[r] == read[out.size()]) throw std::invalid_argument("substitution of equal bases");
                    ++r;
                }
                out.push_back(read[out.size()]);
                break;
            case EditOp::Delete:
                if (r >= refwin.size()) throw std::invalid_argument("trace runs past the reference window");
                ++r;
                break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Affine

AffineBandState::AffineBandState(const WfParams& params, std::size_t read_length)
    : params_(params),
      rows_(read_length),
      d_(params.band(), 0),
      m1_(params.band(), static_cast<std::uint8_t>(params.sat)),
      m2_(params.band(), static_cast<std::uint8_t>(params.sat)),
      directions_((read_length * params.band() + 1) / 2, 0) {}

std::uint8_t AffineBandState::direction(std::size_t i, std::size_t j) const {
    const std::size_t cell = i * params_.band() + j;
    return static_cast<std::uint8_t>((directions_[cell >> 1] >> ((cell & 1) * 4)) & 0xF);
}

void AffineBandState::set_direction(std::size_t i, std::size_t j, std::uint8_t nibble) {
    const std::size_t cell = i * params_.band() + j;
    auto& byte = directions_[cell >> 1];
    const unsigned shift = (cell & 1) * 4;
    byte = static_cast<std::uint8_t>((byte & ~(0xF << shift)) | ((nibble & 0xF) << shift));
}

void AffineBandState::advance(Base read_base, const DnaSequence& refwin, std::size_t i) {
    const std::uint32_t sat = params_.sat;
    const auto& w = params_.weights;
    const std::size_t last = d_.size() - 1;
    for (std::size_t j = 0; j <= last; ++j) {
        std::uint8_t nibble = 0;

        // M1: vertical, from the cell above (band index j+1 in the previous row).
        std::uint32_t m1 = sat;
        if (j < last) {
            const std::uint32_t extend = m1_[j + 1] + w.ex;
            const std::uint32_t open = d_[j + 1] + w.op + w.ex;
            if (extend <= open) {
                m1 = extend;
                nibble |= 0x4;
            } else {
                m1 = open;
            }
        }
        // M2: horizontal, from the left neighbour already updated in this row.
        std::uint32_t m2 = sat;
        if (j > 0) {
            const std::uint32_t extend = m2_[j - 1] + w.ex;
            const std::uint32_t open = d_[j - 1] + w.op + w.ex;
            if (extend <= open) {
                m2 = extend;
                nibble |= 0x8;
            } else {
                m2 = open;
            }
        }
        m1 = clamp_sat(m1, sat);
        m2 = clamp_sat(m2, sat);

        const std::uint32_t diag = d_[j];
        std::uint32_t d;
        if (read_base == refwin[i + j]) {
            d = diag;
            nibble |= kMatch;
        } else {
            d = diag + w.sub;
            std::uint8_t origin = kSub;
            if (m2 < d) {
                d = m2;
                origin = kFromM2;
            }
            if (m1 < d) {
                d = m1;
                origin = kFromM1;
            }
            nibble |= origin;
        }
        d_[j] = static_cast<std::uint8_t>(clamp_sat(d, sat));
        m1_[j] = static_cast<std::uint8_t>(m1);
        m2_[j] = static_cast<std::uint8_t>(m2);
        set_direction(i, j, nibble);
    }
}

Traceback AffineBandState::traceback() const {
    enum class State { D, M1, M2 };
    Traceback t;
    State state = State::D;
    std::size_t i = rows_;
    std::size_t j = params_.eth;
    const std::size_t last = params_.band() - 1;
    while (i > 0) {
        const std::uint8_t nib = direction(i - 1, j);
        switch (state) {
            case State::D:
                switch (nib & 3) {
                    case kMatch: t.ops.push_back(EditOp::Match); --i; break;
                    case kSub: t.ops.push_back(EditOp::Substitute); --i; break;
                    case kFromM1: state = State::M1; break;
                    case kFromM2: state = State::M2; break;
                }
                break;
            case State::M1:
                if (j == last) throw std::logic_error("traceback left the band");
                t.ops.push_back(EditOp::Insert);
                state = (nib & 0x4) ? State::M1 : State::D;
                --i;
                ++j;
                break;
            case State::M2:
                if (j == 0) throw std::logic_error("traceback left the band");
                t.ops.push_back(EditOp::Delete);
                state = (nib & 0x8) ? State::M2 : State::D;
                --j;
                break;
        }
    }
    if (state != State::D) throw std::logic_error("traceback ended inside a gap at row 0");
    std::reverse(t.ops.begin(), t.ops.end());
    t.start_offset = j;
    return t;
}

AffineResult affine_wf_banded(const DnaSequence& read, const DnaSequence& refwin, const WfParams& params) {
    check_window(read, refwin, params);
    AffineBandState state(params, read.size());
    for (std::size_t i = 0; i < read.size(); ++i) state.advance(read[i], refwin, i);
    AffineResult r;
    r.distance = state.center();
    r.saturated = r.distance >= params.sat;
    if (!r.saturated) r.trace = state.traceback();
    return r;
}

UnbandedAlignment affine_wf_unbanded(const DnaSequence& read, const DnaSequence& ref, const WfWeights& w) {
    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max() / 4;
    const std::size_t n = read.size();
    const std::size_t m = ref.size();
    const std::size_t cols = m + 1;
    std::vector<std::uint64_t> d_prev(cols, 0), d_cur(cols), m1_prev(cols, kInf), m1_cur(cols), m2_cur(cols);
    std::vector<std::uint8_t> dirs(n * cols, 0);

    for (std::size_t r = 1; r <= n; ++r) {
        for (std::size_t c = 0; c <= m; ++c) {
            std::uint8_t nib = 0;
            const std::uint64_t m1_ext = m1_prev[c] + w.ex;
            const std::uint64_t m1_open = d_prev[c] + w.op + w.ex;
            std::uint64_t m1 = m1_open;
            if (m1_ext <= m1_open) {
                m1 = m1_ext;
                nib |= 0x4;
            }
            std::uint64_t m2 = kInf;
            if (c > 0) {
                const std::uint64_t ext = m2_cur[c - 1] + w.ex;
                const std::uint64_t open = d_cur[c - 1] + w.op + w.ex;
                m2 = open;
                if (ext <= open) {
                    m2 = ext;
                    nib |= 0x8;
                }
            }
            std::uint64_t d;
            if (c > 0 && read[r - 1] == ref[c - 1]) {
                d = d_prev[c - 1];
                nib |= AffineBandState::kMatch;
            } else {
                std::uint8_t origin = AffineBandState::kSub;
                d = c > 0 ? d_prev[c - 1] + w.sub : kInf;
                if (m2 < d) {
                    d = m2;
                    origin = AffineBandState::kFromM2;
                }
                if (m1 < d) {
                    d = m1;
                    origin = AffineBandState::kFromM1;
                }
                nib |= origin;
            }
            d_cur[c] = d;
            m1_cur[c] = m1;
            m2_cur[c] = m2;
            dirs[(r - 1) * cols + c] = nib;
        }
        std::swap(d_prev, d_cur);
        std::swap(m1_prev, m1_cur);
    }

    UnbandedAlignment out;
    std::size_t end = 0;
    for (std::size_t c = 0; c <= m; ++c) {
        if (d_prev[c] < d_prev[end]) end = c;
    }
    out.distance = d_prev[end];
    out.ref_end = end;

    enum class State { D, M1, M2 } state = State::D;
    std::size_t r = n, c = end;
    while (r > 0) {
        const std::uint8_t nib = dirs[(r - 1) * cols + c];
        switch (state) {
            case State::D:
                switch (nib & 3) {
                    case AffineBandState::kMatch: out.trace.ops.push_back(EditOp::Match); --r; --c; break;
                    case AffineBandState::kSub: out.trace.ops.push_back(EditOp::Substitute); --r; --c; break;
                    case AffineBandState::kFromM1: state = State::M1; break;
                    case AffineBandState::kFromM2: state = State::M2; break;
                }
                break;
            case State::M1:
                out.trace.ops.push_back(EditOp::Insert);
                state = (nib & 0x4) ? State::M1 : State::D;
                --r;
                break;
            case State::M2:
                out.trace.ops.push_back(EditOp::Delete);
                state = (nib & 0x8) ? State::M2 : State::D;
                --c;
                break;
        }
    }
    std::reverse(out.trace.ops.begin(), out.trace.ops.end());
    out.ref_start = c;
    out.trace.start_offset = c;
    return out;
}

}  // namespace dartpim
