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

#include "dartpim/dna.hpp"

#include <stdexcept>

namespace dartpim {

int base_code(char c) noexcept {
    switch (c) {
        case 'A': case 'a': return kA;
        case 'C': case 'c': return kC;
        case 'G': case 'g': return kG;
        case 'T': case 't': return kT;
        default: return -1;
    }
}

char base_char(Base b) noexcept {
    static constexpr char kChars[4] = {'A', 'C', 'G', 'T'};
    return kChars[b & 3u];
}

DnaSequence DnaSequence::from_string(std::string_view text) {
    DnaSequence s;
    s.reserve(text.size());
    for (char c : text) {
        const int code = base_code(c);
        if (code < 0) {
            throw std::invalid_argument(std::string("invalid base '") + c + "'");
        }
        s.push_back(static_cast<Base>(code));
    }
    return s;
}

DnaSequence DnaSequence::from_codes(const std::vector<Base>& codes) {
    DnaSequence s;
    s.reserve(codes.size());
    for (Base b : codes) s.push_back(b);
    return s;
}

void DnaSequence::push_back(Base b) {
    if ((length_ & 31) == 0) words_.push_back(0);
    words_.back() |= std::uint64_t{b & 3u} << ((length_ & 31) * 2);
    ++length_;
}

DnaSequence DnaSequence::subseq(std::size_t pos, std::size_t len) const {
    if (pos > length_ || len > length_ - pos) {
        throw std::out_of_range("subseq beyond sequence end");
    }
    DnaSequence out;
    out.reserve(len);
    for (std::size_t i = 0; i < len; ++i) out.push_back((*this)[pos + i]);
    return out;
}

std::string DnaSequence::to_string() const {
    std::string out(length_, 'A');
    for (std::size_t i = 0; i < length_; ++i) out[i] = base_char((*this)[i]);
    return out;
}

std::vector<Base> DnaSequence::codes() const {
    std::vector<Base> out(length_);
    for (std::size_t i = 0; i < length_; ++i) out[i] = (*this)[i];
    return out;
}

DnaSequence reverse_complement(const DnaSequence& s) {
    DnaSequence out;
    out.reserve(s.size());
    for (std::size_t i = s.size(); i-- > 0;) out.push_back(complement(s[i]));
    return out;
}

}  // namespace dartpim
