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

#ifndef DARTPIM_DNA_HPP
#define DARTPIM_DNA_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dartpim {

/// 2-bit base code: A=0, C=1, G=2, T=3.
using Base = std::uint8_t;

inline constexpr Base kA = 0;
inline constexpr Base kC = 1;
inline constexpr Base kG = 2;
inline constexpr Base kT = 3;

/// Returns the code of an upper- or lowercase ACGT character, or -1.
int base_code(char c) noexcept;
char base_char(Base b) noexcept;
inline constexpr Base complement(Base b) noexcept { return static_cast<Base>(3 - b); }

/// DNA string packed at 2 bits per base, 32 bases per 64-bit word.
class DnaSequence {
public:
    DnaSequence() = default;

    /// Throws std::invalid_argument on characters outside ACGTacgt.
    static DnaSequence from_string(std::string_view text);
    static DnaSequence from_codes(const std::vector<Base>& codes);

    std::size_t size() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }

    Base operator[](std::size_t i) const noexcept {
        return static_cast<Base>((words_[i >> 5] >> ((i & 31) * 2)) & 3u);
    }

    void set(std::size_t i, Base b) noexcept {
        auto& w = words_[i >> 5];
        const unsigned shift = (i & 31) * 2;
        w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t{b & 3u} << shift);
    }

    void push_back(Base b);
    void reserve(std::size_t n) { words_.reserve((n + 31) / 32); }

    DnaSequence subseq(std::size_t pos, std::size_t len) const;
    std::string to_string() const;
    std::vector<Base> codes() const;

    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const DnaSequence& a, const DnaSequence& b) noexcept {
        return a.length_ == b.length_ && a.words_ == b.words_;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t length_ = 0;
};

DnaSequence reverse_complement(const DnaSequence& s);

}  // namespace dartpim

#endif  // DARTPIM_DNA_HPP
