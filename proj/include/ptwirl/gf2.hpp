// Copyright 2026 The ptwirl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptwirl {

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bits past size() in the last word are kept zero so that word-level
/// comparisons and popcounts are exact.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    static BitVector from_u64(std::size_t size, std::uint64_t value) {
        BitVector v(size);
        for (std::size_t i = 0; i < size && i < 64; ++i) {
            if ((value >> i) & 1u) v.set(i);
        }
        return v;
    }

    std::size_t size() const noexcept { return size_; }
    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool value = true) {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= bit;
        } else {
            words_[i >> 6] &= ~bit;
        }
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other) {
        check_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
        return *this;
    }
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

    BitVector& operator|=(const BitVector& other) {
        check_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
        return *this;
    }
    friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }

    BitVector& operator&=(const BitVector& other) {
        check_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
        return *this;
    }
    friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }

    /// Parity of the bitwise AND, i.e. the GF(2) inner product.
    bool dot(const BitVector& other) const {
        check_same_size(other);
        std::uint64_t acc = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
        return std::popcount(acc) & 1;
    }

    std::size_t popcount() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const noexcept {
        for (auto w : words_) {
            if (w != 0) return true;
        }
        return false;
    }
    bool none() const noexcept { return !any(); }

    std::optional<std::size_t> lowest_set() const noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
        }
        return std::nullopt;
    }

    /// Low 64 bits as an integer; only meaningful for size() <= 64.
    std::uint64_t to_u64() const noexcept { return words_.empty() ? 0 : words_[0]; }

    /// Numeric comparison treating bit i as the coefficient of 2^i.
    std::strong_ordering compare_value(const BitVector& other) const {
        check_same_size(other);
        for (std::size_t w = words_.size(); w-- > 0;) {
            if (words_[w] != other.words_[w]) {
                return words_[w] < other.words_[w] ? std::strong_ordering::less
                                                   : std::strong_ordering::greater;
            }
        }
        return std::strong_ordering::equal;
    }

    /// Bit string with index 0 first.
    std::string str() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) {
            if (get(i)) s[i] = '1';
        }
        return s;
    }

    friend bool operator==(const BitVector&, const BitVector&) = default;

private:
    void check_same_size(const BitVector& other) const {
        if (size_ != other.size_) {
            throw std::invalid_argument("BitVector size mismatch: " + std::to_string(size_) + " vs " +
                                        std::to_string(other.size_));
        }
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Advances `mask` to the next larger value with the same popcount.
/// Returns false (leaving mask unspecified) when no such value fits.
inline bool next_same_weight(BitVector& mask) {
    const auto low = mask.lowest_set();
    if (!low) return false;
    std::size_t p = *low;
    while (p < mask.size() && mask.get(p)) ++p;
    if (p >= mask.size()) return false;
    const std::size_t run = p - *low;
    mask.set(p);
    for (std::size_t i = *low; i < p; ++i) mask.set(i, false);
    for (std::size_t i = 0; i + 1 < run; ++i) mask.set(i);
    return true;
}

/// Enumerates every mask of `width` bits ordered by popcount, then by value.
/// This is the order I, h1, h2, ..., h1*h2, h1*h3, ... used for group listings.
class WeightOrderedMasks {
public:
    explicit WeightOrderedMasks(std::size_t width) : current_(width) {}

    const BitVector& current() const noexcept { return current_; }

    bool advance() {
        if (weight_ > current_.size()) return false;
        if (next_same_weight(current_)) return true;
        ++weight_;
        if (weight_ > current_.size()) return false;
        current_ = BitVector(current_.size());
        for (std::size_t i = 0; i < weight_; ++i) current_.set(i);
        return true;
    }

private:
    BitVector current_;
    std::size_t weight_ = 0;
};

/// All masks of `width` bits in weight order; width must be small.
inline std::vector<BitVector> masks_by_weight(std::size_t width) {
    if (width >= 31) throw std::invalid_argument("masks_by_weight: width too large to enumerate");
    std::vector<BitVector> out;
    out.reserve(std::size_t{1} << width);
    WeightOrderedMasks it(width);
    do {
        out.push_back(it.current());
    } while (it.advance());
    return out;
}

}  // namespace ptwirl
