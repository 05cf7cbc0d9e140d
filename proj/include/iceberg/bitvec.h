// Copyright 2026 The iceberg-qec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICEBERG_BITVEC_H
#define ICEBERG_BITVEC_H

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace iceberg {

/// Fixed-length vector over GF(2), packed into 64-bit words.
///
/// Bits beyond `size()` in the last word are kept zero so that word-wise
/// comparisons and popcounts are exact.
class BitVec {
   public:
    BitVec() = default;
    explicit BitVec(size_t num_bits) : num_bits_(num_bits), words_((num_bits + 63) / 64, 0) {}

    static BitVec from_mask(size_t num_bits, uint64_t mask) {
        BitVec v(num_bits);
        if (num_bits > 0) {
            v.words_[0] = num_bits >= 64 ? mask : (mask & ((uint64_t{1} << num_bits) - 1));
        }
        return v;
    }

    /// Parses a string of '0'/'1' characters, index 0 first.
    static BitVec from_string(const std::string &bits) {
        BitVec v(bits.size());
        for (size_t i = 0; i < bits.size(); i++) {
            if (bits[i] == '1') {
                v.set(i, true);
            } else if (bits[i] != '0') {
                throw std::invalid_argument("BitVec::from_string: unexpected character");
            }
        }
        return v;
    }

    size_t size() const { return num_bits_; }
    size_t num_words() const { return words_.size(); }
    const uint64_t *data() const { return words_.data(); }
    uint64_t *data() { return words_.data(); }

    bool get(size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
    bool operator[](size_t i) const { return get(i); }
    void set(size_t i, bool value) {
        uint64_t m = uint64_t{1} << (i & 63);
        if (value) {
            words_[i >> 6] |= m;
        } else {
            words_[i >> 6] &= ~m;
        }
    }
    void flip(size_t i) { words_[i >> 6] ^= uint64_t{1} << (i & 63); }

    /// Low 64 bits; the fast path used when the vector fits in one word.
    uint64_t mask() const { return words_.empty() ? 0 : words_[0]; }

    BitVec &operator^=(const BitVec &other) {
        check_same(other);
        for (size_t k = 0; k < words_.size(); k++) {
            words_[k] ^= other.words_[k];
        }
        return *this;
    }
    BitVec &operator&=(const BitVec &other) {
        check_same(other);
        for (size_t k = 0; k < words_.size(); k++) {
            words_[k] &= other.words_[k];
        }
        return *this;
    }
    BitVec &operator|=(const BitVec &other) {
        check_same(other);
        for (size_t k = 0; k < words_.size(); k++) {
            words_[k] |= other.words_[k];
        }
        return *this;
    }
    friend BitVec operator^(BitVec a, const BitVec &b) { return a ^= b; }
    friend BitVec operator&(BitVec a, const BitVec &b) { return a &= b; }
    friend BitVec operator|(BitVec a, const BitVec &b) { return a |= b; }

    size_t popcount() const {
        size_t total = 0;
        for (uint64_t w : words_) {
            total += std::popcount(w);
        }
        return total;
    }
    bool any() const {
        for (uint64_t w : words_) {
            if (w) {
                return true;
            }
        }
        return false;
    }
    bool none() const { return !any(); }

    /// Parity of the bitwise AND, i.e. the GF(2) dot product.
    bool dot(const BitVec &other) const {
        check_same(other);
        uint64_t acc = 0;
        for (size_t k = 0; k < words_.size(); k++) {
            acc ^= words_[k] & other.words_[k];
        }
        return std::popcount(acc) & 1;
    }

    /// Index of the lowest set bit, or size() if none.
    size_t first_set() const {
        for (size_t k = 0; k < words_.size(); k++) {
            if (words_[k]) {
                return k * 64 + std::countr_zero(words_[k]);
            }
        }
        return num_bits_;
    }

    std::vector<size_t> set_bits() const {
        std::vector<size_t> out;
        for (size_t k = 0; k < words_.size(); k++) {
            uint64_t w = words_[k];
            while (w) {
                out.push_back(k * 64 + std::countr_zero(w));
                w &= w - 1;
            }
        }
        return out;
    }

    std::string str() const {
        std::string s(num_bits_, '0');
        for (size_t i = 0; i < num_bits_; i++) {
            if (get(i)) {
                s[i] = '1';
            }
        }
        return s;
    }

    bool operator==(const BitVec &other) const = default;

    /// Lexicographic order on the bit string read from index 0.
    bool lex_less(const BitVec &other) const {
        check_same(other);
        for (size_t i = 0; i < num_bits_; i++) {
            bool a = get(i);
            bool b = other.get(i);
            if (a != b) {
                return b;
            }
        }
        return false;
    }

    size_t hash() const {
        size_t h = num_bits_;
        for (uint64_t w : words_) {
            h ^= std::hash<uint64_t>{}(w) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }

   private:
    void check_same(const BitVec &other) const {
        if (other.num_bits_ != num_bits_) {
            throw std::invalid_argument("BitVec: length mismatch");
        }
    }

    size_t num_bits_ = 0;
    std::vector<uint64_t> words_;
};

struct BitVecHash {
    size_t operator()(const BitVec &v) const { return v.hash(); }
};

}  // namespace iceberg

#endif
