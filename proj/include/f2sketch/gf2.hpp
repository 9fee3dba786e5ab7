// Copyright 2026 The Authors.
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

// GF(2) primitives: packed bit vectors, parity evaluation, parity matrices,
// rank and span.
//
// Coordinate convention used throughout the library: coordinate i of a
// BitVector lives in bit (i % 64) of word (i / 64). When a vector with
// n <= 64 is viewed as an integer, coordinate i is bit i; the Fourier
// module indexes characters the same way.

#ifndef F2SKETCH_GF2_HPP_
#define F2SKETCH_GF2_HPP_

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"

namespace f2sketch {

constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_(words_for(n), 0) {}

  // Coordinate i is bit i of `value`; n <= 64.
  static BitVector from_index(std::size_t n, std::uint64_t value) {
    if (n > 64) throw UsageError("from_index: n must be <= 64");
    BitVector v(n);
    if (n > 0) v.words_[0] = value;
    v.clear_padding();
    return v;
  }

  static BitVector from_indices(std::size_t n,
                                std::span<const std::size_t> indices) {
    BitVector v(n);
    for (std::size_t i : indices) {
      if (i >= n) throw UsageError("coordinate out of range");
      v.set(i, true);
    }
    return v;
  }

  // '0'/'1' characters in coordinate order: character j is coordinate j.
  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw UsageError("bit string may only contain '0' and '1'");
      }
    }
    return v;
  }

  // Byte b holds coordinates 8b..8b+7, little-endian within the byte; each
  // byte is two lowercase hex digits. Exactly ceil(n/8) bytes.
  static BitVector from_hex(std::size_t n, std::string_view hex) {
    const std::size_t bytes = (n + 7) / 8;
    if (hex.size() != 2 * bytes) {
      throw UsageError("hex row has " + std::to_string(hex.size()) +
                       " digits, expected " + std::to_string(2 * bytes));
    }
    BitVector v(n);
    for (std::size_t b = 0; b < bytes; ++b) {
      const std::uint64_t byte =
          static_cast<std::uint64_t>(hex_digit(hex[2 * b]) << 4 |
                                     hex_digit(hex[2 * b + 1]));
      v.words_[b / 8] |= byte << (8 * (b % 8));
    }
    if (v.padding_dirty()) throw UsageError("hex row sets bits beyond n");
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1U;
  }
  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t i) {
    words_[i / kWordBits] ^= std::uint64_t{1} << (i % kWordBits);
  }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w == 0; });
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  // Set bits of `words` beyond n are cleared.
  void assign_words(std::span<const std::uint64_t> words) {
    std::copy_n(words.begin(), std::min(words.size(), words_.size()),
                words_.begin());
    clear_padding();
  }

  std::uint64_t to_index() const {
    if (n_ > 64) throw UsageError("to_index: n must be <= 64");
    return words_.empty() ? 0 : words_[0];
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    const std::size_t bytes = (n_ + 7) / 8;
    std::string s;
    s.reserve(2 * bytes);
    for (std::size_t b = 0; b < bytes; ++b) {
      const auto byte =
          static_cast<unsigned>((words_[b / 8] >> (8 * (b % 8))) & 0xffU);
      s.push_back(kDigits[byte >> 4]);
      s.push_back(kDigits[byte & 0xfU]);
    }
    return s;
  }

  std::vector<std::size_t> ones() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        out.push_back(w * kWordBits +
                      static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
    return out;
  }

  // Number of set bits in [begin, begin + len).
  std::size_t count_range(std::size_t begin, std::size_t len) const {
    std::size_t c = 0;
    for_range(begin, len, [&](std::uint64_t w) {
      c += static_cast<std::size_t>(std::popcount(w));
      return true;
    });
    return c;
  }

  bool any_in_range(std::size_t begin, std::size_t len) const {
    bool any = false;
    for_range(begin, len, [&](std::uint64_t w) {
      any = w != 0;
      return !any;
    });
    return any;
  }

  // Bits [begin, begin + width) as an integer, bit j = coordinate begin + j.
  std::uint64_t extract(std::size_t begin, std::size_t width) const {
    if (width == 0) return 0;
    const std::size_t w = begin / kWordBits;
    const std::size_t off = begin % kWordBits;
    std::uint64_t value = words_[w] >> off;
    if (off != 0 && w + 1 < words_.size()) {
      value |= words_[w + 1] << (kWordBits - off);
    }
    if (width < 64) value &= (std::uint64_t{1} << width) - 1;
    return value;
  }

  // Widen (zero-extend) or truncate to n coordinates.
  BitVector resized(std::size_t n) const {
    BitVector v(n);
    v.assign_words(words_);
    return v;
  }

  BitVector& operator^=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
  }
  BitVector& operator&=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  BitVector& operator|=(const BitVector& other) {
    check_same_size(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  friend BitVector operator&(BitVector a, const BitVector& b) { return a &= b; }
  friend BitVector operator|(BitVector a, const BitVector& b) { return a |= b; }
  friend bool operator==(const BitVector& a, const BitVector& b) = default;

  void check_same_size(const BitVector& other) const {
    if (other.n_ != n_) {
      throw UsageError("dimension mismatch: " + std::to_string(n_) + " vs " +
                       std::to_string(other.n_));
    }
  }

 private:
  static unsigned hex_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<unsigned>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<unsigned>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<unsigned>(c - 'A' + 10);
    throw UsageError(std::string("invalid hex digit '") + c + "'");
  }

  bool padding_dirty() const {
    if (n_ % kWordBits == 0 || words_.empty()) return false;
    return (words_.back() >> (n_ % kWordBits)) != 0;
  }
  void clear_padding() {
    if (n_ % kWordBits != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (n_ % kWordBits)) - 1;
    }
  }

  // Calls fn(masked word) for each word overlapping [begin, begin+len) until
  // fn returns false.
  template <typename Fn>
  void for_range(std::size_t begin, std::size_t len, Fn&& fn) const {
    if (len == 0) return;
    if (begin + len > n_) throw UsageError("bit range out of bounds");
    const std::size_t end = begin + len;
    std::size_t pos = begin;
    while (pos < end) {
      const std::size_t w = pos / kWordBits;
      const std::size_t off = pos % kWordBits;
      const std::size_t take = std::min(kWordBits - off, end - pos);
      std::uint64_t word = words_[w] >> off;
      if (take < kWordBits) word &= (std::uint64_t{1} << take) - 1;
      if (!fn(word)) return;
      pos += take;
    }
  }

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// chi_S(x) as a bit: popcount(S AND x) mod 2.
inline bool parity_eval(const BitVector& s, const BitVector& x) {
  s.check_same_size(x);
  std::uint64_t acc = 0;
  const auto sw = s.words();
  const auto xw = x.words();
  for (std::size_t i = 0; i < sw.size(); ++i) acc ^= sw[i] & xw[i];
  return (std::popcount(acc) & 1) != 0;
}

// k parity rows over n coordinates.
class ParityMatrix {
 public:
  ParityMatrix() = default;
  explicit ParityMatrix(std::size_t n) : n_(n) {}
  ParityMatrix(std::size_t n, std::vector<BitVector> rows)
      : n_(n), rows_(std::move(rows)) {
    for (const auto& r : rows_) {
      if (r.size() != n_) throw UsageError("parity row length differs from n");
    }
  }

  std::size_t n() const { return n_; }
  std::size_t k() const { return rows_.size(); }
  const std::vector<BitVector>& rows() const { return rows_; }
  const BitVector& row(std::size_t i) const { return rows_[i]; }

  void add_row(BitVector row) {
    if (row.size() != n_) throw UsageError("parity row length differs from n");
    rows_.push_back(std::move(row));
  }

  // The same parities over a larger ambient space; the extra coordinates
  // appear in no row.
  ParityMatrix widened(std::size_t n) const {
    if (n < n_) throw UsageError("widened: cannot shrink a parity matrix");
    ParityMatrix out(n);
    out.rows_.reserve(rows_.size());
    for (const auto& r : rows_) out.rows_.push_back(r.resized(n));
    return out;
  }

  friend bool operator==(const ParityMatrix&, const ParityMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<BitVector> rows_;
};

// Bit i of the result is chi_{row_i}(x).
inline BitVector sketch_apply(const ParityMatrix& m, const BitVector& x) {
  if (x.size() != m.n()) {
    throw UsageError("sketch_apply: x has " + std::to_string(x.size()) +
                     " coordinates, matrix has " + std::to_string(m.n()));
  }
  BitVector out(m.k());
  for (std::size_t i = 0; i < m.k(); ++i) {
    if (parity_eval(m.row(i), x)) out.set(i, true);
  }
  return out;
}

namespace internal {

inline std::size_t lowest_set_bit(const BitVector& v) {
  const auto w = v.words();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0) {
      return i * kWordBits + static_cast<std::size_t>(std::countr_zero(w[i]));
    }
  }
  return v.size();
}

// Incremental XOR basis keyed by lowest set bit. Reducing by a vector whose
// lowest bit is p clears p and touches only higher bits, so reduction
// terminates.
class XorBasis {
 public:
  explicit XorBasis(std::size_t n) : n_(n), by_pivot_(n) {}

  // Returns true if v was independent of the current basis (and adds it).
  bool insert(BitVector v) {
    if (v.size() != n_) throw UsageError("rank: dimension mismatch");
    while (true) {
      const std::size_t p = lowest_set_bit(v);
      if (p == n_) return false;
      if (by_pivot_[p].size() == 0) {
        by_pivot_[p] = std::move(v);
        ++rank_;
        return true;
      }
      v ^= by_pivot_[p];
    }
  }
  std::size_t rank() const { return rank_; }

 private:
  std::size_t n_;
  std::size_t rank_ = 0;
  std::vector<BitVector> by_pivot_;  // size()==0 marks an empty slot
};

}  // namespace internal

inline std::size_t gf2_rank(std::span<const BitVector> vectors) {
  if (vectors.empty()) return 0;
  internal::XorBasis basis(vectors.front().size());
  for (const auto& v : vectors) basis.insert(v);
  return basis.rank();
}

// A linearly independent set spanning a subspace of F2^n.
class SubspaceBasis {
 public:
  explicit SubspaceBasis(std::size_t n) : n_(n) {}
  SubspaceBasis(std::size_t n, std::vector<BitVector> basis)
      : n_(n), basis_(std::move(basis)) {
    for (const auto& b : basis_) {
      if (b.size() != n_) throw UsageError("basis vector length differs from n");
    }
    if (gf2_rank(basis_) != basis_.size()) {
      throw DomainError("basis vectors are linearly dependent");
    }
  }

  std::size_t n() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<BitVector>& vectors() const { return basis_; }

 private:
  std::size_t n_;
  std::vector<BitVector> basis_;
};

constexpr std::size_t kMaxSpanDim = 20;

// All 2^dim XOR combinations; element c is the XOR of basis vectors j with
// bit j of c set, so element 0 is the zero vector.
inline std::vector<BitVector> span_enumerate(const SubspaceBasis& basis) {
  if (basis.dim() > kMaxSpanDim) {
    throw CapacityError("span_enumerate: dimension " +
                        std::to_string(basis.dim()) + " exceeds limit " +
                        std::to_string(kMaxSpanDim));
  }
  const std::size_t count = std::size_t{1} << basis.dim();
  std::vector<BitVector> out;
  out.reserve(count);
  out.emplace_back(basis.n());
  for (std::size_t c = 1; c < count; ++c) {
    const auto low = static_cast<std::size_t>(std::countr_zero(c));
    out.push_back(out[c & (c - 1)] ^ basis.vectors()[low]);
  }
  return out;
}

}  // namespace f2sketch

#endif  // F2SKETCH_GF2_HPP_
