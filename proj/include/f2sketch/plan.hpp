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

// Sketch plans: a parity matrix plus a post-processor that turns the k sketch
// bits into an output. Post-processors read nothing but the bits and their
// own parameters, so anything holding the plan and the bits (a stream, a
// protocol receiver) computes the same output.

#ifndef F2SKETCH_PLAN_HPP_
#define F2SKETCH_PLAN_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"
#include "json.hpp"

namespace f2sketch {

// A contiguous block of plan rows.
struct RowSpan {
  std::size_t begin = 0;
  std::size_t size = 0;
  std::size_t end() const { return begin + size; }
  friend bool operator==(const RowSpan&, const RowSpan&) = default;
};

struct PostProcessor;

struct ConstantPost {
  double value = 0.0;
};

// Mean over rows r of sign_r * (-1)^{bit_r} * scale.
struct L1MeanPost {
  RowSpan rows;
  BitVector negative;  // bit r set iff sign_r = -1
  double scale = 0.0;
};

// min(budget, inner estimate).
struct BudgetClampPost {
  std::shared_ptr<const PostProcessor> inner;
  double budget = 0.0;
};

// Biased-parity Hamming gap test: 1 ("weight >= 2d") iff the number of set
// bits strictly exceeds threshold * rows.size, otherwise 0 ("weight <= d").
struct HamGapPost {
  RowSpan rows;
  double threshold = 0.0;
};

// 0 iff every bit in the span is 0, else 1.
struct ZeroTestPost {
  RowSpan rows;
};

// LTF decode with explicit slot parities y_{w,j}.
struct LtfDirectPost {
  HamGapPost heavy;
  RowSpan trigger;             // zero test over coordinates with w >= 2 theta
  RowSpan slots;               // one row per (weight class, bucket)
  std::vector<double> slot_weights;
  double theta = 0.0;
};

// LTF decode where the slot vector y is only seen through random parities
// ("checks") and recovered by matching low-weight candidates.
struct LtfCompactPost {
  HamGapPost heavy;
  RowSpan trigger;
  RowSpan checks;                          // at most 64 rows
  std::vector<std::uint64_t> signatures;   // check pattern of each slot
  std::vector<double> slot_weights;
  double theta = 0.0;
  std::size_t max_weight = 0;              // candidates have |y| <= max_weight

  // Signature -> slot subsets of size <= ceil(max_weight / 2); rebuilt from
  // the fields above, never serialized.
  struct Index {
    std::unordered_multimap<std::uint64_t, std::vector<std::uint32_t>> half;
  };
  std::shared_ptr<const Index> index;
};

// sgn(-theta + sum_b weight_b [bucket b nonzero]), with an early 1 once
// `needed_count` buckets are nonzero. Bucket b owns rows
// [rows.begin + b*rows_per_bucket, +rows_per_bucket).
struct OrCountPost {
  RowSpan rows;
  std::size_t rows_per_bucket = 0;
  std::vector<double> bucket_weights;
  std::size_t needed_count = 0;
  double theta = 0.0;
};

// Rank of a rank-2 matroid: 0 if the zero test passes, else 2 if the
// two-clique detector fires, else 1.
struct Rank2Post {
  RowSpan zero_test;
  OrCountPost pair;
};

// sum_c coeffs[c] * (-1)^{popcount(c & bits)} over the span of the rows.
struct TopSubspacePost {
  RowSpan rows;
  std::vector<double> coeffs;  // 2^rows.size entries
};

struct PostProcessor {
  std::variant<ConstantPost, L1MeanPost, BudgetClampPost, HamGapPost,
               ZeroTestPost, LtfDirectPost, LtfCompactPost, OrCountPost,
               Rank2Post, TopSubspacePost>
      v;
};

struct SketchMeta {
  std::string builder;
  nlohmann::json params = nlohmann::json::object();
  // "mse" (worst-case expected squared error), "distributional_mse", or
  // "delta" (error probability).
  std::string error_kind = "mse";
  double claimed_error = 0.0;
  std::size_t size_bits = 0;
  // Builder constants (bucket counts, row counts per component, ...).
  nlohmann::json constants = nlohmann::json::object();
};

struct SketchPlan {
  ParityMatrix matrix;
  PostProcessor post;
  std::uint64_t seed = 0;
  SketchMeta meta;

  std::size_t k() const { return matrix.k(); }
  std::size_t n() const { return matrix.n(); }
};

// ---------------------------------------------------------------------------
// Decoding.

namespace internal {

inline bool ham_gap_heavy(const HamGapPost& p, const BitVector& bits) {
  if (p.rows.size == 0) return false;
  const double ones = static_cast<double>(bits.count_range(p.rows.begin, p.rows.size));
  return ones > p.threshold * static_cast<double>(p.rows.size);
}

inline bool span_nonzero(RowSpan s, const BitVector& bits) {
  return bits.any_in_range(s.begin, s.size);
}

inline double decode_or_count(const OrCountPost& p, const BitVector& bits) {
  const std::size_t buckets = p.bucket_weights.size();
  std::size_t nonzero = 0;
  double sum = 0.0;
  if (p.rows_per_bucket > 0) {
    // Walk set bits only; rows of one bucket are contiguous.
    std::size_t last_bucket = buckets;
    const auto words = bits.words();
    const std::size_t begin = p.rows.begin;
    const std::size_t end = p.rows.end();
    for (std::size_t w = begin / kWordBits; w < words.size() && w * kWordBits < end; ++w) {
      std::uint64_t word = words[w];
      while (word != 0) {
        const std::size_t pos =
            w * kWordBits + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        if (pos < begin) continue;
        if (pos >= end) break;
        const std::size_t b = (pos - begin) / p.rows_per_bucket;
        if (b != last_bucket) {
          last_bucket = b;
          ++nonzero;
          sum += p.bucket_weights[b];
        }
      }
    }
  }
  if (p.needed_count > 0 && nonzero >= p.needed_count) return 1.0;
  return sum >= p.theta ? 1.0 : 0.0;
}

inline double decode_l1_mean(const L1MeanPost& p, const BitVector& bits) {
  if (p.rows.size == 0) return 0.0;
  // sum_r sign_r (-1)^{bit_r} = (#pos - #neg) - 2 (#pos set - #neg set).
  const std::size_t total = p.rows.size;
  const std::size_t neg = p.negative.popcount();
  std::size_t set_pos = 0;
  std::size_t set_neg = 0;
  const auto nw = p.negative.words();
  for (std::size_t r = 0; r < total; r += kWordBits) {
    const std::size_t width = std::min(kWordBits, total - r);
    const std::uint64_t b = bits.extract(p.rows.begin + r, width);
    const std::uint64_t n = nw[r / kWordBits];
    set_neg += static_cast<std::size_t>(std::popcount(b & n));
    set_pos += static_cast<std::size_t>(std::popcount(b & ~n));
  }
  const auto pos = static_cast<double>(total - neg);
  const double signed_sum =
      (pos - static_cast<double>(neg)) -
      2.0 * (static_cast<double>(set_pos) - static_cast<double>(set_neg));
  return p.scale * signed_sum / static_cast<double>(total);
}

inline double decode_top_subspace(const TopSubspacePost& p, const BitVector& bits) {
  const std::uint64_t b = bits.extract(p.rows.begin, p.rows.size);
  double s = 0.0;
  for (std::size_t c = 0; c < p.coeffs.size(); ++c) {
    s += (std::popcount(c & b) & 1) ? -p.coeffs[c] : p.coeffs[c];
  }
  return s;
}

inline bool compact_has_light_candidate(const LtfCompactPost& p, std::uint64_t target) {
  const auto& index = *p.index;
  const std::size_t slots = p.slot_weights.size();
  const std::size_t other = p.max_weight / 2;  // size of the enumerated side
  // Enumerate subsets B of size <= other; look up target ^ sig(B).
  std::vector<std::uint32_t> b;
  bool found = false;
  const auto try_match = [&](std::uint64_t sig, const std::vector<std::uint32_t>& side) {
    auto [lo, hi] = index.half.equal_range(target ^ sig);
    for (auto it = lo; it != hi; ++it) {
      const auto& a = it->second;
      if (a.size() + side.size() > p.max_weight) continue;
      bool disjoint = true;
      double sum = 0.0;
      for (std::uint32_t s : a) {
        sum += p.slot_weights[s];
        if (std::find(side.begin(), side.end(), s) != side.end()) disjoint = false;
      }
      if (!disjoint) continue;
      for (std::uint32_t s : side) sum += p.slot_weights[s];
      if (sum < p.theta) return true;
    }
    return false;
  };
  // Recursive enumeration in increasing slot order.
  const auto recurse = [&](auto&& self, std::size_t start, std::uint64_t sig) -> void {
    if (found) return;
    if (try_match(sig, b)) {
      found = true;
      return;
    }
    if (b.size() == other) return;
    for (std::size_t s = start; s < slots && !found; ++s) {
      b.push_back(static_cast<std::uint32_t>(s));
      self(self, s + 1, sig ^ p.signatures[s]);
      b.pop_back();
    }
  };
  recurse(recurse, 0, 0);
  return found;
}

}  // namespace internal

// Builds the signature index of a compact LTF post-processor.
inline void build_compact_index(LtfCompactPost& p) {
  auto index = std::make_shared<LtfCompactPost::Index>();
  const std::size_t half = (p.max_weight + 1) / 2;
  std::vector<std::uint32_t> a;
  const std::size_t slots = p.slot_weights.size();
  const auto recurse = [&](auto&& self, std::size_t start, std::uint64_t sig,
                           double sum) -> void {
    if (sum < p.theta) index->half.emplace(sig, a);
    if (a.size() == half) return;
    for (std::size_t s = start; s < slots; ++s) {
      a.push_back(static_cast<std::uint32_t>(s));
      self(self, s + 1, sig ^ p.signatures[s], sum + p.slot_weights[s]);
      a.pop_back();
    }
  };
  recurse(recurse, 0, 0, 0.0);
  p.index = std::move(index);
}

inline double decode(const PostProcessor& post, const BitVector& bits);

namespace internal {

struct DecodeVisitor {
  const BitVector& bits;

  double operator()(const ConstantPost& p) const { return p.value; }
  double operator()(const L1MeanPost& p) const { return decode_l1_mean(p, bits); }
  double operator()(const BudgetClampPost& p) const {
    return std::min(p.budget, decode(*p.inner, bits));
  }
  double operator()(const HamGapPost& p) const {
    return ham_gap_heavy(p, bits) ? 1.0 : 0.0;
  }
  double operator()(const ZeroTestPost& p) const {
    return span_nonzero(p.rows, bits) ? 1.0 : 0.0;
  }
  double operator()(const LtfDirectPost& p) const {
    if (ham_gap_heavy(p.heavy, bits)) return 1.0;
    if (span_nonzero(p.trigger, bits)) return 1.0;
    double sum = 0.0;
    const auto words = bits.words();
    for (std::size_t w = p.slots.begin / kWordBits;
         w < words.size() && w * kWordBits < p.slots.end(); ++w) {
      std::uint64_t word = words[w];
      while (word != 0) {
        const std::size_t pos =
            w * kWordBits + static_cast<std::size_t>(std::countr_zero(word));
        word &= word - 1;
        if (pos < p.slots.begin) continue;
        if (pos >= p.slots.end()) break;
        sum += p.slot_weights[pos - p.slots.begin];
      }
    }
    return sum >= p.theta ? 1.0 : 0.0;
  }
  double operator()(const LtfCompactPost& p) const {
    if (ham_gap_heavy(p.heavy, bits)) return 1.0;
    if (span_nonzero(p.trigger, bits)) return 1.0;
    const std::uint64_t target = bits.extract(p.checks.begin, p.checks.size);
    return compact_has_light_candidate(p, target) ? 0.0 : 1.0;
  }
  double operator()(const OrCountPost& p) const { return decode_or_count(p, bits); }
  double operator()(const Rank2Post& p) const {
    if (!span_nonzero(p.zero_test, bits)) return 0.0;
    return decode_or_count(p.pair, bits) > 0.5 ? 2.0 : 1.0;
  }
  double operator()(const TopSubspacePost& p) const {
    return decode_top_subspace(p, bits);
  }
};

}  // namespace internal

inline double decode(const PostProcessor& post, const BitVector& bits) {
  return std::visit(internal::DecodeVisitor{bits}, post.v);
}

// The post-processing function g applied to sketch bits.
inline double estimate(const SketchPlan& plan, const BitVector& sketch_bits) {
  if (sketch_bits.size() != plan.k()) {
    throw UsageError("estimate: got " + std::to_string(sketch_bits.size()) +
                     " sketch bits, plan has k=" + std::to_string(plan.k()));
  }
  return decode(plan.post, sketch_bits);
}

// Convenience: estimate(plan, sketch_apply(plan.matrix, x)).
inline double estimate_at(const SketchPlan& plan, const BitVector& x) {
  return estimate(plan, sketch_apply(plan.matrix, x));
}

// Rows are appended component by component; each component gets a RowSpan.
class PlanAssembler {
 public:
  explicit PlanAssembler(std::size_t n) : matrix_(n) {}

  std::size_t n() const { return matrix_.n(); }
  std::size_t k() const { return matrix_.k(); }

  RowSpan begin_span() const { return RowSpan{matrix_.k(), 0}; }
  void add_row(BitVector row) { matrix_.add_row(std::move(row)); }
  RowSpan close(RowSpan span) const {
    span.size = matrix_.k() - span.begin;
    return span;
  }

  SketchPlan finish(PostProcessor post, std::uint64_t seed, SketchMeta meta) && {
    SketchPlan plan;
    meta.size_bits = matrix_.k();
    plan.matrix = std::move(matrix_);
    plan.post = std::move(post);
    plan.seed = seed;
    plan.meta = std::move(meta);
    return plan;
  }

 private:
  ParityMatrix matrix_;
};

}  // namespace f2sketch

#endif  // F2SKETCH_PLAN_HPP_
