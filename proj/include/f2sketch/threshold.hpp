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

// Sketches for threshold-type functions: gap Hamming tests, zero tests,
// linear threshold functions (LTFs), thresholds of disjunctions, and the
// matroid rank sketches built from them.

#ifndef F2SKETCH_THRESHOLD_HPP_
#define F2SKETCH_THRESHOLD_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/random.hpp"
#include "f2sketch/valuations.hpp"

namespace f2sketch {

// ceil(x), treating values within a relative 1e-9 of an integer as that
// integer (log2(8) = 3, 2.5/0.5 = 5).
inline std::size_t tolerant_ceil(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) {
    return static_cast<std::size_t>(std::max(0.0, r));
  }
  return static_cast<std::size_t>(std::max(0.0, std::ceil(x)));
}

inline void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0, 1)");
}

// ---------------------------------------------------------------------------
// Gap Hamming test: HAM_{d|2d}.

struct HamGapParams {
  double p = 0.0;
  double beta_d = 0.0;
  double beta_2d = 0.0;
  double tau = 0.0;
  std::size_t rows = 0;
};

// Probability that a row with inclusion probability p has parity 1 on an
// input of Hamming weight k.
inline double ham_gap_beta(double p, std::size_t k) {
  return (1.0 - std::pow(1.0 - 2.0 * p, static_cast<double>(k))) / 2.0;
}

// p = 1/(2d), except p = 1/4 at d = 1 where 1/(2d) = 1/2 makes every nonzero
// input look identical.
inline HamGapParams ham_gap_params(std::size_t d, double delta) {
  if (d == 0) throw UsageError("gap Hamming test needs d >= 1");
  check_delta(delta);
  HamGapParams out;
  out.p = d == 1 ? 0.25 : 1.0 / (2.0 * static_cast<double>(d));
  out.beta_d = ham_gap_beta(out.p, d);
  out.beta_2d = ham_gap_beta(out.p, 2 * d);
  out.tau = (out.beta_d + out.beta_2d) / 2.0;
  const double gap = out.beta_2d - out.beta_d;
  out.rows = tolerant_ceil(2.0 * std::log(2.0 / delta) / (gap * gap));
  return out;
}

namespace internal {

inline std::vector<std::size_t> all_coordinates(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

inline BitVector uniform_row(std::size_t n, const std::vector<std::size_t>& coords,
                             SplitMix64& rng) {
  BitVector row(n);
  for (std::size_t j = 0; j < coords.size(); j += 64) {
    const std::uint64_t draw = rng();
    const std::size_t take = std::min<std::size_t>(64, coords.size() - j);
    for (std::size_t b = 0; b < take; ++b) {
      if ((draw >> b) & 1U) row.set(coords[j + b], true);
    }
  }
  return row;
}

inline HamGapPost append_ham_gap(PlanAssembler& a, const std::vector<std::size_t>& coords,
                                 const HamGapParams& params, SplitMix64& rng) {
  const BernoulliThreshold include(params.p);
  RowSpan span = a.begin_span();
  for (std::size_t r = 0; r < params.rows; ++r) {
    BitVector row(a.n());
    for (std::size_t i : coords) {
      if (include(rng)) row.set(i, true);
    }
    a.add_row(std::move(row));
  }
  return HamGapPost{a.close(span), params.tau};
}

inline ZeroTestPost append_zero_test(PlanAssembler& a, const std::vector<std::size_t>& coords,
                                     std::size_t rows, SplitMix64& rng) {
  RowSpan span = a.begin_span();
  for (std::size_t r = 0; r < rows; ++r) a.add_row(uniform_row(a.n(), coords, rng));
  return ZeroTestPost{a.close(span)};
}

}  // namespace internal

// Decides weight <= d (output 0) versus weight >= 2d (output 1).
inline SketchPlan build_ham_gap_sketch(std::size_t n, std::size_t d, double delta,
                                       std::uint64_t seed) {
  if (d < 1 || 2 * d > n) throw UsageError("gap Hamming test needs 1 <= d and 2d <= n");
  const auto params = ham_gap_params(d, delta);
  PlanAssembler a(n);
  SplitMix64 rng(derive_seed(seed, 0x4a));
  auto post = internal::append_ham_gap(a, internal::all_coordinates(n), params, rng);
  SketchMeta meta;
  meta.builder = "ham_gap";
  meta.params = {{"n", n}, {"d", d}, {"delta", delta}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;
  meta.constants = {{"p", params.p},         {"beta_d", params.beta_d},
                    {"beta_2d", params.beta_2d}, {"tau", params.tau},
                    {"rows", params.rows}};
  return std::move(a).finish(PostProcessor{post}, seed, std::move(meta));
}

inline std::size_t zero_test_rows(double delta) {
  check_delta(delta);
  return tolerant_ceil(std::log2(1.0 / delta));
}

// Output 0 iff every row parity is 0. Never wrong on x = 0.
inline SketchPlan build_zero_test(std::size_t n, double delta, std::uint64_t seed) {
  const std::size_t rows = zero_test_rows(delta);
  PlanAssembler a(n);
  SplitMix64 rng(derive_seed(seed, 0x20));
  auto post = internal::append_zero_test(a, internal::all_coordinates(n), rows, rng);
  SketchMeta meta;
  meta.builder = "zero_test";
  meta.params = {{"n", n}, {"delta", delta}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;
  meta.constants = {{"rows", rows}};
  return std::move(a).finish(PostProcessor{post}, seed, std::move(meta));
}

// ---------------------------------------------------------------------------
// Weight preprocessing.

// Weights below 2m never change the sign.
inline Ltf prune_weights(const Ltf& f) {
  Ltf out = f;
  for (double& w : out.w) {
    if (w < 2.0 * f.margin) w = 0.0;
  }
  return out;
}

struct WeightRounding {
  Ltf ltf;                           // rounded weights, margin (4/5) m
  std::vector<double> weight_set;    // W = {2m (1+eps)^i : i = 0..t}
  std::vector<bool> trigger;         // w_i >= 2 theta before clamping
  std::vector<std::size_t> level;    // index into W per coordinate (unused if w = 0)
  double epsilon = 0.0;
  std::size_t t = 0;
};

// The geometric weight grid shared by LTF and LTF-of-OR rounding.
struct WeightGrid {
  double base = 0.0;  // 2m
  double ratio = 1.0; // 1 + eps
  double epsilon = 0.0;
  std::size_t t = 0;
  std::vector<double> values;

  WeightGrid(double theta, double margin) {
    base = 2.0 * margin;
    epsilon = margin / (10.0 * theta);
    ratio = 1.0 + epsilon;
    t = tolerant_ceil(std::log(theta / margin) / std::log1p(epsilon));
    values.reserve(t + 1);
    for (std::size_t i = 0; i <= t; ++i) {
      values.push_back(base * std::pow(ratio, static_cast<double>(i)));
    }
  }

  // Largest level whose value does not exceed w (w >= base).
  std::size_t level_of(double w) const {
    auto it = std::upper_bound(values.begin(), values.end(), w);
    if (it == values.begin()) return 0;
    return static_cast<std::size_t>(it - values.begin()) - 1;
  }
};

inline void check_theta_margin(double theta, double margin) {
  if (!(theta > 0.0) || !(margin > 0.0) || !std::isfinite(theta) || !std::isfinite(margin)) {
    throw UsageError("theta and margin must be positive and finite");
  }
  if (margin > theta) {
    throw ValidationError("claimed margin exceeds theta; x = 0 violates it", "0");
  }
}

// Clamps weights >= 2 theta to 2 theta (marking them as triggers), then rounds
// each weight down into W with eps = m / (10 theta). Input must be pruned.
inline WeightRounding round_weights(const Ltf& f) {
  check_theta_margin(f.theta, f.margin);
  for (double w : f.w) {
    if (w != 0.0 && w < 2.0 * f.margin) {
      throw UsageError("round_weights: input is not pruned (weight below 2m)");
    }
  }
  const WeightGrid grid(f.theta, f.margin);
  WeightRounding out;
  out.ltf = f;
  out.ltf.margin = 0.8 * f.margin;
  out.weight_set = grid.values;
  out.epsilon = grid.epsilon;
  out.t = grid.t;
  out.trigger.assign(f.w.size(), false);
  out.level.assign(f.w.size(), 0);
  for (std::size_t i = 0; i < f.w.size(); ++i) {
    double w = f.w[i];
    if (w == 0.0) continue;
    if (w >= 2.0 * f.theta) {
      out.trigger[i] = true;
      w = 2.0 * f.theta;
    }
    out.level[i] = grid.level_of(w);
    out.ltf.w[i] = grid.values[out.level[i]];
  }
  return out;
}

// ---------------------------------------------------------------------------
// LTF sketch.

enum class LtfMode { kDirect, kCompact };

inline const char* to_string(LtfMode m) {
  return m == LtfMode::kDirect ? "direct" : "compact";
}

struct LtfSketchOptions {
  LtfMode mode = LtfMode::kDirect;
  double ratio_cap = 64.0;                     // largest accepted theta / m
  std::size_t compact_table_cap = 5'000'000;   // decode index entries
};

namespace internal {

// sum_{j <= r} C(s, j), saturating at 2^62.
inline double binomial_prefix(std::size_t s, std::size_t r) {
  double total = 0.0;
  double term = 1.0;
  for (std::size_t j = 0; j <= r && j <= s; ++j) {
    if (j > 0) term = term * static_cast<double>(s - j + 1) / static_cast<double>(j);
    total += term;
    if (total > 0x1.0p62) return 0x1.0p62;
  }
  return total;
}

inline void check_ratio(double theta, double margin, double cap) {
  if (theta / margin > cap) {
    throw CapacityError("theta/m = " + std::to_string(theta / margin) +
                        " exceeds the cap " + std::to_string(cap));
  }
}

}  // namespace internal

// Pipeline: prune, round, then
//   A: gap Hamming test on the significant coordinates with d = ceil(theta/2m);
//   B: per rounded weight class, hash coordinates into M buckets; each nonempty
//      (class, bucket) slot contributes the parity y of its coordinates;
//   T: zero test over trigger coordinates (w >= 2 theta).
// Decode: A heavy or T nonzero gives 1; else sgn(-theta + sum w * y). In
// compact mode the slot parities are only available through t <= 64 random
// combinations and y is matched against candidates of weight <= d - 1.
inline SketchPlan build_ltf_sketch(const Ltf& spec, double delta, std::uint64_t seed,
                                   const LtfSketchOptions& options = {}) {
  check_delta(delta);
  check_theta_margin(spec.theta, spec.margin);
  internal::check_ratio(spec.theta, spec.margin, options.ratio_cap);
  const std::size_t n = spec.w.size();
  const double ratio = spec.theta / spec.margin;
  const auto rounded = round_weights(prune_weights(spec));

  std::vector<std::size_t> significant;
  std::vector<std::size_t> triggers;
  for (std::size_t i = 0; i < n; ++i) {
    if (rounded.ltf.w[i] == 0.0) continue;
    (rounded.trigger[i] ? triggers : significant).push_back(i);
  }
  const bool compact = options.mode == LtfMode::kCompact;
  const std::size_t components = (significant.empty() ? 0 : (compact ? 3 : 2)) +
                                 (triggers.empty() ? 0 : 1);

  SketchMeta meta;
  meta.builder = "ltf";
  meta.params = {{"theta", spec.theta}, {"margin", spec.margin}, {"delta", delta},
                 {"mode", to_string(options.mode)}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;

  PlanAssembler a(n);
  if (components == 0) {
    meta.constants = {{"constant", 0.0}};
    return std::move(a).finish(PostProcessor{ConstantPost{0.0}}, seed, std::move(meta));
  }
  const double delta_each = delta / static_cast<double>(components);
  const std::size_t d = std::max<std::size_t>(1, tolerant_ceil(ratio / 2.0));

  HamGapPost heavy;
  nlohmann::json constants = {{"d", d},
                              {"delta_each", delta_each},
                              {"epsilon_round", rounded.epsilon},
                              {"weight_set_size", rounded.weight_set.size()},
                              {"significant", significant.size()},
                              {"triggers", triggers.size()}};
  if (!significant.empty()) {
    const auto hp = ham_gap_params(d, delta_each);
    SplitMix64 rng(derive_seed(seed, 0xA));
    heavy = internal::append_ham_gap(a, significant, hp, rng);
    constants["rows_heavy"] = hp.rows;
    constants["tau"] = hp.tau;
    constants["p"] = hp.p;
  }

  RowSpan trigger_span = a.begin_span();
  if (!triggers.empty()) {
    SplitMix64 rng(derive_seed(seed, 0x7));
    trigger_span =
        internal::append_zero_test(a, triggers, zero_test_rows(delta_each), rng).rows;
  }
  constants["rows_trigger"] = trigger_span.size;

  // Slots: (level, bucket) -> coordinates. Coordinates of different classes
  // never share a slot.
  const auto buckets = static_cast<std::uint64_t>(std::max(
      tolerant_ceil(5.0 * ratio * ratio),
      tolerant_ceil(static_cast<double>((2 * d - 1) * (2 * d - 1)) / delta_each)));
  std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::size_t>> slots;
  const std::uint64_t hash_key = derive_seed(seed, 0xB);
  for (std::size_t i : significant) {
    slots[{rounded.level[i], hash_to_bucket(hash_key, i, buckets)}].push_back(i);
  }
  std::vector<double> slot_weights;
  std::vector<BitVector> slot_rows;
  std::size_t classes = 0;
  std::size_t last_level = rounded.weight_set.size();
  for (const auto& [key, coords] : slots) {
    if (key.first != last_level) {
      ++classes;
      last_level = key.first;
    }
    slot_weights.push_back(rounded.weight_set[key.first]);
    slot_rows.push_back(BitVector::from_indices(n, coords));
  }
  constants["buckets_per_class"] = buckets;
  constants["classes_used"] = classes;
  constants["slots"] = slot_rows.size();

  if (!compact) {
    RowSpan span = a.begin_span();
    for (auto& r : slot_rows) a.add_row(std::move(r));
    span = a.close(span);
    meta.constants = std::move(constants);
    LtfDirectPost post{heavy, trigger_span, span, std::move(slot_weights), spec.theta};
    return std::move(a).finish(PostProcessor{std::move(post)}, seed, std::move(meta));
  }

  LtfCompactPost post;
  post.heavy = heavy;
  post.trigger = trigger_span;
  post.theta = spec.theta;
  post.max_weight = d - 1;
  const double candidates = internal::binomial_prefix(slot_rows.size(), post.max_weight);
  const std::size_t checks = tolerant_ceil(std::log2(candidates / delta_each));
  if (checks > 64) {
    throw CapacityError("compact LTF decode needs " + std::to_string(checks) +
                        " check bits; at most 64 are supported");
  }
  const double table =
      internal::binomial_prefix(slot_rows.size(), (post.max_weight + 1) / 2);
  if (table > static_cast<double>(options.compact_table_cap)) {
    throw CapacityError("compact LTF decode index would hold " +
                        std::to_string(static_cast<std::uint64_t>(table)) +
                        " entries; cap is " + std::to_string(options.compact_table_cap));
  }
  SplitMix64 rng(derive_seed(seed, 0xC));
  const std::uint64_t sig_mask =
      checks >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << checks) - 1;
  post.signatures.reserve(slot_rows.size());
  for (std::size_t s = 0; s < slot_rows.size(); ++s) post.signatures.push_back(rng() & sig_mask);
  RowSpan span = a.begin_span();
  for (std::size_t c = 0; c < checks; ++c) {
    BitVector row(n);
    for (std::size_t s = 0; s < slot_rows.size(); ++s) {
      if ((post.signatures[s] >> c) & 1U) row ^= slot_rows[s];
    }
    a.add_row(std::move(row));
  }
  post.checks = a.close(span);
  post.slot_weights = std::move(slot_weights);
  build_compact_index(post);
  constants["check_rows"] = checks;
  constants["index_entries"] = post.index->half.size();
  meta.constants = std::move(constants);
  return std::move(a).finish(PostProcessor{std::move(post)}, seed, std::move(meta));
}

// ---------------------------------------------------------------------------
// Threshold of disjunctions.

namespace internal {

struct OrCountBuild {
  OrCountPost post;
  nlohmann::json constants;
  bool constant = false;
};

// Appends the bucketed zero tests for sgn(-theta + sum_t w_t OR_t(x)).
// Terms are pruned (w < 2m), clamped at 2 theta and rounded into W; terms of
// one class are hashed into M = ceil(50 (theta/m)^2) buckets, and every bucket
// of every used class gets `rows` random parities over the union of its
// terms, so k does not depend on n.
inline OrCountBuild append_ltf_or(PlanAssembler& a, const LtfOr& spec, double delta,
                                  std::uint64_t seed) {
  const double ratio = spec.theta / spec.margin;
  const WeightGrid grid(spec.theta, spec.margin);
  std::map<std::size_t, std::vector<const OrTerm*>> by_level;
  for (const auto& t : spec.terms) {
    if (t.weight < 2.0 * spec.margin || t.indices.empty()) continue;
    by_level[grid.level_of(std::min(t.weight, 2.0 * spec.theta))].push_back(&t);
  }
  OrCountBuild out;
  out.post.theta = spec.theta;
  out.post.needed_count = tolerant_ceil(ratio);
  const std::size_t per_class = tolerant_ceil(50.0 * ratio * ratio);
  const std::size_t total_buckets = per_class * by_level.size();
  const std::size_t rows =
      total_buckets == 0
          ? 0
          : tolerant_ceil(std::log2(2.0 * static_cast<double>(total_buckets) / delta));
  out.constants = {{"buckets_per_class", per_class},
                   {"classes_used", by_level.size()},
                   {"buckets", total_buckets},
                   {"rows_per_bucket", rows},
                   {"needed_count", out.post.needed_count},
                   {"epsilon_round", grid.epsilon},
                   {"weight_set_size", grid.values.size()}};
  out.constant = total_buckets == 0;
  out.post.rows_per_bucket = rows;
  RowSpan span = a.begin_span();
  const std::uint64_t hash_key = derive_seed(seed, 0xB);
  SplitMix64 rng(derive_seed(seed, 0xD));
  for (const auto& [level, terms] : by_level) {
    std::vector<std::vector<std::size_t>> unions(per_class);
    for (std::size_t t = 0; t < terms.size(); ++t) {
      // Hash on the term's position in the original list so the assignment
      // does not depend on which other terms were pruned.
      const auto id = static_cast<std::uint64_t>(terms[t] - spec.terms.data());
      auto& u = unions[hash_to_bucket(hash_key, id, per_class)];
      u.insert(u.end(), terms[t]->indices.begin(), terms[t]->indices.end());
    }
    for (auto& u : unions) {
      std::sort(u.begin(), u.end());
      u.erase(std::unique(u.begin(), u.end()), u.end());
      for (std::size_t r = 0; r < rows; ++r) a.add_row(uniform_row(a.n(), u, rng));
      out.post.bucket_weights.push_back(grid.values[level]);
    }
  }
  out.post.rows = a.close(span);
  return out;
}

}  // namespace internal

inline SketchPlan build_ltf_or_sketch(const LtfOr& spec, double delta, std::uint64_t seed,
                                      double ratio_cap = 64.0) {
  check_delta(delta);
  check_theta_margin(spec.theta, spec.margin);
  internal::check_ratio(spec.theta, spec.margin, ratio_cap);
  PlanAssembler a(spec.n);
  auto built = internal::append_ltf_or(a, spec, delta, seed);
  SketchMeta meta;
  meta.builder = "ltf_or";
  meta.params = {{"theta", spec.theta}, {"margin", spec.margin}, {"delta", delta},
                 {"terms", spec.terms.size()}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;
  meta.constants = std::move(built.constants);
  if (built.constant) {
    return std::move(a).finish(PostProcessor{ConstantPost{0.0}}, seed, std::move(meta));
  }
  return std::move(a).finish(PostProcessor{std::move(built.post)}, seed, std::move(meta));
}

// Output 1 iff more than d of the sets are hit, i.e. the complement of
// HAM_{<=d} applied to the sets' disjunctions.
inline SketchPlan build_ham_threshold_of_ors(std::size_t n, std::size_t d,
                                             const std::vector<std::vector<std::size_t>>& sets,
                                             double delta, std::uint64_t seed) {
  if (d < 1) throw UsageError("Hamming threshold of ORs needs d >= 1");
  std::vector<OrTerm> terms;
  terms.reserve(sets.size());
  for (const auto& s : sets) terms.push_back({1.0, s});
  const auto spec = make_ltf_or(n, static_cast<double>(d) + 0.5, 0.5, std::move(terms));
  auto plan = build_ltf_or_sketch(std::get<LtfOr>(spec.params), delta, seed);
  plan.meta.builder = "ham_threshold_of_ors";
  plan.meta.params["d"] = d;
  return plan;
}

// ---------------------------------------------------------------------------
// Matroid rank sketches.

// Zero test (delta/2) plus "at least two cliques hit" via the threshold of
// ORs with theta = 3/2, m = 1/2 (delta/2). Decode: zero -> 0, else 2 if two
// cliques are detected, else 1.
inline SketchPlan build_rank2_sketch(const Rank2Matroid& spec, double delta,
                                     std::uint64_t seed) {
  check_delta(delta);
  const std::size_t n = spec.clique_of.size();
  PlanAssembler a(n);
  SplitMix64 rng(derive_seed(seed, 0x20));
  const std::size_t zero_rows = zero_test_rows(delta / 2.0);
  auto zero = internal::append_zero_test(a, internal::all_coordinates(n), zero_rows, rng);
  LtfOr pair{n, 1.5, 0.5, {}};
  for (const auto& c : spec.cliques) pair.terms.push_back({1.0, c});
  auto built = internal::append_ltf_or(a, pair, delta / 2.0, derive_seed(seed, 0x2));
  SketchMeta meta;
  meta.builder = "rank2";
  meta.params = {{"delta", delta}, {"cliques", spec.cliques.size()}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;
  meta.constants = std::move(built.constants);
  meta.constants["zero_test_rows"] = zero_rows;
  return std::move(a).finish(PostProcessor{Rank2Post{zero.rows, std::move(built.post)}},
                             seed, std::move(meta));
}

// Greedy decomposition of the edge set into spanning forests: each pass takes
// a maximal forest from the edges not yet assigned. Self-loops belong to no
// forest.
inline std::vector<std::vector<std::size_t>> forest_decomposition(const GraphicMatroid& g) {
  std::vector<std::size_t> remaining;
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    if (g.edges[j].first != g.edges[j].second) remaining.push_back(j);
  }
  std::vector<std::vector<std::size_t>> forests;
  while (!remaining.empty()) {
    internal::DisjointSets dsu(g.vertices);
    std::vector<std::size_t> forest;
    std::vector<std::size_t> rest;
    for (std::size_t j : remaining) {
      (dsu.unite(g.edges[j].first, g.edges[j].second) ? forest : rest).push_back(j);
    }
    forests.push_back(std::move(forest));
    remaining = std::move(rest);
  }
  return forests;
}

// The decomposition formula evaluated exactly: 1 iff at least r forests
// (r = rank of the whole edge set) contain a selected edge.
inline double graphic_formula_eval(const GraphicMatroid& g,
                                   const std::vector<std::vector<std::size_t>>& forests,
                                   const BitVector& x) {
  const int r = graphic_full_rank(g);
  int hit = 0;
  for (const auto& f : forests) {
    if (std::any_of(f.begin(), f.end(), [&](std::size_t j) { return x.get(j); })) ++hit;
  }
  return hit >= r ? 1.0 : 0.0;
}

// HAM_{>=r} over the forest disjunctions, via the threshold of ORs with
// theta = r - 1/2, m = 1/2. Output is the formula's 0/1 value.
inline SketchPlan build_graphic_sketch(const GraphicMatroid& spec, double delta,
                                       std::uint64_t seed, double ratio_cap = 64.0) {
  check_delta(delta);
  const auto forests = forest_decomposition(spec);
  const int r = graphic_full_rank(spec);
  SketchMeta meta;
  meta.builder = "graphic";
  meta.params = {{"delta", delta}, {"edges", spec.edges.size()}};
  meta.error_kind = "delta";
  meta.claimed_error = delta;
  if (r == 0) {
    meta.constants = {{"rank", 0}, {"forests", forests.size()}, {"constant", 1.0}};
    return std::move(PlanAssembler(spec.edges.size()))
        .finish(PostProcessor{ConstantPost{1.0}}, seed, std::move(meta));
  }
  LtfOr ham{spec.edges.size(), static_cast<double>(r) - 0.5, 0.5, {}};
  for (const auto& f : forests) ham.terms.push_back({1.0, f});
  internal::check_ratio(ham.theta, ham.margin, ratio_cap);
  PlanAssembler a(spec.edges.size());
  auto built = internal::append_ltf_or(a, ham, delta, seed);
  meta.constants = std::move(built.constants);
  meta.constants["rank"] = r;
  meta.constants["forests"] = forests.size();
  return std::move(a).finish(PostProcessor{std::move(built.post)}, seed, std::move(meta));
}

}  // namespace f2sketch

#endif  // F2SKETCH_THRESHOLD_HPP_
