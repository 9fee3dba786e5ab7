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

// Valuation functions over F2^n: symbolic specifications, exact evaluators
// and brute-force oracles.

#ifndef F2SKETCH_VALUATIONS_HPP_
#define F2SKETCH_VALUATIONS_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"

namespace f2sketch {

// f(x) = sum_i w_i x_i.
struct Additive {
  std::vector<double> w;
};

// f(x) = min(b, sum_i w_i x_i).
struct BudgetAdditive {
  double budget = 0.0;
  std::vector<double> w;
};

// hs(x) = min(alpha, (2 alpha / n) |x|); budget-additive with w_i = 2 alpha/n.
struct HockeyStick {
  std::size_t n = 0;
  double alpha = 1.0;
};

// f(x) = sum of universe weights over the union of the sets A_j with x_j = 1.
// element_masks[i] is T_i = {j : i in A_j}, precomputed by make_coverage.
struct Coverage {
  std::vector<double> universe_weights;
  std::vector<std::vector<std::size_t>> sets;
  std::vector<BitVector> element_masks;
};

// f(x) = sgn(-theta + sum_i w_i x_i) with sgn(y) = [y >= 0]; `margin` is the
// claimed m <= min_x |-theta + sum_i w_i x_i|.
struct Ltf {
  double theta = 0.0;
  double margin = 0.0;
  std::vector<double> w;
};

struct OrTerm {
  double weight = 0.0;
  std::vector<std::size_t> indices;
};

// f(x) = sgn(-theta + sum_t weight_t * OR_{i in indices_t} x_i).
struct LtfOr {
  std::size_t n = 0;
  double theta = 0.0;
  double margin = 0.0;
  std::vector<OrTerm> terms;
};

// Rank-2 matroid given by a partition of [n] into cliques: a pair is
// independent iff its elements lie in different cliques.
struct Rank2Matroid {
  std::vector<std::vector<std::size_t>> cliques;
  std::vector<std::size_t> clique_of;  // coordinate -> clique id
};

// Graphic matroid on the edge set; coordinate j is edge j.
struct GraphicMatroid {
  std::size_t vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

// Explicit truth table, values[x] with x encoded as an integer.
struct Table {
  std::size_t n = 0;
  std::vector<double> values;
};

struct FunctionSpec {
  std::variant<Additive, BudgetAdditive, HockeyStick, Coverage, Ltf, LtfOr,
               Rank2Matroid, GraphicMatroid, Table>
      params;
  // Matroid ranks are divided by the full rank so values lie in [0, 1].
  bool scaled = false;

  std::size_t arity() const;
  std::string kind() const;
};

// ---------------------------------------------------------------------------
// Construction with validation.

inline FunctionSpec make_additive(std::vector<double> w) {
  for (double v : w) {
    if (!std::isfinite(v)) throw UsageError("additive weights must be finite");
  }
  return FunctionSpec{Additive{std::move(w)}};
}

inline FunctionSpec make_budget_additive(double budget, std::vector<double> w) {
  for (double v : w) {
    if (!std::isfinite(v)) throw UsageError("additive weights must be finite");
  }
  return FunctionSpec{BudgetAdditive{budget, std::move(w)}};
}

inline FunctionSpec make_hockey_stick(std::size_t n, double alpha) {
  if (n == 0) throw UsageError("hockey stick requires n >= 1");
  return FunctionSpec{HockeyStick{n, alpha}};
}

inline FunctionSpec make_coverage(std::vector<double> universe_weights,
                                  std::vector<std::vector<std::size_t>> sets) {
  const std::size_t m = universe_weights.size();
  const std::size_t n = sets.size();
  for (double w : universe_weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw UsageError("coverage universe weights must be nonnegative");
    }
  }
  Coverage c;
  c.element_masks.assign(m, BitVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t e : sets[j]) {
      if (e >= m) throw UsageError("coverage set refers to unknown element");
      c.element_masks[e].set(j, true);
    }
  }
  c.universe_weights = std::move(universe_weights);
  c.sets = std::move(sets);
  return FunctionSpec{std::move(c)};
}

// True iff the universe weights sum to at most 1, the case with
// spectral norm at most 2.
inline bool coverage_norm_bound_eligible(const Coverage& c) {
  const double total =
      std::accumulate(c.universe_weights.begin(), c.universe_weights.end(), 0.0);
  return total <= 1.0 + 1e-12;
}

inline FunctionSpec make_ltf(double theta, double margin, std::vector<double> w) {
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw UsageError("LTF weights must be finite and nonnegative");
    }
  }
  if (!std::isfinite(theta) || !std::isfinite(margin) || margin < 0.0) {
    throw UsageError("LTF theta must be finite and margin nonnegative");
  }
  return FunctionSpec{Ltf{theta, margin, std::move(w)}};
}

inline FunctionSpec make_ltf_or(std::size_t n, double theta, double margin,
                                std::vector<OrTerm> terms) {
  for (const auto& t : terms) {
    if (!(t.weight >= 0.0) || !std::isfinite(t.weight)) {
      throw UsageError("LTF-of-OR term weights must be nonnegative");
    }
    for (std::size_t i : t.indices) {
      if (i >= n) throw UsageError("LTF-of-OR term index out of range");
    }
  }
  return FunctionSpec{LtfOr{n, theta, margin, std::move(terms)}};
}

inline FunctionSpec make_rank2(std::size_t n,
                               std::vector<std::vector<std::size_t>> cliques) {
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(n, kUnset);
  for (std::size_t c = 0; c < cliques.size(); ++c) {
    if (cliques[c].empty()) throw ValidationError("rank-2 partition has an empty clique");
    for (std::size_t i : cliques[c]) {
      if (i >= n) throw ValidationError("rank-2 clique index out of range");
      if (owner[i] != kUnset) {
        throw ValidationError("rank-2 cliques overlap at " + std::to_string(i));
      }
      owner[i] = c;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (owner[i] == kUnset) {
      throw ValidationError("rank-2 cliques do not cover coordinate " +
                            std::to_string(i));
    }
  }
  return FunctionSpec{Rank2Matroid{std::move(cliques), std::move(owner)}};
}

inline FunctionSpec make_graphic(std::size_t vertices,
                                 std::vector<std::pair<std::size_t, std::size_t>> edges) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& [u, v] : edges) {
    if (u >= vertices || v >= vertices) throw UsageError("edge endpoint out of range");
    if (!seen.insert(std::minmax(u, v)).second) {
      throw UsageError("graphic matroid edges must be distinct");
    }
  }
  return FunctionSpec{GraphicMatroid{vertices, std::move(edges)}};
}

inline FunctionSpec make_table(std::vector<double> values) {
  if (values.empty() || !std::has_single_bit(values.size())) {
    throw UsageError("table length must be a power of two");
  }
  const auto n = static_cast<std::size_t>(std::countr_zero(values.size()));
  return FunctionSpec{Table{n, std::move(values)}};
}

// ---------------------------------------------------------------------------
// Matroid rank.

namespace internal {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace internal

// 0 if x = 0; 2 if x touches two different cliques; 1 otherwise.
inline int rank2_eval(const Rank2Matroid& m, const BitVector& x) {
  if (x.size() != m.clique_of.size()) throw UsageError("rank2_eval: arity mismatch");
  std::size_t first = std::numeric_limits<std::size_t>::max();
  for (std::size_t i : x.ones()) {
    const std::size_t c = m.clique_of[i];
    if (first == std::numeric_limits<std::size_t>::max()) {
      first = c;
    } else if (c != first) {
      return 2;
    }
  }
  return first == std::numeric_limits<std::size_t>::max() ? 0 : 1;
}

// (#vertices touched) - (#components among touched vertices), which equals
// the number of successful unions over the selected edges.
inline int graphic_rank_eval(const GraphicMatroid& g, const BitVector& x) {
  if (x.size() != g.edges.size()) {
    throw UsageError("graphic_rank_eval: arity mismatch");
  }
  internal::DisjointSets dsu(g.vertices);
  int rank = 0;
  for (std::size_t j : x.ones()) {
    if (dsu.unite(g.edges[j].first, g.edges[j].second)) ++rank;
  }
  return rank;
}

inline int graphic_full_rank(const GraphicMatroid& g) {
  BitVector all(g.edges.size());
  for (std::size_t j = 0; j < g.edges.size(); ++j) all.set(j, true);
  return graphic_rank_eval(g, all);
}

struct MatroidOracle {
  std::size_t n = 0;
  // Must be re-entrant.
  std::function<bool(const BitVector&)> independent;
};

inline MatroidOracle uniform_matroid_oracle(std::size_t n, std::size_t k) {
  return {n, [k](const BitVector& s) { return s.popcount() <= k; }};
}

inline MatroidOracle rank2_oracle(const Rank2Matroid& m) {
  return {m.clique_of.size(), [m](const BitVector& s) {
            const auto ones = s.ones();
            if (ones.size() > 2) return false;
            if (ones.size() < 2) return true;
            return m.clique_of[ones[0]] != m.clique_of[ones[1]];
          }};
}

// Independent iff the selected edges form a forest.
inline MatroidOracle graphic_oracle(const GraphicMatroid& g) {
  return {g.edges.size(), [g](const BitVector& s) {
            internal::DisjointSets dsu(g.vertices);
            for (std::size_t j : s.ones()) {
              if (!dsu.unite(g.edges[j].first, g.edges[j].second)) return false;
            }
            return true;
          }};
}

// Greedy rank via the independence oracle. The final independent set is
// spot-checked for downward closure (every one-element deletion and the empty
// set must be independent).
inline int matroid_rank_bruteforce(const MatroidOracle& oracle, const BitVector& x) {
  if (oracle.n > 24) throw CapacityError("matroid_rank_bruteforce requires n <= 24");
  if (x.size() != oracle.n) throw UsageError("matroid_rank_bruteforce: arity mismatch");
  BitVector current(oracle.n);
  if (!oracle.independent(current)) {
    throw ValidationError("oracle reports the empty set dependent");
  }
  int rank = 0;
  for (std::size_t i : x.ones()) {
    current.set(i, true);
    if (oracle.independent(current)) {
      ++rank;
    } else {
      current.set(i, false);
    }
  }
  for (std::size_t i : current.ones()) {
    BitVector smaller = current;
    smaller.set(i, false);
    if (!oracle.independent(smaller)) {
      throw ValidationError("oracle is not downward closed", smaller.to_string());
    }
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Evaluation.

inline bool or_term_hit(const OrTerm& t, const BitVector& x) {
  return std::any_of(t.indices.begin(), t.indices.end(),
                     [&](std::size_t i) { return x.get(i); });
}

inline double heaviside(double y) { return y >= 0.0 ? 1.0 : 0.0; }

inline std::size_t FunctionSpec::arity() const {
  struct {
    std::size_t operator()(const Additive& f) const { return f.w.size(); }
    std::size_t operator()(const BudgetAdditive& f) const { return f.w.size(); }
    std::size_t operator()(const HockeyStick& f) const { return f.n; }
    std::size_t operator()(const Coverage& f) const { return f.sets.size(); }
    std::size_t operator()(const Ltf& f) const { return f.w.size(); }
    std::size_t operator()(const LtfOr& f) const { return f.n; }
    std::size_t operator()(const Rank2Matroid& f) const { return f.clique_of.size(); }
    std::size_t operator()(const GraphicMatroid& f) const { return f.edges.size(); }
    std::size_t operator()(const Table& f) const { return f.n; }
  } visitor;
  return std::visit(visitor, params);
}

inline std::string FunctionSpec::kind() const {
  static constexpr const char* kNames[] = {
      "additive", "budget_additive", "hockey_stick", "coverage", "ltf",
      "ltf_or",   "rank2",           "graphic",      "table"};
  return kNames[params.index()];
}

inline double eval(const FunctionSpec& spec, const BitVector& x) {
  if (x.size() != spec.arity()) {
    throw UsageError("eval: input has " + std::to_string(x.size()) +
                     " coordinates, function has " + std::to_string(spec.arity()));
  }
  struct Visitor {
    const FunctionSpec& spec;
    const BitVector& x;
    double dot(const std::vector<double>& w) const {
      double s = 0.0;
      for (std::size_t i : x.ones()) s += w[i];
      return s;
    }
    double operator()(const Additive& f) const { return dot(f.w); }
    double operator()(const BudgetAdditive& f) const {
      return std::min(f.budget, dot(f.w));
    }
    double operator()(const HockeyStick& f) const {
      return std::min(f.alpha, 2.0 * f.alpha / static_cast<double>(f.n) *
                                   static_cast<double>(x.popcount()));
    }
    double operator()(const Coverage& f) const {
      double s = 0.0;
      for (std::size_t e = 0; e < f.element_masks.size(); ++e) {
        if (!(f.element_masks[e] & x).none()) s += f.universe_weights[e];
      }
      return s;
    }
    double operator()(const Ltf& f) const { return heaviside(dot(f.w) - f.theta); }
    double operator()(const LtfOr& f) const {
      double s = 0.0;
      for (const auto& t : f.terms) {
        if (or_term_hit(t, x)) s += t.weight;
      }
      return heaviside(s - f.theta);
    }
    double operator()(const Rank2Matroid& f) const {
      const int r = rank2_eval(f, x);
      return spec.scaled ? r / 2.0 : r;
    }
    double operator()(const GraphicMatroid& f) const {
      const int r = graphic_rank_eval(f, x);
      if (!spec.scaled) return r;
      const int full = graphic_full_rank(f);
      return full == 0 ? 0.0 : static_cast<double>(r) / full;
    }
    double operator()(const Table& f) const { return f.values[x.to_index()]; }
  };
  return std::visit(Visitor{spec, x}, spec.params);
}

// All 2^n values, indexed by x as an integer (n <= 24).
inline std::vector<double> truth_table(const FunctionSpec& spec) {
  const std::size_t n = spec.arity();
  if (n > 24) throw CapacityError("truth_table requires n <= 24");
  std::vector<double> values(std::size_t{1} << n);
  for (std::size_t x = 0; x < values.size(); ++x) {
    values[x] = eval(spec, BitVector::from_index(n, x));
  }
  return values;
}

// ---------------------------------------------------------------------------
// LTF margin validation.

struct MarginReport {
  double claimed_margin = 0.0;
  double true_margin = 0.0;   // NaN when trusted
  bool valid = true;
  bool trusted = false;       // n too large for exhaustive checking
  std::optional<BitVector> witness;  // an x attaining the true margin
};

constexpr std::size_t kMaxMarginCheckBits = 24;

// min_x |-theta + w.x| by meet-in-the-middle over the two halves of [n].
inline MarginReport validate_ltf(const Ltf& f) {
  MarginReport rep;
  rep.claimed_margin = f.margin;
  const std::size_t n = f.w.size();
  if (n > kMaxMarginCheckBits) {
    rep.trusted = true;
    rep.true_margin = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }
  const std::size_t lo_bits = n / 2;
  const std::size_t hi_bits = n - lo_bits;
  const auto subset_sums = [&](std::size_t offset, std::size_t bits) {
    std::vector<double> sums(std::size_t{1} << bits, 0.0);
    for (std::size_t s = 1; s < sums.size(); ++s) {
      const auto top = static_cast<std::size_t>(std::bit_width(s) - 1);
      sums[s] = sums[s ^ (std::size_t{1} << top)] + f.w[offset + top];
    }
    return sums;
  };
  const auto lo = subset_sums(0, lo_bits);
  const auto hi = subset_sums(lo_bits, hi_bits);
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t arg = 0;
  for (std::size_t h = 0; h < hi.size(); ++h) {
    for (std::size_t l = 0; l < lo.size(); ++l) {
      const double gap = std::abs(lo[l] + hi[h] - f.theta);
      if (gap < best) {
        best = gap;
        arg = (static_cast<std::uint64_t>(h) << lo_bits) | l;
      }
    }
  }
  rep.true_margin = best;
  rep.witness = BitVector::from_index(n, arg);
  rep.valid = f.margin <= best + 1e-12 * std::max(1.0, std::abs(f.theta));
  return rep;
}

}  // namespace f2sketch

#endif  // F2SKETCH_VALUATIONS_HPP_
