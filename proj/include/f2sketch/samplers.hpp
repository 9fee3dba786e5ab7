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

// l1-sampling sketches. A sampler draws a character alpha with probability
// |f^(alpha)| / L (L = sum of |f^|) together with sign(f^(alpha)); the
// estimator averages sign * chi_alpha(x) * L over the drawn rows.

#ifndef F2SKETCH_SAMPLERS_HPP_
#define F2SKETCH_SAMPLERS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/fourier.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/random.hpp"
#include "f2sketch/valuations.hpp"

namespace f2sketch {

struct SignedCharacter {
  BitVector alpha;
  int sign = 1;
};

// One atom of a sampler's distribution: probability of drawing (alpha, sign).
struct SamplerAtom {
  BitVector alpha;
  int sign = 1;
  double probability = 0.0;
};

namespace internal {

// Draws an index with probability proportional to nonnegative weights.
class CumulativeTable {
 public:
  CumulativeTable() = default;
  explicit CumulativeTable(const std::vector<double>& weights) {
    cumulative_.reserve(weights.size());
    double acc = 0.0;
    for (double w : weights) {
      acc += w;
      cumulative_.push_back(acc);
    }
  }
  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  std::size_t draw(SplitMix64& rng) const {
    const double u = rng.uniform() * total();
    // upper_bound never lands on a zero-weight entry; only the rounding
    // fallback at the end needs to step back over them.
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    if (idx == cumulative_.size()) {
      idx = cumulative_.size() - 1;
      while (idx > 0 && weight(idx) == 0.0) --idx;
    }
    return idx;
  }

 private:
  double weight(std::size_t i) const {
    return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
  }
  std::vector<double> cumulative_;
};

}  // namespace internal

// f(x) = sum w_i x_i has f^(empty) = sum(w)/2 and f^({i}) = -w_i/2.
class AdditiveSampler {
 public:
  explicit AdditiveSampler(std::vector<double> w) : w_(std::move(w)) {
    double sum = 0.0;
    for (double v : w_) sum += v;
    std::vector<double> mass{std::abs(sum) / 2.0};
    for (double v : w_) mass.push_back(std::abs(v) / 2.0);
    empty_sign_ = sum >= 0.0 ? 1 : -1;
    table_ = internal::CumulativeTable(mass);
  }

  std::size_t n() const { return w_.size(); }
  double mass() const { return table_.total(); }
  const std::vector<double>& weights() const { return w_; }

  SignedCharacter sample(SplitMix64& rng) const {
    const std::size_t idx = table_.draw(rng);
    if (idx == 0) return {BitVector(n()), empty_sign_};
    BitVector alpha(n());
    alpha.set(idx - 1, true);
    return {std::move(alpha), w_[idx - 1] >= 0.0 ? -1 : 1};
  }

  std::vector<SamplerAtom> support() const {
    std::vector<SamplerAtom> atoms;
    const double total = mass();
    if (total == 0.0) return atoms;
    double sum = 0.0;
    for (double v : w_) sum += v;
    atoms.push_back({BitVector(n()), empty_sign_, std::abs(sum) / 2.0 / total});
    for (std::size_t i = 0; i < n(); ++i) {
      BitVector alpha(n());
      alpha.set(i, true);
      atoms.push_back({std::move(alpha), w_[i] >= 0.0 ? -1 : 1,
                       std::abs(w_[i]) / 2.0 / total});
    }
    return atoms;
  }

 private:
  std::vector<double> w_;
  int empty_sign_ = 1;
  internal::CumulativeTable table_;
};

// Coverage f(x) = sum_e w_e OR_{j in T_e}(x_j). With t = |T|, the OR over T
// has coefficient 1 - 2^-t at the empty set and -2^-t at every nonempty
// subset of T, so its l1 mass is 2(1 - 2^-t).
class CoverageSampler {
 public:
  CoverageSampler(std::size_t n, std::vector<BitVector> masks, std::vector<double> weights)
      : n_(n), masks_(std::move(masks)), weights_(std::move(weights)) {
    if (masks_.size() != weights_.size()) {
      throw UsageError("coverage sampler: mask and weight counts differ");
    }
    std::vector<double> mass;
    for (std::size_t e = 0; e < masks_.size(); ++e) {
      if (weights_[e] < 0.0) throw UsageError("coverage sampler: negative weight");
      members_.push_back(masks_[e].ones());
      mass.push_back(weights_[e] * or_mass(members_.back().size()));
    }
    table_ = internal::CumulativeTable(mass);
  }

  static double or_mass(std::size_t t) {
    return t == 0 ? 0.0 : 2.0 * (1.0 - std::ldexp(1.0, -static_cast<int>(t)));
  }

  std::size_t n() const { return n_; }
  double mass() const { return table_.total(); }

  SignedCharacter sample(SplitMix64& rng) const {
    const auto& members = members_[table_.draw(rng)];
    // Half the mass of an OR sits on the empty set, half is spread
    // uniformly over nonempty subsets of T.
    if ((rng() & 1U) == 0) return {BitVector(n_), 1};
    BitVector alpha(n_);
    do {
      alpha = BitVector(n_);
      for (std::size_t j = 0; j < members.size(); j += 64) {
        std::uint64_t draw = rng();
        for (std::size_t b = 0; b < 64 && j + b < members.size(); ++b) {
          if ((draw >> b) & 1U) alpha.set(members[j + b], true);
        }
      }
    } while (alpha.none());
    return {std::move(alpha), -1};
  }

  // Per-element atoms; duplicate characters across elements are kept apart.
  // Requires |T_e| <= 20.
  std::vector<SamplerAtom> support() const {
    std::vector<SamplerAtom> atoms;
    const double total = mass();
    if (total == 0.0) return atoms;
    for (std::size_t e = 0; e < members_.size(); ++e) {
      const auto& members = members_[e];
      const std::size_t t = members.size();
      if (t == 0 || weights_[e] == 0.0) continue;
      if (t > 20) throw CapacityError("coverage support: set too large to enumerate");
      const double pick = weights_[e] * or_mass(t) / total;
      atoms.push_back({BitVector(n_), 1, pick / 2.0});
      const double each = pick / 2.0 / static_cast<double>((std::size_t{1} << t) - 1);
      for (std::size_t c = 1; c < (std::size_t{1} << t); ++c) {
        BitVector alpha(n_);
        for (std::size_t b = 0; b < t; ++b) {
          if ((c >> b) & 1U) alpha.set(members[b], true);
        }
        atoms.push_back({std::move(alpha), -1, each});
      }
    }
    return atoms;
  }

 private:
  std::size_t n_;
  std::vector<BitVector> masks_;
  std::vector<double> weights_;
  std::vector<std::vector<std::size_t>> members_;
  internal::CumulativeTable table_;
};

// Samples directly from a full spectrum.
class ExplicitSampler {
 public:
  explicit ExplicitSampler(Spectrum s) : spectrum_(std::move(s)) {
    std::vector<double> mass;
    mass.reserve(spectrum_.coeffs.size());
    for (double c : spectrum_.coeffs) mass.push_back(std::abs(c));
    table_ = internal::CumulativeTable(mass);
  }

  std::size_t n() const { return spectrum_.n; }
  double mass() const { return table_.total(); }
  const Spectrum& spectrum() const { return spectrum_; }

  SignedCharacter sample(SplitMix64& rng) const {
    const std::size_t a = table_.draw(rng);
    return {BitVector::from_index(n(), a), spectrum_.coeffs[a] >= 0.0 ? 1 : -1};
  }

  std::vector<SamplerAtom> support() const {
    std::vector<SamplerAtom> atoms;
    const double total = mass();
    if (total == 0.0) return atoms;
    for (std::size_t a = 0; a < spectrum_.coeffs.size(); ++a) {
      const double c = spectrum_.coeffs[a];
      if (c == 0.0) continue;
      atoms.push_back({BitVector::from_index(n(), a), c >= 0.0 ? 1 : -1,
                       std::abs(c) / total});
    }
    return atoms;
  }

 private:
  Spectrum spectrum_;
  internal::CumulativeTable table_;
};

struct ImplicitSampler {
  std::variant<AdditiveSampler, CoverageSampler, ExplicitSampler> v;

  std::size_t n() const {
    return std::visit([](const auto& s) { return s.n(); }, v);
  }
  double mass() const {
    return std::visit([](const auto& s) { return s.mass(); }, v);
  }
  SignedCharacter sample(SplitMix64& rng) const {
    return std::visit([&](const auto& s) { return s.sample(rng); }, v);
  }
  std::vector<SamplerAtom> support() const {
    return std::visit([](const auto& s) { return s.support(); }, v);
  }
  const char* name() const {
    static constexpr const char* kNames[] = {"additive", "coverage", "explicit"};
    return kNames[v.index()];
  }
};

inline ImplicitSampler sampler_for_additive(std::vector<double> w) {
  for (double v : w) {
    if (!std::isfinite(v)) throw UsageError("additive sampler: weights must be finite");
  }
  return {AdditiveSampler(std::move(w))};
}

inline ImplicitSampler sampler_for_coverage(const Coverage& c) {
  return {CoverageSampler(c.sets.size(), c.element_masks, c.universe_weights)};
}

// Samplers for every spec; budget-additive specs (and hockey sticks) yield the
// sampler of their additive part, to be clamped by compose_budget.
inline ImplicitSampler sampler_for_spec(const FunctionSpec& spec) {
  if (const auto* a = std::get_if<Additive>(&spec.params)) return sampler_for_additive(a->w);
  if (const auto* b = std::get_if<BudgetAdditive>(&spec.params)) {
    return sampler_for_additive(b->w);
  }
  if (const auto* h = std::get_if<HockeyStick>(&spec.params)) {
    return sampler_for_additive(std::vector<double>(
        h->n, 2.0 * h->alpha / static_cast<double>(h->n)));
  }
  if (const auto* c = std::get_if<Coverage>(&spec.params)) return sampler_for_coverage(*c);
  if (spec.arity() > 20) {
    throw CapacityError("explicit sampler needs a full spectrum; n must be <= 20");
  }
  const auto table = truth_table(spec);
  return {ExplicitSampler(wht(table))};
}

// Budget of a budget-additive spec, +infinity when the spec has none.
inline double spec_budget(const FunctionSpec& spec) {
  if (const auto* b = std::get_if<BudgetAdditive>(&spec.params)) return b->budget;
  if (const auto* h = std::get_if<HockeyStick>(&spec.params)) return h->alpha;
  return std::numeric_limits<double>::infinity();
}

constexpr std::size_t kDefaultRowCap = std::size_t{1} << 20;

// Rows needed for variance L^2 / k <= eps. Quotients within a relative 1e-12
// of an integer are treated as that integer so 4/0.25 gives 16 rather than 17.
inline std::size_t l1_rows_for(double mass, double eps) {
  const double q = mass * mass / eps;
  const double r = std::round(q);
  if (std::abs(q - r) <= 1e-12 * std::max(1.0, q)) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(q));
}

// Sampler sketch with an explicit row count.
inline SketchPlan build_l1_sampler_rows(const ImplicitSampler& sampler, std::size_t rows,
                                        std::uint64_t seed,
                                        std::size_t cap = kDefaultRowCap) {
  if (rows > cap) {
    throw CapacityError("l1 sampler needs " + std::to_string(rows) +
                        " rows, cap is " + std::to_string(cap));
  }
  const double mass = sampler.mass();
  if (mass == 0.0) rows = 0;
  PlanAssembler asm_(sampler.n());
  SplitMix64 rng(derive_seed(seed, 0x11));
  BitVector negative(rows);
  RowSpan span = asm_.begin_span();
  for (std::size_t r = 0; r < rows; ++r) {
    auto drawn = sampler.sample(rng);
    if (drawn.sign < 0) negative.set(r, true);
    asm_.add_row(std::move(drawn.alpha));
  }
  span = asm_.close(span);

  SketchMeta meta;
  meta.builder = "l1_sampler";
  meta.params = {{"sampler", sampler.name()}, {"rows", rows}};
  meta.error_kind = "mse";
  meta.claimed_error = rows == 0 ? 0.0 : mass * mass / static_cast<double>(rows);
  meta.constants = {{"mass", mass}};
  return std::move(asm_).finish(
      PostProcessor{L1MeanPost{span, std::move(negative), mass}}, seed, std::move(meta));
}

// k = ceil(L^2 / eps) rows; expected squared error at most eps for every x.
inline SketchPlan build_l1_sampler(const ImplicitSampler& sampler, double eps,
                                   std::uint64_t seed, std::size_t cap = kDefaultRowCap) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw UsageError("l1 sampler: eps must be a positive finite number");
  }
  const double mass = sampler.mass();
  if (!std::isfinite(mass)) throw UsageError("l1 sampler: total mass is not finite");
  const std::size_t rows = mass == 0.0 ? 0 : l1_rows_for(mass, eps);
  auto plan = build_l1_sampler_rows(sampler, rows, seed, cap);
  plan.meta.params["eps"] = eps;
  plan.meta.claimed_error = eps;
  return plan;
}

// min(b, inner estimate). Clamping is 1-Lipschitz, so the error bound of the
// inner plan carries over whenever the target is itself clamped at b.
inline SketchPlan compose_budget(SketchPlan plan, double budget) {
  if (std::isnan(budget)) throw UsageError("budget must not be NaN");
  auto inner = std::make_shared<const PostProcessor>(std::move(plan.post));
  plan.post = PostProcessor{BudgetClampPost{std::move(inner), budget}};
  plan.meta.params["budget"] = std::isinf(budget) ? nlohmann::json("inf") : nlohmann::json(budget);
  plan.meta.builder = "budget(" + plan.meta.builder + ")";
  return plan;
}

// l1 sketch of any spec: sampler, then the spec's budget clamp if it has one.
inline SketchPlan build_l1_sketch(const FunctionSpec& spec, double eps, std::uint64_t seed,
                                  std::size_t cap = kDefaultRowCap) {
  auto plan = build_l1_sampler(sampler_for_spec(spec), eps, seed, cap);
  const double b = spec_budget(spec);
  if (std::isfinite(b)) return compose_budget(std::move(plan), b);
  return plan;
}

inline SketchPlan build_l1_sketch_rows(const FunctionSpec& spec, std::size_t rows,
                                       std::uint64_t seed,
                                       std::size_t cap = kDefaultRowCap) {
  auto plan = build_l1_sampler_rows(sampler_for_spec(spec), rows, seed, cap);
  const double b = spec_budget(spec);
  if (std::isfinite(b)) return compose_budget(std::move(plan), b);
  return plan;
}

}  // namespace f2sketch

#endif  // F2SKETCH_SAMPLERS_HPP_
