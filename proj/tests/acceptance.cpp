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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Monte Carlo thresholds use 3 standard errors of slack
// (4 for the unbiasedness check). Reference values come from the small
// oracles below, which do not call into the library's evaluators.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "f2sketch/f2sketch.hpp"

namespace {

using namespace f2sketch;

constexpr double kThird = 1.0 / 3.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------
// Oracles.

bool parity_of(const BitVector& row, const BitVector& x) {
  std::uint64_t acc = 0;
  const auto a = row.words();
  const auto b = x.words();
  for (std::size_t i = 0; i < a.size(); ++i) acc ^= a[i] & b[i];
  return (std::popcount(acc) & 1) != 0;
}

BitVector direct_sketch(const ParityMatrix& m, const BitVector& x) {
  BitVector out(m.k());
  for (std::size_t r = 0; r < m.k(); ++r) out.set(r, parity_of(m.row(r), x));
  return out;
}

double ltf_oracle(const std::vector<double>& w, double theta, const BitVector& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (x.get(i)) s += w[i];
  }
  return s >= theta ? 1.0 : 0.0;
}

// Exact min over x of |sum w.x - theta| by walking all subsets.
double brute_margin(const std::vector<double>& w, double theta) {
  const std::size_t n = w.size();
  double best = std::abs(theta);
  double s = 0.0;
  std::vector<bool> on(n, false);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
    const auto j = static_cast<std::size_t>(std::countr_zero(i));
    on[j] = !on[j];
    s += on[j] ? w[j] : -w[j];
    best = std::min(best, std::abs(s - theta));
  }
  return best;
}

int components_rank(std::size_t vertices,
                    const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                    const BitVector& x) {
  std::vector<std::size_t> parent(vertices);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  int rank = 0;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (!x.get(j)) continue;
    const auto a = find(edges[j].first);
    const auto b = find(edges[j].second);
    if (a != b) {
      parent[a] = b;
      ++rank;
    }
  }
  return rank;
}

std::vector<double> direct_fourier(const std::vector<double>& values) {
  const std::size_t size = values.size();
  std::vector<double> c(size, 0.0);
  for (std::size_t s = 0; s < size; ++s) {
    double acc = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
      acc += (std::popcount(s & x) & 1) ? -values[x] : values[x];
    }
    c[s] = acc / static_cast<double>(size);
  }
  return c;
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BitVector random_bits(std::size_t n, SplitMix64& rng) {
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x.set(i, (rng() & 1U) != 0);
  return x;
}

BitVector first_ones(std::size_t n, std::size_t w) {
  BitVector x(n);
  for (std::size_t i = 0; i < w; ++i) x.set(i, true);
  return x;
}

// ---------------------------------------------------------------------------
// Shared plan generators.

Ltf random_integer_ltf(std::size_t n, double theta, SplitMix64& rng) {
  Ltf f{theta, 0.5, {}};
  const auto top = static_cast<std::uint64_t>(2.0 * theta) + 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    f.w.push_back(u < 0.15 ? 0.0 : static_cast<double>(1 + rng.below(top)));
  }
  return f;
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, SplitMix64& rng) {
  const std::size_t parts = 1 + rng.below(n);
  std::vector<std::vector<std::size_t>> cliques(parts);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 0; i < parts; ++i) cliques[i].push_back(order[i]);
  for (std::size_t i = parts; i < n; ++i) cliques[rng.below(parts)].push_back(order[i]);
  return cliques;
}

std::vector<std::vector<std::size_t>> random_sets(std::size_t n, std::size_t count,
                                                  SplitMix64& rng) {
  std::vector<std::vector<std::size_t>> sets(count);
  for (auto& s : sets) {
    const std::size_t size = 1 + rng.below(4);
    for (std::size_t j = 0; j < size; ++j) s.push_back(rng.below(n));
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return sets;
}

FunctionSpec random_coverage(std::size_t universe, std::size_t sets, SplitMix64& rng) {
  std::vector<double> w(universe);
  for (auto& v : w) v = 0.1 + rng.uniform();
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return make_coverage(std::move(w), random_sets(universe, sets, rng));
}

// Plan number `i` of a rotation through every builder, at dimension n.
SketchPlan rotating_plan(std::size_t i, std::size_t n, std::uint64_t seed, SplitMix64& rng) {
  switch (i % 13) {
    case 0: {
      std::vector<double> w(n);
      for (auto& v : w) v = rng.uniform() * 4.0 - 2.0;
      return build_l1_sketch_rows(make_additive(std::move(w)), 16 + rng.below(500), seed);
    }
    case 1:
      return build_l1_sketch_rows(make_hockey_stick(n, 1.0 + rng.uniform()),
                                  16 + rng.below(500), seed);
    case 2:
      return build_l1_sketch_rows(random_coverage(8, n, rng), 16 + rng.below(500), seed);
    case 3:
      return build_ham_gap_sketch(n, 1 + rng.below(4), 0.2, seed);
    case 4:
      return build_zero_test(n, 0.01, seed);
    case 5:
    case 6: {
      const double theta = 1.5 + static_cast<double>(rng.below(3));
      const auto mode = i % 13 == 5 ? LtfMode::kDirect : LtfMode::kCompact;
      return build_ltf_sketch(random_integer_ltf(n, theta, rng), kThird, seed, {mode});
    }
    case 7: {
      std::vector<OrTerm> terms;
      for (auto& s : random_sets(n, 40, rng)) {
        terms.push_back({static_cast<double>(1 + rng.below(3)), std::move(s)});
      }
      const auto spec = make_ltf_or(n, 2.5, 0.5, std::move(terms));
      return build_ltf_or_sketch(std::get<LtfOr>(spec.params), 0.2, seed);
    }
    case 8:
      return build_ham_threshold_of_ors(n, 1 + rng.below(3), random_sets(n, 30, rng), 0.2,
                                        seed);
    case 9: {
      const auto spec = make_rank2(n, random_partition(n, rng));
      return build_rank2_sketch(std::get<Rank2Matroid>(spec.params), kThird, seed);
    }
    case 10: {
      const std::size_t v = std::min<std::size_t>(n + 1, 5);
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = a + 1; b < v; ++b) {
          if (edges.size() < n && rng.bernoulli(0.6)) edges.emplace_back(a, b);
        }
      }
      if (edges.empty()) edges.emplace_back(0, 1);
      const auto spec = make_graphic(v, std::move(edges));
      auto plan = build_graphic_sketch(std::get<GraphicMatroid>(spec.params), kThird, seed);
      if (plan.n() < n) plan.matrix = plan.matrix.widened(n);
      return plan;
    }
    case 11: {
      const std::size_t m = std::min<std::size_t>(n, 6);
      std::vector<double> values(std::size_t{1} << m);
      for (auto& v : values) v = rng.uniform();
      auto plan = build_top_subspace_sketch(wht(values), 0.05 * rng.uniform());
      if (plan.n() < n) plan.matrix = plan.matrix.widened(n);
      return plan;
    }
    default:
      return build_constant_sketch(rng.uniform(), n);
  }
}

// ---------------------------------------------------------------------------
// Criteria.

Outcome c1_stream_equivalence() {
  const auto t0 = Clock::now();
  constexpr std::size_t n = 1024;
  constexpr std::size_t kUpdates = 100'000;
  SplitMix64 rng(101);
  std::size_t mismatches = 0;
  std::set<std::string> builders;
  std::size_t max_k = 0;
  for (std::size_t p = 0; p < 100; ++p) {
    const auto plan = rotating_plan(p, n, derive_seed(101, p), rng);
    builders.insert(plan.meta.builder);
    max_k = std::max(max_k, plan.k());
    auto state = stream_init(plan);
    BitVector x(n);
    for (std::size_t u = 0; u < kUpdates; ++u) {
      const std::size_t i = rng.below(n);
      stream_update(state, i);
      x.flip(i);
    }
    const auto direct = direct_sketch(plan.matrix, x);
    if (!(state.bits() == direct) || stream_query(state) != estimate(plan, direct)) {
      ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs <= 10.0,
          fmt("100 plans (%zu builder kinds, max k %zu), 1e5 updates each at n=1024: "
              "%zu mismatches, %.2f s",
              builders.size(), max_k, mismatches, secs)};
}

struct AdditiveCase {
  std::size_t n;
  InputSet inputs;
  std::vector<double> truth;
};

AdditiveCase additive_case(std::size_t n) {
  AdditiveCase c{n, {}, {}};
  if (n <= 8) {
    c.inputs = exhaustive_inputs(n);
  } else {
    // The additive sampler with equal weights is invariant under coordinate
    // permutations, so |x| determines the error distribution at x.
    std::vector<BitVector> xs;
    for (std::size_t w = 0; w <= n; ++w) xs.push_back(first_ones(n, w));
    c.inputs = explicit_inputs(n, std::move(xs));
  }
  for (const auto& x : c.inputs.xs) c.truth.push_back(static_cast<double>(x.popcount()));
  return c;
}

Target popcount_target(std::size_t n) {
  return {n, [](const BitVector& x) { return static_cast<double>(x.popcount()); }, false};
}

Outcome c2_l1_bound() {
  const auto t0 = Clock::now();
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t n : {4, 8, 16}) {
    const auto c = additive_case(n);
    const auto spec = make_additive(std::vector<double>(n, 1.0));
    for (double eps : {0.25, 1.0, 4.0}) {
      const PlanBuilder b = [&](std::uint64_t seed) { return build_l1_sketch(spec, eps, seed); };
      MeasureOptions opt;
      opt.base_seed = 200 + n;
      opt.inputs = c.inputs;
      const auto r = measure_worst_case_mse(b, popcount_target(n), 10'000, opt);
      double slack = 1e300;
      for (const auto& pi : r.per_input) slack = std::min(slack, eps + 3 * pi.se - pi.value);
      if (slack < 0) pass = false;
      detail << fmt(" n=%zu eps=%g k=%zu worst=%.4f;", n, eps, r.k, r.worst_value);
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && secs <= 60.0;
  return {pass, fmt("10^4 trials per x, %.1f s:", secs) + detail.str()};
}

Outcome c3_unbiased() {
  std::ostringstream detail;
  bool pass = true;
  for (std::size_t n : {4, 8, 16}) {
    const auto c = additive_case(n);
    const auto spec = make_additive(std::vector<double>(n, 1.0));
    const PlanBuilder b = [&](std::uint64_t seed) { return build_l1_sketch_rows(spec, 1, seed); };
    MeasureOptions opt;
    opt.base_seed = 300 + n;
    opt.inputs = c.inputs;
    const auto r = measure_worst_case_mse(b, popcount_target(n), 100'000, opt);
    double worst_z = 0.0;
    for (std::size_t i = 0; i < r.per_input.size(); ++i) {
      const auto& pi = r.per_input[i];
      const double gap = std::abs(pi.mean_estimate - c.truth[i]);
      if (gap > 4 * pi.mean_estimate_se + 1e-9) pass = false;
      if (pi.mean_estimate_se > 0) worst_z = std::max(worst_z, gap / pi.mean_estimate_se);
    }
    detail << fmt(" n=%zu max|mean-f|/SE=%.2f;", n, worst_z);
  }
  return {pass, "k=1, 10^5 trials per x:" + detail.str()};
}

Outcome c4_coverage() {
  SplitMix64 rng(401);
  bool pass = true;
  double worst = 0.0;
  for (int s = 0; s < 12; ++s) {
    const auto spec = random_coverage(2 + rng.below(5), 2 + rng.below(7), rng);
    const auto& cov = std::get<Coverage>(spec.params);
    const Target target{spec.arity(),
                        [cov](const BitVector& x) {
                          double v = 0.0;
                          for (std::size_t e = 0; e < cov.universe_weights.size(); ++e) {
                            bool hit = false;
                            for (std::size_t j = 0; j < cov.sets.size(); ++j) {
                              const auto& set = cov.sets[j];
                              if (x.get(j) && std::find(set.begin(), set.end(), e) != set.end()) {
                                hit = true;
                              }
                            }
                            if (hit) v += cov.universe_weights[e];
                          }
                          return v;
                        },
                        false};
    const PlanBuilder b = [&](std::uint64_t seed) { return build_l1_sketch_rows(spec, 40, seed); };
    MeasureOptions opt;
    opt.base_seed = 410 + static_cast<std::uint64_t>(s);
    const auto r = measure_worst_case_mse(b, target, 10'000, opt);
    for (const auto& pi : r.per_input) {
      if (pi.value > 0.1 + 3 * pi.se) pass = false;
    }
    worst = std::max(worst, r.worst_value);
  }
  return {pass, fmt("12 coverage specs with weights summing to 1, k=40, 10^4 trials, "
                    "exhaustive x: worst MSE %.4f (bound 0.1)",
                    worst)};
}

Outcome c5_budget() {
  bool pass = true;
  std::ostringstream detail;
  for (std::size_t n : {5, 9}) {
    const double alpha = 1.0;
    const auto spec = make_hockey_stick(n, alpha);
    const Target target{n,
                        [n, alpha](const BitVector& x) {
                          return std::min(alpha, 2.0 * alpha * static_cast<double>(x.popcount()) /
                                                     static_cast<double>(n));
                        },
                        false};
    const PlanBuilder b = [&](std::uint64_t seed) { return build_l1_sketch(spec, 0.25, seed); };
    MeasureOptions opt;
    opt.base_seed = 500 + n;
    const auto r = measure_worst_case_mse(b, target, 10'000, opt);
    for (const auto& pi : r.per_input) {
      if (pi.value > 0.25 + 3 * pi.se) pass = false;
    }
    double max_est = -1e300;
    for (std::uint64_t t = 0; t < 2000; ++t) {
      const auto plan = build_l1_sketch(spec, 0.25, derive_seed(550 + n, t));
      for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n); ++xi) {
        max_est = std::max(max_est, estimate_at(plan, BitVector::from_index(n, xi)));
      }
    }
    if (max_est > alpha) pass = false;
    detail << fmt(" n=%zu k=%zu worst MSE %.4f, max estimate %.4f;", n, r.k, r.worst_value,
                  max_est);
  }
  return {pass, "eps=0.25, alpha=1:" + detail.str()};
}

Outcome c6_ltf_lemmas() {
  SplitMix64 rng(601);
  std::size_t made = 0;
  std::size_t bad = 0;
  while (made < 200) {
    const std::size_t n = 1 + rng.below(16);
    Ltf f;
    f.theta = 0.5 + rng.uniform() * 10.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      f.w.push_back(u < 0.25 ? rng.uniform() * 0.4 : (u < 0.9 ? rng.uniform() * 6.0 : 25.0));
    }
    const double m = brute_margin(f.w, f.theta);
    if (!(m > 1e-9) || m > f.theta) continue;
    f.margin = m;
    ++made;
    const auto pruned = prune_weights(f);
    const auto rounded = round_weights(pruned);
    for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n); ++xi) {
      const auto x = BitVector::from_index(n, xi);
      const double want = ltf_oracle(f.w, f.theta, x);
      if (ltf_oracle(pruned.w, pruned.theta, x) != want ||
          ltf_oracle(rounded.ltf.w, rounded.ltf.theta, x) != want) {
        ++bad;
      }
    }
  }
  return {bad == 0, fmt("200 random LTFs with n<=16 and exact margins: %zu output changes", bad)};
}

// Sparse inputs whose weight sums land near theta, plus a few dense ones.
std::vector<BitVector> near_boundary_inputs(const Ltf& f, std::size_t count, SplitMix64& rng) {
  const std::size_t n = f.w.size();
  std::vector<BitVector> xs{BitVector(n)};
  while (xs.size() < count) {
    BitVector x(n);
    if (rng.bernoulli(0.005)) {
      xs.push_back(random_bits(n, rng));
      continue;
    }
    const double target = f.theta + (static_cast<double>(rng.below(4)) - 1.5);
    double s = 0.0;
    for (int guard = 0; s < target && guard < 64; ++guard) {
      const std::size_t i = rng.below(n);
      if (x.get(i)) continue;
      x.set(i, true);
      s += f.w[i];
    }
    xs.push_back(std::move(x));
  }
  return xs;
}

Outcome c7_ltf_sketch() {
  constexpr double kC = 256.0;
  constexpr std::uint64_t kSeeds = 2000;
  SplitMix64 rng(701);
  bool pass = true;
  std::ostringstream detail;
  double worst_k_ratio = 0.0;
  struct Instance {
    std::size_t n;
    double theta;
  };
  const std::vector<Instance> instances{{10, 1.5}, {11, 2.5}, {12, 3.5},
                                        {1024, 1.5}, {1024, 2.5}, {1024, 3.5}};
  for (const auto& inst : instances) {
    const Ltf f = random_integer_ltf(inst.n, inst.theta, rng);
    if (inst.n <= 16 && brute_margin(f.w, f.theta) < f.margin) {
      return {false, "generated LTF violates its margin"};
    }
    const Target target{inst.n, [f](const BitVector& x) { return ltf_oracle(f.w, f.theta, x); },
                        true};
    MeasureOptions opt;
    opt.base_seed = 710 + inst.n;
    opt.inputs = inst.n <= 16 ? exhaustive_inputs(inst.n)
                              : explicit_inputs(inst.n, near_boundary_inputs(f, 10'000, rng));
    const double ratio = f.theta / f.margin;
    for (auto mode : {LtfMode::kDirect, LtfMode::kCompact}) {
      const PlanBuilder b = [&](std::uint64_t seed) {
        return build_ltf_sketch(f, kThird, seed, {mode});
      };
      const auto r = measure_error_rate(b, target, kSeeds, opt);
      if (r.worst_value > kThird + 3 * r.worst_se) pass = false;
      detail << fmt(" n=%zu theta/m=%g %s: k=%zu max err %.3f;", inst.n, ratio, to_string(mode),
                    r.k, r.worst_value);
      if (mode == LtfMode::kCompact) {
        const double bound = kC * ratio * std::log2(ratio) * std::log2(3.0);
        worst_k_ratio = std::max(worst_k_ratio, static_cast<double>(r.k) / bound);
        if (static_cast<double>(r.k) > bound) pass = false;
      }
    }
  }
  return {pass, fmt("2000 seeds per instance, C=%g, max k/bound %.3f:", kC, worst_k_ratio) +
                    detail.str()};
}

int rank2_oracle(const std::vector<std::vector<std::size_t>>& cliques, const BitVector& x) {
  int hit = 0;
  for (const auto& c : cliques) {
    if (std::any_of(c.begin(), c.end(), [&](std::size_t i) { return x.get(i); })) ++hit;
  }
  return std::min(hit, 2);
}

Outcome c8_rank2() {
  SplitMix64 rng(801);
  bool pass = true;
  double worst = 0.0;
  for (int p = 0; p < 50; ++p) {
    const std::size_t n = 2 + rng.below(11);
    const auto cliques = random_partition(n, rng);
    const auto spec = make_rank2(n, cliques);
    const auto& m = std::get<Rank2Matroid>(spec.params);
    const Target target{n,
                        [cliques](const BitVector& x) {
                          return static_cast<double>(rank2_oracle(cliques, x));
                        },
                        true};
    const PlanBuilder b = [&](std::uint64_t seed) { return build_rank2_sketch(m, kThird, seed); };
    MeasureOptions opt;
    opt.base_seed = 810 + static_cast<std::uint64_t>(p);
    const auto r = measure_error_rate(b, target, 150, opt);
    for (const auto& pi : r.per_input) {
      if (1.0 - pi.value < 2.0 / 3.0 - 3 * pi.se) pass = false;
    }
    worst = std::max(worst, r.worst_value);
  }
  std::set<std::size_t> sizes;
  for (std::size_t n : {8, 16}) {
    for (int t = 0; t < 5; ++t) {
      const auto spec = make_rank2(n, random_partition(n, rng));
      sizes.insert(build_rank2_sketch(std::get<Rank2Matroid>(spec.params), kThird, t).k());
    }
  }
  if (sizes.size() != 1) pass = false;
  return {pass, fmt("50 partitions with n<=12, 150 seeds, exhaustive x: min exact-match rate "
                    "%.3f; k over n in {8,16}: %zu distinct value(s), k=%zu",
                    1.0 - worst, sizes.size(), *sizes.begin())};
}

Outcome c9_graphic() {
  constexpr double kC = 512.0;
  SplitMix64 rng(901);
  using Edges = std::vector<std::pair<std::size_t, std::size_t>>;
  std::vector<std::pair<std::size_t, Edges>> graphs{
      {2, {{0, 1}}},
      {2, {{0, 1}, {0, 0}, {1, 1}}},
      {3, {{0, 0}, {1, 1}, {2, 2}}},
      {4, {{1, 2}, {3, 3}}},
      {4, {{0, 1}, {1, 2}, {2, 3}}},
      {3, {{0, 1}, {1, 2}, {0, 2}}},
      {4, {{0, 1}, {2, 3}}},
  };
  while (graphs.size() < 40) {
    const std::size_t v = 2 + rng.below(5);
    Edges e;
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = a; b < v; ++b) {
        if (e.size() < 16 && rng.bernoulli(a == b ? 0.2 : 0.5)) e.emplace_back(a, b);
      }
    }
    if (!e.empty()) graphs.emplace_back(v, std::move(e));
  }
  bool pass = true;
  std::size_t agreeing = 0;
  std::size_t disagreeing = 0;
  double worst = 0.0;
  double worst_k_ratio = 0.0;
  std::ostringstream findings;
  for (const auto& [v, edges] : graphs) {
    const auto spec = make_graphic(v, edges);
    const auto& g = std::get<GraphicMatroid>(spec.params);
    const auto report = check_graphic_formula(g);
    if (!report.agrees()) {
      ++disagreeing;
      if (disagreeing <= 3) {
        findings << fmt(" [%zu edges, rank %d: %zu disagreeing inputs, e.g. %s]", edges.size(),
                        report.rank, report.disagreements.size(),
                        report.disagreements.front().to_string().c_str());
      }
      continue;
    }
    ++agreeing;
    const int r = components_rank(v, edges, first_ones(edges.size(), edges.size()));
    const Target target{edges.size(),
                        [v, edges, r](const BitVector& x) {
                          return components_rank(v, edges, x) == r ? 1.0 : 0.0;
                        },
                        true};
    const PlanBuilder b = [&](std::uint64_t seed) { return build_graphic_sketch(g, kThird, seed); };
    MeasureOptions opt;
    opt.base_seed = 910 + agreeing;
    const auto rep = measure_error_rate(b, target, 1000, opt);
    if (rep.worst_value > kThird + 3 * rep.worst_se) pass = false;
    worst = std::max(worst, rep.worst_value);
    const double rr = static_cast<double>(std::max(r, 1));
    const double bound = kC * rr * rr * std::log2(std::max(rr, 2.0)) * std::log2(3.0);
    worst_k_ratio = std::max(worst_k_ratio, static_cast<double>(rep.k) / bound);
    if (static_cast<double>(rep.k) > bound) pass = false;
  }
  return {pass && agreeing > 0,
          fmt("%zu graphs agree with the forest formula (max error rate %.3f over 1000 seeds, "
              "C=%g, max k/bound %.3f); finding: %zu graphs disagree and are not sketched:",
              agreeing, worst, kC, worst_k_ratio, disagreeing) +
              findings.str()};
}

Outcome c10_hockey_spectrum() {
  bool pass = true;
  double worst_rel = 0.0;
  double min_ratio = 1e300;
  double max_ratio = 0.0;
  double max_full = 0.0;
  for (int n = 1; n <= 15; n += 2) {
    const double alpha = 0.75;
    const auto st = hockey_stick_spectrum_stats(n, alpha);
    const auto s = wht(truth_table(make_hockey_stick(static_cast<std::size_t>(n), alpha)));
    const std::size_t full = (std::size_t{1} << n) - 1;
    // Symmetric sums over Hamming weight, independent of the transform.
    double c0 = 0.0;
    double l2 = 0.0;
    double cf = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double g = std::min(alpha, 2.0 * alpha * j / n);
      const double weight = binom(n, j) / std::ldexp(1.0, n);
      c0 += weight * g;
      l2 += weight * g * g;
      cf += weight * g * ((j % 2) ? -1.0 : 1.0);
    }
    const double middle_wht = s.l2_squared() - s.coeffs[0] * s.coeffs[0] -
                              (n > 0 ? s.coeffs[full] * s.coeffs[full] : 0.0);
    const auto rel = [](double a, double b) {
      return std::abs(a - b) / std::max(1e-300, std::max(std::abs(a), std::abs(b)));
    };
    const auto abs_or_rel = [&](double a, double b) {
      return std::abs(a - b) <= 1e-12 ? 0.0 : rel(a, b);
    };
    for (double e : {rel(st.c_empty, s.coeffs[0]), rel(st.l2_squared, s.l2_squared()),
                     abs_or_rel(st.c_full, s.coeffs[full]),
                     abs_or_rel(st.middle_energy, middle_wht), rel(st.c_empty, c0),
                     rel(st.l2_squared, l2), abs_or_rel(st.c_full, cf)}) {
      worst_rel = std::max(worst_rel, e);
    }
    if (n >= 3) {
      if (st.c_full != 0.0) pass = false;
      max_full = std::max(max_full, std::abs(s.coeffs[full]));
    }
    if (n >= 7) {
      const double ratio = st.middle_energy / (alpha * alpha / n);
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
      if (ratio < 0.05 || ratio > 5.0) pass = false;
    }
  }
  if (worst_rel > 1e-9) pass = false;
  return {pass, fmt("odd n<=15: max relative deviation %.2e; middle/(alpha^2/n) in [%.3f, %.3f] "
                    "for n=7..15; closed-form top coefficient 0 (largest |transform value| "
                    "%.1e) for n>=3",
                    worst_rel, min_ratio, max_ratio, max_full)};
}

// Smallest dimension of a subspace of F2^n (n <= 4) whose captured energy
// reaches `target`, by closing every set of generators.
std::size_t enumerate_min_dimension(const std::vector<double>& coeffs, std::size_t n,
                                    double target, double tol) {
  const std::size_t size = std::size_t{1} << n;
  std::size_t best = n;
  for (std::uint64_t gens = 0; gens < (std::uint64_t{1} << (size - 1)); ++gens) {
    std::vector<bool> in(size, false);
    in[0] = true;
    for (std::size_t g = 1; g < size; ++g) {
      if (!((gens >> (g - 1)) & 1U)) continue;
      std::vector<bool> next = in;
      for (std::size_t a = 0; a < size; ++a) {
        if (in[a]) next[a ^ g] = true;
      }
      in = std::move(next);
    }
    double e = 0.0;
    std::size_t members = 0;
    for (std::size_t a = 0; a < size; ++a) {
      if (in[a]) {
        e += coeffs[a] * coeffs[a];
        ++members;
      }
    }
    if (e >= target - tol) {
      best = std::min(best, static_cast<std::size_t>(std::countr_zero(members)));
    }
  }
  return best;
}

Outcome c11_top_subspace() {
  SplitMix64 rng(1101);
  bool pass = true;
  double worst_gap = 0.0;
  std::size_t dim_checks = 0;
  std::size_t dim_mismatch = 0;
  std::vector<std::vector<double>> functions;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> values(std::size_t{1} << n);
    for (auto& v : values) v = rng.uniform() * 2.0 - 0.5;
    functions.push_back(std::move(values));
  }
  for (std::size_t n : {5, 7}) functions.push_back(truth_table(make_hockey_stick(n, 1.0)));
  for (const auto& values : functions) {
    const auto n = static_cast<std::size_t>(std::countr_zero(values.size()));
    const auto coeffs = direct_fourier(values);
    double total = 0.0;
    for (double c : coeffs) total += c * c;
    const double eps = total * (0.05 + 0.5 * rng.uniform());
    const auto s = wht(values);
    const auto plan = build_top_subspace_sketch(s, eps);
    // Energy outside the span of the plan's rows, from the direct coefficients.
    std::vector<bool> in(values.size(), false);
    in[0] = true;
    for (const auto& row : plan.matrix.rows()) {
      const auto g = static_cast<std::size_t>(row.to_index());
      std::vector<bool> next = in;
      for (std::size_t a = 0; a < values.size(); ++a) {
        if (in[a]) next[a ^ g] = true;
      }
      in = std::move(next);
    }
    double outside = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
      if (!in[a]) outside += coeffs[a] * coeffs[a];
    }
    const Target target{n, [values](const BitVector& x) { return values[x.to_index()]; },
                        false};
    const PlanBuilder b = [&](std::uint64_t) { return plan; };
    const auto r = measure_distributional_mse(b, target, 1);
    const double gap = std::abs(r.average_value - outside);
    worst_gap = std::max(worst_gap, gap);
    if (gap > 3 * r.average_se + 1e-9 * std::max(1.0, total)) pass = false;
    if (n <= 4) {
      ++dim_checks;
      const double want = total - eps;
      const auto found = approx_fourier_dimension(s, want, DimensionMethod::kExhaustive);
      if (found.dim != enumerate_min_dimension(coeffs, n, want, 1e-12 * std::max(1.0, total))) {
        ++dim_mismatch;
      }
    }
  }
  if (dim_mismatch != 0) pass = false;
  return {pass, fmt("52 functions: max |uniform MSE - excluded energy| %.2e (1 trial, exact "
                    "over all x); exhaustive dimension vs subspace enumeration: %zu/%zu agree",
                    worst_gap, dim_checks - dim_mismatch, dim_checks)};
}

Outcome c12_protocols() {
  SplitMix64 rng(1201);
  bool pass = true;
  std::size_t checked = 0;
  for (std::size_t p = 0; p < 13; ++p) {
    const std::size_t n = 64 + rng.below(200);
    const auto plan = rotating_plan(p, n, derive_seed(1201, p), rng);
    const Protocol protocol(plan);
    for (int t = 0; t < 1000; ++t) {
      const auto x = random_bits(n, rng);
      const auto y = random_bits(n, rng);
      const double want = estimate(plan, direct_sketch(plan.matrix, x ^ y));
      const auto one = oneway_simulate(protocol, x, y);
      const auto smp = smp_simulate(protocol, x, y);
      if (one.output != want || smp.output != want || one.message_bits != plan.k() ||
          smp.message_bits != 2 * plan.k()) {
        pass = false;
      }
      ++checked;
    }
  }
  return {pass, fmt("13 builders x 1000 pairs = %zu runs: outputs equal the direct estimate on "
                    "x^y, message sizes k and 2k",
                    checked)};
}

Outcome c13_expectation() {
  constexpr std::size_t kEdges = 15;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < kEdges; ++i) edges.emplace_back(i, i + 1);
  auto spec = make_graphic(kEdges + 1, edges);
  spec.scaled = true;
  const int full = components_rank(kEdges + 1, edges, first_ones(kEdges, kEdges));
  std::vector<double> values(std::size_t{1} << kEdges);
  for (std::size_t xi = 0; xi < values.size(); ++xi) {
    values[xi] = static_cast<double>(
                     components_rank(kEdges + 1, edges, BitVector::from_index(kEdges, xi))) /
                 full;
  }
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  const auto plan = build_constant_sketch(mean, kEdges);
  const Target target = target_of(spec);
  const PlanBuilder b = [&](std::uint64_t) { return plan; };
  const auto r = measure_distributional_mse(b, target, 1);
  const double bracket = 1.0 / (4.0 * full);
  const bool pass = std::abs(r.average_value - var) <= 1e-12 && var <= bracket + 1e-15;
  return {pass, fmt("path of 15 edges, scaled: uniform MSE %.15f, Var %.15f, 1/(4 rank) %.15f",
                    r.average_value, var, bracket)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"linearity and stream equivalence", c1_stream_equivalence},
      {"l1 sampler error bound", c2_l1_bound},
      {"l1 sampler unbiasedness", c3_unbiased},
      {"coverage bound", c4_coverage},
      {"budget composition", c5_budget},
      {"LTF prune and round exactness", c6_ltf_lemmas},
      {"LTF sketch error and size", c7_ltf_sketch},
      {"rank-2 matroid sketch", c8_rank2},
      {"graphic matroid sketch", c9_graphic},
      {"hockey-stick spectrum", c10_hockey_spectrum},
      {"top-subspace sketch", c11_top_subspace},
      {"protocol equivalence", c12_protocols},
      {"expectation sketch", c13_expectation},
  };
  int failures = 0;
  int index = 1;
  for (const auto& c : criteria) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s C%d %s (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", index++, c.name,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
