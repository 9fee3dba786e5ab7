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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "f2sketch/random.hpp"
#include "f2sketch/serialization.hpp"
#include "f2sketch/valuations.hpp"

namespace f2sketch {
namespace {

BitVector bits(const char* s) { return BitVector::from_string(s); }

// Connected components of (vertices, chosen edges), by depth-first search.
std::size_t components(std::size_t vertices,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       const BitVector& x) {
  std::vector<std::vector<std::size_t>> adj(vertices);
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (!x.get(j)) continue;
    adj[edges[j].first].push_back(edges[j].second);
    adj[edges[j].second].push_back(edges[j].first);
  }
  std::vector<char> seen(vertices, 0);
  std::size_t count = 0;
  for (std::size_t s = 0; s < vertices; ++s) {
    if (seen[s]) continue;
    ++count;
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto v : adj[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return count;
}

// Graphic rank as vertices minus components.
int graphic_rank_by_components(const GraphicMatroid& g, const BitVector& x) {
  return static_cast<int>(g.vertices - components(g.vertices, g.edges, x));
}

// Rank-2 rank from the definition: 0 if empty, 2 if two cliques are touched.
int rank2_by_definition(const std::vector<std::size_t>& clique_of, const BitVector& x) {
  std::vector<std::size_t> touched;
  for (std::size_t i : x.ones()) touched.push_back(clique_of[i]);
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  return static_cast<int>(std::min<std::size_t>(touched.size(), 2));
}

std::vector<std::vector<std::size_t>> random_partition(std::size_t n, SplitMix64& rng) {
  const std::size_t parts = 1 + rng.below(n);
  std::vector<std::vector<std::size_t>> cliques(parts);
  for (std::size_t i = 0; i < n; ++i) cliques[i < parts ? i : rng.below(parts)].push_back(i);
  return cliques;
}

TEST(Eval, AdditiveAndBudget) {
  const auto f = make_additive({1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(eval(f, bits("101")), 5.0);
  const auto g = make_budget_additive(2.5, {1.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(eval(g, bits("110")), 2.5);
  EXPECT_DOUBLE_EQ(eval(g, bits("100")), 1.0);
}

TEST(Eval, HockeyStick) {
  const auto h = make_hockey_stick(3, 1.0);
  EXPECT_DOUBLE_EQ(eval(h, bits("110")), 1.0);
  EXPECT_NEAR(eval(h, bits("100")), 2.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(eval(h, bits("000")), 0.0);
}

TEST(Eval, CoverageExamples) {
  // Universe {0, 1} with weights 1/2; A_0 = {0}, A_1 = {0, 1}.
  const auto c = make_coverage({0.5, 0.5}, {{0}, {0, 1}});
  EXPECT_DOUBLE_EQ(eval(c, bits("10")), 0.5);
  EXPECT_DOUBLE_EQ(eval(c, bits("11")), 1.0);
  EXPECT_DOUBLE_EQ(eval(c, bits("01")), 1.0);
  EXPECT_DOUBLE_EQ(eval(c, bits("00")), 0.0);
  EXPECT_THROW(make_coverage({1.0}, {{3}}), UsageError);
  EXPECT_THROW(make_coverage({-1.0}, {{0}}), UsageError);
}

TEST(Eval, CoverageAgainstUnionOfSets) {
  SplitMix64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const std::size_t m = 1 + rng.below(6);
    const std::size_t n = 1 + rng.below(6);
    std::vector<double> w(m);
    for (auto& v : w) v = rng.uniform();
    std::vector<std::vector<std::size_t>> sets(n);
    for (auto& s : sets) {
      for (std::size_t e = 0; e < m; ++e) {
        if (rng() & 1U) s.push_back(e);
      }
    }
    const auto f = make_coverage(w, sets);
    for (std::uint64_t xi = 0; xi < (1U << n); ++xi) {
      std::vector<char> covered(m, 0);
      for (std::size_t j = 0; j < n; ++j) {
        if ((xi >> j) & 1U) {
          for (auto e : sets[j]) covered[e] = 1;
        }
      }
      double expect = 0.0;
      for (std::size_t e = 0; e < m; ++e) expect += covered[e] ? w[e] : 0.0;
      EXPECT_NEAR(eval(f, BitVector::from_index(n, xi)), expect, 1e-12);
    }
  }
}

TEST(Eval, LtfUsesClosedThreshold) {
  const auto f = make_ltf(2.0, 0.0, {1.0, 1.0, 1.0});
  EXPECT_DOUBLE_EQ(eval(f, bits("110")), 1.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("100")), 0.0);
}

TEST(Eval, LtfOfOrs) {
  // 2 OR(x0, x1) + 1 OR(x2) >= 2.5
  const auto f = make_ltf_or(3, 2.5, 0.5, {{2.0, {0, 1}}, {1.0, {2}}});
  EXPECT_DOUBLE_EQ(eval(f, bits("011")), 1.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("110")), 0.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("001")), 0.0);
  EXPECT_THROW(make_ltf_or(2, 1.0, 0.5, {{1.0, {2}}}), UsageError);
}

TEST(Eval, ArityMismatchIsUsageError) {
  EXPECT_THROW(eval(make_additive({1.0, 1.0}), bits("101")), UsageError);
}

TEST(Rank2, Examples) {
  const auto f = make_rank2(4, {{0, 1}, {2, 3}});
  EXPECT_DOUBLE_EQ(eval(f, bits("0000")), 0.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("1100")), 1.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("1010")), 2.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("1111")), 2.0);
  auto scaled = f;
  scaled.scaled = true;
  EXPECT_DOUBLE_EQ(eval(scaled, bits("1100")), 0.5);
}

TEST(Rank2, UniformMatroid) {
  std::vector<std::vector<std::size_t>> singletons;
  for (std::size_t i = 0; i < 9; ++i) singletons.push_back({i});
  const auto f = make_rank2(9, singletons);
  EXPECT_DOUBLE_EQ(eval(f, bits("110110100")), 2.0);
  EXPECT_DOUBLE_EQ(eval(f, bits("000010000")), 1.0);
}

TEST(Rank2, MalformedPartitions) {
  EXPECT_THROW(make_rank2(3, {{0, 1}, {1, 2}}), ValidationError);
  EXPECT_THROW(make_rank2(3, {{0, 1}}), ValidationError);
  EXPECT_THROW(make_rank2(3, {{0, 1, 2}, {}}), ValidationError);
  EXPECT_THROW(make_rank2(3, {{0, 1, 5}}), ValidationError);
}

TEST(Rank2, EvalMatchesDefinitionAndOracleExhaustively) {
  SplitMix64 rng(17);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const auto spec = make_rank2(n, random_partition(n, rng));
    const auto& m = std::get<Rank2Matroid>(spec.params);
    const auto oracle = rank2_oracle(m);
    for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << n); ++xi) {
      const auto x = BitVector::from_index(n, xi);
      const int expect = rank2_by_definition(m.clique_of, x);
      ASSERT_EQ(rank2_eval(m, x), expect);
      ASSERT_EQ(matroid_rank_bruteforce(oracle, x), expect);
    }
  }
}

TEST(Graphic, Examples) {
  const auto tri = make_graphic(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_DOUBLE_EQ(eval(tri, bits("111")), 2.0);
  EXPECT_DOUBLE_EQ(eval(tri, bits("100")), 1.0);
  const auto path = make_graphic(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_DOUBLE_EQ(eval(path, bits("111")), 3.0);
  EXPECT_DOUBLE_EQ(eval(path, bits("101")), 2.0);
  EXPECT_THROW(make_graphic(3, {{0, 1}, {1, 0}}), UsageError);
  EXPECT_THROW(make_graphic(3, {{0, 3}}), UsageError);
}

TEST(Graphic, SelfLoopsHaveRankZero) {
  const auto g = make_graphic(2, {{0, 0}, {0, 1}});
  EXPECT_DOUBLE_EQ(eval(g, bits("10")), 0.0);
  EXPECT_DOUBLE_EQ(eval(g, bits("11")), 1.0);
}

TEST(Graphic, EvalMatchesComponentCountAndOracle) {
  SplitMix64 rng(23);
  for (int t = 0; t < 50; ++t) {
    const std::size_t v = 2 + rng.below(6);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t a = 0; a < v; ++a) {
      for (std::size_t b = a + 1; b < v; ++b) {
        if (edges.size() < 12 && rng.below(3) == 0) edges.emplace_back(a, b);
      }
    }
    const auto spec = make_graphic(v, edges);
    const auto& g = std::get<GraphicMatroid>(spec.params);
    const auto oracle = graphic_oracle(g);
    for (std::uint64_t xi = 0; xi < (std::uint64_t{1} << edges.size()); ++xi) {
      const auto x = BitVector::from_index(edges.size(), xi);
      const int expect = graphic_rank_by_components(g, x);
      ASSERT_EQ(graphic_rank_eval(g, x), expect);
      ASSERT_EQ(matroid_rank_bruteforce(oracle, x), expect);
    }
  }
}

TEST(MatroidRank, UniformMatroid) {
  const auto oracle = uniform_matroid_oracle(8, 2);
  EXPECT_EQ(matroid_rank_bruteforce(oracle, bits("11011000")), 2);
  EXPECT_EQ(matroid_rank_bruteforce(oracle, bits("00001000")), 1);
}

TEST(MatroidRank, NotDownwardClosedIsValidationError) {
  // Independent sets: {}, {0}, {0, 1}; {1} is missing.
  const MatroidOracle bad{2, [](const BitVector& s) {
                                      const auto i = s.to_index();
                                      return i == 0 || i == 1 || i == 3;
                                    }};
  EXPECT_THROW(matroid_rank_bruteforce(bad, bits("11")), ValidationError);
}

TEST(MatroidRank, Submodular) {
  SplitMix64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 6 + rng.below(4);
    const auto spec = make_rank2(n, random_partition(n, rng));
    for (int s = 0; s < 50; ++s) {
      const auto a = BitVector::from_index(n, rng.below(1U << n));
      const auto b = BitVector::from_index(n, rng.below(1U << n));
      EXPECT_LE(eval(spec, a | b) + eval(spec, a & b), eval(spec, a) + eval(spec, b));
    }
  }
}

TEST(ValidateLtf, Examples) {
  auto r = validate_ltf(std::get<Ltf>(make_ltf(3.0, 1.0, {4.0, 4.0}).params));
  EXPECT_TRUE(r.valid);
  EXPECT_DOUBLE_EQ(r.true_margin, 1.0);

  r = validate_ltf(std::get<Ltf>(make_ltf(2.5, 0.5, std::vector<double>(7, 1.0)).params));
  EXPECT_TRUE(r.valid);
  EXPECT_DOUBLE_EQ(r.true_margin, 0.5);
}

TEST(ValidateLtf, OverclaimedMarginHasWitness) {
  const auto spec = make_ltf(3.0, 0.75, {1.0, 2.5, 2.25});
  const auto& f = std::get<Ltf>(spec.params);
  const auto r = validate_ltf(f);
  EXPECT_FALSE(r.valid);
  EXPECT_DOUBLE_EQ(r.true_margin, 0.25);
  ASSERT_TRUE(r.witness.has_value());
  double sum = 0.0;
  for (std::size_t i : r.witness->ones()) sum += f.w[i];
  EXPECT_DOUBLE_EQ(std::abs(sum - f.theta), r.true_margin);
}

TEST(ValidateLtf, MatchesBruteForceMinimum) {
  SplitMix64 rng(41);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(12);
    std::vector<double> w(n);
    for (auto& v : w) v = std::floor(rng.uniform() * 20.0) / 4.0;
    const double theta = std::floor(rng.uniform() * 40.0) / 8.0;
    double best = 1e300;
    for (std::uint64_t xi = 0; xi < (1U << n); ++xi) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += ((xi >> i) & 1U) ? w[i] : 0.0;
      best = std::min(best, std::abs(s - theta));
    }
    const auto r = validate_ltf(Ltf{theta, best, w});
    EXPECT_DOUBLE_EQ(r.true_margin, best);
    EXPECT_TRUE(r.valid);
  }
}

TEST(ValidateLtf, LargeNIsTrusted) {
  const auto r = validate_ltf(Ltf{1.5, 0.5, std::vector<double>(30, 1.0)});
  EXPECT_TRUE(r.trusted);
  EXPECT_TRUE(std::isnan(r.true_margin));
}

TEST(SpecJson, RoundTripEveryKind) {
  std::vector<FunctionSpec> specs{
      make_additive({1.0, -2.0, 0.5}),
      make_budget_additive(1.5, {1.0, 2.0}),
      make_budget_additive(std::numeric_limits<double>::infinity(), {1.0, 2.0}),
      make_hockey_stick(5, 2.0),
      make_coverage({0.25, 0.75}, {{0}, {0, 1}, {}}),
      make_ltf(2.5, 0.5, {1.0, 1.0, 2.0}),
      make_ltf_or(4, 1.5, 0.5, {{1.0, {0, 1}}, {1.0, {2, 3}}}),
      make_rank2(4, {{0, 2}, {1, 3}}),
      make_graphic(3, {{0, 1}, {1, 2}}),
      make_table({0.0, 1.0, 1.0, 0.5}),
  };
  specs[7].scaled = true;
  for (const auto& s : specs) {
    const auto text = spec_to_json(s).dump();
    const auto back = spec_from_json(json::parse(text));
    EXPECT_EQ(back.kind(), s.kind());
    EXPECT_EQ(back.scaled, s.scaled);
    EXPECT_EQ(spec_to_json(back).dump(), text);
    for (std::uint64_t xi = 0; xi < (1U << s.arity()); ++xi) {
      const auto x = BitVector::from_index(s.arity(), xi);
      EXPECT_EQ(eval(back, x), eval(s, x)) << s.kind();
    }
  }
}

TEST(SpecJson, InfiniteBudgetIsTheStringInf) {
  const auto j = spec_to_json(make_budget_additive(std::numeric_limits<double>::infinity(), {1.0}));
  EXPECT_EQ(j["b"], "inf");
}

TEST(SpecJson, SchemaErrorsNameTheField) {
  try {
    spec_from_json(json::parse(R"({"kind":"ltf_or","n":3,"theta":1,"margin":0.5,
                                   "terms":[{"weight":1,"indices":[0]},{"weight":"x","indices":[1]}]})"));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "terms[1].weight");
  }
  try {
    spec_from_json(json::parse(R"({"kind":"additive","n":3,"w":[1,2]})"));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.field(), "n");
  }
  EXPECT_THROW(spec_from_json(json::parse(R"({"kind":"nope"})")), SchemaError);
  EXPECT_THROW(spec_from_json(json::parse(R"({"kind":"additive"})")), SchemaError);
}

}  // namespace
}  // namespace f2sketch
