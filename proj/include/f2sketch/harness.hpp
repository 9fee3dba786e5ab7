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

// Monte Carlo error measurement for sketch plans.
//
// A trial builds one plan from seed derive_seed(base_seed, t) and evaluates it
// on every input of the input set. Trials are grouped into a fixed number of
// chunks that workers claim dynamically; chunk accumulators are merged in
// chunk order, so results do not depend on the number of workers.

#ifndef F2SKETCH_HARNESS_HPP_
#define F2SKETCH_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/fourier.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/random.hpp"
#include "f2sketch/samplers.hpp"
#include "f2sketch/serialization.hpp"
#include "f2sketch/streaming.hpp"
#include "f2sketch/subspace_sketch.hpp"
#include "f2sketch/threshold.hpp"
#include "f2sketch/valuations.hpp"

namespace f2sketch {

using PlanBuilder = std::function<SketchPlan(std::uint64_t seed)>;

struct Target {
  std::size_t n = 0;
  std::function<double(const BitVector&)> f;
  bool discrete = false;  // finite value set; error rates are meaningful
};

inline bool spec_is_discrete(const FunctionSpec& spec) {
  const auto kind = spec.kind();
  return kind == "ltf" || kind == "ltf_or" || kind == "rank2" || kind == "graphic";
}

inline Target target_of(const FunctionSpec& spec) {
  return {spec.arity(), [spec](const BitVector& x) { return eval(spec, x); },
          spec_is_discrete(spec)};
}

// Count-sum-sumsq accumulator; merge is associative and commutative up to
// floating-point rounding.
struct Accumulator {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++count;
    sum += v;
    sum_sq += v * v;
  }
  void merge(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double variance() const {
    if (count < 2) return 0.0;
    const double c = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
  }
  double standard_error() const {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

struct InputSet {
  std::size_t n = 0;
  std::vector<BitVector> xs;
  bool exhaustive = false;  // xs[i] is the input with integer encoding i
  bool sampled = false;     // uniform sample; values are estimates over x
};

constexpr std::size_t kMaxExhaustiveInputs = 20;
constexpr std::size_t kSampledInputs = 10'000;

inline InputSet exhaustive_inputs(std::size_t n) {
  if (n > kMaxExhaustiveInputs) {
    throw CapacityError("exhaustive inputs need n <= " + std::to_string(kMaxExhaustiveInputs));
  }
  InputSet s;
  s.n = n;
  s.exhaustive = true;
  const std::size_t count = std::size_t{1} << n;
  s.xs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) s.xs.push_back(BitVector::from_index(n, i));
  return s;
}

inline InputSet sampled_inputs(std::size_t n, std::size_t count, std::uint64_t seed) {
  InputSet s;
  s.n = n;
  s.sampled = true;
  SplitMix64 rng(derive_seed(seed, 0x5a));
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<std::uint64_t> words(words_for(n));
    for (auto& w : words) w = rng();
    BitVector x(n);
    x.assign_words(words);  // clears bits beyond n
    s.xs.push_back(std::move(x));
  }
  return s;
}

inline InputSet explicit_inputs(std::size_t n, std::vector<BitVector> xs) {
  for (const auto& x : xs) {
    if (x.size() != n) throw UsageError("input list entry has the wrong length");
  }
  InputSet s;
  s.n = n;
  s.xs = std::move(xs);
  return s;
}

// Exhaustive for n <= 20, otherwise 10^4 uniform samples (flagged).
inline InputSet default_inputs(std::size_t n, std::uint64_t seed) {
  return n <= kMaxExhaustiveInputs ? exhaustive_inputs(n)
                                   : sampled_inputs(n, kSampledInputs, seed);
}

struct MeasureOptions {
  std::uint64_t base_seed = 1;
  std::size_t jobs = 1;  // 0 = hardware concurrency
  std::optional<InputSet> inputs;  // default_inputs(n) when empty
};

enum class Metric { kWorstCaseMse, kDistributionalMse, kErrorRate };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::kWorstCaseMse:
      return "worst_case_mse";
    case Metric::kDistributionalMse:
      return "distributional_mse";
    case Metric::kErrorRate:
      return "error_rate";
  }
  return "?";
}

struct PerInputResult {
  BitVector x;
  double truth = 0.0;
  double value = 0.0;  // mean squared error or error rate
  double se = 0.0;
  double mean_estimate = 0.0;
  double mean_estimate_se = 0.0;
};

struct ErrorReport {
  std::string builder;
  json params = json::object();
  Metric metric = Metric::kWorstCaseMse;
  std::size_t k = 0;  // largest k over trials
  std::uint64_t trials = 0;
  std::size_t inputs = 0;
  bool sampled_inputs = false;
  double worst_value = 0.0;  // max over x
  double worst_se = 0.0;
  std::size_t worst_index = 0;
  double average_value = 0.0;  // mean over x (uniform over the input set)
  double average_se = 0.0;     // over trials of the per-trial average
  std::optional<double> analytic;
  double claimed_error = 0.0;
  std::vector<PerInputResult> per_input;

  // The headline number: max over x, or the distribution average.
  double value() const {
    return metric == Metric::kDistributionalMse ? average_value : worst_value;
  }
  double se() const { return metric == Metric::kDistributionalMse ? average_se : worst_se; }
};

namespace internal {

struct TrialChunk {
  std::vector<Accumulator> error;     // per input
  std::vector<Accumulator> estimate;  // per input
  Accumulator trial_average;          // per-trial mean error over inputs
  std::size_t max_k = 0;
  std::string builder;
  json params;
  double claimed = 0.0;
  bool has_meta = false;

  void merge(TrialChunk&& o) {
    if (error.empty()) {
      error = std::move(o.error);
      estimate = std::move(o.estimate);
    } else {
      for (std::size_t i = 0; i < error.size(); ++i) {
        error[i].merge(o.error[i]);
        estimate[i].merge(o.estimate[i]);
      }
    }
    trial_average.merge(o.trial_average);
    max_k = std::max(max_k, o.max_k);
    if (!has_meta && o.has_meta) {
      builder = std::move(o.builder);
      params = std::move(o.params);
      claimed = o.claimed;
      has_meta = true;
    }
  }
};

// Calls fn(index, estimate) for every input of the set. Sketches are formed
// by XORing the column masks of the input's ones; exhaustive sets are walked
// in Gray-code order so each step XORs a single mask.
template <typename Fn>
void evaluate_plan(const SketchPlan& plan, const InputSet& inputs, Fn&& fn) {
  const ColumnMasks masks(plan.matrix);
  BitVector bits(plan.k());
  if (inputs.exhaustive && inputs.n > 0) {
    fn(std::size_t{0}, estimate(plan, bits));
    const std::size_t count = std::size_t{1} << inputs.n;
    for (std::size_t i = 1; i < count; ++i) {
      bits ^= masks[static_cast<std::size_t>(std::countr_zero(i))];
      fn(i ^ (i >> 1), estimate(plan, bits));
    }
    return;
  }
  auto words = bits.mutable_words();
  for (std::size_t i = 0; i < inputs.xs.size(); ++i) {
    std::fill(words.begin(), words.end(), 0);
    for (std::size_t j : inputs.xs[i].ones()) bits ^= masks[j];
    fn(i, estimate(plan, bits));
  }
}

inline std::size_t resolve_jobs(std::size_t jobs) {
  if (jobs != 0) return jobs;
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

inline ErrorReport run_trials(const PlanBuilder& builder, const Target& target,
                              std::uint64_t trials, const MeasureOptions& options,
                              Metric metric) {
  if (trials == 0) throw UsageError("trials must be positive");
  if (metric == Metric::kErrorRate && !target.discrete) {
    throw UsageError("error rate needs a function with a finite value set");
  }
  const InputSet inputs =
      options.inputs ? *options.inputs : default_inputs(target.n, options.base_seed);
  if (inputs.n != target.n) throw UsageError("input set dimension differs from the function");
  std::vector<double> truth(inputs.xs.size());
  for (std::size_t i = 0; i < inputs.xs.size(); ++i) truth[i] = target.f(inputs.xs[i]);

  const std::size_t chunk_count = static_cast<std::size_t>(std::min<std::uint64_t>(trials, 64));
  std::vector<TrialChunk> chunks(chunk_count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunk_count) return;
      TrialChunk& chunk = chunks[c];
      chunk.error.assign(inputs.xs.size(), {});
      chunk.estimate.assign(inputs.xs.size(), {});
      const std::uint64_t lo = trials * c / chunk_count;
      const std::uint64_t hi = trials * (c + 1) / chunk_count;
      for (std::uint64_t t = lo; t < hi; ++t) {
        const SketchPlan plan = builder(derive_seed(options.base_seed, t));
        if (plan.n() != target.n) throw UsageError("plan dimension differs from the function");
        chunk.max_k = std::max(chunk.max_k, plan.k());
        if (!chunk.has_meta) {
          chunk.builder = plan.meta.builder;
          chunk.params = plan.meta.params;
          chunk.claimed = plan.meta.claimed_error;
          chunk.has_meta = true;
        }
        double total = 0.0;
        evaluate_plan(plan, inputs, [&](std::size_t i, double est) {
          double e = 0.0;
          if (metric == Metric::kErrorRate) {
            e = est == truth[i] ? 0.0 : 1.0;
          } else {
            e = (est - truth[i]) * (est - truth[i]);
          }
          chunk.error[i].add(e);
          chunk.estimate[i].add(est);
          total += e;
        });
        chunk.trial_average.add(inputs.xs.empty() ? 0.0
                                                  : total / static_cast<double>(inputs.xs.size()));
      }
    }
  };
  const std::size_t jobs = std::min(resolve_jobs(options.jobs), chunk_count);
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t j = 0; j < jobs; ++j) {
      pool.emplace_back([&] {
        try {
          worker();
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(chunk_count);
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  TrialChunk merged;
  for (auto& c : chunks) merged.merge(std::move(c));

  ErrorReport r;
  r.builder = merged.builder;
  r.params = merged.params;
  r.metric = metric;
  r.k = merged.max_k;
  r.trials = trials;
  r.inputs = inputs.xs.size();
  r.sampled_inputs = inputs.sampled;
  r.claimed_error = merged.claimed;
  r.average_value = merged.trial_average.mean();
  r.average_se = merged.trial_average.standard_error();
  r.per_input.reserve(inputs.xs.size());
  for (std::size_t i = 0; i < inputs.xs.size(); ++i) {
    const auto& e = merged.error[i];
    const auto& est = merged.estimate[i];
    r.per_input.push_back({inputs.xs[i], truth[i], e.mean(), e.standard_error(), est.mean(),
                           est.standard_error()});
    if (i == 0 || e.mean() > r.worst_value) {
      r.worst_value = e.mean();
      r.worst_se = e.standard_error();
      r.worst_index = i;
    }
  }
  return r;
}

}  // namespace internal

// max over x of E[(estimate - f(x))^2].
inline ErrorReport measure_worst_case_mse(const PlanBuilder& builder, const Target& target,
                                          std::uint64_t trials,
                                          const MeasureOptions& options = {}) {
  return internal::run_trials(builder, target, trials, options, Metric::kWorstCaseMse);
}

// E over uniform x of E[(estimate - f(x))^2]. Subspace plans also report the
// analytic value (Fourier energy outside the subspace).
inline ErrorReport measure_distributional_mse(const PlanBuilder& builder,
                                              const Target& target, std::uint64_t trials,
                                              const MeasureOptions& options = {}) {
  auto r = internal::run_trials(builder, target, trials, options, Metric::kDistributionalMse);
  if (r.builder == "top_subspace" || r.builder == "subspace") r.analytic = r.claimed_error;
  return r;
}

// max over x of Pr[estimate != f(x)].
inline ErrorReport measure_error_rate(const PlanBuilder& builder, const Target& target,
                                      std::uint64_t trials, const MeasureOptions& options = {}) {
  return internal::run_trials(builder, target, trials, options, Metric::kErrorRate);
}

// ---------------------------------------------------------------------------
// Dimension versus error.

enum class CurveBuilder { kL1, kSubspace };

struct CurvePoint {
  std::size_t k = 0;
  double mse = 0.0;
  double se = 0.0;
  std::optional<double> analytic;
};

// l1: worst-case MSE of the sampler sketch with k rows. subspace: uniform MSE
// of the best k-dimensional subspace sketch (exhaustive search, n <= 8).
inline std::vector<CurvePoint> dimension_error_curve(const FunctionSpec& spec,
                                                     const std::vector<std::size_t>& k_grid,
                                                     std::uint64_t trials, CurveBuilder kind,
                                                     const MeasureOptions& options = {}) {
  std::vector<CurvePoint> out;
  const Target target = target_of(spec);
  if (kind == CurveBuilder::kL1) {
    const auto sampler = sampler_for_spec(spec);
    const double budget = spec_budget(spec);
    for (std::size_t k : k_grid) {
      const PlanBuilder b = [&](std::uint64_t seed) {
        auto plan = build_l1_sampler_rows(sampler, k, seed);
        return std::isfinite(budget) ? compose_budget(std::move(plan), budget) : plan;
      };
      const auto r = measure_worst_case_mse(b, target, trials, options);
      out.push_back({k, r.worst_value, r.worst_se, std::nullopt});
    }
    return out;
  }
  const auto s = wht(truth_table(spec));
  const auto best = best_subspaces_by_dimension(s);
  for (std::size_t k : k_grid) {
    if (k >= best.size()) throw UsageError("subspace curve: k exceeds n");
    const auto plan = build_subspace_sketch(s, best[k].basis);
    const PlanBuilder b = [&](std::uint64_t) { return plan; };
    const auto r = measure_distributional_mse(b, target, trials, options);
    out.push_back({k, r.average_value, r.average_se, r.analytic});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graphic decomposition cross-check.

struct GraphicFormulaReport {
  int rank = 0;
  std::size_t forests = 0;
  std::size_t checked = 0;
  std::vector<BitVector> disagreements;  // x where formula != [rank(x) = r]
  bool agrees() const { return disagreements.empty(); }
};

constexpr std::size_t kMaxGraphicCheckEdges = 16;

// Compares the forest formula (exact, no sketching) with the indicator of
// full rank over every input.
inline GraphicFormulaReport check_graphic_formula(const GraphicMatroid& g) {
  if (g.edges.size() > kMaxGraphicCheckEdges) {
    throw CapacityError("graphic formula check needs at most " +
                        std::to_string(kMaxGraphicCheckEdges) + " edges");
  }
  GraphicFormulaReport r;
  const auto forests = forest_decomposition(g);
  r.rank = graphic_full_rank(g);
  r.forests = forests.size();
  const std::size_t count = std::size_t{1} << g.edges.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto x = BitVector::from_index(g.edges.size(), i);
    const double formula = graphic_formula_eval(g, forests, x);
    const double truth = graphic_rank_eval(g, x) == r.rank ? 1.0 : 0.0;
    if (formula != truth) r.disagreements.push_back(x);
    ++r.checked;
  }
  return r;
}

// [rank(x) = full rank], the function the graphic sketch targets.
inline Target graphic_full_rank_target(const GraphicMatroid& g) {
  const int r = graphic_full_rank(g);
  return {g.edges.size(),
          [g, r](const BitVector& x) { return graphic_rank_eval(g, x) == r ? 1.0 : 0.0; },
          true};
}

// ---------------------------------------------------------------------------
// Output.

inline json report_to_json(const ErrorReport& r, bool include_per_input = true) {
  json j = {{"builder", r.builder},
            {"params", r.params},
            {"metric", to_string(r.metric)},
            {"k", r.k},
            {"trials", r.trials},
            {"inputs", r.inputs},
            {"sampled_inputs", r.sampled_inputs},
            {"worst_value", r.worst_value},
            {"worst_se", r.worst_se},
            {"average_value", r.average_value},
            {"average_se", r.average_se},
            {"claimed_error", r.claimed_error}};
  if (!r.per_input.empty()) j["worst_input"] = r.per_input[r.worst_index].x.to_string();
  if (r.analytic) j["analytic"] = *r.analytic;
  if (include_per_input) {
    json rows = json::array();
    for (const auto& p : r.per_input) {
      rows.push_back({{"x", p.x.to_string()},
                      {"truth", p.truth},
                      {"value", p.value},
                      {"se", p.se},
                      {"mean_estimate", p.mean_estimate},
                      {"mean_estimate_se", p.mean_estimate_se}});
    }
    j["per_input"] = std::move(rows);
  }
  return j;
}

inline void write_report_csv(const ErrorReport& r, std::ostream& out) {
  out << "x,truth,value,se,mean_estimate,mean_estimate_se\n";
  out.precision(17);
  for (const auto& p : r.per_input) {
    out << p.x.to_string() << ',' << p.truth << ',' << p.value << ',' << p.se << ','
        << p.mean_estimate << ',' << p.mean_estimate_se << '\n';
  }
}

}  // namespace f2sketch

#endif  // F2SKETCH_HARNESS_HPP_
