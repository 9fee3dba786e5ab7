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

// Versioned JSON for parity matrices, function specs and sketch plans.
// Numbers are written with shortest round-trip formatting, so load(dump(p))
// reproduces every double bit for bit. Loading reports the dotted path of the
// first offending field.

#ifndef F2SKETCH_SERIALIZATION_HPP_
#define F2SKETCH_SERIALIZATION_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/valuations.hpp"
#include "json.hpp"

namespace f2sketch {

using json = nlohmann::json;

constexpr int kFormatVersion = 1;

namespace internal {

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}
inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(join_path(path, key), "missing");
  return *it;
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

// A number, or the string "inf" / "-inf".
inline double as_extended_number(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw SchemaError(path, "expected a number or \"inf\"");
  }
  return as_number(j, path);
}

inline json extended_number(double v) {
  if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
  return json(v);
}

inline std::uint64_t as_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw SchemaError(path, "expected a nonnegative integer");
}

inline std::size_t as_size(const json& j, const std::string& path) {
  return static_cast<std::size_t>(as_u64(j, path));
}

inline std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected true or false");
  return j.get<bool>();
}

inline const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  return j;
}

inline std::vector<double> as_numbers(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) {
    out.push_back(as_number(j[i], index_path(path, i)));
  }
  return out;
}

inline std::vector<std::size_t> as_sizes(const json& j, const std::string& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < as_array(j, path).size(); ++i) {
    out.push_back(as_size(j[i], index_path(path, i)));
  }
  return out;
}

inline void check_version(const json& j, const std::string& path) {
  const auto v = as_u64(field(j, path, "version"), join_path(path, "version"));
  if (v != kFormatVersion) {
    throw SchemaError(join_path(path, "version"),
                      "unsupported version " + std::to_string(v));
  }
}

// Rethrows spec-construction errors with the document path attached.
template <typename Fn>
auto with_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const SchemaError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path.empty() ? "<root>" : path, e.what());
  }
}

}  // namespace internal

inline json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError(source + ": invalid JSON: " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path), path);
}

// ---------------------------------------------------------------------------
// ParityMatrix.

inline json matrix_to_json(const ParityMatrix& m) {
  json rows = json::array();
  for (const auto& r : m.rows()) rows.push_back(r.to_hex());
  return {{"version", kFormatVersion}, {"n", m.n()}, {"k", m.k()}, {"rows", std::move(rows)}};
}

inline ParityMatrix matrix_from_json(const json& j, const std::string& path = "") {
  using namespace internal;
  check_version(j, path);
  const std::size_t n = as_size(field(j, path, "n"), join_path(path, "n"));
  const std::size_t k = as_size(field(j, path, "k"), join_path(path, "k"));
  const std::string rows_path = join_path(path, "rows");
  const json& rows = as_array(field(j, path, "rows"), rows_path);
  if (rows.size() != k) {
    throw SchemaError(rows_path, "has " + std::to_string(rows.size()) +
                                     " rows but k = " + std::to_string(k));
  }
  ParityMatrix m(n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto p = index_path(rows_path, i);
    m.add_row(with_path(p, [&] { return BitVector::from_hex(n, as_string(rows[i], p)); }));
  }
  return m;
}

// ---------------------------------------------------------------------------
// FunctionSpec.

inline json spec_to_json(const FunctionSpec& spec) {
  json j = {{"kind", spec.kind()}, {"n", spec.arity()}};
  if (spec.scaled) j["scaled"] = true;
  struct Visitor {
    json& j;
    void operator()(const Additive& f) const { j["w"] = f.w; }
    void operator()(const BudgetAdditive& f) const {
      j["b"] = internal::extended_number(f.budget);
      j["w"] = f.w;
    }
    void operator()(const HockeyStick& f) const { j["alpha"] = f.alpha; }
    void operator()(const Coverage& f) const {
      j["universe_weights"] = f.universe_weights;
      j["sets"] = f.sets;
    }
    void operator()(const Ltf& f) const {
      j["theta"] = f.theta;
      j["margin"] = f.margin;
      j["w"] = f.w;
    }
    void operator()(const LtfOr& f) const {
      j["theta"] = f.theta;
      j["margin"] = f.margin;
      json terms = json::array();
      for (const auto& t : f.terms) terms.push_back({{"weight", t.weight}, {"indices", t.indices}});
      j["terms"] = std::move(terms);
    }
    void operator()(const Rank2Matroid& f) const { j["cliques"] = f.cliques; }
    void operator()(const GraphicMatroid& f) const {
      j["vertices"] = f.vertices;
      json edges = json::array();
      for (const auto& [u, v] : f.edges) edges.push_back({u, v});
      j["edges"] = std::move(edges);
    }
    void operator()(const Table& f) const { j["values"] = f.values; }
  };
  std::visit(Visitor{j}, spec.params);
  return j;
}

inline FunctionSpec spec_from_json(const json& j, const std::string& path = "") {
  using namespace internal;
  const auto p = [&](const char* key) { return join_path(path, key); };
  const auto get = [&](const char* key) -> const json& { return field(j, path, key); };
  const std::string kind = as_string(get("kind"), p("kind"));

  FunctionSpec spec;
  if (kind == "additive") {
    spec = with_path(p("w"), [&] { return make_additive(as_numbers(get("w"), p("w"))); });
  } else if (kind == "budget_additive") {
    const double b = as_extended_number(get("b"), p("b"));
    spec = with_path(p("w"),
                     [&] { return make_budget_additive(b, as_numbers(get("w"), p("w"))); });
  } else if (kind == "hockey_stick") {
    const std::size_t n = as_size(get("n"), p("n"));
    const double alpha = as_number(get("alpha"), p("alpha"));
    spec = with_path(path, [&] { return make_hockey_stick(n, alpha); });
  } else if (kind == "coverage") {
    const auto weights = as_numbers(get("universe_weights"), p("universe_weights"));
    const json& sets_j = as_array(get("sets"), p("sets"));
    std::vector<std::vector<std::size_t>> sets;
    for (std::size_t i = 0; i < sets_j.size(); ++i) {
      sets.push_back(as_sizes(sets_j[i], index_path(p("sets"), i)));
    }
    spec = with_path(p("sets"), [&] { return make_coverage(weights, sets); });
  } else if (kind == "ltf") {
    const double theta = as_number(get("theta"), p("theta"));
    const double margin = as_number(get("margin"), p("margin"));
    spec = with_path(path, [&] { return make_ltf(theta, margin, as_numbers(get("w"), p("w"))); });
  } else if (kind == "ltf_or") {
    const std::size_t n = as_size(get("n"), p("n"));
    const double theta = as_number(get("theta"), p("theta"));
    const double margin = as_number(get("margin"), p("margin"));
    const json& terms_j = as_array(get("terms"), p("terms"));
    std::vector<OrTerm> terms;
    for (std::size_t i = 0; i < terms_j.size(); ++i) {
      const auto tp = index_path(p("terms"), i);
      terms.push_back({as_number(field(terms_j[i], tp, "weight"), join_path(tp, "weight")),
                       as_sizes(field(terms_j[i], tp, "indices"), join_path(tp, "indices"))});
    }
    spec = with_path(p("terms"), [&] { return make_ltf_or(n, theta, margin, terms); });
  } else if (kind == "rank2") {
    const std::size_t n = as_size(get("n"), p("n"));
    const json& cj = as_array(get("cliques"), p("cliques"));
    std::vector<std::vector<std::size_t>> cliques;
    for (std::size_t i = 0; i < cj.size(); ++i) {
      cliques.push_back(as_sizes(cj[i], index_path(p("cliques"), i)));
    }
    spec = make_rank2(n, std::move(cliques));
  } else if (kind == "graphic") {
    const std::size_t vertices = as_size(get("vertices"), p("vertices"));
    const json& ej = as_array(get("edges"), p("edges"));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < ej.size(); ++i) {
      const auto ep = index_path(p("edges"), i);
      const auto pair = as_sizes(ej[i], ep);
      if (pair.size() != 2) throw SchemaError(ep, "an edge is a pair [u, v]");
      edges.emplace_back(pair[0], pair[1]);
    }
    spec = with_path(p("edges"), [&] { return make_graphic(vertices, std::move(edges)); });
  } else if (kind == "table") {
    spec = with_path(p("values"),
                     [&] { return make_table(as_numbers(get("values"), p("values"))); });
  } else {
    throw SchemaError(p("kind"), "unknown kind '" + kind + "'");
  }
  if (j.contains("scaled")) spec.scaled = as_bool(j["scaled"], p("scaled"));
  if (j.contains("n") && kind != "hockey_stick" && kind != "ltf_or" && kind != "rank2") {
    const std::size_t n = as_size(j["n"], p("n"));
    if (n != spec.arity()) {
      throw SchemaError(p("n"), "says " + std::to_string(n) + " but the parameters imply " +
                                    std::to_string(spec.arity()));
    }
  }
  return spec;
}

// ---------------------------------------------------------------------------
// PostProcessor.

namespace internal {

inline json span_to_json(RowSpan s) { return json::array({s.begin, s.size}); }

inline RowSpan span_from_json(const json& j, const std::string& path, std::size_t k) {
  const auto v = as_sizes(j, path);
  if (v.size() != 2) throw SchemaError(path, "a row span is [begin, size]");
  if (v[0] + v[1] > k) throw SchemaError(path, "row span exceeds k = " + std::to_string(k));
  return {v[0], v[1]};
}

inline json or_count_fields(const OrCountPost& p) {
  return {{"rows", span_to_json(p.rows)},
          {"rows_per_bucket", p.rows_per_bucket},
          {"bucket_weights", p.bucket_weights},
          {"needed_count", p.needed_count},
          {"theta", p.theta}};
}

inline OrCountPost or_count_from_json(const json& j, const std::string& path, std::size_t k) {
  const auto p = [&](const char* key) { return join_path(path, key); };
  OrCountPost out;
  out.rows = span_from_json(field(j, path, "rows"), p("rows"), k);
  out.rows_per_bucket = as_size(field(j, path, "rows_per_bucket"), p("rows_per_bucket"));
  out.bucket_weights = as_numbers(field(j, path, "bucket_weights"), p("bucket_weights"));
  out.needed_count = as_size(field(j, path, "needed_count"), p("needed_count"));
  out.theta = as_number(field(j, path, "theta"), p("theta"));
  if (out.rows_per_bucket * out.bucket_weights.size() != out.rows.size) {
    throw SchemaError(p("bucket_weights"), "buckets x rows_per_bucket differs from the span");
  }
  return out;
}

inline json ham_gap_fields(const HamGapPost& p) {
  return {{"rows", span_to_json(p.rows)}, {"threshold", p.threshold}};
}

inline HamGapPost ham_gap_from_json(const json& j, const std::string& path, std::size_t k) {
  return {span_from_json(field(j, path, "rows"), join_path(path, "rows"), k),
          as_number(field(j, path, "threshold"), join_path(path, "threshold"))};
}

}  // namespace internal

inline json post_to_json(const PostProcessor& post) {
  using namespace internal;
  struct Visitor {
    json operator()(const ConstantPost& p) const {
      return {{"type", "constant"}, {"value", p.value}};
    }
    json operator()(const L1MeanPost& p) const {
      return {{"type", "l1_mean"},
              {"rows", span_to_json(p.rows)},
              {"negative", p.negative.to_hex()},
              {"scale", p.scale}};
    }
    json operator()(const BudgetClampPost& p) const {
      return {{"type", "budget_clamp"},
              {"budget", extended_number(p.budget)},
              {"inner", post_to_json(*p.inner)}};
    }
    json operator()(const HamGapPost& p) const {
      json j = ham_gap_fields(p);
      j["type"] = "ham_gap";
      return j;
    }
    json operator()(const ZeroTestPost& p) const {
      return {{"type", "zero_test"}, {"rows", span_to_json(p.rows)}};
    }
    json operator()(const LtfDirectPost& p) const {
      return {{"type", "ltf_direct"},
              {"heavy", ham_gap_fields(p.heavy)},
              {"trigger", span_to_json(p.trigger)},
              {"slots", span_to_json(p.slots)},
              {"slot_weights", p.slot_weights},
              {"theta", p.theta}};
    }
    json operator()(const LtfCompactPost& p) const {
      return {{"type", "ltf_compact"},
              {"heavy", ham_gap_fields(p.heavy)},
              {"trigger", span_to_json(p.trigger)},
              {"checks", span_to_json(p.checks)},
              {"signatures", p.signatures},
              {"slot_weights", p.slot_weights},
              {"theta", p.theta},
              {"max_weight", p.max_weight}};
    }
    json operator()(const OrCountPost& p) const {
      json j = or_count_fields(p);
      j["type"] = "or_count";
      return j;
    }
    json operator()(const Rank2Post& p) const {
      return {{"type", "rank2"},
              {"zero_test", span_to_json(p.zero_test)},
              {"pair", or_count_fields(p.pair)}};
    }
    json operator()(const TopSubspacePost& p) const {
      return {{"type", "top_subspace"}, {"rows", span_to_json(p.rows)}, {"coeffs", p.coeffs}};
    }
  };
  return std::visit(Visitor{}, post.v);
}

inline PostProcessor post_from_json(const json& j, std::size_t k, const std::string& path = "") {
  using namespace internal;
  const auto p = [&](const char* key) { return join_path(path, key); };
  const auto get = [&](const char* key) -> const json& { return field(j, path, key); };
  const std::string type = as_string(get("type"), p("type"));
  if (type == "constant") return {ConstantPost{as_number(get("value"), p("value"))}};
  if (type == "l1_mean") {
    L1MeanPost out;
    out.rows = span_from_json(get("rows"), p("rows"), k);
    out.negative = with_path(p("negative"), [&] {
      return BitVector::from_hex(out.rows.size, as_string(get("negative"), p("negative")));
    });
    out.scale = as_number(get("scale"), p("scale"));
    return {std::move(out)};
  }
  if (type == "budget_clamp") {
    BudgetClampPost out;
    out.budget = as_extended_number(get("budget"), p("budget"));
    out.inner = std::make_shared<const PostProcessor>(post_from_json(get("inner"), k, p("inner")));
    return {std::move(out)};
  }
  if (type == "ham_gap") return {ham_gap_from_json(j, path, k)};
  if (type == "zero_test") return {ZeroTestPost{span_from_json(get("rows"), p("rows"), k)}};
  if (type == "ltf_direct") {
    LtfDirectPost out;
    out.heavy = ham_gap_from_json(get("heavy"), p("heavy"), k);
    out.trigger = span_from_json(get("trigger"), p("trigger"), k);
    out.slots = span_from_json(get("slots"), p("slots"), k);
    out.slot_weights = as_numbers(get("slot_weights"), p("slot_weights"));
    out.theta = as_number(get("theta"), p("theta"));
    if (out.slot_weights.size() != out.slots.size) {
      throw SchemaError(p("slot_weights"), "needs one weight per slot row");
    }
    return {std::move(out)};
  }
  if (type == "ltf_compact") {
    LtfCompactPost out;
    out.heavy = ham_gap_from_json(get("heavy"), p("heavy"), k);
    out.trigger = span_from_json(get("trigger"), p("trigger"), k);
    out.checks = span_from_json(get("checks"), p("checks"), k);
    if (out.checks.size > 64) throw SchemaError(p("checks"), "at most 64 check rows");
    const json& sigs = as_array(get("signatures"), p("signatures"));
    for (std::size_t i = 0; i < sigs.size(); ++i) {
      out.signatures.push_back(as_u64(sigs[i], index_path(p("signatures"), i)));
    }
    out.slot_weights = as_numbers(get("slot_weights"), p("slot_weights"));
    if (out.slot_weights.size() != out.signatures.size()) {
      throw SchemaError(p("signatures"), "needs one signature per slot weight");
    }
    out.theta = as_number(get("theta"), p("theta"));
    out.max_weight = as_size(get("max_weight"), p("max_weight"));
    build_compact_index(out);
    return {std::move(out)};
  }
  if (type == "or_count") return {or_count_from_json(j, path, k)};
  if (type == "rank2") {
    return {Rank2Post{span_from_json(get("zero_test"), p("zero_test"), k),
                      or_count_from_json(get("pair"), p("pair"), k)}};
  }
  if (type == "top_subspace") {
    TopSubspacePost out;
    out.rows = span_from_json(get("rows"), p("rows"), k);
    out.coeffs = as_numbers(get("coeffs"), p("coeffs"));
    if (out.rows.size > 30 || out.coeffs.size() != (std::size_t{1} << out.rows.size)) {
      throw SchemaError(p("coeffs"), "needs 2^rows coefficients");
    }
    return {std::move(out)};
  }
  throw SchemaError(p("type"), "unknown post-processor type '" + type + "'");
}

// ---------------------------------------------------------------------------
// SketchPlan.

inline json plan_to_json(const SketchPlan& plan) {
  return {{"version", kFormatVersion},
          {"seed", plan.seed},
          {"meta",
           {{"builder", plan.meta.builder},
            {"params", plan.meta.params},
            {"error_kind", plan.meta.error_kind},
            {"claimed_error", plan.meta.claimed_error},
            {"size_bits", plan.meta.size_bits},
            {"constants", plan.meta.constants}}},
          {"matrix", matrix_to_json(plan.matrix)},
          {"post", post_to_json(plan.post)}};
}

inline SketchPlan plan_from_json(const json& j) {
  using namespace internal;
  check_version(j, "");
  SketchPlan plan;
  plan.seed = as_u64(field(j, "", "seed"), "seed");
  const json& meta = field(j, "", "meta");
  plan.meta.builder = as_string(field(meta, "meta", "builder"), "meta.builder");
  plan.meta.params = field(meta, "meta", "params");
  plan.meta.error_kind = as_string(field(meta, "meta", "error_kind"), "meta.error_kind");
  plan.meta.claimed_error =
      as_extended_number(field(meta, "meta", "claimed_error"), "meta.claimed_error");
  plan.meta.size_bits = as_size(field(meta, "meta", "size_bits"), "meta.size_bits");
  plan.meta.constants = field(meta, "meta", "constants");
  plan.matrix = matrix_from_json(field(j, "", "matrix"), "matrix");
  if (plan.meta.size_bits != plan.matrix.k()) {
    throw SchemaError("meta.size_bits", "differs from matrix.k");
  }
  plan.post = post_from_json(field(j, "", "post"), plan.matrix.k(), "post");
  return plan;
}

inline std::string dump_plan(const SketchPlan& plan) { return plan_to_json(plan).dump(); }

inline SketchPlan load_plan_file(const std::string& path) {
  return plan_from_json(read_json_file(path));
}

// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Fingerprint of the serialized plan; equal plans give equal fingerprints.
inline std::uint64_t plan_fingerprint(const SketchPlan& plan) {
  return fnv1a64(dump_plan(plan));
}

inline std::string fingerprint_hex(std::uint64_t f) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[f & 0xfU];
    f >>= 4;
  }
  return s;
}

}  // namespace f2sketch

#endif  // F2SKETCH_SERIALIZATION_HPP_
