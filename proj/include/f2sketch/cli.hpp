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

// Command-line front end. run() takes the argument list and output streams,
// so the whole CLI can be driven in-process from tests.
//
// Exit codes: 0 success, 1 usage or schema error, 2 validation failure.

#ifndef F2SKETCH_CLI_HPP_
#define F2SKETCH_CLI_HPP_

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "f2sketch/error.hpp"
#include "f2sketch/fourier.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/harness.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/samplers.hpp"
#include "f2sketch/serialization.hpp"
#include "f2sketch/streaming.hpp"
#include "f2sketch/subspace_sketch.hpp"
#include "f2sketch/threshold.hpp"
#include "f2sketch/valuations.hpp"

namespace f2sketch::cli {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;

// Accepted forms: "0b0110" (character j is coordinate j), "0x..." (hex rows as
// in plan files, ceil(n/8) bytes), "[1,4]" or "1,4" (indices of ones), and
// "" or "[]" for the zero vector.
inline BitVector parse_input(std::string text, std::size_t n) {
  const auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
  };
  text = trim(text);
  if (text.rfind("0b", 0) == 0) {
    auto x = BitVector::from_string(text.substr(2));
    if (x.size() != n) {
      throw UsageError("input has " + std::to_string(x.size()) + " bits, expected " +
                       std::to_string(n));
    }
    return x;
  }
  if (text.rfind("0x", 0) == 0) return BitVector::from_hex(n, text.substr(2));
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw UsageError("index list must end with ']'");
    text = text.substr(1, text.size() - 2);
  }
  BitVector x(n);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad index '" + item + "' in input list");
    }
    if (pos != item.size()) throw UsageError("bad index '" + item + "' in input list");
    if (v >= n) throw UsageError("index " + item + " out of range for n = " + std::to_string(n));
    x.set(static_cast<std::size_t>(v), true);
  }
  return x;
}

struct Options {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::size_t jobs = 1;

  std::string fn_path;
  std::string plan_path;
  std::string sketch;
  double eps = 0.0;
  double delta = 1.0 / 3.0;
  std::size_t rows = 0;
  std::string mode = "direct";
  std::size_t n = 0;
  std::size_t d = 0;
  std::string sets;
  std::optional<double> value;

  std::string input;
  std::string x;
  std::string y;
  std::string updates_path;
  std::string protocol_mode = "oneway";
  bool check_direct = false;

  std::uint64_t trials = 1000;
  std::string k_grid;
  std::string curve_builder = "l1";
  std::string inputs_path;
  bool per_input = false;

  double alpha = 1.0;
};

inline std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("F2SKETCH_SEED")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("F2SKETCH_SEED must be a nonnegative integer");
  }
  return 0;
}

inline FunctionSpec load_spec(const std::string& path) {
  if (path.empty()) throw UsageError("--fn is required");
  return spec_from_json(read_json_file(path));
}

template <typename T>
const T& require_kind(const FunctionSpec& spec, const char* sketch) {
  const auto* p = std::get_if<T>(&spec.params);
  if (p == nullptr) {
    throw UsageError(std::string("sketch '") + sketch + "' does not accept a function of kind '" +
                     spec.kind() + "'");
  }
  return *p;
}

inline std::vector<std::vector<std::size_t>> parse_sets(const std::string& text) {
  std::vector<std::vector<std::size_t>> sets;
  std::stringstream ss(text);
  std::string group;
  while (std::getline(ss, group, ';')) {
    std::vector<std::size_t> s;
    std::stringstream gs(group);
    std::string item;
    while (std::getline(gs, item, ',')) {
      if (item.find_first_not_of(" \t") == std::string::npos) continue;
      try {
        s.push_back(static_cast<std::size_t>(std::stoull(item)));
      } catch (const std::exception&) {
        throw UsageError("bad index '" + item + "' in --sets");
      }
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

inline double uniform_mean(const FunctionSpec& spec) {
  const auto table = truth_table(spec);
  double s = 0.0;
  for (double v : table) s += v;
  return s / static_cast<double>(table.size());
}

// A seed -> plan function for the requested sketch. The spec may be absent
// for sketches that only need n.
inline PlanBuilder make_builder(const Options& o, const std::optional<FunctionSpec>& spec) {
  const std::string& s = o.sketch;
  const auto need_spec = [&]() -> const FunctionSpec& {
    if (!spec) throw UsageError("sketch '" + s + "' needs --fn");
    return *spec;
  };
  const auto arity = [&] { return spec ? spec->arity() : o.n; };
  if (s == "l1") {
    const auto& f = need_spec();
    if (o.rows > 0) return [f, rows = o.rows](std::uint64_t seed) {
        return build_l1_sketch_rows(f, rows, seed);
      };
    if (!(o.eps > 0.0)) throw UsageError("l1 sketch needs --eps > 0 or --rows");
    return [f, eps = o.eps](std::uint64_t seed) { return build_l1_sketch(f, eps, seed); };
  }
  if (s == "ham_gap") {
    return [n = arity(), d = o.d, delta = o.delta](std::uint64_t seed) {
      return build_ham_gap_sketch(n, d, delta, seed);
    };
  }
  if (s == "zero_test") {
    return [n = arity(), delta = o.delta](std::uint64_t seed) {
      return build_zero_test(n, delta, seed);
    };
  }
  if (s == "ltf") {
    const auto f = require_kind<Ltf>(need_spec(), "ltf");
    LtfSketchOptions opts;
    if (o.mode == "compact") {
      opts.mode = LtfMode::kCompact;
    } else if (o.mode != "direct") {
      throw UsageError("--mode must be direct or compact");
    }
    return [f, opts, delta = o.delta](std::uint64_t seed) {
      return build_ltf_sketch(f, delta, seed, opts);
    };
  }
  if (s == "ltf_or") {
    const auto f = require_kind<LtfOr>(need_spec(), "ltf_or");
    return [f, delta = o.delta](std::uint64_t seed) { return build_ltf_or_sketch(f, delta, seed); };
  }
  if (s == "ham_or") {
    const auto sets = parse_sets(o.sets);
    return [n = arity(), d = o.d, sets, delta = o.delta](std::uint64_t seed) {
      return build_ham_threshold_of_ors(n, d, sets, delta, seed);
    };
  }
  if (s == "rank2") {
    const auto f = require_kind<Rank2Matroid>(need_spec(), "rank2");
    return [f, delta = o.delta](std::uint64_t seed) { return build_rank2_sketch(f, delta, seed); };
  }
  if (s == "graphic") {
    const auto f = require_kind<GraphicMatroid>(need_spec(), "graphic");
    return [f, delta = o.delta](std::uint64_t seed) {
      return build_graphic_sketch(f, delta, seed);
    };
  }
  if (s == "top_subspace") {
    const auto spectrum = wht(truth_table(need_spec()));
    return [spectrum, eps = o.eps](std::uint64_t) {
      return build_top_subspace_sketch(spectrum, eps);
    };
  }
  if (s == "constant") {
    const double value = o.value ? *o.value : uniform_mean(need_spec());
    return [value, n = arity()](std::uint64_t) { return build_constant_sketch(value, n); };
  }
  throw UsageError("unknown sketch '" + s +
                   "' (expected l1, ham_gap, zero_test, ltf, ltf_or, ham_or, rank2, graphic, "
                   "top_subspace or constant)");
}

// The function a sketch's output is compared against in experiments.
inline Target experiment_target(const Options& o, const FunctionSpec& spec) {
  if (o.sketch == "graphic") return graphic_full_rank_target(require_kind<GraphicMatroid>(spec, "graphic"));
  if (o.sketch == "rank2") {
    FunctionSpec unscaled = spec;
    unscaled.scaled = false;
    return target_of(unscaled);
  }
  return target_of(spec);
}

class Output {
 public:
  Output(const Options& o, std::ostream& fallback) : fallback_(fallback) {
    if (!o.out.empty()) {
      file_.open(o.out, std::ios::binary);
      if (!file_) throw UsageError("cannot write '" + o.out + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ostream& fallback_;
  std::ofstream file_;
};

inline void emit_json(const Options& o, std::ostream& out, const json& j) {
  Output sink(o, out);
  sink.stream() << j.dump(2) << '\n';
}

inline void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
}

// ---------------------------------------------------------------------------
// Subcommands.

inline int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto spec = load_spec(o.fn_path);
  const auto s = wht(truth_table(spec));
  Output sink(o, out);
  if (o.format == "csv") {
    sink.stream() << "alpha_index,coefficient\n";
    sink.stream().precision(17);
    for (std::size_t a = 0; a < s.coeffs.size(); ++a) {
      sink.stream() << a << ',' << s.coeffs[a] << '\n';
    }
    return kExitOk;
  }
  sink.stream() << json{{"n", s.n},
                        {"coefficients", s.coeffs},
                        {"l2_squared", s.l2_squared()},
                        {"spectral_norm", spectral_norm(s)}}
                       .dump(2)
                << '\n';
  return kExitOk;
}

inline int cmd_build(const Options& o, std::ostream& out) {
  std::optional<FunctionSpec> spec;
  if (!o.fn_path.empty()) spec = load_spec(o.fn_path);
  const auto plan = make_builder(o, spec)(resolve_seed(o));
  emit_json(o, out, plan_to_json(plan));
  return kExitOk;
}

inline int cmd_eval(const Options& o, std::ostream& out) {
  if (o.plan_path.empty()) throw UsageError("--plan is required");
  const auto plan = load_plan_file(o.plan_path);
  const auto x = parse_input(o.input, plan.n());
  const auto bits = sketch_apply(plan.matrix, x);
  json j = {{"estimate", estimate(plan, bits)}, {"k", plan.k()}, {"sketch", bits.to_hex()}};
  if (!o.fn_path.empty()) j["truth"] = eval(load_spec(o.fn_path), x);
  emit_json(o, out, j);
  return kExitOk;
}

inline int cmd_stream(const Options& o, std::ostream& out) {
  if (o.plan_path.empty()) throw UsageError("--plan is required");
  if (o.updates_path.empty()) throw UsageError("--updates is required");
  const auto plan = load_plan_file(o.plan_path);
  std::ifstream in(o.updates_path);
  if (!in) throw UsageError("cannot open '" + o.updates_path + "'");
  auto state = stream_init(plan);
  BitVector folded(plan.n());
  for_each_stream_update(in, plan.n(), [&](std::size_t i) {
    stream_update(state, i);
    if (o.check_direct) folded.flip(i);
  });
  json j = {{"updates", state.update_count()},
            {"sketch", state.bits().to_hex()},
            {"estimate", stream_query(state)}};
  if (o.check_direct) {
    const auto direct = sketch_apply(plan.matrix, folded);
    j["folded_input"] = "0x" + folded.to_hex();
    j["direct_matches"] = direct == state.bits();
    if (direct != state.bits()) {
      emit_json(o, out, j);
      return kExitValidation;
    }
  }
  emit_json(o, out, j);
  return kExitOk;
}

inline int cmd_protocol(const Options& o, std::ostream& out) {
  if (o.plan_path.empty()) throw UsageError("--plan is required");
  const auto plan = load_plan_file(o.plan_path);
  const auto x = parse_input(o.x, plan.n());
  const auto y = parse_input(o.y, plan.n());
  const Protocol protocol(plan);
  ProtocolResult r;
  if (o.protocol_mode == "oneway") {
    r = oneway_simulate(protocol, x, y);
  } else if (o.protocol_mode == "smp") {
    r = smp_simulate(protocol, x, y);
  } else {
    throw UsageError("--mode must be oneway or smp");
  }
  auto j = transcript_to_json(r);
  j["mode"] = o.protocol_mode;
  emit_json(o, out, j);
  return kExitOk;
}

inline std::vector<std::size_t> parse_size_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(static_cast<std::size_t>(std::stoull(item)));
    } catch (const std::exception&) {
      throw UsageError(std::string("bad entry '") + item + "' in " + flag);
    }
  }
  if (out.empty()) throw UsageError(std::string(flag) + " must list at least one value");
  return out;
}

inline MeasureOptions measure_options(const Options& o, std::size_t n) {
  MeasureOptions m;
  m.base_seed = resolve_seed(o);
  m.jobs = o.jobs;
  if (!o.inputs_path.empty()) {
    std::ifstream in(o.inputs_path);
    if (!in) throw UsageError("cannot open '" + o.inputs_path + "'");
    std::vector<BitVector> xs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        xs.push_back(parse_input(line, n));
      } catch (const UsageError& e) {
        throw UsageError(o.inputs_path + " line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    m.inputs = explicit_inputs(n, std::move(xs));
  }
  return m;
}

inline int cmd_experiment(const std::string& kind, const Options& o, std::ostream& out) {
  check_format(o);
  const auto spec = load_spec(o.fn_path);
  if (kind == "graphic-check") {
    const auto r = check_graphic_formula(require_kind<GraphicMatroid>(spec, "graphic-check"));
    Output sink(o, out);
    if (o.format == "csv") {
      sink.stream() << "x\n";
      for (const auto& x : r.disagreements) sink.stream() << x.to_string() << '\n';
      return kExitOk;
    }
    json dis = json::array();
    for (const auto& x : r.disagreements) dis.push_back(x.to_string());
    sink.stream() << json{{"rank", r.rank},
                          {"forests", r.forests},
                          {"checked", r.checked},
                          {"agrees", r.agrees()},
                          {"disagreements", dis}}
                         .dump(2)
                  << '\n';
    return kExitOk;
  }
  if (kind == "curve") {
    CurveBuilder cb;
    if (o.curve_builder == "l1") {
      cb = CurveBuilder::kL1;
    } else if (o.curve_builder == "subspace") {
      cb = CurveBuilder::kSubspace;
    } else {
      throw UsageError("--builder must be l1 or subspace");
    }
    const auto points = dimension_error_curve(spec, parse_size_list(o.k_grid, "--k-grid"),
                                              o.trials, cb, measure_options(o, spec.arity()));
    Output sink(o, out);
    if (o.format == "csv") {
      sink.stream() << "k,mse,se,analytic\n";
      sink.stream().precision(17);
      for (const auto& p : points) {
        sink.stream() << p.k << ',' << p.mse << ',' << p.se << ',';
        if (p.analytic) sink.stream() << *p.analytic;
        sink.stream() << '\n';
      }
      return kExitOk;
    }
    json rows = json::array();
    for (const auto& p : points) {
      json r = {{"k", p.k}, {"mse", p.mse}, {"se", p.se}};
      if (p.analytic) r["analytic"] = *p.analytic;
      rows.push_back(std::move(r));
    }
    sink.stream() << json{{"builder", o.curve_builder}, {"trials", o.trials}, {"points", rows}}
                         .dump(2)
                  << '\n';
    return kExitOk;
  }

  const auto builder = make_builder(o, spec);
  const auto target = experiment_target(o, spec);
  const auto mopts = measure_options(o, spec.arity());
  ErrorReport r;
  if (kind == "worst-mse") {
    r = measure_worst_case_mse(builder, target, o.trials, mopts);
  } else if (kind == "dist-mse") {
    r = measure_distributional_mse(builder, target, o.trials, mopts);
  } else if (kind == "error-rate") {
    r = measure_error_rate(builder, target, o.trials, mopts);
  } else {
    throw UsageError("unknown experiment '" + kind +
                     "' (expected worst-mse, dist-mse, error-rate, curve or graphic-check)");
  }
  Output sink(o, out);
  if (o.format == "csv") {
    write_report_csv(r, sink.stream());
  } else {
    sink.stream() << report_to_json(r, o.per_input).dump(2) << '\n';
  }
  return kExitOk;
}

inline int cmd_check(const std::string& kind, const Options& o, std::ostream& out,
                     std::ostream& err) {
  if (kind == "margin") {
    const auto spec = load_spec(o.fn_path);
    const auto& f = require_kind<Ltf>(spec, "margin check");
    const auto report = validate_ltf(f);
    json j = {{"claimed_margin", report.claimed_margin},
              {"true_margin", report.true_margin},
              {"valid", report.valid},
              {"trusted", report.trusted}};
    if (report.witness) j["witness"] = "0b" + report.witness->to_string();
    emit_json(o, out, j);
    if (!report.valid) {
      err << "validation failed: claimed margin " << report.claimed_margin
          << " exceeds the true margin " << report.true_margin << " (witness 0b"
          << report.witness->to_string() << ")\n";
      return kExitValidation;
    }
    return kExitOk;
  }
  if (kind == "hockey") {
    if (o.n == 0) throw UsageError("--n is required");
    const auto stats = hockey_stick_spectrum_stats(static_cast<int>(o.n), o.alpha);
    emit_json(o, out,
              {{"n", o.n},
               {"alpha", o.alpha},
               {"l2_squared", stats.l2_squared},
               {"c_empty", stats.c_empty},
               {"c_full", stats.c_full},
               {"middle_energy", stats.middle_energy},
               {"middle_over_alpha2_per_n",
                stats.middle_energy / (o.alpha * o.alpha / static_cast<double>(o.n))}});
    return kExitOk;
  }
  if (kind == "plan") {
    if (o.plan_path.empty()) throw UsageError("--plan is required");
    const auto plan = load_plan_file(o.plan_path);
    emit_json(o, out,
              {{"builder", plan.meta.builder},
               {"n", plan.n()},
               {"k", plan.k()},
               {"fingerprint", fingerprint_hex(plan_fingerprint(plan))}});
    return kExitOk;
  }
  throw UsageError("unknown check '" + kind + "' (expected margin, hockey or plan)");
}

// ---------------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Approximate F2-sketching of valuation functions", "f2sketch"};
  app.require_subcommand(1);
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "Random seed (default: $F2SKETCH_SEED or 0)");
  app.add_option("--out", o.out, "Write results to this file instead of stdout");
  app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", o.jobs, "Worker threads for experiments (0 = all cores)");
  app.fallthrough();

  auto* spectrum = app.add_subcommand("spectrum", "Fourier coefficients of a function");
  spectrum->add_option("--fn", o.fn_path, "Function spec JSON")->required();

  auto* build = app.add_subcommand("build", "Build a sketch plan");
  build->add_option("--fn", o.fn_path, "Function spec JSON");
  build->add_option("--sketch", o.sketch, "Sketch builder")->required();
  build->add_option("--eps", o.eps, "Target mean squared error");
  build->add_option("--delta", o.delta, "Target error probability");
  build->add_option("--rows", o.rows, "Explicit row count (l1)");
  build->add_option("--mode", o.mode, "direct or compact (ltf)");
  build->add_option("--n", o.n, "Dimension when no --fn is given");
  build->add_option("--d", o.d, "Hamming parameter (ham_gap, ham_or)");
  build->add_option("--sets", o.sets, "Sets for ham_or, e.g. \"0,1;2;3,4\"");
  build->add_option("--value", o.value, "Constant sketch value (default E[f])");

  auto* evalc = app.add_subcommand("eval", "Estimate f(x) from a plan");
  evalc->add_option("--plan", o.plan_path, "Plan JSON")->required();
  evalc->add_option("--input", o.input, "Input x")->required();
  evalc->add_option("--fn", o.fn_path, "Also report the exact value");

  auto* stream = app.add_subcommand("stream", "Replay an XOR-update stream");
  stream->add_option("--plan", o.plan_path, "Plan JSON")->required();
  stream->add_option("--updates", o.updates_path, "Update file")->required();
  stream->add_flag("--check-direct", o.check_direct, "Compare with the folded input");

  auto* protocol = app.add_subcommand("protocol", "Simulate a one-way or SMP protocol");
  protocol->add_option("--plan", o.plan_path, "Plan JSON")->required();
  protocol->add_option("--x", o.x, "Alice's input")->required();
  protocol->add_option("--y", o.y, "Bob's input")->required();
  protocol->add_option("--mode", o.protocol_mode, "oneway or smp");

  std::string experiment_kind;
  auto* experiment = app.add_subcommand("experiment", "Error measurements");
  experiment->add_option("kind", experiment_kind,
                         "worst-mse, dist-mse, error-rate, curve or graphic-check")
      ->required();
  experiment->add_option("--fn", o.fn_path, "Function spec JSON")->required();
  experiment->add_option("--sketch", o.sketch, "Sketch builder");
  experiment->add_option("--eps", o.eps, "Target mean squared error");
  experiment->add_option("--delta", o.delta, "Target error probability");
  experiment->add_option("--rows", o.rows, "Explicit row count (l1)");
  experiment->add_option("--mode", o.mode, "direct or compact (ltf)");
  experiment->add_option("--d", o.d, "Hamming parameter");
  experiment->add_option("--sets", o.sets, "Sets for ham_or");
  experiment->add_option("--value", o.value, "Constant sketch value");
  experiment->add_option("--trials", o.trials, "Independent plans per measurement");
  experiment->add_option("--k-grid", o.k_grid, "Comma-separated sizes (curve)");
  experiment->add_option("--builder", o.curve_builder, "l1 or subspace (curve)");
  experiment->add_option("--inputs", o.inputs_path, "File of inputs, one per line");
  experiment->add_flag("--per-input", o.per_input, "Include per-input rows in JSON");

  std::string check_kind;
  auto* check = app.add_subcommand("check", "Validation checks");
  check->add_option("kind", check_kind, "margin, hockey or plan")->required();
  check->add_option("--fn", o.fn_path, "Function spec JSON");
  check->add_option("--plan", o.plan_path, "Plan JSON");
  check->add_option("--n", o.n, "Dimension (hockey)");
  check->add_option("--alpha", o.alpha, "Hockey-stick alpha");

  std::vector<const char*> argv{"f2sketch"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (seed_opt->count() > 0) o.seed = seed_value;

  try {
    if (*spectrum) return cmd_spectrum(o, out);
    if (*build) return cmd_build(o, out);
    if (*evalc) return cmd_eval(o, out);
    if (*stream) return cmd_stream(o, out);
    if (*protocol) return cmd_protocol(o, out);
    if (*experiment) return cmd_experiment(experiment_kind, o, out);
    if (*check) return cmd_check(check_kind, o, out, err);
  } catch (const ValidationError& e) {
    err << "validation failed: " << e.what();
    if (!e.witness().empty()) err << " (witness " << e.witness() << ")";
    err << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace f2sketch::cli

#endif  // F2SKETCH_CLI_HPP_
