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

// Sketches for the uniform input distribution: projection onto a
// low-dimensional Fourier subspace, and the constant (k = 0) sketch.

#ifndef F2SKETCH_SUBSPACE_SKETCH_HPP_
#define F2SKETCH_SUBSPACE_SKETCH_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/fourier.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"

namespace f2sketch {

// Rows are the given basis of a subspace A; the estimator is
// sum_{S in A} f^(S) chi_S(x). Under the uniform distribution its mean squared
// error is exactly the energy outside A, recorded as meta.claimed_error.
inline SketchPlan build_subspace_sketch(const Spectrum& s, const SubspaceBasis& basis) {
  if (basis.n() != s.n) throw UsageError("subspace sketch: basis and spectrum differ in n");
  PlanAssembler a(s.n);
  RowSpan span = a.begin_span();
  for (const auto& v : basis.vectors()) a.add_row(v);
  span = a.close(span);

  TopSubspacePost post;
  post.rows = span;
  double captured = 0.0;
  for (const auto& alpha : span_enumerate(basis)) {
    const double c = s.coeffs[alpha.to_index()];
    post.coeffs.push_back(c);
    captured += c * c;
  }
  const double total = s.l2_squared();
  SketchMeta meta;
  meta.builder = "subspace";
  meta.params = {{"n", s.n}};
  meta.error_kind = "distributional_mse";
  meta.claimed_error = std::max(0.0, total - captured);
  meta.constants = {{"dim", basis.dim()},
                    {"captured_energy", captured},
                    {"total_energy", total}};
  return std::move(a).finish(PostProcessor{std::move(post)}, 0, std::move(meta));
}

// The smallest subspace found that captures at least ||f||^2 - eps
// (exhaustive search for n <= 8, greedy above).
inline SketchPlan build_top_subspace_sketch(const Spectrum& s, double eps) {
  if (!(eps >= 0.0)) throw UsageError("top-subspace sketch: eps must be >= 0");
  const double total = s.l2_squared();
  const double target = total - eps;
  const double empty_energy = s.coeffs[0] * s.coeffs[0];

  SubspaceBasis basis(s.n);
  DimensionMethod method = DimensionMethod::kExhaustive;
  if (target > empty_energy + internal::energy_tolerance(s)) {
    method = s.n <= kMaxExhaustiveDimensionBits ? DimensionMethod::kExhaustive
                                                : DimensionMethod::kGreedy;
    basis = approx_fourier_dimension(s, std::min(target, total), method).basis;
  }
  auto plan = build_subspace_sketch(s, basis);
  plan.meta.builder = "top_subspace";
  plan.meta.params["eps"] = eps;
  plan.meta.constants["method"] = to_string(method);
  return plan;
}

// k = 0; the estimate is `value` for every input.
inline SketchPlan build_constant_sketch(double value, std::size_t n) {
  SketchMeta meta;
  meta.builder = "constant";
  meta.params = {{"value", value}, {"n", n}};
  meta.error_kind = "distributional_mse";
  return std::move(PlanAssembler(n)).finish(PostProcessor{ConstantPost{value}}, 0,
                                            std::move(meta));
}

}  // namespace f2sketch

#endif  // F2SKETCH_SUBSPACE_SKETCH_HPP_
