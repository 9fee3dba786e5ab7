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

// Builds an l1 sketch of a hockey-stick function, replays a short update
// stream into it, and compares the streamed estimate with the exact value.

#include <cstdio>
#include <vector>

#include "f2sketch/f2sketch.hpp"

int main() {
  using namespace f2sketch;
  const auto spec = make_hockey_stick(9, 1.0);
  const auto plan = build_l1_sketch(spec, 0.25, /*seed=*/7);
  std::printf("hockey stick n=9: k = %zu rows\n", plan.k());

  auto state = stream_init(plan);
  const std::vector<std::size_t> updates{0, 3, 5, 3, 8, 1};
  for (std::size_t i : updates) stream_update(state, i);
  const auto x = fold_updates(9, updates);
  std::printf("x = %s  f(x) = %.4f  streamed estimate = %.4f\n", x.to_string().c_str(),
              eval(spec, x), stream_query(state));

  const auto rank2 = make_rank2(6, {{0, 1, 2}, {3, 4}, {5}});
  const auto rplan = build_rank2_sketch(std::get<Rank2Matroid>(rank2.params), 1.0 / 3.0, 11);
  const auto a = BitVector::from_string("100000");
  const auto b = BitVector::from_string("000100");
  const auto r = smp_simulate(rplan, a, b);
  std::printf("rank-2 SMP: %zu bits sent, output %.0f, exact %.0f\n", r.message_bits, r.output,
              eval(rank2, a ^ b));
  return 0;
}
