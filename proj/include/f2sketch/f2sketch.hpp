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


// Umbrella header for the library (everything except the CLI).

#ifndef F2SKETCH_F2SKETCH_HPP_
#define F2SKETCH_F2SKETCH_HPP_

#include "f2sketch/error.hpp"
#include "f2sketch/fourier.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/harness.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/random.hpp"
#include "f2sketch/samplers.hpp"
#include "f2sketch/serialization.hpp"
#include "f2sketch/streaming.hpp"
#include "f2sketch/subspace_sketch.hpp"
#include "f2sketch/threshold.hpp"
#include "f2sketch/valuations.hpp"

#endif  // F2SKETCH_F2SKETCH_HPP_
