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

// XOR-update streams over a sketch plan, and one-way / simultaneous-message
// protocols in which parties exchange sketch bits under a shared plan.

#ifndef F2SKETCH_STREAMING_HPP_
#define F2SKETCH_STREAMING_HPP_

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "f2sketch/error.hpp"
#include "f2sketch/gf2.hpp"
#include "f2sketch/plan.hpp"
#include "f2sketch/serialization.hpp"

namespace f2sketch {

// masks[i] has bit r set iff row r of the matrix contains coordinate i.
class ColumnMasks {
 public:
  explicit ColumnMasks(const ParityMatrix& m) : masks_(m.n(), BitVector(m.k())) {
    for (std::size_t r = 0; r < m.k(); ++r) {
      for (std::size_t i : m.row(r).ones()) masks_[i].set(r, true);
    }
  }
  std::size_t n() const { return masks_.size(); }
  const BitVector& operator[](std::size_t i) const { return masks_[i]; }

 private:
  std::vector<BitVector> masks_;
};

// Sketch of the current stream position. Holds a pointer to the plan, which
// must outlive the state.
class StreamState {
 public:
  explicit StreamState(const SketchPlan& plan)
      : plan_(&plan),
        masks_(std::make_shared<const ColumnMasks>(plan.matrix)),
        bits_(plan.k()) {}

  const SketchPlan& plan() const { return *plan_; }
  const BitVector& bits() const { return bits_; }
  std::uint64_t update_count() const { return updates_; }
  const ColumnMasks& masks() const { return *masks_; }

  // Flips coordinate i of the underlying input.
  void update(std::size_t i) {
    if (i >= masks_->n()) {
      throw UsageError("stream update " + std::to_string(i) + " out of range for n = " +
                       std::to_string(masks_->n()));
    }
    bits_ ^= (*masks_)[i];
    ++updates_;
  }

  double query() const { return estimate(*plan_, bits_); }

 private:
  const SketchPlan* plan_;
  std::shared_ptr<const ColumnMasks> masks_;
  BitVector bits_;
  std::uint64_t updates_ = 0;
};

inline StreamState stream_init(const SketchPlan& plan) { return StreamState(plan); }

inline StreamState& stream_update(StreamState& state, std::size_t i) {
  state.update(i);
  return state;
}

inline double stream_query(const StreamState& state) { return state.query(); }

// The input reached by flipping each listed coordinate once, starting at 0.
inline BitVector fold_updates(std::size_t n, const std::vector<std::size_t>& updates) {
  BitVector x(n);
  for (std::size_t i : updates) {
    if (i >= n) throw UsageError("update out of range");
    x.flip(i);
  }
  return x;
}

// Reads one 0-based coordinate per line; blank lines and text after '#' are
// ignored. Calls fn(coordinate) per update without buffering the stream.
template <typename Fn>
std::uint64_t for_each_stream_update(std::istream& in, std::size_t n, Fn&& fn) {
  std::string line;
  std::uint64_t line_no = 0;
  std::uint64_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view v(line);
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
    while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\r')) {
      v.remove_suffix(1);
    }
    if (v.empty()) continue;
    std::size_t i = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw UsageError("stream line " + std::to_string(line_no) + ": '" + std::string(v) +
                       "' is not a nonnegative decimal coordinate");
    }
    if (i >= n) {
      throw UsageError("stream line " + std::to_string(line_no) + ": coordinate " +
                       std::to_string(i) + " out of range for n = " + std::to_string(n));
    }
    fn(i);
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Protocols.

struct PartyMessage {
  std::string sender;
  BitVector bits;
  std::uint64_t fingerprint = 0;
};

struct ProtocolResult {
  std::size_t message_bits = 0;
  double output = 0.0;
  std::uint64_t fingerprint = 0;
  std::vector<PartyMessage> messages;
};

// The shared public-coin state: the plan and its fingerprint. Parties see
// only their own input and the plan; receivers see only messages and the plan.
class Protocol {
 public:
  explicit Protocol(const SketchPlan& plan)
      : plan_(&plan), fingerprint_(plan_fingerprint(plan)) {}

  std::uint64_t fingerprint() const { return fingerprint_; }
  const SketchPlan& plan() const { return *plan_; }

  PartyMessage send(std::string sender, const BitVector& input) const {
    return {std::move(sender), sketch_apply(plan_->matrix, input), fingerprint_};
  }

  // One-way receiver: combines Alice's message with a sketch of its own input.
  double receive(const PartyMessage& m, const BitVector& own_input) const {
    check(m);
    return estimate(*plan_, m.bits ^ sketch_apply(plan_->matrix, own_input));
  }

  // Simultaneous-message coordinator.
  double coordinate(const PartyMessage& a, const PartyMessage& b) const {
    check(a);
    check(b);
    return estimate(*plan_, a.bits ^ b.bits);
  }

 private:
  void check(const PartyMessage& m) const {
    if (m.fingerprint != fingerprint_) {
      throw ValidationError("message from '" + m.sender +
                            "' was produced under a different plan (fingerprint " +
                            fingerprint_hex(m.fingerprint) + ", expected " +
                            fingerprint_hex(fingerprint_) + ")");
    }
    if (m.bits.size() != plan_->k()) throw UsageError("message length differs from k");
  }

  const SketchPlan* plan_;
  std::uint64_t fingerprint_;
};

inline ProtocolResult oneway_simulate(const Protocol& protocol, const BitVector& x,
                                      const BitVector& y) {
  ProtocolResult r;
  r.fingerprint = protocol.fingerprint();
  r.messages.push_back(protocol.send("alice", x));
  r.message_bits = r.messages.back().bits.size();
  r.output = protocol.receive(r.messages.back(), y);
  return r;
}

inline ProtocolResult smp_simulate(const Protocol& protocol, const BitVector& x,
                                   const BitVector& y) {
  ProtocolResult r;
  r.fingerprint = protocol.fingerprint();
  r.messages.push_back(protocol.send("alice", x));
  r.messages.push_back(protocol.send("bob", y));
  r.message_bits = r.messages[0].bits.size() + r.messages[1].bits.size();
  r.output = protocol.coordinate(r.messages[0], r.messages[1]);
  return r;
}

inline ProtocolResult oneway_simulate(const SketchPlan& plan, const BitVector& x,
                                      const BitVector& y) {
  return oneway_simulate(Protocol(plan), x, y);
}

inline ProtocolResult smp_simulate(const SketchPlan& plan, const BitVector& x,
                                   const BitVector& y) {
  return smp_simulate(Protocol(plan), x, y);
}

inline json transcript_to_json(const ProtocolResult& r) {
  json messages = json::array();
  for (const auto& m : r.messages) {
    messages.push_back({{"sender", m.sender},
                        {"bits", m.bits.to_hex()},
                        {"length", m.bits.size()},
                        {"fingerprint", fingerprint_hex(m.fingerprint)}});
  }
  return {{"plan_fingerprint", fingerprint_hex(r.fingerprint)},
          {"message_bits", r.message_bits},
          {"messages", std::move(messages)},
          {"output", r.output}};
}

}  // namespace f2sketch

#endif  // F2SKETCH_STREAMING_HPP_
