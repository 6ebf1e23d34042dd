/*
 * Copyright 2026 The Glimmer Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The local keyboard model: an event log of timestamped word ids and the
// deterministic trainer that turns it into a bigram weight vector. Weights
// are fixed-point fractions of the total bigram count (or, optionally, of
// the per-predecessor count), so every entry stays in [0, kScale].

#ifndef GLIMMER_CORE_BIGRAM_HPP_
#define GLIMMER_CORE_BIGRAM_HPP_

#include <cstdint>
#include <vector>

#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/status.hpp"

namespace glimmer::bigram {

struct Event {
  uint64_t timestamp_ms = 0;
  uint32_t word = 0;
  friend bool operator==(const Event&, const Event&) = default;
};

struct EventLog {
  std::vector<Event> events;

  // timestamp (8) | word (4), per event. Never leaves the client or enclave;
  // serialization exists for enclave-bound encrypted transport and for
  // planting leak sentinels in tests.
  Bytes to_bytes() const;
  static Result<EventLog> from_bytes(ConstBytes data);
  void zeroize();
};

/// Strictly increasing timestamps, every word id inside the vocabulary.
Status validate_log(const EventLog& log, uint32_t vocab);

enum class Normalization : uint8_t {
  kJoint = 0,       // weight(a,b) = count(a->b) / total bigrams
  kConditional = 1  // weight(a,b) = count(a->b) / count of bigrams leaving a
};

/// Deterministic and pure. Entry (a,b) lives at index a * vocab + b; raw
/// weights are round-half-up fixed point. An empty log trains to all zeros.
crypto::ModelVector train_local(const EventLog& log, uint32_t vocab, uint64_t round_id,
                                Normalization normalization = Normalization::kJoint);

}  // namespace glimmer::bigram

#endif  // GLIMMER_CORE_BIGRAM_HPP_
