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

#include "core/bigram.hpp"

namespace glimmer::bigram {

Bytes EventLog::to_bytes() const {
  ByteWriter w;
  for (const Event& e : events) {
    w.u64(e.timestamp_ms);
    w.u32(e.word);
  }
  return w.take();
}

Result<EventLog> EventLog::from_bytes(ConstBytes data) {
  if (data.size() % 12 != 0) return make_error(ErrorCode::kDecodeError, "event log layout");
  EventLog log;
  ByteReader r(data);
  log.events.resize(data.size() / 12);
  for (Event& e : log.events) {
    r.u64(e.timestamp_ms);
    r.u32(e.word);
  }
  return log;
}

void EventLog::zeroize() {
  if (!events.empty()) secure_zero(events.data(), events.size() * sizeof(Event));
  events.clear();
}

Status validate_log(const EventLog& log, uint32_t vocab) {
  uint64_t prev = 0;
  bool first = true;
  for (const Event& e : log.events) {
    if (!first && e.timestamp_ms <= prev)
      return make_error(ErrorCode::kValidationFailed, "timestamps must strictly increase");
    if (e.word >= vocab)
      return make_error(ErrorCode::kValidationFailed, "word id outside vocabulary");
    prev = e.timestamp_ms;
    first = false;
  }
  return {};
}

crypto::ModelVector train_local(const EventLog& log, uint32_t vocab, uint64_t round_id,
                                Normalization normalization) {
  const size_t v = static_cast<size_t>(vocab) * vocab;
  crypto::ModelVector x;
  x.round_id = round_id;
  x.entries.assign(v, crypto::FixedWeight{0});

  std::vector<uint64_t> counts(v, 0);
  std::vector<uint64_t> from_counts(vocab, 0);
  uint64_t total = 0;
  for (size_t i = 1; i < log.events.size(); ++i) {
    const uint32_t a = log.events[i - 1].word;
    const uint32_t b = log.events[i].word;
    ++counts[static_cast<size_t>(a) * vocab + b];
    ++from_counts[a];
    ++total;
  }

  for (size_t idx = 0; idx < v; ++idx) {
    const uint64_t c = counts[idx];
    if (c == 0) continue;
    const uint64_t denom =
        normalization == Normalization::kJoint ? total : from_counts[idx / vocab];
    // Round half up: floor(kScale * c / denom + 1/2) in exact integer math.
    x.entries[idx].raw = (2 * crypto::kScale * c + denom) / (2 * denom);
  }
  return x;
}

}  // namespace glimmer::bigram
