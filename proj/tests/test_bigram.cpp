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
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "doctest.h"

namespace glimmer::bigram {
namespace {

EventLog log_of(std::initializer_list<uint32_t> words) {
  EventLog log;
  uint64_t t = 1000;
  for (uint32_t w : words) {
    log.events.push_back(Event{t, w});
    t += 10;
  }
  return log;
}

TEST_CASE("alternating words split the mass evenly") {
  // a b a b a: four bigrams, two each way, so both directions carry 0.5.
  EventLog log = log_of({0, 1, 0, 1, 0});
  crypto::ModelVector x = train_local(log, 2, 1);
  REQUIRE(x.entries.size() == 4);
  CHECK(x.entries[0].raw == 0);       // a->a
  CHECK(x.entries[1].raw == 500000);  // a->b
  CHECK(x.entries[2].raw == 500000);  // b->a
  CHECK(x.entries[3].raw == 0);       // b->b
  CHECK(x.round_id == 1);
}

TEST_CASE("a single bigram takes all the mass") {
  EventLog log = log_of({0, 1});
  crypto::ModelVector x = train_local(log, 2, 7);
  CHECK(x.entries[1].raw == 1000000);
  CHECK(x.entries[0].raw + x.entries[2].raw + x.entries[3].raw == 0);
}

TEST_CASE("joint weights sum to kScale up to rounding") {
  EventLog log = log_of({0, 1, 2, 0, 2, 1, 0, 0, 1});
  crypto::ModelVector x = train_local(log, 3, 1);
  uint64_t total = 0;
  for (auto& e : x.entries) {
    CHECK(e.in_unit_range());
    total += e.raw;
  }
  // 8 bigrams: every weight is round(k/8 * 10^6), so the sum is exact here.
  CHECK(total == 1000000);
}

TEST_CASE("rounding is half up") {
  // 1 of 3 bigrams: 333333.33.. -> 333333; 2 of 3: 666666.66.. -> 666667.
  EventLog log = log_of({0, 1, 1, 1});
  crypto::ModelVector x = train_local(log, 2, 1);
  CHECK(x.entries[1].raw == 333333);  // a->b once
  CHECK(x.entries[3].raw == 666667);  // b->b twice
}

TEST_CASE("conditional normalization divides by the predecessor count") {
  // a a a b: from a the successors are a,a,b.
  EventLog log = log_of({0, 0, 0, 1});
  crypto::ModelVector joint = train_local(log, 2, 1, Normalization::kJoint);
  CHECK(joint.entries[0].raw == 666667);   // 2/3 of all bigrams
  CHECK(joint.entries[1].raw == 333333);
  crypto::ModelVector cond = train_local(log, 2, 1, Normalization::kConditional);
  CHECK(cond.entries[0].raw == 666667);    // 2/3 of bigrams leaving a
  CHECK(cond.entries[1].raw == 333333);    // 1/3 of bigrams leaving a

  // b never leads anywhere: its row stays zero under both normalizations.
  CHECK(cond.entries[2].raw == 0);
  CHECK(cond.entries[3].raw == 0);
}

TEST_CASE("conditional rows are independent distributions") {
  // a a b b a: leaving a: a,b (one each); leaving b: b,a (one each).
  EventLog log = log_of({0, 0, 1, 1, 0});
  crypto::ModelVector cond = train_local(log, 2, 1, Normalization::kConditional);
  CHECK(cond.entries[0].raw == 500000);
  CHECK(cond.entries[1].raw == 500000);
  CHECK(cond.entries[2].raw == 500000);
  CHECK(cond.entries[3].raw == 500000);
}

TEST_CASE("empty and single-word logs train to zero") {
  EventLog empty;
  crypto::ModelVector x = train_local(empty, 3, 2);
  REQUIRE(x.entries.size() == 9);
  for (auto& e : x.entries) CHECK(e.raw == 0);
  EventLog one = log_of({2});
  crypto::ModelVector y = train_local(one, 3, 2);
  for (auto& e : y.entries) CHECK(e.raw == 0);
}

TEST_CASE("training is deterministic") {
  EventLog log = log_of({0, 1, 2, 1, 0, 2});
  crypto::ModelVector a = train_local(log, 3, 5);
  crypto::ModelVector b = train_local(log, 3, 5);
  CHECK(a.entries == b.entries);
}

TEST_CASE("log validation enforces order and vocabulary") {
  EventLog ok = log_of({0, 1, 2});
  CHECK(validate_log(ok, 3).ok());

  EventLog bad_word = log_of({0, 3});
  CHECK(validate_log(bad_word, 3).code() == ErrorCode::kValidationFailed);

  EventLog stuck;
  stuck.events = {Event{5, 0}, Event{5, 1}};  // equal timestamps
  CHECK(validate_log(stuck, 3).code() == ErrorCode::kValidationFailed);

  EventLog reversed;
  reversed.events = {Event{9, 0}, Event{5, 1}};
  CHECK(validate_log(reversed, 3).code() == ErrorCode::kValidationFailed);
}

TEST_CASE("log serialization round trips") {
  EventLog log = log_of({3, 1, 4});
  Bytes wire = log.to_bytes();
  CHECK(wire.size() == 3 * 12);
  auto back = EventLog::from_bytes(as_bytes(wire));
  REQUIRE(back.ok());
  CHECK(back->events == log.events);
  wire.pop_back();
  CHECK(!EventLog::from_bytes(as_bytes(wire)).ok());
}

TEST_CASE("zeroize empties the log") {
  EventLog log = log_of({1, 2});
  log.zeroize();
  CHECK(log.events.empty());
}

}  // namespace
}  // namespace glimmer::bigram
