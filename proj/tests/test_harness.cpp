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

// End-to-end runs of the bundled scenarios through the simulation harness.

#include <algorithm>
#include <string>
#include <vector>

#include <doctest.h>

#include "core/harness.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"

namespace glimmer::sim {
namespace {

RunOutput run_builtin(const std::string& name, RunOptions options = {}) {
  auto config = resolve_scenario(name);
  REQUIRE(config.ok());
  auto out = run_scenario(*config, options);
  REQUIRE(out.ok());
  return std::move(*out);
}

bool has_event(const RunReport& report, uint64_t client_id, const std::string& prefix) {
  for (const EventRecord& e : report.events)
    if (e.client_id == client_id && e.note.rfind(prefix, 0) == 0) return true;
  return false;
}

const RoundRecord& round_of(const RunReport& report, uint64_t round_id) {
  for (const RoundRecord& r : report.round_records)
    if (r.round_id == round_id) return r;
  REQUIRE(false);
  return report.round_records.front();
}

uint64_t reason_count(const RoundRecord& r, const std::string& reason) {
  auto it = r.reject_reasons.find(reason);
  return it == r.reject_reasons.end() ? 0 : it->second;
}

TEST_CASE("honest scenario closes every round exactly with no violations") {
  RunOutput out = run_builtin("honest_10");
  const RunReport& rep = out.report;

  CHECK(rep.scenario == "honest_10");
  CHECK(rep.seed == 42);
  CHECK(rep.transport == "bus");
  CHECK(rep.violations.empty());
  CHECK(rep.flags.empty());
  REQUIRE(rep.round_records.size() == 2);
  for (const RoundRecord& r : rep.round_records) {
    CHECK(r.accepted == 10);
    CHECK(r.rejected == 0);
    CHECK(r.submitters == 10);
    CHECK(!r.empty_round);
    CHECK(r.exact);
    CHECK(r.sums == r.oracle);
    // The deployed ranking agrees with an independent ranking of the oracle.
    REQUIRE(r.predictions.size() == r.oracle_predictions.size());
    for (size_t i = 0; i < r.predictions.size(); ++i) {
      CHECK(r.predictions[i].word == r.oracle_predictions[i].word);
      CHECK(r.predictions[i].ranked == r.oracle_predictions[i].ranked);
    }
  }

  // Secrets were scrubbed inside the enclaves along the way.
  CHECK(rep.zeroize_events > 0);

  // 1 aggregation + 1 blinding + 10 clients.
  CHECK(rep.actors.size() == 12);
  size_t clients = 0;
  for (const ActorRecord& a : rep.actors)
    if (a.role == "client") ++clients;
  CHECK(clients == 10);
  // Three sentinels per client were registered for the leak scan.
  CHECK(rep.sentinels.size() == 30);

  CHECK(!out.report_text.empty());
  CHECK(!out.transcript_text.empty());
}

TEST_CASE("runs are deterministic for a fixed seed and diverge when it changes") {
  RunOutput a = run_builtin("honest_10");
  RunOutput b = run_builtin("honest_10");
  CHECK(a.report_text == b.report_text);
  CHECK(a.transcript_text == b.transcript_text);

  RunOptions options;
  options.has_seed = true;
  options.seed = 43;
  RunOutput c = run_builtin("honest_10", options);
  CHECK(c.report.seed == 43);
  CHECK(c.report.violations.empty());
  CHECK(c.report_text != a.report_text);
}

TEST_CASE("out-of-range attacker never lands a contribution") {
  RunOutput out = run_builtin("alice_538");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];

  // The glimmer refused to sign, the raw fallback bounced on its signature,
  // and the aggregate covers exactly the three honest clients.
  CHECK(has_event(rep, 1, "planted_out_of_range:"));
  CHECK(has_event(rep, 1, "validation_failed:out_of_range:"));
  CHECK(has_event(rep, 1, "raw_send_after_refusal"));
  CHECK(has_event(rep, 1, "service_rejected:BadSignature"));
  CHECK(r.accepted == 3);
  CHECK(r.rejected == 1);
  CHECK(reason_count(r, "BadSignature") == 1);
  CHECK(r.exact);

  // The raw bypass put model bytes on the wire. The scanner saw them, and
  // because the sender is a declared adversary they land in flags.
  REQUIRE(!rep.flags.empty());
  bool about_client_1 = false;
  for (const std::string& f : rep.flags)
    if (f.find("client 1") != std::string::npos) about_client_1 = true;
  CHECK(about_client_1);
}

TEST_CASE("dropout repair closes the round over the seven survivors") {
  RunOutput out = run_builtin("dropout_10_3");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  CHECK(r.dropped == std::vector<uint64_t>{3, 7, 9});
  CHECK(r.accepted == 7);
  CHECK(r.submitters == 7);
  CHECK(r.exact);
}

TEST_CASE("replayed contributions are rejected in-round and across rounds") {
  RunOutput out = run_builtin("replay_attack");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  REQUIRE(rep.round_records.size() == 2);

  // Round one: the duplicate bounces off the per-round replay set.
  const RoundRecord& r1 = round_of(rep, 1);
  CHECK(r1.accepted == 3);
  CHECK(reason_count(r1, "Replay") == 1);
  CHECK(r1.exact);

  // Round two: a fresh duplicate plus the stale round-one resend.
  const RoundRecord& r2 = round_of(rep, 2);
  CHECK(r2.accepted == 3);
  CHECK(reason_count(r2, "Replay") == 1);
  CHECK(reason_count(r2, "RoundClosed") == 1);
  CHECK(r2.exact);

  CHECK(has_event(rep, 3, "replayed_same_round"));
  CHECK(has_event(rep, 3, "replayed_stale_round"));
}

TEST_CASE("tampered glimmer code is locked out of enrollment and signing") {
  RunOutput out = run_builtin("tampered_code");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  // The forged quote fails enrollment; the sealed signing key refuses to
  // open inside the modified enclave.
  CHECK(has_event(rep, 3, "enroll_rejected:AttestationFailure"));
  CHECK(has_event(rep, 3, "unseal_failure"));

  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  CHECK(r.accepted == 2);
  CHECK(r.rejected == 0);
  CHECK(r.exact);
}

TEST_CASE("fabricated in-range vector fails in-enclave corroboration") {
  RunOutput out = run_builtin("corroboration_gate");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  CHECK(has_event(rep, 4, "fabricated_vector"));
  CHECK(has_event(rep, 4, "validation_failed:deviation:"));

  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  // The fabricated vector never even reached the service.
  CHECK(r.accepted == 3);
  CHECK(r.rejected == 0);
  CHECK(r.exact);
}

TEST_CASE("remote glimmer hub serves three thin clients cleanly") {
  RunOutput out = run_builtin("remote_iot");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  CHECK(rep.flags.empty());

  bool hub_listed = false;
  size_t remote_clients = 0;
  for (const ActorRecord& a : rep.actors) {
    if (a.role == "remote" && a.name == "remote/1") hub_listed = true;
    if (a.role == "client" && a.glimmer == "remote/1") ++remote_clients;
  }
  CHECK(hub_listed);
  CHECK(remote_clients == 3);

  REQUIRE(rep.round_records.size() == 2);
  for (const RoundRecord& r : rep.round_records) {
    CHECK(r.accepted == 5);
    CHECK(r.exact);
  }
}

TEST_CASE("confidential validation admits typists and excludes bots") {
  RunOutput out = run_builtin("bot_gate");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  REQUIRE(rep.audits.size() == 5);
  for (const AuditRecord& a : rep.audits) {
    CHECK(a.reason == "pass");  // every verdict is authentic and well formed
    if (a.client_id <= 3) {
      CHECK(a.verdict == 1);
      CHECK(a.admitted);
    } else {
      CHECK(a.verdict == 0);
      CHECK(!a.admitted);
    }
  }
  CHECK(has_event(rep, 4, "skipped:not_admitted"));
  CHECK(has_event(rep, 5, "skipped:not_admitted"));

  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  CHECK(r.accepted == 3);
  CHECK(r.exact);
}

TEST_CASE("public and blinded contributions aggregate together") {
  RunOutput out = run_builtin("public_mix");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  CHECK(rep.flags.empty());  // public model disclosure is sanctioned
  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  CHECK(r.accepted == 5);
  CHECK(r.exact);
}

TEST_CASE("aggregate statistics surface the trending next word") {
  RunOutput out = run_builtin("trending_trump");
  const RunReport& rep = out.report;

  CHECK(rep.violations.empty());
  REQUIRE(rep.round_records.size() == 1);
  const RoundRecord& r = rep.round_records[0];
  CHECK(r.exact);
  REQUIRE(!r.predictions.empty());
  CHECK(r.predictions[0].word == "donald");
  REQUIRE(!r.predictions[0].ranked.empty());
  CHECK(r.predictions[0].ranked[0] == "trump");
  REQUIRE(!r.oracle_predictions[0].ranked.empty());
  CHECK(r.oracle_predictions[0].ranked[0] == "trump");
}

TEST_CASE("socket transport produces the same aggregates as the bus") {
  RunOutput bus = run_builtin("honest_10");
  RunOptions options;
  options.transport = "socket";
  RunOutput sock = run_builtin("honest_10", options);

  CHECK(sock.report.transport == "socket");
  CHECK(sock.report.violations.empty());
  REQUIRE(sock.report.round_records.size() == bus.report.round_records.size());
  for (size_t i = 0; i < sock.report.round_records.size(); ++i) {
    CHECK(sock.report.round_records[i].sums == bus.report.round_records[i].sums);
    CHECK(sock.report.round_records[i].exact);
  }
}

TEST_CASE("disabling blinding is caught by the transcript scanner") {
  auto config = resolve_scenario("honest_10");
  REQUIRE(config.ok());
  config->debug_skip_blinding = true;
  auto out = run_scenario(*config);
  REQUIRE(out.ok());

  // Zero pads keep the arithmetic exact but put raw model bytes on the wire.
  for (const RoundRecord& r : out->report.round_records) CHECK(r.exact);
  REQUIRE(!out->report.violations.empty());
  bool mentions_model = false;
  for (const std::string& v : out->report.violations)
    if (v.find("sentinel model") != std::string::npos) mentions_model = true;
  CHECK(mentions_model);
}

TEST_CASE("offline verification reproduces the embedded scan results") {
  RunOutput clean = run_builtin("honest_10");
  auto scan = verify_transcripts(clean.report_text, clean.transcript_text);
  REQUIRE(scan.ok());
  CHECK(scan->violations.empty());
  CHECK(scan->flags.empty());

  auto config = resolve_scenario("honest_10");
  REQUIRE(config.ok());
  config->debug_skip_blinding = true;
  auto leaky = run_scenario(*config);
  REQUIRE(leaky.ok());
  auto rescan = verify_transcripts(leaky->report_text, leaky->transcript_text);
  REQUIRE(rescan.ok());
  CHECK(rescan->violations == leaky->report.violations);
  CHECK(rescan->flags == leaky->report.flags);
}

TEST_CASE("transcript capture can be toggled without affecting the scan") {
  RunOptions options;
  options.capture_transcripts = 0;
  RunOutput out = run_builtin("honest_10", options);
  CHECK(out.transcript_text.empty());
  CHECK(out.report.violations.empty());  // scanning always runs in memory
}

TEST_CASE("unknown transport is rejected up front") {
  auto config = resolve_scenario("honest_10");
  REQUIRE(config.ok());
  RunOptions options;
  options.transport = "carrier-pigeon";
  auto out = run_scenario(*config, options);
  REQUIRE(!out.ok());
  CHECK(out.code() == ErrorCode::kConfigError);
}

}  // namespace
}  // namespace glimmer::sim
