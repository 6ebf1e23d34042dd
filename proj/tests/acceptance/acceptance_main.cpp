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

// Release gate. Each numbered check prints exactly one PASS or FAIL line;
// the process exits nonzero if anything failed. Tolerances are pinned here
// on purpose: loosening them is a visible diff.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/aggregation.hpp"
#include "core/akx.hpp"
#include "core/bigram.hpp"
#include "core/blinding.hpp"
#include "core/client.hpp"
#include "core/common.hpp"
#include "core/confidential.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/harness.hpp"
#include "core/remote.hpp"
#include "core/report.hpp"
#include "core/rng.hpp"
#include "core/scenario.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer {
namespace {

// Chi-square critical value: 15 degrees of freedom, significance 0.001.
constexpr double kChiSquareCritical = 37.69729821835383;
constexpr int kChiSquareBuckets = 16;
constexpr int kChiSquareDraws = 10000;

// A failed check returns its reason; a passing check returns nothing.
using CheckResult = std::optional<std::string>;

#define EXPECT(cond, message)                 \
  do {                                        \
    if (!(cond)) return std::string(message); \
  } while (0)

std::string fmt_u64(uint64_t v) { return std::to_string(v); }

sim::RunOutput must_run(const std::string& name) {
  auto config = sim::resolve_scenario(name);
  if (!config.ok()) {
    std::fprintf(stderr, "fatal: cannot resolve scenario %s\n", name.c_str());
    std::exit(2);
  }
  auto out = sim::run_scenario(*config);
  if (!out.ok()) {
    std::fprintf(stderr, "fatal: scenario %s did not run\n", name.c_str());
    std::exit(2);
  }
  return std::move(*out);
}

// ---------------------------------------------------------------------------
// 1. Exact aggregation across random instance sizes, against a plaintext
//    oracle, through the real service round machinery.

CheckResult check_exact_aggregation() {
  const auto start = std::chrono::steady_clock::now();
  const size_t kClientCounts[] = {1, 3, 10, 100};
  const uint32_t kVectorLengths[] = {1, 100, 10000};

  DetRng rng(root_seed_from_u64(0xA66E55));
  for (int trial = 0; trial < 50; ++trial) {
    const std::string t = std::to_string(trial);
    const size_t n = kClientCounts[rng.bounded(4)];
    const uint32_t v = kVectorLengths[rng.bounded(3)];

    tee::Platform platform(rng.derive("platform/" + t).seed32());
    aggregation::AggregationService service(platform, rng.derive("service/" + t),
                                            aggregation::ServiceConfig{});
    Bytes code = core::make_glimmer_code("acceptance-aggregation", service.ops_key());
    tee::Measurement approved = tee::measure(code);
    service.provision_signing_key(approved);
    tee::Enclave enclave(platform, code);
    blinding::BlindingService blinder(platform, service.ops_key());
    core::ValidationPolicy policy;  // range [0, kScale]

    DetRng client_rng = rng.derive("clients/" + t);
    std::vector<crypto::BoxKeyPair> boxes(n);
    for (size_t i = 0; i < n; ++i) {
      const uint64_t id = i + 1;
      boxes[i] = crypto::box_keypair_from_seed(
          client_rng.derive("box/" + std::to_string(id)).seed32());
      ByteWriter w;
      w.u64(id);
      w.bytes(boxes[i].public_key);
      Status s = service.enroll(id, boxes[i].public_key, enclave.quote(w.view()), false);
      EXPECT(s.ok(), "trial " + t + ": enrollment refused");
    }

    EXPECT(service.open_round(1, 1000, v).ok(), "trial " + t + ": round failed to open");
    auto roster = service.blinding_roster(1);
    EXPECT(roster.ok() && roster->size() == n, "trial " + t + ": bad roster");
    blinding::RoundRoster rr{1, *roster, approved, v};
    auto issues = blinder.provision_round(rr, rng.derive("pads/" + t).seed32());
    EXPECT(issues.ok() && issues->size() == n, "trial " + t + ": pad provisioning failed");

    std::vector<uint64_t> oracle(v, 0);
    for (const blinding::PadIssue& issue : *issues) {
      const size_t i = issue.client_id - 1;
      auto envelope = crypto::box_open(issue.envelope, boxes[i]);
      EXPECT(envelope.ok(), "trial " + t + ": pad envelope refused to open");
      auto sealed_pad = tee::SealedBlob::from_bytes(*envelope);
      EXPECT(sealed_pad.ok(), "trial " + t + ": pad blob undecodable");

      core::GlimmerRequest req;
      req.round_id = 1;
      req.client_id = issue.client_id;
      req.x.round_id = 1;
      req.x.entries.resize(v);
      DetRng xr = client_rng.derive("x/" + std::to_string(issue.client_id));
      for (size_t j = 0; j < v; ++j) {
        req.x.entries[j].raw = xr.bounded(crypto::kScale + 1);
        oracle[j] += req.x.entries[j].raw;
      }
      auto sc = core::run_glimmer(req, &*sealed_pad, service.sealed_signing_key(), policy,
                                  enclave);
      EXPECT(sc.ok(), "trial " + t + ": pipeline refused an honest vector");
      aggregation::AcceptResult accepted = service.accept(*sc, 1);
      EXPECT(accepted.accepted, "trial " + t + ": service refused an endorsed vector");
    }

    aggregation::DirectBlindingChannel channel(&blinder);
    auto global = service.finalize_round(1, channel);
    EXPECT(global.ok(), "trial " + t + ": finalize failed");
    EXPECT(global->submitter_count == n, "trial " + t + ": submitter count off");
    EXPECT(global->sums == oracle,
           "trial " + t + ": aggregate differs from the plaintext oracle (n=" + fmt_u64(n) +
               ", v=" + fmt_u64(v) + ")");
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT(elapsed < 10.0,
         "50 instances took " + std::to_string(elapsed) + "s; the budget is 10s");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 2. The out-of-range weight attack: never signed, bypass bounced, aggregate
//    equals an independently recomputed honest-only sum.

CheckResult check_weight_attack_contained() {
  auto config = sim::resolve_scenario("alice_538");
  EXPECT(config.ok(), "scenario missing");
  auto out = sim::run_scenario(*config);
  EXPECT(out.ok(), "scenario did not run");
  const sim::RunReport& rep = out->report;

  EXPECT(rep.violations.empty(), "run reported violations");
  EXPECT(rep.round_records.size() == 1, "expected one round");
  const sim::RoundRecord& r = rep.round_records[0];

  bool refused = false;
  bool raw_send = false;
  for (const sim::EventRecord& e : rep.events) {
    if (e.client_id != 1) continue;
    if (e.note.rfind("validation_failed:out_of_range:", 0) == 0) refused = true;
    if (e.note == "raw_send_after_refusal") raw_send = true;
  }
  EXPECT(refused, "the glimmer signed (or otherwise accepted) the illegal weight");
  EXPECT(raw_send, "the bypass path never ran");
  EXPECT(r.accepted == 3, "accepted count is not the three honest clients");
  auto bad_sig = r.reject_reasons.find("BadSignature");
  EXPECT(bad_sig != r.reject_reasons.end() && bad_sig->second == 1,
         "the raw bypass was not rejected as BadSignature");

  // Recompute the honest-only sum from the scenario alone, replaying the
  // deterministic log construction, and compare with the published sums.
  const uint32_t vocab = static_cast<uint32_t>(config->vocabulary.size());
  std::vector<uint64_t> honest(size_t(vocab) * vocab, 0);
  DetRng root(root_seed_from_u64(config->seed));
  for (const sim::ClientSpec& spec : config->clients) {
    if (spec.adversary != client::AdversaryMode::kHonest) continue;
    std::vector<std::vector<uint32_t>> phrases;
    for (const auto& phrase : spec.phrases) {
      std::vector<uint32_t> ids;
      for (const std::string& w : phrase)
        ids.push_back(static_cast<uint32_t>(config->word_index(w)));
      phrases.push_back(std::move(ids));
    }
    DetRng log_rng = root.derive("log/" + std::to_string(spec.id));
    bigram::EventLog log = client::build_event_log(phrases, spec.repeat, log_rng);
    crypto::ModelVector x = bigram::train_local(log, vocab, 1, config->policy.normalization);
    for (size_t j = 0; j < honest.size(); ++j) honest[j] += x.entries[j].raw;
  }
  EXPECT(r.sums == honest, "published aggregate differs from the honest-only oracle");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 3. Dropout repair plus the refusal that protects submitters.

CheckResult check_dropout_repair() {
  sim::RunOutput out = must_run("dropout_10_3");
  const sim::RunReport& rep = out.report;
  EXPECT(rep.violations.empty(), "run reported violations");
  EXPECT(rep.round_records.size() == 1, "expected one round");
  const sim::RoundRecord& r = rep.round_records[0];
  EXPECT((r.dropped == std::vector<uint64_t>{3, 7, 9}), "wrong dropout set");
  EXPECT(r.submitters == 7, "wrong submitter count");
  EXPECT(r.exact, "seven-submitter aggregate is not exact");

  // Direct refusal check: a reveal request naming a client that submitted.
  DetRng rng(root_seed_from_u64(333));
  tee::Platform platform(rng.derive("platform").seed32());
  crypto::SigningKeyPair ops = crypto::signing_keypair_from_seed(rng.derive("ops").seed32());
  blinding::BlindingService blinder(platform, ops.public_key);
  tee::Measurement approved = tee::measure(Bytes{1, 2, 3});

  blinding::RoundRoster roster;
  roster.round_id = 1;
  roster.approved_measurement = approved;
  roster.vector_length = 8;
  DetRng boxes = rng.derive("boxes");
  for (uint64_t id = 1; id <= 10; ++id)
    roster.participants.push_back(
        {id, crypto::box_keypair_from_seed(boxes.derive(std::to_string(id)).seed32())
                 .public_key});
  auto issues = blinder.provision_round(roster, rng.derive("pads").seed32());
  EXPECT(issues.ok(), "provisioning failed");

  blinding::RevealRequest request;
  request.round_id = 1;
  request.missing = {3};
  request.accepted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};  // 3 actually submitted
  request.credential = crypto::sign(request.signed_region(), ops.secret);
  auto refused = blinder.reveal_dropout_pads(request);
  EXPECT(!refused.ok(), "the blinding service revealed a submitter's pad");
  EXPECT(refused.code() == ErrorCode::kNotMissing, "refusal carried the wrong reason");
  EXPECT(blinder.round_retained(1), "round state was dropped on a refused request");

  // The honest repair for contrast: those three really are missing.
  request.missing = {3, 7, 9};
  request.accepted = {1, 2, 4, 5, 6, 8, 10};
  request.credential = crypto::sign(request.signed_region(), ops.secret);
  auto pads = blinder.reveal_dropout_pads(request);
  EXPECT(pads.ok() && pads->size() == 3, "legitimate dropout reveal failed");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 4. Hiding: blinded entries look uniform, and no sentinel bytes reach the
//    wire in honest runs (with a negative control for the scanner).

CheckResult check_hiding() {
  // Chi-square of the top four bits of each blinded entry over fresh seeds.
  const uint64_t kFixedEntries[] = {0, 123456, 500000, crypto::kScale};
  const size_t v = 4;
  uint64_t buckets[v][kChiSquareBuckets];
  for (size_t j = 0; j < v; ++j)
    for (int b = 0; b < kChiSquareBuckets; ++b) buckets[j][b] = 0;

  crypto::ModelVector x;
  x.round_id = 1;
  for (uint64_t raw : kFixedEntries) x.entries.push_back({raw});

  for (int s = 0; s < kChiSquareDraws; ++s) {
    DetRng seeder(root_seed_from_u64(0xB11D + uint64_t(s)));
    auto pads = crypto::gen_pads(2, v, seeder.seed32(), 1);
    EXPECT(pads.ok(), "pad generation failed");
    auto y = crypto::blind(x, (*pads)[0]);
    EXPECT(y.ok(), "blinding failed");
    for (size_t j = 0; j < v; ++j) buckets[j][y->entries[j] >> 60] += 1;
  }

  const double expected = double(kChiSquareDraws) / kChiSquareBuckets;
  for (size_t j = 0; j < v; ++j) {
    double chi2 = 0.0;
    for (int b = 0; b < kChiSquareBuckets; ++b) {
      const double d = double(buckets[j][b]) - expected;
      chi2 += d * d / expected;
    }
    EXPECT(chi2 < kChiSquareCritical,
           "entry " + fmt_u64(j) + " fails uniformity: chi2 = " + std::to_string(chi2) +
               " >= " + std::to_string(kChiSquareCritical));
  }

  // Honest runs leak nothing the scanner can see.
  for (const char* name : {"honest_10", "public_mix", "remote_iot"}) {
    sim::RunOutput out = must_run(name);
    EXPECT(out.report.violations.empty(),
           std::string(name) + " leaked: " + out.report.violations.front());
  }

  // Negative control: disable blinding and the scanner must object.
  auto config = sim::resolve_scenario("honest_10");
  EXPECT(config.ok(), "scenario missing");
  config->debug_skip_blinding = true;
  auto leaky = sim::run_scenario(*config);
  EXPECT(leaky.ok(), "control run failed");
  EXPECT(!leaky->report.violations.empty(),
         "scanner missed plaintext models on the wire");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 5. One flipped code byte kills attestation and sealing, 100 times out of
//    100, and such a client lands nothing.

CheckResult check_attestation_gate() {
  DetRng rng(root_seed_from_u64(0x7EE));
  tee::Platform platform(rng.derive("platform").seed32());
  const Bytes code = core::make_glimmer_code("acceptance-attestation");
  const tee::Measurement approved = tee::measure(code);
  const Bytes secret = {9, 8, 7, 6, 5};
  const tee::SealedBlob sealed = platform.seal(secret, approved);

  int quote_failures = 0;
  int unseal_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Bytes tampered = code;
    tampered[size_t(trial) % tampered.size()] ^=
        uint8_t(1 + (size_t(trial) / tampered.size()));
    tee::Enclave evil(platform, tampered);
    tee::Quote q = evil.quote(Bytes{1});
    if (!tee::verify_quote(q, approved, platform.attestation_key())) quote_failures += 1;
    if (!evil.unseal(sealed).ok()) unseal_failures += 1;
  }
  EXPECT(quote_failures == 100,
         "forged quotes verified in " + fmt_u64(100 - quote_failures) + " trials");
  EXPECT(unseal_failures == 100,
         "sealed data opened in " + fmt_u64(100 - unseal_failures) + " trials");

  sim::RunOutput out = must_run("tampered_code");
  const sim::RunReport& rep = out.report;
  EXPECT(rep.violations.empty(), "run reported violations");
  bool enroll_refused = false;
  bool unseal_refused = false;
  for (const sim::EventRecord& e : rep.events) {
    if (e.client_id != 3) continue;
    if (e.note == "enroll_rejected:AttestationFailure") enroll_refused = true;
    if (e.note == "unseal_failure") unseal_refused = true;
  }
  EXPECT(enroll_refused, "the tampered client enrolled");
  EXPECT(unseal_refused, "the tampered client opened the signing key");
  EXPECT(rep.round_records.size() == 1 && rep.round_records[0].accepted == 2,
         "the tampered client landed a contribution");
  EXPECT(rep.round_records[0].exact, "the surviving aggregate is not exact");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 6. Covert-channel bound: the auditor admits exactly well-formed replies to
//    the outstanding challenge; equal verdicts give identical bytes.

CheckResult check_covert_channel_bound() {
  DetRng root(root_seed_from_u64(0xC0DE));
  tee::Platform platform(root.derive("platform").seed32());
  crypto::SigningKeyPair contribution =
      crypto::signing_keypair_from_seed(root.derive("contribution").seed32());
  crypto::SigningKeyPair ops = crypto::signing_keypair_from_seed(root.derive("ops").seed32());
  Bytes code = core::make_glimmer_code("acceptance-confidential", ops.public_key);
  tee::Enclave enclave(platform, code);
  tee::Measurement approved = tee::measure(code);
  tee::SealedBlob sealed_sk = platform.seal(contribution.secret.bytes, approved);

  // Deliver a validator over the bound channel.
  DetRng service_rng = root.derive("service");
  DetRng glimmer_rng = root.derive("glimmer");
  crypto::ServiceSignatureBindingMaker binder(&ops.secret);
  crypto::AkxInitiator initiator(service_rng, &binder);
  auto response = confidential::glimmer_accept_channel(initiator.hello(), enclave, glimmer_rng);
  EXPECT(response.ok(), "glimmer refused the service channel");
  auto session = initiator.complete(
      *response, confidential::glimmer_quote_expectation(approved, platform.attestation_key()));
  EXPECT(session.ok(), "service rejected the glimmer binding");
  confidential::SecretValidator validator;
  validator.program = "(>= (signal taps) 3)";
  auto version =
      confidential::install_validator(confidential::encrypt_validator(*session, validator),
                                      enclave);
  EXPECT(version.ok(), "validator install failed");

  const uint64_t round = 12;
  confidential::ChallengeNonce nonce{};
  root.derive("nonce").fill(nonce);

  confidential::SignalRecord humanlike;
  humanlike.values["taps"] = 10;
  auto genuine = confidential::run_confidential(humanlike, round, nonce, sealed_sk, enclave);
  EXPECT(genuine.ok(), "verdict production failed");
  Bytes genuine_bytes = genuine->to_bytes();
  EXPECT(genuine_bytes.size() == confidential::kVerdictMessageSize, "wrong verdict size");

  confidential::Auditor auditor(contribution.public_key);
  auditor.expect(round, nonce);
  EXPECT(auditor.audit_message(genuine_bytes) == confidential::AuditReason::kPass,
         "the genuine verdict failed its own audit");

  // Fuzz: random blobs, resizings, and single-byte corruptions. None may
  // pass; the only admissible message is the genuine one itself.
  DetRng fuzz = root.derive("fuzz");
  int passed = 0;
  for (int i = 0; i < 1000; ++i) {
    Bytes candidate;
    switch (i % 3) {
      case 0: {  // arbitrary bytes, arbitrary length
        fuzz.fill(candidate, fuzz.bounded(200));
        break;
      }
      case 1: {  // genuine message with one corrupted byte
        candidate = genuine_bytes;
        size_t pos = fuzz.bounded(candidate.size());
        candidate[pos] ^= uint8_t(1 + fuzz.bounded(255));
        break;
      }
      default: {  // genuine message truncated or extended
        candidate = genuine_bytes;
        if (i % 2 == 0 && !candidate.empty()) {
          candidate.resize(fuzz.bounded(candidate.size()));
        } else {
          candidate.push_back(uint8_t(fuzz.bounded(256)));
        }
        break;
      }
    }
    if (candidate.size() == genuine_bytes.size() &&
        std::equal(candidate.begin(), candidate.end(), genuine_bytes.begin()))
      continue;  // fuzz reproduced the genuine message; nothing corrupted
    if (auditor.audit_message(candidate) == confidential::AuditReason::kPass) passed += 1;
  }
  EXPECT(passed == 0, fmt_u64(passed) + " corrupted messages passed the audit");

  // A different client state with the same verdict bit: identical bytes, so
  // the message carries the verdict and nothing else.
  confidential::SignalRecord different;
  different.values["taps"] = 4000;
  different.interaction_timestamps = {1, 2, 3};
  auto again = confidential::run_confidential(different, round, nonce, sealed_sk, enclave);
  EXPECT(again.ok(), "second verdict production failed");
  EXPECT(again->to_bytes() == genuine_bytes,
         "equal (round, nonce, verdict) produced different bytes");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 7. A remote glimmer returns byte-identical results to a local run, and no
//    private payload precedes attestation in any bundled transcript.

CheckResult check_remote_equivalence() {
  DetRng root(root_seed_from_u64(0x10CA1));
  tee::Platform platform(root.derive("platform").seed32());
  crypto::SigningKeyPair contribution =
      crypto::signing_keypair_from_seed(root.derive("contribution").seed32());
  Bytes code = core::make_glimmer_code("acceptance-remote");
  tee::Measurement approved = tee::measure(code);
  tee::SealedBlob sealed_sk = platform.seal(contribution.secret.bytes, approved);
  core::ValidationPolicy policy;

  remote::RemoteGlimmerHost host(platform, code, sealed_sk, policy, root.derive("host"));
  tee::Enclave local(platform, code);

  remote::RemoteClientChannel channel(root.derive("channel"));
  auto reply = host.handle_hello(7, channel.hello_bytes());
  EXPECT(reply.ok(), "host refused the hello");
  EXPECT(channel.complete(*reply, {7, approved, platform.attestation_key()}).ok(),
         "host attestation failed");

  DetRng inputs = root.derive("inputs");
  for (int i = 0; i < 20; ++i) {
    const uint64_t round = uint64_t(i) + 1;
    const uint32_t v = 6;
    auto pads = crypto::gen_pads(3, v, inputs.derive("pads/" + fmt_u64(round)).seed32(), round);
    EXPECT(pads.ok(), "pad generation failed");
    tee::SealedBlob sealed_pad = platform.seal((*pads)[0].to_bytes(), approved);

    core::GlimmerRequest base;
    base.round_id = round;
    base.client_id = 40 + uint64_t(i);
    base.x.round_id = round;
    base.x.entries.resize(v);
    DetRng xr = inputs.derive("x/" + fmt_u64(round));
    for (size_t j = 0; j < v; ++j) base.x.entries[j].raw = xr.bounded(crypto::kScale + 1);

    core::GlimmerRequest local_req = base;
    auto local_out =
        core::run_glimmer(local_req, &sealed_pad, sealed_sk, policy, local);
    EXPECT(local_out.ok(), "local pipeline failed");

    core::GlimmerRequest remote_req = base;
    auto frame = channel.seal_glimmer_request(remote_req, &sealed_pad);
    EXPECT(frame.ok(), "request sealing failed");
    auto wire_reply = host.handle_submit(7, *frame);
    EXPECT(wire_reply.ok(), "host refused the submission");
    auto remote_out = channel.open_signed_result(*wire_reply);
    EXPECT(remote_out.ok(), "remote pipeline failed");

    EXPECT(remote_out->to_bytes() == local_out->to_bytes(),
           "round " + fmt_u64(round) + ": remote and local outputs differ");
  }

  // Attestation-before-data holds across every bundled transcript.
  for (const std::string& name : sim::builtin_scenario_names()) {
    auto config = sim::resolve_scenario(name);
    EXPECT(config.ok(), "scenario missing: " + name);
    sim::RunOptions options;
    options.capture_transcripts = 1;
    auto out = sim::run_scenario(*config, options);
    EXPECT(out.ok(), "scenario did not run: " + name);
    auto scan = sim::verify_transcripts(out->report_text, out->transcript_text);
    EXPECT(scan.ok(), "transcript scan failed: " + name);
    for (const std::string& v : scan->violations)
      EXPECT(v.find("before attestation") == std::string::npos,
             name + ": private bytes preceded attestation");
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 8. The prediction demo: the aggregate ranks the trending successor first.

CheckResult check_prediction_demo() {
  sim::RunOutput out = must_run("trending_trump");
  const sim::RunReport& rep = out.report;
  EXPECT(rep.violations.empty(), "run reported violations");
  EXPECT(rep.round_records.size() == 1, "expected one round");
  const sim::RoundRecord& r = rep.round_records[0];
  EXPECT(r.exact, "aggregate is not exact");
  EXPECT(!r.predictions.empty() && r.predictions[0].word == "donald",
         "missing the probe prediction");
  EXPECT(!r.predictions[0].ranked.empty() && r.predictions[0].ranked[0] == "trump",
         "top-1 successor of donald is not trump per the protocol");
  EXPECT(!r.oracle_predictions[0].ranked.empty() &&
             r.oracle_predictions[0].ranked[0] == "trump",
         "top-1 successor of donald is not trump per the oracle");
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// 9. Every bundled scenario replays byte-for-byte.

CheckResult check_determinism() {
  for (const std::string& name : sim::builtin_scenario_names()) {
    auto config = sim::resolve_scenario(name);
    EXPECT(config.ok(), "scenario missing: " + name);
    auto first = sim::run_scenario(*config);
    auto second = sim::run_scenario(*config);
    EXPECT(first.ok() && second.ok(), "scenario did not run: " + name);
    EXPECT(first->report_text == second->report_text, name + ": reports differ across runs");
    EXPECT(first->transcript_text == second->transcript_text,
           name + ": transcripts differ across runs");
  }
  return std::nullopt;
}

struct Criterion {
  const char* title;
  std::function<CheckResult()> run;
};

}  // namespace
}  // namespace glimmer

int main() {
  using glimmer::Criterion;
  const Criterion criteria[] = {
      {"exact aggregation matches the plaintext oracle on 50 random instances",
       glimmer::check_exact_aggregation},
      {"the 538 weight attack is refused, bypass rejected, aggregate honest-only",
       glimmer::check_weight_attack_contained},
      {"dropout repair is exact and submitters' pads stay sealed",
       glimmer::check_dropout_repair},
      {"blinded entries are uniform and honest transcripts carry no sentinel bytes",
       glimmer::check_hiding},
      {"one flipped code byte voids quotes, sealing, and contributions 100/100",
       glimmer::check_attestation_gate},
      {"the auditor admits only exact 89-byte verdicts; equal verdicts are identical",
       glimmer::check_covert_channel_bound},
      {"remote glimmer output is byte-identical to local; attestation precedes data",
       glimmer::check_remote_equivalence},
      {"the aggregate ranks trump as the top successor of donald",
       glimmer::check_prediction_demo},
      {"every bundled scenario replays byte-for-byte", glimmer::check_determinism},
  };

  int failures = 0;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    glimmer::CheckResult result = c.run();
    if (result.has_value()) {
      ++failures;
      std::printf("[FAIL] %d. %s: %s\n", index, c.title, result->c_str());
    } else {
      std::printf("[PASS] %d. %s\n", index, c.title);
    }
    std::fflush(stdout);
  }
  if (failures != 0) std::printf("%d of 9 acceptance checks failed\n", failures);
  return failures == 0 ? 0 : 1;
}
