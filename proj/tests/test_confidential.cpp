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

#include <string>

#include "core/akx.hpp"
#include "core/common.hpp"
#include "core/confidential.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/rng.hpp"
#include "core/tee.hpp"
#include "doctest.h"

namespace glimmer::confidential {
namespace {

Seed32 seed(uint8_t fill) {
  Seed32 s{};
  s.fill(fill);
  return s;
}

TEST_CASE("policy language: literals, signals, combinators, comparisons") {
  SignalRecord signals;
  signals.values["clicks"] = 7;
  signals.values["headless"] = 0;

  auto eval = [&](const char* src) {
    auto expr = parse_policy(src);
    REQUIRE(expr.ok());
    auto v = eval_policy(*expr, signals);
    REQUIRE(v.ok());
    return *v;
  };

  CHECK(eval("42") == 42);
  CHECK(eval("-3") == -3);
  CHECK(eval("(signal clicks)") == 7);
  CHECK(eval("(> (signal clicks) 3)") == 1);
  CHECK(eval("(< (signal clicks) 3)") == 0);
  CHECK(eval("(>= (signal clicks) 7)") == 1);
  CHECK(eval("(<= (signal clicks) 6)") == 0);
  CHECK(eval("(= (signal clicks) 7)") == 1);
  CHECK(eval("(not (signal headless))") == 1);
  CHECK(eval("(and 1 1 1)") == 1);
  CHECK(eval("(and 1 0 1)") == 0);
  CHECK(eval("(or 0 0 1)") == 1);
  CHECK(eval("(or 0 0)") == 0);
  CHECK(eval("(and (> (signal clicks) 3) (not (signal headless)))") == 1);
}

TEST_CASE("count windows over interaction timestamps") {
  SignalRecord signals;
  signals.interaction_timestamps = {100, 200, 300, 4000, 5000};

  auto count = [&](const char* src) {
    auto expr = parse_policy(src);
    REQUIRE(expr.ok());
    auto v = eval_policy(*expr, signals);
    REQUIRE(v.ok());
    return *v;
  };
  CHECK(count("(count 100 300)") == 3);     // inclusive both ends
  CHECK(count("(count 101 300)") == 2);
  CHECK(count("(count 0 -1)") == 5);        // negative hi: unbounded above
  CHECK(count("(count -1 10000)") == 5);    // negative lo: unbounded below
  CHECK(count("(count 6000 9000)") == 0);
  CHECK(count("(count 200 -1)") == 4);
}

TEST_CASE("malformed policies are rejected at parse time") {
  CHECK(parse_policy("").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy(")").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(frobnicate 1)").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(not 1 2)").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(> 1)").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(signal)").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("banana").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("1 2").code() == ErrorCode::kMalformedPolicy);
  CHECK(parse_policy("(and 1").code() == ErrorCode::kMalformedPolicy);
}

TEST_CASE("unknown signals are evaluation faults") {
  auto expr = parse_policy("(signal missing)");
  REQUIRE(expr.ok());
  SignalRecord signals;
  CHECK(!eval_policy(*expr, signals).ok());
}

// Full fixture: a service delivers an encrypted validator into a glimmer
// over an attestation-bound channel, then challenges it.
struct Lab {
  tee::Platform platform;
  crypto::SigningKeyPair service;       // operations key, stays with the service
  crypto::SigningKeyPair contribution;  // verdict-signing key, sealed
  Bytes code;
  tee::Enclave enclave;
  tee::SealedBlob sealed_sk;
  DetRng service_rng;
  DetRng enclave_rng;

  Lab()
      : platform(seed(1)),
        service(crypto::signing_keypair_from_seed(seed(2))),
        contribution(crypto::signing_keypair_from_seed(seed(3))),
        code(core::make_glimmer_code("confidential-test", service.public_key)),
        enclave(platform, code),
        sealed_sk(platform.seal(as_bytes(contribution.secret.bytes),
                                tee::measure(as_bytes(code)))),
        service_rng(root_seed_from_u64(101)),
        enclave_rng(root_seed_from_u64(202)) {}

  // Service-initiated handshake; returns the service's session.
  crypto::AkxSession connect() {
    crypto::ServiceSignatureBindingMaker binder(&service.secret);
    crypto::AkxInitiator initiator(service_rng, &binder);
    auto response = glimmer_accept_channel(initiator.hello(), enclave, enclave_rng);
    REQUIRE(response.ok());
    auto session = initiator.complete(
        *response, glimmer_quote_expectation(enclave.measurement(), platform.attestation_key()));
    REQUIRE(session.ok());
    return *session;
  }

  uint32_t deliver(crypto::AkxSession& session, const std::string& program,
                   uint32_t version = 1) {
    Bytes encrypted = encrypt_validator(session, SecretValidator{version, program});
    auto ack = install_validator(as_bytes(encrypted), enclave);
    REQUIRE(ack.ok());
    return *ack;
  }
};

TEST_CASE("validator delivery and challenge round trip") {
  Lab lab;
  auto session = lab.connect();
  CHECK(lab.deliver(session, "(>= (signal typing_events) 20)", 3) == 3);

  SignalRecord human;
  human.values["typing_events"] = 45;
  ChallengeNonce nonce{};
  nonce.fill(0xAB);
  auto verdict = run_confidential(human, 5, nonce, lab.sealed_sk, lab.enclave);
  REQUIRE(verdict.ok());
  CHECK(verdict->verdict == 1);
  CHECK(verdict->round_id == 5);
  CHECK(verdict->nonce == nonce);

  // The auditor accepts it and the signature verifies under the same key the
  // aggregation service uses for contributions.
  Auditor auditor(lab.contribution.public_key);
  auditor.expect(5, nonce);
  CHECK(auditor.audit_message(as_bytes(verdict->to_bytes())) == AuditReason::kPass);

  SignalRecord bot;
  bot.values["typing_events"] = 2;
  auto bot_verdict = run_confidential(bot, 5, nonce, lab.sealed_sk, lab.enclave);
  REQUIRE(bot_verdict.ok());
  CHECK(bot_verdict->verdict == 0);
  CHECK(auditor.audit_message(as_bytes(bot_verdict->to_bytes())) == AuditReason::kPass);
}

TEST_CASE("evaluation faults yield verdict zero and an in-enclave log entry") {
  Lab lab;
  auto session = lab.connect();
  lab.deliver(session, "(signal absent)");
  SignalRecord signals;
  ChallengeNonce nonce{};
  auto verdict = run_confidential(signals, 1, nonce, lab.sealed_sk, lab.enclave);
  REQUIRE(verdict.ok());
  CHECK(verdict->verdict == 0);
  tee::EnclaveScope scope(lab.enclave);
  REQUIRE(!confidential_log().empty());
  CHECK(confidential_log().back().find("absent") != std::string::npos);
}

TEST_CASE("a glimmer without an embedded service key refuses the channel") {
  Lab lab;
  Bytes keyless = core::make_glimmer_code("confidential-test");
  tee::Enclave enclave(lab.platform, keyless);
  crypto::ServiceSignatureBindingMaker binder(&lab.service.secret);
  crypto::AkxInitiator initiator(lab.service_rng, &binder);
  CHECK(glimmer_accept_channel(initiator.hello(), enclave, lab.enclave_rng).code() ==
        ErrorCode::kBindingFailure);
}

TEST_CASE("an imposter service cannot open the channel") {
  Lab lab;
  auto rogue = crypto::signing_keypair_from_seed(seed(66));
  crypto::ServiceSignatureBindingMaker binder(&rogue.secret);
  crypto::AkxInitiator initiator(lab.service_rng, &binder);
  CHECK(glimmer_accept_channel(initiator.hello(), lab.enclave, lab.enclave_rng).code() ==
        ErrorCode::kBindingFailure);
}

TEST_CASE("install requires the channel and an intact ciphertext") {
  Lab lab;
  Bytes junk = {1, 2, 3};
  CHECK(install_validator(as_bytes(junk), lab.enclave).code() == ErrorCode::kChannelError);

  auto session = lab.connect();
  Bytes encrypted = encrypt_validator(session, SecretValidator{1, "(> 1 0)"});
  Bytes tampered = encrypted;
  tampered[tampered.size() / 2] ^= 1;
  CHECK(install_validator(as_bytes(tampered), lab.enclave).code() ==
        ErrorCode::kDecryptFailure);

  // A syntactically broken program is rejected inside the enclave.
  Bytes bad = encrypt_validator(session, SecretValidator{1, "(((("});
  CHECK(install_validator(as_bytes(bad), lab.enclave).code() == ErrorCode::kMalformedPolicy);
}

TEST_CASE("challenges without an installed validator fail") {
  Lab lab;
  SignalRecord signals;
  ChallengeNonce nonce{};
  CHECK(run_confidential(signals, 1, nonce, lab.sealed_sk, lab.enclave).code() ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("auditor applies its checks in a fixed order") {
  Lab lab;
  auto session = lab.connect();
  lab.deliver(session, "1");
  ChallengeNonce nonce{};
  nonce.fill(0x5A);
  auto verdict = run_confidential({}, 9, nonce, lab.sealed_sk, lab.enclave);
  REQUIRE(verdict.ok());
  Bytes wire = verdict->to_bytes();
  REQUIRE(wire.size() == kVerdictMessageSize);

  Auditor auditor(lab.contribution.public_key);
  auditor.expect(9, nonce);
  CHECK(auditor.audit_message(as_bytes(wire)) == AuditReason::kPass);

  // Length: anything but 89 bytes.
  Bytes long_wire = wire;
  long_wire.push_back(0);
  CHECK(auditor.audit_message(as_bytes(long_wire)) == AuditReason::kBadLength);
  Bytes short_wire = wire;
  short_wire.pop_back();
  CHECK(auditor.audit_message(as_bytes(short_wire)) == AuditReason::kBadLength);

  // Verdict byte: strictly 0 or 1, checked before nonce and signature.
  Bytes wide = wire;
  wide[24] = 2;
  CHECK(auditor.audit_message(as_bytes(wide)) == AuditReason::kBadVerdictByte);

  // Nonce: a stale round or nonce both land on BadNonce.
  Bytes stale_round = wire;
  stale_round[7] ^= 1;
  CHECK(auditor.audit_message(as_bytes(stale_round)) == AuditReason::kBadNonce);
  Bytes stale_nonce = wire;
  stale_nonce[8] ^= 1;
  CHECK(auditor.audit_message(as_bytes(stale_nonce)) == AuditReason::kBadNonce);

  // Signature last: flip the verdict bit, keep everything else.
  Bytes flipped = wire;
  flipped[24] ^= 1;
  CHECK(auditor.audit_message(as_bytes(flipped)) == AuditReason::kBadSignature);
  Bytes mangled_sig = wire;
  mangled_sig[30] ^= 1;
  CHECK(auditor.audit_message(as_bytes(mangled_sig)) == AuditReason::kBadSignature);
}

TEST_CASE("equal verdicts have byte-identical messages") {
  // Deterministic signing means the message carries exactly the verdict bit
  // and nothing else an adversarial glimmer could modulate.
  Lab lab;
  auto session = lab.connect();
  lab.deliver(session, "(signal x)");
  ChallengeNonce nonce{};
  nonce.fill(0x11);
  SignalRecord yes;
  yes.values["x"] = 1;
  auto a = run_confidential(yes, 3, nonce, lab.sealed_sk, lab.enclave);
  auto b = run_confidential(yes, 3, nonce, lab.sealed_sk, lab.enclave);
  REQUIRE(a.ok());
  REQUIRE(b.ok());
  CHECK(a->to_bytes() == b->to_bytes());
}

TEST_CASE("verdict message serialization round trips") {
  VerdictMessage m;
  m.round_id = 12;
  m.nonce.fill(0xCD);
  m.verdict = 1;
  m.signature.fill(0xEF);
  Bytes wire = m.to_bytes();
  CHECK(wire.size() == 89);
  auto back = VerdictMessage::from_bytes(as_bytes(wire));
  REQUIRE(back.ok());
  CHECK(back->round_id == 12);
  CHECK(back->nonce == m.nonce);
  CHECK(back->verdict == 1);
  CHECK(back->signature == m.signature);
  wire.pop_back();
  CHECK(!VerdictMessage::from_bytes(as_bytes(wire)).ok());
}

TEST_CASE("secret validator serialization round trips") {
  SecretValidator v{7, "(and 1 1)"};
  auto back = SecretValidator::from_bytes(as_bytes(v.to_bytes()));
  REQUIRE(back.ok());
  CHECK(back->version == 7);
  CHECK(back->program == "(and 1 1)");
}

}  // namespace
}  // namespace glimmer::confidential
