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

#include <algorithm>

#include "core/blinding.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/rng.hpp"
#include "core/tee.hpp"
#include "doctest.h"

namespace glimmer::blinding {
namespace {

Seed32 seed(uint8_t fill) {
  Seed32 s{};
  s.fill(fill);
  return s;
}

struct Fixture {
  tee::Platform platform;
  Bytes code;
  tee::Enclave enclave;
  crypto::SigningKeyPair ops;
  BlindingService service;
  std::vector<crypto::BoxKeyPair> client_keys;
  RoundRoster roster;

  Fixture()
      : platform(seed(1)),
        code(core::make_glimmer_code("blinding-test")),
        enclave(platform, code),
        ops(crypto::signing_keypair_from_seed(seed(2))),
        service(platform, ops.public_key) {
    roster.round_id = 5;
    roster.approved_measurement = enclave.measurement();
    roster.vector_length = 6;
    for (uint64_t id = 1; id <= 4; ++id) {
      client_keys.push_back(box_keypair_from_client(id));
      roster.participants.push_back(Participant{id, client_keys.back().public_key});
    }
  }

  static crypto::BoxKeyPair box_keypair_from_client(uint64_t id) {
    Seed32 s{};
    s.fill(static_cast<uint8_t>(0x10 + id));
    return crypto::box_keypair_from_seed(s);
  }

  RevealRequest signed_request(std::vector<uint64_t> missing, std::vector<uint64_t> accepted) {
    RevealRequest req;
    req.round_id = roster.round_id;
    req.missing = std::move(missing);
    req.accepted = std::move(accepted);
    req.credential = crypto::sign(as_bytes(req.signed_region()), ops.secret);
    return req;
  }
};

TEST_CASE("issued envelopes decrypt only for their client and only in the enclave") {
  Fixture f;
  auto issues = f.service.provision_round(f.roster, seed(3));
  REQUIRE(issues.ok());
  REQUIRE(issues->size() == 4);

  // Each client can open its own envelope.
  std::vector<crypto::Pad> pads;
  for (size_t i = 0; i < issues->size(); ++i) {
    CHECK(issues->at(i).client_id == f.roster.participants[i].client_id);
    auto sealed_bytes = crypto::box_open(as_bytes(issues->at(i).envelope), f.client_keys[i]);
    REQUIRE(sealed_bytes.ok());
    auto blob = tee::SealedBlob::from_bytes(as_bytes(*sealed_bytes));
    REQUIRE(blob.ok());
    // Host-visible layer ends here; only the approved enclave opens the pad.
    auto plain = f.enclave.unseal(*blob);
    REQUIRE(plain.ok());
    auto pad = crypto::Pad::from_bytes(as_bytes(*plain));
    REQUIRE(pad.ok());
    CHECK(pad->round_id == 5);
    CHECK(pad->entries.size() == 6);
    pads.push_back(*pad);
  }

  // Wrong client cannot open someone else's envelope.
  CHECK(!crypto::box_open(as_bytes(issues->at(0).envelope), f.client_keys[1]).ok());

  // The pad set cancels exactly.
  for (size_t j = 0; j < 6; ++j) {
    uint64_t sum = 0;
    for (const crypto::Pad& p : pads) sum += p.entries[j];
    CHECK(sum == 0);
  }
}

TEST_CASE("provisioning rejects bad rosters") {
  Fixture f;
  RoundRoster empty = f.roster;
  empty.participants.clear();
  CHECK(f.service.provision_round(empty, seed(4)).code() == ErrorCode::kEmptyRoster);

  RoundRoster dup = f.roster;
  dup.participants.push_back(dup.participants[0]);
  CHECK(f.service.provision_round(dup, seed(4)).code() == ErrorCode::kInvalidArgument);

  REQUIRE(f.service.provision_round(f.roster, seed(4)).ok());
  CHECK(f.service.provision_round(f.roster, seed(4)).code() == ErrorCode::kInvalidArgument);
}

TEST_CASE("reveals only the named dropouts, then forgets the round") {
  Fixture f;
  REQUIRE(f.service.provision_round(f.roster, seed(5)).ok());
  CHECK(f.service.round_retained(5));

  RevealRequest req = f.signed_request({2, 4}, {1, 3});
  auto pads = f.service.reveal_dropout_pads(req);
  REQUIRE(pads.ok());
  REQUIRE(pads->size() == 2);
  CHECK(pads->at(0).round_id == 5);

  // Disclosure is logged and state is erased: a second reveal fails.
  CHECK(f.service.disclosure_log().size() == 2);
  CHECK(!f.service.round_retained(5));
  CHECK(f.service.reveal_dropout_pads(req).code() == ErrorCode::kUnknownRound);
}

TEST_CASE("refuses to reveal a pad for a client that submitted") {
  Fixture f;
  REQUIRE(f.service.provision_round(f.roster, seed(6)).ok());
  // Client 1 appears in both lists: that would deblind a real contribution.
  RevealRequest req = f.signed_request({1, 2}, {1, 3, 4});
  CHECK(f.service.reveal_dropout_pads(req).code() == ErrorCode::kNotMissing);
  // The round survives a refused request.
  CHECK(f.service.round_retained(5));
}

TEST_CASE("refuses an unsigned or missigned reveal request") {
  Fixture f;
  REQUIRE(f.service.provision_round(f.roster, seed(7)).ok());
  RevealRequest req = f.signed_request({2}, {1, 3, 4});
  req.credential[0] ^= 1;
  CHECK(f.service.reveal_dropout_pads(req).code() == ErrorCode::kBadSignature);

  auto rogue = crypto::signing_keypair_from_seed(seed(8));
  RevealRequest forged;
  forged.round_id = 5;
  forged.missing = {2};
  forged.accepted = {1, 3, 4};
  forged.credential = crypto::sign(as_bytes(forged.signed_region()), rogue.secret);
  CHECK(f.service.reveal_dropout_pads(forged).code() == ErrorCode::kBadSignature);
}

TEST_CASE("missing and accepted must partition the roster") {
  Fixture f;
  REQUIRE(f.service.provision_round(f.roster, seed(9)).ok());

  // Unknown client.
  CHECK(f.service.reveal_dropout_pads(f.signed_request({99}, {1, 2, 3, 4})).code() ==
        ErrorCode::kUnknownClient);
  // Incomplete cover: client 4 unaccounted for.
  CHECK(f.service.reveal_dropout_pads(f.signed_request({2}, {1, 3})).code() ==
        ErrorCode::kInvalidArgument);
  // Unknown round.
  RevealRequest wrong_round = f.signed_request({2}, {1, 3, 4});
  wrong_round.round_id = 99;
  wrong_round.credential = crypto::sign(as_bytes(wrong_round.signed_region()), f.ops.secret);
  CHECK(f.service.reveal_dropout_pads(wrong_round).code() == ErrorCode::kUnknownRound);
}

TEST_CASE("reveal request serialization round trips") {
  Fixture f;
  RevealRequest req = f.signed_request({7, 9}, {1, 2});
  auto back = RevealRequest::from_bytes(as_bytes(req.to_bytes()));
  REQUIRE(back.ok());
  CHECK(back->round_id == req.round_id);
  CHECK(back->missing == req.missing);
  CHECK(back->accepted == req.accepted);
  CHECK(back->credential == req.credential);
  Bytes wire = req.to_bytes();
  wire.pop_back();
  CHECK(!RevealRequest::from_bytes(as_bytes(wire)).ok());
}

}  // namespace
}  // namespace glimmer::blinding
