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

#include <stdexcept>

#include "core/common.hpp"
#include "core/rng.hpp"
#include "core/tee.hpp"
#include "doctest.h"

namespace glimmer::tee {
namespace {

Seed32 seed(uint8_t fill) {
  Seed32 s{};
  s.fill(fill);
  return s;
}

TEST_CASE("measurement is a pure code hash") {
  Bytes code = {1, 2, 3};
  CHECK(measure(as_bytes(code)) == measure(as_bytes(code)));
  CHECK(to_hex(as_bytes(measure({}).digest)) ==
        "0e5751c026e543b2e8ab2eb06099daa1d1e5df47778f7787faab45cdf12fe3a8");
  Bytes other = {1, 2, 4};
  CHECK(!(measure(as_bytes(code)) == measure(as_bytes(other))));
}

TEST_CASE("seal and unseal round trip under matching measurement") {
  Platform platform(seed(1));
  Bytes code = {0xAA, 0xBB};
  Enclave enclave(platform, code);
  Bytes payload = {5, 6, 7, 8};
  SealedBlob blob = platform.seal(as_bytes(payload), enclave.measurement());
  auto opened = enclave.unseal(blob);
  REQUIRE(opened.ok());
  CHECK(*opened == payload);
}

TEST_CASE("unseal enforces policy then integrity") {
  Platform platform(seed(1));
  Bytes code_a = {0xAA};
  Bytes code_b = {0xBB};
  Enclave a(platform, code_a);
  Enclave b(platform, code_b);
  Bytes payload = {1, 2, 3};

  // Sealed to A's measurement: B gets PolicyMismatch.
  SealedBlob blob = platform.seal(as_bytes(payload), a.measurement());
  CHECK(b.unseal(blob).code() == ErrorCode::kPolicyMismatch);

  // Relabeling the policy does not help: the policy is bound into the AEAD.
  SealedBlob forged = blob;
  forged.policy = b.measurement();
  CHECK(b.unseal(forged).code() == ErrorCode::kIntegrityFailure);

  // Bit flips in the ciphertext are IntegrityFailure for the right enclave.
  SealedBlob damaged = blob;
  damaged.ciphertext[0] ^= 1;
  CHECK(a.unseal(damaged).code() == ErrorCode::kIntegrityFailure);
}

TEST_CASE("fresh nonces make equal payloads distinct blobs") {
  Platform platform(seed(2));
  Bytes code = {7};
  Enclave enclave(platform, code);
  Bytes payload = {9, 9, 9};
  SealedBlob one = platform.seal(as_bytes(payload), enclave.measurement());
  SealedBlob two = platform.seal(as_bytes(payload), enclave.measurement());
  CHECK(one.to_bytes() != two.to_bytes());
  CHECK(enclave.unseal(one).value() == payload);
  CHECK(enclave.unseal(two).value() == payload);
}

TEST_CASE("sealed blob serialization round trips") {
  Platform platform(seed(3));
  Bytes code = {1};
  Enclave enclave(platform, code);
  Bytes payload = {4, 4};
  SealedBlob blob = platform.seal(as_bytes(payload), enclave.measurement());
  auto back = SealedBlob::from_bytes(as_bytes(blob.to_bytes()));
  REQUIRE(back.ok());
  CHECK(enclave.unseal(*back).value() == payload);
  Bytes truncated = blob.to_bytes();
  truncated.resize(10);
  CHECK(!SealedBlob::from_bytes(as_bytes(truncated)).ok());
}

TEST_CASE("quotes verify under the platform root and bind report data") {
  Platform platform(seed(4));
  Bytes code = {3, 1, 4};
  Enclave enclave(platform, code);
  Bytes report = {0xCA, 0xFE};
  Quote q = enclave.quote(as_bytes(report));
  CHECK(q.report_data[0] == 0xCA);
  CHECK(q.report_data[1] == 0xFE);
  CHECK(q.report_data[2] == 0);  // zero padded
  CHECK(verify_quote(q, enclave.measurement(), platform.attestation_key()));

  // Wrong expected measurement.
  Bytes other_code = {9};
  Enclave other(platform, other_code);
  CHECK(!verify_quote(q, other.measurement(), platform.attestation_key()));

  // Wrong root of trust.
  Platform rogue(seed(5));
  CHECK(!verify_quote(q, enclave.measurement(), rogue.attestation_key()));

  // Any flipped byte in the serialized quote kills it.
  Bytes wire = q.to_bytes();
  REQUIRE(wire.size() == kQuoteSize);
  wire[40] ^= 1;
  auto parsed = Quote::from_bytes(as_bytes(wire));
  REQUIRE(parsed.ok());
  CHECK(!verify_quote(*parsed, enclave.measurement(), platform.attestation_key()));
}

TEST_CASE("quote serialization is fixed size") {
  Platform platform(seed(6));
  Bytes code = {1};
  Enclave enclave(platform, code);
  Quote q = enclave.quote({});
  CHECK(q.to_bytes().size() == 160);
  Bytes wire = q.to_bytes();
  wire.pop_back();
  CHECK(!Quote::from_bytes(as_bytes(wire)).ok());
}

TEST_CASE("private heap required an active scope") {
  Platform platform(seed(7));
  Bytes code = {2};
  Enclave enclave(platform, code);
  CHECK_THROWS_AS(current_private_heap(), std::logic_error);
  {
    EnclaveScope scope(enclave);
    PrivateHeap& heap = current_private_heap();
    heap.get_or_create<int>("x") = 41;
    CHECK(*heap.find<int>("x") == 41);
  }
  CHECK_THROWS_AS(current_private_heap(), std::logic_error);
  {
    // State persists across scopes of the same enclave.
    EnclaveScope scope(enclave);
    CHECK(*current_private_heap().find<int>("x") == 41);
  }
}

TEST_CASE("platform seeds are the whole identity") {
  Platform a(seed(8));
  Platform b(seed(8));
  Platform c(seed(9));
  CHECK(a.attestation_key() == b.attestation_key());
  CHECK(!(a.attestation_key() == c.attestation_key()));
}

}  // namespace
}  // namespace glimmer::tee
