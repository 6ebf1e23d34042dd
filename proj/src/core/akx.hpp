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

// Authenticated key exchange with enclave binding. Two X25519 ephemerals are
// exchanged in two messages; each side may attach a binding that proves who
// stands behind its handshake value. An enclave binds with a quote whose
// report_data embeds the ephemerals, so a quote lifted from one handshake
// cannot vouch for another. A plain service binds with a signature over the
// same material. Session keys fall out of the shared secret mixed with a
// transcript hash that covers both bindings.

#ifndef GLIMMER_CORE_AKX_HPP_
#define GLIMMER_CORE_AKX_HPP_

#include <array>
#include <cstdint>
#include <utility>

#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::crypto {

using EphemeralKey = std::array<uint8_t, 32>;

enum class AkxBindingKind : uint8_t {
  kNone = 0,             // anonymous party, e.g. a client without a TEE
  kQuote = 1,            // serialized tee::Quote
  kServiceSignature = 2  // Ed25519 signature by a known service key
};

struct AkxBinding {
  AkxBindingKind kind = AkxBindingKind::kNone;
  Bytes payload;

  Bytes to_bytes() const;  // kind (1) | payload length (4, big-endian) | payload
  static Result<AkxBinding> from_bytes(ConstBytes data);
};

/// What a verifier demands of the peer's binding. The kind must match
/// exactly; a peer may not downgrade to a weaker binding.
struct AkxExpectation {
  AkxBindingKind kind = AkxBindingKind::kNone;
  tee::Measurement expected_measurement;  // kQuote only
  crypto::VerifyKey attestation_root;     // kQuote only
  crypto::VerifyKey service_key;          // kServiceSignature only
};

struct AkxHello {
  EphemeralKey ephemeral{};
  AkxBinding binding;

  Bytes to_bytes() const;
  static Result<AkxHello> from_bytes(ConstBytes data);
};

struct AkxResponse {
  EphemeralKey ephemeral{};
  AkxBinding binding;

  Bytes to_bytes() const;
  static Result<AkxResponse> from_bytes(ConstBytes data);
};

/// Established channel state. Message protection uses direction-specific keys
/// and counter nonces; both sides advance counters in lockstep, one message
/// in flight at a time.
struct AkxSession {
  AeadKey send_key{};
  AeadKey recv_key{};
  Digest32 transcript{};
  uint64_t send_counter = 0;
  uint64_t recv_counter = 0;

  Bytes seal_message(ConstBytes plaintext);
  Result<Bytes> open_message(ConstBytes frame);
};

/// Produces this side's binding over the handshake material. report_data is
/// what an enclave quote should carry; message is what a service signature
/// should cover.
class AkxBindingMaker {
 public:
  virtual ~AkxBindingMaker() = default;
  virtual AkxBinding bind(ConstBytes message, const tee::ReportData& report_data) const = 0;
};

class QuoteBindingMaker : public AkxBindingMaker {
 public:
  explicit QuoteBindingMaker(const tee::Enclave* enclave) : enclave_(enclave) {}
  AkxBinding bind(ConstBytes message, const tee::ReportData& report_data) const override;

 private:
  const tee::Enclave* enclave_;
};

class ServiceSignatureBindingMaker : public AkxBindingMaker {
 public:
  explicit ServiceSignatureBindingMaker(const SigningKey* key) : key_(key) {}
  AkxBinding bind(ConstBytes message, const tee::ReportData& report_data) const override;

 private:
  const SigningKey* key_;
};

/// Two-message handshake, initiator side. binder may be null for an
/// anonymous initiator.
class AkxInitiator {
 public:
  AkxInitiator(DetRng& rng, const AkxBindingMaker* binder);

  const AkxHello& hello() const { return hello_; }
  Result<AkxSession> complete(const AkxResponse& response, const AkxExpectation& expect);

 private:
  EphemeralKey secret_{};
  AkxHello hello_;
};

class AkxResponder {
 public:
  AkxResponder(DetRng& rng, const AkxBindingMaker* binder);

  /// Verifies the initiator's binding, derives the session, and returns the
  /// response message to send back.
  Result<std::pair<AkxResponse, AkxSession>> respond(const AkxHello& hello,
                                                     const AkxExpectation& expect);

 private:
  EphemeralKey secret_{};
  EphemeralKey public_{};
  const AkxBindingMaker* binder_;
};

}  // namespace glimmer::crypto

#endif  // GLIMMER_CORE_AKX_HPP_
