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

// Confidential validation: the service ships an encrypted policy program
// into the glimmer over an attestation-bound channel, the glimmer evaluates
// it over private client signals, and the only thing that comes back out is
// a fixed 89-byte verdict message carrying one attacker-controllable bit. A
// host-side auditor rejects anything that deviates from the public format,
// which is what bounds the covert channel.
//
// The "encrypted code" is an interpreted s-expression policy language:
//   (and (>= (signal clicks) 3) (not (signal headless))
//        (> (count 1000 5000) 10))
// with integer literals, named signals, boolean combinators, comparisons,
// and counting of interaction timestamps inside a window.

#ifndef GLIMMER_CORE_CONFIDENTIAL_HPP_
#define GLIMMER_CORE_CONFIDENTIAL_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "core/akx.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::confidential {

struct SecretValidator {
  uint32_t version = 1;
  std::string program;  // s-expression source; plaintext exists only in-enclave

  Bytes to_bytes() const;  // version (4, big-endian) | program bytes
  static Result<SecretValidator> from_bytes(ConstBytes data);
};

/// Parsed policy expression. Parse errors are MalformedPolicy.
struct PolicyExpr {
  enum class Kind : uint8_t {
    kInt,
    kSignal,
    kCount,
    kAnd,
    kOr,
    kNot,
    kLt,
    kLe,
    kGt,
    kGe,
    kEq
  };
  Kind kind = Kind::kInt;
  int64_t value = 0;            // kInt
  std::string name;             // kSignal
  std::vector<PolicyExpr> args;
};

Result<PolicyExpr> parse_policy(std::string_view source);

/// Private client evidence the policy evaluates over.
struct SignalRecord {
  std::map<std::string, int64_t> values;
  std::vector<uint64_t> interaction_timestamps;  // for (count lo hi)
};

/// Unknown signals or other evaluation faults return an error; callers map
/// that to verdict 0.
Result<int64_t> eval_policy(const PolicyExpr& expr, const SignalRecord& signals);

inline constexpr size_t kChallengeNonceSize = 16;
using ChallengeNonce = std::array<uint8_t, kChallengeNonceSize>;

inline constexpr size_t kVerdictMessageSize = 89;
inline constexpr size_t kVerdictSignedPrefix = 25;

struct VerdictMessage {
  uint64_t round_id = 0;
  ChallengeNonce nonce{};
  uint8_t verdict = 0;  // strictly 0 or 1
  crypto::Signature signature{};  // covers the first 25 bytes

  Bytes to_bytes() const;  // round_id (8) | nonce (16) | verdict (1) | signature (64)
  static Result<VerdictMessage> from_bytes(ConstBytes data);
};

enum class AuditReason : uint8_t {
  kPass = 0,
  kBadLength = 1,
  kBadVerdictByte = 2,
  kBadNonce = 3,
  kBadSignature = 4
};

const char* audit_reason_name(AuditReason reason);

/// Host-side interposer on the glimmer's outbound verdict channel. Knows the
/// public message format, the outstanding challenge, and the glimmer's
/// verification key; anything that is not an exactly well-formed reply to
/// the current challenge fails.
class Auditor {
 public:
  explicit Auditor(crypto::VerifyKey verify_key) : verify_key_(verify_key) {}

  void expect(uint64_t round_id, const ChallengeNonce& nonce) {
    expected_round_ = round_id;
    expected_nonce_ = nonce;
  }

  AuditReason audit_message(ConstBytes message) const;

 private:
  crypto::VerifyKey verify_key_;
  uint64_t expected_round_ = 0;
  ChallengeNonce expected_nonce_{};
};

// ---------------------------------------------------------------------------
// Channel establishment. The service initiates and binds its handshake value
// with a signature; the glimmer responds and binds both handshake values
// with a quote. The glimmer only talks to a service whose verification key
// is baked into its own code.

/// Glimmer side: verifies the service binding against the key embedded in
/// this enclave's code, stores the session in the enclave private heap, and
/// returns the response to send. Refuses if the code carries no service key.
Result<crypto::AkxResponse> glimmer_accept_channel(const crypto::AkxHello& hello,
                                                   const tee::Enclave& ctx, DetRng& rng);

/// Service side convenience: what the service demands of the glimmer.
crypto::AkxExpectation glimmer_quote_expectation(const tee::Measurement& approved,
                                                 const crypto::VerifyKey& attestation_root);

/// Encrypts a validator for delivery over an established session.
Bytes encrypt_validator(crypto::AkxSession& session, const SecretValidator& validator);

/// Glimmer side: opens the encrypted validator with the session stored in
/// the private heap, parses it, installs it, and returns the version for the
/// acknowledgement. DecryptFailure or MalformedPolicy on bad input.
Result<uint32_t> install_validator(ConstBytes encrypted, const tee::Enclave& ctx);

/// Same, for a validator already opened by an enclave-held session (the
/// remote host path). Requires an active enclave scope.
Result<uint32_t> install_validator_plaintext(ConstBytes plain);

/// Glimmer side: evaluates the installed validator over the signals and
/// returns the signed fixed-format verdict. Evaluation faults yield verdict
/// 0 and an entry in the in-enclave log.
Result<VerdictMessage> run_confidential(const SignalRecord& signals, uint64_t round_id,
                                        const ChallengeNonce& nonce,
                                        const tee::SealedBlob& sealed_sk,
                                        const tee::Enclave& ctx);

/// In-enclave evaluation fault log (test hook; reads require an active
/// scope, so host code cannot casually reach it).
const std::vector<std::string>& confidential_log();

}  // namespace glimmer::confidential

#endif  // GLIMMER_CORE_CONFIDENTIAL_HPP_
