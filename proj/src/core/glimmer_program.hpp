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

// The enclave program: Validation over the contribution and its private
// evidence, Blinding under a sealed pad, Signing under a sealed key. Raw
// inputs are scrubbed on every exit path, and nothing is ever signed unless
// validation passed. The only bytes that leave are the canonical
// SignedContribution layout, enforced by an output-size check.

#ifndef GLIMMER_CORE_GLIMMER_PROGRAM_HPP_
#define GLIMMER_CORE_GLIMMER_PROGRAM_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/bigram.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::core {

enum class PolicyKind : uint8_t {
  kRangeCheck = 0,
  kCorroboration = 1,
  kComposite = 2  // range check first, then corroboration
};

struct ValidationPolicy {
  PolicyKind kind = PolicyKind::kRangeCheck;
  uint64_t lo = 0;                  // inclusive raw bounds for range checks
  uint64_t hi = crypto::kScale;
  uint64_t tolerance = 0;           // max per-entry |x - retrained| in raw units
  bigram::Normalization normalization = bigram::Normalization::kJoint;

  // kind (1) | lo (8) | hi (8) | tolerance (8) | normalization (1)
  Bytes to_bytes() const;
  static Result<ValidationPolicy> from_bytes(ConstBytes data);
};

struct ValidationVerdict {
  bool valid = false;
  uint8_t confidence = 0;  // floor(confidence fraction * 255); 255 means 1.0
  std::string reason;      // "ok", "out_of_range:<idx>", "deviation:<idx>", ...
};

struct PrivateValidationData {
  bigram::EventLog keyboard_log;
  Bytes auxiliary;  // opaque evidence for other predicates

  void zeroize();
};

ValidationVerdict validate_range(const crypto::ModelVector& x, const ValidationPolicy& policy);

/// Retrains from the event log with the policy's normalization and compares
/// elementwise. The vocabulary is recovered from the vector shape (length
/// must be vocab^2). Empty logs never corroborate anything.
ValidationVerdict validate_corroboration(const crypto::ModelVector& x,
                                         const PrivateValidationData& d,
                                         const ValidationPolicy& policy);

ValidationVerdict validate(const crypto::ModelVector& x, const PrivateValidationData& d,
                           const ValidationPolicy& policy);

struct SignedContribution {
  uint64_t round_id = 0;
  uint64_t client_id = 0;
  bool is_public = false;            // public contributions carry plaintext entries
  std::vector<uint64_t> entries;     // blinded unless is_public
  uint8_t confidence = 0;
  crypto::Signature signature{};

  // round_id (8) | client_id (8) | public_flag (1) | length (4) |
  // entries (8 each) | confidence (1) | signature (64)
  Bytes to_bytes() const;
  Bytes signed_region() const;  // everything before the signature
  static Result<SignedContribution> from_bytes(ConstBytes data);
};

/// Canonical wire size for a given vector length.
constexpr size_t signed_contribution_size(size_t entries) { return 86 + 8 * entries; }

struct GlimmerRequest {
  uint64_t round_id = 0;
  uint64_t client_id = 0;
  bool is_public = false;
  crypto::ModelVector x;
  PrivateValidationData d;
};

/// The full pipeline. sealed_pad may be null only for public contributions.
/// The request's x and d buffers are zeroized before return on every path,
/// success or failure.
Result<SignedContribution> run_glimmer(GlimmerRequest& req, const tee::SealedBlob* sealed_pad,
                                       const tee::SealedBlob& sealed_sk,
                                       const ValidationPolicy& policy, const tee::Enclave& ctx);

/// Builds the measured code blob for a glimmer enclave. The service's
/// channel-binding verification key is baked into the code, so changing the
/// key changes the measurement.
Bytes make_glimmer_code(std::string_view tag);
Bytes make_glimmer_code(std::string_view tag, const crypto::VerifyKey& service_key);

/// Extracts the baked-in service key, if the code blob carries one.
std::optional<crypto::VerifyKey> embedded_service_key(ConstBytes code);

}  // namespace glimmer::core

#endif  // GLIMMER_CORE_GLIMMER_PROGRAM_HPP_
