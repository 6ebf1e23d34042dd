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

// Per-user agent: owns the private keyboard log, trains the local model,
// and drives a glimmer enclave to produce endorsed contributions. Adversary
// modes reproduce the classic attacks: an out-of-range weight, a fabricated
// in-range vector, a raw submission that skips the glimmer entirely, a
// tampered enclave binary, and replayed contributions.

#ifndef GLIMMER_CORE_CLIENT_HPP_
#define GLIMMER_CORE_CLIENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/bigram.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::client {

enum class AdversaryMode : uint8_t {
  kHonest = 0,
  kOutOfRange = 1,         // plants an illegal weight, then tries a raw send
  kFabricatedInRange = 2,  // in-range vector unrelated to the real log
  kBypassGlimmer = 3,      // submits plaintext x without the pipeline
  kTamperedCode = 4,       // runs a glimmer with one flipped code byte
  kReplay = 5              // resubmits an already accepted contribution
};

const char* adversary_mode_name(AdversaryMode mode);

/// Expands a phrase corpus into a timestamped event log. Phrases repeat in
/// order `repeat` times; inter-key delays are drawn from rng, strictly
/// increasing overall.
bigram::EventLog build_event_log(const std::vector<std::vector<uint32_t>>& phrases,
                                 uint32_t repeat, DetRng& rng);

struct ClientConfig {
  uint64_t client_id = 0;
  AdversaryMode mode = AdversaryMode::kHonest;
  uint64_t out_of_range_weight = 538;  // whole-weight units, scaled by kScale
  bool is_public = false;
  uint32_t vocab = 0;
  bigram::Normalization normalization = bigram::Normalization::kJoint;
};

/// Published material every client receives out of band: the approved code
/// hash is public by design, and sealed blobs are safe to hand to anyone.
struct PublishedMaterial {
  tee::Measurement approved_measurement;
  crypto::VerifyKey attestation_root;
  crypto::VerifyKey contribution_key;
  tee::SealedBlob sealed_signing_key;
  core::ValidationPolicy policy;
};

class ClientAgent {
 public:
  ClientAgent(ClientConfig config, PublishedMaterial material, const tee::Platform& platform,
              const Bytes& glimmer_code, DetRng rng, bigram::EventLog log);

  const ClientConfig& config() const { return config_; }
  const tee::Enclave& enclave() const { return enclave_; }
  const std::array<uint8_t, 32>& box_public() const { return box_keys_.public_key; }

  /// Quote binding client_id (8 bytes, big-endian) and the envelope key.
  /// Comes from this client's enclave, tampered or not.
  tee::Quote enrollment_quote() const;

  Result<tee::SealedBlob> open_pad_envelope(ConstBytes envelope) const;

  struct RoundInputs {
    crypto::ModelVector x;
    core::PrivateValidationData d;
    std::vector<std::string> events;
  };

  /// Trains this round's model from the private log and applies the
  /// adversary's tweaks. Deterministic per (client, round).
  RoundInputs build_inputs(uint64_t round_id);

  struct Outcome {
    // Zero or more submissions to put on the wire, in order.
    std::vector<core::SignedContribution> submissions;
    std::vector<std::string> events;
  };

  /// The local pipeline path: runs the glimmer (or skips it, per adversary
  /// mode) and returns whatever this client will transmit.
  Outcome contribute_local(uint64_t round_id, const tee::SealedBlob* sealed_pad);

  // Leak sentinels for transcript scanning: the plaintext model entry bytes,
  // the serialized private log, and a random auxiliary marker carried in the
  // validation evidence.
  const Bytes& model_sentinel() const { return model_sentinel_; }
  const Bytes& log_sentinel() const { return log_sentinel_; }
  const Bytes& aux_sentinel() const { return aux_sentinel_; }

 private:
  core::SignedContribution craft_raw_submission(uint64_t round_id,
                                                const crypto::ModelVector& x);

  ClientConfig config_;
  PublishedMaterial material_;
  DetRng rng_;
  bigram::EventLog log_;
  tee::Enclave enclave_;
  crypto::BoxKeyPair box_keys_;
  crypto::SigningKeyPair attacker_keys_;  // wrong key used for raw sends
  Bytes model_sentinel_;
  Bytes log_sentinel_;
  Bytes aux_sentinel_;
  std::optional<core::SignedContribution> last_accepted_;
};

}  // namespace glimmer::client

#endif  // GLIMMER_CORE_CLIENT_HPP_
