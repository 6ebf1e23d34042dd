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

// The trusted blinding service. Per round it draws a zero-sum pad set, seals
// each pad to the approved glimmer measurement, and envelopes each sealed pad
// to its client's public key, so neither the host OS nor the wrong client
// ever sees a pad. After the round it reveals the pads of clients that did
// not submit, which keeps the aggregate exact, and refuses to reveal a pad
// for anyone who did submit, which would deblind a real contribution.

#ifndef GLIMMER_CORE_BLINDING_HPP_
#define GLIMMER_CORE_BLINDING_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::blinding {

struct Participant {
  uint64_t client_id = 0;
  std::array<uint8_t, 32> box_public{};
};

struct RoundRoster {
  uint64_t round_id = 0;
  std::vector<Participant> participants;
  tee::Measurement approved_measurement;
  uint32_t vector_length = 0;
};

struct PadIssue {
  uint64_t client_id = 0;
  // box_seal(SealedBlob(pad, policy = approved_measurement), client key)
  Bytes envelope;
};

/// The aggregation service's signed claim of who did not submit, with the
/// full accepted list alongside so the blinding service can cross-check
/// before disclosing anything.
struct RevealRequest {
  uint64_t round_id = 0;
  std::vector<uint64_t> missing;
  std::vector<uint64_t> accepted;
  crypto::Signature credential{};

  // round_id (8) | missing count (4) | ids (8 each) | accepted count (4) |
  // ids (8 each); credential covers exactly these bytes.
  Bytes signed_region() const;
  Bytes to_bytes() const;  // signed_region | credential (64)
  static Result<RevealRequest> from_bytes(ConstBytes data);
};

class BlindingService {
 public:
  /// ops_key authenticates reveal requests; sealing goes through platform.
  BlindingService(const tee::Platform& platform, crypto::VerifyKey ops_key);

  /// Issues one envelope per participant and retains every pad for dropout
  /// recovery. The roster must be frozen before this call.
  Result<std::vector<PadIssue>> provision_round(const RoundRoster& roster, const Seed32& seed);

  /// Returns the retained pads of exactly the missing clients, then erases
  /// all state for the round. Refuses if any "missing" client appears in the
  /// accepted list or if the two lists do not partition the roster.
  Result<std::vector<crypto::Pad>> reveal_dropout_pads(const RevealRequest& request);

  bool round_retained(uint64_t round_id) const { return rounds_.contains(round_id); }
  const std::vector<std::string>& disclosure_log() const { return disclosure_log_; }

 private:
  struct RoundRecord {
    std::vector<uint64_t> roster_ids;
    std::map<uint64_t, crypto::Pad> pads;
  };

  const tee::Platform* platform_;
  crypto::VerifyKey ops_key_;
  std::map<uint64_t, RoundRecord> rounds_;
  std::vector<std::string> disclosure_log_;
};

}  // namespace glimmer::blinding

#endif  // GLIMMER_CORE_BLINDING_HPP_
