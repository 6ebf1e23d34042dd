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

// The service side of the protocol. It provisions the contribution signing
// key sealed to the approved glimmer, admits clients by quote at enrollment,
// accepts only endorsed contributions (signature, roster, replay, confidence
// checks), repairs dropouts via the blinding service, and publishes exact
// aggregate sums. The service holds two keypairs: the contribution key whose
// secret half exists only inside seals, and an operations key it keeps, used
// to authenticate pad-reveal requests.

#ifndef GLIMMER_CORE_AGGREGATION_HPP_
#define GLIMMER_CORE_AGGREGATION_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "core/blinding.hpp"
#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/rng.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace glimmer::aggregation {

struct GlobalModel {
  uint64_t round_id = 0;
  uint32_t submitter_count = 0;
  std::vector<uint64_t> sums;  // exact elementwise sum over accepted submitters

  // round_id (8) | submitter_count (4) | vector length (4) | sums (8 each)
  Bytes to_bytes() const;
  static Result<GlobalModel> from_bytes(ConstBytes data);
};

/// Top-k successors of a word by summed weight, ties broken by ascending
/// word id; zero-sum successors never rank. Unknown words get an empty list.
std::vector<uint32_t> predict_next(const GlobalModel& g, uint32_t word, uint32_t vocab, size_t k);

struct AcceptResult {
  bool accepted = false;
  ErrorCode reason = ErrorCode::kOk;  // rejection reason when not accepted
};

/// How a pad-reveal request reaches the blinding service. The harness routes
/// it over the wire; direct tests wire the two services together in-process.
class BlindingChannel {
 public:
  virtual ~BlindingChannel() = default;
  virtual Result<std::vector<crypto::Pad>> reveal(const blinding::RevealRequest& request) = 0;
};

class DirectBlindingChannel : public BlindingChannel {
 public:
  explicit DirectBlindingChannel(blinding::BlindingService* service) : service_(service) {}
  Result<std::vector<crypto::Pad>> reveal(const blinding::RevealRequest& request) override {
    return service_->reveal_dropout_pads(request);
  }

 private:
  blinding::BlindingService* service_;
};

struct ServiceConfig {
  uint8_t confidence_threshold = 128;  // accept only confidence >= threshold
};

class AggregationService {
 public:
  AggregationService(const tee::Platform& platform, DetRng rng, ServiceConfig config);

  /// Generates the contribution keypair, seals the secret half to the
  /// approved measurement, and scrubs the local copy. Call once.
  void provision_signing_key(const tee::Measurement& approved);

  const tee::SealedBlob& sealed_signing_key() const { return sealed_signing_key_; }
  const crypto::VerifyKey& contribution_key() const { return contribution_key_; }
  const crypto::VerifyKey& ops_key() const { return ops_.public_key; }
  /// The operator keeps this key; it signs reveal requests and
  /// authenticates the service end of validator-delivery channels.
  const crypto::SigningKey& ops_signing_key() const { return ops_.secret; }
  const tee::Measurement& approved_measurement() const { return approved_; }

  /// Admission control: the quote must verify against the approved
  /// measurement and bind client_id (8 bytes, big-endian) followed by the
  /// client's envelope key in its report_data.
  Status enroll(uint64_t client_id, const std::array<uint8_t, 32>& box_public,
                const tee::Quote& quote, bool is_public);

  struct Enrollment {
    std::array<uint8_t, 32> box_public{};
    bool is_public = false;
  };
  const std::map<uint64_t, Enrollment>& enrollments() const { return enrollments_; }

  /// Freezes the roster for the round: every currently enrolled client is a
  /// participant; only private clients join the blinding roster.
  Status open_round(uint64_t round_id, uint64_t deadline_tick, uint32_t vector_length);

  /// Private (blinded) participants of an open round, for pad provisioning.
  Result<std::vector<blinding::Participant>> blinding_roster(uint64_t round_id) const;

  uint64_t round_deadline(uint64_t round_id) const;

  AcceptResult accept(const core::SignedContribution& sc, uint64_t round_id);

  /// Finalization phase one: mark the round Finalizing and emit the signed
  /// reveal request naming exactly the private clients that never submitted.
  Result<blinding::RevealRequest> make_reveal_request(uint64_t round_id);

  /// Finalization phase two: fold accepted blinded vectors with the revealed
  /// dropout pads, add public plaintext contributions, close the round.
  Result<GlobalModel> complete_finalize(uint64_t round_id,
                                        std::span<const crypto::Pad> dropout_pads);

  /// Both phases over a channel.
  Result<GlobalModel> finalize_round(uint64_t round_id, BlindingChannel& channel);

 private:
  enum class RoundStatus : uint8_t { kOpen, kFinalizing, kClosed };

  struct RoundState {
    RoundStatus status = RoundStatus::kOpen;
    uint64_t deadline_tick = 0;
    uint32_t vector_length = 0;
    std::vector<uint64_t> private_roster;
    std::vector<uint64_t> public_roster;
    std::map<uint64_t, core::SignedContribution> accepted;
  };

  const tee::Platform* platform_;
  DetRng rng_;
  ServiceConfig config_;
  tee::Measurement approved_;
  tee::SealedBlob sealed_signing_key_;
  crypto::VerifyKey contribution_key_;
  crypto::SigningKeyPair ops_;
  std::map<uint64_t, Enrollment> enrollments_;
  std::map<uint64_t, RoundState> rounds_;
};

}  // namespace glimmer::aggregation

#endif  // GLIMMER_CORE_AGGREGATION_HPP_
