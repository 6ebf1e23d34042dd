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

#include "core/aggregation.hpp"

#include <algorithm>
#include <utility>

namespace glimmer::aggregation {

Bytes GlobalModel::to_bytes() const {
  ByteWriter w;
  w.u64(round_id);
  w.u32(submitter_count);
  w.u32(static_cast<uint32_t>(sums.size()));
  for (uint64_t s : sums) w.u64(s);
  return w.take();
}

Result<GlobalModel> GlobalModel::from_bytes(ConstBytes data) {
  ByteReader r(data);
  GlobalModel g;
  uint32_t v = 0;
  if (!r.u64(g.round_id) || !r.u32(g.submitter_count) || !r.u32(v))
    return make_error(ErrorCode::kDecodeError, "global model header");
  g.sums.resize(v);
  for (uint64_t& s : g.sums)
    if (!r.u64(s)) return make_error(ErrorCode::kDecodeError, "global model sums");
  if (!r.exhausted()) return make_error(ErrorCode::kDecodeError, "global model trailing bytes");
  return g;
}

std::vector<uint32_t> predict_next(const GlobalModel& g, uint32_t word, uint32_t vocab,
                                   size_t k) {
  std::vector<uint32_t> out;
  if (word >= vocab || static_cast<size_t>(vocab) * vocab != g.sums.size()) return out;
  std::vector<std::pair<uint64_t, uint32_t>> ranked;  // (sum, successor)
  for (uint32_t b = 0; b < vocab; ++b) {
    const uint64_t sum = g.sums[static_cast<size_t>(word) * vocab + b];
    if (sum > 0) ranked.emplace_back(sum, b);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& l, const auto& r) {
    if (l.first != r.first) return l.first > r.first;
    return l.second < r.second;
  });
  for (size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

AggregationService::AggregationService(const tee::Platform& platform, DetRng rng,
                                       ServiceConfig config)
    : platform_(&platform), rng_(std::move(rng)), config_(config) {
  ops_ = crypto::signing_keypair_from_seed(rng_.derive("ops-key").seed32());
}

void AggregationService::provision_signing_key(const tee::Measurement& approved) {
  approved_ = approved;
  crypto::SigningKeyPair kp =
      crypto::signing_keypair_from_seed(rng_.derive("contribution-key").seed32());
  contribution_key_ = kp.public_key;
  sealed_signing_key_ = platform_->seal(kp.secret.bytes, approved);
  // The secret half now exists only inside the seal.
  kp.secret.zeroize();
}

Status AggregationService::enroll(uint64_t client_id, const std::array<uint8_t, 32>& box_public,
                                  const tee::Quote& quote, bool is_public) {
  if (!tee::verify_quote(quote, approved_, platform_->attestation_key()))
    return make_error(ErrorCode::kAttestationFailure, "enrollment quote rejected");
  tee::ReportData expected{};
  for (int i = 0; i < 8; ++i) expected[i] = static_cast<uint8_t>(client_id >> (56 - 8 * i));
  std::copy(box_public.begin(), box_public.end(), expected.begin() + 8);
  if (quote.report_data != expected)
    return make_error(ErrorCode::kAttestationFailure, "quote does not bind this enrollment");
  if (enrollments_.contains(client_id))
    return make_error(ErrorCode::kInvalidArgument, "client already enrolled");
  enrollments_.emplace(client_id, Enrollment{box_public, is_public});
  return {};
}

Status AggregationService::open_round(uint64_t round_id, uint64_t deadline_tick,
                                      uint32_t vector_length) {
  if (rounds_.contains(round_id))
    return make_error(ErrorCode::kInvalidArgument, "round already open");
  if (enrollments_.empty()) return make_error(ErrorCode::kEmptyRoster, "no enrolled clients");
  RoundState state;
  state.deadline_tick = deadline_tick;
  state.vector_length = vector_length;
  for (const auto& [id, e] : enrollments_)
    (e.is_public ? state.public_roster : state.private_roster).push_back(id);
  rounds_.emplace(round_id, std::move(state));
  return {};
}

Result<std::vector<blinding::Participant>> AggregationService::blinding_roster(
    uint64_t round_id) const {
  auto it = rounds_.find(round_id);
  if (it == rounds_.end()) return make_error(ErrorCode::kUnknownRound, "round not open");
  std::vector<blinding::Participant> roster;
  roster.reserve(it->second.private_roster.size());
  for (uint64_t id : it->second.private_roster)
    roster.push_back(blinding::Participant{id, enrollments_.at(id).box_public});
  return roster;
}

uint64_t AggregationService::round_deadline(uint64_t round_id) const {
  auto it = rounds_.find(round_id);
  return it == rounds_.end() ? 0 : it->second.deadline_tick;
}

AcceptResult AggregationService::accept(const core::SignedContribution& sc, uint64_t round_id) {
  auto it = rounds_.find(round_id);
  if (it == rounds_.end()) return {false, ErrorCode::kUnknownRound};
  RoundState& round = it->second;
  if (round.status != RoundStatus::kOpen) return {false, ErrorCode::kRoundClosed};
  if (sc.round_id != round_id) {
    // A contribution addressed to a round that already finished is stale
    // rather than misdirected; replays across rounds land here.
    auto stale = rounds_.find(sc.round_id);
    if (stale != rounds_.end() && stale->second.status != RoundStatus::kOpen)
      return {false, ErrorCode::kRoundClosed};
    return {false, ErrorCode::kRoundMismatch};
  }

  const auto enrolled = enrollments_.find(sc.client_id);
  if (enrolled == enrollments_.end()) return {false, ErrorCode::kUnknownClient};
  if (sc.is_public != enrolled->second.is_public) return {false, ErrorCode::kInvalidArgument};
  if (sc.entries.size() != round.vector_length) return {false, ErrorCode::kLengthMismatch};
  if (!crypto::verify(sc.signed_region(), sc.signature, contribution_key_))
    return {false, ErrorCode::kBadSignature};
  if (round.accepted.contains(sc.client_id)) return {false, ErrorCode::kReplay};
  if (sc.confidence < config_.confidence_threshold) return {false, ErrorCode::kLowConfidence};

  round.accepted.emplace(sc.client_id, sc);
  return {true, ErrorCode::kOk};
}

Result<blinding::RevealRequest> AggregationService::make_reveal_request(uint64_t round_id) {
  auto it = rounds_.find(round_id);
  if (it == rounds_.end()) return make_error(ErrorCode::kUnknownRound, "round not open");
  RoundState& round = it->second;
  if (round.status != RoundStatus::kOpen)
    return make_error(ErrorCode::kRoundClosed, "round already finalizing");
  round.status = RoundStatus::kFinalizing;

  blinding::RevealRequest request;
  request.round_id = round_id;
  for (uint64_t id : round.private_roster)
    (round.accepted.contains(id) ? request.accepted : request.missing).push_back(id);
  request.credential = crypto::sign(request.signed_region(), ops_.secret);
  return request;
}

Result<GlobalModel> AggregationService::complete_finalize(
    uint64_t round_id, std::span<const crypto::Pad> dropout_pads) {
  auto it = rounds_.find(round_id);
  if (it == rounds_.end()) return make_error(ErrorCode::kUnknownRound, "round not open");
  RoundState& round = it->second;
  if (round.status != RoundStatus::kFinalizing)
    return make_error(ErrorCode::kInvalidArgument, "round not in finalizing state");

  std::vector<crypto::BlindedVector> ys;
  std::vector<const core::SignedContribution*> publics;
  for (const auto& [id, sc] : round.accepted) {
    if (sc.is_public) {
      publics.push_back(&sc);
    } else {
      crypto::BlindedVector y;
      y.round_id = sc.round_id;
      y.entries = sc.entries;
      ys.push_back(std::move(y));
    }
  }
  if (ys.empty() && publics.empty()) {
    round.status = RoundStatus::kClosed;
    return make_error(ErrorCode::kEmptyRound, "no accepted contributions");
  }

  GlobalModel g;
  g.round_id = round_id;
  g.submitter_count = static_cast<uint32_t>(round.accepted.size());
  if (!ys.empty()) {
    auto sums = crypto::aggregate_unblind(ys, dropout_pads);
    if (!sums.ok()) return sums.error();
    g.sums = std::move(sums).value();
  } else {
    // All private clients dropped; their revealed pads sum to zero by
    // construction, so the aggregate is just the public contributions.
    g.sums.assign(round.vector_length, 0);
  }
  for (const core::SignedContribution* sc : publics)
    for (size_t j = 0; j < sc->entries.size(); ++j) g.sums[j] += sc->entries[j];

  round.status = RoundStatus::kClosed;
  return g;
}

Result<GlobalModel> AggregationService::finalize_round(uint64_t round_id,
                                                       BlindingChannel& channel) {
  auto request = make_reveal_request(round_id);
  if (!request.ok()) return request.error();
  auto pads = channel.reveal(*request);
  if (!pads.ok())
    return make_error(ErrorCode::kBlindingServiceUnavailable,
                      "pad reveal failed: " + pads.error().to_string());
  return complete_finalize(round_id, *pads);
}

}  // namespace glimmer::aggregation
