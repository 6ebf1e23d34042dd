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

#include "core/blinding.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "core/rng.hpp"

namespace glimmer::blinding {

Bytes RevealRequest::signed_region() const {
  ByteWriter w;
  w.u64(round_id);
  w.u32(static_cast<uint32_t>(missing.size()));
  for (uint64_t id : missing) w.u64(id);
  w.u32(static_cast<uint32_t>(accepted.size()));
  for (uint64_t id : accepted) w.u64(id);
  return w.take();
}

Bytes RevealRequest::to_bytes() const {
  Bytes out = signed_region();
  out.insert(out.end(), credential.begin(), credential.end());
  return out;
}

Result<RevealRequest> RevealRequest::from_bytes(ConstBytes data) {
  ByteReader r(data);
  RevealRequest req;
  uint32_t n_missing = 0;
  if (!r.u64(req.round_id) || !r.u32(n_missing))
    return make_error(ErrorCode::kDecodeError, "reveal request header");
  req.missing.resize(n_missing);
  for (uint64_t& id : req.missing)
    if (!r.u64(id)) return make_error(ErrorCode::kDecodeError, "reveal request missing ids");
  uint32_t n_accepted = 0;
  if (!r.u32(n_accepted)) return make_error(ErrorCode::kDecodeError, "reveal request header");
  req.accepted.resize(n_accepted);
  for (uint64_t& id : req.accepted)
    if (!r.u64(id)) return make_error(ErrorCode::kDecodeError, "reveal request accepted ids");
  if (!r.bytes(req.credential) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "reveal request credential");
  return req;
}

BlindingService::BlindingService(const tee::Platform& platform, crypto::VerifyKey ops_key)
    : platform_(&platform), ops_key_(ops_key) {}

Result<std::vector<PadIssue>> BlindingService::provision_round(const RoundRoster& roster,
                                                               const Seed32& seed) {
  if (roster.participants.empty())
    return make_error(ErrorCode::kEmptyRoster, "no participants in round");
  if (roster.vector_length == 0)
    return make_error(ErrorCode::kInvalidArgument, "vector length must be >= 1");
  if (rounds_.contains(roster.round_id))
    return make_error(ErrorCode::kInvalidArgument, "round already provisioned");

  std::set<uint64_t> seen;
  for (const Participant& p : roster.participants)
    if (!seen.insert(p.client_id).second)
      return make_error(ErrorCode::kInvalidArgument, "duplicate client id in roster");

  auto pads = crypto::gen_pads(roster.participants.size(), roster.vector_length, seed,
                               roster.round_id);
  if (!pads.ok()) return pads.error();

  RoundRecord record;
  std::vector<PadIssue> issues;
  issues.reserve(roster.participants.size());
  DetRng envelope_rng = DetRng(seed).derive("envelope");
  for (size_t i = 0; i < roster.participants.size(); ++i) {
    const Participant& p = roster.participants[i];
    crypto::Pad& pad = (*pads)[i];
    const tee::SealedBlob sealed =
        platform_->seal(pad.to_bytes(), roster.approved_measurement);
    issues.push_back(PadIssue{
        p.client_id,
        crypto::box_seal(sealed.to_bytes(), p.box_public,
                         envelope_rng.derive(std::to_string(p.client_id)).seed32())});
    record.roster_ids.push_back(p.client_id);
    record.pads.emplace(p.client_id, std::move(pad));
  }
  rounds_.emplace(roster.round_id, std::move(record));
  return issues;
}

Result<std::vector<crypto::Pad>> BlindingService::reveal_dropout_pads(
    const RevealRequest& request) {
  auto it = rounds_.find(request.round_id);
  if (it == rounds_.end()) return make_error(ErrorCode::kUnknownRound, "round not provisioned");
  RoundRecord& record = it->second;

  if (!crypto::verify(request.signed_region(), request.credential, ops_key_))
    return make_error(ErrorCode::kBadSignature, "reveal credential rejected");

  const std::set<uint64_t> roster(record.roster_ids.begin(), record.roster_ids.end());
  const std::set<uint64_t> missing(request.missing.begin(), request.missing.end());
  const std::set<uint64_t> accepted(request.accepted.begin(), request.accepted.end());
  if (missing.size() != request.missing.size() || accepted.size() != request.accepted.size())
    return make_error(ErrorCode::kInvalidArgument, "duplicate ids in reveal request");
  for (uint64_t id : missing)
    if (!roster.contains(id))
      return make_error(ErrorCode::kUnknownClient, "missing id not in roster");
  for (uint64_t id : accepted)
    if (!roster.contains(id))
      return make_error(ErrorCode::kUnknownClient, "accepted id not in roster");
  // Anti-deblinding rule: never hand out the pad of a client that submitted.
  for (uint64_t id : missing)
    if (accepted.contains(id))
      return make_error(ErrorCode::kNotMissing, "client " + std::to_string(id) + " submitted");
  if (missing.size() + accepted.size() != roster.size())
    return make_error(ErrorCode::kInvalidArgument, "lists do not partition the roster");

  std::vector<crypto::Pad> revealed;
  revealed.reserve(request.missing.size());
  for (uint64_t id : request.missing) {
    revealed.push_back(std::move(record.pads.at(id)));
    disclosure_log_.push_back("round " + std::to_string(request.round_id) + " pad " +
                              std::to_string(id));
  }
  // Retention ends with the round: scrub everything kept back.
  for (auto& [id, pad] : record.pads) pad.zeroize();
  rounds_.erase(it);
  return revealed;
}

}  // namespace glimmer::blinding
