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

#include "core/client.hpp"

#include <utility>

namespace glimmer::client {

namespace {

Bytes tampered(const Bytes& code) {
  Bytes copy = code;
  if (!copy.empty()) copy[0] ^= 0x01;
  return copy;
}

}  // namespace

const char* adversary_mode_name(AdversaryMode mode) {
  switch (mode) {
    case AdversaryMode::kHonest: return "honest";
    case AdversaryMode::kOutOfRange: return "out_of_range";
    case AdversaryMode::kFabricatedInRange: return "fabricated_in_range";
    case AdversaryMode::kBypassGlimmer: return "bypass_glimmer";
    case AdversaryMode::kTamperedCode: return "tampered_code";
    case AdversaryMode::kReplay: return "replay";
  }
  return "unknown";
}

bigram::EventLog build_event_log(const std::vector<std::vector<uint32_t>>& phrases,
                                 uint32_t repeat, DetRng& rng) {
  bigram::EventLog log;
  uint64_t t = 1000;
  for (uint32_t r = 0; r < repeat; ++r) {
    for (const std::vector<uint32_t>& phrase : phrases) {
      for (uint32_t word : phrase) {
        t += 50 + rng.bounded(150);
        log.events.push_back(bigram::Event{t, word});
      }
    }
  }
  return log;
}

ClientAgent::ClientAgent(ClientConfig config, PublishedMaterial material,
                         const tee::Platform& platform, const Bytes& glimmer_code, DetRng rng,
                         bigram::EventLog log)
    : config_(config),
      material_(std::move(material)),
      rng_(std::move(rng)),
      log_(std::move(log)),
      enclave_(platform,
               config.mode == AdversaryMode::kTamperedCode ? tampered(glimmer_code)
                                                           : glimmer_code) {
  box_keys_ = crypto::box_keypair_from_seed(rng_.derive("box").seed32());
  attacker_keys_ = crypto::signing_keypair_from_seed(rng_.derive("attacker").seed32());
  model_sentinel_ =
      bigram::train_local(log_, config_.vocab, 0, config_.normalization).entry_bytes();
  log_sentinel_ = log_.to_bytes();
  rng_.derive("aux").fill(aux_sentinel_, 16);
}

tee::Quote ClientAgent::enrollment_quote() const {
  ByteWriter w;
  w.u64(config_.client_id);
  w.bytes(box_keys_.public_key);
  return enclave_.quote(w.view());
}

Result<tee::SealedBlob> ClientAgent::open_pad_envelope(ConstBytes envelope) const {
  auto opened = crypto::box_open(envelope, box_keys_);
  if (!opened.ok()) return opened.error();
  return tee::SealedBlob::from_bytes(*opened);
}

ClientAgent::RoundInputs ClientAgent::build_inputs(uint64_t round_id) {
  RoundInputs in;
  in.x = bigram::train_local(log_, config_.vocab, round_id, config_.normalization);

  if (config_.mode == AdversaryMode::kOutOfRange) {
    // Over-weight the client's own strongest conviction.
    size_t target = 0;
    for (size_t i = 1; i < in.x.entries.size(); ++i)
      if (in.x.entries[i].raw > in.x.entries[target].raw) target = i;
    in.x.entries[target].raw = config_.out_of_range_weight * crypto::kScale;
    in.events.push_back("planted_out_of_range:" + std::to_string(target));
  } else if (config_.mode == AdversaryMode::kFabricatedInRange) {
    DetRng fab = rng_.derive("fabricate/" + std::to_string(round_id));
    for (crypto::FixedWeight& e : in.x.entries) e.raw = fab.bounded(crypto::kScale + 1);
    in.events.push_back("fabricated_vector");
  }

  in.d.keyboard_log = log_;
  in.d.auxiliary = aux_sentinel_;
  return in;
}

core::SignedContribution ClientAgent::craft_raw_submission(uint64_t round_id,
                                                           const crypto::ModelVector& x) {
  core::SignedContribution sc;
  sc.round_id = round_id;
  sc.client_id = config_.client_id;
  sc.is_public = false;
  sc.entries.reserve(x.entries.size());
  for (const crypto::FixedWeight& e : x.entries) sc.entries.push_back(e.raw);
  sc.confidence = 255;
  // Signed with the attacker's own key; the service never provisioned it.
  sc.signature = crypto::sign(sc.signed_region(), attacker_keys_.secret);
  return sc;
}

ClientAgent::Outcome ClientAgent::contribute_local(uint64_t round_id,
                                                   const tee::SealedBlob* sealed_pad) {
  RoundInputs in = build_inputs(round_id);
  Outcome out;
  out.events = std::move(in.events);

  if (config_.mode == AdversaryMode::kBypassGlimmer) {
    out.submissions.push_back(craft_raw_submission(round_id, in.x));
    out.events.push_back("bypassed_glimmer");
    return out;
  }

  // The raw-send fallback needs the attacker's copy before the pipeline
  // scrubs its input.
  crypto::ModelVector attack_copy;
  if (config_.mode == AdversaryMode::kOutOfRange) attack_copy = in.x;

  core::GlimmerRequest req;
  req.round_id = round_id;
  req.client_id = config_.client_id;
  req.is_public = config_.is_public;
  req.x = std::move(in.x);
  req.d = std::move(in.d);

  auto sc = core::run_glimmer(req, config_.is_public ? nullptr : sealed_pad,
                              material_.sealed_signing_key, material_.policy, enclave_);
  if (sc.ok()) {
    if (config_.mode == AdversaryMode::kReplay) {
      out.submissions.push_back(*sc);
      out.submissions.push_back(*sc);  // verbatim duplicate in the same round
      out.events.push_back("replayed_same_round");
      if (last_accepted_.has_value()) {
        out.submissions.push_back(*last_accepted_);  // stale round resend
        out.events.push_back("replayed_stale_round");
      }
      last_accepted_ = *sc;
    } else {
      out.submissions.push_back(std::move(sc).value());
    }
    return out;
  }

  switch (sc.error().code) {
    case ErrorCode::kValidationFailed:
      out.events.push_back("validation_failed:" + sc.error().detail);
      if (config_.mode == AdversaryMode::kOutOfRange) {
        out.submissions.push_back(craft_raw_submission(round_id, attack_copy));
        out.events.push_back("raw_send_after_refusal");
      }
      break;
    case ErrorCode::kUnsealFailure:
      out.events.push_back("unseal_failure");
      break;
    default:
      out.events.push_back(std::string("glimmer_error:") + error_code_name(sc.error().code));
      break;
  }
  return out;
}

}  // namespace glimmer::client
