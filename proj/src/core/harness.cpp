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

#include "core/harness.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/aggregation.hpp"
#include "core/akx.hpp"
#include "core/bigram.hpp"
#include "core/blinding.hpp"
#include "core/client.hpp"
#include "core/confidential.hpp"
#include "core/crypto.hpp"
#include "core/glimmer_program.hpp"
#include "core/remote.hpp"
#include "core/rng.hpp"
#include "core/tee.hpp"
#include "core/transport.hpp"
#include "core/wire.hpp"

namespace glimmer::sim {

namespace {

constexpr ActorId kAggregationActor = 1;
constexpr ActorId kBlindingActor = 2;
constexpr ActorId kRemoteActorBase = 100;
constexpr ActorId kClientActorBase = 1000;
constexpr char kGlimmerTag[] = "glimmer-v1:predictive-keyboard";
constexpr size_t kTopK = 3;

// Independent ranking over oracle sums; deliberately not predict_next.
std::vector<std::string> rank_successors(const std::vector<uint64_t>& sums, int32_t word,
                                         size_t vocab,
                                         const std::vector<std::string>& words) {
  std::vector<std::string> out;
  if (word < 0 || sums.size() != vocab * vocab) return out;
  std::vector<std::pair<uint64_t, size_t>> row;
  for (size_t j = 0; j < vocab; ++j) {
    uint64_t s = sums[size_t(word) * vocab + j];
    if (s > 0) row.push_back({s, j});
  }
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (size_t i = 0; i < row.size() && i < kTopK; ++i) out.push_back(words[row[i].second]);
  return out;
}

class Harness {
 public:
  Harness(const ScenarioConfig& config, const RunOptions& options) : config_(config) {
    if (options.has_seed) config_.seed = options.seed;
    if (!options.transport.empty()) config_.transport = options.transport;
    if (options.capture_transcripts >= 0)
      config_.capture_transcripts = options.capture_transcripts != 0;
  }

  Result<RunOutput> run() {
    GLIMMER_TRY(setup());
    confidential_phase();
    enrollment_phase();
    for (uint32_t r = 1; r <= config_.rounds; ++r) run_round(r);

    uint64_t zeroizes = 0;
    for (ClientState& cs : clients_) zeroizes += cs.agent->enclave().debug_zeroize_events();
    for (RemoteState& rs : remotes_) zeroizes += rs.host->enclave().debug_zeroize_events();
    report_.zeroize_events = zeroizes;

    ScanContext ctx;
    ctx.sentinels = report_.sentinels;
    for (const ActorRecord& a : report_.actors) ctx.actors_by_name[a.name] = a;
    ScanResult scan = scan_transcript(transcript_, ctx);
    for (std::string& v : scan.violations) report_.violations.push_back(std::move(v));
    report_.flags = std::move(scan.flags);

    RunOutput out;
    out.report_text = serialize_report(report_);
    if (config_.capture_transcripts) out.transcript_text = serialize_transcript(transcript_);
    out.report = std::move(report_);
    return out;
  }

 private:
  struct ClientState {
    ClientSpec spec;
    ActorId actor = 0;
    std::string name;
    std::unique_ptr<client::ClientAgent> agent;
    std::unique_ptr<remote::RemoteClientChannel> channel;
    std::optional<DetRng> conf_rng;
    ActorId remote_actor = 0;
    bool attested = false;
    bool admitted = true;
    bool enrolled = false;
    std::optional<wire::PadIssuePayload> pad;
    std::vector<uint64_t> oracle_entries;
  };

  struct RemoteState {
    RemoteSpec spec;
    ActorId actor = 0;
    std::string name;
    std::unique_ptr<remote::RemoteGlimmerHost> host;
  };

  struct ConfState {
    std::unique_ptr<crypto::AkxInitiator> initiator;
    std::optional<crypto::AkxSession> session;
    confidential::ChallengeNonce nonce{};
    bool done = false;
  };

  Status setup() {
    report_.scenario = config_.name;
    report_.seed = config_.seed;
    report_.transport = config_.transport;
    report_.rounds = config_.rounds;
    report_.vocabulary = static_cast<uint32_t>(config_.vocabulary.size());

    root_.emplace(root_seed_from_u64(config_.seed));
    platform_.emplace(root_->derive("platform").seed32());
    service_.emplace(*platform_, root_->derive("service"),
                     aggregation::ServiceConfig{
                         static_cast<uint8_t>(config_.confidence_threshold)});
    code_ = core::make_glimmer_code(kGlimmerTag, service_->ops_key());
    approved_ = tee::measure(code_);
    service_->provision_signing_key(approved_);
    blinding_.emplace(*platform_, service_->ops_key());
    svc_rng_ = root_->derive("service-akx");
    svc_binder_.emplace(&service_->ops_signing_key());

    auto transport = make_transport(config_.transport);
    if (!transport.ok()) return transport.error();
    transport_ = std::move(*transport);

    names_[kAggregationActor] = "aggregation";
    names_[kBlindingActor] = "blinding";
    {
      ActorRecord a;
      a.name = "aggregation";
      a.role = "aggregation";
      report_.actors.push_back(a);
      ActorRecord b;
      b.name = "blinding";
      b.role = "blinding";
      b.enclave_hosted = config_.blinding_in_enclave;
      report_.actors.push_back(b);
    }

    for (size_t i = 0; i < config_.remotes.size(); ++i) {
      RemoteState rs;
      rs.spec = config_.remotes[i];
      rs.actor = kRemoteActorBase + static_cast<ActorId>(i);
      rs.name = "remote/" + std::to_string(rs.spec.id);
      rs.host = std::make_unique<remote::RemoteGlimmerHost>(
          *platform_, code_, service_->sealed_signing_key(), config_.policy,
          root_->derive("remote/" + std::to_string(rs.spec.id)));
      names_[rs.actor] = rs.name;
      remote_by_actor_[rs.actor] = i;
      ActorRecord a;
      a.name = rs.name;
      a.role = "remote";
      report_.actors.push_back(a);
      remotes_.push_back(std::move(rs));
    }

    const uint32_t vocab = static_cast<uint32_t>(config_.vocabulary.size());
    for (size_t i = 0; i < config_.clients.size(); ++i) {
      const ClientSpec& spec = config_.clients[i];
      ClientState cs;
      cs.spec = spec;
      cs.actor = kClientActorBase + static_cast<ActorId>(i);
      cs.name = "client/" + std::to_string(spec.id);

      std::vector<std::vector<uint32_t>> phrases;
      for (const auto& phrase : spec.phrases) {
        std::vector<uint32_t> ids;
        for (const std::string& w : phrase)
          ids.push_back(static_cast<uint32_t>(config_.word_index(w)));
        phrases.push_back(std::move(ids));
      }
      DetRng log_rng = root_->derive("log/" + std::to_string(spec.id));
      bigram::EventLog log = client::build_event_log(phrases, spec.repeat, log_rng);

      client::ClientConfig cc;
      cc.client_id = spec.id;
      cc.mode = spec.adversary;
      cc.out_of_range_weight = spec.out_of_range_weight;
      cc.is_public = spec.is_public;
      cc.vocab = vocab;
      cc.normalization = config_.policy.normalization;
      client::PublishedMaterial material{approved_, platform_->attestation_key(),
                                         service_->contribution_key(),
                                         service_->sealed_signing_key(), config_.policy};
      cs.agent = std::make_unique<client::ClientAgent>(
          cc, material, *platform_, code_,
          root_->derive("client/" + std::to_string(spec.id)), std::move(log));
      if (spec.remote) {
        cs.channel = std::make_unique<remote::RemoteClientChannel>(
            root_->derive("channel/" + std::to_string(spec.id)));
        for (const RemoteState& rs : remotes_)
          if (rs.spec.id == spec.remote_id) cs.remote_actor = rs.actor;
      }
      cs.conf_rng = root_->derive("client-akx/" + std::to_string(spec.id));

      names_[cs.actor] = cs.name;
      client_by_actor_[cs.actor] = i;
      client_index_[spec.id] = i;

      ActorRecord a;
      a.name = cs.name;
      a.role = "client";
      a.adversary = client::adversary_mode_name(spec.adversary);
      a.is_public = spec.is_public;
      a.glimmer = spec.remote ? ("remote/" + std::to_string(spec.remote_id)) : "local";
      report_.actors.push_back(a);

      report_.sentinels.push_back(
          {spec.id, "model", spec.is_public, cs.agent->model_sentinel()});
      report_.sentinels.push_back({spec.id, "log", spec.is_public, cs.agent->log_sentinel()});
      report_.sentinels.push_back({spec.id, "aux", spec.is_public, cs.agent->aux_sentinel()});

      clients_.push_back(std::move(cs));
    }
    return Status{};
  }

  // ---- messaging ----

  void post(ActorId src, ActorId dst, wire::Frame frame) {
    Status s = transport_->send(Envelope{src, dst, std::move(frame)});
    if (!s.ok()) violation("transport send failed: " + s.error().to_string());
  }

  void pump() {
    Envelope env;
    while (transport_->poll(&env)) {
      transcript_.push_back(
          {tick_, name_of(env.src), name_of(env.dst), env.frame.tag, env.frame.payload});
      dispatch(env);
    }
  }

  void dispatch(const Envelope& env) {
    if (env.dst == kAggregationActor) {
      handle_aggregation(env);
    } else if (env.dst == kBlindingActor) {
      handle_blinding(env);
    } else if (auto it = remote_by_actor_.find(env.dst); it != remote_by_actor_.end()) {
      handle_remote(remotes_[it->second], env);
    } else if (auto ct = client_by_actor_.find(env.dst); ct != client_by_actor_.end()) {
      handle_client(clients_[ct->second], env);
    } else {
      violation("message addressed to unknown actor " + std::to_string(env.dst));
    }
  }

  // ---- aggregation service actor ----

  void handle_aggregation(const Envelope& env) {
    const Bytes& payload = env.frame.payload;
    switch (env.frame.tag) {
      case wire::Tag::kEnroll: {
        auto p = wire::EnrollPayload::from_bytes(payload);
        if (!p.ok()) {
          violation("undecodable enrollment from " + name_of(env.src));
          return;
        }
        Status s = service_->enroll(p->client_id, p->box_public, p->quote, p->is_public);
        ClientState* cs = client_by_id(p->client_id);
        if (s.ok()) {
          if (cs != nullptr) cs->enrolled = true;
        } else {
          event(0, p->client_id,
                std::string("enroll_rejected:") + error_code_name(s.error().code));
          if (cs != nullptr && cs->spec.adversary == client::AdversaryMode::kHonest)
            violation("honest client " + std::to_string(p->client_id) +
                      " refused enrollment: " + s.error().to_string());
        }
        return;
      }
      case wire::Tag::kContribution: {
        auto sc = core::SignedContribution::from_bytes(payload);
        if (!sc.ok()) {
          round_.rejected += 1;
          round_.reject_reasons["DecodeError"] += 1;
          return;
        }
        aggregation::AcceptResult r = service_->accept(*sc, current_round_);
        if (r.accepted) {
          round_.accepted += 1;
          ClientState* cs = client_by_id(sc->client_id);
          if (cs != nullptr && cs->oracle_entries.size() == round_oracle_.size()) {
            for (size_t i = 0; i < round_oracle_.size(); ++i)
              round_oracle_[i] += cs->oracle_entries[i];
          } else {
            violation("accepted contribution lacks an oracle capture, client " +
                      std::to_string(sc->client_id));
          }
        } else {
          round_.rejected += 1;
          round_.reject_reasons[error_code_name(r.reason)] += 1;
          event(current_round_, sc->client_id,
                std::string("service_rejected:") + error_code_name(r.reason));
        }
        return;
      }
      case wire::Tag::kPadRevealResponse: {
        auto p = wire::PadRevealResponsePayload::from_bytes(payload);
        if (!p.ok()) {
          round_finalize_failed_ = true;
          violation("undecodable pad reveal response");
          return;
        }
        auto g = service_->complete_finalize(current_round_,
                                             std::span<const crypto::Pad>(p->pads));
        if (g.ok()) {
          round_global_ = std::move(*g);
        } else if (g.code() == ErrorCode::kEmptyRound) {
          round_.empty_round = true;
        } else {
          round_finalize_failed_ = true;
          violation("round " + std::to_string(current_round_) +
                    " finalize failed: " + g.error().to_string());
        }
        return;
      }
      case wire::Tag::kAttestQuote: {  // confidential channel setup
        ClientState* cs = client_by_actor(env.src);
        if (cs == nullptr) {
          violation("attestation reply from unknown actor");
          return;
        }
        ConfState& st = conf_[cs->spec.id];
        auto resp = crypto::AkxResponse::from_bytes(payload);
        if (!resp.ok() || st.initiator == nullptr) {
          confidential_fail(*cs, "malformed attestation response");
          return;
        }
        auto session = st.initiator->complete(
            *resp, confidential::glimmer_quote_expectation(approved_,
                                                           platform_->attestation_key()));
        if (!session.ok()) {
          confidential_fail(*cs, "channel rejected: " + session.error().to_string());
          return;
        }
        st.session = std::move(*session);
        confidential::SecretValidator validator;
        validator.version = 1;
        validator.program = config_.confidential.validator;
        Bytes sealed = confidential::encrypt_validator(*st.session, validator);
        post(kAggregationActor, env.src, {wire::Tag::kSubmitPrivate, std::move(sealed)});
        return;
      }
      case wire::Tag::kSignedResult: {  // validator install acknowledgement
        ClientState* cs = client_by_actor(env.src);
        if (cs == nullptr) return;
        ConfState& st = conf_[cs->spec.id];
        if (!st.session.has_value()) {
          confidential_fail(*cs, "acknowledgement without a session");
          return;
        }
        auto plain = st.session->open_message(payload);
        if (!plain.ok()) {
          confidential_fail(*cs, "acknowledgement failed to open");
          return;
        }
        DetRng nonce_rng = svc_rng_->derive("nonce/" + std::to_string(cs->spec.id));
        nonce_rng.fill(st.nonce);
        wire::ChallengePayload challenge{config_.confidential.challenge_round, st.nonce};
        post(kAggregationActor, env.src, {wire::Tag::kChallenge, challenge.to_bytes()});
        return;
      }
      case wire::Tag::kVerdict: {
        ClientState* cs = client_by_actor(env.src);
        if (cs == nullptr) return;
        ConfState& st = conf_[cs->spec.id];
        confidential::Auditor auditor(service_->contribution_key());
        auditor.expect(config_.confidential.challenge_round, st.nonce);
        confidential::AuditReason reason = auditor.audit_message(payload);
        uint8_t verdict =
            payload.size() == confidential::kVerdictMessageSize ? payload[24] : 0;
        bool admitted = reason == confidential::AuditReason::kPass && verdict == 1;
        report_.audits.push_back(
            {cs->spec.id, confidential::audit_reason_name(reason), verdict, admitted});
        cs->admitted = admitted;
        st.done = true;
        if (cs->spec.adversary == client::AdversaryMode::kHonest &&
            reason != confidential::AuditReason::kPass)
          violation("honest client " + std::to_string(cs->spec.id) +
                    " failed the verdict audit: " + confidential::audit_reason_name(reason));
        return;
      }
      default:
        violation(std::string("unexpected ") + wire::tag_name(env.frame.tag) +
                  " sent to aggregation");
    }
  }

  // ---- blinding service actor ----

  void handle_blinding(const Envelope& env) {
    if (env.frame.tag != wire::Tag::kPadRevealRequest) {
      violation(std::string("unexpected ") + wire::tag_name(env.frame.tag) +
                " sent to blinding");
      return;
    }
    auto req = blinding::RevealRequest::from_bytes(env.frame.payload);
    if (!req.ok()) {
      violation("undecodable pad reveal request");
      return;
    }
    wire::PadRevealResponsePayload resp;
    if (config_.debug_skip_blinding) {
      for (uint64_t id : req->missing) {
        (void)id;
        crypto::Pad zero;
        zero.round_id = req->round_id;
        zero.entries.assign(vector_length_, 0);
        resp.pads.push_back(std::move(zero));
      }
    } else {
      auto pads = blinding_->reveal_dropout_pads(*req);
      if (!pads.ok()) {
        round_finalize_failed_ = true;
        violation("pad reveal refused: " + pads.error().to_string());
      } else {
        resp.pads = std::move(*pads);
      }
    }
    post(kBlindingActor, kAggregationActor,
         {wire::Tag::kPadRevealResponse, resp.to_bytes()});
  }

  // ---- remote glimmer host actor ----

  void handle_remote(RemoteState& rs, const Envelope& env) {
    ClientState* cs = client_by_actor(env.src);
    uint64_t peer_client = cs != nullptr ? cs->spec.id : 0;
    switch (env.frame.tag) {
      case wire::Tag::kAttestRequest: {
        auto reply = rs.host->handle_hello(env.src, env.frame.payload);
        if (!reply.ok()) {
          event(current_round_, peer_client,
                "remote_hello_rejected:" + std::string(error_code_name(reply.code())));
          if (cs != nullptr && cs->spec.adversary == client::AdversaryMode::kHonest)
            violation("remote host refused an honest hello: " + reply.error().to_string());
          return;
        }
        post(env.dst, env.src, {wire::Tag::kAttestQuote, std::move(*reply)});
        return;
      }
      case wire::Tag::kSubmitPrivate: {
        auto reply = rs.host->handle_submit(env.src, env.frame.payload);
        if (!reply.ok()) {
          event(current_round_, peer_client,
                "remote_channel_error:" + std::string(error_code_name(reply.code())));
          if (cs != nullptr && cs->spec.adversary == client::AdversaryMode::kHonest)
            violation("remote host channel error: " + reply.error().to_string());
          return;
        }
        post(env.dst, env.src, {wire::Tag::kSignedResult, std::move(*reply)});
        return;
      }
      default:
        violation(std::string("unexpected ") + wire::tag_name(env.frame.tag) + " sent to " +
                  rs.name);
    }
  }

  // ---- client actor ----

  void handle_client(ClientState& cs, const Envelope& env) {
    const Bytes& payload = env.frame.payload;
    bool honest = cs.spec.adversary == client::AdversaryMode::kHonest;
    switch (env.frame.tag) {
      case wire::Tag::kPadIssue: {
        auto p = wire::PadIssuePayload::from_bytes(payload);
        if (!p.ok()) {
          violation("undecodable pad issue for " + cs.name);
          return;
        }
        cs.pad = std::move(*p);
        return;
      }
      case wire::Tag::kRoundResult:
        return;  // published aggregate; nothing to do in the sim
      case wire::Tag::kAttestQuote: {  // remote glimmer handshake reply
        if (cs.channel == nullptr) {
          violation("attestation reply for a local client " + cs.name);
          return;
        }
        remote::RemoteEndpoint endpoint{env.src, approved_, platform_->attestation_key()};
        Status s = cs.channel->complete(payload, endpoint);
        if (s.ok()) {
          cs.attested = true;
        } else {
          event(current_round_, cs.spec.id,
                "remote_attestation_failed:" + std::string(error_code_name(s.error().code)));
          if (honest) violation("honest client failed remote attestation: " +
                                s.error().to_string());
        }
        return;
      }
      case wire::Tag::kSignedResult: {  // remote glimmer outcome
        if (cs.channel == nullptr) {
          violation("signed result for a local client " + cs.name);
          return;
        }
        auto sc = cs.channel->open_signed_result(payload);
        if (sc.ok()) {
          post(cs.actor, kAggregationActor, {wire::Tag::kContribution, sc->to_bytes()});
          return;
        }
        const Error& e = sc.error();
        if (e.code == ErrorCode::kValidationFailed) {
          event(current_round_, cs.spec.id, "validation_failed:" + e.detail);
        } else if (e.code == ErrorCode::kUnsealFailure) {
          event(current_round_, cs.spec.id, "unseal_failure");
        } else {
          event(current_round_, cs.spec.id,
                std::string("glimmer_error:") + error_code_name(e.code));
        }
        if (honest) violation("honest remote contribution failed: " + e.to_string());
        return;
      }
      case wire::Tag::kAttestRequest: {  // service wants the validator channel
        auto hello = crypto::AkxHello::from_bytes(payload);
        if (!hello.ok()) {
          violation("undecodable hello for " + cs.name);
          return;
        }
        auto resp =
            confidential::glimmer_accept_channel(*hello, cs.agent->enclave(), *cs.conf_rng);
        if (!resp.ok()) {
          event(0, cs.spec.id,
                "confidential_channel_failed:" + std::string(error_code_name(resp.code())));
          if (honest)
            violation("honest glimmer refused the service channel: " +
                      resp.error().to_string());
          return;
        }
        post(cs.actor, kAggregationActor, {wire::Tag::kAttestQuote, resp->to_bytes()});
        return;
      }
      case wire::Tag::kSubmitPrivate: {  // encrypted validator install
        auto version = confidential::install_validator(payload, cs.agent->enclave());
        if (!version.ok()) {
          event(0, cs.spec.id,
                "validator_install_failed:" + std::string(error_code_name(version.code())));
          if (honest)
            violation("validator install failed on an honest client: " +
                      version.error().to_string());
          return;
        }
        tee::EnclaveScope scope(cs.agent->enclave());
        auto* session =
            tee::current_private_heap().find<crypto::AkxSession>("confidential-session");
        if (session == nullptr) {
          violation("validator session missing after install for " + cs.name);
          return;
        }
        ByteWriter ack;
        ack.u32(*version);
        post(cs.actor, kAggregationActor,
             {wire::Tag::kSignedResult, session->seal_message(ack.view())});
        return;
      }
      case wire::Tag::kChallenge: {
        auto ch = wire::ChallengePayload::from_bytes(payload);
        if (!ch.ok()) {
          violation("undecodable challenge for " + cs.name);
          return;
        }
        confidential::SignalRecord signals;
        signals.values = cs.spec.signals;
        signals.interaction_timestamps = cs.spec.interaction_timestamps;
        auto verdict = confidential::run_confidential(
            signals, ch->round_id, ch->nonce, service_->sealed_signing_key(),
            cs.agent->enclave());
        if (!verdict.ok()) {
          event(0, cs.spec.id,
                "verdict_failed:" + std::string(error_code_name(verdict.code())));
          if (honest)
            violation("honest client could not produce a verdict: " +
                      verdict.error().to_string());
          return;
        }
        post(cs.actor, kAggregationActor, {wire::Tag::kVerdict, verdict->to_bytes()});
        return;
      }
      default:
        violation(std::string("unexpected ") + wire::tag_name(env.frame.tag) + " sent to " +
                  cs.name);
    }
  }

  // ---- phases ----

  void confidential_phase() {
    if (!config_.confidential.enabled) return;
    for (ClientState& cs : clients_) {
      ConfState& st = conf_[cs.spec.id];
      st.initiator = std::make_unique<crypto::AkxInitiator>(*svc_rng_, &*svc_binder_);
      post(kAggregationActor, cs.actor,
           {wire::Tag::kAttestRequest, st.initiator->hello().to_bytes()});
      pump();
      if (!st.done) cs.admitted = false;
    }
  }

  void enrollment_phase() {
    for (ClientState& cs : clients_) {
      if (!cs.admitted) {
        event(0, cs.spec.id, "not_admitted");
        continue;
      }
      wire::EnrollPayload p;
      p.client_id = cs.spec.id;
      p.box_public = cs.agent->box_public();
      p.quote = cs.agent->enrollment_quote();
      p.is_public = cs.spec.is_public;
      post(cs.actor, kAggregationActor, {wire::Tag::kEnroll, p.to_bytes()});
      pump();
    }
  }

  void run_round(uint32_t r) {
    current_round_ = r;
    round_ = RoundRecord{};
    round_.round_id = r;
    const uint32_t vocab = static_cast<uint32_t>(config_.vocabulary.size());
    vector_length_ = vocab * vocab;
    round_oracle_.assign(vector_length_, 0);
    round_global_.reset();
    round_finalize_failed_ = false;

    tick_ = uint64_t(r - 1) * (config_.deadline_ticks + 2) + 1;
    const uint64_t deadline = tick_ + config_.deadline_ticks;

    Status open = service_->open_round(r, deadline, vector_length_);
    if (!open.ok()) {
      event(r, 0, std::string("round_not_opened:") + error_code_name(open.error().code));
      round_.empty_round = true;
      round_.exact = true;
      report_.round_records.push_back(round_);
      return;
    }

    // Pad provisioning plus round notices.
    auto roster = service_->blinding_roster(r);
    if (!roster.ok()) {
      violation("no blinding roster for round " + std::to_string(r));
    } else if (!roster->empty()) {
      if (config_.debug_skip_blinding) {
        for (const blinding::Participant& part : *roster) {
          crypto::Pad zero;
          zero.round_id = r;
          zero.entries.assign(vector_length_, 0);
          tee::SealedBlob sealed = platform_->seal(zero.to_bytes(), approved_);
          Bytes envelope = crypto::box_seal(
              sealed.to_bytes(), part.box_public,
              root_->derive("debug-envelope/" + std::to_string(r) + "/" +
                            std::to_string(part.client_id))
                  .seed32());
          if (ClientState* cs = client_by_id(part.client_id)) {
            wire::PadIssuePayload issue{r, deadline, vector_length_, std::move(envelope)};
            post(kBlindingActor, cs->actor, {wire::Tag::kPadIssue, issue.to_bytes()});
          }
        }
      } else {
        blinding::RoundRoster rr{r, *roster, approved_, vector_length_};
        auto issues =
            blinding_->provision_round(rr, root_->derive("pads/" + std::to_string(r)).seed32());
        if (!issues.ok()) {
          violation("pad provisioning failed: " + issues.error().to_string());
        } else {
          for (blinding::PadIssue& issue : *issues) {
            if (ClientState* cs = client_by_id(issue.client_id)) {
              wire::PadIssuePayload p{r, deadline, vector_length_, std::move(issue.envelope)};
              post(kBlindingActor, cs->actor, {wire::Tag::kPadIssue, p.to_bytes()});
            }
          }
        }
      }
    }
    for (ClientState& cs : clients_) {
      if (cs.enrolled && cs.spec.is_public) {
        wire::PadIssuePayload p{r, deadline, vector_length_, {}};
        post(kAggregationActor, cs.actor, {wire::Tag::kPadIssue, p.to_bytes()});
      }
    }
    pump();

    // Submissions, one client at a time for a deterministic order.
    tick_ += 1;
    for (ClientState& cs : clients_) {
      if (is_dropout(r, cs.spec.id)) {
        round_.dropped.push_back(cs.spec.id);
        cs.pad.reset();
        continue;
      }
      client_submit(cs, r);
      pump();
    }

    // Deadline: repair dropouts and close.
    tick_ = deadline;
    auto reveal = service_->make_reveal_request(r);
    if (!reveal.ok()) {
      round_finalize_failed_ = true;
      violation("reveal request failed for round " + std::to_string(r) + ": " +
                reveal.error().to_string());
    } else {
      post(kAggregationActor, kBlindingActor,
           {wire::Tag::kPadRevealRequest, reveal->to_bytes()});
      pump();
    }

    if (round_global_.has_value()) {
      round_.sums = round_global_->sums;
      round_.submitters = round_global_->submitter_count;
      round_.oracle = round_oracle_;
      round_.exact = round_.sums == round_.oracle;
      for (ClientState& cs : clients_) {
        if (cs.enrolled)
          post(kAggregationActor, cs.actor,
               {wire::Tag::kRoundResult, round_global_->to_bytes()});
      }
      pump();
      for (const std::string& probe : config_.probe_words) {
        int32_t w = config_.word_index(probe);
        PredictionRecord protocol_row{probe, {}};
        for (uint32_t id :
             aggregation::predict_next(*round_global_, static_cast<uint32_t>(w), vocab, kTopK))
          protocol_row.ranked.push_back(config_.vocabulary[id]);
        round_.predictions.push_back(std::move(protocol_row));
        round_.oracle_predictions.push_back(
            {probe, rank_successors(round_oracle_, w, vocab, config_.vocabulary)});
      }
      if (!round_.exact)
        violation("round " + std::to_string(r) + " aggregate differs from the oracle");
    } else if (round_.empty_round) {
      bool oracle_zero = true;
      for (uint64_t v : round_oracle_)
        if (v != 0) oracle_zero = false;
      round_.exact = oracle_zero;
      if (!oracle_zero)
        violation("round " + std::to_string(r) + " closed empty against a nonzero oracle");
    } else {
      round_.exact = false;
      if (!round_finalize_failed_)
        violation("round " + std::to_string(r) + " never produced a global model");
    }
    report_.round_records.push_back(round_);
    for (ClientState& cs : clients_) cs.pad.reset();
  }

  void client_submit(ClientState& cs, uint64_t round_id) {
    if (!cs.admitted) {
      event(round_id, cs.spec.id, "skipped:not_admitted");
      return;
    }
    bool honest = cs.spec.adversary == client::AdversaryMode::kHonest;

    const tee::SealedBlob* pad_ptr = nullptr;
    std::optional<tee::SealedBlob> sealed_pad;
    if (cs.pad.has_value() && cs.pad->round_id == round_id && !cs.pad->envelope.empty()) {
      auto opened = cs.agent->open_pad_envelope(cs.pad->envelope);
      if (opened.ok()) {
        sealed_pad = std::move(*opened);
        pad_ptr = &*sealed_pad;
      } else {
        event(round_id, cs.spec.id,
              std::string("pad_envelope_error:") + error_code_name(opened.code()));
        if (honest) violation("honest client could not open its pad envelope");
      }
    }

    // Independent oracle capture of what this client intends to submit.
    {
      client::ClientAgent::RoundInputs probe = cs.agent->build_inputs(round_id);
      cs.oracle_entries.clear();
      cs.oracle_entries.reserve(probe.x.entries.size());
      for (const crypto::FixedWeight& e : probe.x.entries) cs.oracle_entries.push_back(e.raw);
      probe.x.zeroize();
      probe.d.zeroize();
    }

    if (!cs.spec.remote) {
      client::ClientAgent::Outcome outcome = cs.agent->contribute_local(round_id, pad_ptr);
      for (const std::string& note : outcome.events) event(round_id, cs.spec.id, note);
      if (honest && cs.enrolled && outcome.submissions.empty())
        violation("honest client " + std::to_string(cs.spec.id) + " produced nothing in round " +
                  std::to_string(round_id));
      for (const core::SignedContribution& sc : outcome.submissions)
        post(cs.actor, kAggregationActor, {wire::Tag::kContribution, sc.to_bytes()});
    } else {
      if (!cs.attested) {
        post(cs.actor, cs.remote_actor,
             {wire::Tag::kAttestRequest, cs.channel->hello_bytes()});
        pump();
        if (!cs.attested) {
          event(round_id, cs.spec.id, "remote_unreachable");
          if (honest) violation("honest client never attested its remote glimmer");
          return;
        }
      }
      client::ClientAgent::RoundInputs inputs = cs.agent->build_inputs(round_id);
      for (const std::string& note : inputs.events) event(round_id, cs.spec.id, note);
      core::GlimmerRequest req{round_id, cs.spec.id, cs.spec.is_public, std::move(inputs.x),
                               std::move(inputs.d)};
      auto frame = cs.channel->seal_glimmer_request(req, pad_ptr);
      req.x.zeroize();
      req.d.zeroize();
      if (!frame.ok()) {
        event(round_id, cs.spec.id,
              std::string("remote_seal_error:") + error_code_name(frame.code()));
        if (honest) violation("honest client could not seal a remote request");
        return;
      }
      post(cs.actor, cs.remote_actor, {wire::Tag::kSubmitPrivate, std::move(*frame)});
    }
    cs.pad.reset();
  }

  // ---- bookkeeping ----

  void confidential_fail(ClientState& cs, const std::string& why) {
    cs.admitted = false;
    event(0, cs.spec.id, "confidential:" + why);
    if (cs.spec.adversary == client::AdversaryMode::kHonest)
      violation("confidential validation broke for honest client " +
                std::to_string(cs.spec.id) + ": " + why);
  }

  void event(uint64_t round, uint64_t client_id, std::string note) {
    report_.events.push_back({round, client_id, std::move(note)});
  }

  void violation(std::string note) { report_.violations.push_back(std::move(note)); }

  const std::string& name_of(ActorId id) const {
    static const std::string kUnknown = "unknown";
    auto it = names_.find(id);
    return it == names_.end() ? kUnknown : it->second;
  }

  ClientState* client_by_id(uint64_t client_id) {
    auto it = client_index_.find(client_id);
    return it == client_index_.end() ? nullptr : &clients_[it->second];
  }

  ClientState* client_by_actor(ActorId actor) {
    auto it = client_by_actor_.find(actor);
    return it == client_by_actor_.end() ? nullptr : &clients_[it->second];
  }

  bool is_dropout(uint32_t round, uint64_t client_id) const {
    auto it = config_.dropouts.find(round);
    if (it == config_.dropouts.end()) return false;
    return std::find(it->second.begin(), it->second.end(), client_id) != it->second.end();
  }

  ScenarioConfig config_;
  RunReport report_;
  std::vector<TranscriptEntry> transcript_;
  std::unique_ptr<Transport> transport_;
  uint64_t tick_ = 0;

  std::optional<DetRng> root_;
  std::optional<tee::Platform> platform_;
  Bytes code_;
  tee::Measurement approved_;
  std::optional<aggregation::AggregationService> service_;
  std::optional<blinding::BlindingService> blinding_;
  std::optional<DetRng> svc_rng_;
  std::optional<crypto::ServiceSignatureBindingMaker> svc_binder_;

  std::vector<ClientState> clients_;
  std::vector<RemoteState> remotes_;
  std::map<ActorId, std::string> names_;
  std::map<uint64_t, size_t> client_index_;
  std::map<ActorId, size_t> client_by_actor_;
  std::map<ActorId, size_t> remote_by_actor_;
  std::map<uint64_t, ConfState> conf_;

  uint64_t current_round_ = 0;
  uint32_t vector_length_ = 0;
  RoundRecord round_;
  std::vector<uint64_t> round_oracle_;
  std::optional<aggregation::GlobalModel> round_global_;
  bool round_finalize_failed_ = false;
};

}  // namespace

Result<RunOutput> run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  Harness harness(config, options);
  return harness.run();
}

Result<ScenarioConfig> resolve_scenario(const std::string& name_or_path) {
  if (const char* text = builtin_scenario_text(name_or_path))
    return parse_scenario_text(text, name_or_path);
  return load_scenario_file(name_or_path);
}

}  // namespace glimmer::sim
