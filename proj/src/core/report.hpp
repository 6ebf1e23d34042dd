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

// Run reports and transcripts, serialized as one JSON object per line so
// diffs stay line-oriented and byte-stable. All numbers are integers.
// The transcript scanner hunts for planted sentinel byte patterns in every
// service-bound message; hits from honest clients are violations, hits from
// declared adversaries are flagged detections.

#ifndef GLIMMER_CORE_REPORT_HPP_
#define GLIMMER_CORE_REPORT_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/common.hpp"
#include "core/status.hpp"
#include "core/wire.hpp"

namespace glimmer::sim {

struct ActorRecord {
  std::string name;
  std::string role;  // client | aggregation | blinding | remote
  std::string adversary = "honest";
  bool is_public = false;
  bool enclave_hosted = false;
  std::string glimmer = "local";
};

struct SentinelRecord {
  uint64_t client_id = 0;
  std::string kind;  // model | log | aux
  bool is_public = false;
  Bytes pattern;
};

struct AuditRecord {
  uint64_t client_id = 0;
  std::string reason;  // pass | bad_length | bad_verdict_byte | bad_nonce | bad_signature
  uint8_t verdict = 0;
  bool admitted = false;
};

struct PredictionRecord {
  std::string word;
  std::vector<std::string> ranked;
};

struct RoundRecord {
  uint64_t round_id = 0;
  uint32_t accepted = 0;
  uint32_t rejected = 0;
  std::map<std::string, uint64_t> reject_reasons;
  uint32_t submitters = 0;
  std::vector<uint64_t> dropped;
  std::vector<uint64_t> sums;
  std::vector<uint64_t> oracle;
  bool exact = false;
  bool empty_round = false;
  std::vector<PredictionRecord> predictions;
  std::vector<PredictionRecord> oracle_predictions;
};

struct EventRecord {
  uint64_t round_id = 0;
  uint64_t client_id = 0;
  std::string note;
};

struct RunReport {
  std::string scenario;
  uint64_t seed = 0;
  std::string transport;
  uint32_t rounds = 0;
  uint32_t vocabulary = 0;
  std::vector<ActorRecord> actors;
  std::vector<SentinelRecord> sentinels;
  std::vector<AuditRecord> audits;
  std::vector<EventRecord> events;
  std::vector<RoundRecord> round_records;
  std::vector<std::string> violations;
  std::vector<std::string> flags;
  uint64_t zeroize_events = 0;
};

struct TranscriptEntry {
  uint64_t tick = 0;
  std::string src;
  std::string dst;
  wire::Tag tag = wire::Tag::kEnroll;
  Bytes payload;
};

std::string serialize_report(const RunReport& report);
std::string serialize_transcript(const std::vector<TranscriptEntry>& entries);

Result<std::vector<TranscriptEntry>> parse_transcript(const std::string& text);

/// The subset of a report the scanner needs, reparsed from report text.
struct ScanContext {
  std::vector<SentinelRecord> sentinels;
  std::map<std::string, ActorRecord> actors_by_name;
};

Result<ScanContext> parse_scan_context(const std::string& report_text);

struct ScanResult {
  std::vector<std::string> violations;  // honest-path leaks, ordering breaches
  std::vector<std::string> flags;       // adversary leaks the scan caught
};

/// Substring scan of service-bound payloads for sentinel chunks, plus a
/// check that no private submission precedes its attestation response.
ScanResult scan_transcript(const std::vector<TranscriptEntry>& entries,
                           const ScanContext& context);

/// File-level verification: reparse a report and transcript and rescan.
Result<ScanResult> verify_transcripts(const std::string& report_text,
                                      const std::string& transcript_text);

}  // namespace glimmer::sim

#endif  // GLIMMER_CORE_REPORT_HPP_
