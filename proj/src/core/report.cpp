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

#include "core/report.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

namespace glimmer::sim {

using OrderedJson = nlohmann::ordered_json;

namespace {

OrderedJson u64_array(const std::vector<uint64_t>& values) {
  OrderedJson arr = OrderedJson::array();
  for (uint64_t v : values) arr.push_back(v);
  return arr;
}

OrderedJson prediction_array(const std::vector<PredictionRecord>& predictions) {
  OrderedJson arr = OrderedJson::array();
  for (const PredictionRecord& p : predictions) {
    OrderedJson row;
    row["word"] = p.word;
    row["ranked"] = p.ranked;
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

std::string serialize_report(const RunReport& report) {
  std::ostringstream out;
  {
    OrderedJson row;
    row["type"] = "run";
    row["scenario"] = report.scenario;
    row["seed"] = report.seed;
    row["transport"] = report.transport;
    row["rounds"] = report.rounds;
    row["vocabulary"] = report.vocabulary;
    row["clients"] = 0;
    uint64_t clients = 0;
    for (const ActorRecord& a : report.actors)
      if (a.role == "client") ++clients;
    row["clients"] = clients;
    out << row.dump() << "\n";
  }
  for (const ActorRecord& a : report.actors) {
    OrderedJson row;
    row["type"] = "actor";
    row["name"] = a.name;
    row["role"] = a.role;
    if (a.role == "client") {
      row["adversary"] = a.adversary;
      row["public"] = a.is_public ? 1 : 0;
      row["glimmer"] = a.glimmer;
    }
    if (a.role == "blinding") row["enclave"] = a.enclave_hosted ? 1 : 0;
    out << row.dump() << "\n";
  }
  for (const SentinelRecord& s : report.sentinels) {
    OrderedJson row;
    row["type"] = "sentinel";
    row["client"] = s.client_id;
    row["kind"] = s.kind;
    row["public"] = s.is_public ? 1 : 0;
    row["hex"] = to_hex(s.pattern);
    out << row.dump() << "\n";
  }
  for (const AuditRecord& a : report.audits) {
    OrderedJson row;
    row["type"] = "audit";
    row["client"] = a.client_id;
    row["reason"] = a.reason;
    row["verdict"] = a.verdict;
    row["admitted"] = a.admitted ? 1 : 0;
    out << row.dump() << "\n";
  }
  for (const EventRecord& e : report.events) {
    OrderedJson row;
    row["type"] = "event";
    row["round"] = e.round_id;
    row["client"] = e.client_id;
    row["note"] = e.note;
    out << row.dump() << "\n";
  }
  for (const RoundRecord& r : report.round_records) {
    OrderedJson row;
    row["type"] = "round";
    row["round"] = r.round_id;
    row["accepted"] = r.accepted;
    row["rejected"] = r.rejected;
    OrderedJson reasons = OrderedJson::object();
    for (const auto& [reason, count] : r.reject_reasons) reasons[reason] = count;
    row["reasons"] = reasons;
    row["submitters"] = r.submitters;
    row["dropped"] = u64_array(r.dropped);
    row["empty"] = r.empty_round ? 1 : 0;
    row["sums"] = u64_array(r.sums);
    row["oracle"] = u64_array(r.oracle);
    row["exact"] = r.exact ? 1 : 0;
    row["predictions"] = prediction_array(r.predictions);
    row["oracle_predictions"] = prediction_array(r.oracle_predictions);
    out << row.dump() << "\n";
  }
  {
    OrderedJson row;
    row["type"] = "summary";
    row["rounds"] = report.rounds;
    row["violations"] = report.violations.size();
    row["violation_notes"] = report.violations;
    row["flags"] = report.flags;
    row["zeroize_events"] = report.zeroize_events;
    out << row.dump() << "\n";
  }
  return out.str();
}

std::string serialize_transcript(const std::vector<TranscriptEntry>& entries) {
  std::ostringstream out;
  for (const TranscriptEntry& e : entries) {
    OrderedJson row;
    row["tick"] = e.tick;
    row["src"] = e.src;
    row["dst"] = e.dst;
    row["tag"] = wire::tag_name(e.tag);
    row["payload"] = to_hex(e.payload);
    out << row.dump() << "\n";
  }
  return out.str();
}

Result<std::vector<TranscriptEntry>> parse_transcript(const std::string& text) {
  std::vector<TranscriptEntry> entries;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    OrderedJson row = OrderedJson::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object())
      return make_error(ErrorCode::kDecodeError,
                        "transcript line " + std::to_string(line_no) + " is not JSON");
    TranscriptEntry e;
    if (!row.contains("tick") || !row.contains("src") || !row.contains("dst") ||
        !row.contains("tag") || !row.contains("payload"))
      return make_error(ErrorCode::kDecodeError,
                        "transcript line " + std::to_string(line_no) + " missing fields");
    e.tick = row["tick"].get<uint64_t>();
    e.src = row["src"].get<std::string>();
    e.dst = row["dst"].get<std::string>();
    wire::Tag tag;
    if (!wire::tag_from_name(row["tag"].get<std::string>(), &tag))
      return make_error(ErrorCode::kDecodeError,
                        "transcript line " + std::to_string(line_no) + " has unknown tag");
    e.tag = tag;
    auto payload = from_hex(row["payload"].get<std::string>());
    if (!payload)
      return make_error(ErrorCode::kDecodeError,
                        "transcript line " + std::to_string(line_no) + " has bad hex");
    e.payload = std::move(*payload);
    entries.push_back(std::move(e));
  }
  return entries;
}

Result<ScanContext> parse_scan_context(const std::string& report_text) {
  ScanContext ctx;
  std::istringstream in(report_text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    OrderedJson row = OrderedJson::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object())
      return make_error(ErrorCode::kDecodeError,
                        "report line " + std::to_string(line_no) + " is not JSON");
    std::string type = row.value("type", "");
    if (type == "sentinel") {
      SentinelRecord s;
      s.client_id = row["client"].get<uint64_t>();
      s.kind = row["kind"].get<std::string>();
      s.is_public = row.value("public", 0) != 0;
      auto pattern = from_hex(row["hex"].get<std::string>());
      if (!pattern)
        return make_error(ErrorCode::kDecodeError,
                          "report line " + std::to_string(line_no) + " has bad hex");
      s.pattern = std::move(*pattern);
      ctx.sentinels.push_back(std::move(s));
    } else if (type == "actor") {
      ActorRecord a;
      a.name = row["name"].get<std::string>();
      a.role = row["role"].get<std::string>();
      a.adversary = row.value("adversary", "honest");
      a.is_public = row.value("public", 0) != 0;
      ctx.actors_by_name[a.name] = std::move(a);
    }
  }
  if (ctx.actors_by_name.empty())
    return make_error(ErrorCode::kDecodeError, "report carries no actor records");
  return ctx;
}

namespace {

// Sixteen-byte windows of a sentinel with enough byte diversity to make
// accidental matches implausible. Aligned windows plus the final tail.
std::vector<Bytes> sentinel_chunks(const Bytes& pattern) {
  std::vector<Bytes> chunks;
  if (pattern.size() < 16) return chunks;
  auto usable = [](const uint8_t* p) {
    std::set<uint8_t> distinct(p, p + 16);
    return distinct.size() >= 4;
  };
  for (size_t off = 0; off + 16 <= pattern.size(); off += 16)
    if (usable(pattern.data() + off)) chunks.emplace_back(pattern.begin() + off,
                                                          pattern.begin() + off + 16);
  size_t tail = pattern.size() - 16;
  if (tail % 16 != 0 && usable(pattern.data() + tail))
    chunks.emplace_back(pattern.begin() + tail, pattern.end());
  return chunks;
}

bool contains(const Bytes& haystack, const Bytes& needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

}  // namespace

ScanResult scan_transcript(const std::vector<TranscriptEntry>& entries,
                           const ScanContext& context) {
  ScanResult result;

  // Precompute chunk lists once.
  std::vector<std::vector<Bytes>> chunk_lists;
  chunk_lists.reserve(context.sentinels.size());
  for (const SentinelRecord& s : context.sentinels) chunk_lists.push_back(sentinel_chunks(s.pattern));

  auto role_of = [&](const std::string& name) -> std::string {
    auto it = context.actors_by_name.find(name);
    return it == context.actors_by_name.end() ? std::string() : it->second.role;
  };
  auto adversary_of = [&](const std::string& name) -> std::string {
    auto it = context.actors_by_name.find(name);
    return it == context.actors_by_name.end() ? std::string("honest") : it->second.adversary;
  };
  auto public_actor = [&](const std::string& name) -> bool {
    auto it = context.actors_by_name.find(name);
    return it != context.actors_by_name.end() && it->second.is_public;
  };

  for (const TranscriptEntry& e : entries) {
    std::string dst_role = role_of(e.dst);
    bool service_bound = dst_role == "aggregation" || dst_role == "blinding";
    if (!service_bound) continue;
    // A contribution sent in the clear by a public client is sanctioned model
    // disclosure. Its bytes can coincide with another client's model when two
    // logs induce the same weights, which is not a leak of the other log.
    bool sanctioned_model =
        e.tag == wire::Tag::kContribution && public_actor(e.src);
    for (size_t i = 0; i < context.sentinels.size(); ++i) {
      const SentinelRecord& s = context.sentinels[i];
      // Public contributors disclose their model on purpose.
      if (s.kind == "model" && (s.is_public || sanctioned_model)) continue;
      bool hit = false;
      for (const Bytes& chunk : chunk_lists[i]) {
        if (contains(e.payload, chunk)) {
          hit = true;
          break;
        }
      }
      if (!hit) continue;
      std::string message = "sentinel " + s.kind + " of client " + std::to_string(s.client_id) +
                            " visible in " + wire::tag_name(e.tag) + " from " + e.src + " to " +
                            e.dst + " at tick " + std::to_string(e.tick);
      if (adversary_of(e.src) == "honest") {
        result.violations.push_back(std::move(message));
      } else {
        result.flags.push_back(std::move(message));
      }
    }
  }

  // No private payload may precede the attestation response that proves who
  // is listening. SUBMIT_PRIVATE from A to B needs an earlier ATTEST_QUOTE
  // from B to A.
  std::set<std::pair<std::string, std::string>> attested;  // (prover, verifier)
  for (const TranscriptEntry& e : entries) {
    if (e.tag == wire::Tag::kAttestQuote) {
      attested.insert({e.src, e.dst});
    } else if (e.tag == wire::Tag::kSubmitPrivate) {
      if (attested.count({e.dst, e.src}) == 0)
        result.violations.push_back("private submission before attestation from " + e.src +
                                    " to " + e.dst + " at tick " + std::to_string(e.tick));
    }
  }
  return result;
}

Result<ScanResult> verify_transcripts(const std::string& report_text,
                                      const std::string& transcript_text) {
  auto context = parse_scan_context(report_text);
  if (!context.ok()) return context.error();
  auto entries = parse_transcript(transcript_text);
  if (!entries.ok()) return entries.error();
  return scan_transcript(*entries, *context);
}

}  // namespace glimmer::sim
