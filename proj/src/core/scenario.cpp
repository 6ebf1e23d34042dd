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

#include "core/scenario.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "core/confidential.hpp"
#include "core/crypto.hpp"

namespace glimmer::sim {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

bool parse_u64(const std::string& s, uint64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') return false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) return false;
  *out = v;
  return true;
}

bool parse_i64(const std::string& s, int64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == nullptr || *end != '\0') return false;
  *out = v;
  return true;
}

bool parse_bool(const std::string& s, bool* out) {
  if (s == "true" || s == "yes" || s == "1") {
    *out = true;
    return true;
  }
  if (s == "false" || s == "no" || s == "0") {
    *out = false;
    return true;
  }
  return false;
}

bool parse_adversary(const std::string& s, client::AdversaryMode* out) {
  using client::AdversaryMode;
  static const std::pair<const char*, AdversaryMode> kModes[] = {
      {"honest", AdversaryMode::kHonest},
      {"out_of_range", AdversaryMode::kOutOfRange},
      {"fabricated_in_range", AdversaryMode::kFabricatedInRange},
      {"bypass_glimmer", AdversaryMode::kBypassGlimmer},
      {"tampered_code", AdversaryMode::kTamperedCode},
      {"replay", AdversaryMode::kReplay},
  };
  for (const auto& [name, mode] : kModes) {
    if (s == name) {
      *out = mode;
      return true;
    }
  }
  return false;
}

struct Parser {
  const std::string& origin;
  ScenarioConfig config;
  // Section cursor.
  enum class Section { kNone, kScenario, kClient, kRemote, kDropouts, kConfidential };
  Section section = Section::kNone;
  size_t client_index = 0;
  size_t remote_index = 0;
};

}  // namespace

int32_t ScenarioConfig::word_index(const std::string& word) const {
  for (size_t i = 0; i < vocabulary.size(); ++i)
    if (vocabulary[i] == word) return static_cast<int32_t>(i);
  return -1;
}

Result<ScenarioConfig> parse_scenario_text(const std::string& text, const std::string& origin) {
  Parser p{origin, {}, Parser::Section::kNone, 0, 0};
  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;

  auto fail = [&](const std::string& message) -> Error {
    return make_error(ErrorCode::kConfigError,
                      origin + ":" + std::to_string(line_no) + ": " + message);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') return fail("unterminated section header");
      std::vector<std::string> head = split_ws(line.substr(1, line.size() - 2));
      if (head.empty()) return fail("empty section header");
      const std::string& kind = head[0];
      if (kind == "scenario") {
        if (head.size() != 1) return fail("[scenario] takes no argument");
        p.section = Parser::Section::kScenario;
      } else if (kind == "client") {
        uint64_t id = 0;
        if (head.size() != 2 || !parse_u64(head[1], &id))
          return fail("[client] needs a numeric id");
        ClientSpec spec;
        spec.id = id;
        p.config.clients.push_back(spec);
        p.client_index = p.config.clients.size() - 1;
        p.section = Parser::Section::kClient;
      } else if (kind == "remote") {
        uint64_t id = 0;
        if (head.size() != 2 || !parse_u64(head[1], &id) || id > 0xFFFFFFFFull)
          return fail("[remote] needs a numeric id");
        RemoteSpec spec;
        spec.id = static_cast<uint32_t>(id);
        p.config.remotes.push_back(spec);
        p.remote_index = p.config.remotes.size() - 1;
        p.section = Parser::Section::kRemote;
      } else if (kind == "dropouts") {
        if (head.size() != 1) return fail("[dropouts] takes no argument");
        p.section = Parser::Section::kDropouts;
      } else if (kind == "confidential") {
        if (head.size() != 1) return fail("[confidential] takes no argument");
        p.section = Parser::Section::kConfidential;
        p.config.confidential.enabled = true;
      } else {
        return fail("unknown section [" + kind + "]");
      }
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos) return fail("expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) return fail("empty key");

    switch (p.section) {
      case Parser::Section::kNone:
        return fail("key outside any section");
      case Parser::Section::kScenario: {
        ScenarioConfig& c = p.config;
        if (key == "name") {
          c.name = value;
        } else if (key == "description") {
          c.description = value;
        } else if (key == "seed") {
          if (!parse_u64(value, &c.seed)) return fail("seed must be an unsigned integer");
        } else if (key == "rounds") {
          uint64_t v = 0;
          if (!parse_u64(value, &v) || v == 0 || v > 10000)
            return fail("rounds must be in [1, 10000]");
          c.rounds = static_cast<uint32_t>(v);
        } else if (key == "vocabulary") {
          c.vocabulary = split_ws(value);
        } else if (key == "policy") {
          if (value == "range") {
            c.policy.kind = core::PolicyKind::kRangeCheck;
          } else if (value == "corroboration") {
            c.policy.kind = core::PolicyKind::kCorroboration;
          } else if (value == "composite") {
            c.policy.kind = core::PolicyKind::kComposite;
          } else {
            return fail("policy must be range|corroboration|composite");
          }
        } else if (key == "policy_lo") {
          if (!parse_u64(value, &c.policy.lo)) return fail("policy_lo must be an integer");
        } else if (key == "policy_hi") {
          if (!parse_u64(value, &c.policy.hi)) return fail("policy_hi must be an integer");
        } else if (key == "tolerance") {
          if (!parse_u64(value, &c.policy.tolerance))
            return fail("tolerance must be an integer");
        } else if (key == "normalization") {
          if (value == "joint") {
            c.policy.normalization = bigram::Normalization::kJoint;
          } else if (value == "conditional") {
            c.policy.normalization = bigram::Normalization::kConditional;
          } else {
            return fail("normalization must be joint|conditional");
          }
        } else if (key == "confidence_threshold") {
          uint64_t v = 0;
          if (!parse_u64(value, &v) || v > 255)
            return fail("confidence_threshold must be in [0, 255]");
          c.confidence_threshold = static_cast<uint32_t>(v);
        } else if (key == "deadline_ticks") {
          if (!parse_u64(value, &c.deadline_ticks) || c.deadline_ticks == 0)
            return fail("deadline_ticks must be positive");
        } else if (key == "probe_words") {
          c.probe_words = split_ws(value);
        } else if (key == "transport") {
          if (value != "bus" && value != "socket") return fail("transport must be bus|socket");
          c.transport = value;
        } else if (key == "capture_transcripts") {
          if (!parse_bool(value, &c.capture_transcripts)) return fail("expected a boolean");
        } else if (key == "blinding_in_enclave") {
          if (!parse_bool(value, &c.blinding_in_enclave)) return fail("expected a boolean");
        } else if (key == "debug_skip_blinding") {
          if (!parse_bool(value, &c.debug_skip_blinding)) return fail("expected a boolean");
        } else {
          return fail("unknown [scenario] key: " + key);
        }
        break;
      }
      case Parser::Section::kClient: {
        ClientSpec& spec = p.config.clients[p.client_index];
        if (key == "corpus") {
          spec.phrases.clear();
          for (const std::string& phrase : split_on(value, '|')) {
            std::vector<std::string> words = split_ws(phrase);
            if (!words.empty()) spec.phrases.push_back(std::move(words));
          }
        } else if (key == "repeat") {
          uint64_t v = 0;
          if (!parse_u64(value, &v) || v == 0 || v > 100000)
            return fail("repeat must be in [1, 100000]");
          spec.repeat = static_cast<uint32_t>(v);
        } else if (key == "adversary") {
          if (!parse_adversary(value, &spec.adversary))
            return fail("unknown adversary mode: " + value);
        } else if (key == "out_of_range_weight") {
          if (!parse_u64(value, &spec.out_of_range_weight) || spec.out_of_range_weight < 2)
            return fail("out_of_range_weight must be an integer >= 2");
        } else if (key == "glimmer") {
          if (value == "local") {
            spec.remote = false;
          } else if (value.rfind("remote:", 0) == 0) {
            uint64_t id = 0;
            if (!parse_u64(value.substr(7), &id) || id > 0xFFFFFFFFull)
              return fail("glimmer remote id must be numeric");
            spec.remote = true;
            spec.remote_id = static_cast<uint32_t>(id);
          } else {
            return fail("glimmer must be local or remote:<id>");
          }
        } else if (key == "public_contribution") {
          if (!parse_bool(value, &spec.is_public)) return fail("expected a boolean");
        } else {
          return fail("unknown [client] key: " + key);
        }
        break;
      }
      case Parser::Section::kRemote: {
        RemoteSpec& spec = p.config.remotes[p.remote_index];
        if (key == "label") {
          spec.label = value;
        } else {
          return fail("unknown [remote] key: " + key);
        }
        break;
      }
      case Parser::Section::kDropouts: {
        if (key.rfind("round_", 0) != 0) return fail("dropout keys look like round_<r>");
        uint64_t round = 0;
        if (!parse_u64(key.substr(6), &round) || round == 0)
          return fail("dropout round must be a positive integer");
        std::vector<uint64_t> ids;
        for (const std::string& tok : split_ws(value)) {
          uint64_t id = 0;
          if (!parse_u64(tok, &id)) return fail("dropout ids must be integers");
          ids.push_back(id);
        }
        p.config.dropouts[static_cast<uint32_t>(round)] = std::move(ids);
        break;
      }
      case Parser::Section::kConfidential: {
        ConfidentialSpec& spec = p.config.confidential;
        if (key == "validator") {
          spec.validator = value;
          auto parsed = confidential::parse_policy(value);
          if (!parsed.ok()) return fail("validator: " + parsed.error().detail);
        } else if (key == "challenge_round") {
          if (!parse_u64(value, &spec.challenge_round) || spec.challenge_round == 0)
            return fail("challenge_round must be a positive integer");
        } else if (key.rfind("signals_", 0) == 0) {
          uint64_t id = 0;
          if (!parse_u64(key.substr(8), &id)) return fail("signals key looks like signals_<id>");
          ClientSpec* target = nullptr;
          for (ClientSpec& cs : p.config.clients)
            if (cs.id == id) target = &cs;
          if (target == nullptr) return fail("signals for unknown client " + std::to_string(id));
          for (const std::string& item : split_on(value, ',')) {
            if (item.empty()) continue;
            size_t colon = item.find(':');
            if (colon == std::string::npos) return fail("signals look like name:value");
            std::string name = trim(item.substr(0, colon));
            int64_t v = 0;
            if (name.empty() || !parse_i64(trim(item.substr(colon + 1)), &v))
              return fail("signals look like name:value");
            target->signals[name] = v;
          }
        } else if (key.rfind("timestamps_", 0) == 0) {
          uint64_t id = 0;
          if (!parse_u64(key.substr(11), &id))
            return fail("timestamps key looks like timestamps_<id>");
          ClientSpec* target = nullptr;
          for (ClientSpec& cs : p.config.clients)
            if (cs.id == id) target = &cs;
          if (target == nullptr)
            return fail("timestamps for unknown client " + std::to_string(id));
          std::vector<uint64_t> ts;
          for (const std::string& tok : split_ws(value)) {
            uint64_t v = 0;
            if (!parse_u64(tok, &v)) return fail("timestamps must be unsigned integers");
            ts.push_back(v);
          }
          target->interaction_timestamps = std::move(ts);
        } else {
          return fail("unknown [confidential] key: " + key);
        }
        break;
      }
    }
  }

  // Semantic validation. These are field diagnostics, not line diagnostics,
  // because they cross section boundaries.
  ScenarioConfig& c = p.config;
  auto field_err = [&](const std::string& message) {
    return make_error(ErrorCode::kConfigError, origin + ": " + message);
  };

  if (c.name.empty()) return field_err("[scenario] name is required");
  if (c.vocabulary.empty()) return field_err("[scenario] vocabulary is required");
  {
    std::set<std::string> seen;
    for (const std::string& w : c.vocabulary)
      if (!seen.insert(w).second) return field_err("duplicate vocabulary word: " + w);
  }
  if (c.policy.lo > c.policy.hi) return field_err("policy_lo exceeds policy_hi");
  if (c.clients.empty()) return field_err("at least one [client] is required");
  {
    std::set<uint64_t> ids;
    for (const ClientSpec& cs : c.clients)
      if (!ids.insert(cs.id).second)
        return field_err("duplicate client id " + std::to_string(cs.id));
  }
  {
    std::set<uint32_t> remote_ids;
    for (const RemoteSpec& rs : c.remotes)
      if (!remote_ids.insert(rs.id).second)
        return field_err("duplicate remote id " + std::to_string(rs.id));
    for (const ClientSpec& cs : c.clients) {
      if (cs.remote && remote_ids.count(cs.remote_id) == 0)
        return field_err("client " + std::to_string(cs.id) + " references missing remote " +
                         std::to_string(cs.remote_id));
      if (cs.remote && c.confidential.enabled)
        return field_err("confidential validation requires local glimmers");
    }
  }
  for (const ClientSpec& cs : c.clients) {
    for (const auto& phrase : cs.phrases)
      for (const std::string& w : phrase)
        if (c.word_index(w) < 0)
          return field_err("client " + std::to_string(cs.id) + " corpus word '" + w +
                           "' not in vocabulary");
  }
  for (const std::string& w : c.probe_words)
    if (c.word_index(w) < 0) return field_err("probe word '" + w + "' not in vocabulary");
  for (const auto& [round, ids] : c.dropouts) {
    if (round == 0 || round > c.rounds)
      return field_err("dropout round " + std::to_string(round) + " out of range");
    for (uint64_t id : ids) {
      bool known = false;
      for (const ClientSpec& cs : c.clients)
        if (cs.id == id) known = true;
      if (!known) return field_err("dropout lists unknown client " + std::to_string(id));
    }
  }
  if (c.confidential.enabled) {
    if (c.confidential.validator.empty())
      return field_err("[confidential] requires a validator");
    if (c.confidential.challenge_round > c.rounds)
      return field_err("challenge_round exceeds round count");
  }
  // Vector length must fit the wire's 4-byte counts.
  uint64_t vlen = uint64_t(c.vocabulary.size()) * uint64_t(c.vocabulary.size());
  if (vlen > 0xFFFFFFFFull) return field_err("vocabulary too large");
  return c;
}

Result<ScenarioConfig> load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return make_error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string origin = path;
  size_t slash = origin.find_last_of('/');
  if (slash != std::string::npos) origin = origin.substr(slash + 1);
  return parse_scenario_text(buf.str(), origin);
}

}  // namespace glimmer::sim
