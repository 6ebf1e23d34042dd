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

// Scenario configuration: a line-oriented key=value format with [section]
// headers. Full-line # comments are allowed; keys split at the first '='.
//
//   [scenario]          name, seed, rounds, vocabulary, policy knobs, ...
//   [client <id>]       corpus, repeat, adversary, glimmer, public flag
//   [remote <id>]       label for a remote glimmer host
//   [dropouts]          round_<r> = <client ids>
//   [confidential]      validator s-expression plus per-client signals

#ifndef GLIMMER_CORE_SCENARIO_HPP_
#define GLIMMER_CORE_SCENARIO_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/bigram.hpp"
#include "core/client.hpp"
#include "core/glimmer_program.hpp"
#include "core/status.hpp"

namespace glimmer::sim {

struct ClientSpec {
  uint64_t id = 0;
  std::vector<std::vector<std::string>> phrases;
  uint32_t repeat = 1;
  client::AdversaryMode adversary = client::AdversaryMode::kHonest;
  uint64_t out_of_range_weight = 538;
  bool remote = false;
  uint32_t remote_id = 0;
  bool is_public = false;
  std::map<std::string, int64_t> signals;
  std::vector<uint64_t> interaction_timestamps;
};

struct RemoteSpec {
  uint32_t id = 0;
  std::string label;
};

struct ConfidentialSpec {
  bool enabled = false;
  std::string validator;
  uint64_t challenge_round = 1;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  uint64_t seed = 1;
  uint32_t rounds = 1;
  std::vector<std::string> vocabulary;
  core::ValidationPolicy policy;
  uint32_t confidence_threshold = 128;
  uint64_t deadline_ticks = 10;
  std::vector<std::string> probe_words;
  std::string transport = "bus";
  bool capture_transcripts = false;
  bool blinding_in_enclave = false;
  // Fault injection: hands every client an all-zero pad so raw model bytes
  // hit the wire. Exists to prove the transcript scanner catches leaks.
  bool debug_skip_blinding = false;
  std::vector<ClientSpec> clients;
  std::vector<RemoteSpec> remotes;
  std::map<uint32_t, std::vector<uint64_t>> dropouts;
  ConfidentialSpec confidential;

  /// Index of `word` in the vocabulary, or -1.
  int32_t word_index(const std::string& word) const;
};

/// Parses and validates. Errors carry "<origin>:<line>: message" for syntax
/// problems and field diagnostics for semantic ones.
Result<ScenarioConfig> parse_scenario_text(const std::string& text, const std::string& origin);

Result<ScenarioConfig> load_scenario_file(const std::string& path);

}  // namespace glimmer::sim

#endif  // GLIMMER_CORE_SCENARIO_HPP_
