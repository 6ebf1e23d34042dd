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

// Multi-party simulation: clients (honest and adversarial), local and remote
// glimmer enclaves, a blinding service, and the aggregation service exchange
// tagged messages over a transport while the harness advances logical ticks
// and serializes round transitions at barriers. An embedded plaintext oracle
// recomputes every round's sum independently; reports are deterministic for
// a fixed config and seed.

#ifndef GLIMMER_CORE_HARNESS_HPP_
#define GLIMMER_CORE_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "core/report.hpp"
#include "core/scenario.hpp"
#include "core/status.hpp"

namespace glimmer::sim {

struct RunOptions {
  bool has_seed = false;
  uint64_t seed = 0;
  std::string transport;  // empty keeps the scenario's choice
  int capture_transcripts = -1;  // -1 keeps the scenario's choice
};

struct RunOutput {
  RunReport report;
  std::string report_text;
  std::string transcript_text;  // empty unless transcripts were captured
};

Result<RunOutput> run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// Bundled scenarios, compiled in so the CLI works from any directory.
std::vector<std::string> builtin_scenario_names();

/// nullptr when the name is not bundled.
const char* builtin_scenario_text(const std::string& name);

/// Accepts a bundled scenario name or a path to a scenario file.
Result<ScenarioConfig> resolve_scenario(const std::string& name_or_path);

}  // namespace glimmer::sim

#endif  // GLIMMER_CORE_HARNESS_HPP_
