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

// Command line front end. Talks to the library exclusively through the
// public C API so it doubles as a smoke test for the shared object.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "glimmer/glimmer.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return bool(out);
}

bool read_file(const std::string& path, std::string* text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  *text = buffer.str();
  return true;
}

int run_command(const std::string& scenario, bool has_seed, uint64_t seed,
                const std::string& transport, bool capture, const std::string& out_dir) {
  glimmer_run_options options{};
  options.seed = seed;
  options.has_seed = has_seed ? 1 : 0;
  options.transport = transport.empty() ? nullptr : transport.c_str();
  options.capture_transcripts = capture ? 1 : -1;

  glimmer_run_result* result = nullptr;
  int rc = glimmer_run_scenario(scenario.c_str(), &options, &result);
  if (rc != GLIMMER_OK) {
    std::cerr << "error: " << glimmer_status_name(rc) << ": " << glimmer_last_error()
              << "\n";
    return kExitUsage;
  }

  uint64_t violations = glimmer_run_violations(result);
  const char* report = glimmer_run_report(result);
  const char* transcript = glimmer_run_transcript(result);

  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
      glimmer_run_result_destroy(result);
      return kExitUsage;
    }
    std::filesystem::path dir(out_dir);
    if (!write_file(dir / "report.jsonl", report)) {
      std::cerr << "error: cannot write report.jsonl\n";
      glimmer_run_result_destroy(result);
      return kExitUsage;
    }
    if (transcript[0] != '\0' && !write_file(dir / "transcript.jsonl", transcript)) {
      std::cerr << "error: cannot write transcript.jsonl\n";
      glimmer_run_result_destroy(result);
      return kExitUsage;
    }
  } else {
    std::cout << report;
  }

  std::cout << "scenario " << scenario << ": "
            << (violations == 0 ? "clean" : "VIOLATIONS") << " (" << violations
            << " violation" << (violations == 1 ? "" : "s") << ")\n";
  glimmer_run_result_destroy(result);
  return violations == 0 ? kExitOk : kExitViolations;
}

int verify_command(const std::string& report_path, const std::string& transcript_path) {
  std::string report_text;
  std::string transcript_text;
  if (!read_file(report_path, &report_text)) {
    std::cerr << "error: cannot read " << report_path << "\n";
    return kExitUsage;
  }
  if (!read_file(transcript_path, &transcript_text)) {
    std::cerr << "error: cannot read " << transcript_path << "\n";
    return kExitUsage;
  }
  char* violations = nullptr;
  char* flags = nullptr;
  uint64_t count = 0;
  int rc = glimmer_verify_transcript(report_text.c_str(), transcript_text.c_str(),
                                     &violations, &flags, &count);
  if (rc != GLIMMER_OK) {
    std::cerr << "error: " << glimmer_status_name(rc) << ": " << glimmer_last_error()
              << "\n";
    return kExitUsage;
  }
  if (flags != nullptr && flags[0] != '\0') std::cout << "flagged:\n" << flags;
  if (violations != nullptr && violations[0] != '\0')
    std::cout << "violations:\n" << violations;
  std::cout << (count == 0 ? "clean" : "VIOLATIONS") << " (" << count << " violation"
            << (count == 1 ? "" : "s") << ")\n";
  glimmer_free(violations);
  glimmer_free(flags);
  return count == 0 ? kExitOk : kExitViolations;
}

int list_command() {
  char* names = nullptr;
  int rc = glimmer_list_scenarios(&names);
  if (rc != GLIMMER_OK) {
    std::cerr << "error: " << glimmer_status_name(rc) << ": " << glimmer_last_error()
              << "\n";
    return kExitUsage;
  }
  std::cout << names;
  glimmer_free(names);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"glimmer: blinded aggregation simulator"};
  app.set_version_flag("--version", std::string(glimmer_version()));
  app.require_subcommand(1);

  std::string scenario;
  uint64_t seed = 0;
  bool has_seed = false;
  std::string transport;
  bool capture = false;
  std::string out_dir;
  CLI::App* run = app.add_subcommand("run", "Run a named or file based scenario");
  run->add_option("scenario", scenario, "Built-in name or path to a .scn file")
      ->required();
  run->add_option("--seed", seed, "Override the scenario seed")
      ->each([&](const std::string&) { has_seed = true; });
  run->add_option("--transport", transport, "Message transport: bus or socket");
  run->add_flag("--capture-transcripts", capture, "Force transcript capture on");
  run->add_option("--out", out_dir, "Directory for report.jsonl and transcript.jsonl");

  std::string report_path;
  std::string transcript_path;
  CLI::App* verify = app.add_subcommand("verify", "Re-scan a recorded transcript");
  verify->add_option("report", report_path, "Path to report.jsonl")->required();
  verify->add_option("transcript", transcript_path, "Path to transcript.jsonl")
      ->required();

  app.add_subcommand("list-scenarios", "List bundled scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) return run_command(scenario, has_seed, seed, transport, capture, out_dir);
  if (verify->parsed()) return verify_command(report_path, transcript_path);
  return list_command();
}
