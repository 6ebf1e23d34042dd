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

#include "glimmer/glimmer.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/harness.hpp"
#include "core/report.hpp"
#include "core/scenario.hpp"
#include "core/status.hpp"
#include "core/tee.hpp"

namespace {

using glimmer::Bytes;
using glimmer::ConstBytes;
using glimmer::ErrorCode;

// The C enum must track the internal one value for value.
#define CHECK_CODE(c_name, cpp_name) \
  static_assert(int(c_name) == int(ErrorCode::cpp_name))
CHECK_CODE(GLIMMER_OK, kOk);
CHECK_CODE(GLIMMER_ERR_POLICY_MISMATCH, kPolicyMismatch);
CHECK_CODE(GLIMMER_ERR_INTEGRITY_FAILURE, kIntegrityFailure);
CHECK_CODE(GLIMMER_ERR_DECODE, kDecodeError);
CHECK_CODE(GLIMMER_ERR_ZERO_PARTIES, kZeroParties);
CHECK_CODE(GLIMMER_ERR_LENGTH_MISMATCH, kLengthMismatch);
CHECK_CODE(GLIMMER_ERR_ROUND_MISMATCH, kRoundMismatch);
CHECK_CODE(GLIMMER_ERR_EMPTY_ROUND, kEmptyRound);
CHECK_CODE(GLIMMER_ERR_BINDING_FAILURE, kBindingFailure);
CHECK_CODE(GLIMMER_ERR_VALIDATION_FAILED, kValidationFailed);
CHECK_CODE(GLIMMER_ERR_UNSEAL_FAILURE, kUnsealFailure);
CHECK_CODE(GLIMMER_ERR_EMPTY_ROSTER, kEmptyRoster);
CHECK_CODE(GLIMMER_ERR_UNKNOWN_ROUND, kUnknownRound);
CHECK_CODE(GLIMMER_ERR_NOT_MISSING, kNotMissing);
CHECK_CODE(GLIMMER_ERR_BAD_SIGNATURE, kBadSignature);
CHECK_CODE(GLIMMER_ERR_UNKNOWN_CLIENT, kUnknownClient);
CHECK_CODE(GLIMMER_ERR_REPLAY, kReplay);
CHECK_CODE(GLIMMER_ERR_ROUND_CLOSED, kRoundClosed);
CHECK_CODE(GLIMMER_ERR_LOW_CONFIDENCE, kLowConfidence);
CHECK_CODE(GLIMMER_ERR_BLINDING_UNAVAILABLE, kBlindingServiceUnavailable);
CHECK_CODE(GLIMMER_ERR_DECRYPT_FAILURE, kDecryptFailure);
CHECK_CODE(GLIMMER_ERR_MALFORMED_POLICY, kMalformedPolicy);
CHECK_CODE(GLIMMER_ERR_ATTESTATION_FAILURE, kAttestationFailure);
CHECK_CODE(GLIMMER_ERR_UNREACHABLE, kUnreachable);
CHECK_CODE(GLIMMER_ERR_CHANNEL, kChannelError);
CHECK_CODE(GLIMMER_ERR_CONFIG, kConfigError);
CHECK_CODE(GLIMMER_ERR_IO, kIoError);
CHECK_CODE(GLIMMER_ERR_INVALID_ARGUMENT, kInvalidArgument);
CHECK_CODE(GLIMMER_ERR_INTERNAL, kInternal);
#undef CHECK_CODE

thread_local std::string g_last_error;

int ok() {
  g_last_error.clear();
  return GLIMMER_OK;
}

int fail(const glimmer::Error& error) {
  g_last_error = error.detail;
  return static_cast<int>(error.code);
}

int fail_arg(const char* what) {
  g_last_error = what;
  return GLIMMER_ERR_INVALID_ARGUMENT;
}

// Copies bytes into a malloc'd buffer the caller frees with glimmer_free.
int copy_out(const Bytes& data, uint8_t** out, size_t* out_len) {
  uint8_t* buf = static_cast<uint8_t*>(std::malloc(data.size() ? data.size() : 1));
  if (buf == nullptr) {
    g_last_error = "out of memory";
    return GLIMMER_ERR_INTERNAL;
  }
  if (!data.empty()) std::memcpy(buf, data.data(), data.size());
  *out = buf;
  *out_len = data.size();
  return ok();
}

int copy_out_string(const std::string& text, char** out) {
  char* buf = static_cast<char*>(std::malloc(text.size() + 1));
  if (buf == nullptr) {
    g_last_error = "out of memory";
    return GLIMMER_ERR_INTERNAL;
  }
  std::memcpy(buf, text.data(), text.size());
  buf[text.size()] = '\0';
  *out = buf;
  return ok();
}

}  // namespace

struct glimmer_platform {
  glimmer::tee::Platform platform;
};

struct glimmer_enclave {
  glimmer::tee::Enclave enclave;
};

struct glimmer_run_result {
  std::string report_text;
  std::string transcript_text;
  uint64_t violations = 0;
};

extern "C" {

const char* glimmer_version(void) { return "0.1.0"; }

const char* glimmer_status_name(int status) {
  if (status < 0 || status > int(ErrorCode::kInternal)) return "Unknown";
  return glimmer::error_code_name(static_cast<ErrorCode>(status));
}

const char* glimmer_last_error(void) { return g_last_error.c_str(); }

void glimmer_free(void* ptr) { std::free(ptr); }

int glimmer_measure(const uint8_t* code, size_t code_len, uint8_t out_measurement[32]) {
  if ((code == nullptr && code_len != 0) || out_measurement == nullptr)
    return fail_arg("measure: bad buffer");
  glimmer::tee::Measurement m = glimmer::tee::measure(ConstBytes(code, code_len));
  std::memcpy(out_measurement, m.digest.data(), m.digest.size());
  return ok();
}

int glimmer_platform_create(const uint8_t seed[32], glimmer_platform** out) {
  if (seed == nullptr || out == nullptr) return fail_arg("platform_create: bad argument");
  glimmer::Seed32 s;
  std::memcpy(s.data(), seed, s.size());
  *out = new (std::nothrow) glimmer_platform{glimmer::tee::Platform(s)};
  if (*out == nullptr) {
    g_last_error = "out of memory";
    return GLIMMER_ERR_INTERNAL;
  }
  return ok();
}

void glimmer_platform_destroy(glimmer_platform* platform) { delete platform; }

int glimmer_platform_attestation_key(const glimmer_platform* platform, uint8_t out_key[32]) {
  if (platform == nullptr || out_key == nullptr)
    return fail_arg("attestation_key: bad argument");
  const glimmer::crypto::VerifyKey& key = platform->platform.attestation_key();
  std::memcpy(out_key, key.bytes.data(), key.bytes.size());
  return ok();
}

int glimmer_platform_seal(const glimmer_platform* platform, const uint8_t* payload,
                          size_t payload_len, const uint8_t policy[32], uint8_t** out,
                          size_t* out_len) {
  if (platform == nullptr || (payload == nullptr && payload_len != 0) || policy == nullptr ||
      out == nullptr || out_len == nullptr)
    return fail_arg("seal: bad argument");
  glimmer::tee::Measurement m;
  std::memcpy(m.digest.data(), policy, m.digest.size());
  glimmer::tee::SealedBlob blob =
      platform->platform.seal(ConstBytes(payload, payload_len), m);
  return copy_out(blob.to_bytes(), out, out_len);
}

int glimmer_enclave_create(const glimmer_platform* platform, const uint8_t* code,
                           size_t code_len, glimmer_enclave** out) {
  if (platform == nullptr || (code == nullptr && code_len != 0) || out == nullptr)
    return fail_arg("enclave_create: bad argument");
  *out = new (std::nothrow) glimmer_enclave{
      glimmer::tee::Enclave(platform->platform, Bytes(code, code + code_len))};
  if (*out == nullptr) {
    g_last_error = "out of memory";
    return GLIMMER_ERR_INTERNAL;
  }
  return ok();
}

void glimmer_enclave_destroy(glimmer_enclave* enclave) { delete enclave; }

int glimmer_enclave_measurement(const glimmer_enclave* enclave, uint8_t out_measurement[32]) {
  if (enclave == nullptr || out_measurement == nullptr)
    return fail_arg("enclave_measurement: bad argument");
  const glimmer::tee::Measurement& m = enclave->enclave.measurement();
  std::memcpy(out_measurement, m.digest.data(), m.digest.size());
  return ok();
}

int glimmer_enclave_unseal(const glimmer_enclave* enclave, const uint8_t* blob,
                           size_t blob_len, uint8_t** out, size_t* out_len) {
  if (enclave == nullptr || blob == nullptr || out == nullptr || out_len == nullptr)
    return fail_arg("unseal: bad argument");
  auto parsed = glimmer::tee::SealedBlob::from_bytes(ConstBytes(blob, blob_len));
  if (!parsed.ok()) return fail(parsed.error());
  auto plain = enclave->enclave.unseal(*parsed);
  if (!plain.ok()) return fail(plain.error());
  return copy_out(*plain, out, out_len);
}

int glimmer_enclave_quote(const glimmer_enclave* enclave, const uint8_t* report_data,
                          size_t report_data_len, uint8_t out_quote[160]) {
  if (enclave == nullptr || (report_data == nullptr && report_data_len != 0) ||
      out_quote == nullptr)
    return fail_arg("quote: bad argument");
  glimmer::tee::Quote q = enclave->enclave.quote(ConstBytes(report_data, report_data_len));
  Bytes bytes = q.to_bytes();
  std::memcpy(out_quote, bytes.data(), bytes.size());
  return ok();
}

int glimmer_verify_quote(const uint8_t quote[160], const uint8_t expected_measurement[32],
                         const uint8_t attestation_root[32]) {
  if (quote == nullptr || expected_measurement == nullptr || attestation_root == nullptr)
    return fail_arg("verify_quote: bad argument");
  auto parsed = glimmer::tee::Quote::from_bytes(ConstBytes(quote, 160));
  if (!parsed.ok()) return fail(parsed.error());
  glimmer::tee::Measurement m;
  std::memcpy(m.digest.data(), expected_measurement, m.digest.size());
  glimmer::crypto::VerifyKey root;
  std::memcpy(root.bytes.data(), attestation_root, root.bytes.size());
  if (!glimmer::tee::verify_quote(*parsed, m, root)) {
    g_last_error = "quote does not verify";
    return GLIMMER_ERR_ATTESTATION_FAILURE;
  }
  return ok();
}

int glimmer_run_scenario(const char* name_or_path, const glimmer_run_options* options,
                         glimmer_run_result** out) {
  if (name_or_path == nullptr || out == nullptr) return fail_arg("run: bad argument");
  auto config = glimmer::sim::resolve_scenario(name_or_path);
  if (!config.ok()) return fail(config.error());
  glimmer::sim::RunOptions run_options;
  if (options != nullptr) {
    run_options.has_seed = options->has_seed != 0;
    run_options.seed = options->seed;
    if (options->transport != nullptr) run_options.transport = options->transport;
    run_options.capture_transcripts = options->capture_transcripts;
  }
  auto output = glimmer::sim::run_scenario(*config, run_options);
  if (!output.ok()) return fail(output.error());
  auto* result = new (std::nothrow) glimmer_run_result;
  if (result == nullptr) {
    g_last_error = "out of memory";
    return GLIMMER_ERR_INTERNAL;
  }
  result->report_text = std::move(output->report_text);
  result->transcript_text = std::move(output->transcript_text);
  result->violations = output->report.violations.size();
  *out = result;
  return ok();
}

void glimmer_run_result_destroy(glimmer_run_result* result) { delete result; }

uint64_t glimmer_run_violations(const glimmer_run_result* result) {
  return result == nullptr ? 0 : result->violations;
}

const char* glimmer_run_report(const glimmer_run_result* result) {
  return result == nullptr ? "" : result->report_text.c_str();
}

const char* glimmer_run_transcript(const glimmer_run_result* result) {
  return result == nullptr ? "" : result->transcript_text.c_str();
}

int glimmer_verify_transcript(const char* report_text, const char* transcript_text,
                              char** violations_out, char** flags_out,
                              uint64_t* violation_count) {
  if (report_text == nullptr || transcript_text == nullptr)
    return fail_arg("verify: bad argument");
  auto scan = glimmer::sim::verify_transcripts(report_text, transcript_text);
  if (!scan.ok()) return fail(scan.error());
  std::string violations;
  for (const std::string& v : scan->violations) {
    violations += v;
    violations += '\n';
  }
  std::string flags;
  for (const std::string& f : scan->flags) {
    flags += f;
    flags += '\n';
  }
  if (violation_count != nullptr) *violation_count = scan->violations.size();
  if (violations_out != nullptr) {
    int rc = copy_out_string(violations, violations_out);
    if (rc != GLIMMER_OK) return rc;
  }
  if (flags_out != nullptr) {
    int rc = copy_out_string(flags, flags_out);
    if (rc != GLIMMER_OK) {
      if (violations_out != nullptr) {
        std::free(*violations_out);
        *violations_out = nullptr;
      }
      return rc;
    }
  }
  return ok();
}

int glimmer_list_scenarios(char** names_out) {
  if (names_out == nullptr) return fail_arg("list: bad argument");
  std::string joined;
  for (const std::string& name : glimmer::sim::builtin_scenario_names()) {
    joined += name;
    joined += '\n';
  }
  return copy_out_string(joined, names_out);
}

}  // extern "C"
