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

/*
 * Public C interface to the glimmer emulation: enclave measurement, sealing
 * and quoting, plus the scenario runner and transcript verifier.
 *
 * Conventions: every fallible call returns a glimmer_status (0 is success);
 * glimmer_last_error() describes the most recent failure on this thread.
 * Buffers handed out through out-parameters are library-owned and must be
 * released with glimmer_free(). Strings are NUL-terminated UTF-8.
 */

#ifndef GLIMMER_GLIMMER_H_
#define GLIMMER_GLIMMER_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glimmer_status {
  GLIMMER_OK = 0,
  GLIMMER_ERR_POLICY_MISMATCH = 1,
  GLIMMER_ERR_INTEGRITY_FAILURE = 2,
  GLIMMER_ERR_DECODE = 3,
  GLIMMER_ERR_ZERO_PARTIES = 4,
  GLIMMER_ERR_LENGTH_MISMATCH = 5,
  GLIMMER_ERR_ROUND_MISMATCH = 6,
  GLIMMER_ERR_EMPTY_ROUND = 7,
  GLIMMER_ERR_BINDING_FAILURE = 8,
  GLIMMER_ERR_VALIDATION_FAILED = 9,
  GLIMMER_ERR_UNSEAL_FAILURE = 10,
  GLIMMER_ERR_EMPTY_ROSTER = 11,
  GLIMMER_ERR_UNKNOWN_ROUND = 12,
  GLIMMER_ERR_NOT_MISSING = 13,
  GLIMMER_ERR_BAD_SIGNATURE = 14,
  GLIMMER_ERR_UNKNOWN_CLIENT = 15,
  GLIMMER_ERR_REPLAY = 16,
  GLIMMER_ERR_ROUND_CLOSED = 17,
  GLIMMER_ERR_LOW_CONFIDENCE = 18,
  GLIMMER_ERR_BLINDING_UNAVAILABLE = 19,
  GLIMMER_ERR_DECRYPT_FAILURE = 20,
  GLIMMER_ERR_MALFORMED_POLICY = 21,
  GLIMMER_ERR_ATTESTATION_FAILURE = 22,
  GLIMMER_ERR_UNREACHABLE = 23,
  GLIMMER_ERR_CHANNEL = 24,
  GLIMMER_ERR_CONFIG = 25,
  GLIMMER_ERR_IO = 26,
  GLIMMER_ERR_INVALID_ARGUMENT = 27,
  GLIMMER_ERR_INTERNAL = 28
} glimmer_status;

#define GLIMMER_MEASUREMENT_SIZE 32
#define GLIMMER_VERIFY_KEY_SIZE 32
#define GLIMMER_SEED_SIZE 32
#define GLIMMER_QUOTE_SIZE 160

typedef struct glimmer_platform glimmer_platform;
typedef struct glimmer_enclave glimmer_enclave;
typedef struct glimmer_run_result glimmer_run_result;

/* Library metadata and error reporting. */
const char* glimmer_version(void);
const char* glimmer_status_name(int status);
/* Detail text for the most recent failure on the calling thread; empty
 * string when the last call succeeded. The pointer stays valid until the
 * next library call on the same thread. */
const char* glimmer_last_error(void);
/* Releases any buffer returned through an out-parameter. NULL is fine. */
void glimmer_free(void* ptr);

/* Code measurement: 32-byte digest identifying an enclave binary. */
int glimmer_measure(const uint8_t* code, size_t code_len,
                    uint8_t out_measurement[GLIMMER_MEASUREMENT_SIZE]);

/* A platform holds the per-run attestation and sealing roots. */
int glimmer_platform_create(const uint8_t seed[GLIMMER_SEED_SIZE], glimmer_platform** out);
void glimmer_platform_destroy(glimmer_platform* platform);
int glimmer_platform_attestation_key(const glimmer_platform* platform,
                                     uint8_t out_key[GLIMMER_VERIFY_KEY_SIZE]);
/* Seals payload to the given measurement policy. *out is glimmer_free()d. */
int glimmer_platform_seal(const glimmer_platform* platform, const uint8_t* payload,
                          size_t payload_len,
                          const uint8_t policy[GLIMMER_MEASUREMENT_SIZE], uint8_t** out,
                          size_t* out_len);

/* Enclaves: measured code instances able to unseal and quote. */
int glimmer_enclave_create(const glimmer_platform* platform, const uint8_t* code,
                           size_t code_len, glimmer_enclave** out);
void glimmer_enclave_destroy(glimmer_enclave* enclave);
int glimmer_enclave_measurement(const glimmer_enclave* enclave,
                                uint8_t out_measurement[GLIMMER_MEASUREMENT_SIZE]);
int glimmer_enclave_unseal(const glimmer_enclave* enclave, const uint8_t* blob,
                           size_t blob_len, uint8_t** out, size_t* out_len);
/* report_data shorter than 64 bytes is zero padded; longer is truncated. */
int glimmer_enclave_quote(const glimmer_enclave* enclave, const uint8_t* report_data,
                          size_t report_data_len, uint8_t out_quote[GLIMMER_QUOTE_SIZE]);
/* GLIMMER_OK when the quote is genuine for the expected measurement. */
int glimmer_verify_quote(const uint8_t quote[GLIMMER_QUOTE_SIZE],
                         const uint8_t expected_measurement[GLIMMER_MEASUREMENT_SIZE],
                         const uint8_t attestation_root[GLIMMER_VERIFY_KEY_SIZE]);

/* Scenario runner. */
typedef struct glimmer_run_options {
  uint64_t seed;           /* used only when has_seed is nonzero */
  int has_seed;
  const char* transport;   /* NULL or "" keeps the scenario's transport */
  int capture_transcripts; /* <0 keeps the scenario's setting, else 0/1 */
} glimmer_run_options;

/* name_or_path: a bundled scenario name or a path to a scenario file.
 * options may be NULL for scenario defaults. */
int glimmer_run_scenario(const char* name_or_path, const glimmer_run_options* options,
                         glimmer_run_result** out);
void glimmer_run_result_destroy(glimmer_run_result* result);
uint64_t glimmer_run_violations(const glimmer_run_result* result);
/* Line-oriented report text (one JSON object per line). */
const char* glimmer_run_report(const glimmer_run_result* result);
/* Transcript text; empty when the run did not capture transcripts. */
const char* glimmer_run_transcript(const glimmer_run_result* result);

/* Rescans a serialized report + transcript pair. violations_out and
 * flags_out receive newline-separated findings (glimmer_free both). */
int glimmer_verify_transcript(const char* report_text, const char* transcript_text,
                              char** violations_out, char** flags_out,
                              uint64_t* violation_count);

/* Newline-separated bundled scenario names; glimmer_free the result. */
int glimmer_list_scenarios(char** names_out);

#ifdef __cplusplus
}
#endif

#endif /* GLIMMER_GLIMMER_H_ */
