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

// Software emulation of an SGX-like trusted execution environment. A Platform
// stands in for the CPU: it owns a process-local attestation root keypair and
// sealing root key, both derived from a per-run seed. Enclaves are measured
// code blobs that can seal data to a measurement policy and produce signed
// quotes. Real memory isolation is out of scope; the private heap is guarded
// by a scope check so host code that touches it without entering an enclave
// trips an exception.

#ifndef GLIMMER_CORE_TEE_HPP_
#define GLIMMER_CORE_TEE_HPP_

#include <any>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>

#include "core/common.hpp"
#include "core/crypto.hpp"
#include "core/status.hpp"

namespace glimmer::tee {

struct Measurement {
  crypto::Digest32 digest{};
  friend bool operator==(const Measurement&, const Measurement&) = default;
};

/// Pure: hash of the code bytes, nothing else mixed in.
Measurement measure(ConstBytes code);

struct SealedBlob {
  Measurement policy;
  crypto::AeadNonce nonce{};
  Bytes ciphertext;

  // policy (32) | nonce (24) | ciphertext length (4, big-endian) | ciphertext
  Bytes to_bytes() const;
  static Result<SealedBlob> from_bytes(ConstBytes data);
};

inline constexpr size_t kReportDataSize = 64;
using ReportData = std::array<uint8_t, kReportDataSize>;

inline constexpr size_t kQuoteSize = 32 + kReportDataSize + crypto::kSignatureSize;

struct Quote {
  Measurement measurement;
  ReportData report_data{};
  crypto::Signature signature{};

  // measurement (32) | report_data (64) | signature (64), 160 bytes total.
  Bytes to_bytes() const;
  static Result<Quote> from_bytes(ConstBytes data);
};

/// True iff the signature verifies under the attestation root public key and
/// the quoted measurement equals the verifier's expectation.
bool verify_quote(const Quote& q, const Measurement& expected, const crypto::VerifyKey& root_pub);

class Enclave;

/// The emulated CPU package. Sealing here uses the same root as enclave
/// sealing, which is how trusted infrastructure provisions secrets that only
/// an approved enclave can open.
class Platform {
 public:
  explicit Platform(const Seed32& root_seed);

  const crypto::VerifyKey& attestation_key() const { return attestation_.public_key; }

  /// Seal a payload so only enclaves measuring `policy` can unseal it.
  /// Each call draws a fresh nonce, so equal payloads give distinct blobs.
  SealedBlob seal(ConstBytes payload, const Measurement& policy) const;

 private:
  friend class Enclave;

  crypto::AeadKey sealing_key_for(const Measurement& policy) const;
  crypto::AeadNonce next_nonce() const;
  crypto::Signature sign_quote_payload(ConstBytes payload) const;

  crypto::Digest32 sealing_root_{};
  crypto::SigningKeyPair attestation_;
  mutable uint64_t seal_counter_ = 0;
};

/// Per-enclave state that host code must not touch. Access goes through
/// current_private_heap(), which requires an active EnclaveScope.
class PrivateHeap {
 public:
  template <typename T>
  T& get_or_create(const std::string& key) {
    std::any& slot = slots_[key];
    if (!slot.has_value()) slot.emplace<T>();
    return *std::any_cast<T>(&slot);
  }

  template <typename T>
  T* find(const std::string& key) {
    auto it = slots_.find(key);
    if (it == slots_.end()) return nullptr;
    return std::any_cast<T>(&it->second);
  }

  bool erase(const std::string& key) { return slots_.erase(key) > 0; }
  void clear() { slots_.clear(); }

 private:
  std::unordered_map<std::string, std::any> slots_;
};

class Enclave {
 public:
  Enclave(const Platform& platform, Bytes code);

  const Measurement& measurement() const { return measurement_; }
  const Bytes& code() const { return code_; }
  const Platform& platform() const { return *platform_; }

  SealedBlob seal(ConstBytes payload, const Measurement& policy) const;

  /// Fails with PolicyMismatch when the blob was sealed for a different
  /// measurement, IntegrityFailure when the ciphertext does not authenticate.
  Result<Bytes> unseal(const SealedBlob& blob) const;

  /// report_data shorter than 64 bytes is right-padded with zeros; longer
  /// input is truncated.
  Quote quote(ConstBytes report_data) const;

  // Instrumentation for tests: counts scrub events reported by enclave code.
  void debug_note_zeroize() const { ++zeroize_events_; }
  uint64_t debug_zeroize_events() const { return zeroize_events_; }

 private:
  friend class EnclaveScope;

  const Platform* platform_;
  Bytes code_;
  Measurement measurement_;
  mutable PrivateHeap heap_;
  mutable uint64_t zeroize_events_ = 0;
};

/// RAII marker for "execution is now inside this enclave". Host code calling
/// current_private_heap() without one gets std::logic_error.
class EnclaveScope {
 public:
  explicit EnclaveScope(const Enclave& enclave);
  ~EnclaveScope();

  EnclaveScope(const EnclaveScope&) = delete;
  EnclaveScope& operator=(const EnclaveScope&) = delete;

 private:
  PrivateHeap* previous_;
};

PrivateHeap& current_private_heap();

}  // namespace glimmer::tee

#endif  // GLIMMER_CORE_TEE_HPP_
