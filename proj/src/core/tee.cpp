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

#include "core/tee.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "core/rng.hpp"

namespace glimmer::tee {

namespace {

constexpr std::string_view kQuoteDomain = "tee-quote-v1";

thread_local PrivateHeap* g_active_heap = nullptr;

}  // namespace

Measurement measure(ConstBytes code) { return Measurement{crypto::hash32(code)}; }

Bytes SealedBlob::to_bytes() const {
  ByteWriter w;
  w.bytes(policy.digest);
  w.bytes(nonce);
  w.var_bytes(ciphertext);
  return w.take();
}

Result<SealedBlob> SealedBlob::from_bytes(ConstBytes data) {
  ByteReader r(data);
  SealedBlob blob;
  if (!r.bytes(blob.policy.digest) || !r.bytes(blob.nonce) || !r.var_bytes(blob.ciphertext))
    return make_error(ErrorCode::kDecodeError, "sealed blob layout");
  if (!r.exhausted()) return make_error(ErrorCode::kDecodeError, "sealed blob trailing bytes");
  return blob;
}

Bytes Quote::to_bytes() const {
  ByteWriter w;
  w.bytes(measurement.digest);
  w.bytes(report_data);
  w.bytes(signature);
  return w.take();
}

Result<Quote> Quote::from_bytes(ConstBytes data) {
  if (data.size() != kQuoteSize) return make_error(ErrorCode::kDecodeError, "quote must be 160 bytes");
  ByteReader r(data);
  Quote q;
  r.bytes(q.measurement.digest);
  r.bytes(q.report_data);
  r.bytes(q.signature);
  return q;
}

bool verify_quote(const Quote& q, const Measurement& expected, const crypto::VerifyKey& root_pub) {
  if (!(q.measurement == expected)) return false;
  ByteWriter w;
  w.bytes(as_bytes(kQuoteDomain));
  w.bytes(q.measurement.digest);
  w.bytes(q.report_data);
  return crypto::verify(w.view(), q.signature, root_pub);
}

Platform::Platform(const Seed32& root_seed) {
  DetRng rng(root_seed);
  attestation_ = crypto::signing_keypair_from_seed(rng.derive("attestation-root").seed32());
  sealing_root_ = rng.derive("sealing-root").seed32();
}

crypto::AeadKey Platform::sealing_key_for(const Measurement& policy) const {
  return crypto::derive_key(sealing_root_, "sealing-key", policy.digest);
}

crypto::AeadNonce Platform::next_nonce() const {
  ByteWriter w;
  w.bytes(sealing_root_);
  w.bytes(as_bytes("nonce"));
  w.u64(seal_counter_++);
  const crypto::Digest32 h = crypto::hash32(w.view());
  crypto::AeadNonce nonce{};
  std::copy_n(h.begin(), nonce.size(), nonce.begin());
  return nonce;
}

crypto::Signature Platform::sign_quote_payload(ConstBytes payload) const {
  return crypto::sign(payload, attestation_.secret);
}

SealedBlob Platform::seal(ConstBytes payload, const Measurement& policy) const {
  SealedBlob blob;
  blob.policy = policy;
  blob.nonce = next_nonce();
  // The policy digest rides along as associated data, so a swapped policy
  // field fails authentication even before the explicit measurement check.
  blob.ciphertext = crypto::aead_encrypt(sealing_key_for(policy), blob.nonce, payload,
                                         policy.digest);
  return blob;
}

Enclave::Enclave(const Platform& platform, Bytes code)
    : platform_(&platform), code_(std::move(code)), measurement_(measure(code_)) {}

SealedBlob Enclave::seal(ConstBytes payload, const Measurement& policy) const {
  return platform_->seal(payload, policy);
}

Result<Bytes> Enclave::unseal(const SealedBlob& blob) const {
  if (!(blob.policy == measurement_))
    return make_error(ErrorCode::kPolicyMismatch, "sealed for a different enclave");
  // Key derivation uses this enclave's own measurement, mirroring hardware:
  // even a forged policy field cannot reach another enclave's key.
  auto plain = crypto::aead_decrypt(platform_->sealing_key_for(measurement_), blob.nonce,
                                    blob.ciphertext, measurement_.digest);
  if (!plain.ok()) return make_error(ErrorCode::kIntegrityFailure, "sealed blob failed to authenticate");
  return std::move(plain).value();
}

Quote Enclave::quote(ConstBytes report_data) const {
  Quote q;
  q.measurement = measurement_;
  const size_t n = std::min(report_data.size(), q.report_data.size());
  std::copy_n(report_data.begin(), n, q.report_data.begin());
  ByteWriter w;
  w.bytes(as_bytes(kQuoteDomain));
  w.bytes(q.measurement.digest);
  w.bytes(q.report_data);
  q.signature = platform_->sign_quote_payload(w.view());
  return q;
}

EnclaveScope::EnclaveScope(const Enclave& enclave) : previous_(g_active_heap) {
  g_active_heap = &enclave.heap_;
}

EnclaveScope::~EnclaveScope() { g_active_heap = previous_; }

PrivateHeap& current_private_heap() {
  if (g_active_heap == nullptr)
    throw std::logic_error("private heap touched outside an enclave scope");
  return *g_active_heap;
}

}  // namespace glimmer::tee
