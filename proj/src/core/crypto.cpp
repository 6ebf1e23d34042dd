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

#include "core/crypto.hpp"

#include <sodium.h>

#include "core/rng.hpp"

namespace glimmer::crypto {

namespace {

struct SodiumInit {
  SodiumInit() {
    if (sodium_init() < 0) abort();
  }
};
const SodiumInit g_sodium_init;

uint64_t load_be64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | p[i];
  return v;
}

}  // namespace

Bytes ModelVector::entry_bytes() const {
  ByteWriter w;
  for (const FixedWeight& e : entries) w.u64(e.raw);
  return w.take();
}

void ModelVector::zeroize() {
  if (!entries.empty()) secure_zero(entries.data(), entries.size() * sizeof(FixedWeight));
  entries.clear();
}

Bytes Pad::to_bytes() const {
  ByteWriter w;
  w.u64(round_id);
  w.u32(static_cast<uint32_t>(entries.size()));
  for (uint64_t e : entries) w.u64(e);
  return w.take();
}

Result<Pad> Pad::from_bytes(ConstBytes data) {
  ByteReader r(data);
  Pad p;
  uint32_t n = 0;
  if (!r.u64(p.round_id) || !r.u32(n)) return make_error(ErrorCode::kDecodeError, "pad header");
  p.entries.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    uint64_t v = 0;
    if (!r.u64(v)) return make_error(ErrorCode::kDecodeError, "pad entries");
    p.entries.push_back(v);
  }
  if (!r.exhausted()) return make_error(ErrorCode::kDecodeError, "pad trailing bytes");
  return p;
}

void Pad::zeroize() {
  if (!entries.empty()) secure_zero(entries.data(), entries.size() * sizeof(uint64_t));
  entries.clear();
}

Result<std::vector<Pad>> gen_pads(size_t n, size_t v, const Seed32& seed, uint64_t round_id) {
  if (n == 0) return make_error(ErrorCode::kZeroParties, "a round needs at least one pad");
  if (v == 0) return make_error(ErrorCode::kInvalidArgument, "vector length must be >= 1");

  std::vector<Pad> pads(n);
  for (Pad& p : pads) {
    p.round_id = round_id;
    p.entries.assign(v, 0);
  }

  DetRng rng{seed};
  Bytes stream;
  for (size_t i = 0; i + 1 < n; ++i) {
    rng.fill(stream, v * 8);
    for (size_t j = 0; j < v; ++j) pads[i].entries[j] = load_be64(stream.data() + j * 8);
  }
  secure_zero(stream);

  // Last pad cancels the rest: sum over all pads is 0 mod 2^64 elementwise.
  for (size_t j = 0; j < v; ++j) {
    uint64_t sum = 0;
    for (size_t i = 0; i + 1 < n; ++i) sum += pads[i].entries[j];
    pads[n - 1].entries[j] = ~sum + 1;  // two's-complement negation
  }
  return pads;
}

Result<BlindedVector> blind(const ModelVector& x, const Pad& p) {
  if (x.entries.size() != p.entries.size())
    return make_error(ErrorCode::kLengthMismatch, "model and pad lengths differ");
  if (x.round_id != p.round_id)
    return make_error(ErrorCode::kRoundMismatch, "model and pad round ids differ");

  BlindedVector y;
  y.round_id = x.round_id;
  y.entries.resize(x.entries.size());
  for (size_t j = 0; j < x.entries.size(); ++j)
    y.entries[j] = x.entries[j].raw + p.entries[j];  // wraps mod 2^64
  return y;
}

Result<std::vector<uint64_t>> aggregate_unblind(std::span<const BlindedVector> ys,
                                                std::span<const Pad> dropout_pads) {
  if (ys.empty()) return make_error(ErrorCode::kEmptyRound, "no submitted contributions");

  const uint64_t round_id = ys.front().round_id;
  const size_t v = ys.front().entries.size();
  for (const BlindedVector& y : ys) {
    if (y.entries.size() != v) return make_error(ErrorCode::kLengthMismatch, "submission length");
    if (y.round_id != round_id) return make_error(ErrorCode::kRoundMismatch, "submission round");
  }
  for (const Pad& p : dropout_pads) {
    if (p.entries.size() != v) return make_error(ErrorCode::kLengthMismatch, "dropout pad length");
    if (p.round_id != round_id) return make_error(ErrorCode::kRoundMismatch, "dropout pad round");
  }

  std::vector<uint64_t> sums(v, 0);
  for (const BlindedVector& y : ys)
    for (size_t j = 0; j < v; ++j) sums[j] += y.entries[j];
  for (const Pad& p : dropout_pads)
    for (size_t j = 0; j < v; ++j) sums[j] += p.entries[j];
  return sums;
}

Digest32 hash32(ConstBytes data) {
  Digest32 out{};
  crypto_generichash(out.data(), out.size(), data.data(), data.size(), nullptr, 0);
  return out;
}

Digest32 hash32_concat(std::initializer_list<ConstBytes> parts) {
  crypto_generichash_state h;
  crypto_generichash_init(&h, nullptr, 0, 32);
  for (ConstBytes part : parts) crypto_generichash_update(&h, part.data(), part.size());
  Digest32 out{};
  crypto_generichash_final(&h, out.data(), out.size());
  return out;
}

Digest32 derive_key(const Digest32& key, std::string_view label, ConstBytes context) {
  crypto_generichash_state h;
  crypto_generichash_init(&h, key.data(), key.size(), 32);
  crypto_generichash_update(&h, reinterpret_cast<const uint8_t*>(label.data()), label.size());
  crypto_generichash_update(&h, context.data(), context.size());
  Digest32 out{};
  crypto_generichash_final(&h, out.data(), out.size());
  return out;
}

SigningKeyPair signing_keypair_from_seed(const Seed32& seed) {
  SigningKeyPair kp;
  crypto_sign_seed_keypair(kp.public_key.bytes.data(), kp.secret.bytes.data(), seed.data());
  return kp;
}

Signature sign(ConstBytes msg, const SigningKey& key) {
  Signature sig{};
  crypto_sign_detached(sig.data(), nullptr, msg.data(), msg.size(), key.bytes.data());
  return sig;
}

bool verify(ConstBytes msg, const Signature& sig, const VerifyKey& key) {
  return crypto_sign_verify_detached(sig.data(), msg.data(), msg.size(), key.bytes.data()) == 0;
}

Bytes aead_encrypt(const AeadKey& key, const AeadNonce& nonce, ConstBytes plaintext,
                   ConstBytes associated_data) {
  Bytes out(plaintext.size() + crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long out_len = 0;
  crypto_aead_xchacha20poly1305_ietf_encrypt(out.data(), &out_len, plaintext.data(),
                                             plaintext.size(), associated_data.data(),
                                             associated_data.size(), nullptr, nonce.data(),
                                             key.data());
  out.resize(out_len);
  return out;
}

Result<Bytes> aead_decrypt(const AeadKey& key, const AeadNonce& nonce, ConstBytes ciphertext,
                           ConstBytes associated_data) {
  if (ciphertext.size() < crypto_aead_xchacha20poly1305_ietf_ABYTES)
    return make_error(ErrorCode::kIntegrityFailure, "ciphertext too short");
  Bytes out(ciphertext.size() - crypto_aead_xchacha20poly1305_ietf_ABYTES);
  unsigned long long out_len = 0;
  if (crypto_aead_xchacha20poly1305_ietf_decrypt(out.data(), &out_len, nullptr, ciphertext.data(),
                                                 ciphertext.size(), associated_data.data(),
                                                 associated_data.size(), nonce.data(),
                                                 key.data()) != 0)
    return make_error(ErrorCode::kIntegrityFailure, "authentication failed");
  out.resize(out_len);
  return out;
}

AeadNonce counter_nonce(uint64_t counter) {
  AeadNonce nonce{};
  for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter >> (56 - 8 * i));
  return nonce;
}

BoxKeyPair box_keypair_from_seed(const Seed32& seed) {
  BoxKeyPair kp;
  crypto_box_seed_keypair(kp.public_key.data(), kp.secret_key.data(), seed.data());
  return kp;
}

Bytes box_seal(ConstBytes payload, const std::array<uint8_t, 32>& recipient_public,
               const Seed32& ephemeral_seed) {
  // Standard sealed-box layout, ephemeral_pk || box(payload), with the nonce
  // BLAKE2b-24(ephemeral_pk || recipient_pk) that box_open expects. Built by
  // hand so the ephemeral key comes from the caller instead of the OS.
  BoxKeyPair eph = box_keypair_from_seed(ephemeral_seed);
  Bytes out(payload.size() + crypto_box_SEALBYTES);
  std::copy(eph.public_key.begin(), eph.public_key.end(), out.begin());
  std::array<uint8_t, crypto_box_NONCEBYTES> nonce{};
  crypto_generichash_state st;
  crypto_generichash_init(&st, nullptr, 0, nonce.size());
  crypto_generichash_update(&st, eph.public_key.data(), eph.public_key.size());
  crypto_generichash_update(&st, recipient_public.data(), recipient_public.size());
  crypto_generichash_final(&st, nonce.data(), nonce.size());
  if (crypto_box_easy(out.data() + crypto_box_PUBLICKEYBYTES, payload.data(), payload.size(),
                      nonce.data(), recipient_public.data(), eph.secret_key.data()) != 0)
    abort();
  secure_zero(eph.secret_key.data(), eph.secret_key.size());
  return out;
}

Result<Bytes> box_open(ConstBytes envelope, const BoxKeyPair& recipient) {
  if (envelope.size() < crypto_box_SEALBYTES)
    return make_error(ErrorCode::kDecryptFailure, "envelope too short");
  Bytes out(envelope.size() - crypto_box_SEALBYTES);
  if (crypto_box_seal_open(out.data(), envelope.data(), envelope.size(),
                           recipient.public_key.data(), recipient.secret_key.data()) != 0)
    return make_error(ErrorCode::kDecryptFailure, "not addressed to this key");
  return out;
}

}  // namespace glimmer::crypto
