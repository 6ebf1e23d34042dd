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

#ifndef GLIMMER_CORE_CRYPTO_HPP_
#define GLIMMER_CORE_CRYPTO_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "core/common.hpp"
#include "core/status.hpp"

namespace glimmer::crypto {

/// Fixed-point scale: a model weight of 1.0 is kScale raw units. Weights live
/// in [0, kScale]; blinding arithmetic is exact modulo 2^64, so a round's
/// masks cancel bit-for-bit where floating point could not.
inline constexpr uint64_t kScale = 1'000'000;

struct FixedWeight {
  uint64_t raw = 0;
  bool in_unit_range() const { return raw <= kScale; }
  friend bool operator==(const FixedWeight&, const FixedWeight&) = default;
};

/// A client's local model: one weight per bigram id. This is the private
/// x_i that must never reach the service unblinded.
struct ModelVector {
  uint64_t round_id = 0;
  std::vector<FixedWeight> entries;

  /// Canonical entry bytes (8 bytes each, big-endian), without any header.
  Bytes entry_bytes() const;
  void zeroize();
};

/// Per-client blinding mask. All pads issued for one round sum to zero
/// elementwise modulo 2^64.
struct Pad {
  uint64_t round_id = 0;
  std::vector<uint64_t> entries;

  Bytes to_bytes() const;  // round_id (8) | length (4) | entries (8 each)
  static Result<Pad> from_bytes(ConstBytes data);
  void zeroize();
};

/// Blinded contribution y = x + p (elementwise, mod 2^64).
struct BlindedVector {
  uint64_t round_id = 0;
  std::vector<uint64_t> entries;
};

/// Generates n pads of length v. Pads 0..n-2 come from a seeded CSPRNG; the
/// last pad is the negated elementwise sum of the others, so the whole set
/// cancels exactly. Deterministic in (n, v, seed).
Result<std::vector<Pad>> gen_pads(size_t n, size_t v, const Seed32& seed, uint64_t round_id);

Result<BlindedVector> blind(const ModelVector& x, const Pad& p);

/// Unmasks a round: elementwise sum of all submitted y_i plus the pads of
/// clients that never submitted. Equals the plaintext sum of the submitters'
/// x_i exactly.
Result<std::vector<uint64_t>> aggregate_unblind(std::span<const BlindedVector> ys,
                                                std::span<const Pad> dropout_pads);

// ---------------------------------------------------------------------------
// Hashing and key derivation (BLAKE2b-256).

using Digest32 = std::array<uint8_t, 32>;

Digest32 hash32(ConstBytes data);
Digest32 hash32_concat(std::initializer_list<ConstBytes> parts);
/// Labelled subkey derivation: H(key, label || context).
Digest32 derive_key(const Digest32& key, std::string_view label, ConstBytes context = {});

// ---------------------------------------------------------------------------
// Signatures (Ed25519). Deterministic: identical message and key always give
// identical signature bytes, which the covert-channel bound relies on.

inline constexpr size_t kSignatureSize = 64;
using Signature = std::array<uint8_t, kSignatureSize>;

struct VerifyKey {
  std::array<uint8_t, 32> bytes{};
  friend bool operator==(const VerifyKey&, const VerifyKey&) = default;
};

struct SigningKey {
  std::array<uint8_t, 64> bytes{};
  void zeroize() { secure_zero(bytes); }
};

struct SigningKeyPair {
  SigningKey secret;
  VerifyKey public_key;
};

SigningKeyPair signing_keypair_from_seed(const Seed32& seed);
Signature sign(ConstBytes msg, const SigningKey& key);
bool verify(ConstBytes msg, const Signature& sig, const VerifyKey& key);

// ---------------------------------------------------------------------------
// Authenticated encryption (XChaCha20-Poly1305, 24-byte nonces).

inline constexpr size_t kAeadKeySize = 32;
inline constexpr size_t kAeadNonceSize = 24;
inline constexpr size_t kAeadOverhead = 16;
using AeadKey = std::array<uint8_t, kAeadKeySize>;
using AeadNonce = std::array<uint8_t, kAeadNonceSize>;

Bytes aead_encrypt(const AeadKey& key, const AeadNonce& nonce, ConstBytes plaintext,
                   ConstBytes associated_data);
Result<Bytes> aead_decrypt(const AeadKey& key, const AeadNonce& nonce, ConstBytes ciphertext,
                           ConstBytes associated_data);

/// Nonce with a big-endian counter in the leading 8 bytes; used for
/// per-session message streams where keys are direction-specific.
AeadNonce counter_nonce(uint64_t counter);

// ---------------------------------------------------------------------------
// Public-key envelopes (X25519 sealed boxes): anyone can seal to a public
// key; only the holder of the secret key can open.

struct BoxKeyPair {
  std::array<uint8_t, 32> public_key{};
  std::array<uint8_t, 32> secret_key{};
};

BoxKeyPair box_keypair_from_seed(const Seed32& seed);

/// Seals `payload` to `recipient_public`. The ephemeral keypair is derived
/// from `ephemeral_seed`, which the caller must never reuse for a different
/// payload; drawing it from a DetRng stream keeps whole runs replayable.
Bytes box_seal(ConstBytes payload, const std::array<uint8_t, 32>& recipient_public,
               const Seed32& ephemeral_seed);
Result<Bytes> box_open(ConstBytes envelope, const BoxKeyPair& recipient);

}  // namespace glimmer::crypto

#endif  // GLIMMER_CORE_CRYPTO_HPP_
