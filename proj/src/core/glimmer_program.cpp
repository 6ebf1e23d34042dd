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

#include "core/glimmer_program.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace glimmer::core {

namespace {

constexpr std::string_view kCodeMagic = "glimmer-enclave-v1\n";

uint32_t vocab_from_length(size_t n) {
  auto vocab = static_cast<uint32_t>(std::lround(std::sqrt(static_cast<double>(n))));
  while (static_cast<size_t>(vocab) * vocab > n) --vocab;
  while (static_cast<size_t>(vocab + 1) * (vocab + 1) <= n) ++vocab;
  return static_cast<size_t>(vocab) * vocab == n ? vocab : 0;
}

}  // namespace

Bytes ValidationPolicy::to_bytes() const {
  ByteWriter w;
  w.u8(static_cast<uint8_t>(kind));
  w.u64(lo);
  w.u64(hi);
  w.u64(tolerance);
  w.u8(static_cast<uint8_t>(normalization));
  return w.take();
}

Result<ValidationPolicy> ValidationPolicy::from_bytes(ConstBytes data) {
  ByteReader r(data);
  ValidationPolicy p;
  uint8_t kind = 0;
  uint8_t norm = 0;
  if (!r.u8(kind) || !r.u64(p.lo) || !r.u64(p.hi) || !r.u64(p.tolerance) || !r.u8(norm) ||
      !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "policy layout");
  if (kind > static_cast<uint8_t>(PolicyKind::kComposite) || norm > 1 || p.lo > p.hi)
    return make_error(ErrorCode::kMalformedPolicy, "policy fields");
  p.kind = static_cast<PolicyKind>(kind);
  p.normalization = static_cast<bigram::Normalization>(norm);
  return p;
}

void PrivateValidationData::zeroize() {
  keyboard_log.zeroize();
  secure_zero(auxiliary);
}

ValidationVerdict validate_range(const crypto::ModelVector& x, const ValidationPolicy& policy) {
  for (size_t i = 0; i < x.entries.size(); ++i) {
    const uint64_t raw = x.entries[i].raw;
    if (raw < policy.lo || raw > policy.hi)
      return ValidationVerdict{false, 0, "out_of_range:" + std::to_string(i)};
  }
  // Range checks are binary: a pass is full confidence.
  return ValidationVerdict{true, 255, "ok"};
}

ValidationVerdict validate_corroboration(const crypto::ModelVector& x,
                                         const PrivateValidationData& d,
                                         const ValidationPolicy& policy) {
  if (d.keyboard_log.events.empty()) return ValidationVerdict{false, 0, "empty_log"};
  const uint32_t vocab = vocab_from_length(x.entries.size());
  if (vocab == 0) return ValidationVerdict{false, 0, "bad_shape"};
  if (!bigram::validate_log(d.keyboard_log, vocab).ok())
    return ValidationVerdict{false, 0, "bad_log"};

  crypto::ModelVector retrained =
      bigram::train_local(d.keyboard_log, vocab, x.round_id, policy.normalization);

  uint64_t max_dev = 0;
  size_t first_bad = x.entries.size();
  for (size_t i = 0; i < x.entries.size(); ++i) {
    const uint64_t a = x.entries[i].raw;
    const uint64_t b = retrained.entries[i].raw;
    const uint64_t dev = a > b ? a - b : b - a;
    if (dev > max_dev) max_dev = dev;
    if (dev > policy.tolerance && first_bad == x.entries.size()) first_bad = i;
  }
  retrained.zeroize();

  if (max_dev > policy.tolerance)
    return ValidationVerdict{false, 0, "deviation:" + std::to_string(first_bad)};
  // Confidence falls off linearly with the worst deviation; a deviation of
  // exactly the tolerance is still valid (inclusive) but scores zero.
  uint8_t confidence = 255;
  if (policy.tolerance > 0)
    confidence = static_cast<uint8_t>(255 * (policy.tolerance - max_dev) / policy.tolerance);
  return ValidationVerdict{true, confidence, "ok"};
}

ValidationVerdict validate(const crypto::ModelVector& x, const PrivateValidationData& d,
                           const ValidationPolicy& policy) {
  switch (policy.kind) {
    case PolicyKind::kRangeCheck:
      return validate_range(x, policy);
    case PolicyKind::kCorroboration:
      return validate_corroboration(x, d, policy);
    case PolicyKind::kComposite: {
      ValidationVerdict range = validate_range(x, policy);
      if (!range.valid) return range;
      ValidationVerdict corr = validate_corroboration(x, d, policy);
      if (!corr.valid) return corr;
      return ValidationVerdict{true, std::min(range.confidence, corr.confidence), "ok"};
    }
  }
  return ValidationVerdict{false, 0, "bad_policy"};
}

Bytes SignedContribution::signed_region() const {
  ByteWriter w;
  w.u64(round_id);
  w.u64(client_id);
  w.u8(is_public ? 1 : 0);
  w.u32(static_cast<uint32_t>(entries.size()));
  for (uint64_t e : entries) w.u64(e);
  w.u8(confidence);
  return w.take();
}

Bytes SignedContribution::to_bytes() const {
  Bytes out = signed_region();
  out.insert(out.end(), signature.begin(), signature.end());
  return out;
}

Result<SignedContribution> SignedContribution::from_bytes(ConstBytes data) {
  ByteReader r(data);
  SignedContribution sc;
  uint8_t flag = 0;
  uint32_t n = 0;
  if (!r.u64(sc.round_id) || !r.u64(sc.client_id) || !r.u8(flag) || !r.u32(n))
    return make_error(ErrorCode::kDecodeError, "contribution header");
  if (flag > 1) return make_error(ErrorCode::kDecodeError, "public flag");
  sc.is_public = flag == 1;
  sc.entries.resize(n);
  for (uint64_t& e : sc.entries)
    if (!r.u64(e)) return make_error(ErrorCode::kDecodeError, "contribution entries");
  if (!r.u8(sc.confidence) || !r.bytes(sc.signature) || !r.exhausted())
    return make_error(ErrorCode::kDecodeError, "contribution tail");
  return sc;
}

Result<SignedContribution> run_glimmer(GlimmerRequest& req, const tee::SealedBlob* sealed_pad,
                                       const tee::SealedBlob& sealed_sk,
                                       const ValidationPolicy& policy, const tee::Enclave& ctx) {
  tee::EnclaveScope scope(ctx);

  crypto::Pad pad;
  crypto::SigningKey sk;
  // Raw inputs and unsealed secrets are scrubbed on every path out of this
  // function, including early errors.
  struct Scrub {
    GlimmerRequest* req;
    crypto::Pad* pad;
    crypto::SigningKey* sk;
    const tee::Enclave* ctx;
    ~Scrub() {
      req->x.zeroize();
      req->d.zeroize();
      pad->zeroize();
      sk->zeroize();
      ctx->debug_note_zeroize();
    }
  } scrub{&req, &pad, &sk, &ctx};

  auto sk_bytes = ctx.unseal(sealed_sk);
  if (!sk_bytes.ok())
    return make_error(ErrorCode::kUnsealFailure, "signing key: " + sk_bytes.error().to_string());
  if (sk_bytes->size() != sk.bytes.size())
    return make_error(ErrorCode::kUnsealFailure, "signing key length");
  std::copy(sk_bytes->begin(), sk_bytes->end(), sk.bytes.begin());
  secure_zero(*sk_bytes);

  if (!req.is_public) {
    if (sealed_pad == nullptr)
      return make_error(ErrorCode::kInvalidArgument, "private contribution without a pad");
    auto pad_bytes = ctx.unseal(*sealed_pad);
    if (!pad_bytes.ok())
      return make_error(ErrorCode::kUnsealFailure, "pad: " + pad_bytes.error().to_string());
    auto parsed = crypto::Pad::from_bytes(*pad_bytes);
    secure_zero(*pad_bytes);
    if (!parsed.ok()) return parsed.error();
    pad = std::move(parsed).value();
    if (pad.round_id != req.round_id)
      return make_error(ErrorCode::kRoundMismatch, "pad sealed for a different round");
  }
  if (req.x.round_id != req.round_id)
    return make_error(ErrorCode::kRoundMismatch, "contribution built for a different round");

  const ValidationVerdict verdict = validate(req.x, req.d, policy);
  if (!verdict.valid) return make_error(ErrorCode::kValidationFailed, verdict.reason);

  SignedContribution sc;
  sc.round_id = req.round_id;
  sc.client_id = req.client_id;
  sc.is_public = req.is_public;
  sc.confidence = verdict.confidence;
  if (req.is_public) {
    sc.entries.reserve(req.x.entries.size());
    for (const crypto::FixedWeight& e : req.x.entries) sc.entries.push_back(e.raw);
  } else {
    auto blinded = crypto::blind(req.x, pad);
    if (!blinded.ok()) return blinded.error();
    sc.entries = std::move(blinded->entries);
  }
  sc.signature = crypto::sign(sc.signed_region(), sk);

  // Output confinement: exactly the canonical bytes, nothing else.
  if (sc.to_bytes().size() != signed_contribution_size(sc.entries.size()))
    return make_error(ErrorCode::kInternal, "output size invariant broken");
  return sc;
}

Bytes make_glimmer_code(std::string_view tag) {
  ByteWriter w;
  w.bytes(as_bytes(kCodeMagic));
  w.var_bytes(as_bytes(tag));
  w.u8(0);
  return w.take();
}

Bytes make_glimmer_code(std::string_view tag, const crypto::VerifyKey& service_key) {
  ByteWriter w;
  w.bytes(as_bytes(kCodeMagic));
  w.var_bytes(as_bytes(tag));
  w.u8(1);
  w.bytes(service_key.bytes);
  return w.take();
}

std::optional<crypto::VerifyKey> embedded_service_key(ConstBytes code) {
  if (code.size() < kCodeMagic.size()) return std::nullopt;
  if (!std::equal(kCodeMagic.begin(), kCodeMagic.end(), code.begin())) return std::nullopt;
  ByteReader r(code.subspan(kCodeMagic.size()));
  Bytes tag;
  uint8_t has_key = 0;
  if (!r.var_bytes(tag) || !r.u8(has_key)) return std::nullopt;
  if (has_key != 1) return std::nullopt;
  crypto::VerifyKey key;
  if (!r.bytes(key.bytes) || !r.exhausted()) return std::nullopt;
  return key;
}

}  // namespace glimmer::core
