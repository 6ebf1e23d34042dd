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

#include "core/confidential.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>

#include "core/glimmer_program.hpp"

namespace glimmer::confidential {

namespace {

constexpr const char* kSessionKey = "confidential-session";
constexpr const char* kValidatorKey = "confidential-validator";
constexpr const char* kLogKey = "confidential-log";

struct Token {
  enum class Kind { kOpen, kClose, kAtom } kind;
  std::string text;
};

Result<std::vector<Token>> tokenize(std::string_view src) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      tokens.push_back({Token::Kind::kOpen, "("});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Token::Kind::kClose, ")"});
      ++i;
    } else {
      size_t j = i;
      while (j < src.size() && !std::isspace(static_cast<unsigned char>(src[j])) &&
             src[j] != '(' && src[j] != ')')
        ++j;
      tokens.push_back({Token::Kind::kAtom, std::string(src.substr(i, j - i))});
      i = j;
    }
  }
  return tokens;
}

bool parse_int(const std::string& s, int64_t& out) {
  if (s.empty()) return false;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (size_t j = i; j < s.size(); ++j)
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  errno = 0;
  out = std::strtoll(s.c_str(), nullptr, 10);
  return errno == 0;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Result<PolicyExpr> parse() {
    auto expr = parse_expr();
    if (!expr.ok()) return expr;
    if (pos_ != tokens_.size())
      return make_error(ErrorCode::kMalformedPolicy, "trailing tokens after expression");
    return expr;
  }

 private:
  Result<PolicyExpr> parse_expr() {
    if (pos_ >= tokens_.size())
      return make_error(ErrorCode::kMalformedPolicy, "unexpected end of policy");
    const Token& t = tokens_[pos_];
    if (t.kind == Token::Kind::kAtom) {
      ++pos_;
      PolicyExpr e;
      if (!parse_int(t.text, e.value))
        return make_error(ErrorCode::kMalformedPolicy, "bare atom is not an integer: " + t.text);
      e.kind = PolicyExpr::Kind::kInt;
      return e;
    }
    if (t.kind == Token::Kind::kClose)
      return make_error(ErrorCode::kMalformedPolicy, "unexpected )");
    ++pos_;  // consume (
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != Token::Kind::kAtom)
      return make_error(ErrorCode::kMalformedPolicy, "expected operator after (");
    const std::string op = tokens_[pos_++].text;

    PolicyExpr e;
    size_t min_args = 0;
    size_t max_args = SIZE_MAX;
    if (op == "and") {
      e.kind = PolicyExpr::Kind::kAnd;
      min_args = 1;
    } else if (op == "or") {
      e.kind = PolicyExpr::Kind::kOr;
      min_args = 1;
    } else if (op == "not") {
      e.kind = PolicyExpr::Kind::kNot;
      min_args = max_args = 1;
    } else if (op == "<") {
      e.kind = PolicyExpr::Kind::kLt;
      min_args = max_args = 2;
    } else if (op == "<=") {
      e.kind = PolicyExpr::Kind::kLe;
      min_args = max_args = 2;
    } else if (op == ">") {
      e.kind = PolicyExpr::Kind::kGt;
      min_args = max_args = 2;
    } else if (op == ">=") {
      e.kind = PolicyExpr::Kind::kGe;
      min_args = max_args = 2;
    } else if (op == "=") {
      e.kind = PolicyExpr::Kind::kEq;
      min_args = max_args = 2;
    } else if (op == "count") {
      e.kind = PolicyExpr::Kind::kCount;
      min_args = max_args = 2;
    } else if (op == "signal") {
      // (signal NAME) where NAME is a bare symbol
      if (pos_ >= tokens_.size() || tokens_[pos_].kind != Token::Kind::kAtom)
        return make_error(ErrorCode::kMalformedPolicy, "signal needs a name");
      e.kind = PolicyExpr::Kind::kSignal;
      e.name = tokens_[pos_++].text;
      if (pos_ >= tokens_.size() || tokens_[pos_].kind != Token::Kind::kClose)
        return make_error(ErrorCode::kMalformedPolicy, "signal takes exactly one name");
      ++pos_;
      return e;
    } else {
      return make_error(ErrorCode::kMalformedPolicy, "unknown operator: " + op);
    }

    while (pos_ < tokens_.size() && tokens_[pos_].kind != Token::Kind::kClose) {
      auto arg = parse_expr();
      if (!arg.ok()) return arg;
      e.args.push_back(std::move(arg).value());
    }
    if (pos_ >= tokens_.size())
      return make_error(ErrorCode::kMalformedPolicy, "missing )");
    ++pos_;  // consume )
    if (e.args.size() < min_args || e.args.size() > max_args)
      return make_error(ErrorCode::kMalformedPolicy, "wrong arity for " + op);
    return e;
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

std::vector<std::string>& enclave_log() {
  return tee::current_private_heap().get_or_create<std::vector<std::string>>(kLogKey);
}

}  // namespace

Bytes SecretValidator::to_bytes() const {
  ByteWriter w;
  w.u32(version);
  w.bytes(as_bytes(program));
  return w.take();
}

Result<SecretValidator> SecretValidator::from_bytes(ConstBytes data) {
  if (data.size() < 4) return make_error(ErrorCode::kDecodeError, "validator too short");
  SecretValidator v;
  ByteReader r(data);
  r.u32(v.version);
  v.program.assign(reinterpret_cast<const char*>(data.data()) + 4, data.size() - 4);
  return v;
}

Result<PolicyExpr> parse_policy(std::string_view source) {
  auto tokens = tokenize(source);
  if (!tokens.ok()) return tokens.error();
  if (tokens->empty()) return make_error(ErrorCode::kMalformedPolicy, "empty policy");
  return Parser(std::move(tokens).value()).parse();
}

Result<int64_t> eval_policy(const PolicyExpr& expr, const SignalRecord& signals) {
  using Kind = PolicyExpr::Kind;
  switch (expr.kind) {
    case Kind::kInt:
      return expr.value;
    case Kind::kSignal: {
      auto it = signals.values.find(expr.name);
      if (it == signals.values.end())
        return make_error(ErrorCode::kInvalidArgument, "unknown signal: " + expr.name);
      return it->second;
    }
    case Kind::kCount: {
      auto lo = eval_policy(expr.args[0], signals);
      if (!lo.ok()) return lo;
      auto hi = eval_policy(expr.args[1], signals);
      if (!hi.ok()) return hi;
      // Negative bounds mean unbounded on that side: (count 0 -1) is "all".
      int64_t n = 0;
      for (uint64_t t : signals.interaction_timestamps) {
        const bool above = *lo < 0 || t >= static_cast<uint64_t>(*lo);
        const bool below = *hi < 0 || t <= static_cast<uint64_t>(*hi);
        if (above && below) ++n;
      }
      return n;
    }
    case Kind::kAnd: {
      for (const PolicyExpr& a : expr.args) {
        auto v = eval_policy(a, signals);
        if (!v.ok()) return v;
        if (*v == 0) return int64_t{0};
      }
      return int64_t{1};
    }
    case Kind::kOr: {
      for (const PolicyExpr& a : expr.args) {
        auto v = eval_policy(a, signals);
        if (!v.ok()) return v;
        if (*v != 0) return int64_t{1};
      }
      return int64_t{0};
    }
    case Kind::kNot: {
      auto v = eval_policy(expr.args[0], signals);
      if (!v.ok()) return v;
      return static_cast<int64_t>(*v == 0 ? 1 : 0);
    }
    case Kind::kLt:
    case Kind::kLe:
    case Kind::kGt:
    case Kind::kGe:
    case Kind::kEq: {
      auto a = eval_policy(expr.args[0], signals);
      if (!a.ok()) return a;
      auto b = eval_policy(expr.args[1], signals);
      if (!b.ok()) return b;
      bool r = false;
      if (expr.kind == Kind::kLt) r = *a < *b;
      if (expr.kind == Kind::kLe) r = *a <= *b;
      if (expr.kind == Kind::kGt) r = *a > *b;
      if (expr.kind == Kind::kGe) r = *a >= *b;
      if (expr.kind == Kind::kEq) r = *a == *b;
      return static_cast<int64_t>(r ? 1 : 0);
    }
  }
  return make_error(ErrorCode::kInternal, "unhandled expression kind");
}

Bytes VerdictMessage::to_bytes() const {
  ByteWriter w;
  w.u64(round_id);
  w.bytes(nonce);
  w.u8(verdict);
  w.bytes(signature);
  return w.take();
}

Result<VerdictMessage> VerdictMessage::from_bytes(ConstBytes data) {
  if (data.size() != kVerdictMessageSize)
    return make_error(ErrorCode::kDecodeError, "verdict message must be 89 bytes");
  VerdictMessage m;
  ByteReader r(data);
  r.u64(m.round_id);
  r.bytes(m.nonce);
  r.u8(m.verdict);
  r.bytes(m.signature);
  return m;
}

const char* audit_reason_name(AuditReason reason) {
  switch (reason) {
    case AuditReason::kPass: return "pass";
    case AuditReason::kBadLength: return "bad_length";
    case AuditReason::kBadVerdictByte: return "bad_verdict_byte";
    case AuditReason::kBadNonce: return "bad_nonce";
    case AuditReason::kBadSignature: return "bad_signature";
  }
  return "unknown";
}

AuditReason Auditor::audit_message(ConstBytes message) const {
  if (message.size() != kVerdictMessageSize) return AuditReason::kBadLength;
  const uint8_t verdict = message[24];
  if (verdict > 1) return AuditReason::kBadVerdictByte;
  uint64_t round = 0;
  for (int i = 0; i < 8; ++i) round = round << 8 | message[i];
  if (round != expected_round_) return AuditReason::kBadNonce;
  if (!std::equal(expected_nonce_.begin(), expected_nonce_.end(), message.begin() + 8))
    return AuditReason::kBadNonce;
  crypto::Signature sig{};
  std::copy(message.begin() + kVerdictSignedPrefix, message.end(), sig.begin());
  if (!crypto::verify(message.first(kVerdictSignedPrefix), sig, verify_key_))
    return AuditReason::kBadSignature;
  return AuditReason::kPass;
}

Result<crypto::AkxResponse> glimmer_accept_channel(const crypto::AkxHello& hello,
                                                   const tee::Enclave& ctx, DetRng& rng) {
  // The glimmer only negotiates with the service whose key ships inside its
  // own measured code. No key, no channel.
  auto service_key = core::embedded_service_key(ctx.code());
  if (!service_key.has_value())
    return make_error(ErrorCode::kBindingFailure, "no service key embedded in this glimmer");
  crypto::AkxExpectation expect;
  expect.kind = crypto::AkxBindingKind::kServiceSignature;
  expect.service_key = *service_key;

  crypto::QuoteBindingMaker binder(&ctx);
  crypto::AkxResponder responder(rng, &binder);
  auto result = responder.respond(hello, expect);
  if (!result.ok()) return result.error();

  tee::EnclaveScope scope(ctx);
  tee::current_private_heap().get_or_create<crypto::AkxSession>(kSessionKey) =
      std::move(result->second);
  return std::move(result->first);
}

crypto::AkxExpectation glimmer_quote_expectation(const tee::Measurement& approved,
                                                 const crypto::VerifyKey& attestation_root) {
  crypto::AkxExpectation expect;
  expect.kind = crypto::AkxBindingKind::kQuote;
  expect.expected_measurement = approved;
  expect.attestation_root = attestation_root;
  return expect;
}

Bytes encrypt_validator(crypto::AkxSession& session, const SecretValidator& validator) {
  return session.seal_message(validator.to_bytes());
}

Result<uint32_t> install_validator(ConstBytes encrypted, const tee::Enclave& ctx) {
  tee::EnclaveScope scope(ctx);
  auto* session = tee::current_private_heap().find<crypto::AkxSession>(kSessionKey);
  if (session == nullptr)
    return make_error(ErrorCode::kChannelError, "no established session");
  auto plain = session->open_message(encrypted);
  if (!plain.ok()) return make_error(ErrorCode::kDecryptFailure, "validator failed to decrypt");
  auto version = install_validator_plaintext(*plain);
  secure_zero(*plain);
  return version;
}

Result<uint32_t> install_validator_plaintext(ConstBytes plain) {
  auto validator = SecretValidator::from_bytes(plain);
  if (!validator.ok()) return make_error(ErrorCode::kMalformedPolicy, "validator envelope");
  auto parsed = parse_policy(validator->program);
  if (!parsed.ok()) return parsed.error();
  tee::current_private_heap().get_or_create<PolicyExpr>(kValidatorKey) =
      std::move(parsed).value();
  return validator->version;
}

Result<VerdictMessage> run_confidential(const SignalRecord& signals, uint64_t round_id,
                                        const ChallengeNonce& nonce,
                                        const tee::SealedBlob& sealed_sk,
                                        const tee::Enclave& ctx) {
  tee::EnclaveScope scope(ctx);
  auto* policy = tee::current_private_heap().find<PolicyExpr>(kValidatorKey);
  if (policy == nullptr)
    return make_error(ErrorCode::kInvalidArgument, "no validator installed");

  uint8_t verdict = 0;
  auto value = eval_policy(*policy, signals);
  if (value.ok()) {
    verdict = *value != 0 ? 1 : 0;
  } else {
    enclave_log().push_back("evaluation fault: " + value.error().to_string());
  }

  auto sk_bytes = ctx.unseal(sealed_sk);
  if (!sk_bytes.ok())
    return make_error(ErrorCode::kUnsealFailure, "signing key: " + sk_bytes.error().to_string());
  crypto::SigningKey sk;
  if (sk_bytes->size() != sk.bytes.size())
    return make_error(ErrorCode::kUnsealFailure, "signing key length");
  std::copy(sk_bytes->begin(), sk_bytes->end(), sk.bytes.begin());
  secure_zero(*sk_bytes);

  VerdictMessage m;
  m.round_id = round_id;
  m.nonce = nonce;
  m.verdict = verdict;
  const Bytes bytes = m.to_bytes();
  m.signature = crypto::sign(ConstBytes(bytes.data(), kVerdictSignedPrefix), sk);
  sk.zeroize();
  ctx.debug_note_zeroize();
  return m;
}

const std::vector<std::string>& confidential_log() { return enclave_log(); }

}  // namespace glimmer::confidential
