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

#ifndef GLIMMER_CORE_STATUS_HPP_
#define GLIMMER_CORE_STATUS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>

namespace glimmer {

// Error taxonomy shared by the whole stack. Values are stable: the public C
// header mirrors them one-to-one.
enum class ErrorCode : int32_t {
  kOk = 0,
  kPolicyMismatch = 1,
  kIntegrityFailure = 2,
  kDecodeError = 3,
  kZeroParties = 4,
  kLengthMismatch = 5,
  kRoundMismatch = 6,
  kEmptyRound = 7,
  kBindingFailure = 8,
  kValidationFailed = 9,
  kUnsealFailure = 10,
  kEmptyRoster = 11,
  kUnknownRound = 12,
  kNotMissing = 13,
  kBadSignature = 14,
  kUnknownClient = 15,
  kReplay = 16,
  kRoundClosed = 17,
  kLowConfidence = 18,
  kBlindingServiceUnavailable = 19,
  kDecryptFailure = 20,
  kMalformedPolicy = 21,
  kAttestationFailure = 22,
  kUnreachable = 23,
  kChannelError = 24,
  kConfigError = 25,
  kIoError = 26,
  kInvalidArgument = 27,
  kInternal = 28,
};

const char* error_code_name(ErrorCode code);

struct Error {
  ErrorCode code = ErrorCode::kInternal;
  std::string detail;

  std::string to_string() const {
    std::string s = error_code_name(code);
    if (!detail.empty()) {
      s += ": ";
      s += detail;
    }
    return s;
  }
};

inline Error make_error(ErrorCode code, std::string detail = {}) {
  return Error{code, std::move(detail)};
}

// Minimal expected-style result. std::expected is not available on the
// targeted toolchain.
template <typename T>
class [[nodiscard]] Result {
 public:
  Result(T value) : v_(std::in_place_index<0>, std::move(value)) {}  // NOLINT
  Result(Error err) : v_(std::in_place_index<1>, std::move(err)) {}  // NOLINT

  bool ok() const { return v_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() & { return std::get<0>(v_); }
  const T& value() const& { return std::get<0>(v_); }
  T&& value() && { return std::get<0>(std::move(v_)); }
  T* operator->() { return &std::get<0>(v_); }
  const T* operator->() const { return &std::get<0>(v_); }
  T& operator*() { return std::get<0>(v_); }
  const T& operator*() const { return std::get<0>(v_); }

  const Error& error() const { return std::get<1>(v_); }
  ErrorCode code() const { return ok() ? ErrorCode::kOk : error().code; }

 private:
  std::variant<T, Error> v_;
};

template <>
class [[nodiscard]] Result<void> {
 public:
  Result() = default;
  Result(Error err) : err_(std::move(err)) {}  // NOLINT

  bool ok() const { return !err_.has_value(); }
  explicit operator bool() const { return ok(); }
  const Error& error() const { return *err_; }
  ErrorCode code() const { return ok() ? ErrorCode::kOk : err_->code; }

 private:
  std::optional<Error> err_;
};

using Status = Result<void>;

#define GLIMMER_TRY(expr)                      \
  do {                                         \
    auto _glimmer_status = (expr);             \
    if (!_glimmer_status.ok())                 \
      return ::glimmer::Error(_glimmer_status.error()); \
  } while (0)

}  // namespace glimmer

#endif  // GLIMMER_CORE_STATUS_HPP_
