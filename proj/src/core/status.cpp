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

#include "core/status.hpp"

namespace glimmer {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kPolicyMismatch: return "PolicyMismatch";
    case ErrorCode::kIntegrityFailure: return "IntegrityFailure";
    case ErrorCode::kDecodeError: return "DecodeError";
    case ErrorCode::kZeroParties: return "ZeroParties";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kRoundMismatch: return "RoundMismatch";
    case ErrorCode::kEmptyRound: return "EmptyRound";
    case ErrorCode::kBindingFailure: return "BindingFailure";
    case ErrorCode::kValidationFailed: return "ValidationFailed";
    case ErrorCode::kUnsealFailure: return "UnsealFailure";
    case ErrorCode::kEmptyRoster: return "EmptyRoster";
    case ErrorCode::kUnknownRound: return "UnknownRound";
    case ErrorCode::kNotMissing: return "NotMissing";
    case ErrorCode::kBadSignature: return "BadSignature";
    case ErrorCode::kUnknownClient: return "UnknownClient";
    case ErrorCode::kReplay: return "Replay";
    case ErrorCode::kRoundClosed: return "RoundClosed";
    case ErrorCode::kLowConfidence: return "LowConfidence";
    case ErrorCode::kBlindingServiceUnavailable: return "BlindingServiceUnavailable";
    case ErrorCode::kDecryptFailure: return "DecryptFailure";
    case ErrorCode::kMalformedPolicy: return "MalformedPolicy";
    case ErrorCode::kAttestationFailure: return "AttestationFailure";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kChannelError: return "ChannelError";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

}  // namespace glimmer
