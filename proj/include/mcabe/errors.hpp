// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mcabe {

enum class ErrorCode {
  RevokedUser,
  NotSatisfied,
  PrivilegeDenied,
  Expired,
  StaleSignature,
  BadMaskValue,
  EpochRegression,
  UnknownFile,
  UnknownDr,
  UnknownPrivilege,
  PolicyParseError,
  DecodeError,
  StorageError,
  InvalidArgument,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::RevokedUser: return "RevokedUser";
    case ErrorCode::NotSatisfied: return "NotSatisfied";
    case ErrorCode::PrivilegeDenied: return "PrivilegeDenied";
    case ErrorCode::Expired: return "Expired";
    case ErrorCode::StaleSignature: return "StaleSignature";
    case ErrorCode::BadMaskValue: return "BadMaskValue";
    case ErrorCode::EpochRegression: return "EpochRegression";
    case ErrorCode::UnknownFile: return "UnknownFile";
    case ErrorCode::UnknownDr: return "UnknownDr";
    case ErrorCode::UnknownPrivilege: return "UnknownPrivilege";
    case ErrorCode::PolicyParseError: return "PolicyParseError";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::StorageError: return "StorageError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// Stable process exit codes for the CLI, one per error class.
inline int error_exit_code(ErrorCode c) { return 10 + static_cast<int>(c); }

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mcabe
