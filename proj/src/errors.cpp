// Copyright 2026 The GSFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gsfl/errors.hpp"

namespace gsfl {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kMalformedEncoding: return "MalformedEncoding";
    case Errc::kNotInSubgroup: return "NotInSubgroup";
    case Errc::kDuplicateMember: return "DuplicateMember";
    case Errc::kUnknownMember: return "UnknownMember";
    case Errc::kAlreadyRevoked: return "AlreadyRevoked";
    case Errc::kRevokedCredential: return "RevokedCredential";
    case Errc::kInvalidSession: return "InvalidSession";
    case Errc::kMalformedSignature: return "MalformedSignature";
    case Errc::kMalformedCiphertext: return "MalformedCiphertext";
    case Errc::kAuthFailure: return "AuthFailure";
    case Errc::kInvalidCounts: return "InvalidCounts";
    case Errc::kRevokedClient: return "RevokedClient";
    case Errc::kNotSelected: return "NotSelected";
    case Errc::kStaleSession: return "StaleSession";
    case Errc::kMalformedMessage: return "MalformedMessage";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kEmptyUpdateSet: return "EmptyUpdateSet";
    case Errc::kInvalidIterations: return "InvalidIterations";
    case Errc::kUnknownAlgorithm: return "UnknownAlgorithm";
    case Errc::kConfigError: return "ConfigError";
    case Errc::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace gsfl
