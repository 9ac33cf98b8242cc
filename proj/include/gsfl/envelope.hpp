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

#pragma once

// ElGamal over GT.
//
// Textbook mode encrypts a GT element exactly: c1 = gt^y, c2 = M * h^y, and
// decryption multiplies by c1^(r - x) instead of inverting s'. Hybrid mode
// (the one the protocol uses for gradient bytes) keeps c1 as a key
// encapsulation and seals the payload with AES-256-GCM under a key derived
// from s = h^y.

#include <cstdint>

#include "gsfl/algebra.hpp"
#include "gsfl/bytes.hpp"
#include "gsfl/rng.hpp"

namespace gsfl::envelope {

inline constexpr std::string_view kKemTag = "GSFL/kem/v1";
inline constexpr std::size_t kNonceBytes = 12;
inline constexpr std::size_t kTagBytes = 16;

struct ServerKeys {
  algebra::Scalar x;   // private
  algebra::GT h_srv;   // gt^x
};

/// x uniform in [1, r-1].
ServerKeys server_keygen(Rng& rng);

struct TextbookCiphertext {
  algebra::GT c1;
  algebra::GT c2;

  Bytes encode() const;
  static TextbookCiphertext decode(ByteView bytes);  // kMalformedCiphertext
};

TextbookCiphertext encrypt_textbook(const algebra::GT& pk, const algebra::GT& message, Rng& rng);
/// Deterministic variant with caller-chosen y, for conformance tests.
TextbookCiphertext encrypt_textbook_with_nonce(const algebra::GT& pk, const algebra::GT& message,
                                               const algebra::Scalar& y);
algebra::GT decrypt_textbook(const ServerKeys& sk, const TextbookCiphertext& ct);

struct HybridCiphertext {
  algebra::GT c1;
  Bytes sealed;  // nonce || AES-GCM ciphertext || tag

  /// encode(c1) || u32 length || sealed
  Bytes encode() const;
  static HybridCiphertext decode(ByteView bytes);  // kMalformedCiphertext
};

/// Payloads must be shorter than 2^32 bytes.
HybridCiphertext seal(const algebra::GT& pk, ByteView payload, Rng& rng);
/// Throws kAuthFailure when the tag does not verify.
Bytes open(const ServerKeys& sk, const HybridCiphertext& ct);

}  // namespace gsfl::envelope
