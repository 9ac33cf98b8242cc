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

// Session-based group signature with admin tracing.
//
// The admin (group manager) holds gamma and issues SDH credentials
// (A_i, x_i) with A_i = g1^(1/(gamma + x_i)). Per session it draws (a, b),
// publishes C1 = u^a and C2 = v^b to the server and hands (a, b) to members.
// A member signs with the 7-component proof (C3, c, s1..s5); the server
// verifies knowing only the group parameters and (C1, C2).
//
// Because (a, b) are shared by every member of a session, C3 = A * h1^(a+b)
// is fixed per member per session: two signatures by the same member in the
// same session carry the same C3. Rotating the session (new_session/revoke)
// is what refreshes it.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "gsfl/algebra.hpp"
#include "gsfl/bytes.hpp"
#include "gsfl/rng.hpp"

namespace gsfl::gs {

inline constexpr std::string_view kSignatureTag = "GSFL/sig/v1";

using MemberId = std::string;

struct GroupParams {
  algebra::PairingContext ctx;
  algebra::G1 u;
  algebra::G1 v;
  algebra::G1 h1;
  algebra::G2 w;  // g2^gamma
  std::uint16_t group_id = 0;
  // e(h1, w) and e(h1, g2) appear in every proof; computed once at setup.
  algebra::GT e_h1_w;
  algebra::GT e_h1_g2;
};

enum class MemberStatus { kActive, kRevoked };

std::string_view status_name(MemberStatus s);

struct RegistryEntry {
  algebra::Scalar x;
  algebra::G1 A;
  MemberStatus status = MemberStatus::kActive;
  std::string reason;
};

struct MemberCredential {
  MemberId member_id;
  algebra::Scalar x;
  algebra::G1 A;
  // Set by the holder once it learns it was revoked; sign() refuses then.
  bool revoked = false;
};

/// The server-side view of a session: no exponents.
struct SessionPublic {
  std::uint32_t session_id = 0;
  algebra::G1 C1;
  algebra::G1 C2;
};

/// Admin and member view of a session.
struct SessionKeys {
  std::uint32_t session_id = 0;
  algebra::Scalar a;
  algebra::Scalar b;
  algebra::G1 C1;  // u^a
  algebra::G1 C2;  // v^b

  SessionPublic public_view() const { return {session_id, C1, C2}; }
};

struct Signature {
  static constexpr std::size_t kComponents = 7;
  static constexpr std::size_t kEncodedBytes = algebra::kG1Bytes + 6 * algebra::kScalarBytes;

  algebra::G1 C3;
  algebra::Scalar c;
  algebra::Scalar s1, s2, s3, s4, s5;

  /// encode(C3) || encode(c) || encode(s1) .. encode(s5)
  Bytes encode() const;
  /// Throws Error{kMalformedSignature} unless every component decodes canonically.
  static Signature decode(ByteView bytes);

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct AdminKeys {
  algebra::Scalar gamma;
  std::map<MemberId, RegistryEntry> registry;
  // Credential the admin signs session descriptors with; never in `registry`.
  MemberCredential self;
  std::uint32_t next_session_id = 1;
  Rng rng;
};

/// Deterministic for a fixed seed. Throws kInvalidArgument on an empty seed.
std::pair<GroupParams, AdminKeys> setup(ByteView seed, std::uint16_t group_id);

/// Throws kDuplicateMember if `member_id` already has a registry entry.
MemberCredential issue(AdminKeys& admin, const GroupParams& params, const MemberId& member_id);

SessionKeys new_session(AdminKeys& admin, const GroupParams& params);

/// Throws kRevokedCredential for a revoked holder. A session mismatch throws
/// kInvalidSession and an empty message throws kInvalidArgument.
Signature sign(const MemberCredential& cred, const SessionKeys& sess, const GroupParams& params,
               ByteView message, Rng& rng);

enum class Verdict { kAccept, kReject };

/// Takes no per-member input. Decoding failures are reported by
/// Signature::decode before this point; here only the proof equation decides.
Verdict verify(const GroupParams& params, const SessionPublic& sess, ByteView message,
               const Signature& sig);

struct Opened {
  MemberId member_id;
  MemberStatus status;
};

/// Recovers A = C3 * h1^-(a+b) and looks it up. Throws kUnknownMember when no
/// registered credential matches.
Opened open(const AdminKeys& admin, const GroupParams& params, const SessionKeys& sess,
            const Signature& sig);

/// Marks `member_id` revoked and rotates to a fresh session, which the caller
/// distributes to the remaining members only.
SessionKeys revoke(AdminKeys& admin, const GroupParams& params, const MemberId& member_id,
                   std::string reason);

/// `member_id<TAB>status<TAB>reason` per registry entry, sorted by id.
std::string export_revocation_table(const AdminKeys& admin);

/// The admin's per-session version token: its own group signature over
/// (group_id, session_id, C1, C2). The server checks it on fetch.
struct SessionDescriptor {
  std::uint16_t group_id = 0;
  SessionPublic session;
  Signature sigma;

  Bytes signed_message() const;
  Bytes encode() const;
  static SessionDescriptor decode(ByteView bytes);
};

SessionDescriptor describe_session(AdminKeys& admin, const GroupParams& params,
                                   const SessionKeys& sess);
bool check_descriptor(const GroupParams& params, const SessionDescriptor& desc);

namespace debug {

/// First-move commitments B1..B5 of the proof.
struct Commitments {
  algebra::G1 B1, B2;
  algebra::GT B3;
  algebra::G1 B4, B5;

  friend bool operator==(const Commitments&, const Commitments&) = default;
};

/// sign() that also returns the commitments it hashed.
std::pair<Signature, Commitments> sign_with_commitments(const MemberCredential& cred,
                                                        const SessionKeys& sess,
                                                        const GroupParams& params,
                                                        ByteView message, Rng& rng);

/// The verifier's reconstruction B~1..B~5; equals the signer's for honest input.
Commitments recompute_commitments(const GroupParams& params, const SessionPublic& sess,
                                  const Signature& sig);

}  // namespace debug

}  // namespace gsfl::gs
