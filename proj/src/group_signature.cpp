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

#include "gsfl/group_signature.hpp"

#include <array>
#include <sstream>

namespace gsfl::gs {

using algebra::G1;
using algebra::G2;
using algebra::GT;
using algebra::pair;
using algebra::Scalar;

namespace {

constexpr std::string_view kDescriptorTag = "GSFL/session/v1";
constexpr std::string_view kAdminSelfId = "__admin__";

Scalar setup_exponent(ByteView seed, std::string_view tag) {
  const std::array<ByteView, 1> parts = {seed};
  return algebra::hash_to_scalar(tag, parts);
}

Scalar challenge(ByteView message, const SessionPublic& sess, const G1& C3,
                 const debug::Commitments& B) {
  const Bytes c1 = sess.C1.encode(), c2 = sess.C2.encode(), c3 = C3.encode();
  const Bytes b1 = B.B1.encode(), b2 = B.B2.encode(), b3 = B.B3.encode();
  const Bytes b4 = B.B4.encode(), b5 = B.B5.encode();
  const std::array<ByteView, 9> parts = {message, c1, c2, c3, b1, b2, b3, b4, b5};
  return algebra::hash_to_scalar(kSignatureTag, parts);
}

MemberCredential make_credential(AdminKeys& admin, const GroupParams& params, MemberId id) {
  for (;;) {
    Scalar x = Scalar::random_nonzero(admin.rng);
    Scalar denom = admin.gamma + x;
    if (denom.is_zero()) continue;
    return MemberCredential{std::move(id), x, params.ctx.g1.pow(denom.inverse())};
  }
}

}  // namespace

std::string_view status_name(MemberStatus s) {
  return s == MemberStatus::kActive ? "active" : "revoked";
}

// ---------------------------------------------------------------- Signature

Bytes Signature::encode() const {
  ByteWriter w(kEncodedBytes);
  w.raw(C3.encode());
  for (const Scalar* s : {&c, &s1, &s2, &s3, &s4, &s5}) w.raw(s->encode());
  return std::move(w).take();
}

Signature Signature::decode(ByteView bytes) {
  if (bytes.size() != kEncodedBytes) {
    throw Error(Errc::kMalformedSignature, "signature must be " + std::to_string(kEncodedBytes) +
                                               " bytes, got " + std::to_string(bytes.size()));
  }
  try {
    ByteReader r(bytes, Errc::kMalformedSignature);
    Signature sig;
    sig.C3 = G1::decode(r.raw(algebra::kG1Bytes));
    for (Scalar* s : {&sig.c, &sig.s1, &sig.s2, &sig.s3, &sig.s4, &sig.s5}) {
      *s = Scalar::decode(r.raw(algebra::kScalarBytes));
    }
    return sig;
  } catch (const Error& e) {
    if (e.code() == Errc::kMalformedSignature) throw;
    throw Error(Errc::kMalformedSignature, e.what());
  }
}

// ---------------------------------------------------------------- admin side

std::pair<GroupParams, AdminKeys> setup(ByteView seed, std::uint16_t group_id) {
  if (seed.empty()) throw Error(Errc::kInvalidArgument, "setup seed must be non-empty");

  GroupParams params;
  params.ctx = algebra::PairingContext::standard();
  params.group_id = group_id;
  params.u = params.ctx.g1.pow(setup_exponent(seed, "GSFL/setup/u"));
  params.v = params.ctx.g1.pow(setup_exponent(seed, "GSFL/setup/v"));
  params.h1 = params.ctx.g1.pow(setup_exponent(seed, "GSFL/setup/h1"));

  Rng base(seed);
  Rng gamma_stream = base.fork("gamma");
  AdminKeys admin{Scalar::random_nonzero(gamma_stream), {}, {}, 1, base.fork("admin")};
  params.w = params.ctx.g2.pow(admin.gamma);
  params.e_h1_w = pair(params.h1, params.w);
  params.e_h1_g2 = pair(params.h1, params.ctx.g2);

  admin.self = make_credential(admin, params, MemberId(kAdminSelfId));
  return {std::move(params), std::move(admin)};
}

MemberCredential issue(AdminKeys& admin, const GroupParams& params, const MemberId& member_id) {
  if (member_id == kAdminSelfId) {
    throw Error(Errc::kInvalidArgument, "member id '" + member_id + "' is reserved");
  }
  if (admin.registry.contains(member_id)) {
    throw Error(Errc::kDuplicateMember, "member '" + member_id + "' already registered");
  }
  MemberCredential cred = make_credential(admin, params, member_id);
  admin.registry.emplace(member_id, RegistryEntry{cred.x, cred.A, MemberStatus::kActive, {}});
  return cred;
}

SessionKeys new_session(AdminKeys& admin, const GroupParams& params) {
  SessionKeys sess;
  sess.session_id = admin.next_session_id++;
  sess.a = Scalar::random_nonzero(admin.rng);
  sess.b = Scalar::random_nonzero(admin.rng);
  sess.C1 = params.u.pow(sess.a);
  sess.C2 = params.v.pow(sess.b);
  return sess;
}

Opened open(const AdminKeys& admin, const GroupParams& params, const SessionKeys& sess,
            const Signature& sig) {
  const G1 A = sig.C3 * params.h1.pow(sess.a + sess.b).inverse();
  for (const auto& [id, entry] : admin.registry) {
    if (entry.A == A) return {id, entry.status};
  }
  throw Error(Errc::kUnknownMember, "signature does not open to any registered member");
}

SessionKeys revoke(AdminKeys& admin, const GroupParams& params, const MemberId& member_id,
                   std::string reason) {
  auto it = admin.registry.find(member_id);
  if (it == admin.registry.end()) {
    throw Error(Errc::kUnknownMember, "no member '" + member_id + "'");
  }
  if (it->second.status == MemberStatus::kRevoked) {
    throw Error(Errc::kAlreadyRevoked, "member '" + member_id + "' is already revoked");
  }
  it->second.status = MemberStatus::kRevoked;
  it->second.reason = std::move(reason);
  return new_session(admin, params);
}

std::string export_revocation_table(const AdminKeys& admin) {
  std::ostringstream out;
  for (const auto& [id, entry] : admin.registry) {
    out << id << '\t' << status_name(entry.status) << '\t' << entry.reason << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- sign / verify

std::pair<Signature, debug::Commitments> debug::sign_with_commitments(
    const MemberCredential& cred, const SessionKeys& sess, const GroupParams& params,
    ByteView message, Rng& rng) {
  if (cred.revoked) {
    throw Error(Errc::kRevokedCredential, "credential of '" + cred.member_id + "' was revoked");
  }
  if (message.empty()) throw Error(Errc::kInvalidArgument, "cannot sign an empty message");
  if (sess.session_id == 0 || sess.a.is_zero() || sess.b.is_zero() ||
      !(params.u.pow(sess.a) == sess.C1) || !(params.v.pow(sess.b) == sess.C2)) {
    throw Error(Errc::kInvalidSession, "session keys are inconsistent with (C1, C2)");
  }

  const G1 C3 = cred.A * params.h1.pow(sess.a + sess.b);
  const Scalar delta1 = cred.x * sess.a;
  const Scalar delta2 = cred.x * sess.b;

  const Scalar d_a = Scalar::random(rng);
  const Scalar d_b = Scalar::random(rng);
  const Scalar d_x = Scalar::random(rng);
  const Scalar d_delta1 = Scalar::random(rng);
  const Scalar d_delta2 = Scalar::random(rng);

  debug::Commitments B;
  B.B1 = params.u.pow(d_a);
  B.B2 = params.v.pow(d_b);
  B.B3 = pair(C3, params.ctx.g2).pow(d_x) * params.e_h1_w.pow(-(d_a + d_b)) *
         params.e_h1_g2.pow(-(d_delta1 + d_delta2));
  B.B4 = sess.C1.pow(d_x) * params.u.pow(-d_delta1);
  B.B5 = sess.C2.pow(d_x) * params.v.pow(-d_delta2);

  Signature sig;
  sig.C3 = C3;
  sig.c = challenge(message, sess.public_view(), C3, B);
  sig.s1 = d_a + sig.c * sess.a;
  sig.s2 = d_b + sig.c * sess.b;
  sig.s3 = d_x + sig.c * cred.x;
  sig.s4 = d_delta1 + sig.c * delta1;
  sig.s5 = d_delta2 + sig.c * delta2;
  return {sig, B};
}

debug::Commitments debug::recompute_commitments(const GroupParams& params,
                                                const SessionPublic& sess, const Signature& sig) {
  debug::Commitments B;
  B.B1 = params.u.pow(sig.s1) * sess.C1.pow(-sig.c);
  B.B2 = params.v.pow(sig.s2) * sess.C2.pow(-sig.c);
  const GT ratio = pair(sig.C3, params.w) / params.ctx.gt;
  B.B3 = pair(sig.C3, params.ctx.g2).pow(sig.s3) * params.e_h1_w.pow(-(sig.s1 + sig.s2)) *
         params.e_h1_g2.pow(-(sig.s4 + sig.s5)) * ratio.pow(sig.c);
  B.B4 = sess.C1.pow(sig.s3) * params.u.pow(-sig.s4);
  B.B5 = sess.C2.pow(sig.s3) * params.v.pow(-sig.s5);
  return B;
}

Signature sign(const MemberCredential& cred, const SessionKeys& sess, const GroupParams& params,
               ByteView message, Rng& rng) {
  return debug::sign_with_commitments(cred, sess, params, message, rng).first;
}

Verdict verify(const GroupParams& params, const SessionPublic& sess, ByteView message,
               const Signature& sig) {
  const debug::Commitments B = debug::recompute_commitments(params, sess, sig);
  return challenge(message, sess, sig.C3, B) == sig.c ? Verdict::kAccept : Verdict::kReject;
}

// ---------------------------------------------------------------- descriptors

Bytes SessionDescriptor::signed_message() const {
  ByteWriter w;
  w.raw(as_bytes(kDescriptorTag)).u16(group_id).u32(session.session_id);
  w.raw(session.C1.encode()).raw(session.C2.encode());
  return std::move(w).take();
}

Bytes SessionDescriptor::encode() const {
  ByteWriter w;
  w.u16(group_id).u32(session.session_id);
  w.raw(session.C1.encode()).raw(session.C2.encode()).raw(sigma.encode());
  return std::move(w).take();
}

SessionDescriptor SessionDescriptor::decode(ByteView bytes) {
  ByteReader r(bytes, Errc::kMalformedMessage);
  SessionDescriptor d;
  d.group_id = r.u16();
  d.session.session_id = r.u32();
  try {
    d.session.C1 = G1::decode(r.raw(algebra::kG1Bytes));
    d.session.C2 = G1::decode(r.raw(algebra::kG1Bytes));
  } catch (const Error& e) {
    throw Error(Errc::kMalformedMessage, e.what());
  }
  d.sigma = Signature::decode(r.raw(Signature::kEncodedBytes));
  r.expect_done();
  return d;
}

SessionDescriptor describe_session(AdminKeys& admin, const GroupParams& params,
                                   const SessionKeys& sess) {
  SessionDescriptor d;
  d.group_id = params.group_id;
  d.session = sess.public_view();
  d.sigma = sign(admin.self, sess, params, d.signed_message(), admin.rng);
  return d;
}

bool check_descriptor(const GroupParams& params, const SessionDescriptor& desc) {
  return desc.group_id == params.group_id &&
         verify(params, desc.session, desc.signed_message(), desc.sigma) == Verdict::kAccept;
}

}  // namespace gsfl::gs
