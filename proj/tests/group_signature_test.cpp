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

#include <gtest/gtest.h>

#include <set>
#include <type_traits>

namespace gsfl::gs {
namespace {

using algebra::G1;
using algebra::pair;
using algebra::Scalar;

// The verifier's inputs are exactly (params, C1/C2, message, signature).
static_assert(std::is_same_v<decltype(&verify), Verdict (*)(const GroupParams&, const SessionPublic&,
                                                            ByteView, const Signature&)>);

Bytes seed_of(std::string_view s) { return Bytes(s.begin(), s.end()); }

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInvalidArgument;
}

class GroupSignatureTest : public ::testing::Test {
 protected:
  GroupSignatureTest() {
    auto [p, a] = setup(seed_of("group-signature-test"), 7);
    params = std::move(p);
    admin = std::make_unique<AdminKeys>(std::move(a));
    alice = issue(*admin, params, "alice");
    bob = issue(*admin, params, "bob");
    sess = new_session(*admin, params);
  }

  GroupParams params;
  std::unique_ptr<AdminKeys> admin;
  MemberCredential alice, bob;
  SessionKeys sess;
  Rng rng = Rng::from_u64(11);
};

TEST(Setup, DeterministicForFixedSeed) {
  auto [p1, a1] = setup(seed_of("seed-S"), 1);
  auto [p2, a2] = setup(seed_of("seed-S"), 1);
  EXPECT_EQ(a1.gamma, a2.gamma);
  EXPECT_EQ(p1.u, p2.u);
  EXPECT_EQ(p1.v, p2.v);
  EXPECT_EQ(p1.h1, p2.h1);
  EXPECT_EQ(p1.w, p2.w);
  EXPECT_EQ(a1.self.A, a2.self.A);
}

TEST(Setup, DistinctSeedsGiveDistinctGamma) {
  std::vector<Bytes> gammas;
  for (int i = 0; i < 10; ++i) {
    auto [p, a] = setup(seed_of("seed-" + std::to_string(i)), 1);
    gammas.push_back(a.gamma.encode());
  }
  EXPECT_EQ(std::set<Bytes>(gammas.begin(), gammas.end()).size(), gammas.size());
}

TEST(Setup, PublicKeyMatchesGamma) {
  auto [p, a] = setup(seed_of("w-check"), 1);
  EXPECT_EQ(pair(p.ctx.g1, p.w), p.ctx.gt.pow(a.gamma));
  EXPECT_FALSE(p.w.is_identity());
  EXPECT_FALSE(p.u.is_identity());
  EXPECT_FALSE(p.u == p.v);
  EXPECT_FALSE(p.v == p.h1);
  EXPECT_EQ(p.e_h1_w, pair(p.h1, p.w));
}

TEST(Setup, RejectsEmptySeed) {
  EXPECT_EQ(error_of([] { setup(Bytes{}, 1); }), Errc::kInvalidArgument);
}

TEST_F(GroupSignatureTest, IssuedCredentialSatisfiesSdhEquation) {
  for (const auto* cred : {&alice, &bob}) {
    EXPECT_EQ(pair(cred->A, params.w * params.ctx.g2.pow(cred->x)), params.ctx.gt);
    // And directly against gamma: A^(gamma + x) = g1.
    EXPECT_EQ(cred->A.pow(admin->gamma + cred->x), params.ctx.g1);
  }
  EXPECT_FALSE(alice.x == bob.x);
  EXPECT_FALSE(alice.A == bob.A);
}

TEST_F(GroupSignatureTest, DuplicateIssueIsRejected) {
  EXPECT_EQ(error_of([&] { issue(*admin, params, "alice"); }), Errc::kDuplicateMember);
}

TEST_F(GroupSignatureTest, SessionsAreFreshAndConsistent) {
  std::set<Bytes> exponents;
  std::uint32_t last_id = sess.session_id;
  for (int i = 0; i < 10; ++i) {
    SessionKeys s = new_session(*admin, params);
    EXPECT_EQ(s.C1, params.u.pow(s.a));
    EXPECT_EQ(s.C2, params.v.pow(s.b));
    EXPECT_GT(s.session_id, last_id);
    last_id = s.session_id;
    exponents.insert(s.a.encode());
    exponents.insert(s.b.encode());
  }
  EXPECT_EQ(exponents.size(), 20u);
}

TEST_F(GroupSignatureTest, HonestSignaturesVerify) {
  for (int i = 0; i < 100; ++i) {
    const auto& cred = (i % 2 == 0) ? alice : bob;
    Bytes msg(1 + rng.uniform(200));
    rng.fill(msg);
    Signature sig = sign(cred, sess, params, msg, rng);
    ASSERT_EQ(verify(params, sess.public_view(), msg, sig), Verdict::kAccept) << "trial " << i;
  }
}

TEST_F(GroupSignatureTest, FixedRngSeedGivesIdenticalSignature) {
  Bytes msg = seed_of("gradient");
  Rng r1 = Rng::from_u64(99), r2 = Rng::from_u64(99);
  EXPECT_EQ(sign(alice, sess, params, msg, r1), sign(alice, sess, params, msg, r2));
}

TEST_F(GroupSignatureTest, SignatureHasSevenComponentsOnTheWire) {
  Signature sig = sign(alice, sess, params, seed_of("m"), rng);
  EXPECT_EQ(Signature::kComponents, 7u);
  EXPECT_EQ(sig.encode().size(), algebra::kG1Bytes + 6 * algebra::kScalarBytes);
  EXPECT_EQ(Signature::decode(sig.encode()), sig);
}

TEST_F(GroupSignatureTest, ProverAndVerifierCommitmentsCoincide) {
  auto [sig, B] = debug::sign_with_commitments(bob, sess, params, seed_of("self-check"), rng);
  EXPECT_EQ(debug::recompute_commitments(params, sess.public_view(), sig), B);
}

TEST_F(GroupSignatureTest, MessageBitFlipIsRejected) {
  Bytes msg(64);
  rng.fill(msg);
  Signature sig = sign(alice, sess, params, msg, rng);
  for (int i = 0; i < 20; ++i) {
    Bytes tampered = msg;
    auto bit = rng.uniform(tampered.size() * 8);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_EQ(verify(params, sess.public_view(), tampered, sig), Verdict::kReject);
  }
}

TEST_F(GroupSignatureTest, SignatureBitFlipIsRejectedOrMalformed) {
  Bytes msg = seed_of("payload");
  Bytes wire = sign(alice, sess, params, msg, rng).encode();
  for (int i = 0; i < 40; ++i) {
    Bytes tampered = wire;
    auto bit = rng.uniform(tampered.size() * 8);
    tampered[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      Signature sig = Signature::decode(tampered);
      EXPECT_EQ(verify(params, sess.public_view(), msg, sig), Verdict::kReject) << "bit " << bit;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kMalformedSignature);
    }
  }
}

TEST_F(GroupSignatureTest, OtherSessionDoesNotVerify) {
  Bytes msg = seed_of("cross-session");
  Signature sig = sign(alice, sess, params, msg, rng);
  SessionKeys other = new_session(*admin, params);
  EXPECT_EQ(verify(params, other.public_view(), msg, sig), Verdict::kReject);
}

TEST_F(GroupSignatureTest, OpenIdentifiesSigner) {
  EXPECT_EQ(open(*admin, params, sess, sign(alice, sess, params, seed_of("a"), rng)).member_id, "alice");
  EXPECT_EQ(open(*admin, params, sess, sign(bob, sess, params, seed_of("b"), rng)).member_id, "bob");
}

TEST_F(GroupSignatureTest, OpenRejectsForeignGroupSignature) {
  auto [other_params, other_admin] = setup(seed_of("another-group"), 8);
  auto mallory = issue(other_admin, other_params, "mallory");
  auto other_sess = new_session(other_admin, other_params);
  Signature foreign = sign(mallory, other_sess, other_params, seed_of("x"), rng);
  EXPECT_EQ(error_of([&] { open(*admin, params, sess, foreign); }), Errc::kUnknownMember);
  // The foreign proof does not verify under this group's session either.
  EXPECT_EQ(verify(params, sess.public_view(), seed_of("x"), foreign), Verdict::kReject);
}

TEST_F(GroupSignatureTest, RevocationRotatesSessionAndKeepsTraceability) {
  Signature old_sig = sign(bob, sess, params, seed_of("old"), rng);
  SessionKeys rotated = revoke(*admin, params, "bob", "poisoned gradients");
  EXPECT_GT(rotated.session_id, sess.session_id);
  EXPECT_FALSE(rotated.C1 == sess.C1);

  Opened opened = open(*admin, params, sess, old_sig);
  EXPECT_EQ(opened.member_id, "bob");
  EXPECT_EQ(opened.status, MemberStatus::kRevoked);

  // Bob still holds the old session; its signatures fail under the new one.
  EXPECT_EQ(verify(params, rotated.public_view(), seed_of("new"),
                   sign(bob, sess, params, seed_of("new"), rng)),
            Verdict::kReject);

  EXPECT_EQ(export_revocation_table(*admin),
            "alice\tactive\t\nbob\trevoked\tpoisoned gradients\n");
}

TEST_F(GroupSignatureTest, RevokeErrors) {
  EXPECT_EQ(error_of([&] { revoke(*admin, params, "nobody", "x"); }), Errc::kUnknownMember);
  revoke(*admin, params, "alice", "test");
  EXPECT_EQ(error_of([&] { revoke(*admin, params, "alice", "again"); }), Errc::kAlreadyRevoked);
}

TEST_F(GroupSignatureTest, SignPreconditions) {
  MemberCredential revoked = alice;
  revoked.revoked = true;
  EXPECT_EQ(error_of([&] { sign(revoked, sess, params, seed_of("m"), rng); }), Errc::kRevokedCredential);
  EXPECT_EQ(error_of([&] { sign(alice, sess, params, Bytes{}, rng); }), Errc::kInvalidArgument);
  SessionKeys broken = sess;
  broken.a = broken.a + Scalar::from_u64(1);
  EXPECT_EQ(error_of([&] { sign(alice, broken, params, seed_of("m"), rng); }), Errc::kInvalidSession);
}

TEST_F(GroupSignatureTest, C3IsFixedPerMemberPerSession) {
  Signature a1 = sign(alice, sess, params, seed_of("one"), rng);
  Signature a2 = sign(alice, sess, params, seed_of("two"), rng);
  Signature b1 = sign(bob, sess, params, seed_of("one"), rng);
  EXPECT_EQ(a1.C3, a2.C3);
  EXPECT_FALSE(a1.C3 == b1.C3);
  EXPECT_FALSE(a1.c == a2.c);

  SessionKeys next = new_session(*admin, params);
  EXPECT_FALSE(sign(alice, next, params, seed_of("one"), rng).C3 == a1.C3);
}

TEST_F(GroupSignatureTest, DescriptorRoundTripAndCheck) {
  SessionDescriptor d = describe_session(*admin, params, sess);
  EXPECT_TRUE(check_descriptor(params, d));
  SessionDescriptor back = SessionDescriptor::decode(d.encode());
  EXPECT_TRUE(check_descriptor(params, back));

  SessionDescriptor forged = d;
  forged.session.C1 = params.u.pow(Scalar::from_u64(5));
  EXPECT_FALSE(check_descriptor(params, forged));
  EXPECT_THROW(open(*admin, params, sess, d.sigma), Error);  // admin credential is not a member
}

}  // namespace
}  // namespace gsfl::gs
