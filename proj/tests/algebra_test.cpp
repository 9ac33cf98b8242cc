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

#include "gsfl/algebra.hpp"

#include <gmpxx.h>
#include <gtest/gtest.h>
#include <openssl/sha.h>

#include <set>
#include <vector>

namespace gsfl::algebra {
namespace {

// Independent oracle for Z_r: plain GMP integers, reduced by hand.
const mpz_class kOrder("73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001", 16);

mpz_class to_mpz(const Scalar& s) {
  mpz_class v(to_hex(s.encode()), 16);
  return v;
}

Scalar from_mpz(const mpz_class& v) {
  mpz_class reduced = ((v % kOrder) + kOrder) % kOrder;
  std::string hex = reduced.get_str(16);
  hex.insert(0, 64 - hex.size(), '0');
  return Scalar::decode(from_hex(hex));
}

// Re-derivation of the hash framing with a one-shot SHA-512 and GMP reduction.
mpz_class oracle_hash(std::string_view tag, const std::vector<Bytes>& parts) {
  Bytes framed;
  auto frame = [&framed](ByteView p) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(p.size()));
    framed.insert(framed.end(), w.bytes().begin(), w.bytes().end());
    framed.insert(framed.end(), p.begin(), p.end());
  };
  frame(as_bytes(tag));
  for (const auto& p : parts) frame(p);
  unsigned char digest[64];
  SHA512(framed.data(), framed.size(), digest);
  mpz_class v(to_hex(ByteView(digest, 64)), 16);
  return v % kOrder;
}

Scalar hash_parts(std::string_view tag, const std::vector<Bytes>& parts) {
  std::vector<ByteView> views(parts.begin(), parts.end());
  return hash_to_scalar(tag, views);
}

TEST(Scalar, ArithmeticMatchesBigIntegerOracle) {
  Rng rng = Rng::from_u64(1);
  for (int i = 0; i < 200; ++i) {
    Scalar a = Scalar::random(rng);
    Scalar b = Scalar::random(rng);
    mpz_class ma = to_mpz(a), mb = to_mpz(b);
    ASSERT_LT(ma, kOrder);
    EXPECT_EQ(to_mpz(a + b), (ma + mb) % kOrder);
    EXPECT_EQ(to_mpz(a * b), (ma * mb) % kOrder);
    EXPECT_EQ(to_mpz(a - b), ((ma - mb) % kOrder + kOrder) % kOrder);
    EXPECT_EQ(to_mpz(-a), (kOrder - ma) % kOrder);
    if (!a.is_zero()) EXPECT_EQ((a * a.inverse()), Scalar::from_u64(1));
  }
}

TEST(Scalar, ZeroEncodesAsAllZeroBytes) {
  EXPECT_EQ(Scalar().encode(), Bytes(kScalarBytes, 0));
  EXPECT_TRUE(Scalar::from_u64(0).is_zero());
  EXPECT_THROW(Scalar().inverse(), Error);
}

TEST(Scalar, DecodeRejectsUnreducedAndWrongLength) {
  std::string hex = kOrder.get_str(16);
  hex.insert(0, 64 - hex.size(), '0');
  try {
    Scalar::decode(from_hex(hex));
    FAIL() << "r itself must not decode";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kMalformedEncoding);
  }
  EXPECT_THROW(Scalar::decode(Bytes(31, 0)), Error);
  EXPECT_THROW(Scalar::decode(Bytes(33, 0)), Error);
}

TEST(Scalar, WideReductionMatchesOracle) {
  Rng rng = Rng::from_u64(2);
  for (int len : {1, 31, 32, 33, 64, 100}) {
    Bytes raw(static_cast<std::size_t>(len));
    rng.fill(raw);
    mpz_class v(to_hex(raw), 16);
    EXPECT_EQ(to_mpz(Scalar::from_wide_bytes(raw)), v % kOrder) << "len " << len;
  }
}

TEST(HashToScalar, MatchesIndependentFramingOracle) {
  Rng rng = Rng::from_u64(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<Bytes> parts(1 + rng.uniform(5));
    for (auto& p : parts) {
      p.resize(rng.uniform(100));
      rng.fill(p);
    }
    EXPECT_EQ(to_mpz(hash_parts("GSFL-v1", parts)), oracle_hash("GSFL-v1", parts));
  }
}

TEST(HashToScalar, DeterministicAndSensitiveToEveryBit) {
  Rng rng = Rng::from_u64(4);
  std::vector<Bytes> parts = {Bytes(40), Bytes(48)};
  rng.fill(parts[0]);
  rng.fill(parts[1]);
  const Scalar base = hash_parts("GSFL-v1", parts);
  EXPECT_EQ(base, hash_parts("GSFL-v1", parts));

  for (int trial = 0; trial < 100; ++trial) {
    auto flipped = parts;
    auto& target = flipped[rng.uniform(flipped.size())];
    auto bit = rng.uniform(target.size() * 8);
    target[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_FALSE(hash_parts("GSFL-v1", flipped) == base);
  }
}

TEST(HashToScalar, DomainTagSeparates) {
  std::vector<Bytes> parts = {Bytes{1, 2, 3}};
  EXPECT_FALSE(hash_parts("GSFL-v1", parts) == hash_parts("GSFL-v2", parts));
}

TEST(HashToScalar, LengthPrefixPreventsBoundaryShift) {
  std::vector<Bytes> ab = {Bytes{1, 2}, Bytes{3}};
  std::vector<Bytes> a_b = {Bytes{1}, Bytes{2, 3}};
  EXPECT_FALSE(hash_parts("t", ab) == hash_parts("t", a_b));
}

TEST(HashToScalar, RejectsEmptyPartList) {
  try {
    hash_to_scalar("t", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kInvalidArgument);
  }
}

TEST(Pairing, IdentityAndGenerators) {
  const auto& ctx = PairingContext::standard();
  EXPECT_TRUE(pair(G1::identity(), ctx.g2).is_identity());
  EXPECT_TRUE(pair(ctx.g1, G2::identity()).is_identity());
  EXPECT_EQ(pair(ctx.g1, ctx.g2), ctx.gt);
  EXPECT_FALSE(ctx.gt.is_identity());
}

TEST(Pairing, SmallExponentsGiveProduct) {
  const auto& ctx = PairingContext::standard();
  GT lhs = pair(exp(ctx.g1, Scalar::from_u64(3)), exp(ctx.g2, Scalar::from_u64(5)));
  // gt^15 assembled by repeated multiplication, not exponentiation.
  GT rhs;
  for (int i = 0; i < 15; ++i) rhs = rhs * ctx.gt;
  EXPECT_EQ(lhs, rhs);
  EXPECT_EQ(lhs, exp(ctx.gt, Scalar::from_u64(15)));
}

TEST(Pairing, BilinearOverRandomExponents) {
  const auto& ctx = PairingContext::standard();
  Rng rng = Rng::from_u64(5);
  for (int i = 0; i < 100; ++i) {
    Scalar a = Scalar::random(rng);
    Scalar b = Scalar::random(rng);
    ASSERT_EQ(pair(ctx.g1.pow(a), ctx.g2.pow(b)), ctx.gt.pow(from_mpz(to_mpz(a) * to_mpz(b))))
        << "trial " << i;
  }
}

TEST(Exp, ZeroOneAndComposition) {
  const auto& ctx = PairingContext::standard();
  EXPECT_TRUE(exp(ctx.g1, Scalar()).is_identity());
  EXPECT_EQ(exp(ctx.g1, Scalar::from_u64(1)), ctx.g1);
  EXPECT_TRUE(exp(ctx.g2, Scalar()).is_identity());
  EXPECT_TRUE(exp(ctx.gt, Scalar()).is_identity());
  EXPECT_EQ(exp(ctx.gt, Scalar::from_u64(1)), ctx.gt);

  Rng rng = Rng::from_u64(6);
  for (int i = 0; i < 20; ++i) {
    Scalar a = Scalar::random(rng);
    Scalar b = Scalar::random(rng);
    Scalar ab = from_mpz(to_mpz(a) * to_mpz(b));
    EXPECT_EQ(exp(exp(ctx.g1, a), b), exp(ctx.g1, ab));
    EXPECT_EQ(exp(exp(ctx.g2, a), b), exp(ctx.g2, ab));
    EXPECT_EQ(exp(exp(ctx.gt, a), b), exp(ctx.gt, ab));
  }
}

TEST(Exp, InverseCancels) {
  const auto& ctx = PairingContext::standard();
  Rng rng = Rng::from_u64(7);
  Scalar a = Scalar::random(rng);
  EXPECT_TRUE((ctx.g1.pow(a) * ctx.g1.pow(a).inverse()).is_identity());
  EXPECT_TRUE((ctx.g2.pow(a) * ctx.g2.pow(a).inverse()).is_identity());
  EXPECT_TRUE((ctx.gt.pow(a) / ctx.gt.pow(a)).is_identity());
  EXPECT_EQ(ctx.g1.pow(-a), ctx.g1.pow(a).inverse());
  EXPECT_EQ(ctx.gt.pow(-a), ctx.gt.pow(a).inverse());
}

template <typename Elem>
void expect_round_trip(Elem (*make)(Rng&), std::size_t width) {
  Rng rng = Rng::from_u64(8);
  for (int i = 0; i < 1000; ++i) {
    Elem x = make(rng);
    Bytes enc = x.encode();
    ASSERT_EQ(enc.size(), width);
    Elem back = Elem::decode(enc);
    ASSERT_EQ(back, x);
    ASSERT_EQ(back.encode(), enc);
  }
}

TEST(Encoding, RoundTripEveryKind) {
  expect_round_trip<Scalar>([](Rng& r) { return Scalar::random(r); }, kScalarBytes);
  expect_round_trip<G1>([](Rng& r) { return G1::generator().pow(Scalar::random(r)); }, kG1Bytes);
  expect_round_trip<G2>([](Rng& r) { return G2::generator().pow(Scalar::random(r)); }, kG2Bytes);
  expect_round_trip<GT>([](Rng& r) { return GT::random(r); }, kGTBytes);
}

TEST(Encoding, IdentitiesRoundTrip) {
  EXPECT_TRUE(G1::decode(G1::identity().encode()).is_identity());
  EXPECT_TRUE(G2::decode(G2::identity().encode()).is_identity());
  EXPECT_TRUE(GT::decode(GT::identity().encode()).is_identity());
}

Errc decode_error(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decode unexpectedly succeeded";
  return Errc::kInvalidArgument;
}

TEST(Encoding, AllOnesIsMalformed) {
  EXPECT_EQ(decode_error([] { G1::decode(Bytes(kG1Bytes, 0xff)); }), Errc::kMalformedEncoding);
  EXPECT_EQ(decode_error([] { G2::decode(Bytes(kG2Bytes, 0xff)); }), Errc::kMalformedEncoding);
  EXPECT_EQ(decode_error([] { GT::decode(Bytes(kGTBytes, 0xff)); }), Errc::kMalformedEncoding);
  EXPECT_EQ(decode_error([] { Scalar::decode(Bytes(kScalarBytes, 0xff)); }), Errc::kMalformedEncoding);
}

TEST(Encoding, WrongLengthIsMalformed) {
  EXPECT_EQ(decode_error([] { G1::decode(Bytes(kG1Bytes - 1, 0)); }), Errc::kMalformedEncoding);
  EXPECT_EQ(decode_error([] { GT::decode(Bytes{}); }), Errc::kMalformedEncoding);
}

TEST(Encoding, CurvePointOutsideSubgroupIsRejected) {
  // Walk x = 1, 2, ... and build compressed encodings. Points on the curve
  // but off the prime-order subgroup are overwhelmingly likely (cofactor h1).
  int not_in_subgroup = 0;
  for (std::uint8_t x = 1; x < 60 && not_in_subgroup == 0; ++x) {
    Bytes enc(kG1Bytes, 0);
    enc[0] = 0x80;
    enc[kG1Bytes - 1] = x;
    Errc code = decode_error([&] { G1::decode(enc); });
    if (code == Errc::kNotInSubgroup) ++not_in_subgroup;
    else EXPECT_EQ(code, Errc::kMalformedEncoding);
  }
  EXPECT_GT(not_in_subgroup, 0);
}

TEST(Encoding, Fp12ElementOutsideGtIsRejected) {
  Bytes enc(kGTBytes, 0);
  for (std::size_t i = 0; i < 12; ++i) enc[i * 48 + 47] = static_cast<std::uint8_t>(i + 2);
  EXPECT_EQ(decode_error([&] { GT::decode(enc); }), Errc::kNotInSubgroup);
  EXPECT_EQ(decode_error([] { GT::decode(Bytes(kGTBytes, 0)); }), Errc::kNotInSubgroup);
}

TEST(Encoding, AcceptedBytesAreCanonical) {
  // Mutate valid encodings at random; whatever still decodes must re-encode
  // to the exact input bytes.
  Rng rng = Rng::from_u64(9);
  int accepted = 0;
  for (int i = 0; i < 300; ++i) {
    Bytes g1 = G1::generator().pow(Scalar::random(rng)).encode();
    g1[rng.uniform(g1.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
    try {
      G1 p = G1::decode(g1);
      ++accepted;
      EXPECT_EQ(p.encode(), g1);
    } catch (const Error& e) {
      EXPECT_TRUE(e.code() == Errc::kMalformedEncoding || e.code() == Errc::kNotInSubgroup);
    }
    Bytes sc = Scalar::random(rng).encode();
    sc[rng.uniform(sc.size())] ^= static_cast<std::uint8_t>(1u << rng.uniform(8));
    try {
      EXPECT_EQ(Scalar::decode(sc).encode(), sc);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kMalformedEncoding);
    }
  }
  (void)accepted;
}

TEST(Rng, SeedDeterminismAndForkIndependence) {
  Rng a = Rng::from_u64(42), b = Rng::from_u64(42), c = Rng::from_u64(43);
  std::vector<std::uint64_t> va, vb, vc;
  for (int i = 0; i < 300; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
  Rng f1 = a.fork("x"), f2 = a.fork("y");
  EXPECT_NE(f1(), f2());
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    auto v = a.uniform(10);
    EXPECT_LT(v, 10u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 10u);
}

}  // namespace
}  // namespace gsfl::algebra
