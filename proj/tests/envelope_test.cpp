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

#include "gsfl/envelope.hpp"

#include <gtest/gtest.h>

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <set>

namespace gsfl::envelope {
namespace {

using algebra::GT;
using algebra::Scalar;

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::kInvalidArgument;
}

// Independent opener: recomputes the KEM key with a one-shot SHA-512 over the
// length-prefixed framing and runs AES-256-GCM directly over the wire bytes.
Bytes oracle_open(const Scalar& x, ByteView wire) {
  const Bytes c1_bytes(wire.begin(), wire.begin() + algebra::kGTBytes);
  const GT shared = GT::decode(c1_bytes).pow(x);
  const Bytes s = shared.encode();

  Bytes framed;
  auto frame = [&framed](ByteView p) {
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(p.size())).raw(p);
    framed.insert(framed.end(), w.bytes().begin(), w.bytes().end());
  };
  frame(as_bytes(kKemTag));
  frame(s);
  unsigned char digest[64];
  SHA512(framed.data(), framed.size(), digest);

  ByteReader r(wire.subspan(algebra::kGTBytes), Errc::kMalformedCiphertext);
  const std::uint32_t len = r.u32();
  ByteView sealed = r.raw(len);
  ByteView nonce = sealed.first(12);
  ByteView body = sealed.subspan(12, sealed.size() - 12 - 16);
  Bytes tag(sealed.end() - 16, sealed.end());

  EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
  Bytes out(body.size() + 16);
  int n = 0, total = 0;
  EVP_DecryptInit_ex(ctx, EVP_aes_256_gcm(), nullptr, digest, nonce.data());
  EVP_DecryptUpdate(ctx, nullptr, &n, c1_bytes.data(), static_cast<int>(c1_bytes.size()));
  EVP_DecryptUpdate(ctx, out.data(), &n, body.data(), static_cast<int>(body.size()));
  total = n;
  EVP_CIPHER_CTX_ctrl(ctx, EVP_CTRL_GCM_SET_TAG, 16, tag.data());
  const int ok = EVP_DecryptFinal_ex(ctx, out.data() + total, &n);
  EVP_CIPHER_CTX_free(ctx);
  if (ok != 1) throw std::runtime_error("oracle: tag mismatch");
  out.resize(static_cast<std::size_t>(total));
  return out;
}

class EnvelopeTest : public ::testing::Test {
 protected:
  Rng rng = Rng::from_u64(2024);
  ServerKeys keys = server_keygen(rng);
};

TEST_F(EnvelopeTest, KeygenPublishesGtToTheX) {
  EXPECT_FALSE(keys.x.is_zero());
  EXPECT_EQ(keys.h_srv, algebra::PairingContext::standard().gt.pow(keys.x));
}

TEST_F(EnvelopeTest, TextbookRoundTrip) {
  for (int i = 0; i < 50; ++i) {
    GT m = GT::random(rng);
    TextbookCiphertext ct = encrypt_textbook(keys.h_srv, m, rng);
    EXPECT_EQ(decrypt_textbook(keys, ct), m);
    EXPECT_EQ(decrypt_textbook(keys, TextbookCiphertext::decode(ct.encode())), m);
  }
}

TEST_F(EnvelopeTest, TextbookMatchesHandComputation) {
  const auto& ctx = algebra::PairingContext::standard();
  GT m = GT::random(rng);
  Scalar y = Scalar::random_nonzero(rng);
  TextbookCiphertext ct = encrypt_textbook_with_nonce(keys.h_srv, m, y);
  EXPECT_EQ(ct.c1, ctx.gt.pow(y));
  EXPECT_EQ(ct.c2, m * ctx.gt.pow(keys.x * y));
  // c1^(r - x) is the inverse of the shared secret.
  EXPECT_EQ(ct.c1.pow(-keys.x) * ct.c1.pow(keys.x), GT::identity());
  EXPECT_EQ(ct.c1.pow(-keys.x), ct.c1.pow(keys.x).inverse());
}

TEST_F(EnvelopeTest, TextbookWrongKeyDoesNotRecoverMessage) {
  GT m = GT::random(rng);
  TextbookCiphertext ct = encrypt_textbook(keys.h_srv, m, rng);
  ServerKeys other = server_keygen(rng);
  EXPECT_FALSE(decrypt_textbook(other, ct) == m);
}

TEST_F(EnvelopeTest, HybridRoundTripAcrossSizes) {
  for (std::size_t size : {std::size_t{0}, std::size_t{1}, std::size_t{1024}, std::size_t{1000000}}) {
    Bytes payload(size);
    rng.fill(payload);
    HybridCiphertext ct = seal(keys.h_srv, payload, rng);
    EXPECT_EQ(ct.sealed.size(), size + kNonceBytes + kTagBytes);
    const Bytes wire = ct.encode();
    EXPECT_EQ(wire.size(), algebra::kGTBytes + 4 + ct.sealed.size());
    EXPECT_EQ(open(keys, HybridCiphertext::decode(wire)), payload) << "size " << size;
  }
}

TEST_F(EnvelopeTest, HybridWireLayoutMatchesIndependentOpener) {
  for (std::size_t size : {std::size_t{0}, std::size_t{17}, std::size_t{4096}}) {
    Bytes payload(size);
    rng.fill(payload);
    EXPECT_EQ(oracle_open(keys.x, seal(keys.h_srv, payload, rng).encode()), payload);
  }
}

TEST_F(EnvelopeTest, HybridWrongKeyFailsAuthentication) {
  Bytes payload(64, 0x5a);
  HybridCiphertext ct = seal(keys.h_srv, payload, rng);
  ServerKeys other = server_keygen(rng);
  EXPECT_EQ(error_of([&] { open(other, ct); }), Errc::kAuthFailure);
}

TEST_F(EnvelopeTest, HybridTamperingFailsAuthentication) {
  Bytes payload(256);
  rng.fill(payload);
  HybridCiphertext ct = seal(keys.h_srv, payload, rng);
  for (int i = 0; i < 64; ++i) {
    HybridCiphertext bad = ct;
    auto bit = rng.uniform(bad.sealed.size() * 8);
    bad.sealed[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    EXPECT_EQ(error_of([&] { open(keys, bad); }), Errc::kAuthFailure) << "bit " << bit;
  }
  // c1 is bound as associated data: swapping it for another valid GT element fails too.
  HybridCiphertext swapped = ct;
  swapped.c1 = seal(keys.h_srv, payload, rng).c1;
  EXPECT_EQ(error_of([&] { open(keys, swapped); }), Errc::kAuthFailure);
}

TEST_F(EnvelopeTest, FreshEphemeralPerSeal) {
  Bytes payload(32, 1);
  std::set<Bytes> c1s, bodies;
  for (int i = 0; i < 20; ++i) {
    HybridCiphertext ct = seal(keys.h_srv, payload, rng);
    c1s.insert(ct.c1.encode());
    bodies.insert(ct.sealed);
  }
  EXPECT_EQ(c1s.size(), 20u);
  EXPECT_EQ(bodies.size(), 20u);
}

TEST_F(EnvelopeTest, MalformedHybridEncodings) {
  HybridCiphertext ct = seal(keys.h_srv, Bytes(10, 7), rng);
  Bytes wire = ct.encode();
  EXPECT_EQ(error_of([&] { HybridCiphertext::decode(ByteView(wire).first(100)); }),
            Errc::kMalformedCiphertext);
  Bytes longer = wire;
  longer.push_back(0);
  EXPECT_EQ(error_of([&] { HybridCiphertext::decode(longer); }), Errc::kMalformedCiphertext);
  Bytes bad_c1 = wire;
  std::fill(bad_c1.begin(), bad_c1.begin() + algebra::kGTBytes, 0xff);
  EXPECT_EQ(error_of([&] { HybridCiphertext::decode(bad_c1); }), Errc::kMalformedCiphertext);

  HybridCiphertext short_body = ct;
  short_body.sealed.resize(kNonceBytes + kTagBytes - 1);
  EXPECT_EQ(error_of([&] { open(keys, short_body); }), Errc::kMalformedCiphertext);
  EXPECT_EQ(error_of([&] { TextbookCiphertext::decode(Bytes(10)); }), Errc::kMalformedCiphertext);
}

}  // namespace
}  // namespace gsfl::envelope
