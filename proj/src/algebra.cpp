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

#include <algorithm>
#include <cstring>
#include <memory>

#include <openssl/evp.h>

namespace gsfl::algebra {

namespace {

constexpr std::size_t kScalarBits = 255;

blst_scalar to_blst_scalar(const blst_fr& fr) {
  blst_scalar s;
  blst_scalar_from_fr(&s, &fr);
  return s;
}

bool bytes_equal(ByteView a, ByteView b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

void require_size(ByteView bytes, std::size_t want, const char* what) {
  if (bytes.size() != want) {
    throw Error(Errc::kMalformedEncoding, std::string(what) + " encoding must be " +
                                              std::to_string(want) + " bytes, got " +
                                              std::to_string(bytes.size()));
  }
}

// Maps blst's decode status to our error kinds.
[[noreturn]] void throw_decode_error(BLST_ERROR err, const char* what) {
  if (err == BLST_POINT_NOT_IN_GROUP) {
    throw Error(Errc::kNotInSubgroup, std::string(what) + " point is outside the order-r subgroup");
  }
  throw Error(Errc::kMalformedEncoding, std::string(what) + " point encoding rejected (blst error " +
                                            std::to_string(static_cast<int>(err)) + ")");
}

}  // namespace

// ---------------------------------------------------------------- Scalar

Scalar::Scalar() { std::memset(&v_, 0, sizeof(v_)); }

Scalar Scalar::from_u64(std::uint64_t v) {
  const std::uint64_t limbs[4] = {v, 0, 0, 0};
  Scalar out;
  blst_fr_from_uint64(&out.v_, limbs);
  return out;
}

Scalar Scalar::random(Rng& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return from_wide_bytes(wide);
}

Scalar Scalar::random_nonzero(Rng& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

Scalar Scalar::from_wide_bytes(ByteView be) {
  blst_scalar s;
  blst_scalar_from_be_bytes(&s, be.data(), be.size());
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Scalar Scalar::decode(ByteView bytes) {
  require_size(bytes, kScalarBytes, "scalar");
  blst_scalar s;
  blst_scalar_from_bendian(&s, bytes.data());
  if (!blst_scalar_fr_check(&s)) {
    throw Error(Errc::kMalformedEncoding, "scalar is not reduced modulo the group order");
  }
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Bytes Scalar::encode() const {
  blst_scalar s = to_blst_scalar(v_);
  Bytes out(kScalarBytes);
  blst_bendian_from_scalar(out.data(), &s);
  return out;
}

std::array<std::uint8_t, 32> Scalar::to_le_bytes() const {
  blst_scalar s = to_blst_scalar(v_);
  std::array<std::uint8_t, 32> out{};
  std::memcpy(out.data(), s.b, out.size());
  return out;
}

bool Scalar::is_zero() const {
  static const Scalar kZero;
  return *this == kZero;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(Errc::kInvalidArgument, "zero has no inverse");
  Scalar out;
  blst_fr_eucl_inverse(&out.v_, &v_);
  return out;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar out;
  blst_fr_add(&out.v_, &a.v_, &b.v_);
  return out;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar out;
  blst_fr_sub(&out.v_, &a.v_, &b.v_);
  return out;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar out;
  blst_fr_mul(&out.v_, &a.v_, &b.v_);
  return out;
}

Scalar operator-(const Scalar& a) {
  Scalar out;
  blst_fr_cneg(&out.v_, &a.v_, true);
  return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
  return std::memcmp(&a.v_, &b.v_, sizeof(a.v_)) == 0;
}

// ---------------------------------------------------------------- G1

G1::G1() { std::memset(&p_, 0, sizeof(p_)); }

G1 G1::generator() {
  G1 out;
  out.p_ = *blst_p1_generator();
  return out;
}

G1 G1::decode(ByteView bytes) {
  require_size(bytes, kG1Bytes, "G1");
  blst_p1_affine aff;
  if (auto err = blst_p1_uncompress(&aff, bytes.data()); err != BLST_SUCCESS) {
    throw_decode_error(err, "G1");
  }
  if (!blst_p1_affine_in_g1(&aff)) throw_decode_error(BLST_POINT_NOT_IN_GROUP, "G1");
  G1 out;
  blst_p1_from_affine(&out.p_, &aff);
  if (!bytes_equal(out.encode(), bytes)) {
    throw Error(Errc::kMalformedEncoding, "non-canonical G1 encoding");
  }
  return out;
}

Bytes G1::encode() const {
  Bytes out(kG1Bytes);
  blst_p1_compress(out.data(), &p_);
  return out;
}

bool G1::is_identity() const { return blst_p1_is_inf(&p_); }

G1 G1::pow(const Scalar& e) const {
  auto le = e.to_le_bytes();
  G1 out;
  blst_p1_mult(&out.p_, &p_, le.data(), kScalarBits);
  return out;
}

G1 G1::inverse() const {
  G1 out = *this;
  blst_p1_cneg(&out.p_, true);
  return out;
}

G1 operator*(const G1& a, const G1& b) {
  G1 out;
  blst_p1_add_or_double(&out.p_, &a.p_, &b.p_);
  return out;
}

bool operator==(const G1& a, const G1& b) { return blst_p1_is_equal(&a.p_, &b.p_); }

// ---------------------------------------------------------------- G2

G2::G2() { std::memset(&p_, 0, sizeof(p_)); }

G2 G2::generator() {
  G2 out;
  out.p_ = *blst_p2_generator();
  return out;
}

G2 G2::decode(ByteView bytes) {
  require_size(bytes, kG2Bytes, "G2");
  blst_p2_affine aff;
  if (auto err = blst_p2_uncompress(&aff, bytes.data()); err != BLST_SUCCESS) {
    throw_decode_error(err, "G2");
  }
  if (!blst_p2_affine_in_g2(&aff)) throw_decode_error(BLST_POINT_NOT_IN_GROUP, "G2");
  G2 out;
  blst_p2_from_affine(&out.p_, &aff);
  if (!bytes_equal(out.encode(), bytes)) {
    throw Error(Errc::kMalformedEncoding, "non-canonical G2 encoding");
  }
  return out;
}

Bytes G2::encode() const {
  Bytes out(kG2Bytes);
  blst_p2_compress(out.data(), &p_);
  return out;
}

bool G2::is_identity() const { return blst_p2_is_inf(&p_); }

G2 G2::pow(const Scalar& e) const {
  auto le = e.to_le_bytes();
  G2 out;
  blst_p2_mult(&out.p_, &p_, le.data(), kScalarBits);
  return out;
}

G2 G2::inverse() const {
  G2 out = *this;
  blst_p2_cneg(&out.p_, true);
  return out;
}

G2 operator*(const G2& a, const G2& b) {
  G2 out;
  blst_p2_add_or_double(&out.p_, &a.p_, &b.p_);
  return out;
}

bool operator==(const G2& a, const G2& b) { return blst_p2_is_equal(&a.p_, &b.p_); }

// ---------------------------------------------------------------- GT

GT::GT() : f_(*blst_fp12_one()) {}

GT GT::decode(ByteView bytes) {
  require_size(bytes, kGTBytes, "GT");
  GT out;
  const std::uint8_t* cursor = bytes.data();
  // Same coordinate order as blst_bendian_from_fp12.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        blst_fp& coord = out.f_.fp6[j].fp2[i].fp[k];
        blst_fp_from_bendian(&coord, cursor);
        std::uint8_t check[48];
        blst_bendian_from_fp(check, &coord);
        if (std::memcmp(check, cursor, sizeof(check)) != 0) {
          throw Error(Errc::kMalformedEncoding, "GT coordinate is not reduced modulo p");
        }
        cursor += 48;
      }
    }
  }
  if (!blst_fp12_in_group(&out.f_)) {
    throw Error(Errc::kNotInSubgroup, "element is outside the order-r subgroup of Fp12");
  }
  return out;
}

GT GT::random(Rng& rng) { return PairingContext::standard().gt.pow(Scalar::random(rng)); }

Bytes GT::encode() const {
  Bytes out(kGTBytes);
  blst_bendian_from_fp12(out.data(), &f_);
  return out;
}

bool GT::is_identity() const { return blst_fp12_is_one(&f_); }

GT GT::pow(const Scalar& e) const {
  // Fixed 4-bit window, most significant nibble first. Squarings use the
  // cyclotomic formula, valid because every GT element is unitary.
  std::array<blst_fp12, 16> table;
  table[0] = *blst_fp12_one();
  table[1] = f_;
  for (std::size_t i = 2; i < table.size(); ++i) blst_fp12_mul(&table[i], &table[i - 1], &f_);

  auto le = e.to_le_bytes();
  GT out;
  bool started = false;
  for (int byte = 31; byte >= 0; --byte) {
    for (int shift = 4; shift >= 0; shift -= 4) {
      unsigned nibble = (le[static_cast<std::size_t>(byte)] >> shift) & 0x0f;
      if (started) {
        for (int s = 0; s < 4; ++s) blst_fp12_cyclotomic_sqr(&out.f_, &out.f_);
      }
      if (nibble != 0) {
        if (started) {
          blst_fp12_mul(&out.f_, &out.f_, &table[nibble]);
        } else {
          out.f_ = table[nibble];
          started = true;
        }
      }
    }
  }
  return out;
}

GT GT::inverse() const {
  GT out = *this;
  blst_fp12_conjugate(&out.f_);
  return out;
}

GT operator*(const GT& a, const GT& b) {
  GT out;
  blst_fp12_mul(&out.f_, &a.f_, &b.f_);
  return out;
}

GT operator/(const GT& a, const GT& b) { return a * b.inverse(); }

bool operator==(const GT& a, const GT& b) { return blst_fp12_is_equal(&a.f_, &b.f_); }

// ---------------------------------------------------------------- pairing

GT pair(const G1& p, const G2& q) {
  if (p.is_identity() || q.is_identity()) return GT::identity();
  blst_p1_affine pa;
  blst_p2_affine qa;
  blst_p1_to_affine(&pa, &p.p_);
  blst_p2_to_affine(&qa, &q.p_);
  blst_fp12 miller;
  blst_miller_loop(&miller, &qa, &pa);
  GT out;
  blst_final_exp(&out.f_, &miller);
  return out;
}

const PairingContext& PairingContext::standard() {
  static const PairingContext ctx = [] {
    PairingContext c;
    c.g1 = G1::generator();
    c.g2 = G2::generator();
    c.gt = pair(c.g1, c.g2);
    return c;
  }();
  return ctx;
}

// ---------------------------------------------------------------- hashing

namespace {

struct MdCtxDeleter {
  void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

void update_framed(EVP_MD_CTX* ctx, ByteView part) {
  const auto n = static_cast<std::uint32_t>(part.size());
  const std::uint8_t len[4] = {static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                               static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
  EVP_DigestUpdate(ctx, len, sizeof(len));
  EVP_DigestUpdate(ctx, part.data(), part.size());
}

}  // namespace

std::array<std::uint8_t, 64> tagged_digest(std::string_view domain_tag,
                                           std::span<const ByteView> parts) {
  std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha512(), nullptr) != 1) {
    throw Error(Errc::kIoError, "SHA-512 initialisation failed");
  }
  update_framed(ctx.get(), as_bytes(domain_tag));
  for (const auto& part : parts) update_framed(ctx.get(), part);
  std::array<std::uint8_t, 64> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
  return digest;
}

Scalar hash_to_scalar(std::string_view domain_tag, std::span<const ByteView> parts) {
  if (parts.empty()) throw Error(Errc::kInvalidArgument, "hash_to_scalar needs at least one part");
  auto digest = tagged_digest(domain_tag, parts);
  return Scalar::from_wide_bytes(digest);
}

}  // namespace gsfl::algebra
