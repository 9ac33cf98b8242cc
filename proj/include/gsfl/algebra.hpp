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

// Pairing groups and their scalar field, with canonical encodings.
//
// All three groups are written multiplicatively: `a * b` is the group
// operation and `a.pow(e)` is exponentiation, so protocol code reads like the
// formulas it implements. The backend is BLS12-381 (type-3 pairing); nothing
// outside this header and algebra.cpp touches curve-specific types.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include <blst.h>

#include "gsfl/bytes.hpp"
#include "gsfl/rng.hpp"

namespace gsfl::algebra {

class G1;
class G2;
class GT;

inline constexpr std::string_view kCurveProfile = "bls12-381";

// Fixed encoding widths in bytes for the active curve profile.
inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kG1Bytes = 48;   // compressed
inline constexpr std::size_t kG2Bytes = 96;   // compressed
inline constexpr std::size_t kGTBytes = 576;  // 12 Fp coordinates

/// Element of Z_r, where r is the prime order common to all three groups.
class Scalar {
 public:
  Scalar();

  static Scalar from_u64(std::uint64_t v);
  /// Uniform in [0, r) by reducing 512 random bits.
  static Scalar random(Rng& rng);
  /// Uniform in [1, r).
  static Scalar random_nonzero(Rng& rng);
  /// Interprets `be` as a big-endian integer of any length and reduces mod r.
  static Scalar from_wide_bytes(ByteView be);
  /// Strict decoder: exactly kScalarBytes big-endian, value < r.
  static Scalar decode(ByteView bytes);

  Bytes encode() const;
  /// Little-endian 32-byte form used by the point multipliers.
  std::array<std::uint8_t, 32> to_le_bytes() const;

  bool is_zero() const;
  /// Multiplicative inverse; throws kInvalidArgument on zero.
  Scalar inverse() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a);
  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  blst_fr v_;  // Montgomery form
};

class G1 {
 public:
  G1();  // identity

  static G1 generator();
  static G1 identity() { return G1(); }
  static G1 decode(ByteView bytes);

  Bytes encode() const;
  bool is_identity() const;

  G1 pow(const Scalar& e) const;
  G1 inverse() const;

  friend G1 operator*(const G1& a, const G1& b);
  friend bool operator==(const G1& a, const G1& b);

 private:
  friend GT pair(const G1& p, const G2& q);
  blst_p1 p_;
};

class G2 {
 public:
  G2();  // identity

  static G2 generator();
  static G2 identity() { return G2(); }
  static G2 decode(ByteView bytes);

  Bytes encode() const;
  bool is_identity() const;

  G2 pow(const Scalar& e) const;
  G2 inverse() const;

  friend G2 operator*(const G2& a, const G2& b);
  friend bool operator==(const G2& a, const G2& b);

 private:
  friend GT pair(const G1& p, const G2& q);
  blst_p2 p_;
};

/// Order-r subgroup of Fp12*, the pairing target.
class GT {
 public:
  GT();  // identity

  static GT identity() { return GT(); }
  static GT decode(ByteView bytes);
  /// Random element gt^k for uniform k; used to draw plaintexts in tests.
  static GT random(Rng& rng);

  Bytes encode() const;
  bool is_identity() const;

  GT pow(const Scalar& e) const;
  GT inverse() const;

  friend GT operator*(const GT& a, const GT& b);
  friend GT operator/(const GT& a, const GT& b);
  friend bool operator==(const GT& a, const GT& b);

 private:
  friend GT pair(const G1& p, const G2& q);
  blst_fp12 f_;
};

/// Optimal ate pairing e: G1 x G2 -> GT.
GT pair(const G1& p, const G2& q);

template <typename Elem>
Elem exp(const Elem& base, const Scalar& e) {
  return base.pow(e);
}

/// Public generators of the pairing setting. gt is fixed to e(g1, g2).
struct PairingContext {
  G1 g1;
  G2 g2;
  GT gt;

  static const PairingContext& standard();
};

/// Domain-separated hash into Z_r.
///
/// SHA-512 over u32-length-prefixed `domain_tag` followed by each
/// u32-length-prefixed part, reduced mod r (512 >= bits(r) + 128).
/// Throws kInvalidArgument for an empty `parts` list.
Scalar hash_to_scalar(std::string_view domain_tag, std::span<const ByteView> parts);

/// SHA-512 over the same framing, returned raw; the KDF of the envelope
/// module uses it so the whole library runs on one hash primitive.
std::array<std::uint8_t, 64> tagged_digest(std::string_view domain_tag,
                                           std::span<const ByteView> parts);

}  // namespace gsfl::algebra
