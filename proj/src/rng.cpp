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

#include "gsfl/rng.hpp"

#include <cmath>
#include <memory>
#include <numbers>

#include <openssl/evp.h>
#include <openssl/rand.h>

namespace gsfl {

namespace {

constexpr std::string_view kSeedTag = "GSFL/rng/v1";

std::array<std::uint8_t, 32> derive_key(ByteView prefix, ByteView material) {
  Bytes input(prefix.begin(), prefix.end());
  input.insert(input.end(), material.begin(), material.end());
  std::array<std::uint8_t, 32> key{};
  if (EVP_Digest(input.data(), input.size(), key.data(), nullptr, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::kIoError, "SHA-256 failed");
  }
  return key;
}

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};

}  // namespace

Rng::Rng(ByteView seed) : key_(derive_key(as_bytes(kSeedTag), seed)) {}

Rng Rng::from_u64(std::uint64_t seed) {
  ByteWriter w;
  w.u64(seed);
  return Rng(w.bytes());
}

Rng Rng::from_entropy() {
  std::array<std::uint8_t, 32> seed{};
  if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1) {
    throw Error(Errc::kIoError, "operating system entropy unavailable");
  }
  return Rng(seed);
}

void Rng::refill() {
  // IV = 32-bit block counter (0) || 96-bit nonce carrying the refill index.
  std::array<std::uint8_t, 16> iv{};
  for (int i = 0; i < 8; ++i) iv[4 + i] = static_cast<std::uint8_t>(refills_ >> (8 * i));
  ++refills_;

  std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter> ctx(EVP_CIPHER_CTX_new());
  std::array<std::uint8_t, 1024> zeros{};
  int len = 0;
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_chacha20(), nullptr, key_.data(), iv.data()) != 1 ||
      EVP_EncryptUpdate(ctx.get(), buf_.data(), &len, zeros.data(), static_cast<int>(zeros.size())) != 1 ||
      len != static_cast<int>(buf_.size())) {
    throw Error(Errc::kIoError, "ChaCha20 keystream generation failed");
  }
  pos_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (pos_ == buf_.size()) refill();
    std::size_t take = std::min(out.size() - done, buf_.size() - pos_);
    std::copy_n(buf_.begin() + static_cast<std::ptrdiff_t>(pos_), take, out.begin() + static_cast<std::ptrdiff_t>(done));
    pos_ += take;
    done += take;
  }
}

Rng::result_type Rng::operator()() {
  std::array<std::uint8_t, 8> b{};
  fill(b);
  result_type v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::kInvalidArgument, "uniform bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t x = (*this)();
    if (x >= threshold) return x % bound;
  }
}

double Rng::unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  double u1 = 1.0 - unit();  // (0, 1]
  double u2 = unit();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  has_spare_normal_ = true;
  return radius * std::cos(angle);
}

Rng Rng::fork(std::string_view label) const {
  Rng child(ByteView{});
  child.key_ = derive_key(key_, as_bytes(label));
  return child;
}

}  // namespace gsfl
