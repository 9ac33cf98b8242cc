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

#include <array>
#include <limits>
#include <memory>

#include <openssl/evp.h>

namespace gsfl::envelope {

using algebra::GT;
using algebra::Scalar;

namespace {

constexpr std::size_t kKeyBytes = 32;
constexpr std::size_t kChunk = std::size_t{1} << 30;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

std::array<std::uint8_t, kKeyBytes> derive_key(const GT& shared) {
  const Bytes enc = shared.encode();
  const std::array<ByteView, 1> parts = {enc};
  auto digest = algebra::tagged_digest(kKemTag, parts);
  std::array<std::uint8_t, kKeyBytes> key{};
  std::copy_n(digest.begin(), kKeyBytes, key.begin());
  return key;
}

GT decode_gt(ByteView bytes) {
  try {
    return GT::decode(bytes);
  } catch (const Error& e) {
    throw Error(Errc::kMalformedCiphertext, e.what());
  }
}

Bytes aes_gcm_seal(const std::array<std::uint8_t, kKeyBytes>& key, ByteView nonce, ByteView aad,
                   ByteView plaintext) {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  Bytes out(plaintext.size() + kTagBytes);
  int len = 0;
  bool ok = ctx && EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr) == 1 &&
            EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) == 1 &&
            EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) == 1;
  std::size_t written = 0;
  for (std::size_t off = 0; ok && off < plaintext.size(); off += kChunk) {
    const auto n = static_cast<int>(std::min(kChunk, plaintext.size() - off));
    ok = EVP_EncryptUpdate(ctx.get(), out.data() + written, &len, plaintext.data() + off, n) == 1;
    written += static_cast<std::size_t>(len);
  }
  ok = ok && EVP_EncryptFinal_ex(ctx.get(), out.data() + written, &len) == 1;
  written += static_cast<std::size_t>(len);
  ok = ok && EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagBytes, out.data() + written) == 1;
  if (!ok || written != plaintext.size()) throw Error(Errc::kIoError, "AES-GCM encryption failed");
  return out;
}

Bytes aes_gcm_open(const std::array<std::uint8_t, kKeyBytes>& key, ByteView nonce, ByteView aad,
                   ByteView ciphertext_and_tag) {
  const std::size_t ct_len = ciphertext_and_tag.size() - kTagBytes;
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  Bytes out(ct_len);
  int len = 0;
  bool ok = ctx && EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) == 1 &&
            EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, static_cast<int>(nonce.size()), nullptr) == 1 &&
            EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), nonce.data()) == 1 &&
            EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) == 1;
  std::size_t written = 0;
  for (std::size_t off = 0; ok && off < ct_len; off += kChunk) {
    const auto n = static_cast<int>(std::min(kChunk, ct_len - off));
    ok = EVP_DecryptUpdate(ctx.get(), out.data() + written, &len, ciphertext_and_tag.data() + off, n) == 1;
    written += static_cast<std::size_t>(len);
  }
  if (!ok) throw Error(Errc::kIoError, "AES-GCM decryption setup failed");
  Bytes tag(ciphertext_and_tag.end() - static_cast<std::ptrdiff_t>(kTagBytes), ciphertext_and_tag.end());
  EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagBytes, tag.data());
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + written, &len) != 1) {
    throw Error(Errc::kAuthFailure, "sealed payload failed authentication");
  }
  return out;
}

}  // namespace

ServerKeys server_keygen(Rng& rng) {
  const Scalar x = Scalar::random_nonzero(rng);
  return {x, algebra::PairingContext::standard().gt.pow(x)};
}

// ---------------------------------------------------------------- textbook

Bytes TextbookCiphertext::encode() const {
  ByteWriter w(2 * algebra::kGTBytes);
  w.raw(c1.encode()).raw(c2.encode());
  return std::move(w).take();
}

TextbookCiphertext TextbookCiphertext::decode(ByteView bytes) {
  if (bytes.size() != 2 * algebra::kGTBytes) {
    throw Error(Errc::kMalformedCiphertext, "textbook ciphertext must be two GT elements");
  }
  return {decode_gt(bytes.first(algebra::kGTBytes)), decode_gt(bytes.subspan(algebra::kGTBytes))};
}

TextbookCiphertext encrypt_textbook_with_nonce(const GT& pk, const GT& message, const Scalar& y) {
  const GT s = pk.pow(y);
  return {algebra::PairingContext::standard().gt.pow(y), message * s};
}

TextbookCiphertext encrypt_textbook(const GT& pk, const GT& message, Rng& rng) {
  return encrypt_textbook_with_nonce(pk, message, Scalar::random_nonzero(rng));
}

GT decrypt_textbook(const ServerKeys& sk, const TextbookCiphertext& ct) {
  // s'^-1 = c1^(r - x); r - x is the field negation of x.
  return ct.c2 * ct.c1.pow(-sk.x);
}

// ---------------------------------------------------------------- hybrid

Bytes HybridCiphertext::encode() const {
  ByteWriter w(algebra::kGTBytes + 4 + sealed.size());
  w.raw(c1.encode()).u32(static_cast<std::uint32_t>(sealed.size())).raw(sealed);
  return std::move(w).take();
}

HybridCiphertext HybridCiphertext::decode(ByteView bytes) {
  ByteReader r(bytes, Errc::kMalformedCiphertext);
  HybridCiphertext ct;
  ct.c1 = decode_gt(r.raw(algebra::kGTBytes));
  const std::uint32_t n = r.u32();
  auto body = r.raw(n);
  ct.sealed.assign(body.begin(), body.end());
  r.expect_done();
  if (ct.sealed.size() < kNonceBytes + kTagBytes) {
    throw Error(Errc::kMalformedCiphertext, "sealed body shorter than nonce and tag");
  }
  return ct;
}

HybridCiphertext seal(const GT& pk, ByteView payload, Rng& rng) {
  if (payload.size() > std::numeric_limits<std::uint32_t>::max() - kNonceBytes - kTagBytes) {
    throw Error(Errc::kInvalidArgument, "payload too large to seal");
  }
  const Scalar y = Scalar::random_nonzero(rng);
  HybridCiphertext ct;
  ct.c1 = algebra::PairingContext::standard().gt.pow(y);
  const auto key = derive_key(pk.pow(y));

  std::array<std::uint8_t, kNonceBytes> nonce{};
  rng.fill(nonce);
  const Bytes aad = ct.c1.encode();
  Bytes body = aes_gcm_seal(key, nonce, aad, payload);
  ct.sealed.reserve(kNonceBytes + body.size());
  ct.sealed.assign(nonce.begin(), nonce.end());
  ct.sealed.insert(ct.sealed.end(), body.begin(), body.end());
  return ct;
}

Bytes open(const ServerKeys& sk, const HybridCiphertext& ct) {
  if (ct.sealed.size() < kNonceBytes + kTagBytes) {
    throw Error(Errc::kMalformedCiphertext, "sealed body shorter than nonce and tag");
  }
  const auto key = derive_key(ct.c1.pow(sk.x));
  const ByteView sealed(ct.sealed);
  return aes_gcm_open(key, sealed.first(kNonceBytes), ct.c1.encode(), sealed.subspan(kNonceBytes));
}

}  // namespace gsfl::envelope
