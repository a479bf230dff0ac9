// Copyright 2026 The MCABE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mcabe/dem.hpp"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <cstring>
#include <memory>
#include <stdexcept>

namespace mcabe {

namespace {

constexpr std::size_t kNonceLen = 12;
constexpr std::size_t kTagLen = 16;

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* c) const { EVP_CIPHER_CTX_free(c); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

}  // namespace

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

std::array<std::uint8_t, 32> derive_key(std::string_view domain,
                                        std::span<const std::uint8_t> material) {
  std::vector<std::uint8_t> buf;
  buf.reserve(domain.size() + 1 + material.size());
  buf.insert(buf.end(), domain.begin(), domain.end());
  buf.push_back(0x00);
  buf.insert(buf.end(), material.begin(), material.end());
  return sha256(buf);
}

std::vector<std::uint8_t> aead_seal(const std::array<std::uint8_t, 32>& key,
                                    std::span<const std::uint8_t> plaintext,
                                    std::span<const std::uint8_t> aad, RandomSource& rng) {
  std::vector<std::uint8_t> out(kNonceLen + plaintext.size() + kTagLen);
  rng.fill(std::span<std::uint8_t>(out.data(), kNonceLen));

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), out.data()) != 1)
    throw std::runtime_error("EncryptInit failed");
  int len = 0;
  if (!aad.empty() &&
      EVP_EncryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
    throw std::runtime_error("aad update failed");
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), out.data() + kNonceLen, &len, plaintext.data(),
                        static_cast<int>(plaintext.size())) != 1)
    throw std::runtime_error("encrypt update failed");
  int fin = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), out.data() + kNonceLen + plaintext.size(), &fin) != 1)
    throw std::runtime_error("encrypt final failed");
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, kTagLen,
                          out.data() + kNonceLen + plaintext.size()) != 1)
    throw std::runtime_error("get tag failed");
  return out;
}

std::optional<std::vector<std::uint8_t>> aead_open(const std::array<std::uint8_t, 32>& key,
                                                   std::span<const std::uint8_t> blob,
                                                   std::span<const std::uint8_t> aad) {
  if (blob.size() < kNonceLen + kTagLen) return std::nullopt;
  std::size_t ct_len = blob.size() - kNonceLen - kTagLen;
  std::vector<std::uint8_t> out(ct_len);

  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, key.data(), blob.data()) != 1)
    throw std::runtime_error("DecryptInit failed");
  int len = 0;
  if (!aad.empty() &&
      EVP_DecryptUpdate(ctx.get(), nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
    return std::nullopt;
  if (ct_len > 0 && EVP_DecryptUpdate(ctx.get(), out.data(), &len, blob.data() + kNonceLen,
                                      static_cast<int>(ct_len)) != 1)
    return std::nullopt;
  std::uint8_t tag[kTagLen];
  std::memcpy(tag, blob.data() + kNonceLen + ct_len, kTagLen);
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, kTagLen, tag) != 1)
    throw std::runtime_error("set tag failed");
  int fin = 0;
  if (EVP_DecryptFinal_ex(ctx.get(), out.data() + len, &fin) != 1) return std::nullopt;
  return out;
}

}  // namespace mcabe
