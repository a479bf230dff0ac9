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

#pragma once

#include <filesystem>

#include "mcabe/certs.hpp"

namespace mcabe {

// Envelope layout, byte by byte:
//   [0]    type tag
//   [1]    format version (currently 1)
//   [2..5] body length, unsigned 32-bit little-endian
//   [6..]  body
// Body integers are little-endian; strings and byte strings are length
// prefixed (u32); maps are sorted by key; group elements use the canonical
// encodings documented in algebra.hpp (Scalar 32 B big-endian, GElement 98 B
// compressed pair, GTElement 384 B Fp12 vector).
inline constexpr std::uint8_t kWireVersion = 1;

enum class TypeTag : std::uint8_t {
  Scalar = 0x01,
  GElement = 0x02,
  GTElement = 0x03,
  PublicKey = 0x10,
  MasterKey = 0x11,
  SecretKey = 0x12,
  AccessTree = 0x13,
  Ciphertext = 0x14,
  PrivilegeSignature = 0x15,
  AuthorizationCert = 0x20,
  MaskedCert = 0x21,
  MaskValueRecord = 0x22,
  CertMetadata = 0x23,
  TaState = 0x30,
  DrCredentials = 0x31,
  MsgRequest = 0x40,
  MsgOutsource = 0x41,
  MsgStoreCt = 0x42,
  MsgRegisterSignatures = 0x43,
  MsgSecretKey = 0x44,
  MsgCiphertext = 0x45,
  MsgMaskedCert = 0x46,
  MsgMaskedValue = 0x47,
  MsgApplyRotation = 0x48,
  MsgRefusal = 0x49,
  MsgMaskValue = 0x4A,
};

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void raw(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
  void var_bytes(std::span<const std::uint8_t> b) {
    u32(static_cast<std::uint32_t>(b.size()));
    raw(b);
  }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.insert(buf_.end(), s.begin(), s.end());
  }
  void scalar(const Scalar& s) { raw(s.to_bytes()); }
  void gelem(const GElement& e) { raw(e.encode()); }
  void gtelem(const GTElement& e) { raw(e.encode()); }

  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::vector<std::uint8_t> var_bytes();
  std::string str();
  Scalar scalar();
  GElement gelem();
  GTElement gtelem();

  bool done() const { return pos_ == data_.size(); }
  void expect_done() const;

 private:
  std::span<const std::uint8_t> take(std::size_t n);
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::vector<std::uint8_t> seal_envelope(TypeTag tag, std::vector<std::uint8_t> body);

// Validates version and expected tag, returns the body view.
std::span<const std::uint8_t> open_envelope(std::span<const std::uint8_t> data, TypeTag expected);

// Authoritative TA-side state: keys, mask value table with grant ledger, and
// the per-file signature registry used for cert issuance and rotation.
struct SignatureRegistry {
  std::map<std::string, std::map<Privilege, PrivilegeSignature>> by_file;
  std::map<std::string, std::uint64_t> epochs;
};

struct TaState {
  PublicKey pk;
  MasterKey mk;
  MaskValueTable table;
  SignatureRegistry registry;
};

struct DrCredentials {
  std::string dr_id;
  GElement mvalue;
};

std::vector<std::uint8_t> encode_public_key(const PublicKey& pk);
PublicKey decode_public_key(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_secret_key(const SecretKey& sk);
SecretKey decode_secret_key(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_access_tree(const AccessTree& tree);
AccessTree decode_access_tree(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_ciphertext(const Ciphertext& ct);
Ciphertext decode_ciphertext(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_privilege_signature(const PrivilegeSignature& s);
PrivilegeSignature decode_privilege_signature(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_auth_cert(const AuthorizationCert& cert);
AuthorizationCert decode_auth_cert(std::span<const std::uint8_t> data);

// Metadata half of a masked cert: everything except the signature entries.
std::vector<std::uint8_t> encode_cert_metadata(const AuthorizationCert& cert);
AuthorizationCert decode_cert_metadata(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_masked_cert(const MaskedCert& mc);
MaskedCert decode_masked_cert(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_mask_value_record(const MaskValueRecord& rec);
MaskValueRecord decode_mask_value_record(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_ta_state(const TaState& ta);
TaState decode_ta_state(std::span<const std::uint8_t> data);

std::vector<std::uint8_t> encode_dr_credentials(const DrCredentials& creds);
DrCredentials decode_dr_credentials(std::span<const std::uint8_t> data);

// SSP store: one atomically-replaced record file per file_id under a
// directory; epoch regressions are rejected.
class CiphertextStore {
 public:
  explicit CiphertextStore(std::filesystem::path dir);

  void store(const Ciphertext& ct);
  Ciphertext fetch(const std::string& file_id) const;
  bool exists(const std::string& file_id) const;
  std::uint64_t epoch_of(const std::string& file_id) const;
  void apply_rotation(const std::string& file_id, Privilege k, const GTElement& delta);
  std::vector<std::string> list() const;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path record_path(const std::string& file_id) const;
  void write_record(const Ciphertext& ct);

  std::filesystem::path dir_;
};

}  // namespace mcabe
