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

#include "mcabe/wire.hpp"

#include <algorithm>
#include <fstream>

#include "mcabe/dem.hpp"

namespace mcabe {

namespace {

[[noreturn]] void decode_fail(const std::string& what) {
  throw Error(ErrorCode::DecodeError, what);
}

Privilege privilege_from_u8(std::uint8_t v) {
  if (v > 2) decode_fail("bad privilege byte");
  return static_cast<Privilege>(v);
}

std::string hex(std::span<const std::uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (std::uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

}  // namespace

std::span<const std::uint8_t> ByteReader::take(std::size_t n) {
  if (data_.size() - pos_ < n) decode_fail("truncated input");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t ByteReader::u8() { return take(1)[0]; }

std::uint32_t ByteReader::u32() {
  auto b = take(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t ByteReader::u64() {
  auto b = take(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::vector<std::uint8_t> ByteReader::var_bytes() {
  std::uint32_t n = u32();
  auto b = take(n);
  return std::vector<std::uint8_t>(b.begin(), b.end());
}

std::string ByteReader::str() {
  std::uint32_t n = u32();
  auto b = take(n);
  return std::string(b.begin(), b.end());
}

Scalar ByteReader::scalar() {
  auto b = take(kScalarBytes);
  auto s = Scalar::from_bytes(std::span<const std::uint8_t, kScalarBytes>(b.data(), kScalarBytes));
  if (!s) decode_fail("scalar out of range");
  return *s;
}

GElement ByteReader::gelem() {
  auto b = take(kGElementBytes);
  auto e =
      GElement::decode(std::span<const std::uint8_t, kGElementBytes>(b.data(), kGElementBytes));
  if (!e) decode_fail("invalid group element");
  return *e;
}

GTElement ByteReader::gtelem() {
  auto b = take(kGTElementBytes);
  auto e = GTElement::decode(
      std::span<const std::uint8_t, kGTElementBytes>(b.data(), kGTElementBytes));
  if (!e) decode_fail("invalid target-group element");
  return *e;
}

void ByteReader::expect_done() const {
  if (!done()) decode_fail("trailing bytes");
}

std::vector<std::uint8_t> seal_envelope(TypeTag tag, std::vector<std::uint8_t> body) {
  std::vector<std::uint8_t> out;
  out.reserve(body.size() + 6);
  out.push_back(static_cast<std::uint8_t>(tag));
  out.push_back(kWireVersion);
  std::uint32_t n = static_cast<std::uint32_t>(body.size());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

std::span<const std::uint8_t> open_envelope(std::span<const std::uint8_t> data, TypeTag expected) {
  if (data.size() < 6) decode_fail("envelope too short");
  if (data[0] != static_cast<std::uint8_t>(expected)) decode_fail("unexpected type tag");
  if (data[1] != kWireVersion) decode_fail("unsupported format version");
  std::uint32_t n = 0;
  for (int i = 3; i >= 0; --i) n = (n << 8) | data[2 + i];
  if (data.size() - 6 != n) decode_fail("envelope length mismatch");
  return data.subspan(6, n);
}

namespace {

void write_public_key(ByteWriter& w, const PublicKey& pk) {
  w.gelem(pk.g);
  w.gelem(pk.h);
  w.gtelem(pk.e_gg_alpha);
  w.gelem(pk.g_eps);
  w.gelem(pk.g_theta);
}

PublicKey read_public_key(ByteReader& r) {
  PublicKey pk;
  pk.g = r.gelem();
  pk.h = r.gelem();
  pk.e_gg_alpha = r.gtelem();
  pk.g_eps = r.gelem();
  pk.g_theta = r.gelem();
  return pk;
}

void write_privilege_signature(ByteWriter& w, const PrivilegeSignature& s) {
  w.u8(static_cast<std::uint8_t>(s.k));
  w.scalar(s.v);
  w.gtelem(s.sig);
}

PrivilegeSignature read_privilege_signature(ByteReader& r) {
  PrivilegeSignature s;
  s.k = privilege_from_u8(r.u8());
  s.v = r.scalar();
  s.sig = r.gtelem();
  return s;
}

void write_cert_body(ByteWriter& w, const AuthorizationCert& cert, bool with_signatures) {
  w.u32(static_cast<std::uint32_t>(cert.file_ids.size()));
  for (const auto& f : cert.file_ids) w.str(f);
  w.i64(cert.valid_period.start);
  w.i64(cert.valid_period.end);
  w.u32(static_cast<std::uint32_t>(cert.privileges.size()));
  for (const auto& [file, privs] : cert.privileges) {
    w.str(file);
    w.u32(static_cast<std::uint32_t>(privs.size()));
    for (Privilege k : privs) w.u8(static_cast<std::uint8_t>(k));
  }
  w.u32(static_cast<std::uint32_t>(cert.epochs.size()));
  for (const auto& [file, epoch] : cert.epochs) {
    w.str(file);
    w.u64(epoch);
  }
  write_public_key(w, cert.pk);
  if (with_signatures) {
    w.u32(static_cast<std::uint32_t>(cert.signatures.size()));
    for (const auto& [fk, sig] : cert.signatures) {
      w.str(fk.first);
      w.u8(static_cast<std::uint8_t>(fk.second));
      w.gtelem(sig);
    }
  }
}

AuthorizationCert read_cert_body(ByteReader& r, bool with_signatures) {
  AuthorizationCert cert;
  std::uint32_t nfiles = r.u32();
  for (std::uint32_t i = 0; i < nfiles; ++i) cert.file_ids.push_back(r.str());
  cert.valid_period.start = r.i64();
  cert.valid_period.end = r.i64();
  std::uint32_t nprivs = r.u32();
  for (std::uint32_t i = 0; i < nprivs; ++i) {
    std::string file = r.str();
    std::uint32_t n = r.u32();
    std::set<Privilege> privs;
    for (std::uint32_t j = 0; j < n; ++j) privs.insert(privilege_from_u8(r.u8()));
    cert.privileges.emplace(std::move(file), std::move(privs));
  }
  std::uint32_t nepochs = r.u32();
  for (std::uint32_t i = 0; i < nepochs; ++i) {
    std::string file = r.str();
    cert.epochs.emplace(std::move(file), r.u64());
  }
  cert.pk = read_public_key(r);
  if (with_signatures) {
    std::uint32_t nsigs = r.u32();
    for (std::uint32_t i = 0; i < nsigs; ++i) {
      std::string file = r.str();
      Privilege k = privilege_from_u8(r.u8());
      cert.signatures.emplace(FilePrivilege{std::move(file), k}, r.gtelem());
    }
  }
  return cert;
}

}  // namespace

std::vector<std::uint8_t> encode_public_key(const PublicKey& pk) {
  ByteWriter w;
  write_public_key(w, pk);
  return seal_envelope(TypeTag::PublicKey, w.take());
}

PublicKey decode_public_key(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::PublicKey));
  PublicKey pk = read_public_key(r);
  r.expect_done();
  return pk;
}

std::vector<std::uint8_t> encode_secret_key(const SecretKey& sk) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(sk.attrs.size()));
  for (const auto& a : sk.attrs) w.str(a);
  w.gelem(sk.d);
  w.u32(static_cast<std::uint32_t>(sk.per_attr.size()));
  for (const auto& [attr, ak] : sk.per_attr) {
    w.str(attr);
    w.gelem(ak.d_j);
    w.gelem(ak.d_j_prime);
  }
  return seal_envelope(TypeTag::SecretKey, w.take());
}

SecretKey decode_secret_key(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::SecretKey));
  SecretKey sk;
  std::uint32_t nattrs = r.u32();
  for (std::uint32_t i = 0; i < nattrs; ++i) sk.attrs.insert(r.str());
  sk.d = r.gelem();
  std::uint32_t nkeys = r.u32();
  for (std::uint32_t i = 0; i < nkeys; ++i) {
    std::string attr = r.str();
    SecretKeyAttr ak;
    ak.d_j = r.gelem();
    ak.d_j_prime = r.gelem();
    sk.per_attr.emplace(std::move(attr), ak);
  }
  r.expect_done();
  if (sk.attrs.size() != sk.per_attr.size()) decode_fail("secret key attr mismatch");
  return sk;
}

std::vector<std::uint8_t> encode_access_tree(const AccessTree& tree) {
  ByteWriter w;
  w.str(tree.pretty());
  return seal_envelope(TypeTag::AccessTree, w.take());
}

AccessTree decode_access_tree(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::AccessTree));
  std::string text = r.str();
  r.expect_done();
  return AccessTree::parse(text);
}

std::vector<std::uint8_t> encode_ciphertext(const Ciphertext& ct) {
  ByteWriter w;
  w.str(ct.file_id);
  w.u64(ct.epoch);
  w.str(ct.tree.pretty());
  w.gelem(ct.c);
  w.u32(static_cast<std::uint32_t>(ct.c_tilde.size()));
  for (const auto& [k, v] : ct.c_tilde) {
    w.u8(static_cast<std::uint8_t>(k));
    w.gtelem(v);
  }
  w.u32(static_cast<std::uint32_t>(ct.leaves.size()));
  for (const auto& [node_id, leaf] : ct.leaves) {
    w.u32(static_cast<std::uint32_t>(node_id));
    w.gelem(leaf.c_y);
    w.gelem(leaf.c_y_prime);
  }
  w.var_bytes(ct.sealed_payload);
  return seal_envelope(TypeTag::Ciphertext, w.take());
}

Ciphertext decode_ciphertext(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::Ciphertext));
  Ciphertext ct;
  ct.file_id = r.str();
  ct.epoch = r.u64();
  ct.tree = AccessTree::parse(r.str());
  ct.c = r.gelem();
  std::uint32_t nmask = r.u32();
  for (std::uint32_t i = 0; i < nmask; ++i) {
    Privilege k = privilege_from_u8(r.u8());
    ct.c_tilde.emplace(k, r.gtelem());
  }
  std::uint32_t nleaves = r.u32();
  for (std::uint32_t i = 0; i < nleaves; ++i) {
    int node_id = static_cast<int>(r.u32());
    CiphertextLeaf leaf;
    leaf.c_y = r.gelem();
    leaf.c_y_prime = r.gelem();
    ct.leaves.emplace(node_id, leaf);
  }
  ct.sealed_payload = r.var_bytes();
  r.expect_done();
  if (ct.leaves.size() != static_cast<std::size_t>(ct.tree.leaf_count()))
    decode_fail("ciphertext leaf count mismatch");
  for (const PolicyNode* leaf : ct.tree.leaves())
    if (!ct.leaves.count(leaf->node_id)) decode_fail("ciphertext missing leaf component");
  return ct;
}

std::vector<std::uint8_t> encode_privilege_signature(const PrivilegeSignature& s) {
  ByteWriter w;
  write_privilege_signature(w, s);
  return seal_envelope(TypeTag::PrivilegeSignature, w.take());
}

PrivilegeSignature decode_privilege_signature(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::PrivilegeSignature));
  PrivilegeSignature s = read_privilege_signature(r);
  r.expect_done();
  return s;
}

std::vector<std::uint8_t> encode_auth_cert(const AuthorizationCert& cert) {
  ByteWriter w;
  write_cert_body(w, cert, true);
  return seal_envelope(TypeTag::AuthorizationCert, w.take());
}

AuthorizationCert decode_auth_cert(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::AuthorizationCert));
  AuthorizationCert cert = read_cert_body(r, true);
  r.expect_done();
  return cert;
}

std::vector<std::uint8_t> encode_cert_metadata(const AuthorizationCert& cert) {
  ByteWriter w;
  write_cert_body(w, cert, false);
  return seal_envelope(TypeTag::CertMetadata, w.take());
}

AuthorizationCert decode_cert_metadata(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::CertMetadata));
  AuthorizationCert cert = read_cert_body(r, false);
  r.expect_done();
  return cert;
}

std::vector<std::uint8_t> encode_masked_cert(const MaskedCert& mc) {
  ByteWriter w;
  w.u32(static_cast<std::uint32_t>(mc.masked_signatures.size()));
  for (const auto& [fk, sig] : mc.masked_signatures) {
    w.str(fk.first);
    w.u8(static_cast<std::uint8_t>(fk.second));
    w.gtelem(sig);
  }
  w.var_bytes(mc.sealed_metadata);
  return seal_envelope(TypeTag::MaskedCert, w.take());
}

MaskedCert decode_masked_cert(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::MaskedCert));
  MaskedCert mc;
  std::uint32_t n = r.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string file = r.str();
    Privilege k = privilege_from_u8(r.u8());
    mc.masked_signatures.emplace(FilePrivilege{std::move(file), k}, r.gtelem());
  }
  mc.sealed_metadata = r.var_bytes();
  r.expect_done();
  return mc;
}

std::vector<std::uint8_t> encode_mask_value_record(const MaskValueRecord& rec) {
  ByteWriter w;
  w.str(rec.dr_id);
  w.scalar(rec.t);
  w.gelem(rec.mvalue);
  w.u8(rec.revoked ? 1 : 0);
  w.u8(rec.mvalue_delivered ? 1 : 0);
  return seal_envelope(TypeTag::MaskValueRecord, w.take());
}

MaskValueRecord decode_mask_value_record(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::MaskValueRecord));
  MaskValueRecord rec;
  rec.dr_id = r.str();
  rec.t = r.scalar();
  rec.mvalue = r.gelem();
  rec.revoked = r.u8() != 0;
  rec.mvalue_delivered = r.u8() != 0;
  r.expect_done();
  return rec;
}

std::vector<std::uint8_t> encode_ta_state(const TaState& ta) {
  ByteWriter w;
  write_public_key(w, ta.pk);
  w.scalar(ta.mk.beta);
  w.gelem(ta.mk.g_alpha);

  const auto& records = ta.table.records();
  w.u32(static_cast<std::uint32_t>(records.size()));
  for (const auto& [id, rec] : records) {
    w.str(rec.dr_id);
    w.scalar(rec.t);
    w.gelem(rec.mvalue);
    w.u8(rec.revoked ? 1 : 0);
    w.u8(rec.mvalue_delivered ? 1 : 0);
  }

  const auto& ledger = ta.table.ledger();
  w.u32(static_cast<std::uint32_t>(ledger.size()));
  for (const auto& [dr_id, grants] : ledger) {
    w.str(dr_id);
    w.u32(static_cast<std::uint32_t>(grants.size()));
    for (const auto& g : grants) {
      w.str(g.file_id);
      w.u32(static_cast<std::uint32_t>(g.privileges.size()));
      for (Privilege k : g.privileges) w.u8(static_cast<std::uint8_t>(k));
      w.i64(g.period.start);
      w.i64(g.period.end);
    }
  }

  w.u32(static_cast<std::uint32_t>(ta.registry.by_file.size()));
  for (const auto& [file, sigs] : ta.registry.by_file) {
    w.str(file);
    w.u64(ta.registry.epochs.at(file));
    w.u32(static_cast<std::uint32_t>(sigs.size()));
    for (const auto& [k, sig] : sigs) write_privilege_signature(w, sig);
  }
  return seal_envelope(TypeTag::TaState, w.take());
}

TaState decode_ta_state(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::TaState));
  TaState ta;
  ta.pk = read_public_key(r);
  ta.mk.beta = r.scalar();
  ta.mk.g_alpha = r.gelem();

  std::uint32_t nrecords = r.u32();
  for (std::uint32_t i = 0; i < nrecords; ++i) {
    MaskValueRecord rec;
    rec.dr_id = r.str();
    rec.t = r.scalar();
    rec.mvalue = r.gelem();
    rec.revoked = r.u8() != 0;
    rec.mvalue_delivered = r.u8() != 0;
    ta.table.restore_record(std::move(rec));
  }

  std::uint32_t nledger = r.u32();
  for (std::uint32_t i = 0; i < nledger; ++i) {
    std::string dr_id = r.str();
    std::uint32_t ngrants = r.u32();
    for (std::uint32_t j = 0; j < ngrants; ++j) {
      MaskValueTable::Grant g;
      g.file_id = r.str();
      std::uint32_t nprivs = r.u32();
      for (std::uint32_t k = 0; k < nprivs; ++k) g.privileges.insert(privilege_from_u8(r.u8()));
      g.period.start = r.i64();
      g.period.end = r.i64();
      ta.table.restore_grant(dr_id, std::move(g));
    }
  }

  std::uint32_t nfiles = r.u32();
  for (std::uint32_t i = 0; i < nfiles; ++i) {
    std::string file = r.str();
    std::uint64_t epoch = r.u64();
    std::uint32_t nsigs = r.u32();
    std::map<Privilege, PrivilegeSignature> sigs;
    for (std::uint32_t j = 0; j < nsigs; ++j) {
      PrivilegeSignature s = read_privilege_signature(r);
      sigs.emplace(s.k, std::move(s));
    }
    ta.registry.epochs.emplace(file, epoch);
    ta.registry.by_file.emplace(std::move(file), std::move(sigs));
  }
  r.expect_done();
  return ta;
}

std::vector<std::uint8_t> encode_dr_credentials(const DrCredentials& creds) {
  ByteWriter w;
  w.str(creds.dr_id);
  w.gelem(creds.mvalue);
  return seal_envelope(TypeTag::DrCredentials, w.take());
}

DrCredentials decode_dr_credentials(std::span<const std::uint8_t> data) {
  ByteReader r(open_envelope(data, TypeTag::DrCredentials));
  DrCredentials creds;
  creds.dr_id = r.str();
  creds.mvalue = r.gelem();
  r.expect_done();
  return creds;
}

CiphertextStore::CiphertextStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(ErrorCode::StorageError, "cannot create store directory: " + ec.message());
}

std::filesystem::path CiphertextStore::record_path(const std::string& file_id) const {
  std::vector<std::uint8_t> id(file_id.begin(), file_id.end());
  return dir_ / ("ct-" + hex(sha256(id)).substr(0, 32) + ".bin");
}

void CiphertextStore::write_record(const Ciphertext& ct) {
  auto bytes = encode_ciphertext(ct);
  auto final_path = record_path(ct.file_id);
  auto tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::StorageError, "cannot open temp record for write");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::StorageError, "short write to temp record");
  }
  std::error_code ec;
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw Error(ErrorCode::StorageError, "atomic rename failed: " + ec.message());
}

void CiphertextStore::store(const Ciphertext& ct) {
  if (exists(ct.file_id)) {
    std::uint64_t current = epoch_of(ct.file_id);
    if (ct.epoch < current)
      throw Error(ErrorCode::EpochRegression,
                  "store of epoch " + std::to_string(ct.epoch) + " over epoch " +
                      std::to_string(current));
  }
  write_record(ct);
}

bool CiphertextStore::exists(const std::string& file_id) const {
  return std::filesystem::exists(record_path(file_id));
}

Ciphertext CiphertextStore::fetch(const std::string& file_id) const {
  auto path = record_path(file_id);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::UnknownFile, "no stored ciphertext for " + file_id);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  Ciphertext ct = decode_ciphertext(bytes);
  if (ct.file_id != file_id) throw Error(ErrorCode::StorageError, "record file_id mismatch");
  return ct;
}

std::uint64_t CiphertextStore::epoch_of(const std::string& file_id) const {
  return fetch(file_id).epoch;
}

void CiphertextStore::apply_rotation(const std::string& file_id, Privilege k,
                                     const GTElement& delta) {
  Ciphertext ct = fetch(file_id);
  auto it = ct.c_tilde.find(k);
  if (it == ct.c_tilde.end())
    throw Error(ErrorCode::UnknownPrivilege,
                std::string("no masked component for ") + privilege_name(k));
  it->second = it->second * delta;
  ct.epoch += 1;
  write_record(ct);
}

std::vector<std::string> CiphertextStore::list() const {
  std::vector<std::string> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir_)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (name.rfind("ct-", 0) != 0 || entry.path().extension() != ".bin") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    out.push_back(decode_ciphertext(bytes).file_id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mcabe
