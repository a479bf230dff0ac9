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

#include "mcabe/certs.hpp"

#include <algorithm>

#include "mcabe/dem.hpp"
#include "mcabe/wire.hpp"

namespace mcabe {

namespace {

constexpr std::string_view kCertSealDomain = "mcabe.cert.v1";

std::array<std::uint8_t, 32> cert_seal_key(const GTElement& mask) {
  return derive_key(kCertSealDomain, mask.encode());
}

}  // namespace

const MaskValueRecord& MaskValueTable::register_dr(const std::string& dr_id, RandomSource& rng) {
  auto it = records_.find(dr_id);
  if (it != records_.end()) {
    if (it->second.revoked)
      throw Error(ErrorCode::RevokedUser, dr_id + " is revoked; registration refused");
    return it->second;
  }
  MaskValueRecord rec;
  rec.dr_id = dr_id;
  rec.t = Scalar::random_nonzero(rng);
  rec.mvalue = GElement::generator().pow(rec.t);
  rec.revoked = false;
  return records_.emplace(dr_id, std::move(rec)).first->second;
}

const MaskValueRecord* MaskValueTable::find(const std::string& dr_id) const {
  auto it = records_.find(dr_id);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<FilePrivilege> MaskValueTable::revoke_dr(const std::string& dr_id) {
  auto it = records_.find(dr_id);
  if (it == records_.end())
    throw Error(ErrorCode::UnknownDr, "no mask value record for " + dr_id);
  if (it->second.revoked) return {};
  it->second.revoked = true;

  std::vector<FilePrivilege> work;
  auto grants = ledger_.find(dr_id);
  if (grants != ledger_.end()) {
    for (const Grant& g : grants->second)
      for (Privilege k : g.privileges) work.emplace_back(g.file_id, k);
  }
  std::sort(work.begin(), work.end());
  work.erase(std::unique(work.begin(), work.end()), work.end());
  return work;
}

void MaskValueTable::record_grant(const std::string& dr_id, const std::string& file_id,
                                  const std::set<Privilege>& privileges, ValidPeriod period) {
  Grant g;
  g.file_id = file_id;
  g.privileges = privileges;
  g.period = period;
  ledger_[dr_id].push_back(std::move(g));
}

const std::vector<MaskValueTable::Grant>* MaskValueTable::grants_for(
    const std::string& dr_id) const {
  auto it = ledger_.find(dr_id);
  return it == ledger_.end() ? nullptr : &it->second;
}

void MaskValueTable::mark_mvalue_delivered(const std::string& dr_id) {
  auto it = records_.find(dr_id);
  if (it != records_.end()) it->second.mvalue_delivered = true;
}

void MaskValueTable::restore_record(MaskValueRecord rec) {
  std::string id = rec.dr_id;
  records_.insert_or_assign(std::move(id), std::move(rec));
}

void MaskValueTable::restore_grant(const std::string& dr_id, Grant g) {
  ledger_[dr_id].push_back(std::move(g));
}

MaskedCert cergen(const MaskValueRecord& record, const PublicKey& pk,
                  const AuthorizationCert& cert, RandomSource& rng) {
  if (record.revoked)
    throw Error(ErrorCode::RevokedUser, record.dr_id + " is revoked; no certificate issued");

  GTElement mask = pairing(pk.g_theta, record.mvalue);
  MaskedCert mc;
  for (const auto& [fk, sig] : cert.signatures) mc.masked_signatures.emplace(fk, sig * mask);

  auto metadata = encode_cert_metadata(cert);
  mc.sealed_metadata = aead_seal(cert_seal_key(mask), metadata, {}, rng);
  return mc;
}

AuthorizationCert unmask_cert(const MaskedCert& mcert, const GElement& mvalue,
                              const PublicKey& pk) {
  GTElement mask = pairing(pk.g_theta, mvalue);
  auto metadata = aead_open(cert_seal_key(mask), mcert.sealed_metadata, {});
  if (!metadata)
    throw Error(ErrorCode::BadMaskValue, "certificate metadata failed to authenticate");

  AuthorizationCert cert = decode_cert_metadata(*metadata);
  for (const auto& [fk, masked] : mcert.masked_signatures)
    cert.signatures.emplace(fk, masked / mask);

  for (const auto& [file, privs] : cert.privileges)
    for (Privilege k : privs)
      if (!cert.signatures.count({file, k}))
        throw Error(ErrorCode::DecodeError,
                    "certificate missing signature for granted privilege on " + file);
  return cert;
}

}  // namespace mcabe
