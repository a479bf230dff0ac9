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

#include "mcabe/core.hpp"

namespace mcabe {

struct ValidPeriod {
  std::int64_t start = 0;  // unix seconds, inclusive
  std::int64_t end = 0;    // exclusive

  bool contains(std::int64_t now) const { return start <= now && now < end; }
};

using FilePrivilege = std::pair<std::string, Privilege>;

// TA-issued grant: file ids, validity window, per-(file, privilege)
// signatures, and the public key. The master key never rides in a cert.
struct AuthorizationCert {
  std::vector<std::string> file_ids;
  ValidPeriod valid_period;
  std::map<FilePrivilege, GTElement> signatures;
  std::map<std::string, std::set<Privilege>> privileges;
  std::map<std::string, std::uint64_t> epochs;  // signature epoch per file at issuance
  PublicKey pk;
};

// Cert with signature entries multiplied by pairing(g,g)^{theta*t} and the
// byte metadata sealed under a key derived from the same masking value.
struct MaskedCert {
  std::map<FilePrivilege, GTElement> masked_signatures;
  std::vector<std::uint8_t> sealed_metadata;
};

struct MaskValueRecord {
  std::string dr_id;
  Scalar t;          // TA-secret
  GElement mvalue;   // g^t
  bool revoked = false;
  bool mvalue_delivered = false;  // MValue goes out exactly once
};

// Table III plus the grant ledger the work-list computation needs. Single
// writer (the TA actor); all reads return stable copies or const refs.
class MaskValueTable {
 public:
  // Fresh record for an unknown id; idempotent for an active id; throws
  // RevokedUser for a revoked one.
  const MaskValueRecord& register_dr(const std::string& dr_id, RandomSource& rng);

  const MaskValueRecord* find(const std::string& dr_id) const;

  // Marks the record revoked and returns the (file, privilege) pairs ever
  // granted to the id. Second call is idempotent and returns an empty list.
  std::vector<FilePrivilege> revoke_dr(const std::string& dr_id);

  void record_grant(const std::string& dr_id, const std::string& file_id,
                    const std::set<Privilege>& privileges, ValidPeriod period);

  struct Grant {
    std::string file_id;
    std::set<Privilege> privileges;
    ValidPeriod period;
  };
  const std::vector<Grant>* grants_for(const std::string& dr_id) const;

  void mark_mvalue_delivered(const std::string& dr_id);

  const std::map<std::string, MaskValueRecord>& records() const { return records_; }
  const std::map<std::string, std::vector<Grant>>& ledger() const { return ledger_; }

  // For state restore.
  void restore_record(MaskValueRecord rec);
  void restore_grant(const std::string& dr_id, Grant g);

 private:
  std::map<std::string, MaskValueRecord> records_;
  std::map<std::string, std::vector<Grant>> ledger_;
};

MaskedCert cergen(const MaskValueRecord& record, const PublicKey& pk,
                  const AuthorizationCert& cert, RandomSource& rng);

// Inverse of cergen given the DR's mvalue; throws BadMaskValue when the
// metadata fails to authenticate, and DecodeError on internal inconsistency.
AuthorizationCert unmask_cert(const MaskedCert& mcert, const GElement& mvalue,
                              const PublicKey& pk);

}  // namespace mcabe
