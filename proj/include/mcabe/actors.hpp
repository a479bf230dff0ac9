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

#include <functional>
#include <iosfwd>

#include "mcabe/wire.hpp"

namespace mcabe {

// One of the six protocol roles; DR instances carry their id.
struct Party {
  enum class Kind { DataOwner, Esp, Dsp, Ssp, Ta, Dr };

  Kind kind = Kind::DataOwner;
  std::string dr_id;

  static Party data_owner() { return {Kind::DataOwner, ""}; }
  static Party esp() { return {Kind::Esp, ""}; }
  static Party dsp() { return {Kind::Dsp, ""}; }
  static Party ssp() { return {Kind::Ssp, ""}; }
  static Party ta() { return {Kind::Ta, ""}; }
  static Party dr(std::string id) { return {Kind::Dr, std::move(id)}; }

  std::string name() const;

  friend bool operator==(const Party& a, const Party& b) {
    return a.kind == b.kind && a.dr_id == b.dr_id;
  }
  friend bool operator<(const Party& a, const Party& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.dr_id < b.dr_id;
  }
};

struct TranscriptEntry {
  int seq = 0;
  Party from;
  Party to;
  std::string type;
  std::vector<std::uint8_t> bytes;
};

// Append-only record of every delivered protocol message.
class Transcript {
 public:
  void append(Party from, Party to, std::string type, std::vector<std::uint8_t> bytes);
  const std::vector<TranscriptEntry>& entries() const { return entries_; }

  // Line-delimited JSON for offline audit tooling.
  void export_jsonl(std::ostream& out) const;

 private:
  std::vector<TranscriptEntry> entries_;
};

struct AuditReport {
  std::vector<std::string> violations;
  std::vector<std::string> by_design;  // expected capabilities of authorized colluders
  std::vector<std::string> notes;

  bool clean() const { return violations.empty(); }
};

// In-process synchronous message bus over the six roles. Every flow is a
// deterministic function of (state, inputs, randomness source).
class Harness {
 public:
  struct Config {
    std::filesystem::path store_dir;
    std::function<std::int64_t()> clock;
  };

  // Runs Setup and starts from an empty TA state.
  static Harness create(const Config& cfg, RandomSource& rng);

  // Adopts persisted TA state (CLI restart path).
  Harness(TaState ta, const Config& cfg, RandomSource& rng);

  // Data outsourcing: Encrypt_DO at DO, Encrypt_ESP at ESP, store at SSP,
  // signature registration at TA.
  void flow_outsource(const std::string& file_id, std::span<const std::uint8_t> payload,
                      const std::string& policy_text, const std::set<Privilege>& privileges);

  // Data request: revocation check and KeyGen/CerGen at TA, Decrypt_DSP at
  // DSP, Decrypt_DR at DR. Returns the recovered payload.
  std::vector<std::uint8_t> flow_request(const std::string& dr_id, const std::string& file_id,
                                         Privilege k, const std::set<std::string>& attrs);

  // User revocation: mark the table, rotate every granted signature, re-mask
  // the stored ciphertexts.
  void flow_revoke(const std::string& dr_id);

  const MaskValueRecord& register_dr(const std::string& dr_id);
  void grant(const std::string& dr_id, const std::string& file_id,
             const std::set<Privilege>& privileges, ValidPeriod period);

  AuditReport collusion_audit(const std::set<Party>& colluders) const;

  const Transcript& transcript() const { return transcript_; }
  const PublicKey& pk() const { return ta_.pk; }
  TaState& ta() { return ta_; }
  CiphertextStore& store() { return ssp_; }
  std::int64_t now() const { return clock_(); }

  void load_dr_credentials(const DrCredentials& creds);
  std::optional<DrCredentials> dr_credentials(const std::string& dr_id) const;

  // ---- test access (audits and the replay scenario of the revocation
  //      analysis; not part of the protocol surface) ----

  struct FileSecrets {
    GTElement m;
    std::vector<std::uint8_t> payload;
    std::map<Privilege, PrivilegeSignature> signatures;  // as first registered
  };
  const FileSecrets* file_secrets(const std::string& file_id) const;

  struct RequestArtifacts {
    std::string dr_id;
    std::string file_id;
    Privilege k = Privilege::Read;
    SecretKey sk;
    MaskedCert mcert;
    AuthorizationCert cert;
    GTElement masked;
    GTElement expected;  // m * sig_k at request time
  };
  const RequestArtifacts* last_request() const;

  const SetupTrace* setup_trace() const { return trace_ ? &*trace_ : nullptr; }

  const std::vector<PrivilegeSignature>& signature_history() const { return sig_history_; }

  // Drives cached key material and an old certificate against the currently
  // stored (possibly rotated) ciphertext, off the books.
  std::vector<std::uint8_t> replay_request(const RequestArtifacts& cached);

 private:
  Harness(TaState ta, const Config& cfg, RandomSource& rng, std::optional<SetupTrace> trace);

  void send(const Party& from, const Party& to, const char* type,
            std::vector<std::uint8_t> bytes);
  [[noreturn]] void refuse(const Party& from, const std::string& dr_id, ErrorCode code,
                           const std::string& detail);
  AuthorizationCert build_cert(const std::string& dr_id, const std::string& file_id);

  TaState ta_;
  CiphertextStore ssp_;
  std::function<std::int64_t()> clock_;
  RandomSource& rng_;
  Transcript transcript_;
  std::optional<SetupTrace> trace_;

  struct DrLocalState {
    std::optional<GElement> mvalue;
    std::set<FilePrivilege> completed;
  };
  std::map<std::string, DrLocalState> drs_;

  std::map<std::string, FileSecrets> do_secrets_;
  std::vector<PrivilegeSignature> sig_history_;
  std::vector<RequestArtifacts> request_log_;
};

}  // namespace mcabe
