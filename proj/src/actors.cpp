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

#include "mcabe/actors.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace mcabe {

namespace {

std::string to_hex(std::span<const std::uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (std::uint8_t c : b) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

bool contains_bytes(std::span<const std::uint8_t> haystack,
                    std::span<const std::uint8_t> needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

// Payload fragments shorter than this are too likely to occur by chance for
// a byte-scan to mean anything.
constexpr std::size_t kMinScanLength = 16;

}  // namespace

std::string Party::name() const {
  switch (kind) {
    case Kind::DataOwner: return "DO";
    case Kind::Esp: return "ESP";
    case Kind::Dsp: return "DSP";
    case Kind::Ssp: return "SSP";
    case Kind::Ta: return "TA";
    case Kind::Dr: return "DR(" + dr_id + ")";
  }
  return "?";
}

void Transcript::append(Party from, Party to, std::string type, std::vector<std::uint8_t> bytes) {
  TranscriptEntry e;
  e.seq = static_cast<int>(entries_.size());
  e.from = std::move(from);
  e.to = std::move(to);
  e.type = std::move(type);
  e.bytes = std::move(bytes);
  entries_.push_back(std::move(e));
}

void Transcript::export_jsonl(std::ostream& out) const {
  for (const auto& e : entries_) {
    nlohmann::json line = {
        {"seq", e.seq},         {"from", e.from.name()},          {"to", e.to.name()},
        {"type", e.type},       {"bytes_hex", to_hex(e.bytes)},
    };
    out << line.dump() << '\n';
  }
}

Harness Harness::create(const Config& cfg, RandomSource& rng) {
  SetupTrace trace;
  auto [pk, mk] = setup_traced(rng, trace);
  TaState ta;
  ta.pk = pk;
  ta.mk = mk;
  return Harness(std::move(ta), cfg, rng, trace);
}

Harness::Harness(TaState ta, const Config& cfg, RandomSource& rng)
    : Harness(std::move(ta), cfg, rng, std::nullopt) {}

Harness::Harness(TaState ta, const Config& cfg, RandomSource& rng,
                 std::optional<SetupTrace> trace)
    : ta_(std::move(ta)), ssp_(cfg.store_dir), clock_(cfg.clock), rng_(rng),
      trace_(std::move(trace)) {
  if (!clock_) throw Error(ErrorCode::InvalidArgument, "harness needs a clock");
}

void Harness::send(const Party& from, const Party& to, const char* type,
                   std::vector<std::uint8_t> bytes) {
  transcript_.append(from, to, type, std::move(bytes));
}

void Harness::refuse(const Party& from, const std::string& dr_id, ErrorCode code,
                     const std::string& detail) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(code));
  w.str(error_code_name(code));
  send(from, Party::dr(dr_id), "Refusal", seal_envelope(TypeTag::MsgRefusal, w.take()));
  throw Error(code, detail);
}

void Harness::flow_outsource(const std::string& file_id, std::span<const std::uint8_t> payload,
                             const std::string& policy_text,
                             const std::set<Privilege>& privileges) {
  AccessTree tree = AccessTree::parse(policy_text);
  std::uint64_t epoch = ssp_.exists(file_id) ? ssp_.epoch_of(file_id) + 1 : 0;

  // DO: sample the KEM value, sign each privilege, mask.
  GTElement m = GTElement::random_nonidentity(rng_);
  std::map<Privilege, PrivilegeSignature> signatures;
  for (Privilege k : privileges) signatures.emplace(k, make_signature(ta_.pk, k, rng_));
  std::vector<std::uint8_t> sealed = seal_payload(m, file_id, payload, rng_);
  MaskedMessage mm = encrypt_do(ta_.pk, m, privileges, signatures, rng_);

  {
    ByteWriter w;
    w.str(file_id);
    w.scalar(mm.s);
    w.str(tree.pretty());
    w.u32(static_cast<std::uint32_t>(mm.c_tilde.size()));
    for (const auto& [k, v] : mm.c_tilde) {
      w.u8(static_cast<std::uint8_t>(k));
      w.gtelem(v);
    }
    w.var_bytes(sealed);
    send(Party::data_owner(), Party::esp(), "Outsource",
         seal_envelope(TypeTag::MsgOutsource, w.take()));
  }

  // ESP: tree encryption, then storage at SSP.
  Ciphertext ct = encrypt_esp(ta_.pk, mm.s, tree, mm, file_id, epoch, sealed, rng_);
  send(Party::esp(), Party::ssp(), "StoreCt",
       seal_envelope(TypeTag::MsgStoreCt, encode_ciphertext(ct)));
  ssp_.store(ct);

  // DO -> TA: signature registration (v_k stays between the two of them).
  {
    ByteWriter w;
    w.str(file_id);
    w.u64(epoch);
    w.u32(static_cast<std::uint32_t>(signatures.size()));
    for (const auto& [k, sig] : signatures) {
      w.u8(static_cast<std::uint8_t>(sig.k));
      w.scalar(sig.v);
      w.gtelem(sig.sig);
    }
    send(Party::data_owner(), Party::ta(), "RegisterSignatures",
         seal_envelope(TypeTag::MsgRegisterSignatures, w.take()));
  }
  ta_.registry.by_file[file_id] = signatures;
  ta_.registry.epochs[file_id] = epoch;

  FileSecrets secrets;
  secrets.m = m;
  secrets.payload.assign(payload.begin(), payload.end());
  secrets.signatures = signatures;
  do_secrets_.insert_or_assign(file_id, std::move(secrets));
  for (const auto& [k, sig] : signatures) sig_history_.push_back(sig);
}

const MaskValueRecord& Harness::register_dr(const std::string& dr_id) {
  const MaskValueRecord& rec = ta_.table.register_dr(dr_id, rng_);
  if (!rec.mvalue_delivered) {
    ByteWriter w;
    w.gelem(rec.mvalue);
    send(Party::ta(), Party::dr(dr_id), "MaskValue",
         seal_envelope(TypeTag::MsgMaskValue, w.take()));
    drs_[dr_id].mvalue = rec.mvalue;
    ta_.table.mark_mvalue_delivered(dr_id);
  }
  return rec;
}

void Harness::grant(const std::string& dr_id, const std::string& file_id,
                    const std::set<Privilege>& privileges, ValidPeriod period) {
  auto file_sigs = ta_.registry.by_file.find(file_id);
  if (file_sigs == ta_.registry.by_file.end())
    throw Error(ErrorCode::UnknownFile, "no signatures registered for " + file_id);
  for (Privilege k : privileges)
    if (!file_sigs->second.count(k))
      throw Error(ErrorCode::UnknownPrivilege,
                  std::string(privilege_name(k)) + " was not encrypted for on " + file_id);
  if (period.start >= period.end)
    throw Error(ErrorCode::InvalidArgument, "grant validity window is empty");
  ta_.table.record_grant(dr_id, file_id, privileges, period);
}

AuthorizationCert Harness::build_cert(const std::string& dr_id, const std::string& file_id) {
  AuthorizationCert cert;
  cert.pk = ta_.pk;
  cert.file_ids.push_back(file_id);

  std::set<Privilege> granted;
  std::int64_t start = 0, end = 0;
  if (const auto* grants = ta_.table.grants_for(dr_id)) {
    bool first = true;
    for (const auto& g : *grants) {
      if (g.file_id != file_id) continue;
      granted.insert(g.privileges.begin(), g.privileges.end());
      if (first) {
        start = g.period.start;
        end = g.period.end;
        first = false;
      } else {
        start = std::max(start, g.period.start);
        end = std::min(end, g.period.end);
      }
    }
  }
  if (granted.empty()) {
    // Nothing granted: an empty cert valid right now, so the privilege
    // lookup (not the clock) is what fails downstream.
    cert.valid_period = {clock_(), clock_() + 1};
    return cert;
  }
  cert.valid_period = {start, end};
  cert.privileges.emplace(file_id, granted);
  auto file_sigs = ta_.registry.by_file.find(file_id);
  if (file_sigs != ta_.registry.by_file.end()) {
    for (Privilege k : granted) {
      auto sig = file_sigs->second.find(k);
      if (sig != file_sigs->second.end())
        cert.signatures.emplace(FilePrivilege{file_id, k}, sig->second.sig);
    }
    cert.epochs.emplace(file_id, ta_.registry.epochs.at(file_id));
  }
  return cert;
}

std::vector<std::uint8_t> Harness::flow_request(const std::string& dr_id,
                                                const std::string& file_id, Privilege k,
                                                const std::set<std::string>& attrs) {
  Party dr = Party::dr(dr_id);

  // DR -> SSP -> TA: the request travels through the storage provider.
  std::vector<std::uint8_t> request_bytes;
  {
    ByteWriter w;
    w.str(dr_id);
    w.str(file_id);
    w.u8(static_cast<std::uint8_t>(k));
    w.u32(static_cast<std::uint32_t>(attrs.size()));
    for (const auto& a : attrs) w.str(a);
    request_bytes = seal_envelope(TypeTag::MsgRequest, w.take());
  }
  send(dr, Party::ssp(), "Request", request_bytes);
  send(Party::ssp(), Party::ta(), "Request", request_bytes);

  // TA: revocation gate before any key material moves.
  const MaskValueRecord* rec = ta_.table.find(dr_id);
  if (rec && rec->revoked)
    refuse(Party::ta(), dr_id, ErrorCode::RevokedUser, dr_id + " is marked revoked");
  if (!rec) rec = &ta_.table.register_dr(dr_id, rng_);

  // TA: expired grants are refused at request time.
  AuthorizationCert cert = build_cert(dr_id, file_id);
  if (!cert.privileges.empty() && !cert.valid_period.contains(clock_()))
    refuse(Party::ta(), dr_id, ErrorCode::Expired,
           "grant for " + dr_id + " on " + file_id + " is outside its validity window");

  // TA -> DSP: fresh attribute key.
  SecretKey sk = keygen(ta_.pk, ta_.mk, attrs, rng_);
  {
    ByteWriter w;
    w.str(dr_id);
    w.var_bytes(encode_secret_key(sk));
    send(Party::ta(), Party::dsp(), "SecretKey",
         seal_envelope(TypeTag::MsgSecretKey, w.take()));
  }

  // TA -> DR: masked certificate, plus the mask value on first contact.
  MaskedCert mcert = cergen(*rec, ta_.pk, cert, rng_);
  {
    bool deliver_mvalue = !rec->mvalue_delivered;
    ByteWriter w;
    w.var_bytes(encode_masked_cert(mcert));
    w.u8(deliver_mvalue ? 1 : 0);
    if (deliver_mvalue) w.gelem(rec->mvalue);
    send(Party::ta(), dr, "MaskedCert", seal_envelope(TypeTag::MsgMaskedCert, w.take()));
    if (deliver_mvalue) {
      drs_[dr_id].mvalue = rec->mvalue;
      ta_.table.mark_mvalue_delivered(dr_id);
    }
  }

  // SSP -> DSP: the stored ciphertext.
  if (!ssp_.exists(file_id))
    refuse(Party::ssp(), dr_id, ErrorCode::UnknownFile, "no stored ciphertext for " + file_id);
  Ciphertext ct = ssp_.fetch(file_id);
  send(Party::ssp(), Party::dsp(), "Ciphertext",
       seal_envelope(TypeTag::MsgCiphertext, encode_ciphertext(ct)));

  // DSP: tree decryption.
  std::optional<GTElement> masked = decrypt_dsp(sk, ct, k);
  if (!masked)
    refuse(Party::dsp(), dr_id, ErrorCode::NotSatisfied,
           "attributes do not satisfy the policy of " + file_id);
  {
    ByteWriter w;
    w.str(file_id);
    w.u8(static_cast<std::uint8_t>(k));
    w.u64(ct.epoch);
    w.gtelem(*masked);
    w.var_bytes(ct.sealed_payload);
    send(Party::dsp(), dr, "MaskedValue", seal_envelope(TypeTag::MsgMaskedValue, w.take()));
  }

  // DR: unmask the certificate, strip the signature, open the payload.
  auto& local = drs_[dr_id];
  if (!local.mvalue)
    throw Error(ErrorCode::BadMaskValue, dr_id + " holds no mask value (credentials lost?)");
  AuthorizationCert unmasked = unmask_cert(mcert, *local.mvalue, ta_.pk);
  Message msg = decrypt_dr(*masked, unmasked, k, file_id, ct.sealed_payload, clock_());

  local.completed.insert({file_id, k});
  RequestArtifacts log;
  log.dr_id = dr_id;
  log.file_id = file_id;
  log.k = k;
  log.sk = sk;
  log.mcert = mcert;
  log.cert = unmasked;
  log.masked = *masked;
  auto secrets = do_secrets_.find(file_id);
  if (secrets != do_secrets_.end())
    log.expected = secrets->second.m * ta_.registry.by_file.at(file_id).at(k).sig;
  request_log_.push_back(std::move(log));
  return msg.payload;
}

void Harness::flow_revoke(const std::string& dr_id) {
  std::vector<FilePrivilege> work = ta_.table.revoke_dr(dr_id);
  for (const auto& [file_id, k] : work) {
    auto file_sigs = ta_.registry.by_file.find(file_id);
    if (file_sigs == ta_.registry.by_file.end()) continue;
    auto sig = file_sigs->second.find(k);
    if (sig == file_sigs->second.end()) continue;

    auto [fresh, delta] = rotate_signature(ta_.pk, sig->second, rng_);
    sig->second = fresh;
    sig_history_.push_back(fresh);
    ta_.registry.epochs[file_id] += 1;

    ByteWriter w;
    w.str(file_id);
    w.u8(static_cast<std::uint8_t>(k));
    w.gtelem(delta);
    send(Party::ta(), Party::ssp(), "ApplyRotation",
         seal_envelope(TypeTag::MsgApplyRotation, w.take()));
    if (ssp_.exists(file_id)) ssp_.apply_rotation(file_id, k, delta);
  }
}

void Harness::load_dr_credentials(const DrCredentials& creds) {
  drs_[creds.dr_id].mvalue = creds.mvalue;
}

std::optional<DrCredentials> Harness::dr_credentials(const std::string& dr_id) const {
  auto it = drs_.find(dr_id);
  if (it == drs_.end() || !it->second.mvalue) return std::nullopt;
  return DrCredentials{dr_id, *it->second.mvalue};
}

const Harness::FileSecrets* Harness::file_secrets(const std::string& file_id) const {
  auto it = do_secrets_.find(file_id);
  return it == do_secrets_.end() ? nullptr : &it->second;
}

const Harness::RequestArtifacts* Harness::last_request() const {
  return request_log_.empty() ? nullptr : &request_log_.back();
}

std::vector<std::uint8_t> Harness::replay_request(const RequestArtifacts& cached) {
  Ciphertext ct = ssp_.fetch(cached.file_id);
  std::optional<GTElement> masked = decrypt_dsp(cached.sk, ct, cached.k);
  if (!masked)
    throw Error(ErrorCode::NotSatisfied, "cached key no longer satisfies the policy");
  Message msg =
      decrypt_dr(*masked, cached.cert, cached.k, cached.file_id, ct.sealed_payload, clock_());
  return msg.payload;
}

AuditReport Harness::collusion_audit(const std::set<Party>& colluders) const {
  AuditReport report;

  std::vector<const TranscriptEntry*> received;
  for (const auto& e : transcript_.entries())
    if (colluders.count(e.to)) received.push_back(&e);
  report.notes.push_back("colluders received " + std::to_string(received.size()) + " of " +
                         std::to_string(transcript_.entries().size()) + " transcript messages");

  // Byte-scan: the KEM value and payload of every outsourced file must be
  // absent from everything the colluders ever received.
  for (const auto& [file_id, secrets] : do_secrets_) {
    auto m_bytes = secrets.m.encode();
    for (const auto* e : received) {
      if (contains_bytes(e->bytes, m_bytes))
        report.violations.push_back("m of " + file_id + " visible in " + e->type + " to " +
                                    e->to.name());
      if (secrets.payload.size() >= kMinScanLength &&
          contains_bytes(e->bytes, secrets.payload))
        report.violations.push_back("payload of " + file_id + " visible in " + e->type + " to " +
                                    e->to.name());
    }
  }

  // Unmasked signature material must never reach a semi-trusted party or DR.
  for (const auto* e : received) {
    if (e->to.kind == Party::Kind::Ta || e->to.kind == Party::Kind::DataOwner) continue;
    for (const auto& sig : sig_history_) {
      if (contains_bytes(e->bytes, sig.sig.encode()))
        report.violations.push_back(std::string("raw signature visible in ") + e->type + " to " +
                                    e->to.name());
      if (contains_bytes(e->bytes, sig.v.to_bytes()))
        report.violations.push_back(std::string("signature scalar v visible in ") + e->type +
                                    " to " + e->to.name());
    }
  }

  // TA-held secrets, when the harness ran its own Setup.
  if (trace_) {
    const std::array<Scalar, 4> secrets{trace_->alpha, trace_->beta, trace_->eps, trace_->theta};
    const char* names[] = {"alpha", "beta", "eps", "theta"};
    for (const auto* e : received) {
      if (e->to.kind == Party::Kind::Ta) continue;
      for (std::size_t i = 0; i < secrets.size(); ++i)
        if (contains_bytes(e->bytes, secrets[i].to_bytes()))
          report.violations.push_back(std::string("master scalar ") + names[i] + " visible in " +
                                      e->type + " to " + e->to.name());
    }
  }

  // What the outsourcing parties can derive: DSP's output is m * sig_k,
  // never m itself.
  bool esp_or_dsp = colluders.count(Party::esp()) || colluders.count(Party::dsp());
  if (esp_or_dsp) {
    for (const auto& log : request_log_) {
      auto secrets = do_secrets_.find(log.file_id);
      if (secrets == do_secrets_.end()) continue;
      if (log.masked == secrets->second.m)
        report.violations.push_back("masked value for " + log.file_id + " equals m");
      else if (!(log.expected == GTElement::identity()) && log.masked != log.expected)
        report.violations.push_back("masked value for " + log.file_id +
                                    " is not m * sig_k as the analysis predicts");
      else
        report.notes.push_back("ESP/DSP view of " + log.file_id + " (" +
                               privilege_name(log.k) + ") is exactly m * sig_k");
    }
  }

  // Authorized DR colluders make m derivable; that is the by-design case.
  for (const auto& p : colluders) {
    if (p.kind != Party::Kind::Dr) continue;
    auto it = drs_.find(p.dr_id);
    if (it == drs_.end()) continue;
    for (const auto& [file_id, k] : it->second.completed)
      report.by_design.push_back("m of " + file_id + " derivable: " + p.name() +
                                 " holds a valid certificate for " +
                                 std::string(privilege_name(k)) + " (authorized)");
  }

  if (colluders.size() == 1 && colluders.count(Party::ssp())) {
    std::size_t ct_msgs = 0;
    for (const auto* e : received)
      if (e->type == "StoreCt" || e->type == "ApplyRotation" || e->type == "Request") ++ct_msgs;
    report.notes.push_back("SSP view holds only ciphertext, rotation and routed request bytes (" +
                           std::to_string(ct_msgs) + " messages)");
  }
  return report;
}

}  // namespace mcabe
