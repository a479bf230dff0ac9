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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "mcabe/actors.hpp"
#include "support/generators.hpp"

using namespace mcabe;

namespace {

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() /
             ("mcabe-actors-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  return dir;
}

struct World {
  SeededRandom rng;
  std::filesystem::path dir;
  Harness h;

  explicit World(const std::string& tag, std::uint64_t seed = 2026, std::int64_t now = 1000)
      : rng(seed), dir(temp_dir(tag)),
        h(Harness::create({dir, [now] { return now; }}, rng)) {}

  ~World() { std::filesystem::remove_all(dir); }
};

bool contains(std::span<const std::uint8_t> haystack, std::span<const std::uint8_t> needle) {
  if (needle.empty() || haystack.size() < needle.size()) return false;
  return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) !=
         haystack.end();
}

const std::vector<std::uint8_t> kPayload = {'h', 'e', 'a', 'r', 't', '-', 'r', 'a', 't',
                                            'e', ':', ' ', '7', '2', ' ', 'b', 'p', 'm'};

void outsource_default(World& w, const std::string& file = "f1") {
  w.h.flow_outsource(file, kPayload, "(doctor AND cardiology)",
                     {Privilege::Read, Privilege::Modify});
}

}  // namespace

TEST_CASE("outsource then satisfied request recovers the payload") {
  World w("roundtrip");
  outsource_default(w);
  w.h.register_dr("alice");
  w.h.grant("alice", "f1", {Privilege::Read}, {0, 5000});

  auto payload = w.h.flow_request("alice", "f1", Privilege::Read, {"doctor", "cardiology"});
  CHECK(payload == kPayload);
}

TEST_CASE("session scalar s travels only on the DO->ESP leg") {
  World w("s-audit");
  outsource_default(w);
  w.h.grant("bob", "f1", {Privilege::Read}, {0, 5000});
  w.h.flow_request("bob", "f1", Privilege::Read, {"doctor", "cardiology"});

  // recover s from the Outsource message itself
  std::vector<std::uint8_t> s_bytes;
  for (const auto& e : w.h.transcript().entries()) {
    if (e.type != "Outsource") continue;
    ByteReader r(open_envelope(e.bytes, TypeTag::MsgOutsource));
    (void)r.str();
    s_bytes.assign(32, 0);
    auto s = r.scalar().to_bytes();
    std::copy(s.begin(), s.end(), s_bytes.begin());
  }
  REQUIRE(!s_bytes.empty());

  for (const auto& e : w.h.transcript().entries()) {
    if (e.type == "Outsource") {
      CHECK(contains(e.bytes, s_bytes));
      continue;
    }
    CHECK(!contains(e.bytes, s_bytes));
  }
}

TEST_CASE("v_k and raw signatures appear only between DO and TA") {
  World w("v-audit");
  outsource_default(w);
  w.h.grant("carol", "f1", {Privilege::Read}, {0, 5000});
  w.h.flow_request("carol", "f1", Privilege::Read, {"doctor", "cardiology"});
  w.h.flow_revoke("carol");

  for (const auto& e : w.h.transcript().entries()) {
    bool ta_or_do = e.to.kind == Party::Kind::Ta || e.to.kind == Party::Kind::DataOwner;
    if (ta_or_do) continue;
    for (const auto& sig : w.h.signature_history()) {
      CHECK(!contains(e.bytes, sig.v.to_bytes()));
      CHECK(!contains(e.bytes, sig.sig.encode()));
    }
  }
}

TEST_CASE("TA master scalars never leave TA") {
  World w("trace-audit");
  outsource_default(w);
  w.h.grant("dave", "f1", {Privilege::Read}, {0, 5000});
  w.h.flow_request("dave", "f1", Privilege::Read, {"doctor", "cardiology"});

  const SetupTrace* trace = w.h.setup_trace();
  REQUIRE(trace != nullptr);
  const std::array<Scalar, 4> secrets{trace->alpha, trace->beta, trace->eps, trace->theta};
  for (const auto& e : w.h.transcript().entries())
    for (const auto& s : secrets) CHECK(!contains(e.bytes, s.to_bytes()));

  // per-DR mask scalars t stay in the table too
  for (const auto& [id, rec] : w.h.ta().table.records())
    for (const auto& e : w.h.transcript().entries())
      CHECK(!contains(e.bytes, rec.t.to_bytes()));
}

TEST_CASE("revoked DR is refused before any key material moves") {
  World w("revoked");
  outsource_default(w);
  w.h.register_dr("mallory");
  w.h.grant("mallory", "f1", {Privilege::Read}, {0, 5000});
  w.h.flow_revoke("mallory");

  std::size_t before = w.h.transcript().entries().size();
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("mallory", "f1", Privilege::Read, {"doctor", "cardiology"}),
      doctest::Contains("RevokedUser"), Error);

  const auto& entries = w.h.transcript().entries();
  REQUIRE(entries.size() == before + 3);  // Request, Request, Refusal only
  CHECK(entries[before].type == "Request");
  CHECK(entries[before + 1].type == "Request");
  CHECK(entries[before + 2].type == "Refusal");
}

TEST_CASE("non-satisfying attributes: NotSatisfied, no masked value reaches DR") {
  World w("notsat");
  outsource_default(w);
  w.h.grant("peggy", "f1", {Privilege::Read}, {0, 5000});

  CHECK_THROWS_WITH_AS((void)w.h.flow_request("peggy", "f1", Privilege::Read, {"doctor"}),
                       doctest::Contains("NotSatisfied"), Error);
  for (const auto& e : w.h.transcript().entries()) CHECK(e.type != "MaskedValue");
}

TEST_CASE("request errors: unknown file, expired grant, privilege denied") {
  World w("errors");
  outsource_default(w);

  w.h.grant("erin", "f1", {Privilege::Read}, {0, 5000});
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("erin", "ghost", Privilege::Read, {"doctor", "cardiology"}),
      doctest::Contains("UnknownFile"), Error);

  // grant that expired before `now` = 1000
  w.h.grant("frank", "f1", {Privilege::Read}, {0, 500});
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("frank", "f1", Privilege::Read, {"doctor", "cardiology"}),
      doctest::Contains("Expired"), Error);

  // no grant at all: the certificate carries no signature for the privilege
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("grace", "f1", Privilege::Read, {"doctor", "cardiology"}),
      doctest::Contains("PrivilegeDenied"), Error);

  // granted read, requested modify
  w.h.grant("heidi", "f1", {Privilege::Read}, {0, 5000});
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("heidi", "f1", Privilege::Modify, {"doctor", "cardiology"}),
      doctest::Contains("PrivilegeDenied"), Error);
}

TEST_CASE("grant validation") {
  World w("grant");
  outsource_default(w);
  CHECK_THROWS_WITH_AS(w.h.grant("x", "ghost", {Privilege::Read}, {0, 10}),
                       doctest::Contains("UnknownFile"), Error);
  CHECK_THROWS_WITH_AS(w.h.grant("x", "f1", {Privilege::Delete}, {0, 10}),
                       doctest::Contains("UnknownPrivilege"), Error);
  CHECK_THROWS_AS(w.h.grant("x", "f1", {Privilege::Read}, {10, 10}), Error);
}

TEST_CASE("mask value is delivered exactly once") {
  World w("mvalue-once");
  outsource_default(w);
  w.h.grant("alice", "f1", {Privilege::Read}, {0, 5000});

  // first contact via auto-registration inside flow_request
  w.h.flow_request("alice", "f1", Privilege::Read, {"doctor", "cardiology"});
  w.h.flow_request("alice", "f1", Privilege::Read, {"doctor", "cardiology"});

  int delivered = 0;
  for (const auto& e : w.h.transcript().entries()) {
    if (e.type == "MaskValue") ++delivered;
    if (e.type == "MaskedCert") {
      ByteReader r(open_envelope(e.bytes, TypeTag::MsgMaskedCert));
      (void)r.var_bytes();
      if (r.u8() == 1) ++delivered;
    }
  }
  CHECK(delivered == 1);

  // explicit registration after delivery does not resend
  w.h.register_dr("alice");
  int after = 0;
  for (const auto& e : w.h.transcript().entries())
    if (e.type == "MaskValue") ++after;
  CHECK(after == 0);
}

TEST_CASE("revocation flow: refusal, stale replay, surviving DRs") {
  World w("revoke-flow");
  outsource_default(w);
  w.h.grant("victim", "f1", {Privilege::Read, Privilege::Modify}, {0, 5000});
  w.h.grant("neighbor", "f1", {Privilege::Read}, {0, 5000});

  auto ok = w.h.flow_request("victim", "f1", Privilege::Read, {"doctor", "cardiology"});
  CHECK(ok == kPayload);
  Harness::RequestArtifacts cached = *w.h.last_request();

  auto before_sigs = w.h.ta().registry.by_file.at("f1");
  w.h.flow_revoke("victim");
  auto after_sigs = w.h.ta().registry.by_file.at("f1");

  // every granted privilege rotated
  CHECK(before_sigs.at(Privilege::Read).sig != after_sigs.at(Privilege::Read).sig);
  CHECK(before_sigs.at(Privilege::Modify).sig != after_sigs.at(Privilege::Modify).sig);
  CHECK(w.h.store().epoch_of("f1") == 2);  // two rotations applied

  // staleness is visible deterministically: the cached cert's epoch lags the
  // stored ciphertext's
  CHECK(cached.cert.epochs.at("f1") == 0);
  CHECK(cached.cert.epochs.at("f1") < w.h.store().epoch_of("f1"));

  // (a) the revoked DR is refused at TA
  CHECK_THROWS_WITH_AS(
      (void)w.h.flow_request("victim", "f1", Privilege::Read, {"doctor", "cardiology"}),
      doctest::Contains("RevokedUser"), Error);

  // (b) replaying the pre-revocation certificate fails payload auth
  CHECK_THROWS_WITH_AS((void)w.h.replay_request(cached), doctest::Contains("StaleSignature"),
                       Error);

  // ...and the residual factor is exactly pairing(g,g)^{eps(v'-v)}
  {
    Ciphertext rotated = w.h.store().fetch("f1");
    auto masked = decrypt_dsp(cached.sk, rotated, Privilege::Read);
    REQUIRE(masked.has_value());
    GTElement wrong = *masked / cached.cert.signatures.at({"f1", Privilege::Read});
    const auto* secrets = w.h.file_secrets("f1");
    REQUIRE(secrets != nullptr);
    GTElement residual = wrong / secrets->m;
    Scalar v_old = before_sigs.at(Privilege::Read).v;
    Scalar v_new = after_sigs.at(Privilege::Read).v;
    CHECK(residual == pairing(w.h.pk().g_eps, w.h.pk().g.pow(v_new - v_old)));
  }

  // (c) non-revoked DRs keep working through refreshed certificates
  auto still_ok = w.h.flow_request("neighbor", "f1", Privilege::Read, {"doctor", "cardiology"});
  CHECK(still_ok == kPayload);

  // revoking twice is idempotent
  w.h.flow_revoke("victim");
}

TEST_CASE("collusion audits") {
  World w("audit");
  outsource_default(w);
  w.h.grant("alice", "f1", {Privilege::Read}, {0, 5000});
  w.h.flow_request("alice", "f1", Privilege::Read, {"doctor", "cardiology"});

  SUBCASE("ESP and DSP together learn only m * sig") {
    auto report = w.h.collusion_audit({Party::esp(), Party::dsp()});
    CHECK(report.clean());
    CHECK(report.by_design.empty());
    bool found = false;
    for (const auto& n : report.notes)
      if (n.find("m * sig_k") != std::string::npos) found = true;
    CHECK(found);
  }

  SUBCASE("adding an authorized DR makes m derivable, by design") {
    auto report = w.h.collusion_audit({Party::esp(), Party::dsp(), Party::dr("alice")});
    CHECK(report.clean());
    REQUIRE(!report.by_design.empty());
    CHECK(report.by_design.front().find("authorized") != std::string::npos);
  }

  SUBCASE("SSP alone sees only ciphertext bytes") {
    auto report = w.h.collusion_audit({Party::ssp()});
    CHECK(report.clean());
    CHECK(report.by_design.empty());
    bool noted = false;
    for (const auto& n : report.notes)
      if (n.find("SSP view") != std::string::npos) noted = true;
    CHECK(noted);
  }
}

TEST_CASE("transcripts are deterministic under a fixed seed") {
  auto run = [](const std::string& tag) {
    World w(tag, 777);
    outsource_default(w);
    w.h.grant("alice", "f1", {Privilege::Read}, {0, 5000});
    w.h.flow_request("alice", "f1", Privilege::Read, {"doctor", "cardiology"});
    w.h.flow_revoke("alice");
    std::ostringstream os;
    w.h.transcript().export_jsonl(os);
    return os.str();
  };
  CHECK(run("det-a") == run("det-b"));
}

TEST_CASE("transcript export is one JSON object per line") {
  World w("jsonl");
  outsource_default(w);
  std::ostringstream os;
  w.h.transcript().export_jsonl(os);
  std::istringstream is(os.str());
  std::string line;
  int lines = 0;
  while (std::getline(is, line)) {
    ++lines;
    CHECK(line.front() == '{');
    CHECK(line.find("\"seq\"") != std::string::npos);
    CHECK(line.find("\"bytes_hex\"") != std::string::npos);
  }
  CHECK(lines == static_cast<int>(w.h.transcript().entries().size()));
}

TEST_CASE("randomized end-to-end agreement with check_satisfy") {
  World w("e2e");
  std::mt19937 struct_rng(2468);
  int agree = 0;
  for (int i = 0; i < 12; ++i) {
    AccessTree tree = testgen::random_tree(struct_rng, 8);
    std::string file = "file" + std::to_string(i);
    w.h.flow_outsource(file, kPayload, tree.pretty(), {Privilege::Read});
    std::string dr = "dr" + std::to_string(i);
    w.h.grant(dr, file, {Privilege::Read}, {0, 5000});

    auto attrs = testgen::random_attrs(struct_rng);
    bool satisfiable = check_satisfy(tree, attrs).has_value();
    try {
      auto payload = w.h.flow_request(dr, file, Privilege::Read, attrs);
      CHECK(satisfiable);
      CHECK(payload == kPayload);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSatisfied);
      CHECK(!satisfiable);
    }
    ++agree;
  }
  CHECK(agree == 12);
}
