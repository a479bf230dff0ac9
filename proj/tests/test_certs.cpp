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

#include "mcabe/certs.hpp"
#include "mcabe/wire.hpp"

using namespace mcabe;

namespace {

struct Fixture {
  SeededRandom rng{7007};
  PublicKey pk;
  MasterKey mk;

  Fixture() {
    auto [p, m] = setup(rng);
    pk = p;
    mk = m;
  }

  AuthorizationCert random_cert(int files = 2) {
    AuthorizationCert cert;
    cert.pk = pk;
    cert.valid_period = {100, 5000};
    for (int f = 0; f < files; ++f) {
      std::string name = "file" + std::to_string(f);
      cert.file_ids.push_back(name);
      std::set<Privilege> privs{Privilege::Read};
      if (f % 2 == 0) privs.insert(Privilege::Modify);
      cert.privileges[name] = privs;
      cert.epochs[name] = static_cast<std::uint64_t>(f);
      for (Privilege k : privs)
        cert.signatures[{name, k}] = GTElement::random_nonidentity(rng);
    }
    return cert;
  }
};

}  // namespace

TEST_CASE("register_dr: fresh, idempotent, revoked") {
  Fixture fx;
  MaskValueTable table;

  const MaskValueRecord& rec = table.register_dr("dr1", fx.rng);
  CHECK(rec.dr_id == "dr1");
  CHECK(!rec.revoked);
  CHECK(rec.mvalue == GElement::generator().pow(rec.t));

  // re-registration returns the same record
  Scalar t1 = rec.t;
  const MaskValueRecord& again = table.register_dr("dr1", fx.rng);
  CHECK(again.t == t1);
  CHECK(table.records().size() == 1);

  table.record_grant("dr2", "f", {Privilege::Read}, {0, 10});
  table.register_dr("dr2", fx.rng);
  table.revoke_dr("dr2");
  CHECK_THROWS_WITH_AS((void)table.register_dr("dr2", fx.rng),
                       doctest::Contains("RevokedUser"), Error);
}

TEST_CASE("cergen with a forced zero mask value") {
  Fixture fx;
  MaskValueRecord rec;
  rec.dr_id = "dr0";
  rec.t = Scalar::zero();
  rec.mvalue = GElement::generator().pow(Scalar::zero());  // identity

  AuthorizationCert cert = fx.random_cert(1);
  MaskedCert mc = cergen(rec, fx.pk, cert, fx.rng);

  // zero exponent: masked signatures equal the raw ones
  for (const auto& [fk, sig] : cert.signatures) CHECK(mc.masked_signatures.at(fk) == sig);

  AuthorizationCert back = unmask_cert(mc, rec.mvalue, fx.pk);
  CHECK(encode_auth_cert(back) == encode_auth_cert(cert));
}

TEST_CASE("unmask_cert inverts cergen on 100 random certs") {
  Fixture fx;
  MaskValueTable table;
  for (int i = 0; i < 100; ++i) {
    const MaskValueRecord& rec = table.register_dr("dr" + std::to_string(i), fx.rng);
    AuthorizationCert cert = fx.random_cert(1 + i % 3);
    MaskedCert mc = cergen(rec, fx.pk, cert, fx.rng);
    AuthorizationCert back = unmask_cert(mc, rec.mvalue, fx.pk);
    CHECK(encode_auth_cert(back) == encode_auth_cert(cert));
  }
}

TEST_CASE("masking factor is constant across entries and matches theta*t") {
  Fixture fx;
  MaskValueTable table;
  const MaskValueRecord& rec = table.register_dr("dr1", fx.rng);
  AuthorizationCert cert = fx.random_cert(3);
  MaskedCert mc = cergen(rec, fx.pk, cert, fx.rng);

  GTElement expected = pairing(fx.pk.g_theta, rec.mvalue);
  for (const auto& [fk, masked] : mc.masked_signatures)
    CHECK(masked / cert.signatures.at(fk) == expected);
}

TEST_CASE("cross-DR unmasking fails authentication, 100 trials") {
  Fixture fx;
  MaskValueTable table;
  const MaskValueRecord& dr1 = table.register_dr("dr1", fx.rng);
  AuthorizationCert cert = fx.random_cert(1);
  MaskedCert mc = cergen(dr1, fx.pk, cert, fx.rng);

  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const MaskValueRecord& other = table.register_dr("other" + std::to_string(i), fx.rng);
    try {
      (void)unmask_cert(mc, other.mvalue, fx.pk);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::BadMaskValue) ++failures;
    }
  }
  CHECK(failures == 100);
}

TEST_CASE("cergen refuses a revoked record") {
  Fixture fx;
  MaskValueTable table;
  table.register_dr("dr1", fx.rng);
  table.revoke_dr("dr1");
  const MaskValueRecord* rec = table.find("dr1");
  REQUIRE(rec != nullptr);
  CHECK_THROWS_WITH_AS((void)cergen(*rec, fx.pk, fx.random_cert(1), fx.rng),
                       doctest::Contains("RevokedUser"), Error);
}

TEST_CASE("tampered masked signature surfaces as a stale signature downstream") {
  Fixture fx;
  MaskValueTable table;
  const MaskValueRecord& rec = table.register_dr("dr1", fx.rng);

  // A real signature this time, so the payload path is meaningful.
  PrivilegeSignature sig = make_signature(fx.pk, Privilege::Read, fx.rng);
  GTElement m = GTElement::random_nonidentity(fx.rng);
  std::vector<std::uint8_t> payload{1, 2, 3, 4, 5};
  auto sealed = seal_payload(m, "f", payload, fx.rng);

  AuthorizationCert cert;
  cert.pk = fx.pk;
  cert.file_ids = {"f"};
  cert.valid_period = {0, 100};
  cert.privileges["f"] = {Privilege::Read};
  cert.signatures[{"f", Privilege::Read}] = sig.sig;
  cert.epochs["f"] = 0;

  MaskedCert mc = cergen(rec, fx.pk, cert, fx.rng);
  mc.masked_signatures.at({"f", Privilege::Read}) =
      mc.masked_signatures.at({"f", Privilege::Read}) * GTElement::generator();

  // metadata still authenticates, so unmasking succeeds...
  AuthorizationCert tampered = unmask_cert(mc, rec.mvalue, fx.pk);
  CHECK(tampered.signatures.at({"f", Privilege::Read}) != sig.sig);

  // ...but the wrong signature fails payload authentication at decrypt_dr
  GTElement masked_value = m * sig.sig;
  CHECK_THROWS_WITH_AS(
      (void)decrypt_dr(masked_value, tampered, Privilege::Read, "f", sealed, 10),
      doctest::Contains("StaleSignature"), Error);
}

TEST_CASE("revoke_dr work-list and idempotence") {
  Fixture fx;
  MaskValueTable table;
  table.register_dr("dr1", fx.rng);
  table.record_grant("dr1", "f1", {Privilege::Read, Privilege::Modify}, {0, 100});
  table.record_grant("dr1", "f2", {Privilege::Read}, {0, 100});
  table.record_grant("dr1", "f1", {Privilege::Read}, {0, 200});  // duplicate pair

  auto work = table.revoke_dr("dr1");
  std::vector<FilePrivilege> expected{{"f1", Privilege::Read},
                                      {"f1", Privilege::Modify},
                                      {"f2", Privilege::Read}};
  std::sort(expected.begin(), expected.end());
  CHECK(work == expected);

  CHECK(table.find("dr1")->revoked);
  CHECK(table.revoke_dr("dr1").empty());  // second revoke: empty work-list

  CHECK_THROWS_WITH_AS((void)table.revoke_dr("ghost"), doctest::Contains("UnknownDr"), Error);
}

TEST_CASE("one record per dr id at all times") {
  Fixture fx;
  MaskValueTable table;
  for (int i = 0; i < 10; ++i) table.register_dr("dr" + std::to_string(i % 3), fx.rng);
  CHECK(table.records().size() == 3);
}
