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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mcabe/policy.hpp"

namespace mcabe {

enum class Privilege : std::uint8_t { Read = 0, Modify = 1, Delete = 2 };

const char* privilege_name(Privilege k);
std::optional<Privilege> privilege_from_name(std::string_view name);

struct PublicKey {
  GElement g;
  GElement h;            // g^beta
  GTElement e_gg_alpha;  // pairing(g, g)^alpha
  GElement g_eps;        // g^epsilon
  GElement g_theta;      // g^theta
};

struct MasterKey {
  Scalar beta;
  GElement g_alpha;
};

// The blinding factor pairing(g,g)^{eps*v_k} tied to one privilege; not a
// digital signature. v is secret to DO/TA.
struct PrivilegeSignature {
  Privilege k = Privilege::Read;
  Scalar v;
  GTElement sig;
};

// DO -> ESP handoff: one masked component per privilege plus the session
// scalar the ESP needs to finish tree encryption.
struct MaskedMessage {
  std::map<Privilege, GTElement> c_tilde;
  Scalar s;
};

struct CiphertextLeaf {
  GElement c_y;        // g^{q_y(0)}
  GElement c_y_prime;  // H(att(y))^{q_y(0)}
};

struct Ciphertext {
  AccessTree tree;
  std::map<Privilege, GTElement> c_tilde;
  GElement c;  // h^s
  std::map<int, CiphertextLeaf> leaves;  // keyed by leaf node_id
  std::string file_id;
  std::uint64_t epoch = 0;
  std::vector<std::uint8_t> sealed_payload;  // DEM blob under KDF(m)
};

struct SecretKeyAttr {
  GElement d_j;        // g^r * H(j)^{r_j}
  GElement d_j_prime;  // g^{r_j}
};

struct SecretKey {
  std::set<std::string> attrs;
  GElement d;  // g^{(alpha+r)/beta}
  std::map<std::string, SecretKeyAttr> per_attr;
};

// KEM value plus the payload bytes it protects.
struct Message {
  GTElement m;
  std::vector<std::uint8_t> payload;
};

std::pair<PublicKey, MasterKey> setup(RandomSource& rng);

// Test access to the scalars setup otherwise discards.
struct SetupTrace {
  Scalar alpha, beta, eps, theta;
};
std::pair<PublicKey, MasterKey> setup_traced(RandomSource& rng, SetupTrace& trace);

PrivilegeSignature make_signature(const PublicKey& pk, Privilege k, RandomSource& rng);
PrivilegeSignature make_signature_with(const PublicKey& pk, Privilege k, const Scalar& v);

// Payload DEM, keyed from the canonical encoding of m and bound to file_id.
std::vector<std::uint8_t> seal_payload(const GTElement& m, std::string_view file_id,
                                       std::span<const std::uint8_t> payload, RandomSource& rng);
std::optional<std::vector<std::uint8_t>> open_payload(const GTElement& m,
                                                      std::string_view file_id,
                                                      std::span<const std::uint8_t> sealed);

// Samples s and emits C~_k = m * e(g,g)^{alpha s} * sig_k for each granted
// privilege. Throws when a signature is missing for a requested privilege.
MaskedMessage encrypt_do(const PublicKey& pk, const GTElement& m,
                         const std::set<Privilege>& privileges,
                         const std::map<Privilege, PrivilegeSignature>& signatures,
                         RandomSource& rng);

Ciphertext encrypt_esp(const PublicKey& pk, const Scalar& s, const AccessTree& tree,
                       const MaskedMessage& mm, std::string file_id, std::uint64_t epoch,
                       std::vector<std::uint8_t> sealed_payload, RandomSource& rng);

SecretKey keygen(const PublicKey& pk, const MasterKey& mk, const std::set<std::string>& attrs,
                 RandomSource& rng);

// Tree decryption; returns m * sig_k, or nullopt when the key's attributes
// cannot satisfy the tree. Throws UnknownPrivilege when the ciphertext has no
// component for k.
std::optional<GTElement> decrypt_dsp(const SecretKey& sk, const Ciphertext& ct, Privilege k);

struct AuthorizationCert;  // certs module

// Final unmasking step at the DR. Checks the validity window against `now`,
// looks up the (file, privilege) signature, divides, and authenticates the
// payload. Errors: Expired, PrivilegeDenied, StaleSignature.
Message decrypt_dr(const GTElement& masked, const AuthorizationCert& cert, Privilege k,
                   const std::string& file_id, std::span<const std::uint8_t> sealed_payload,
                   std::int64_t now);

// Samples a fresh v', returns the new signature and delta = sig' / sig.
// Applying C~_k <- C~_k * delta re-masks a stored ciphertext.
std::pair<PrivilegeSignature, GTElement> rotate_signature(const PublicKey& pk,
                                                          const PrivilegeSignature& old_sig,
                                                          RandomSource& rng);

}  // namespace mcabe
