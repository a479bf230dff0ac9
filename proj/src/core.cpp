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

#include "mcabe/core.hpp"

#include "mcabe/certs.hpp"
#include "mcabe/dem.hpp"

namespace mcabe {

const char* privilege_name(Privilege k) {
  switch (k) {
    case Privilege::Read: return "read";
    case Privilege::Modify: return "modify";
    case Privilege::Delete: return "delete";
  }
  return "unknown";
}

std::optional<Privilege> privilege_from_name(std::string_view name) {
  if (name == "read") return Privilege::Read;
  if (name == "modify") return Privilege::Modify;
  if (name == "delete") return Privilege::Delete;
  return std::nullopt;
}

std::pair<PublicKey, MasterKey> setup(RandomSource& rng) {
  SetupTrace trace;
  return setup_traced(rng, trace);
}

std::pair<PublicKey, MasterKey> setup_traced(RandomSource& rng, SetupTrace& trace) {
  trace.alpha = Scalar::random_nonzero(rng);
  trace.beta = Scalar::random_nonzero(rng);
  trace.eps = Scalar::random_nonzero(rng);
  trace.theta = Scalar::random_nonzero(rng);

  const GElement& g = GElement::generator();
  PublicKey pk;
  pk.g = g;
  pk.h = g.pow(trace.beta);
  pk.g_eps = g.pow(trace.eps);
  pk.g_theta = g.pow(trace.theta);

  MasterKey mk;
  mk.beta = trace.beta;
  mk.g_alpha = g.pow(trace.alpha);
  pk.e_gg_alpha = pairing(mk.g_alpha, g);
  return {pk, mk};
}

PrivilegeSignature make_signature(const PublicKey& pk, Privilege k, RandomSource& rng) {
  return make_signature_with(pk, k, Scalar::random_nonzero(rng));
}

PrivilegeSignature make_signature_with(const PublicKey& pk, Privilege k, const Scalar& v) {
  PrivilegeSignature s;
  s.k = k;
  s.v = v;
  s.sig = pairing(pk.g_eps, pk.g.pow(v));
  return s;
}

std::vector<std::uint8_t> seal_payload(const GTElement& m, std::string_view file_id,
                                       std::span<const std::uint8_t> payload, RandomSource& rng) {
  auto key = derive_key("mcabe.dem.v1", m.encode());
  std::vector<std::uint8_t> aad(file_id.begin(), file_id.end());
  return aead_seal(key, payload, aad, rng);
}

std::optional<std::vector<std::uint8_t>> open_payload(const GTElement& m,
                                                      std::string_view file_id,
                                                      std::span<const std::uint8_t> sealed) {
  auto key = derive_key("mcabe.dem.v1", m.encode());
  std::vector<std::uint8_t> aad(file_id.begin(), file_id.end());
  return aead_open(key, sealed, aad);
}

MaskedMessage encrypt_do(const PublicKey& pk, const GTElement& m,
                         const std::set<Privilege>& privileges,
                         const std::map<Privilege, PrivilegeSignature>& signatures,
                         RandomSource& rng) {
  if (privileges.empty())
    throw Error(ErrorCode::InvalidArgument, "no privileges to encrypt for");
  MaskedMessage mm;
  mm.s = Scalar::random_nonzero(rng);
  GTElement blind = pk.e_gg_alpha.pow(mm.s);
  for (Privilege k : privileges) {
    auto it = signatures.find(k);
    if (it == signatures.end())
      throw Error(ErrorCode::UnknownPrivilege,
                  std::string("missing signature for privilege ") + privilege_name(k));
    mm.c_tilde.emplace(k, m * blind * it->second.sig);
  }
  return mm;
}

Ciphertext encrypt_esp(const PublicKey& pk, const Scalar& s, const AccessTree& tree,
                       const MaskedMessage& mm, std::string file_id, std::uint64_t epoch,
                       std::vector<std::uint8_t> sealed_payload, RandomSource& rng) {
  Ciphertext ct;
  ct.tree = tree;
  ct.c_tilde = mm.c_tilde;
  ct.c = pk.h.pow(s);
  ct.file_id = std::move(file_id);
  ct.epoch = epoch;
  ct.sealed_payload = std::move(sealed_payload);

  ShareMap shares = share_secret(tree, s, rng);
  for (const PolicyNode* leaf : tree.leaves()) {
    const Scalar& share = shares.leaf_shares.at(leaf->node_id);
    CiphertextLeaf block;
    block.c_y = pk.g.pow(share);
    block.c_y_prime = hash_to_group(leaf->attribute).pow(share);
    ct.leaves.emplace(leaf->node_id, block);
  }
  return ct;
}

SecretKey keygen(const PublicKey& pk, const MasterKey& mk, const std::set<std::string>& attrs,
                 RandomSource& rng) {
  if (attrs.empty()) throw Error(ErrorCode::InvalidArgument, "empty attribute set");
  SecretKey sk;
  sk.attrs = attrs;
  Scalar r = Scalar::random_nonzero(rng);
  // D = g^{(alpha+r)/beta} = (g^alpha * g^r)^{1/beta}
  sk.d = (mk.g_alpha * pk.g.pow(r)).pow(mk.beta.inverse());
  GElement g_r = pk.g.pow(r);
  for (const std::string& attr : attrs) {
    Scalar r_j = Scalar::random_nonzero(rng);
    SecretKeyAttr ak;
    ak.d_j = g_r * hash_to_group(attr).pow(r_j);
    ak.d_j_prime = pk.g.pow(r_j);
    sk.per_attr.emplace(attr, ak);
  }
  return sk;
}

namespace {

// DecryptNode of Algorithm 5: returns pairing(g,g)^{r q_x(0)} or nullopt.
std::optional<GTElement> decrypt_node(const SecretKey& sk, const Ciphertext& ct,
                                      const PolicyNode& node) {
  if (node.kind == PolicyNode::Kind::Leaf) {
    auto key = sk.per_attr.find(node.attribute);
    if (key == sk.per_attr.end()) return std::nullopt;
    const CiphertextLeaf& leaf = ct.leaves.at(node.node_id);
    GTElement num = pairing(key->second.d_j, leaf.c_y);
    GTElement den = pairing(leaf.c_y_prime, key->second.d_j_prime);
    return num / den;
  }

  // Lowest-index selection of threshold-many decryptable children.
  std::vector<std::pair<int, GTElement>> found;
  for (const PolicyNode& child : node.children) {
    if (static_cast<int>(found.size()) == node.threshold) break;
    auto sub = decrypt_node(sk, ct, child);
    if (sub) found.emplace_back(child.index, *sub);
  }
  if (static_cast<int>(found.size()) < node.threshold) return std::nullopt;

  std::vector<Scalar> index_set;
  index_set.reserve(found.size());
  for (const auto& [idx, value] : found) index_set.push_back(Scalar::from_u64(idx));
  GTElement acc = GTElement::identity();
  for (const auto& [idx, value] : found)
    acc = acc * value.pow(lagrange_coeff(Scalar::from_u64(idx), index_set));
  return acc;
}

}  // namespace

std::optional<GTElement> decrypt_dsp(const SecretKey& sk, const Ciphertext& ct, Privilege k) {
  auto comp = ct.c_tilde.find(k);
  if (comp == ct.c_tilde.end())
    throw Error(ErrorCode::UnknownPrivilege,
                std::string("ciphertext lacks component for privilege ") + privilege_name(k));
  auto root_value = decrypt_node(sk, ct, ct.tree.root());
  if (!root_value) return std::nullopt;
  // A = e(g,g)^{rs}; C~_k / (e(C, D) / A) = m * sig_k
  GTElement denom = pairing(ct.c, sk.d) / *root_value;
  return comp->second / denom;
}

Message decrypt_dr(const GTElement& masked, const AuthorizationCert& cert, Privilege k,
                   const std::string& file_id, std::span<const std::uint8_t> sealed_payload,
                   std::int64_t now) {
  if (!cert.valid_period.contains(now))
    throw Error(ErrorCode::Expired, "certificate outside its validity window");
  auto sig = cert.signatures.find({file_id, k});
  if (sig == cert.signatures.end())
    throw Error(ErrorCode::PrivilegeDenied,
                "certificate grants no " + std::string(privilege_name(k)) + " on " + file_id);
  Message msg;
  msg.m = masked / sig->second;
  auto payload = open_payload(msg.m, file_id, sealed_payload);
  if (!payload)
    throw Error(ErrorCode::StaleSignature,
                "payload failed to authenticate; certificate signature is stale");
  msg.payload = std::move(*payload);
  return msg;
}

std::pair<PrivilegeSignature, GTElement> rotate_signature(const PublicKey& pk,
                                                          const PrivilegeSignature& old_sig,
                                                          RandomSource& rng) {
  PrivilegeSignature fresh = make_signature(pk, old_sig.k, rng);
  GTElement delta = fresh.sig / old_sig.sig;
  return {fresh, delta};
}

}  // namespace mcabe
