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

#include "mcabe/algebra.hpp"

#include <cstring>

#include "mcabe/dem.hpp"

namespace mcabe {

namespace {

constexpr std::uint8_t kFlagInfinity = 0x00;
constexpr std::uint8_t kFlagEvenY = 0x02;
constexpr std::uint8_t kFlagOddY = 0x03;

// Expands label material into a 64-byte string for wide field reduction.
std::array<std::uint8_t, 64> expand_label(std::string_view domain, std::string_view label,
                                          std::uint8_t counter, std::uint8_t slot) {
  std::vector<std::uint8_t> buf;
  buf.reserve(domain.size() + label.size() + 4);
  std::array<std::uint8_t, 64> out{};
  for (std::uint8_t half = 0; half < 2; ++half) {
    buf.clear();
    buf.insert(buf.end(), domain.begin(), domain.end());
    buf.push_back(0x00);
    buf.insert(buf.end(), label.begin(), label.end());
    buf.push_back(counter);
    buf.push_back(slot);
    buf.push_back(half);
    auto h = sha256(buf);
    std::memcpy(out.data() + half * 32, h.data(), 32);
  }
  return out;
}

bool parity_bit(std::string_view domain, std::string_view label, std::uint8_t counter,
                std::uint8_t slot) {
  std::vector<std::uint8_t> buf;
  buf.insert(buf.end(), domain.begin(), domain.end());
  buf.push_back(0x01);
  buf.insert(buf.end(), label.begin(), label.end());
  buf.push_back(counter);
  buf.push_back(slot);
  return sha256(buf)[0] & 1;
}

G1Affine hash_to_g1(std::string_view label) {
  constexpr std::string_view domain = "mcabe.h2g.g1.v1";
  for (int ctr = 0; ctr < 256; ++ctr) {
    auto wide = expand_label(domain, label, static_cast<std::uint8_t>(ctr), 0);
    Fp x = Fp::from_bytes_wide(wide);
    if (auto p = g1_from_x(x, parity_bit(domain, label, static_cast<std::uint8_t>(ctr), 0)))
      return *p;
  }
  throw std::logic_error("hash_to_g1 exhausted counters");
}

G2Affine hash_to_g2(std::string_view label) {
  constexpr std::string_view domain = "mcabe.h2g.g2.v1";
  for (int ctr = 0; ctr < 256; ++ctr) {
    auto w0 = expand_label(domain, label, static_cast<std::uint8_t>(ctr), 0);
    auto w1 = expand_label(domain, label, static_cast<std::uint8_t>(ctr), 1);
    Fp2 x{Fp::from_bytes_wide(w0), Fp::from_bytes_wide(w1)};
    auto p = g2_from_x(x, parity_bit(domain, label, static_cast<std::uint8_t>(ctr), 2));
    if (!p) continue;
    G2Affine cleared = scalar_mul(*p, Bn254::get().g2_cofactor);
    if (cleared.infinity) continue;
    return cleared;
  }
  throw std::logic_error("hash_to_g2 exhausted counters");
}

void encode_g1(const G1Affine& p, std::uint8_t* out) {
  if (p.infinity) {
    std::memset(out, 0, 33);
    return;
  }
  out[0] = p.y.is_odd() ? kFlagOddY : kFlagEvenY;
  p.x.to_bytes(std::span<std::uint8_t, 32>(out + 1, 32));
}

void encode_g2(const G2Affine& p, std::uint8_t* out) {
  if (p.infinity) {
    std::memset(out, 0, 65);
    return;
  }
  out[0] = fp2_is_odd(p.y) ? kFlagOddY : kFlagEvenY;
  p.x.c0.to_bytes(std::span<std::uint8_t, 32>(out + 1, 32));
  p.x.c1.to_bytes(std::span<std::uint8_t, 32>(out + 33, 32));
}

bool all_zero(const std::uint8_t* p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    if (p[i]) return false;
  return true;
}

std::optional<G1Affine> decode_g1(const std::uint8_t* in) {
  if (in[0] == kFlagInfinity) {
    if (!all_zero(in + 1, 32)) return std::nullopt;
    return G1Affine::at_infinity();
  }
  if (in[0] != kFlagEvenY && in[0] != kFlagOddY) return std::nullopt;
  auto x = Fp::from_bytes(std::span<const std::uint8_t, 32>(in + 1, 32));
  if (!x) return std::nullopt;
  return g1_from_x(*x, in[0] == kFlagOddY);
}

std::optional<G2Affine> decode_g2(const std::uint8_t* in) {
  if (in[0] == kFlagInfinity) {
    if (!all_zero(in + 1, 64)) return std::nullopt;
    return G2Affine::at_infinity();
  }
  if (in[0] != kFlagEvenY && in[0] != kFlagOddY) return std::nullopt;
  auto c0 = Fp::from_bytes(std::span<const std::uint8_t, 32>(in + 1, 32));
  auto c1 = Fp::from_bytes(std::span<const std::uint8_t, 32>(in + 33, 32));
  if (!c0 || !c1) return std::nullopt;
  auto p = g2_from_x(Fp2{*c0, *c1}, in[0] == kFlagOddY);
  if (!p || !g2_in_subgroup(*p)) return std::nullopt;
  return p;
}

}  // namespace

Scalar Scalar::random(RandomSource& rng) {
  std::array<std::uint8_t, 64> wide{};
  rng.fill(wide);
  return Scalar(Fr::from_bytes_wide(wide));
}

Scalar Scalar::random_nonzero(RandomSource& rng) {
  for (;;) {
    Scalar s = random(rng);
    if (!s.is_zero()) return s;
  }
}

const GElement& GElement::generator() {
  static const GElement g = from_parts(Bn254::get().g1_gen, Bn254::get().g2_gen);
  return g;
}

GElement GElement::operator*(const GElement& o) const {
  Jacobian<Fp> a = jac_add_mixed(Jacobian<Fp>::from_affine(p1_), o.p1_);
  Jacobian<Fp2> b = jac_add_mixed(Jacobian<Fp2>::from_affine(p2_), o.p2_);
  return from_parts(jac_to_affine(a), jac_to_affine(b));
}

GElement GElement::pow(const Scalar& e) const {
  Limbs k = e.fe().canonical();
  return from_parts(scalar_mul(p1_, k), scalar_mul(p2_, k));
}

std::array<std::uint8_t, kGElementBytes> GElement::encode() const {
  std::array<std::uint8_t, kGElementBytes> out{};
  encode_g1(p1_, out.data());
  encode_g2(p2_, out.data() + 33);
  return out;
}

std::optional<GElement> GElement::decode(std::span<const std::uint8_t, kGElementBytes> in) {
  auto p1 = decode_g1(in.data());
  auto p2 = decode_g2(in.data() + 33);
  if (!p1 || !p2) return std::nullopt;
  return from_parts(*p1, *p2);
}

const GTElement& GTElement::generator() {
  static const GTElement g = pairing(GElement::generator(), GElement::generator());
  return g;
}

GTElement GTElement::random_nonidentity(RandomSource& rng) {
  return generator().pow(Scalar::random_nonzero(rng));
}

std::array<std::uint8_t, kGTElementBytes> GTElement::encode() const {
  std::array<std::uint8_t, kGTElementBytes> out{};
  const Fp* coeffs[12] = {&v_.c0.c0.c0, &v_.c0.c0.c1, &v_.c0.c1.c0, &v_.c0.c1.c1,
                          &v_.c0.c2.c0, &v_.c0.c2.c1, &v_.c1.c0.c0, &v_.c1.c0.c1,
                          &v_.c1.c1.c0, &v_.c1.c1.c1, &v_.c1.c2.c0, &v_.c1.c2.c1};
  for (int i = 0; i < 12; ++i)
    coeffs[i]->to_bytes(std::span<std::uint8_t, 32>(out.data() + i * 32, 32));
  return out;
}

std::optional<GTElement> GTElement::decode(std::span<const std::uint8_t, kGTElementBytes> in) {
  Fp coeffs[12];
  for (int i = 0; i < 12; ++i) {
    auto fe = Fp::from_bytes(std::span<const std::uint8_t, 32>(in.data() + i * 32, 32));
    if (!fe) return std::nullopt;
    coeffs[i] = *fe;
  }
  Fp12 v{Fp6{Fp2{coeffs[0], coeffs[1]}, Fp2{coeffs[2], coeffs[3]}, Fp2{coeffs[4], coeffs[5]}},
         Fp6{Fp2{coeffs[6], coeffs[7]}, Fp2{coeffs[8], coeffs[9]}, Fp2{coeffs[10], coeffs[11]}}};
  if (!v.in_cyclotomic_subgroup()) return std::nullopt;
  return GTElement(v);
}

GTElement pairing(const GElement& u, const GElement& v) {
  Fp12 f = miller_loop(v.g2(), u.g1()) * miller_loop(u.g2(), v.g1());
  return GTElement(final_exponentiation(f));
}

GElement hash_to_group(std::string_view label) {
  if (label.empty()) throw Error(ErrorCode::InvalidArgument, "empty hash label");
  return GElement::from_parts(hash_to_g1(label), hash_to_g2(label));
}

}  // namespace mcabe
