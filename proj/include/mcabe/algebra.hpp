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
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "mcabe/errors.hpp"
#include "mcabe/pairing.hpp"
#include "mcabe/rng.hpp"

namespace mcabe {

inline constexpr std::size_t kScalarBytes = 32;
inline constexpr std::size_t kGElementBytes = 98;   // compressed G1 + compressed G2
inline constexpr std::size_t kGTElementBytes = 384; // full Fp12 vector

// Element of Z_p where p is the group order.
class Scalar {
 public:
  Scalar() = default;

  static Scalar zero() { return Scalar(); }
  static Scalar one() { return Scalar(Fr::one()); }
  static Scalar from_u64(std::uint64_t x) { return Scalar(Fr::from_u64(x)); }

  static Scalar random(RandomSource& rng);
  static Scalar random_nonzero(RandomSource& rng);

  std::array<std::uint8_t, kScalarBytes> to_bytes() const { return fe_.to_bytes(); }
  static std::optional<Scalar> from_bytes(std::span<const std::uint8_t, kScalarBytes> in) {
    auto fe = Fr::from_bytes(in);
    if (!fe) return std::nullopt;
    return Scalar(*fe);
  }

  bool is_zero() const { return fe_.is_zero(); }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return Scalar(a.fe_ + b.fe_); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return Scalar(a.fe_ - b.fe_); }
  friend Scalar operator*(const Scalar& a, const Scalar& b) { return Scalar(a.fe_ * b.fe_); }
  Scalar operator-() const { return Scalar(-fe_); }

  Scalar inverse() const {
    if (is_zero()) throw Error(ErrorCode::InvalidArgument, "scalar inverse of zero");
    return Scalar(fe_.inverse());
  }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.fe_ == b.fe_; }
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

  const Fr& fe() const { return fe_; }
  explicit Scalar(const Fr& fe) : fe_(fe) {}

 private:
  Fr fe_;
};

class GTElement;

// Source-group element, maintained as a mirrored (G1, G2) pair so the
// symmetric pairing contract of the scheme holds over a type-3 curve.
class GElement {
 public:
  GElement() = default;  // identity

  static GElement identity() { return GElement(); }
  static const GElement& generator();

  bool is_identity() const { return p1_.infinity && p2_.infinity; }

  GElement operator*(const GElement& o) const;  // group operation
  GElement pow(const Scalar& e) const;
  GElement inverse() const { return from_parts(p1_.negated(), p2_.negated()); }

  friend bool operator==(const GElement& a, const GElement& b) {
    return a.p1_ == b.p1_ && a.p2_ == b.p2_;
  }
  friend bool operator!=(const GElement& a, const GElement& b) { return !(a == b); }

  std::array<std::uint8_t, kGElementBytes> encode() const;
  static std::optional<GElement> decode(std::span<const std::uint8_t, kGElementBytes> in);

  static GElement from_parts(const G1Affine& p1, const G2Affine& p2) {
    GElement e;
    e.p1_ = p1;
    e.p2_ = p2;
    return e;
  }
  const G1Affine& g1() const { return p1_; }
  const G2Affine& g2() const { return p2_; }

 private:
  G1Affine p1_ = G1Affine::at_infinity();
  G2Affine p2_ = G2Affine::at_infinity();
};

// Target-group element (order-r subgroup of Fp12*).
class GTElement {
 public:
  GTElement() : v_(Fp12::one()) {}

  static GTElement identity() { return GTElement(); }
  static const GTElement& generator();  // pairing(g, g)
  static GTElement random_nonidentity(RandomSource& rng);

  bool is_identity() const { return v_.is_one(); }

  friend GTElement operator*(const GTElement& a, const GTElement& b) {
    return GTElement(a.v_ * b.v_);
  }
  friend GTElement operator/(const GTElement& a, const GTElement& b) {
    return GTElement(a.v_ * b.v_.inverse());
  }
  GTElement pow(const Scalar& e) const { return GTElement(v_.pow(e.fe().canonical())); }
  GTElement inverse() const { return GTElement(v_.inverse()); }

  friend bool operator==(const GTElement& a, const GTElement& b) { return a.v_ == b.v_; }
  friend bool operator!=(const GTElement& a, const GTElement& b) { return !(a == b); }

  std::array<std::uint8_t, kGTElementBytes> encode() const;
  static std::optional<GTElement> decode(std::span<const std::uint8_t, kGTElementBytes> in);

  explicit GTElement(const Fp12& v) : v_(v) {}
  const Fp12& fp12() const { return v_; }

 private:
  Fp12 v_;
};

// Symmetric bilinear pairing: e(u, v) = ate(u.g1, v.g2) * ate(v.g1, u.g2),
// with one shared final exponentiation. Symmetric and bilinear for every
// GElement, including hashed ones.
GTElement pairing(const GElement& u, const GElement& v);

// Deterministic hash into the group; error on an empty label.
GElement hash_to_group(std::string_view label);

// Lagrange basis polynomial at zero and interpolation, generic over the
// field so the small test fields can instantiate the same algorithms.
template <typename F>
F lagrange_coeff_at_zero(const F& i, std::span<const F> s) {
  bool found = false;
  F num = F::one();
  F den = F::one();
  for (std::size_t a = 0; a < s.size(); ++a) {
    if (s[a].is_zero())
      throw Error(ErrorCode::InvalidArgument, "lagrange index zero");
    for (std::size_t b = a + 1; b < s.size(); ++b)
      if (s[a] == s[b]) throw Error(ErrorCode::InvalidArgument, "duplicate lagrange index");
    if (s[a] == i) {
      found = true;
      continue;
    }
    num = num * (-s[a]);
    den = den * (i - s[a]);
  }
  if (!found) throw Error(ErrorCode::InvalidArgument, "index not in lagrange set");
  return num * den.inverse();
}

template <typename F>
F interpolate_at_zero(std::span<const std::pair<F, F>> shares) {
  if (shares.empty()) throw Error(ErrorCode::InvalidArgument, "no shares");
  std::vector<F> xs;
  xs.reserve(shares.size());
  for (const auto& sh : shares) xs.push_back(sh.first);
  F acc = F::one() - F::one();
  for (const auto& sh : shares)
    acc = acc + sh.second * lagrange_coeff_at_zero<F>(sh.first, xs);
  return acc;
}

inline Scalar lagrange_coeff(const Scalar& i, std::span<const Scalar> s) {
  return lagrange_coeff_at_zero<Scalar>(i, s);
}

inline Scalar interpolate_at_zero(std::span<const std::pair<Scalar, Scalar>> shares) {
  return interpolate_at_zero<Scalar>(shares);
}

}  // namespace mcabe
