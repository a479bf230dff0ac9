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

#include <optional>

#include "mcabe/fp.hpp"

namespace mcabe {

// Tower: Fp2 = Fp[i]/(i^2+1), Fp6 = Fp2[v]/(v^3 - xi), Fp12 = Fp6[w]/(w^2 - v)
// with xi = 9 + i.

struct Fp2 {
  Fp c0, c1;  // c0 + c1*i

  constexpr Fp2() = default;
  constexpr Fp2(const Fp& a, const Fp& b) : c0(a), c1(b) {}

  static Fp2 zero() { return {}; }
  static Fp2 one() { return {Fp::one(), Fp::zero()}; }
  static Fp2 xi() { return {Fp::from_u64(9), Fp::one()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }

  friend bool operator==(const Fp2& a, const Fp2& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend bool operator!=(const Fp2& a, const Fp2& b) { return !(a == b); }

  friend Fp2 operator+(const Fp2& a, const Fp2& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
  friend Fp2 operator-(const Fp2& a, const Fp2& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
  Fp2 operator-() const { return {-c0, -c1}; }

  friend Fp2 operator*(const Fp2& a, const Fp2& b) {
    // Karatsuba over the (i^2 = -1) extension.
    Fp t0 = a.c0 * b.c0;
    Fp t1 = a.c1 * b.c1;
    Fp mixed = (a.c0 + a.c1) * (b.c0 + b.c1);
    return {t0 - t1, mixed - t0 - t1};
  }

  Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
  Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
  Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

  Fp2 mul_fp(const Fp& s) const { return {c0 * s, c1 * s}; }
  Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }

  Fp2 square() const {
    // (c0 + c1 i)^2 = (c0+c1)(c0-c1) + 2 c0 c1 i
    Fp t = c0 * c1;
    return {(c0 + c1) * (c0 - c1), t.dbl()};
  }

  Fp2 conjugate() const { return {c0, -c1}; }

  // Multiplication by xi = 9 + i.
  Fp2 mul_xi() const {
    Fp nine_c0 = c0.dbl().dbl().dbl() + c0;
    Fp nine_c1 = c1.dbl().dbl().dbl() + c1;
    return {nine_c0 - c1, nine_c1 + c0};
  }

  Fp norm() const { return c0.square() + c1.square(); }

  Fp2 inverse() const {
    Fp inv = norm().inverse();
    return {c0 * inv, -(c1 * inv)};
  }

  Fp2 pow(const Limbs& e) const {
    Fp2 acc = one();
    for (int i = limb_ops::bit_length(e) - 1; i >= 0; --i) {
      acc = acc.square();
      if (limb_ops::bit(e, i)) acc = acc * *this;
    }
    return acc;
  }

  // Complex square-root method; requires p == 3 (mod 4).
  std::optional<Fp2> sqrt() const {
    if (is_zero()) return Fp2::zero();
    if (c1.is_zero()) {
      if (auto s = c0.sqrt()) return Fp2{*s, Fp::zero()};
      auto s = (-c0).sqrt();
      if (!s) return std::nullopt;
      return Fp2{Fp::zero(), *s};
    }
    auto n = norm().sqrt();
    if (!n) return std::nullopt;
    Fp half = Fp::from_u64(2).inverse();
    Fp d = (c0 + *n) * half;
    auto x0 = d.sqrt();
    if (!x0) {
      d = (c0 - *n) * half;
      x0 = d.sqrt();
      if (!x0) return std::nullopt;
    }
    Fp x1 = c1 * (x0->dbl()).inverse();
    Fp2 cand{*x0, x1};
    if (cand.square() != *this) return std::nullopt;
    return cand;
  }
};

struct Fp6 {
  Fp2 c0, c1, c2;  // c0 + c1*v + c2*v^2

  static Fp6 zero() { return {}; }
  static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }

  friend bool operator==(const Fp6& a, const Fp6& b) {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.c2 == b.c2;
  }
  friend bool operator!=(const Fp6& a, const Fp6& b) { return !(a == b); }

  friend Fp6 operator+(const Fp6& a, const Fp6& b) {
    return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2};
  }
  friend Fp6 operator-(const Fp6& a, const Fp6& b) {
    return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2};
  }
  Fp6 operator-() const { return {-c0, -c1, -c2}; }

  friend Fp6 operator*(const Fp6& a, const Fp6& b) {
    Fp2 t0 = a.c0 * b.c0;
    Fp2 t1 = a.c1 * b.c1;
    Fp2 t2 = a.c2 * b.c2;
    Fp2 r0 = ((a.c1 + a.c2) * (b.c1 + b.c2) - t1 - t2).mul_xi() + t0;
    Fp2 r1 = (a.c0 + a.c1) * (b.c0 + b.c1) - t0 - t1 + t2.mul_xi();
    Fp2 r2 = (a.c0 + a.c2) * (b.c0 + b.c2) - t0 - t2 + t1;
    return {r0, r1, r2};
  }

  Fp6 square() const { return *this * *this; }

  // Multiplication by v.
  Fp6 mul_v() const { return {c2.mul_xi(), c0, c1}; }

  Fp6 mul_fp2(const Fp2& s) const { return {c0 * s, c1 * s, c2 * s}; }

  Fp6 inverse() const {
    Fp2 a0 = c0.square() - (c1 * c2).mul_xi();
    Fp2 a1 = c2.square().mul_xi() - c0 * c1;
    Fp2 a2 = c1.square() - c0 * c2;
    Fp2 t = ((c2 * a1 + c1 * a2).mul_xi() + c0 * a0).inverse();
    return {a0 * t, a1 * t, a2 * t};
  }
};

// Frobenius coefficients, computed once from xi by exponentiation.
struct FrobeniusConstants {
  Fp2 gamma1[5];  // xi^{k(p-1)/6}, k = 1..5
  Fp gamma2[5];   // xi^{k(p^2-1)/6} = gamma1[k] * conj(gamma1[k]), in Fp

  static const FrobeniusConstants& get() {
    static const FrobeniusConstants inst = compute();
    return inst;
  }

 private:
  static FrobeniusConstants compute() {
    FrobeniusConstants fc;
    Limbs e = limb_ops::div_small(limb_ops::sub_small(Fp::modulus, 1), 6);
    Fp2 g1 = Fp2::xi().pow(e);
    Fp2 acc = g1;
    for (int k = 0; k < 5; ++k) {
      fc.gamma1[k] = acc;
      Fp2 n = acc * acc.conjugate();
      if (!n.c1.is_zero()) throw std::logic_error("frobenius constant not in Fp");
      fc.gamma2[k] = n.c0;
      acc = acc * g1;
    }
    return fc;
  }
};

struct Fp12 {
  Fp6 c0, c1;  // c0 + c1*w

  static Fp12 zero() { return {}; }
  static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

  bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
  bool is_one() const { return *this == one(); }

  friend bool operator==(const Fp12& a, const Fp12& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
  friend bool operator!=(const Fp12& a, const Fp12& b) { return !(a == b); }

  friend Fp12 operator*(const Fp12& a, const Fp12& b) {
    Fp6 t0 = a.c0 * b.c0;
    Fp6 t1 = a.c1 * b.c1;
    Fp6 mixed = (a.c0 + a.c1) * (b.c0 + b.c1);
    return {t0 + t1.mul_v(), mixed - t0 - t1};
  }

  Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

  Fp12 square() const {
    Fp6 t = c0 * c1;
    Fp6 a = (c0 + c1) * (c0 + c1.mul_v());
    return {a - t - t.mul_v(), t + t};
  }

  // Conjugation over Fp6 (the p^6 Frobenius); inverse of unitary elements.
  Fp12 conjugate() const { return {c0, -c1}; }

  Fp12 inverse() const {
    Fp6 t = (c0 * c0 - (c1 * c1).mul_v()).inverse();
    return {c0 * t, -(c1 * t)};
  }

  Fp12 frobenius() const {
    const auto& fc = FrobeniusConstants::get();
    Fp6 r0{c0.c0.conjugate(), c0.c1.conjugate() * fc.gamma1[1], c0.c2.conjugate() * fc.gamma1[3]};
    Fp6 r1{c1.c0.conjugate() * fc.gamma1[0], c1.c1.conjugate() * fc.gamma1[2],
           c1.c2.conjugate() * fc.gamma1[4]};
    return {r0, r1};
  }

  Fp12 frobenius_p2() const {
    const auto& fc = FrobeniusConstants::get();
    Fp6 r0{c0.c0, c0.c1.mul_fp(fc.gamma2[1]), c0.c2.mul_fp(fc.gamma2[3])};
    Fp6 r1{c1.c0.mul_fp(fc.gamma2[0]), c1.c1.mul_fp(fc.gamma2[2]), c1.c2.mul_fp(fc.gamma2[4])};
    return {r0, r1};
  }

  Fp12 pow(const Limbs& e) const {
    Fp12 acc = one();
    for (int i = limb_ops::bit_length(e) - 1; i >= 0; --i) {
      acc = acc.square();
      if (limb_ops::bit(e, i)) acc = acc * *this;
    }
    return acc;
  }

  Fp12 pow_u64(u64 e) const { return pow(Limbs{e, 0, 0, 0}); }

  // Membership in the cyclotomic subgroup: z^(p^4 - p^2 + 1) == 1.
  bool in_cyclotomic_subgroup() const {
    if (is_zero()) return false;
    Fp12 zp2 = frobenius_p2();
    Fp12 zp4 = zp2.frobenius_p2();
    return zp4 * *this == zp2;
  }
};

}  // namespace mcabe
