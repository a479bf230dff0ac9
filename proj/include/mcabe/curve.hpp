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

#include "mcabe/tower.hpp"

namespace mcabe {

// y^2 = x^3 + b over F, with b = 3 for G1 and b = 3/xi on the sextic twist.

template <typename F>
struct Affine {
  F x{}, y{};
  bool infinity = true;

  static Affine at_infinity() { return Affine{}; }

  static Affine from_xy(const F& x, const F& y) {
    Affine p;
    p.x = x;
    p.y = y;
    p.infinity = false;
    return p;
  }

  bool on_curve(const F& b) const {
    if (infinity) return true;
    return y * y == x * x * x + b;
  }

  Affine negated() const {
    if (infinity) return *this;
    return from_xy(x, -y);
  }

  friend bool operator==(const Affine& a, const Affine& b) {
    if (a.infinity || b.infinity) return a.infinity == b.infinity;
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator!=(const Affine& a, const Affine& b) { return !(a == b); }
};

template <typename F>
struct Jacobian {
  F X{}, Y{}, Z{};  // Z == 0 encodes infinity

  static Jacobian at_infinity() { return Jacobian{}; }

  static Jacobian from_affine(const Affine<F>& p) {
    Jacobian j;
    if (p.infinity) return j;
    j.X = p.x;
    j.Y = p.y;
    j.Z = field_one();
    return j;
  }

  bool is_infinity() const { return Z.is_zero(); }

  static F field_one() {
    if constexpr (std::is_same_v<F, Fp>) {
      return Fp::one();
    } else {
      return F::one();
    }
  }
};

template <typename F>
Jacobian<F> jac_double(const Jacobian<F>& p) {
  if (p.is_infinity()) return p;
  F a = p.X.square();
  F b = p.Y.square();
  F c = b.square();
  F d = ((p.X + b).square() - a - c).dbl();
  F e = a.dbl() + a;
  F f = e.square();
  Jacobian<F> r;
  r.X = f - d.dbl();
  r.Y = e * (d - r.X) - c.dbl().dbl().dbl();
  r.Z = (p.Y * p.Z).dbl();
  return r;
}

template <typename F>
Jacobian<F> jac_add_mixed(const Jacobian<F>& p, const Affine<F>& q) {
  if (q.infinity) return p;
  if (p.is_infinity()) return Jacobian<F>::from_affine(q);
  F z1z1 = p.Z.square();
  F u2 = q.x * z1z1;
  F s2 = q.y * p.Z * z1z1;
  F h = u2 - p.X;
  F rr = (s2 - p.Y).dbl();
  if (h.is_zero()) {
    if (rr.is_zero()) return jac_double(p);
    return Jacobian<F>::at_infinity();
  }
  F hh = h.square();
  F i = hh.dbl().dbl();
  F j = h * i;
  F v = p.X * i;
  Jacobian<F> r;
  r.X = rr.square() - j - v.dbl();
  r.Y = rr * (v - r.X) - (p.Y * j).dbl();
  r.Z = (p.Z + h).square() - z1z1 - hh;
  return r;
}

template <typename F>
Affine<F> jac_to_affine(const Jacobian<F>& p) {
  if (p.is_infinity()) return Affine<F>::at_infinity();
  F zinv = p.Z.inverse();
  F zinv2 = zinv.square();
  return Affine<F>::from_xy(p.X * zinv2, p.Y * zinv2 * zinv);
}

template <typename F>
Affine<F> scalar_mul(const Affine<F>& p, const Limbs& k) {
  Jacobian<F> acc = Jacobian<F>::at_infinity();
  for (int i = limb_ops::bit_length(k) - 1; i >= 0; --i) {
    acc = jac_double(acc);
    if (limb_ops::bit(k, i)) acc = jac_add_mixed(acc, p);
  }
  return jac_to_affine(acc);
}

using G1Affine = Affine<Fp>;
using G2Affine = Affine<Fp2>;

// Curve constants and init-time sanity checks.
struct Bn254 {
  G1Affine g1_gen;
  G2Affine g2_gen;
  Fp g1_b;        // 3
  Fp2 g2_b;       // 3 / xi
  Fp2 twist_frob_x;  // xi^{(p-1)/3}
  Fp2 twist_frob_y;  // xi^{(p-1)/2}
  Fp twist_frob2_x;  // xi^{(p^2-1)/3}
  Limbs g2_cofactor;     // 2p - r
  Limbs six_u_plus_2;    // optimal ate loop count

  static const Bn254& get() {
    static const Bn254 inst = compute();
    return inst;
  }

 private:
  static Bn254 compute() {
    Bn254 c;
    c.g1_b = Fp::from_u64(3);
    c.g1_gen = G1Affine::from_xy(Fp::one(), Fp::from_u64(2));
    if (!c.g1_gen.on_curve(c.g1_b)) throw std::logic_error("bad G1 generator");

    c.g2_b = Fp2{Fp::from_u64(3), Fp::zero()} * Fp2::xi().inverse();
    c.g2_gen = G2Affine::from_xy(
        Fp2{Fp::from_decimal("10857046999023057135944570762232829481370756359578518086990519993285"
                             "655852781"),
            Fp::from_decimal("11559732032986387107991004021392285783925812861821192530917403151452"
                             "391805634")},
        Fp2{Fp::from_decimal("84956539231234314176049732474892724384181905872636001487702806493069"
                             "58101930"),
            Fp::from_decimal("40823678758634336813322034031454355683168513275934012081057410762141"
                             "20093531")});
    if (!c.g2_gen.on_curve(c.g2_b)) throw std::logic_error("bad G2 generator");

    Limbs p2{};
    limb_ops::add(p2, Fp::modulus, Fp::modulus);
    limb_ops::sub(c.g2_cofactor, p2, Fr::modulus);

    u128 su = static_cast<u128>(kBnU) * 6 + 2;
    c.six_u_plus_2 = Limbs{static_cast<u64>(su), static_cast<u64>(su >> 64), 0, 0};

    Limbs third = limb_ops::div_small(limb_ops::sub_small(Fp::modulus, 1), 3);
    Limbs half = limb_ops::shift_right1(limb_ops::sub_small(Fp::modulus, 1));
    c.twist_frob_x = Fp2::xi().pow(third);
    c.twist_frob_y = Fp2::xi().pow(half);

    Fp2 n = c.twist_frob_x * c.twist_frob_x.conjugate();
    if (!n.c1.is_zero()) throw std::logic_error("twist frobenius constant not in Fp");
    c.twist_frob2_x = n.c0;
    Fp2 ny = c.twist_frob_y * c.twist_frob_y.conjugate();
    if (ny != Fp2{-Fp::one(), Fp::zero()})
      throw std::logic_error("xi^((p^2-1)/2) != -1");

    if (scalar_mul(c.g2_gen, Fr::modulus) != G2Affine::at_infinity())
      throw std::logic_error("G2 generator not of order r");
    return c;
  }
};

// Extracts the even/odd y solution for a given x, if x is on the curve.
inline std::optional<G1Affine> g1_from_x(const Fp& x, bool odd_y) {
  auto y = (x * x * x + Bn254::get().g1_b).sqrt();
  if (!y) return std::nullopt;
  Fp yy = (y->is_odd() == odd_y) ? *y : -*y;
  return G1Affine::from_xy(x, yy);
}

// Parity rule for Fp2: parity of c0, falling back to c1 when c0 == 0.
inline bool fp2_is_odd(const Fp2& v) {
  if (!v.c0.is_zero()) return v.c0.is_odd();
  return v.c1.is_odd();
}

inline std::optional<G2Affine> g2_from_x(const Fp2& x, bool odd_y) {
  auto y = (x * x * x + Bn254::get().g2_b).sqrt();
  if (!y) return std::nullopt;
  Fp2 yy = (fp2_is_odd(*y) == odd_y) ? *y : -*y;
  return G2Affine::from_xy(x, yy);
}

inline bool g2_in_subgroup(const G2Affine& p) {
  return scalar_mul(p, Fr::modulus) == G2Affine::at_infinity();
}

}  // namespace mcabe
