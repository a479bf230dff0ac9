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

#include "mcabe/curve.hpp"

namespace mcabe {

namespace pairing_detail {

// Line through the (untwisted) twist point T with slope lambda, evaluated at
// the base-field point P: yp - lambda*xp*w + (lambda*Tx - Ty)*w^3.
inline Fp12 line_eval(const Fp2& lambda, const G2Affine& t, const G1Affine& p) {
  Fp12 l;
  l.c0 = Fp6{Fp2{p.y, Fp::zero()}, Fp2::zero(), Fp2::zero()};
  l.c1 = Fp6{lambda.mul_fp(-p.x), lambda * t.x - t.y, Fp2::zero()};
  return l;
}

inline Fp2 tangent_slope(const G2Affine& t) {
  Fp2 num = t.x.square();
  num = num.dbl() + num;
  return num * t.y.dbl().inverse();
}

inline Fp2 chord_slope(const G2Affine& a, const G2Affine& b) {
  Fp2 dx = a.x - b.x;
  if (dx.is_zero()) throw std::logic_error("degenerate chord in miller loop");
  return (a.y - b.y) * dx.inverse();
}

inline G2Affine affine_step(const G2Affine& t, const G2Affine& q, const Fp2& lambda) {
  Fp2 x3 = lambda.square() - t.x - q.x;
  Fp2 y3 = lambda * (t.x - x3) - t.y;
  return G2Affine::from_xy(x3, y3);
}

}  // namespace pairing_detail

// Optimal ate Miller loop; the result still needs the final exponentiation.
inline Fp12 miller_loop(const G2Affine& q, const G1Affine& p) {
  using namespace pairing_detail;
  if (q.infinity || p.infinity) return Fp12::one();

  const Bn254& c = Bn254::get();
  Fp12 f = Fp12::one();
  G2Affine t = q;

  for (int i = limb_ops::bit_length(c.six_u_plus_2) - 2; i >= 0; --i) {
    Fp2 lambda = tangent_slope(t);
    f = f.square() * line_eval(lambda, t, p);
    t = affine_step(t, t, lambda);
    if (limb_ops::bit(c.six_u_plus_2, i)) {
      lambda = chord_slope(t, q);
      f = f * line_eval(lambda, t, p);
      t = affine_step(t, q, lambda);
    }
  }

  // Frobenius correction lines: q1 = pi(q), q2 = -pi^2(q).
  G2Affine q1 = G2Affine::from_xy(q.x.conjugate() * c.twist_frob_x,
                                  q.y.conjugate() * c.twist_frob_y);
  G2Affine q2 = G2Affine::from_xy(q.x.mul_fp(c.twist_frob2_x), q.y);

  Fp2 lambda = chord_slope(t, q1);
  f = f * line_eval(lambda, t, p);
  t = affine_step(t, q1, lambda);

  lambda = chord_slope(t, q2);
  f = f * line_eval(lambda, t, p);
  return f;
}

// f^((p^12 - 1) / r). Easy part, then the BN hard-part chain for positive u.
inline Fp12 final_exponentiation(const Fp12& f) {
  Fp12 t1 = f.conjugate() * f.inverse();
  t1 = t1.frobenius_p2() * t1;

  Fp12 fp1 = t1.frobenius();
  Fp12 fp2 = t1.frobenius_p2();
  Fp12 fp3 = fp2.frobenius();

  Fp12 fu1 = t1.pow_u64(kBnU);
  Fp12 fu2 = fu1.pow_u64(kBnU);
  Fp12 fu3 = fu2.pow_u64(kBnU);

  Fp12 y0 = fp1 * fp2 * fp3;
  Fp12 y1 = t1.conjugate();
  Fp12 y2 = fu2.frobenius_p2();
  Fp12 y3 = fu1.frobenius().conjugate();
  Fp12 y4 = (fu1 * fu2.frobenius()).conjugate();
  Fp12 y5 = fu2.conjugate();
  Fp12 y6 = (fu3 * fu3.frobenius()).conjugate();

  Fp12 t0 = y6.square() * y4 * y5;
  Fp12 acc = y3 * y5 * t0;
  t0 = t0 * y2;
  acc = (acc.square() * t0).square();
  t0 = acc * y1;
  acc = acc * y0;
  t0 = t0.square();
  return t0 * acc;
}

// Single asymmetric pairing e(P, Q); used by tests as a building block.
inline Fp12 ate_pairing(const G1Affine& p, const G2Affine& q) {
  return final_exponentiation(miller_loop(q, p));
}

}  // namespace mcabe
