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

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>

namespace mcabe {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Little-endian 4x64 limb vector; all field elements fit in 254 bits.
using Limbs = std::array<u64, 4>;

namespace limb_ops {

constexpr bool gte(const Limbs& a, const Limbs& b) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return true;
}

constexpr bool is_zero(const Limbs& a) {
  return a[0] == 0 && a[1] == 0 && a[2] == 0 && a[3] == 0;
}

// a + b, returns carry.
constexpr u64 add(Limbs& out, const Limbs& a, const Limbs& b) {
  u64 carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 t = static_cast<u128>(a[i]) + b[i] + carry;
    out[i] = static_cast<u64>(t);
    carry = static_cast<u64>(t >> 64);
  }
  return carry;
}

// a - b, returns borrow.
constexpr u64 sub(Limbs& out, const Limbs& a, const Limbs& b) {
  u64 borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 t = static_cast<u128>(a[i]) - b[i] - borrow;
    out[i] = static_cast<u64>(t);
    borrow = static_cast<u64>((t >> 64) & 1);
  }
  return borrow;
}

constexpr Limbs cond_sub(const Limbs& a, const Limbs& m) {
  if (!gte(a, m)) return a;
  Limbs r{};
  sub(r, a, m);
  return r;
}

// 2a mod m; requires a < m < 2^255.
constexpr Limbs double_mod(const Limbs& a, const Limbs& m) {
  Limbs r{};
  u64 carry = 0;
  for (int i = 0; i < 4; ++i) {
    u64 hi = a[i] >> 63;
    r[i] = (a[i] << 1) | carry;
    carry = hi;
  }
  // carry can be set only transiently for m close to 2^256; not for our moduli
  return cond_sub(r, m);
}

constexpr Limbs add_mod(const Limbs& a, const Limbs& b, const Limbs& m) {
  Limbs r{};
  add(r, a, b);
  return cond_sub(r, m);
}

constexpr bool bit(const Limbs& a, int i) {
  return (a[i / 64] >> (i % 64)) & 1;
}

constexpr int bit_length(const Limbs& a) {
  for (int i = 3; i >= 0; --i) {
    if (a[i] != 0) {
      int b = 0;
      u64 v = a[i];
      while (v) {
        ++b;
        v >>= 1;
      }
      return i * 64 + b;
    }
  }
  return 0;
}

// -m[0]^{-1} mod 2^64 via Newton iteration.
constexpr u64 neg_inv64(u64 m0) {
  u64 x = m0;  // 3-bit correct seed for odd m0
  for (int i = 0; i < 6; ++i) x *= 2 - m0 * x;
  return ~x + 1;
}

// 2^(256+extra_doublings) mod m starting from 1.
constexpr Limbs pow2_mod(const Limbs& m, int doublings) {
  Limbs x{1, 0, 0, 0};
  for (int i = 0; i < doublings; ++i) x = double_mod(x, m);
  return x;
}

constexpr Limbs sub_small(const Limbs& a, u64 d) {
  Limbs r = a;
  u64 borrow = d;
  for (int i = 0; i < 4 && borrow; ++i) {
    u64 cur = r[i];
    r[i] = cur - borrow;
    borrow = cur < borrow ? 1 : 0;
  }
  return r;
}

constexpr Limbs add_small(const Limbs& a, u64 d) {
  Limbs r = a;
  u64 carry = d;
  for (int i = 0; i < 4 && carry; ++i) {
    u128 t = static_cast<u128>(r[i]) + carry;
    r[i] = static_cast<u64>(t);
    carry = static_cast<u64>(t >> 64);
  }
  return r;
}

// floor(a / d) for small d; remainder out-param.
constexpr Limbs div_small(const Limbs& a, u64 d, u64* rem = nullptr) {
  Limbs q{};
  u128 r = 0;
  for (int i = 3; i >= 0; --i) {
    u128 cur = (r << 64) | a[i];
    q[i] = static_cast<u64>(cur / d);
    r = cur % d;
  }
  if (rem) *rem = static_cast<u64>(r);
  return q;
}

constexpr Limbs shift_right1(const Limbs& a) {
  Limbs r{};
  for (int i = 0; i < 4; ++i) {
    r[i] = a[i] >> 1;
    if (i < 3) r[i] |= a[i + 1] << 63;
  }
  return r;
}

}  // namespace limb_ops

// Prime-field element in Montgomery form (R = 2^256). Tag supplies the
// modulus; everything else is derived at compile time.
template <typename Tag>
class Fe {
 public:
  static constexpr Limbs modulus = Tag::modulus;
  static constexpr u64 n0 = limb_ops::neg_inv64(Tag::modulus[0]);
  static constexpr Limbs r1 = limb_ops::pow2_mod(Tag::modulus, 256);
  static constexpr Limbs r2 = limb_ops::pow2_mod(Tag::modulus, 512);
  static constexpr Limbs modulus_minus_2 = limb_ops::sub_small(Tag::modulus, 2);
  static constexpr Limbs modulus_minus_1_half =
      limb_ops::shift_right1(limb_ops::sub_small(Tag::modulus, 1));
  static constexpr Limbs modulus_plus_1_quarter =
      limb_ops::shift_right1(limb_ops::shift_right1(limb_ops::add_small(Tag::modulus, 1)));

  constexpr Fe() : v_{0, 0, 0, 0} {}

  static constexpr Fe zero() { return Fe(); }
  static constexpr Fe one() { return from_montgomery_limbs(r1); }

  static Fe from_u64(u64 x) { return from_canonical(Limbs{x, 0, 0, 0}); }

  static Fe from_canonical(const Limbs& x) {
    Fe r;
    r.v_ = mont_mul(limb_ops::cond_sub(x, modulus), r2);
    return r;
  }

  static constexpr Fe from_montgomery_limbs(const Limbs& x) {
    Fe r;
    r.v_ = x;
    return r;
  }

  // Parses an unsigned decimal literal; used for embedded curve constants.
  static Fe from_decimal(std::string_view s) {
    Limbs acc{};
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
      Limbs x8 = acc;
      for (int i = 0; i < 3; ++i) x8 = limb_ops::double_mod(x8, modulus);
      acc = limb_ops::add_mod(x8, limb_ops::double_mod(acc, modulus), modulus);
      acc = limb_ops::add_mod(acc, Limbs{static_cast<u64>(c - '0'), 0, 0, 0}, modulus);
    }
    return from_canonical(acc);
  }

  Limbs canonical() const { return mont_mul(v_, Limbs{1, 0, 0, 0}); }

  void to_bytes(std::span<std::uint8_t, 32> out) const {
    Limbs c = canonical();
    for (int i = 0; i < 4; ++i) {
      u64 limb = c[3 - i];
      for (int j = 0; j < 8; ++j) out[i * 8 + j] = static_cast<std::uint8_t>(limb >> (56 - 8 * j));
    }
  }

  std::array<std::uint8_t, 32> to_bytes() const {
    std::array<std::uint8_t, 32> out{};
    to_bytes(out);
    return out;
  }

  // Rejects values >= modulus.
  static std::optional<Fe> from_bytes(std::span<const std::uint8_t, 32> in) {
    Limbs c{};
    for (int i = 0; i < 4; ++i) {
      u64 limb = 0;
      for (int j = 0; j < 8; ++j) limb = (limb << 8) | in[i * 8 + j];
      c[3 - i] = limb;
    }
    if (limb_ops::gte(c, modulus)) return std::nullopt;
    return from_canonical(c);
  }

  // Reduces a 64-byte big-endian string mod the modulus (negligible bias).
  static Fe from_bytes_wide(std::span<const std::uint8_t, 64> in) {
    Limbs acc{};
    for (std::uint8_t b : in) {
      for (int i = 0; i < 8; ++i) acc = limb_ops::double_mod(acc, modulus);
      acc = limb_ops::add_mod(acc, Limbs{b, 0, 0, 0}, modulus);
    }
    return from_canonical(acc);
  }

  bool is_zero() const { return limb_ops::is_zero(v_); }

  friend bool operator==(const Fe& a, const Fe& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Fe& a, const Fe& b) { return !(a.v_ == b.v_); }

  friend Fe operator+(const Fe& a, const Fe& b) {
    Fe r;
    r.v_ = limb_ops::add_mod(a.v_, b.v_, modulus);
    return r;
  }

  friend Fe operator-(const Fe& a, const Fe& b) {
    Fe r;
    u64 borrow = limb_ops::sub(r.v_, a.v_, b.v_);
    if (borrow) limb_ops::add(r.v_, r.v_, modulus);
    return r;
  }

  Fe operator-() const { return zero() - *this; }

  friend Fe operator*(const Fe& a, const Fe& b) {
    Fe r;
    r.v_ = mont_mul(a.v_, b.v_);
    return r;
  }

  Fe& operator+=(const Fe& o) { return *this = *this + o; }
  Fe& operator-=(const Fe& o) { return *this = *this - o; }
  Fe& operator*=(const Fe& o) { return *this = *this * o; }

  Fe square() const { return *this * *this; }

  Fe dbl() const {
    Fe r;
    r.v_ = limb_ops::double_mod(v_, modulus);
    return r;
  }

  Fe pow(const Limbs& e) const {
    Fe acc = one();
    int n = limb_ops::bit_length(e);
    for (int i = n - 1; i >= 0; --i) {
      acc = acc.square();
      if (limb_ops::bit(e, i)) acc = acc * *this;
    }
    return acc;
  }

  // Fermat inverse; error on zero.
  Fe inverse() const {
    if (is_zero()) throw std::domain_error("field inverse of zero");
    return pow(modulus_minus_2);
  }

  bool is_square() const {
    if (is_zero()) return true;
    return pow(modulus_minus_1_half) == one();
  }

  // Requires modulus == 3 (mod 4). Returns nullopt for non-residues.
  std::optional<Fe> sqrt() const {
    Fe cand = pow(modulus_plus_1_quarter);
    if (cand.square() != *this) return std::nullopt;
    return cand;
  }

  // Parity of the canonical integer; used to pick between y and -y.
  bool is_odd() const { return canonical()[0] & 1; }

  const Limbs& montgomery_limbs() const { return v_; }

 private:
  // CIOS Montgomery multiplication, result < modulus.
  static constexpr Limbs mont_mul(const Limbs& a, const Limbs& b) {
    u64 t[6] = {0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      u64 carry = 0;
      for (int j = 0; j < 4; ++j) {
        u128 cur = static_cast<u128>(a[j]) * b[i] + t[j] + carry;
        t[j] = static_cast<u64>(cur);
        carry = static_cast<u64>(cur >> 64);
      }
      u128 cur = static_cast<u128>(t[4]) + carry;
      t[4] = static_cast<u64>(cur);
      t[5] = static_cast<u64>(cur >> 64);

      u64 m = t[0] * n0;
      u128 acc = static_cast<u128>(t[0]) + static_cast<u128>(m) * modulus[0];
      carry = static_cast<u64>(acc >> 64);
      for (int j = 1; j < 4; ++j) {
        acc = static_cast<u128>(t[j]) + static_cast<u128>(m) * modulus[j] + carry;
        t[j - 1] = static_cast<u64>(acc);
        carry = static_cast<u64>(acc >> 64);
      }
      acc = static_cast<u128>(t[4]) + carry;
      t[3] = static_cast<u64>(acc);
      t[4] = t[5] + static_cast<u64>(acc >> 64);
    }
    Limbs r{t[0], t[1], t[2], t[3]};
    if (t[4] || limb_ops::gte(r, modulus)) limb_ops::sub(r, r, modulus);
    return r;
  }

  Limbs v_;
};

// BN254 (alt_bn128) base field.
struct BaseFieldTag {
  static constexpr Limbs modulus = {0x3c208c16d87cfd47ull, 0x97816a916871ca8dull,
                                    0xb85045b68181585dull, 0x30644e72e131a029ull};
};

// BN254 group order (scalar field).
struct ScalarFieldTag {
  static constexpr Limbs modulus = {0x43e1f593f0000001ull, 0x2833e84879b97091ull,
                                    0xb85045b68181585dull, 0x30644e72e131a029ull};
};

using Fp = Fe<BaseFieldTag>;
using Fr = Fe<ScalarFieldTag>;

// BN parameter u with p = 36u^4 + 36u^3 + 24u^2 + 6u + 1.
inline constexpr u64 kBnU = 0x44e992b44a6909f1ull;

}  // namespace mcabe
