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
#include <stdexcept>
#include <utility>
#include <vector>

// Plain-integer arithmetic mod a small prime. Deliberately shares no code
// with the production field: this is the oracle side of the Lagrange and
// sharing equivalence tests.
namespace smallfield {

inline long modpow(long base, long exp, long p) {
  long acc = 1 % p;
  base %= p;
  if (base < 0) base += p;
  while (exp > 0) {
    if (exp & 1) acc = acc * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return acc;
}

inline long modinv(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::domain_error("modinv(0)");
  return modpow(a, p - 2, p);
}

inline long poly_eval(const std::vector<long>& coeffs, long x, long p) {
  long acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc * x + *it) % p;
  return acc;
}

// Brute-force Lagrange interpolation at zero.
inline long lagrange_at_zero(const std::vector<std::pair<long, long>>& points, long p) {
  long acc = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    long num = 1, den = 1;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      num = num * ((p - points[j].first) % p) % p;
      den = den * ((points[i].first - points[j].first) % p + p) % p;
    }
    acc = (acc + points[i].second % p * num % p * modinv(den, p)) % p;
  }
  return acc;
}

// Field wrapper satisfying the interface of the production Lagrange/sharing
// templates, so those algorithms can run over the test fields.
template <long P>
struct Fe {
  long v = 0;

  static Fe one() { return {1}; }
  static Fe from_u64(std::uint64_t x) { return {static_cast<long>(x % P)}; }
  static Fe from_long(long x) {
    long r = x % P;
    if (r < 0) r += P;
    return {r};
  }

  bool is_zero() const { return v == 0; }

  friend Fe operator+(Fe a, Fe b) { return {(a.v + b.v) % P}; }
  friend Fe operator-(Fe a, Fe b) { return {(a.v - b.v % P + P) % P}; }
  friend Fe operator*(Fe a, Fe b) { return {a.v * b.v % P}; }
  Fe operator-() const { return {(P - v) % P}; }

  Fe inverse() const { return {modinv(v, P)}; }

  friend bool operator==(Fe a, Fe b) { return a.v == b.v; }
  friend bool operator!=(Fe a, Fe b) { return a.v != b.v; }
};

using F13 = Fe<13>;
using F101 = Fe<101>;

}  // namespace smallfield
