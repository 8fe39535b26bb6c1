#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace iwk1 {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Error conditions named by the operation contracts.
enum class errc {
  invalid_input,
  not_divisible,
  not_subgroup,
  not_normal,
  not_cyclic,
  not_index_p,
  not_a_unit,
  window_overflow,
  precision_exhausted,
  m3a_violation,
  integrality_violation,
  h3_violation,
  not_in_ideal,
};

struct Error : std::runtime_error {
  errc code;
  Error(errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

[[noreturn]] inline void fail(errc c, const std::string& what) { throw Error(c, what); }

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_input: return "InvalidInput";
    case errc::not_divisible: return "NotDivisible";
    case errc::not_subgroup: return "NotSubgroup";
    case errc::not_normal: return "NotNormal";
    case errc::not_cyclic: return "NotCyclic";
    case errc::not_index_p: return "NotIndexP";
    case errc::not_a_unit: return "NotAUnit";
    case errc::window_overflow: return "WindowOverflow";
    case errc::precision_exhausted: return "PrecisionExhausted";
    case errc::m3a_violation: return "M3aViolation";
    case errc::integrality_violation: return "IntegralityViolation";
    case errc::h3_violation: return "H3Violation";
    case errc::not_in_ideal: return "NotInIdeal";
  }
  return "?";
}

// Arithmetic modulo p^K.  Moduli stay below 2^63; products route through
// 128-bit only when the modulus exceeds 32 bits.
struct Mod {
  u64 p = 0;
  unsigned K = 0;
  u64 m = 1;  // p^K
  bool wide = false;

  Mod() = default;
  Mod(u64 p_, unsigned K_) : p(p_), K(K_) {
    m = 1;
    for (unsigned i = 0; i < K; ++i) {
      if (m > (u64(1) << 62) / p) fail(errc::invalid_input, "modulus p^K overflows");
      m *= p;
    }
    wide = (m >> 32) != 0;
  }

  u64 red(u64 a) const { return a % m; }
  u64 add(u64 a, u64 b) const { u64 s = a + b; return s >= m ? s - m : s; }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + m - b; }
  u64 neg(u64 a) const { return a ? m - a : 0; }
  u64 mul(u64 a, u64 b) const {
    if (!wide) return (a * b) % m;
    return u64((unsigned __int128)a * b % m);
  }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1 % m;
    a %= m;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  // valuation of a, capped at K (v(0) = K)
  unsigned v(u64 a) const {
    if (a % m == 0) return K;
    unsigned r = 0;
    a %= m;
    while (a % p == 0) { a /= p; ++r; }
    return r;
  }
  // inverse of a unit (a not divisible by p)
  u64 inv(u64 a) const {
    a %= m;
    if (a % p == 0) fail(errc::not_a_unit, "Mod::inv of non-unit");
    // Newton lift of the inverse mod p
    u64 x = inv_mod_p(a % p);
    u64 mm = p;
    while (mm < m) {
      mm = (mm > m / mm) ? m : mm * mm;  // square the modulus, capped
      // x <- x(2 - ax) mod mm (valid mod min(mm, m))
      u64 ax = wide ? u64((unsigned __int128)a * x % m) : (a * x) % m;
      u64 t = sub(2 % m, ax);
      x = mul(x, t);
    }
    return x;
  }
  // exact division by p^t; caller must ensure divisibility
  u64 div_pow(u64 a, unsigned t) const {
    u64 q = 1;
    for (unsigned i = 0; i < t; ++i) q *= p;
    if (a % q) fail(errc::not_divisible, "div_pow: value not divisible");
    return a / q;
  }

 private:
  u64 inv_mod_p(u64 a) const {
    // extended Euclid mod p
    i64 t = 0, nt = 1;
    i64 r = (i64)p, nr = (i64)(a % p);
    while (nr) {
      i64 q = r / nr;
      t -= q * nt; std::swap(t, nt);
      r -= q * nr; std::swap(r, nr);
    }
    if (t < 0) t += (i64)p;
    return (u64)t;
  }
};

// splitmix64; deterministic across platforms.
struct Rng {
  u64 s;
  explicit Rng(u64 seed) : s(seed) {}
  u64 next() {
    u64 z = (s += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  u64 below(u64 n) { return n ? next() % n : 0; }
};

inline u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

inline unsigned ilog_floor(u64 b, u64 x) {
  unsigned r = 0;
  while (x >= b) { x /= b; ++r; }
  return r;
}

}  // namespace iwk1
