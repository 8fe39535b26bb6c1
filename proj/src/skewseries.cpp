#include "iwk1/skewseries.hpp"

#include <algorithm>

namespace iwk1 {

SkewRing::SkewRing(const GroupDef& def, const CoeffRing& O, int dneg, int dpos)
    : def_(&def), O_(&O), dneg_(dneg), dpos_(dpos) {
  if (dneg > 0 || dpos < 0 || dpos < dneg) fail(errc::invalid_input, "SkewRing: bad window");
  act_ = def.gamma_action;
  act_inv_.assign(def.nH, 0);
  for (int h = 0; h < def.nH; ++h) act_inv_[act_[h]] = h;
  // minimal N with delta^N = 0 mod p on Lambda(H); N <= p^e
  n_delta_ = 1;
  {
    u64 pe = ipow(def.p, def.e);
    std::vector<std::vector<u64>> basis;  // delta^N of each basis element, mod p
    for (int h = 0; h < def.nH; ++h) {
      std::vector<u64> v(def.nH, 0);
      v[h] = 1;
      basis.push_back(v);
    }
    for (unsigned N = 1; N <= pe + 1; ++N) {
      // apply delta mod p
      bool all_zero = true;
      for (auto& v : basis) {
        std::vector<u64> nv(def.nH, 0);
        for (int h = 0; h < def.nH; ++h) {
          if (!v[h]) continue;
          nv[act_[h]] = (nv[act_[h]] + v[h]) % def.p;
          nv[h] = (nv[h] + def.p - v[h] % def.p) % def.p;
        }
        v = nv;
        for (u64 x : v) all_zero &= (x == 0);
      }
      if (all_zero) {
        n_delta_ = N;
        break;
      }
      n_delta_ = N + 1;
    }
  }
}

std::vector<u64> SkewRing::hzero() const {
  return std::vector<u64>((size_t)def_->nH * O_->f(), 0);
}

void SkewRing::hmul_acc(std::vector<u64>& dst, const std::vector<u64>& x,
                        const std::vector<u64>& y) const {
  unsigned ff = O_->f();
  for (int i = 0; i < def_->nH; ++i) {
    bool z = true;
    for (unsigned j = 0; j < ff; ++j) z &= (x[(size_t)i * ff + j] == 0);
    if (z) continue;
    for (int j2 = 0; j2 < def_->nH; ++j2) {
      bool z2 = true;
      for (unsigned j = 0; j < ff; ++j) z2 &= (y[(size_t)j2 * ff + j] == 0);
      if (z2) continue;
      int k = def_->hmul(i, j2);
      O_->smul_acc(&dst[(size_t)k * ff], &x[(size_t)i * ff], &y[(size_t)j2 * ff]);
    }
  }
}

std::vector<u64> SkewRing::sigma_h(const std::vector<u64>& x, bool inverse) const {
  std::vector<u64> r = hzero();
  unsigned ff = O_->f();
  const std::vector<int>& a = inverse ? act_inv_ : act_;
  for (int h = 0; h < def_->nH; ++h)
    for (unsigned j = 0; j < ff; ++j) r[(size_t)a[h] * ff + j] = x[(size_t)h * ff + j];
  return r;
}

std::vector<u64> SkewRing::delta_h(const std::vector<u64>& x) const {
  std::vector<u64> r = sigma_h(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] = O_->mod().sub(r[i], x[i]);
  return r;
}

bool SkewRing::h_is_zero(const std::vector<u64>& x) const {
  return std::all_of(x.begin(), x.end(), [](u64 v) { return v == 0; });
}

bool SkewRing::h_is_unit(const std::vector<u64>& x) const {
  CoeffElt s = O_->zero();
  for (int h = 0; h < def_->nH; ++h) O_->sadd(s.c.data(), &x[(size_t)h * O_->f()]);
  return O_->is_unit(s);
}

std::vector<u64> SkewRing::h_invert(const std::vector<u64>& x) const {
  // local ring: x = aug * (1 + j) with j in the radical
  CoeffElt s = O_->zero();
  for (int h = 0; h < def_->nH; ++h) O_->sadd(s.c.data(), &x[(size_t)h * O_->f()]);
  CoeffElt si = O_->inv(s);
  std::vector<u64> u = hzero();
  unsigned ff = O_->f();
  for (int h = 0; h < def_->nH; ++h) {
    std::vector<u64> t(ff, 0);
    O_->smul_acc(t.data(), &x[(size_t)h * ff], si.c.data());
    for (unsigned j = 0; j < ff; ++j) u[(size_t)h * ff + j] = t[j];
  }
  std::vector<u64> j = u;
  O_->ssub(&j[0], O_->one().c.data());  // j = u - 1 (identity slice at h = 0)
  std::vector<u64> acc = hzero(), pw = hzero();
  acc[0] = 1;
  pw[0] = 1;
  u64 cap = (u64)(def_->nH + 1) * (O_->K() + 2) + 8;
  for (u64 m = 1; m <= cap; ++m) {
    std::vector<u64> np = hzero();
    hmul_acc(np, pw, j);
    pw = np;
    if (h_is_zero(pw)) break;
    if (m % 2)
      for (size_t i = 0; i < acc.size(); ++i) acc[i] = O_->mod().sub(acc[i], pw[i]);
    else
      for (size_t i = 0; i < acc.size(); ++i) acc[i] = O_->mod().add(acc[i], pw[i]);
    if (m == cap) fail(errc::not_a_unit, "h_invert: series did not terminate");
  }
  std::vector<u64> r = hzero();
  for (int h = 0; h < def_->nH; ++h) {
    std::vector<u64> t(ff, 0);
    O_->smul_acc(t.data(), &acc[(size_t)h * ff], si.c.data());
    for (unsigned jj = 0; jj < ff; ++jj) r[(size_t)h * ff + jj] = t[jj];
  }
  return r;
}

SkewElt SkewRing::zero() const { return SkewElt{0, {}, O_->K()}; }

SkewElt SkewRing::one() const {
  SkewElt e = zero();
  e.a.push_back(hzero());
  e.a[0][0] = 1;
  return e;
}

SkewElt SkewRing::t_pow(int j) const {
  SkewElt e = one();
  e.lo = j;
  return e;
}

SkewElt SkewRing::from_h(int h, const CoeffElt& c, int deg) const {
  SkewElt e = zero();
  e.lo = deg;
  e.a.push_back(hzero());
  for (unsigned j = 0; j < O_->f(); ++j) e.a[0][(size_t)h * O_->f() + j] = c.c[j];
  e.cert = std::min((unsigned)O_->K(), c.cert);
  return e;
}

SkewElt SkewRing::prune(SkewElt x) const {
  while (!x.a.empty() && h_is_zero(x.a.back())) x.a.pop_back();
  while (!x.a.empty() && h_is_zero(x.a.front())) {
    x.a.erase(x.a.begin());
    ++x.lo;
  }
  if (x.a.empty()) x.lo = 0;
  if (x.a.size() > 4096) fail(errc::window_overflow, "skew support cap exceeded");
  return x;
}

SkewElt SkewRing::add(const SkewElt& x, const SkewElt& y) const {
  if (x.a.empty()) {
    SkewElt r = y;
    r.cert = std::min(x.cert, y.cert);
    return r;
  }
  if (y.a.empty()) {
    SkewElt r = x;
    r.cert = std::min(x.cert, y.cert);
    return r;
  }
  int lo = std::min(x.lo, y.lo);
  int hi = std::max(x.lo + (int)x.a.size(), y.lo + (int)y.a.size());
  SkewElt r;
  r.lo = lo;
  r.cert = std::min(x.cert, y.cert);
  r.a.assign(hi - lo, hzero());
  for (size_t i = 0; i < x.a.size(); ++i)
    for (size_t j = 0; j < x.a[i].size(); ++j)
      r.a[x.lo - lo + i][j] = O_->mod().add(r.a[x.lo - lo + i][j], x.a[i][j]);
  for (size_t i = 0; i < y.a.size(); ++i)
    for (size_t j = 0; j < y.a[i].size(); ++j)
      r.a[y.lo - lo + i][j] = O_->mod().add(r.a[y.lo - lo + i][j], y.a[i][j]);
  return prune(std::move(r));
}

SkewElt SkewRing::neg(const SkewElt& x) const {
  SkewElt r = x;
  for (auto& s : r.a)
    for (auto& v : s) v = O_->mod().neg(v);
  return r;
}

SkewElt SkewRing::sub(const SkewElt& x, const SkewElt& y) const { return add(x, neg(y)); }

bool SkewRing::is_zero(const SkewElt& x) const {
  for (auto& s : x.a)
    if (!h_is_zero(s)) return false;
  return true;
}

bool SkewRing::equal_at(const SkewElt& x, const SkewElt& y, unsigned prec) const {
  SkewElt d = sub(x, y);
  u64 m = ipow(O_->p(), std::min(prec, O_->K()));
  for (auto& s : d.a)
    for (u64 v : s)
      if (v % m) return false;
  return true;
}

SkewElt SkewRing::tmul(const SkewElt& x) const {
  // t (a t^m) = sigma(a) t^(m+1) + delta(a) t^m
  SkewElt r;
  r.lo = x.lo;
  r.cert = x.cert;
  r.a.assign(x.a.size() + 1, hzero());
  for (size_t i = 0; i < x.a.size(); ++i) {
    std::vector<u64> s = sigma_h(x.a[i]);
    std::vector<u64> d = delta_h(x.a[i]);
    for (size_t j = 0; j < s.size(); ++j) {
      r.a[i + 1][j] = O_->mod().add(r.a[i + 1][j], s[j]);
      r.a[i][j] = O_->mod().add(r.a[i][j], d[j]);
    }
  }
  return prune(std::move(r));
}

SkewElt SkewRing::tinv_mul(const SkewElt& x) const {
  // t^-1 (a t^m) = sum_{r>=1} b_r t^(m-r), b_1 = sigma^-1(a),
  // b_{r+1} = -sigma^-1 delta (b_r); terminates mod p^K by delta-nilpotence
  SkewElt acc = zero();
  u64 cap = (u64)(n_delta_ + 1) * (O_->K() + 1) + 4;
  for (size_t i = 0; i < x.a.size(); ++i) {
    if (h_is_zero(x.a[i])) continue;
    std::vector<u64> b = sigma_h(x.a[i], true);
    int m = x.lo + (int)i;
    for (u64 r = 1; r <= cap; ++r) {
      if (h_is_zero(b)) break;
      SkewElt term;
      term.lo = m - (int)r;
      term.cert = x.cert;
      term.a.push_back(b);
      acc = add(acc, term);
      std::vector<u64> nb = sigma_h(delta_h(b), true);
      for (auto& v : nb) v = O_->mod().neg(v);
      b = nb;
      if (r == cap && !h_is_zero(b))
        fail(errc::precision_exhausted, "tinv_mul: tail did not terminate");
    }
  }
  acc.cert = x.cert;
  return acc;
}

SkewElt SkewRing::mul(const SkewElt& x, const SkewElt& y) const {
  SkewElt acc = zero();
  acc.cert = std::min(x.cert, y.cert);
  for (size_t jy = 0; jy < y.a.size(); ++jy) {
    if (h_is_zero(y.a[jy])) continue;
    int degy = y.lo + (int)jy;
    // w = x * b where b = y.a[jy] at degree 0: sum_i a_i (t^i b), then shift
    SkewElt b;
    b.lo = 0;
    b.cert = y.cert;
    b.a.push_back(y.a[jy]);
    // t^i b for the needed range of i
    SkewElt cur = b;  // t^0 b
    // nonnegative degrees of x
    for (int i = 0; i <= (x.a.empty() ? -1 : x.lo + (int)x.a.size() - 1); ++i) {
      if (i >= x.lo && i - x.lo < (int)x.a.size() && !h_is_zero(x.a[i - x.lo])) {
        // acc += a_i * cur shifted by degy
        for (size_t s = 0; s < cur.a.size(); ++s) {
          if (h_is_zero(cur.a[s])) continue;
          std::vector<u64> t = hzero();
          hmul_acc(t, x.a[i - x.lo], cur.a[s]);
          SkewElt term;
          term.lo = cur.lo + (int)s + degy;
          term.cert = acc.cert;
          term.a.push_back(std::move(t));
          acc = add(acc, term);
        }
      }
      cur = tmul(cur);
    }
    // negative degrees of x
    cur = b;
    for (int i = -1; i >= x.lo; --i) {
      cur = tinv_mul(cur);
      if (i - x.lo >= 0 && i - x.lo < (int)x.a.size() && !h_is_zero(x.a[i - x.lo])) {
        for (size_t s = 0; s < cur.a.size(); ++s) {
          if (h_is_zero(cur.a[s])) continue;
          std::vector<u64> t = hzero();
          hmul_acc(t, x.a[i - x.lo], cur.a[s]);
          SkewElt term;
          term.lo = cur.lo + (int)s + degy;
          term.cert = acc.cert;
          term.a.push_back(std::move(t));
          acc = add(acc, term);
        }
      }
    }
  }
  unsigned c = std::min(x.cert, y.cert);
  acc.cert = c;
  return acc;
}

SkewElt SkewRing::clip(SkewElt x) const {
  x = prune(std::move(x));
  if (x.a.empty()) return x;
  int hi = x.lo + (int)x.a.size() - 1;
  // positive overflow: dropping a coefficient visible at the certified
  // precision is an error, invisible ones drop silently
  while (hi > dpos_) {
    const auto& s = x.a.back();
    unsigned v = O_->K();
    for (u64 c : s) v = std::min(v, O_->mod().v(c));
    if (v < x.cert)
      fail(errc::window_overflow, "skew_mul: degree above the configured window");
    x.a.pop_back();
    --hi;
  }
  // negative side: truncation loss certified by the dropped valuations
  while (!x.a.empty() && x.lo < dneg_) {
    const auto& s = x.a.front();
    unsigned v = O_->K();
    for (u64 c : s) v = std::min(v, O_->mod().v(c));
    x.cert = std::min(x.cert, v);
    x.a.erase(x.a.begin());
    ++x.lo;
  }
  return prune(std::move(x));
}

bool SkewRing::is_unit(const SkewElt& x) const {
  for (auto& s : x.a)
    if (h_is_unit(s)) return true;
  return false;
}

SkewElt SkewRing::invert_unit(const SkewElt& x) const {
  // pivot at the highest degree carrying a unit coefficient:
  // x = (1 + c) a_m t^m with the positive part of c radical-valued
  int m = -1;
  std::vector<u64> lead;
  for (int i = (int)x.a.size() - 1; i >= 0; --i)
    if (h_is_unit(x.a[i])) {
      m = x.lo + i;
      lead = x.a[i];
      break;
    }
  if (m == -1) fail(errc::not_a_unit, "invert_unit: all coefficients in the radical");
  // E = (a_m t^m)^-1 = t^-m a_m^-1
  SkewElt E;
  E.lo = 0;
  E.cert = x.cert;
  E.a.push_back(h_invert(lead));
  for (int i = 0; i < m; ++i) E = tinv_mul(E);
  for (int i = 0; i > m; --i) E = tmul(E);
  SkewElt c = sub(mul(x, E), one());
  SkewElt series = one();
  SkewElt pw = one();
  u64 cap = (u64)(def_->nH + n_delta_ + 2) * (O_->K() + 2) * 2 + 16;
  for (u64 r = 1; r <= cap; ++r) {
    pw = mul(pw, c);
    if (is_zero(pw)) break;
    series = (r % 2) ? sub(series, pw) : add(series, pw);
    if (r == cap)
      fail(errc::window_overflow, "invert_unit: geometric series does not converge in the window");
  }
  SkewElt inv = mul(E, series);
  inv.cert = std::min(x.cert, inv.cert);
  return inv;
}

SkewElt SkewRing::pow(const SkewElt& x, i64 e) const {
  if (e < 0) return pow(invert_unit(x), -e);
  SkewElt r = one();
  r.cert = x.cert;
  SkewElt b = x;
  u64 ee = (u64)e;
  while (ee) {
    if (ee & 1) r = mul(r, b);
    b = mul(b, b);
    ee >>= 1;
  }
  return r;
}

GroupVec SkewRing::to_group_ring(const SkewElt& x, const Algebra& A) const {
  if (x.lo < 0 && !x.a.empty())
    fail(errc::precision_exhausted, "to_group_ring: negative degrees present");
  const Quotient& Q = A.Q();
  GroupVec g = A.gzero();
  g.cert = std::min(x.cert, g.cert);
  GroupVec tpow = A.gone();
  GroupVec tg = A.sub(A.gelt(Q.idx(0, 1), A.O().one()), A.gone());  // gamma - 1
  for (int d = 0; d < x.lo; ++d) tpow = A.gmulv(tpow, tg);
  for (size_t i = 0; i < x.a.size(); ++i) {
    if (!h_is_zero(x.a[i])) {
      GroupVec slice = A.gzero();
      for (int h = 0; h < def_->nH; ++h)
        for (unsigned j = 0; j < O_->f(); ++j)
          slice.c[(size_t)Q.idx(h, 0) * O_->f() + j] = x.a[i][(size_t)h * O_->f() + j];
      g = A.add(g, A.gmulv(slice, tpow));
    }
    tpow = A.gmulv(tpow, tg);
  }
  g.cert = std::min(x.cert, (unsigned)A.K());
  return g;
}

SkewElt SkewRing::from_group_ring(const Algebra& A, const GroupVec& y) const {
  const Quotient& Q = A.Q();
  i64 amod = Q.a_mod();
  // gamma^a = sum_j binom(a, j) t^j: invert the triangular binomial system
  std::vector<std::vector<u64>> binom((size_t)amod, std::vector<u64>((size_t)amod, 0));
  for (i64 a = 0; a < amod; ++a) {
    binom[a][0] = 1;
    for (i64 j = 1; j <= a; ++j)
      binom[a][j] = O_->mod().add(a > 0 ? binom[a - 1][j] : 0, (a > 0 && j > 0) ? binom[a - 1][j - 1] : 0);
  }
  SkewElt r = zero();
  r.cert = std::min(y.cert, (unsigned)O_->K());
  r.a.assign((size_t)amod, hzero());
  for (int h = 0; h < def_->nH; ++h)
    for (i64 a = 0; a < amod; ++a) {
      const u64* src = &y.c[(size_t)Q.idx(h, a) * O_->f()];
      bool z = true;
      for (unsigned j = 0; j < O_->f(); ++j) z &= (src[j] == 0);
      if (z) continue;
      for (i64 j = 0; j <= a; ++j) {
        if (!binom[a][j]) continue;
        std::vector<u64> t(O_->f());
        O_->smul_int(t.data(), src, binom[a][j]);
        O_->sadd(&r.a[(size_t)j][(size_t)h * O_->f()], t.data());
      }
    }
  return prune(std::move(r));
}

// ---- BZRing ----

BZElt BZRing::one() const {
  BZElt e;
  e.lo = 0;
  e.zfloor = 0;
  e.c.assign(O_->f(), 0);
  e.c[0] = 1;
  e.cert = O_->K();
  return e;
}

BZElt BZRing::mono(int deg, const CoeffElt& c) const {
  BZElt e;
  e.zfloor = 0;
  e.lo = deg;
  e.c = c.c;
  e.cert = std::min((unsigned)O_->K(), c.cert);
  return e;
}

BZElt BZRing::zpow(i64 w) const {
  BZElt e = one();
  e.zfloor = (int)w;
  return e;
}

BZElt BZRing::prune(BZElt x) const {
  unsigned ff = O_->f();
  auto zero_slice = [&](size_t i) {
    for (unsigned j = 0; j < ff; ++j)
      if (x.c[i * ff + j]) return false;
    return true;
  };
  while (!x.c.empty() && zero_slice(x.c.size() / ff - 1)) x.c.resize(x.c.size() - ff);
  size_t drop = 0;
  while (drop * ff < x.c.size() && zero_slice(drop)) ++drop;
  if (drop) {
    x.c.erase(x.c.begin(), x.c.begin() + drop * ff);
    x.lo += (int)drop;
  }
  if (x.c.empty()) {
    x.lo = 0;
    x.zfloor = 0;
  }
  check_cap(x.c.size() / std::max(1u, ff));
  return x;
}

void BZRing::align(BZElt& x, BZElt& y) const {
  int zf = std::min(x.zfloor, y.zfloor);
  unsigned ff = O_->f();
  auto expand = [&](BZElt& e) {
    while (e.zfloor > zf) {
      // multiply by (1 + s)
      if (e.c.empty()) {
        e.zfloor = zf;
        break;
      }
      std::vector<u64> nc(e.c.size() + ff, 0);
      for (size_t i = 0; i * ff < e.c.size(); ++i)
        for (unsigned j = 0; j < ff; ++j) {
          nc[i * ff + j] = O_->mod().add(nc[i * ff + j], e.c[i * ff + j]);
          nc[(i + 1) * ff + j] = O_->mod().add(nc[(i + 1) * ff + j], e.c[i * ff + j]);
        }
      e.c = std::move(nc);
      --e.zfloor;
    }
  };
  expand(x);
  expand(y);
}

BZElt BZRing::add(const BZElt& x0, const BZElt& y0) const {
  BZElt x = x0, y = y0;
  align(x, y);
  if (x.c.empty()) {
    y.cert = std::min(x0.cert, y0.cert);
    return prune(std::move(y));
  }
  if (y.c.empty()) {
    x.cert = std::min(x0.cert, y0.cert);
    return prune(std::move(x));
  }
  unsigned ff = O_->f();
  int lo = std::min(x.lo, y.lo);
  int hi = std::max(x.lo + (int)(x.c.size() / ff), y.lo + (int)(y.c.size() / ff));
  BZElt r;
  r.zfloor = x.zfloor;
  r.lo = lo;
  r.cert = std::min(x0.cert, y0.cert);
  r.c.assign((size_t)(hi - lo) * ff, 0);
  for (size_t i = 0; i * ff < x.c.size(); ++i)
    for (unsigned j = 0; j < ff; ++j) {
      size_t t = (size_t)(x.lo - lo + (int)i) * ff + j;
      r.c[t] = O_->mod().add(r.c[t], x.c[i * ff + j]);
    }
  for (size_t i = 0; i * ff < y.c.size(); ++i)
    for (unsigned j = 0; j < ff; ++j) {
      size_t t = (size_t)(y.lo - lo + (int)i) * ff + j;
      r.c[t] = O_->mod().add(r.c[t], y.c[i * ff + j]);
    }
  return prune(std::move(r));
}

BZElt BZRing::neg(BZElt x) const {
  for (auto& v : x.c) v = O_->mod().neg(v);
  return x;
}

BZElt BZRing::sub(const BZElt& x, const BZElt& y) const { return add(x, neg(y)); }

BZElt BZRing::mul(const BZElt& x, const BZElt& y) const {
  if (x.c.empty() || y.c.empty()) {
    BZElt r = zero();
    r.cert = std::min(x.cert, y.cert);
    return r;
  }
  unsigned ff = O_->f();
  BZElt r;
  r.zfloor = x.zfloor + y.zfloor;
  r.lo = x.lo + y.lo;
  r.cert = std::min(x.cert, y.cert);
  size_t nx = x.c.size() / ff, ny = y.c.size() / ff;
  r.c.assign((nx + ny - 1) * ff, 0);
  for (size_t i = 0; i < nx; ++i) {
    bool z = true;
    for (unsigned j = 0; j < ff; ++j) z &= (x.c[i * ff + j] == 0);
    if (z) continue;
    for (size_t k = 0; k < ny; ++k) O_->smul_acc(&r.c[(i + k) * ff], &x.c[i * ff], &y.c[k * ff]);
  }
  return prune(std::move(r));
}

BZElt BZRing::mul_int(BZElt x, u64 m) const {
  m = O_->mod().red(m);
  for (auto& v : x.c) v = O_->mod().mul(v, m);
  return prune(std::move(x));
}

BZElt BZRing::pow(const BZElt& x, u64 e) const {
  BZElt r = one();
  r.cert = x.cert;
  BZElt b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

bool BZRing::is_zero_at(const BZElt& x, unsigned prec) const {
  u64 m = ipow(O_->p(), std::min(prec, O_->K()));
  for (u64 v : x.c)
    if (v % m) return false;
  return true;
}

bool BZRing::equal_at(const BZElt& x, const BZElt& y, unsigned prec) const {
  return is_zero_at(sub(x, y), prec);
}

bool BZRing::is_unit(const BZElt& x) const {
  unsigned ff = O_->f();
  for (size_t i = 0; i * ff < x.c.size(); ++i) {
    CoeffElt e = O_->zero();
    for (unsigned j = 0; j < ff; ++j) e.c[j] = x.c[i * ff + j];
    if (O_->is_unit(e)) return true;
  }
  return false;
}

BZElt BZRing::invert(const BZElt& x) const {
  // A truncated B(Z)-element has a window-representable inverse exactly when
  // its reduction mod p is c s^v (1+s)^w; detect that factorization, peel it
  // off, and invert the remaining 1 + (p-divisible) part by a finite series.
  unsigned ff = O_->f();
  u64 p = O_->p();
  size_t n = x.c.size() / std::max(1u, ff);
  int v = -1, hi = -1;
  for (size_t i = 0; i < n; ++i) {
    bool nz = false;
    for (unsigned j = 0; j < ff; ++j) nz |= (x.c[i * ff + j] % p) != 0;
    if (nz && v < 0) v = (int)i;
    if (nz) hi = (int)i;
  }
  if (v < 0) fail(errc::not_a_unit, "BZ invert: all coefficients divisible by p");
  int w = hi - v;  // candidate (1+s)-power
  CoeffElt c0 = O_->zero();
  for (unsigned j = 0; j < ff; ++j) c0.c[j] = x.c[(size_t)v * ff + j];
  // verify x = c0 s^v (1+s)^w mod p
  {
    Mod fp(p, 1);
    std::vector<u64> bin(w + 1, 0);
    bin[0] = 1;
    for (int r = 1; r <= w; ++r)
      for (int j2 = r; j2 >= 0; --j2) bin[j2] = fp.add(j2 < r ? bin[j2] : 0, j2 ? bin[j2 - 1] : 0);
    for (size_t i = 0; i < n; ++i) {
      int d = (int)i - v;
      u64 expect = (d >= 0 && d <= w) ? bin[d] : 0;
      for (unsigned j = 0; j < ff; ++j) {
        u64 got = x.c[i * ff + j] % p;
        u64 want = (u64)((unsigned __int128)expect * (c0.c[j] % p) % p);
        if (got != want)
          fail(errc::not_a_unit, "BZ invert: reduction mod p is not c s^v (1+s)^w");
      }
    }
  }
  // E = c0^-1 s^-v (1+s)^(-w - zfloor)
  BZElt E = mono(-(x.lo + v), O_->inv(c0));
  E.zfloor = -w - x.zfloor;
  BZElt c = sub(mul(x, E), one());  // p-divisible by construction
  BZElt series = one(), pw = one();
  u64 cap = (u64)(O_->K() + 2) * (u64)(w + 4) + 32;
  for (u64 r = 1; r <= cap; ++r) {
    pw = mul(pw, c);
    if (pw.c.empty()) break;
    series = (r % 2) ? sub(series, pw) : add(series, pw);
    if (r == cap)
      fail(errc::window_overflow, "BZ invert: series does not converge in the window");
  }
  BZElt inv = mul(E, series);
  inv.cert = std::min(inv.cert, x.cert);
  return inv;
}

BZElt BZRing::phi(const BZElt& x) const {
  // s -> (1+s)^p - 1 on coefficients of s^j; zfloor -> p * zfloor
  unsigned ff = O_->f();
  BZElt S = sub(zpow((i64)O_->p()), one());  // (1+s)^p - 1
  BZElt Sinv;
  bool have_inv = false;
  BZElt r = zero();
  r.cert = x.cert;
  for (size_t i = 0; i * ff < x.c.size(); ++i) {
    CoeffElt e = O_->zero();
    for (unsigned j = 0; j < ff; ++j) e.c[j] = x.c[i * ff + j];
    if (std::all_of(e.c.begin(), e.c.end(), [](u64 v) { return v == 0; })) continue;
    CoeffElt fe = O_->frobenius(e);
    int j = x.lo + (int)i;
    BZElt term;
    if (j >= 0) {
      term = pow(S, (u64)j);
    } else {
      if (!have_inv) {
        Sinv = invert(S);
        have_inv = true;
      }
      term = pow(Sinv, (u64)(-j));
    }
    term = mul(term, mono(0, fe));
    r = add(r, term);
  }
  r.zfloor += (int)O_->p() * x.zfloor;
  r.cert = std::min(r.cert, x.cert);
  return prune(std::move(r));
}

BZElt BZRing::clip_window(BZElt x, int wlo, int whi) const {
  x = prune(std::move(x));
  if (x.c.empty()) return x;
  unsigned ff = O_->f();
  // expand a positive zfloor into the polynomial part first
  BZElt y = x;
  while (y.zfloor > 0) {
    std::vector<u64> nc(y.c.size() + ff, 0);
    for (size_t i = 0; i * ff < y.c.size(); ++i)
      for (unsigned j = 0; j < ff; ++j) {
        nc[i * ff + j] = O_->mod().add(nc[i * ff + j], y.c[i * ff + j]);
        nc[(i + 1) * ff + j] = O_->mod().add(nc[(i + 1) * ff + j], y.c[i * ff + j]);
      }
    y.c = std::move(nc);
    --y.zfloor;
  }
  while (!y.c.empty()) {
    int hi = y.lo + (int)(y.c.size() / ff) - 1;
    if (hi <= whi) break;
    unsigned v = O_->K();
    for (unsigned j = 0; j < ff; ++j) v = std::min(v, O_->mod().v(y.c[y.c.size() - ff + j]));
    y.cert = std::min(y.cert, v);
    y.c.resize(y.c.size() - ff);
  }
  while (!y.c.empty() && y.lo < wlo) {
    unsigned v = O_->K();
    for (unsigned j = 0; j < ff; ++j) v = std::min(v, O_->mod().v(y.c[j]));
    y.cert = std::min(y.cert, v);
    y.c.erase(y.c.begin(), y.c.begin() + ff);
    ++y.lo;
  }
  return prune(std::move(y));
}

}  // namespace iwk1
