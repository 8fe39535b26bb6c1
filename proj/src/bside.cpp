#include "iwk1/bside.hpp"

#include <algorithm>
#include <sstream>

namespace iwk1 {

BSide::BSide(const GroupDef& def, unsigned Kint, unsigned k, int wlo, int whi, unsigned f,
             std::vector<u64> minpoly)
    : def_(def),
      Q0_(def_, 0),
      O_(def.p, f, Kint, std::move(minpoly)),
      bz_(O_),
      skew_(def_, O_, -512, 1024),
      k_(k),
      wlo_(wlo),
      whi_(whi),
      pe_((i64)ipow(def.p, def.e)) {
  int n0 = Q0_.order();
  cr_rep_.assign((size_t)n0 * n0, 0);
  cr_zexp_.assign((size_t)n0 * n0, 0);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      GElt e = gmul(def_, lift0(i), lift0(j));
      int rep = Q0_.project_from(e);
      cr_rep_[(size_t)i * n0 + j] = rep;
      cr_zexp_[(size_t)i * n0 + j] = (int)zdiff(e.a, Q0_.aof(rep));
    }
}

// ---- crossed ----

Crossed BSide::cr_zero() const {
  Crossed x;
  x.comp.assign(Q0_.order(), bz_.zero());
  return x;
}

Crossed BSide::cr_one() const {
  Crossed x = cr_zero();
  x.comp[Q0_.one()] = bz_.one();
  return x;
}

Crossed BSide::cr_basis(int g0, const BZElt& c) const {
  Crossed x = cr_zero();
  x.comp[g0] = c;
  return x;
}

unsigned BSide::cr_cert(const Crossed& x) const {
  unsigned c = O_.K();
  for (auto& e : x.comp) c = std::min(c, e.cert);
  return c;
}

Crossed BSide::cr_add(const Crossed& x, const Crossed& y) const {
  if (x.scale != y.scale) fail(errc::invalid_input, "cr_add: scale mismatch");
  Crossed r = x;
  for (int i = 0; i < Q0_.order(); ++i) r.comp[i] = bz_.add(x.comp[i], y.comp[i]);
  return r;
}

Crossed BSide::cr_sub(const Crossed& x, const Crossed& y) const {
  if (x.scale != y.scale) fail(errc::invalid_input, "cr_sub: scale mismatch");
  Crossed r = x;
  for (int i = 0; i < Q0_.order(); ++i) r.comp[i] = bz_.sub(x.comp[i], y.comp[i]);
  return r;
}

Crossed BSide::cr_mul(const Crossed& x, const Crossed& y) const {
  Crossed r = cr_zero();
  r.scale = x.scale + y.scale;
  int n0 = Q0_.order();
  for (int i = 0; i < n0; ++i) {
    if (x.comp[i].c.empty()) continue;
    for (int j = 0; j < n0; ++j) {
      if (y.comp[j].c.empty()) continue;
      BZElt t = bz_.mul(x.comp[i], y.comp[j]);
      t = bz_.shift_z(std::move(t), cr_zexp_[(size_t)i * n0 + j]);
      int k2 = cr_rep_[(size_t)i * n0 + j];
      r.comp[k2] = bz_.add(r.comp[k2], t);
    }
  }
  return r;
}

Crossed BSide::cr_invert(const Crossed& x) const {
  // identity-dominant factorization x = D (1 + j)
  const BZElt& D = x.comp[Q0_.one()];
  if (!bz_.is_unit(D)) fail(errc::not_a_unit, "cr_invert: identity component not a unit");
  BZElt Di = bz_.invert(D);
  Crossed j = cr_zero();
  for (int i = 0; i < Q0_.order(); ++i) j.comp[i] = bz_.mul(x.comp[i], Di);
  j.comp[Q0_.one()] = bz_.sub(j.comp[Q0_.one()], bz_.one());
  Crossed acc = cr_one(), pw = cr_one();
  u64 cap = (u64)(Q0_.order() + 2) * (O_.K() + 2) * 2 + 16;
  for (u64 m = 1; m <= cap; ++m) {
    pw = cr_mul(pw, j);
    bool zero = true;
    for (auto& e : pw.comp) zero &= e.c.empty();
    if (zero) break;
    acc = (m % 2) ? cr_sub(acc, pw) : cr_add(acc, pw);
    if (m == cap) fail(errc::window_overflow, "cr_invert: series does not converge");
  }
  Crossed r = cr_zero();
  for (int i = 0; i < Q0_.order(); ++i) r.comp[i] = bz_.mul(acc.comp[i], Di);
  return r;
}

bool BSide::cr_equal_at(const Crossed& x, const Crossed& y, unsigned prec) const {
  if (x.scale != y.scale) fail(errc::invalid_input, "cr_equal_at: scale mismatch");
  for (int i = 0; i < Q0_.order(); ++i)
    if (!bz_.equal_at(x.comp[i], y.comp[i], prec)) return false;
  return true;
}

const Crossed& BSide::tinv_crossed() const {
  if (tinv_cr_) return *tinv_cr_;
  // t^-1 = t^(p^e - 1) * T^-1 with T = t^(p^e) (identity-dominant: its
  // identity B(Z)-coefficient is s * unit + ...)
  SkewElt tp = skew_.t_pow(1);
  SkewElt T = skew_.pow(tp, pe_);
  Crossed Tc = from_skew(T);
  Crossed Ti = cr_invert(Tc);
  Crossed tpow = from_skew(skew_.pow(tp, pe_ - 1));
  tinv_cr_ = std::make_unique<Crossed>(cr_mul(tpow, Ti));
  return *tinv_cr_;
}

Crossed BSide::from_skew(const SkewElt& x) const {
  // monomial h t^j with j >= 0: t^j = sum_i binom(j,i)(-1)^(j-i) gamma^i
  Crossed acc = cr_zero();
  unsigned cert = x.cert;
  const Mod& M = O_.mod();
  // positive part
  int hi = x.lo + (int)x.a.size() - 1;
  std::vector<std::vector<u64>> binom;
  if (hi >= 0) {
    binom.assign(hi + 1, std::vector<u64>(hi + 1, 0));
    for (int a = 0; a <= hi; ++a) {
      binom[a][0] = 1;
      for (int b = 1; b <= a; ++b)
        binom[a][b] = M.add(binom[a - 1][b - 1], b <= a - 1 ? binom[a - 1][b] : 0);
    }
  }
  Crossed neg_tail = cr_zero();
  for (size_t i = 0; i < x.a.size(); ++i) {
    int j = x.lo + (int)i;
    if (skew_.h_is_zero(x.a[i])) continue;
    if (j >= 0) {
      for (int g = 0; g <= j; ++g) {
        u64 b = binom[j][g];
        if (!b) continue;
        bool negsign = ((j - g) % 2) != 0;
        // gamma^g: element (0, g): rep (0, g mod p^e), z-exponent g / p^e
        int rep = Q0_.idx(0, g % pe_);
        i64 zx = g / pe_;
        for (int h = 0; h < def_.nH; ++h) {
          CoeffElt c = O_.zero();
          for (unsigned s = 0; s < O_.f(); ++s) c.c[s] = x.a[i][(size_t)h * O_.f() + s];
          if (std::all_of(c.c.begin(), c.c.end(), [](u64 v) { return v == 0; })) continue;
          BZElt coef = bz_.mono(0, c);
          coef = bz_.mul_int(std::move(coef), b);
          if (negsign) coef = bz_.neg(std::move(coef));
          coef = bz_.shift_z(std::move(coef), zx);
          // h * gamma^g: crossed product of basis elements
          Crossed term = cr_mul(cr_basis(Q0_.idx(h, 0), coef), cr_basis(rep, bz_.one()));
          acc = cr_add(acc, term);
        }
      }
    } else {
      // h t^j for j < 0: multiply by the crossed t^-1 power
      Crossed hc = cr_zero();
      for (int h = 0; h < def_.nH; ++h) {
        CoeffElt c = O_.zero();
        for (unsigned s = 0; s < O_.f(); ++s) c.c[s] = x.a[i][(size_t)h * O_.f() + s];
        hc.comp[Q0_.idx(h, 0)] = bz_.mono(0, c);
      }
      Crossed ti = tinv_crossed();
      Crossed tp = cr_one();
      for (int r = 0; r < -j; ++r) tp = cr_mul(tp, ti);
      neg_tail = cr_add(neg_tail, cr_mul(hc, tp));
    }
  }
  acc = cr_add(acc, neg_tail);
  for (auto& e : acc.comp) e.cert = std::min(e.cert, cert);
  return acc;
}

SkewElt BSide::to_skew(const Crossed& x) const {
  // basis element (h, a) = h gamma^a = h (1+t)^a; a B(Z)-coefficient
  // (1+s)^w s^j maps to (1+t)^(p^e w) ((1+t)^(p^e) - 1)^j
  SkewElt acc = skew_.zero();
  SkewElt S = skew_.sub(skew_.pow(skew_.add(skew_.one(), skew_.t_pow(1)), pe_), skew_.one());
  SkewElt Sinv;
  bool have_sinv = false;
  for (int g0 = 0; g0 < Q0_.order(); ++g0) {
    const BZElt& c = x.comp[g0];
    if (c.c.empty()) continue;
    SkewElt base = skew_.mul(skew_.from_h(Q0_.hof(g0), O_.one()),
                             skew_.pow(skew_.add(skew_.one(), skew_.t_pow(1)), Q0_.aof(g0)));
    unsigned ff = O_.f();
    for (size_t i = 0; i * ff < c.c.size(); ++i) {
      CoeffElt ce = O_.zero();
      for (unsigned s = 0; s < ff; ++s) ce.c[s] = c.c[i * ff + s];
      if (std::all_of(ce.c.begin(), ce.c.end(), [](u64 v) { return v == 0; })) continue;
      int j = c.lo + (int)i;
      SkewElt sj;
      if (j >= 0) {
        sj = skew_.pow(S, j);
      } else {
        if (!have_sinv) {
          Sinv = skew_.invert_unit(S);
          have_sinv = true;
        }
        sj = skew_.pow(Sinv, -j);
      }
      i64 w = c.zfloor;
      SkewElt zpart = skew_.one();
      if (w != 0) {
        SkewElt zg = skew_.pow(skew_.add(skew_.one(), skew_.t_pow(1)), pe_);  // 1 + s
        if (w > 0)
          zpart = skew_.pow(zg, w);
        else
          zpart = skew_.pow(skew_.invert_unit(zg), -w);
      }
      SkewElt term = skew_.mul(base, skew_.mul(zpart, skew_.mul(sj, skew_.from_h(0, ce))));
      acc = skew_.add(acc, term);
    }
  }
  return acc;
}

// ---- BAbel ----

const BSide::BaTable& BSide::ba_table(int uid0) const {
  auto it = ba_tab_.find(uid0);
  if (it != ba_tab_.end()) return it->second;
  BaTable T;
  i64 n = Q0_.ab_size(uid0);
  T.rep.assign((size_t)n * n, 0);
  T.zexp.assign((size_t)n * n, 0);
  for (i64 i = 0; i < n; ++i)
    for (i64 j = 0; j < n; ++j) {
      GElt e = gmul(def_, lift0(Q0_.ab_lift(uid0, (int)i)), lift0(Q0_.ab_lift(uid0, (int)j)));
      int rep = Q0_.ab_add(uid0, (int)i, (int)j);
      T.rep[(size_t)i * n + j] = rep;
      T.zexp[(size_t)i * n + j] =
          (int)zdiff(e.a, Q0_.aof(Q0_.ab_lift(uid0, rep)));
    }
  T.phi_rep.assign(n, 0);
  T.phi_zexp.assign(n, 0);
  for (i64 i = 0; i < n; ++i) {
    GElt l = lift0(Q0_.ab_lift(uid0, (int)i));
    GElt e = l;
    for (u64 s = 1; s < O_.p(); ++s) e = gmul(def_, e, l);
    int rep = Q0_.ab_scale(uid0, (int)i, (i64)O_.p());
    T.phi_rep[i] = rep;
    T.phi_zexp[i] = (int)zdiff(e.a, Q0_.aof(Q0_.ab_lift(uid0, rep)));
  }
  return ba_tab_.emplace(uid0, std::move(T)).first->second;
}

BAbel BSide::ba_zero(int uid0) const {
  BAbel x;
  x.uid0 = uid0;
  x.comp.assign(Q0_.ab_size(uid0), bz_.zero());
  return x;
}

BAbel BSide::ba_one(int uid0) const {
  BAbel x = ba_zero(uid0);
  x.comp[0] = bz_.one();
  return x;
}

BAbel BSide::ba_basis(int uid0, int idx, const BZElt& c) const {
  BAbel x = ba_zero(uid0);
  x.comp[idx] = c;
  return x;
}

unsigned BSide::ba_cert(const BAbel& x) const {
  unsigned c = O_.K();
  for (auto& e : x.comp) c = std::min(c, e.cert);
  return c;
}

BAbel BSide::ba_add(const BAbel& x, const BAbel& y) const {
  if (x.uid0 != y.uid0 || x.scale != y.scale) fail(errc::invalid_input, "ba_add: mismatch");
  BAbel r = x;
  for (size_t i = 0; i < x.comp.size(); ++i) r.comp[i] = bz_.add(x.comp[i], y.comp[i]);
  return r;
}

BAbel BSide::ba_sub(const BAbel& x, const BAbel& y) const {
  if (x.uid0 != y.uid0 || x.scale != y.scale) fail(errc::invalid_input, "ba_sub: mismatch");
  BAbel r = x;
  for (size_t i = 0; i < x.comp.size(); ++i) r.comp[i] = bz_.sub(x.comp[i], y.comp[i]);
  return r;
}

BAbel BSide::ba_mul(const BAbel& x, const BAbel& y) const {
  if (x.uid0 != y.uid0) fail(errc::invalid_input, "ba_mul: mismatch");
  const BaTable& T = ba_table(x.uid0);
  i64 n = Q0_.ab_size(x.uid0);
  BAbel r = ba_zero(x.uid0);
  r.scale = x.scale + y.scale;
  for (i64 i = 0; i < n; ++i) {
    if (x.comp[i].c.empty()) continue;
    for (i64 j = 0; j < n; ++j) {
      if (y.comp[j].c.empty()) continue;
      BZElt t = bz_.mul(x.comp[i], y.comp[j]);
      t = bz_.shift_z(std::move(t), T.zexp[(size_t)i * n + j]);
      int k2 = T.rep[(size_t)i * n + j];
      r.comp[k2] = bz_.add(r.comp[k2], t);
    }
  }
  return r;
}

BAbel BSide::ba_pow(const BAbel& x, u64 e) const {
  BAbel r = ba_one(x.uid0);
  BAbel b = x;
  while (e) {
    if (e & 1) r = ba_mul(r, b);
    b = ba_mul(b, b);
    e >>= 1;
  }
  return r;
}

BAbel BSide::ba_invert(const BAbel& x) const {
  if (x.scale) fail(errc::invalid_input, "ba_invert: scaled input");
  const BZElt& D = x.comp[0];
  if (!bz_.is_unit(D)) fail(errc::not_a_unit, "ba_invert: identity component not a unit");
  BZElt Di = bz_.invert(D);
  BAbel j = ba_zero(x.uid0);
  for (size_t i = 0; i < x.comp.size(); ++i) j.comp[i] = bz_.mul(x.comp[i], Di);
  j.comp[0] = bz_.sub(j.comp[0], bz_.one());
  BAbel acc = ba_one(x.uid0), pw = ba_one(x.uid0);
  u64 cap = (u64)(Q0_.ab_size(x.uid0) + 2) * (O_.K() + 2) * 2 + 16;
  for (u64 m = 1; m <= cap; ++m) {
    pw = ba_mul(pw, j);
    bool zero = true;
    for (auto& e : pw.comp) zero &= e.c.empty();
    if (zero) break;
    acc = (m % 2) ? ba_sub(acc, pw) : ba_add(acc, pw);
    if (m == cap) fail(errc::window_overflow, "ba_invert: series does not converge");
  }
  BAbel r = ba_zero(x.uid0);
  for (size_t i = 0; i < acc.comp.size(); ++i) r.comp[i] = bz_.mul(acc.comp[i], Di);
  return r;
}

bool BSide::ba_is_zero_at(const BAbel& x, unsigned prec) const {
  for (auto& e : x.comp)
    if (!bz_.is_zero_at(e, prec)) return false;
  return true;
}

bool BSide::ba_equal_at(const BAbel& x, const BAbel& y, unsigned prec) const {
  if (x.scale != y.scale) {
    // align scales by multiplying the lower one by p-powers
    BAbel a = x, b = y;
    int s = std::max(x.scale, y.scale);
    u64 m = ipow(O_.p(), (unsigned)(s - x.scale)) % O_.mod().m;
    for (auto& e : a.comp) e = bz_.mul_int(e, m);
    a.scale = s;
    m = ipow(O_.p(), (unsigned)(s - y.scale)) % O_.mod().m;
    for (auto& e : b.comp) e = bz_.mul_int(e, m);
    b.scale = s;
    return ba_equal_at(a, b, prec);
  }
  for (size_t i = 0; i < x.comp.size(); ++i)
    if (!bz_.equal_at(x.comp[i], y.comp[i], prec)) return false;
  return true;
}

BAbel BSide::ba_phi(const BAbel& x) const {
  const BaTable& T = ba_table(x.uid0);
  BAbel r = ba_zero(x.uid0);
  r.scale = x.scale;
  for (size_t i = 0; i < x.comp.size(); ++i) {
    if (x.comp[i].c.empty()) continue;
    BZElt t = bz_.phi(x.comp[i]);
    t = bz_.shift_z(std::move(t), T.phi_zexp[i]);
    r.comp[T.phi_rep[i]] = bz_.add(r.comp[T.phi_rep[i]], t);
  }
  return r;
}

BAbel BSide::ba_push(const BAbel& x, int Vid0) const {
  auto t = Q0_.incl_ab_map(x.uid0, Vid0);
  BAbel r = ba_zero(Vid0);
  r.scale = x.scale;
  for (size_t i = 0; i < x.comp.size(); ++i)
    if (!x.comp[i].c.empty()) r.comp[t[i]] = bz_.add(r.comp[t[i]], x.comp[i]);
  return r;
}

BAbel BSide::ba_restrict(const BAbel& x, int Sid0) const {
  auto t = Q0_.incl_ab_map(Sid0, x.uid0);
  std::vector<int> inv(Q0_.ab_size(x.uid0), -1);
  for (size_t i = 0; i < t.size(); ++i) inv[t[i]] = (int)i;
  BAbel r = ba_zero(Sid0);
  r.scale = x.scale;
  for (size_t i = 0; i < x.comp.size(); ++i) {
    if (x.comp[i].c.empty()) continue;
    if (inv[i] < 0) fail(errc::invalid_input, "ba_restrict: support leaves the subgroup");
    r.comp[inv[i]] = x.comp[i];
  }
  return r;
}

BAbel BSide::ba_conj(int g0, const BAbel& x) const {
  auto cmap = Q0_.conj_ab_map(g0, x.uid0);
  int tid = Q0_.conj_subgroup(g0, x.uid0);
  BAbel r = ba_zero(tid);
  r.scale = x.scale;
  for (size_t i = 0; i < x.comp.size(); ++i) r.comp[cmap[i]] = x.comp[i];
  return r;
}

BAbel BSide::ba_ver(int Vid0, int Uid0, const BAbel& x) const {
  if (x.uid0 != Vid0) fail(errc::invalid_input, "ba_ver: tag mismatch");
  unsigned mlog = ilog_floor(O_.p(), (u64)(Q0_.sub(Vid0).order / Q0_.sub(Uid0).order));
  auto R = Q0_.left_transversal(Vid0, Uid0);
  const Subgroup& U = Q0_.sub(Uid0);
  BAbel r = ba_zero(Uid0);
  r.scale = x.scale;
  for (i64 i = 0; i < Q0_.ab_size(Vid0); ++i) {
    if (x.comp[i].c.empty()) continue;
    int g = Q0_.ab_lift(Vid0, (int)i);
    // transfer cocycles with exact z-exponent tracked in the infinite model
    int tgt = 0;
    i64 a_total = 0;
    for (int h : R) {
      int gh = Q0_.mul(g, h);
      int hg = -1;
      for (int rr : R)
        if (U.mask[Q0_.mul(Q0_.inv(rr), gh)]) { hg = rr; break; }
      int c = Q0_.mul(Q0_.inv(hg), gh);
      tgt = Q0_.ab_add(Uid0, tgt, Q0_.ab_of(Uid0, c));
      GElt gc = gmul(def_, gmul(def_, ginv(def_, lift0(hg)), lift0(g)), lift0(h));
      a_total += gc.a;
    }
    i64 zx = zdiff(a_total, Q0_.aof(Q0_.ab_lift(Uid0, tgt)));
    BZElt t = x.comp[i];
    for (unsigned s = 0; s < mlog; ++s) t = bz_.phi(t);
    t = bz_.shift_z(std::move(t), zx);
    r.comp[tgt] = bz_.add(r.comp[tgt], t);
  }
  return r;
}

BAbel BSide::ba_log_1p(const BAbel& x) const {
  if (x.scale) fail(errc::invalid_input, "ba_log_1p: scaled input");
  BAbel j = ba_sub(x, ba_one(x.uid0));
  if (!ba_is_zero_at(j, 1)) fail(errc::not_in_ideal, "ba_log_1p: x != 1 mod p");
  // factor p out of every coefficient
  BAbel j1 = j;
  for (auto& e : j1.comp)
    for (auto& v : e.c) {
      if (v % O_.p()) fail(errc::not_divisible, "ba_log_1p: entry not divisible by p");
      v /= O_.p();
    }
  const Mod& M = O_.mod();
  u64 m_max = O_.K() + ilog_floor(O_.p(), O_.K()) + 3;
  BAbel pw = ba_one(x.uid0), acc = ba_zero(x.uid0);
  for (u64 m = 1; m <= m_max; ++m) {
    pw = ba_mul(pw, j1);
    unsigned vm = 0;
    u64 mm = m;
    while (mm % O_.p() == 0) { mm /= O_.p(); ++vm; }
    u64 coef = M.mul(ipow(O_.p(), (unsigned)std::min<u64>(m - vm, O_.K())) % M.m, M.inv(mm % M.m));
    if (m % 2 == 0) coef = M.neg(coef);
    if (!coef) continue;
    BAbel term = pw;
    for (auto& e : term.comp) e = bz_.mul_int(e, coef);
    acc = ba_add(acc, term);
  }
  return acc;
}

BAbel BSide::ba_norm(int Vid0, int Uid0, const BAbel& y) const {
  if (y.uid0 != Vid0) fail(errc::invalid_input, "ba_norm: tag mismatch");
  // coset decomposition of U^ab_0-image inside V^ab_0
  auto t = Q0_.incl_ab_map(Uid0, Vid0);
  i64 nV = Q0_.ab_size(Vid0);
  std::vector<int> inv(nV, -1);
  for (size_t i = 0; i < t.size(); ++i) inv[t[i]] = (int)i;
  std::vector<int> coset_of(nV, -1), reps;
  for (i64 v = 0; v < nV; ++v) {
    if (coset_of[v] >= 0) continue;
    int j = (int)reps.size();
    reps.push_back((int)v);
    for (size_t u = 0; u < t.size(); ++u) coset_of[Q0_.ab_add(Vid0, (int)v, t[u])] = j;
  }
  int m = (int)reps.size();
  std::vector<BAbel> Mx((size_t)m * m, ba_zero(Uid0));
  for (int i = 0; i < m; ++i)
    for (i64 v = 0; v < nV; ++v) {
      if (y.comp[v].c.empty()) continue;
      int sum = Q0_.ab_add(Vid0, reps[i], (int)v);
      int j = coset_of[sum];
      int udix = inv[Q0_.ab_add(Vid0, sum, Q0_.ab_neg(Vid0, reps[j]))];
      if (udix < 0) fail(errc::invalid_input, "ba_norm: decomposition failure");
      // exact z-exponent via infinite lifts
      GElt e = gmul(def_, lift0(Q0_.ab_lift(Vid0, reps[i])), lift0(Q0_.ab_lift(Vid0, (int)v)));
      i64 zx = zdiff(e.a, Q0_.aof(Q0_.ab_lift(Vid0, reps[j])) + Q0_.aof(Q0_.ab_lift(Uid0, udix)));
      BZElt c = bz_.shift_z(y.comp[v], zx);
      Mx[(size_t)i * m + j].comp[udix] = bz_.add(Mx[(size_t)i * m + j].comp[udix], c);
    }
  struct Ops {
    const BSide* B;
    int uid0;
    using Elt = BAbel;
    Elt zero() const { return B->ba_zero(uid0); }
    Elt one() const { return B->ba_one(uid0); }
    Elt add(const Elt& a, const Elt& b) const { return B->ba_add(a, b); }
    Elt mul(const Elt& a, const Elt& b) const { return B->ba_mul(a, b); }
    Elt neg(Elt a) const {
      for (auto& e : a.comp) e = B->bz_.neg(std::move(e));
      return a;
    }
  } ops{this, Uid0};
  return berkowitz_det(ops, Mx, m);
}

BAbel BSide::ba_alpha(const BAbel& y) const {
  const Subgroup& U = Q0_.sub(y.uid0);
  if (!U.cyclic_over_z) fail(errc::not_cyclic, "ba_alpha: U not in C(G,Z)");
  BAbel num = ba_pow(y, O_.p());
  BAbel den;
  if (U.order == 1) {  // U = Z (level-0 subgroup is trivial)
    den = ba_phi(y);
  } else {
    BAbel nm = ba_norm(y.uid0, U.uprime, y);
    den = ba_push(nm, y.uid0);
  }
  BAbel r = ba_mul(num, ba_invert(den));
  if (!ba_is_zero_at(ba_sub(r, ba_one(y.uid0)), 1))
    fail(errc::invalid_input, "ba_alpha: output not 1 mod p");
  return r;
}

std::vector<BZElt> BSide::ba_pi(int Vid0, int Uid0, const BAbel& aU) const {
  // project U^ab onto U/[V,V] inside V^ab (plain index table, no z twist)
  std::vector<char> seen(Q0_.ab_size(Vid0), 0);
  for (int u : Q0_.sub(Uid0).members) seen[Q0_.ab_of(Vid0, u)] = 1;
  std::vector<int> elems, pos(Q0_.ab_size(Vid0), -1);
  for (i64 i = 0; i < Q0_.ab_size(Vid0); ++i)
    if (seen[i]) {
      pos[i] = (int)elems.size();
      elems.push_back((int)i);
    }
  std::vector<BZElt> r(elems.size(), bz_.zero());
  auto t = Q0_.incl_ab_map(Uid0, Vid0);
  for (size_t i = 0; i < aU.comp.size(); ++i)
    if (!aU.comp[i].c.empty()) r[pos[t[i]]] = bz_.add(r[pos[t[i]]], aU.comp[i]);
  return r;
}

std::vector<BZElt> BSide::ba_tau(int Vid0, int Uid0, const BAbel& aV) const {
  std::vector<char> seen(Q0_.ab_size(Vid0), 0);
  for (int u : Q0_.sub(Uid0).members) seen[Q0_.ab_of(Vid0, u)] = 1;
  std::vector<int> elems, pos(Q0_.ab_size(Vid0), -1);
  for (i64 i = 0; i < Q0_.ab_size(Vid0); ++i)
    if (seen[i]) {
      pos[i] = (int)elems.size();
      elems.push_back((int)i);
    }
  int mult = (int)(Q0_.ab_size(Vid0) / (i64)elems.size());
  std::vector<BZElt> r(elems.size(), bz_.zero());
  for (size_t i = 0; i < aV.comp.size(); ++i) {
    if (aV.comp[i].c.empty() || pos[i] < 0) continue;
    r[pos[i]] = bz_.add(r[pos[i]], bz_.mul_int(aV.comp[i], (u64)mult));
  }
  return r;
}

std::vector<BZElt> BSide::ba_nu(int Vid0, int Uid0, const BAbel& yV) const {
  // determinant over the subring spanned by U/[V,V] inside V^ab
  std::vector<char> seen(Q0_.ab_size(Vid0), 0);
  for (int u : Q0_.sub(Uid0).members) seen[Q0_.ab_of(Vid0, u)] = 1;
  std::vector<int> elems, pos(Q0_.ab_size(Vid0), -1);
  for (i64 i = 0; i < Q0_.ab_size(Vid0); ++i)
    if (seen[i]) {
      pos[i] = (int)elems.size();
      elems.push_back((int)i);
    }
  i64 nV = Q0_.ab_size(Vid0);
  std::vector<int> coset_of(nV, -1), reps;
  for (i64 v = 0; v < nV; ++v) {
    if (coset_of[v] >= 0) continue;
    int j = (int)reps.size();
    reps.push_back((int)v);
    for (int s : elems) coset_of[Q0_.ab_add(Vid0, (int)v, s)] = j;
  }
  int m = (int)reps.size();
  size_t d = elems.size();
  std::vector<std::vector<BZElt>> Mx((size_t)m * m, std::vector<BZElt>(d, bz_.zero()));
  for (int i = 0; i < m; ++i)
    for (i64 v = 0; v < nV; ++v) {
      if (yV.comp[v].c.empty()) continue;
      int sum = Q0_.ab_add(Vid0, reps[i], (int)v);
      int j = coset_of[sum];
      int sidx = pos[Q0_.ab_add(Vid0, sum, Q0_.ab_neg(Vid0, reps[j]))];
      GElt e = gmul(def_, lift0(Q0_.ab_lift(Vid0, reps[i])), lift0(Q0_.ab_lift(Vid0, (int)v)));
      i64 zx = zdiff(e.a, Q0_.aof(Q0_.ab_lift(Vid0, reps[j])) +
                              Q0_.aof(Q0_.ab_lift(Vid0, elems[sidx])));
      Mx[(size_t)i * m + j][sidx] =
          bz_.add(Mx[(size_t)i * m + j][sidx], bz_.shift_z(yV.comp[v], zx));
    }
  struct Ops {
    const BSide* B;
    int Vid0;
    const std::vector<int>* elems;
    const std::vector<int>* pos;
    using Elt = std::vector<BZElt>;
    Elt zero() const { return Elt(elems->size(), B->bz_.zero()); }
    Elt one() const {
      Elt e = zero();
      e[0] = B->bz_.one();
      return e;
    }
    Elt add(const Elt& a, const Elt& b) const {
      Elt r = a;
      for (size_t i = 0; i < r.size(); ++i) r[i] = B->bz_.add(a[i], b[i]);
      return r;
    }
    Elt mul(const Elt& a, const Elt& b) const {
      Elt r = zero();
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].c.empty()) continue;
        for (size_t j = 0; j < b.size(); ++j) {
          if (b[j].c.empty()) continue;
          GElt e = gmul(B->def_, B->lift0(B->Q0_.ab_lift(Vid0, (*elems)[i])),
                        B->lift0(B->Q0_.ab_lift(Vid0, (*elems)[j])));
          int sum = B->Q0_.ab_add(Vid0, (*elems)[i], (*elems)[j]);
          i64 zx = B->zdiff(e.a, B->Q0_.aof(B->Q0_.ab_lift(Vid0, sum)));
          int k2 = (*pos)[sum];
          r[k2] = B->bz_.add(r[k2], B->bz_.shift_z(B->bz_.mul(a[i], b[j]), zx));
        }
      }
      return r;
    }
    Elt neg(Elt a) const {
      for (auto& e : a) e = B->bz_.neg(std::move(e));
      return a;
    }
  } ops{this, Vid0, &elems, &pos};
  return berkowitz_det(ops, Mx, m);
}

BSide::BMember BSide::ba_in_sigma_image(const std::vector<int>& transversal, const BAbel& w,
                                        unsigned extra_p) const {
  // orbit decomposition of the conjugation action on the U^ab_0 basis; the
  // image of sigma is spanned over B(Z) by |stab| * (orbit sums)
  BMember res;
  res.cert = std::min(k_, ba_cert(w));
  i64 n = Q0_.ab_size(w.uid0);
  std::vector<std::vector<int>> cmaps;
  for (int g : transversal) cmaps.push_back(Q0_.conj_ab_map(g, w.uid0));
  std::vector<char> done(n, 0);
  for (i64 b = 0; b < n; ++b) {
    if (done[b]) continue;
    std::vector<int> orbit;
    std::map<int, int> count;
    for (auto& cm : cmaps) count[cm[b]] += 1;
    for (auto& [e, c] : count) {
      orbit.push_back(e);
      done[e] = 1;
    }
    int stab = count.begin()->second;
    unsigned need = extra_p + (unsigned)ilog_floor(O_.p(), (u64)stab);
    // membership: all orbit coefficients equal and divisible by p^need
    const BZElt& first = w.comp[orbit[0]];
    for (int e : orbit)
      if (!bz_.equal_at(w.comp[e], first, res.cert)) {
        res.member = false;
        res.note = "orbit coefficients differ";
        return res;
      }
    if (need && !bz_.is_zero_at(first, std::min(need, res.cert))) {
      res.member = false;
      res.note = "orbit coefficient not divisible by the stabilizer index";
      return res;
    }
  }
  return res;
}

// ---- class side ----

BClass BSide::bc_zero() const {
  BClass x;
  x.comp.assign(Q0_.n_classes(), bz_.zero());
  return x;
}

unsigned BSide::bc_cert(const BClass& x) const {
  unsigned c = O_.K();
  for (auto& e : x.comp) c = std::min(c, e.cert);
  return c;
}

BClass BSide::bc_add(const BClass& x, const BClass& y) const {
  if (x.scale != y.scale) fail(errc::invalid_input, "bc_add: scale mismatch");
  BClass r = x;
  for (size_t i = 0; i < x.comp.size(); ++i) r.comp[i] = bz_.add(x.comp[i], y.comp[i]);
  return r;
}

BClass BSide::bc_sub(const BClass& x, const BClass& y) const {
  if (x.scale != y.scale) fail(errc::invalid_input, "bc_sub: scale mismatch");
  BClass r = x;
  for (size_t i = 0; i < x.comp.size(); ++i) r.comp[i] = bz_.sub(x.comp[i], y.comp[i]);
  return r;
}

bool BSide::bc_is_zero_at(const BClass& x, unsigned prec) const {
  for (auto& e : x.comp)
    if (!bz_.is_zero_at(e, prec)) return false;
  return true;
}

bool BSide::bc_equal_at(const BClass& x, const BClass& y, unsigned prec) const {
  if (x.scale != y.scale) {
    BClass a = x, b = y;
    int s = std::max(x.scale, y.scale);
    u64 m = ipow(O_.p(), (unsigned)(s - x.scale)) % O_.mod().m;
    for (auto& e : a.comp) e = bz_.mul_int(e, m);
    a.scale = s;
    m = ipow(O_.p(), (unsigned)(s - y.scale)) % O_.mod().m;
    for (auto& e : b.comp) e = bz_.mul_int(e, m);
    b.scale = s;
    return bc_equal_at(a, b, prec);
  }
  for (size_t i = 0; i < x.comp.size(); ++i)
    if (!bz_.equal_at(x.comp[i], y.comp[i], prec)) return false;
  return true;
}

BClass BSide::class_project(const Crossed& x) const {
  BClass r = bc_zero();
  r.scale = x.scale;
  for (int g0 = 0; g0 < Q0_.order(); ++g0) {
    if (x.comp[g0].c.empty()) continue;
    int c = Q0_.class_of(g0);
    // gamma-components agree inside a class, so no z-exponent appears
    if (Q0_.aof(g0) != Q0_.aof(Q0_.class_rep(c)))
      fail(errc::invalid_input, "class_project: representative convention broken");
    r.comp[c] = bz_.add(r.comp[c], x.comp[g0]);
  }
  return r;
}

BClass BSide::bc_phi(const BClass& x) const {
  BClass r = bc_zero();
  r.scale = x.scale;
  for (int c = 0; c < Q0_.n_classes(); ++c) {
    if (x.comp[c].c.empty()) continue;
    GElt l = lift0(Q0_.class_rep(c));
    GElt e = l;
    for (u64 s = 1; s < O_.p(); ++s) e = gmul(def_, e, l);
    int cp = Q0_.class_of(Q0_.project_from(e));
    i64 zx = zdiff(e.a, Q0_.aof(Q0_.class_rep(cp)));
    BZElt t = bz_.phi(x.comp[c]);
    t = bz_.shift_z(std::move(t), zx);
    r.comp[cp] = bz_.add(r.comp[cp], t);
  }
  return r;
}

BClass BSide::bc_descale(const BClass& x) const {
  if (x.scale == 0) return x;
  BClass r = x;
  u64 q = ipow(O_.p(), (unsigned)x.scale);
  for (auto& e : r.comp) {
    if (e.cert < (unsigned)x.scale)
      fail(errc::precision_exhausted, "bc_descale: certification below scale");
    for (auto& v : e.c) {
      if (v % q) fail(errc::integrality_violation, "bc_descale: value not integral");
      v /= q;
    }
    e.cert -= (unsigned)x.scale;
  }
  r.scale = 0;
  return r;
}

// ---- beta_B ----

const std::vector<std::vector<std::pair<int, int>>>& BSide::beta_table(int uid0) const {
  auto it = beta_tab_.find(uid0);
  if (it != beta_tab_.end()) return it->second;
  std::vector<std::vector<std::pair<int, int>>> T(Q0_.n_classes());
  auto R = Q0_.left_transversal(Q0_.id_G(), uid0);
  const Subgroup& U = Q0_.sub(uid0);
  for (int c = 0; c < Q0_.n_classes(); ++c) {
    int g = Q0_.class_rep(c);
    std::map<int, int> acc;
    for (int x : R) {
      int y = Q0_.mul(Q0_.mul(Q0_.inv(x), g), x);
      if (U.mpos[y] >= 0) acc[Q0_.ab_of(uid0, y)] += 1;
    }
    for (auto& [idx, mult] : acc) T[c].emplace_back(idx, mult);
  }
  return beta_tab_.emplace(uid0, std::move(T)).first->second;
}

BAbel BSide::beta_B_U(int uid0, const BClass& f) const {
  const auto& T = beta_table(uid0);
  BAbel r = ba_zero(uid0);
  r.scale = f.scale;
  for (int c = 0; c < Q0_.n_classes(); ++c) {
    if (f.comp[c].c.empty()) continue;
    for (auto& [idx, mult] : T[c])
      r.comp[idx] = bz_.add(r.comp[idx], bz_.mul_int(f.comp[c], (u64)mult));
  }
  return r;
}

BTuple BSide::beta_B(const BClass& f) const {
  BTuple t;
  for (int uid0 = 0; uid0 < Q0_.n_subgroups(); ++uid0) t.push_back(beta_B_U(uid0, f));
  return t;
}

// ---- theta_B ----

BAbel BSide::theta_B_U(int uid0, const Crossed& x) const {
  const Subgroup& U = Q0_.sub(uid0);
  auto reps = Q0_.right_transversal(Q0_.id_G(), uid0);
  int m = (int)reps.size();
  std::vector<int> coset_of(Q0_.order(), -1);
  for (size_t j = 0; j < reps.size(); ++j)
    for (int u : U.members) coset_of[Q0_.mul(u, reps[j])] = (int)j;
  std::vector<BAbel> Mx((size_t)m * m, ba_zero(uid0));
  for (int i = 0; i < m; ++i)
    for (int g0 = 0; g0 < Q0_.order(); ++g0) {
      if (x.comp[g0].c.empty()) continue;
      int t0 = Q0_.mul(reps[i], g0);
      int j = coset_of[t0];
      int u0 = Q0_.mul(t0, Q0_.inv(reps[j]));
      GElt e = gmul(def_, lift0(reps[i]), lift0(g0));
      // e = z^zx * lift(u0) * lift(s_j) in the infinite model
      i64 zx = zdiff(e.a, Q0_.aof(u0) + Q0_.aof(reps[j]));
      int idx = Q0_.ab_of(uid0, u0);
      BZElt c = bz_.shift_z(x.comp[g0], zx);
      Mx[(size_t)i * m + j].comp[idx] = bz_.add(Mx[(size_t)i * m + j].comp[idx], c);
    }
  struct Ops {
    const BSide* B;
    int uid0;
    using Elt = BAbel;
    Elt zero() const { return B->ba_zero(uid0); }
    Elt one() const { return B->ba_one(uid0); }
    Elt add(const Elt& a, const Elt& b) const { return B->ba_add(a, b); }
    Elt mul(const Elt& a, const Elt& b) const { return B->ba_mul(a, b); }
    Elt neg(Elt a) const {
      for (auto& e : a.comp) e = B->bz_.neg(std::move(e));
      return a;
    }
  } ops{this, uid0};
  return berkowitz_det(ops, Mx, m);
}

BTuple BSide::theta_B(const Crossed& x) const {
  BTuple t;
  for (int uid0 = 0; uid0 < Q0_.n_subgroups(); ++uid0) t.push_back(theta_B_U(uid0, x));
  return t;
}

// ---- L_B ----

BSide::BUnitParts BSide::b_unit_decompose(const SkewElt& x) const {
  BUnitParts parts;
  parts.ell = def_.e;
  // eps_H collapses the H-coordinates
  SkewElt red = skew_.zero();
  red.lo = x.lo;
  red.cert = x.cert;
  for (auto& s : x.a) {
    auto slice = skew_.hzero();
    CoeffElt sum = O_.zero();
    for (int h = 0; h < def_.nH; ++h) O_.sadd(sum.c.data(), &s[(size_t)h * O_.f()]);
    for (unsigned j = 0; j < O_.f(); ++j) slice[j] = sum.c[j];
    red.a.push_back(slice);
  }
  red = skew_.prune(std::move(red));
  if (!skew_.is_unit(red)) fail(errc::not_a_unit, "b_unit_decompose: reduction not a unit");
  parts.reduced = red;
  SkewElt ri = skew_.invert_unit(red);
  parts.one_part = skew_.mul(x, ri);
  return parts;
}

SkewElt BSide::phi_gamma(const SkewElt& y) const {
  // t -> (1+t)^p - 1 with phi on O; valid on B(Gamma)-elements (trivial H part)
  SkewElt S = skew_.sub(skew_.pow(skew_.add(skew_.one(), skew_.t_pow(1)), (i64)O_.p()),
                        skew_.one());
  SkewElt Sinv;
  bool have_inv = false;
  SkewElt acc = skew_.zero();
  for (size_t i = 0; i < y.a.size(); ++i) {
    if (skew_.h_is_zero(y.a[i])) continue;
    for (int h = 1; h < def_.nH; ++h)
      for (unsigned s = 0; s < O_.f(); ++s)
        if (y.a[i][(size_t)h * O_.f() + s])
          fail(errc::invalid_input, "phi_gamma: element not in B(Gamma)");
    CoeffElt c = O_.zero();
    for (unsigned s = 0; s < O_.f(); ++s) c.c[s] = y.a[i][s];
    CoeffElt fc = O_.frobenius(c);
    int j = y.lo + (int)i;
    SkewElt sj;
    if (j >= 0) {
      sj = skew_.pow(S, j);
    } else {
      if (!have_inv) {
        Sinv = skew_.invert_unit(S);
        have_inv = true;
      }
      sj = skew_.pow(Sinv, -j);
    }
    acc = skew_.add(acc, skew_.mul(sj, skew_.from_h(0, fc)));
  }
  acc.cert = std::min(acc.cert, y.cert);
  return acc;
}

BClass BSide::integral_log_LB(const SkewElt& x) const {
  BUnitParts parts = b_unit_decompose(x);
  // 1 + I_B part: log series in the skew ring, then class projection
  BClass Lv = bc_zero();
  int scale_v = 0;
  {
    SkewElt j = skew_.sub(parts.one_part, skew_.one());
    // series scale: denominators 1/m handled at a common power
    u64 m_max = (u64)(def_.nH + (int)skew_.n_delta() + 2) * (O_.K() + 2) + 8;
    unsigned c = ilog_floor(O_.p(), m_max) + 1;
    const Mod& M = O_.mod();
    SkewElt pw = skew_.one(), acc = skew_.zero();
    for (u64 m = 1; m <= m_max; ++m) {
      pw = skew_.mul(pw, j);
      if (skew_.is_zero(pw)) break;
      unsigned vm = 0;
      u64 mm = m;
      while (mm % O_.p() == 0) { mm /= O_.p(); ++vm; }
      u64 coef = M.mul(ipow(O_.p(), c - vm) % M.m, M.inv(mm % M.m));
      if (m % 2 == 0) coef = M.neg(coef);
      SkewElt term = pw;
      for (auto& s : term.a)
        for (auto& v : s) v = M.mul(v, coef);
      acc = skew_.add(acc, term);
      if (m == m_max && !skew_.is_zero(pw))
        fail(errc::precision_exhausted, "L_B: log series did not terminate");
    }
    Crossed accc = from_skew(acc);
    BClass lg = class_project(accc);
    lg.scale = (int)c;
    // L on this part: log - (1/p) phi(log)
    BClass ph = bc_phi(lg);
    // align scales: ph/p has scale c + 1
    BClass lg1 = lg;
    for (auto& e : lg1.comp) e = bz_.mul_int(e, O_.p());
    lg1.scale = (int)c + 1;
    ph.scale = (int)c + 1;
    Lv = bc_sub(lg1, ph);
    scale_v = (int)c + 1;
  }
  // B(Gamma) part: L(y) = (1/p) log(y^p / phi(y)) in t-coordinate B(Z)-arith
  BClass Lw = bc_zero();
  int scale_w = 0;
  {
    SkewElt y = parts.reduced;
    SkewElt num = skew_.pow(y, (i64)O_.p());
    SkewElt den = phi_gamma(y);
    SkewElt ratio = skew_.mul(num, skew_.invert_unit(den));
    SkewElt jj = skew_.sub(ratio, skew_.one());
    // must be 1 mod p
    {
      u64 q = O_.p();
      for (auto& s : jj.a)
        for (u64 v : s)
          if (v % q) fail(errc::integrality_violation, "L_B: y^p/phi(y) not 1 mod p");
    }
    // log(1 + jj) with p factored out of jj
    SkewElt j1 = jj;
    for (auto& s : j1.a)
      for (auto& v : s) v /= O_.p();
    const Mod& M = O_.mod();
    u64 m_max = O_.K() + ilog_floor(O_.p(), O_.K()) + 3;
    SkewElt pw = skew_.one(), acc = skew_.zero();
    for (u64 m = 1; m <= m_max; ++m) {
      pw = skew_.mul(pw, j1);
      unsigned vm = 0;
      u64 mm = m;
      while (mm % O_.p() == 0) { mm /= O_.p(); ++vm; }
      u64 coef = M.mul(ipow(O_.p(), (unsigned)std::min<u64>(m - vm, O_.K())) % M.m,
                       M.inv(mm % M.m));
      if (m % 2 == 0) coef = M.neg(coef);
      if (!coef) continue;
      SkewElt term = pw;
      for (auto& s : term.a)
        for (auto& v : s) v = M.mul(v, coef);
      acc = skew_.add(acc, term);
    }
    // value = acc / p
    Crossed accc = from_skew(acc);
    Lw = class_project(accc);
    Lw.scale = 1;
    scale_w = 1;
  }
  // combine at a common scale
  int S = std::max(scale_v, scale_w);
  auto lift_scale = [&](BClass& v, int from) {
    u64 mfac = ipow(O_.p(), (unsigned)(S - from)) % O_.mod().m;
    for (auto& e : v.comp) e = bz_.mul_int(e, mfac);
    v.scale = S;
  };
  lift_scale(Lv, scale_v);
  lift_scale(Lw, scale_w);
  BClass total = bc_add(Lv, Lw);
  return bc_descale(total);  // integrality per Prop. on the image of L_B
}

// ---- script_LB ----

void BSide::require_M3a_B(const BTuple& t) const {
  for (int uid0 = 0; uid0 < Q0_.n_subgroups(); ++uid0) {
    i64 uz = Q0_.sub(uid0).order;  // |U/Z| at level 0
    BAbel lhs = ba_pow(t[uid0], (u64)uz);
    BAbel xz = ba_push(t[Q0_.id_Z()], uid0);
    if (!ba_is_zero_at(ba_sub(lhs, xz), 1))
      fail(errc::m3a_violation, "B-tuple violates (M3a) at subgroup " + std::to_string(uid0));
  }
}

BAbel BSide::script_LB_V(const BTuple& t, int Vid0) const {
  i64 vz = Q0_.sub(Vid0).order;
  u64 expo = (u64)O_.p() * O_.p() * (u64)vz;
  BAbel num = ba_pow(t[Vid0], expo);
  BAbel den = ba_push(ba_phi(ba_pow(t[Q0_.id_Z()], O_.p())), Vid0);
  for (int wid : Q0_.sub(Vid0).pv) {
    const Subgroup& W = Q0_.sub(wid);
    BAbel aw = ba_alpha(t[wid]);
    BAbel paw = ba_phi(aw);
    BAbel pw = ba_restrict(paw, W.uprime);
    BAbel pushed = ba_push(pw, Vid0);
    den = ba_mul(den, ba_pow(pushed, (u64)W.order));
  }
  BAbel Qv = ba_mul(num, ba_invert(den));
  if (!ba_is_zero_at(ba_sub(Qv, ba_one(Vid0)), 1))
    fail(errc::m3a_violation, "script_LB: log argument not 1 mod p");
  BAbel lg = ba_log_1p(Qv);
  lg.scale += 2 + (int)ilog_floor(O_.p(), (u64)vz);
  return lg;
}

BTuple BSide::script_LB(const BTuple& t) const {
  require_M3a_B(t);
  BTuple r;
  for (int Vid0 = 0; Vid0 < Q0_.n_subgroups(); ++Vid0) r.push_back(script_LB_V(t, Vid0));
  return r;
}

// ---- checks ----

CheckReport BSide::check_A_B(const BTuple& t) const {
  CheckReport rep;
  rep.level = 0;
  rep.k = k_;
  for (int Vid = 0; Vid < Q0_.n_subgroups(); ++Vid)
    for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q0_.subset(Uid, Vid)) continue;
      bool comm_in_U = true;
      for (int c : Q0_.sub(Vid).comm)
        if (!Q0_.sub(Uid).mask[c]) comm_in_U = false;
      if (!comm_in_U) continue;
      auto lhs = ba_tau(Vid, Uid, t[Vid]);
      auto rhs = ba_pi(Vid, Uid, t[Uid]);
      CheckItem it;
      it.condition = "A1";
      it.subgroups = {Verify::label(Q0_, Uid), Verify::label(Q0_, Vid)};
      unsigned prec = std::min(k_, std::min(ba_cert(t[Vid]), ba_cert(t[Uid])));
      it.certified_precision = prec;
      it.pass = true;
      for (size_t i = 0; i < lhs.size(); ++i)
        it.pass = it.pass && bz_.equal_at(lhs[i], rhs[i], prec);
      rep.add(std::move(it));
    }
  for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
    CheckItem it;
    it.condition = "A2";
    it.subgroups = {Verify::label(Q0_, Uid)};
    unsigned prec = std::min(k_, ba_cert(t[Uid]));
    it.certified_precision = prec;
    it.pass = true;
    for (int g = 0; g < Q0_.order(); ++g) {
      int tid = Q0_.conj_subgroup(g, Uid);
      BAbel rhs = ba_conj(g, t[Uid]);
      it.pass = it.pass && ba_equal_at(t[tid], rhs, prec);
      if (!it.pass) break;
    }
    rep.add(std::move(it));
  }
  for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
    CheckItem it;
    it.condition = "A3";
    it.subgroups = {Verify::label(Q0_, Uid)};
    BAbel w = t[Uid];
    if (w.scale) {
      // integrality first
      try {
        for (auto& e : w.comp) {
          u64 q = ipow(O_.p(), (unsigned)w.scale);
          for (auto& v : e.c) {
            if (v % q) fail(errc::integrality_violation, "A3: not integral");
            v /= q;
          }
          e.cert -= (unsigned)w.scale;
        }
        w.scale = 0;
      } catch (const Error& e) {
        it.pass = false;
        it.witness = e.what();
        rep.add(std::move(it));
        continue;
      }
    }
    BMember m = ba_in_sigma_image(Q0_.sub(Uid).w_transversal, w, 0);
    it.pass = m.member;
    it.certified_precision = m.cert;
    it.witness = m.note;
    rep.add(std::move(it));
  }
  return rep;
}

CheckReport BSide::check_M_B(const BTuple& t) const {
  CheckReport rep;
  rep.level = 0;
  rep.k = k_;
  // (M1)
  for (int Vid = 0; Vid < Q0_.n_subgroups(); ++Vid)
    for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q0_.subset(Uid, Vid)) continue;
      bool comm_in_U = true;
      for (int c : Q0_.sub(Vid).comm)
        if (!Q0_.sub(Uid).mask[c]) comm_in_U = false;
      if (!comm_in_U) continue;
      auto lhs = ba_nu(Vid, Uid, t[Vid]);
      auto rhs = ba_pi(Vid, Uid, t[Uid]);
      CheckItem it;
      it.condition = "M1";
      it.subgroups = {Verify::label(Q0_, Uid), Verify::label(Q0_, Vid)};
      unsigned prec = std::min(k_, std::min(ba_cert(t[Vid]), ba_cert(t[Uid])));
      it.certified_precision = prec;
      it.pass = true;
      for (size_t i = 0; i < lhs.size(); ++i)
        it.pass = it.pass && bz_.equal_at(lhs[i], rhs[i], prec);
      rep.add(std::move(it));
      // (M1a) for abelian V
      if ((i64)Q0_.sub(Vid).n_uclasses == Q0_.sub(Vid).ab.size) {
        BAbel nm = ba_norm(Vid, Uid, t[Vid]);
        CheckItem it2;
        it2.condition = "M1a";
        it2.subgroups = {Verify::label(Q0_, Uid), Verify::label(Q0_, Vid)};
        it2.certified_precision = prec;
        it2.pass = ba_equal_at(nm, t[Uid], prec);
        rep.add(std::move(it2));
      }
    }
  // (M2)
  for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
    CheckItem it;
    it.condition = "M2";
    it.subgroups = {Verify::label(Q0_, Uid)};
    unsigned prec = std::min(k_, ba_cert(t[Uid]));
    it.certified_precision = prec;
    it.pass = true;
    for (int g = 0; g < Q0_.order(); ++g) {
      int tid = Q0_.conj_subgroup(g, Uid);
      it.pass = it.pass && ba_equal_at(t[tid], ba_conj(g, t[Uid]), prec);
      if (!it.pass) break;
    }
    rep.add(std::move(it));
  }
  // (M3)
  for (int Vid = 0; Vid < Q0_.n_subgroups(); ++Vid)
    for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
      if (Uid == Vid || !Q0_.subset(Uid, Vid)) continue;
      if (Q0_.index_in(Uid, Vid) != (int)O_.p()) continue;
      BAbel diff = ba_sub(ba_ver(Vid, Uid, t[Vid]), t[Uid]);
      BMember m = ba_in_sigma_image(Q0_.left_transversal(Vid, Uid), diff, 0);
      CheckItem it;
      it.condition = "M3";
      it.subgroups = {Verify::label(Q0_, Uid), Verify::label(Q0_, Vid)};
      it.pass = m.member;
      it.certified_precision = m.cert;
      it.witness = m.note;
      rep.add(std::move(it));
    }
  // (M3a)
  for (int Uid = 0; Uid < Q0_.n_subgroups(); ++Uid) {
    i64 uz = Q0_.sub(Uid).order;
    BAbel res = ba_sub(ba_pow(t[Uid], (u64)uz), ba_push(t[Q0_.id_Z()], Uid));
    CheckItem it;
    it.condition = "M3a";
    it.subgroups = {Verify::label(Q0_, Uid)};
    it.certified_precision = 1;
    it.pass = ba_is_zero_at(res, 1);
    rep.add(std::move(it));
  }
  // (M4)
  for (int Vid : Q0_.cyclic_ids()) {
    BAbel lhs = ba_alpha(t[Vid]);
    BAbel prod = ba_one(Vid);
    for (int wid : Q0_.sub(Vid).pcv) {
      BAbel aw = ba_alpha(t[wid]);
      BAbel paw = ba_phi(aw);
      prod = ba_mul(prod, ba_restrict(paw, Vid));
    }
    BAbel diff = ba_sub(lhs, prod);
    BMember m = ba_in_sigma_image(Q0_.sub(Vid).w_transversal, diff, 1);
    CheckItem it;
    it.condition = "M4";
    it.subgroups = {Verify::label(Q0_, Vid)};
    it.pass = m.member;
    it.certified_precision = m.cert;
    it.witness = m.note;
    rep.add(std::move(it));
  }
  return rep;
}

// ---- level comparison ----

int BSide::match_level_subgroup(const Algebra& An, int uid0) const {
  for (int fid = 0; fid < An.Q().n_subgroups(); ++fid)
    if (Q0_.match_subgroup(An.Q(), fid) == uid0) return fid;
  fail(errc::invalid_input, "match_level_subgroup: no counterpart");
}

ClassVec BSide::bclass_to_level(const Algebra& An, const BClass& x) const {
  const Quotient& Qn = An.Q();
  ClassVec r = An.czero(Qn.id_G());
  r.scale = x.scale;
  r.cert = std::min((unsigned)An.K(), bc_cert(x));
  int zgen = Qn.z_gen();
  const Subgroup& G = Qn.sub(Qn.id_G());
  for (int c = 0; c < Q0_.n_classes(); ++c) {
    const BZElt& f = x.comp[c];
    if (f.c.empty()) continue;
    GElt rep = lift0(Q0_.class_rep(c));
    int repn = Qn.project_from(rep);
    unsigned ff = O_.f();
    for (size_t i = 0; i * ff < f.c.size(); ++i) {
      int j = f.lo + (int)i;
      CoeffElt ce = O_.zero();
      for (unsigned s = 0; s < ff; ++s) ce.c[s] = f.c[i * ff + s];
      if (std::all_of(ce.c.begin(), ce.c.end(), [](u64 v) { return v == 0; })) continue;
      if (j < 0) {
        // negative s-powers must be invisible at the certified precision
        unsigned v = O_.K();
        for (u64 vv : ce.c) v = std::min(v, O_.mod().v(vv));
        if (v < r.cert) r.cert = v;
        continue;
      }
      // (1+s)^zfloor s^j [rep]: expand in Lambda(G_n)
      GroupVec term = An.gelt(repn, ce);
      GroupVec zg = An.gelt(Qn.pw(zgen, f.zfloor), An.O().one());
      term = An.gmulv(term, zg);
      GroupVec sfac = An.sub(An.gelt(zgen, An.O().one()), An.gone());
      for (int s2 = 0; s2 < j; ++s2) term = An.gmulv(term, sfac);
      ClassVec tc = An.conj_project(term);
      tc.scale = r.scale;
      for (int cc = 0; cc < G.n_uclasses; ++cc)
        for (unsigned s = 0; s < ff; ++s)
          r.c[(size_t)cc * ff + s] =
              An.O().mod().add(r.c[(size_t)cc * ff + s], tc.c[(size_t)cc * ff + s]);
    }
  }
  return r;
}

AbelVec BSide::babel_to_level(const Algebra& An, const BAbel& x) const {
  const Quotient& Qn = An.Q();
  int uidn = match_level_subgroup(An, x.uid0);
  AbelVec r = An.azero(uidn);
  r.scale = x.scale;
  r.cert = std::min((unsigned)An.K(), ba_cert(x));
  int zgen = Qn.z_gen();
  int zidx = Qn.ab_of(uidn, zgen);
  unsigned ff = O_.f();
  for (size_t b = 0; b < x.comp.size(); ++b) {
    const BZElt& f = x.comp[b];
    if (f.c.empty()) continue;
    GElt lift = lift0(Q0_.ab_lift(x.uid0, (int)b));
    int en = Qn.project_from(lift);
    int base = Qn.ab_of(uidn, en);
    for (size_t i = 0; i * ff < f.c.size(); ++i) {
      int j = f.lo + (int)i;
      CoeffElt ce = O_.zero();
      for (unsigned s = 0; s < ff; ++s) ce.c[s] = f.c[i * ff + s];
      if (std::all_of(ce.c.begin(), ce.c.end(), [](u64 v) { return v == 0; })) continue;
      if (j < 0) {
        unsigned v = O_.K();
        for (u64 vv : ce.c) v = std::min(v, O_.mod().v(vv));
        if (v < r.cert) r.cert = v;
        continue;
      }
      AbelVec term = An.abasis(uidn, Qn.ab_add(uidn, base, Qn.ab_scale(uidn, zidx, f.zfloor)), ce);
      AbelVec sfac = An.sub(An.abasis(uidn, zidx, An.O().one()), An.aone(uidn));
      for (int s2 = 0; s2 < j; ++s2) term = An.amul(term, sfac);
      term.scale = r.scale;
      unsigned keep = r.cert;
      r = An.add(r, term);
      r.cert = std::min(keep, term.cert);
    }
  }
  return r;
}

}  // namespace iwk1
