#include "iwk1/coeff.hpp"

#include <algorithm>

namespace iwk1 {

namespace {

// multiply polynomials of degree < f over Z/p^K
std::vector<u64> polymul(const Mod& M, const std::vector<u64>& a, const std::vector<u64>& b) {
  std::vector<u64> t(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j)
      t[i + j] = M.add(t[i + j], M.mul(a[i], b[j]));
  }
  return t;
}

}  // namespace

CoeffRing::CoeffRing(u64 p, unsigned f, unsigned K, std::vector<u64> minpoly)
    : mod_(p, K), f_(f), minpoly_(std::move(minpoly)) {
  if (p < 3 || f == 0 || K == 0) fail(errc::invalid_input, "CoeffRing: need odd p, f >= 1, K >= 1");
  // (H4): p odd prime
  for (u64 d = 2; d * d <= p; ++d)
    if (p % d == 0) fail(errc::invalid_input, "CoeffRing: p not prime");
  q_ = ipow(p, f);
  if (f_ == 1) {
    minpoly_.clear();
    return;
  }
  if (minpoly_.size() != f_) fail(errc::invalid_input, "CoeffRing: minpoly needs f coefficients");
  for (auto& c : minpoly_) c = mod_.red(c);
  // irreducibility of the reduction mod p: x^(p^f) = x mod m, and
  // gcd(x^(p^(f/l)) - x, m) = 1 for every prime l | f
  Mod fp(p, 1);
  auto reduce_fp = [&](std::vector<u64>& t) {
    while (t.size() > f_) {
      u64 lead = t.back();
      t.pop_back();
      if (lead)
        for (unsigned j = 0; j < f_; ++j)
          t[t.size() - f_ + j] = fp.sub(t[t.size() - f_ + j], fp.mul(lead, minpoly_[j] % p));
    }
    t.resize(f_, 0);
  };
  auto powx = [&](u64 e) {
    // x^(p^e) mod (minpoly, p)
    std::vector<u64> r = {0, 1};
    r.resize(f_, 0);
    for (u64 s = 0; s < e; ++s) {
      std::vector<u64> acc = {1};
      std::vector<u64> base = r;
      u64 ee = p;
      while (ee) {
        if (ee & 1) {
          acc = polymul(fp, acc, base);
          reduce_fp(acc);
        }
        base = polymul(fp, base, base);
        reduce_fp(base);
        ee >>= 1;
      }
      r = acc;
    }
    return r;
  };
  auto trim = [](std::vector<u64> v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    return v;
  };
  auto polygcd = [&](std::vector<u64> a, std::vector<u64> b) {
    a = trim(std::move(a));
    b = trim(std::move(b));
    while (!b.empty()) {
      // a mod b
      u64 lead_inv = fp.inv(b.back());
      while (a.size() >= b.size()) {
        u64 c = fp.mul(a.back(), lead_inv);
        if (c) {
          size_t off = a.size() - b.size();
          for (size_t j = 0; j < b.size(); ++j) a[off + j] = fp.sub(a[off + j], fp.mul(c, b[j]));
        }
        a = trim(std::move(a));
        if (a.empty()) break;
      }
      std::swap(a, b);
    }
    return a;
  };
  std::vector<u64> mpoly(minpoly_.begin(), minpoly_.end());
  for (auto& c : mpoly) c %= p;
  mpoly.push_back(1);
  std::vector<u64> x = {0, 1};
  x.resize(f_, 0);
  if (powx(f_) != x) fail(errc::invalid_input, "CoeffRing: minpoly reduction not irreducible (x^q != x)");
  for (unsigned l = 2; l <= f_; ++l) {
    if (f_ % l || !([](unsigned n) { for (unsigned d = 2; d * d <= n; ++d) if (n % d == 0) return false; return n > 1; }(l)))
      continue;
    std::vector<u64> g = powx(f_ / l);
    g[1] = fp.sub(g[1], 1);  // x^(p^(f/l)) - x
    if (polygcd(g, mpoly).size() != 1)
      fail(errc::invalid_input, "CoeffRing: minpoly reduction splits over a subfield");
  }
  build_frobenius();
}

void CoeffRing::reduce_poly(std::vector<u64>& t) const {
  while (t.size() > f_) {
    u64 lead = t.back();
    t.pop_back();
    if (!lead) continue;
    for (unsigned j = 0; j < f_; ++j)
      t[t.size() - f_ + j] = mod_.sub(t[t.size() - f_ + j], mod_.mul(lead, minpoly_[j]));
  }
  t.resize(f_, 0);
}

void CoeffRing::build_frobenius() {
  // Hensel-lift the root of minpoly that reduces to x^p: iterate
  // r <- r - m(r)/m'(r) in O/p^K starting from r0 = x^p mod (minpoly, p).
  auto evalpoly = [&](const std::vector<u64>& r, bool deriv) {
    // value of minpoly (monic, degree f) or its derivative at r, in O/p^K
    std::vector<u64> acc(f_, 0);
    std::vector<u64> pw = {1};  // r^0
    pw.resize(f_, 0);
    std::vector<u64> full = minpoly_;
    full.push_back(1);  // monic
    for (unsigned i = 0; i <= f_; ++i) {
      u64 coef = deriv ? (i + 1 <= f_ ? mod_.mul(full[i + 1], (i + 1) % mod_.m) : 0) : full[i];
      if (deriv && i == f_) break;
      if (coef)
        for (unsigned j = 0; j < f_; ++j) acc[j] = mod_.add(acc[j], mod_.mul(coef, pw[j]));
      if (i < f_) {
        auto t = polymul(mod_, pw, std::vector<u64>(r.begin(), r.end()));
        reduce_poly(t);
        pw = t;
      }
    }
    return acc;
  };

  // r0 = x^p mod (minpoly), computed mod p^K then Newton-corrected
  std::vector<u64> r = {0, 1};
  r.resize(f_, 0);
  {
    // x^p via square-and-multiply in O/p^K
    std::vector<u64> acc = {1};
    acc.resize(f_, 0);
    std::vector<u64> base = r;
    u64 e = mod_.p;
    while (e) {
      if (e & 1) {
        auto t = polymul(mod_, acc, base);
        reduce_poly(t);
        acc = t;
      }
      auto t2 = polymul(mod_, base, base);
      reduce_poly(t2);
      base = t2;
      e >>= 1;
    }
    r = acc;
  }
  for (unsigned it = 0; it < mod_.K + 2; ++it) {
    std::vector<u64> val = evalpoly(r, false);
    bool zero = std::all_of(val.begin(), val.end(), [](u64 a) { return a == 0; });
    if (zero) break;
    std::vector<u64> der = evalpoly(r, true);
    // invert der in O/p^K: der is a unit since the extension is unramified
    CoeffElt d{der, mod_.K};
    CoeffElt di = inv(d);
    auto corr = polymul(mod_, val, di.c);
    reduce_poly(corr);
    for (unsigned j = 0; j < f_; ++j) r[j] = mod_.sub(r[j], corr[j]);
  }
  // frobenius matrix: column j = r^j
  frob_.assign(f_ * f_, 0);
  std::vector<u64> pw = {1};
  pw.resize(f_, 0);
  for (unsigned j = 0; j < f_; ++j) {
    for (unsigned i = 0; i < f_; ++i) frob_[i * f_ + j] = pw[i];
    auto t = polymul(mod_, pw, r);
    reduce_poly(t);
    pw = t;
  }
}

CoeffElt CoeffRing::one() const {
  CoeffElt e = zero();
  e.c[0] = 1 % mod_.m;
  return e;
}

CoeffElt CoeffRing::from_int(u64 a) const {
  CoeffElt e = zero();
  e.c[0] = mod_.red(a);
  return e;
}

bool CoeffRing::is_zero(const CoeffElt& a) const {
  return std::all_of(a.c.begin(), a.c.end(), [](u64 x) { return x == 0; });
}

bool CoeffRing::is_unit(const CoeffElt& a) const {
  for (u64 x : a.c)
    if (x % mod_.p) return true;
  return false;
}

CoeffElt CoeffRing::add(const CoeffElt& a, const CoeffElt& b) const {
  CoeffElt r = a;
  r.cert = std::min(a.cert, b.cert);
  for (unsigned i = 0; i < f_; ++i) r.c[i] = mod_.add(a.c[i], b.c[i]);
  return r;
}

CoeffElt CoeffRing::sub(const CoeffElt& a, const CoeffElt& b) const {
  CoeffElt r = a;
  r.cert = std::min(a.cert, b.cert);
  for (unsigned i = 0; i < f_; ++i) r.c[i] = mod_.sub(a.c[i], b.c[i]);
  return r;
}

CoeffElt CoeffRing::neg(const CoeffElt& a) const {
  CoeffElt r = a;
  for (unsigned i = 0; i < f_; ++i) r.c[i] = mod_.neg(a.c[i]);
  return r;
}

CoeffElt CoeffRing::mul(const CoeffElt& a, const CoeffElt& b) const {
  CoeffElt r = zero();
  r.cert = std::min(a.cert, b.cert);
  if (f_ == 1) {
    r.c[0] = mod_.mul(a.c[0], b.c[0]);
    return r;
  }
  auto t = polymul(mod_, a.c, b.c);
  reduce_poly(t);
  r.c = t;
  return r;
}

CoeffElt CoeffRing::inv(const CoeffElt& a) const {
  if (!is_unit(a)) fail(errc::not_a_unit, "CoeffRing::inv of non-unit");
  if (f_ == 1) {
    CoeffElt r = a;
    r.c[0] = mod_.inv(a.c[0]);
    return r;
  }
  // x = a^(q-2)-lift: Newton from the residue-field inverse
  // start: inverse mod p via Fermat in F_q: a^(q-2)
  CoeffElt x = pow(a, q_ - 2);  // correct mod p at least
  for (unsigned it = 0; it < mod_.K + 1; ++it) {
    CoeffElt ax = mul(a, x);
    CoeffElt two = from_int(2);
    CoeffElt t = sub(two, ax);
    x = mul(x, t);
  }
  x.cert = a.cert;
  return x;
}

CoeffElt CoeffRing::pow(const CoeffElt& a, u64 e) const {
  CoeffElt r = one();
  r.cert = a.cert;
  CoeffElt b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

void CoeffRing::sadd(u64* dst, const u64* a) const {
  for (unsigned i = 0; i < f_; ++i) dst[i] = mod_.add(dst[i], a[i]);
}

void CoeffRing::ssub(u64* dst, const u64* a) const {
  for (unsigned i = 0; i < f_; ++i) dst[i] = mod_.sub(dst[i], a[i]);
}

void CoeffRing::smul_acc(u64* dst, const u64* a, const u64* b) const {
  if (f_ == 1) {
    dst[0] = mod_.add(dst[0], mod_.mul(a[0], b[0]));
    return;
  }
  std::vector<u64> av(a, a + f_), bv(b, b + f_);
  auto t = polymul(mod_, av, bv);
  reduce_poly(t);
  for (unsigned i = 0; i < f_; ++i) dst[i] = mod_.add(dst[i], t[i]);
}

void CoeffRing::smul_int(u64* dst, const u64* a, u64 s) const {
  s = mod_.red(s);
  for (unsigned i = 0; i < f_; ++i) dst[i] = mod_.mul(a[i], s);
}

CoeffElt CoeffRing::frobenius(const CoeffElt& a) const {
  CoeffElt r = zero();
  r.cert = a.cert;
  frobenius_slice(r.c.data(), a.c.data());
  return r;
}

void CoeffRing::frobenius_slice(u64* dst, const u64* a) const {
  if (f_ == 1) {
    dst[0] = a[0];
    return;
  }
  std::vector<u64> t(f_, 0);
  for (unsigned j = 0; j < f_; ++j) {
    if (!a[j]) continue;
    for (unsigned i = 0; i < f_; ++i) t[i] = mod_.add(t[i], mod_.mul(frob_[i * f_ + j], a[j]));
  }
  for (unsigned i = 0; i < f_; ++i) dst[i] = t[i];
}

CoeffElt CoeffRing::teichmuller(const CoeffElt& r0) const {
  CoeffElt a = r0;
  a.cert = mod_.K;
  bool zero_res = true;
  for (u64 x : a.c)
    if (x % mod_.p) zero_res = false;
  if (zero_res) return zero();
  // iterate a -> a^q; stabilizes after at most K steps
  for (unsigned it = 0; it < mod_.K + 1; ++it) a = pow(a, q_);
  return a;
}

unsigned CoeffRing::valuation(const CoeffElt& a) const {
  unsigned v = mod_.K;
  for (u64 x : a.c) v = std::min(v, mod_.v(x));
  return v;
}

CoeffElt CoeffRing::divide_by_p_power(const CoeffElt& a, unsigned m) const {
  if (m == 0) return a;
  unsigned v = valuation(a);
  unsigned vis = std::min(v, a.cert);
  if (vis < m)
    fail(errc::not_divisible, "divide_by_p_power: v_p(a) < m at certified precision");
  CoeffElt r = a;
  u64 q = ipow(mod_.p, m);
  for (unsigned i = 0; i < f_; ++i) r.c[i] = a.c[i] / q;
  r.cert = a.cert - m;
  return r;
}

u64 CoeffRing::trace_to_zp(const CoeffElt& a) const {
  if (f_ == 1) return a.c[0];
  std::vector<u64> cur(a.c);
  std::vector<u64> acc(f_, 0);
  for (unsigned i = 0; i < f_; ++i) {
    for (unsigned j = 0; j < f_; ++j) acc[j] = mod_.add(acc[j], cur[j]);
    frobenius_slice(cur.data(), cur.data());
  }
  // the trace lies in Z_p: all non-constant coordinates vanish
  return acc[0];
}

}  // namespace iwk1
