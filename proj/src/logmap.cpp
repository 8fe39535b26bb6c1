#include "iwk1/logmap.hpp"

#include <algorithm>

namespace iwk1 {

SeriesPlan LogMap::plan_log(unsigned N, unsigned target) const {
  // terms j^m / m with v_p(j^m) >= floor(m/N); find m_max so that all later
  // terms vanish mod p^target, and the denominator scale c = max v_p(m)
  SeriesPlan pl;
  pl.N = N;
  u64 p = A_->p();
  u64 m = 1;
  u64 last_needed = 1;
  for (;;) {
    unsigned gain = (unsigned)(m / N);
    unsigned vm = 0;
    u64 mm = m;
    while (mm % p == 0) { mm /= p; ++vm; }
    if (gain < target + vm) last_needed = m;
    // stop once the gain exceeds target + max possible v_p for all later m
    if (gain >= target + ilog_floor(p, m) + 2 && m > last_needed + (u64)N * 2) break;
    ++m;
    if (m > 1000000) fail(errc::precision_exhausted, "log plan did not terminate");
  }
  pl.m_max = last_needed;
  pl.c = 0;
  pl.loss = 0;
  for (u64 t = 1; t <= pl.m_max; ++t) {
    unsigned vm = 0;
    u64 mm = t;
    while (mm % p == 0) { mm /= p; ++vm; }
    pl.c = std::max(pl.c, vm);
    unsigned gain = (unsigned)((t - 1) / N);
    if (vm > gain) pl.loss = std::max(pl.loss, vm - gain);
  }
  return pl;
}

ClassVec LogMap::log_unit(const GroupVec& u) const {
  CoeffElt a = A_->gaug(u);
  CoeffElt diff = A_->O().sub(a, A_->O().one());
  if (A_->O().valuation(diff) == 0) fail(errc::not_a_unit, "log_unit: u != 1 mod Jac");
  unsigned N = A_->jac_nilpotency();
  SeriesPlan pl = plan_log(N, A_->K());
  const Mod& M = A_->O().mod();
  GroupVec j = A_->sub(u, A_->gone());
  GroupVec pw = A_->gone();
  GroupVec acc = A_->gzero();
  for (u64 m = 1; m <= pl.m_max; ++m) {
    pw = A_->gmulv(pw, j);
    bool zero = std::all_of(pw.c.begin(), pw.c.end(), [](u64 x) { return x == 0; });
    if (zero) break;
    unsigned vm = 0;
    u64 mm = m;
    while (mm % A_->p() == 0) { mm /= A_->p(); ++vm; }
    // coefficient p^(c - vm) * (m / p^vm)^-1 * (-1)^(m+1)
    u64 coef = M.mul(ipow(A_->p(), pl.c - vm) % M.m, M.inv(mm % M.m));
    if (m % 2 == 0) coef = M.neg(coef);
    GroupVec term = pw;
    for (auto& x : term.c) x = M.mul(x, coef);
    acc = A_->add(acc, term);
  }
  ClassVec r = A_->conj_project(acc);
  r.scale = (int)pl.c;
  r.cert = std::min((unsigned)A_->K(), u.cert + pl.c >= pl.loss ? u.cert + pl.c - pl.loss : 0);
  r.cert = std::min(r.cert, (unsigned)A_->K());
  return r;
}

unsigned LogMap::abel_nilpotency(int uid) const {
  auto it = abn_.find(uid);
  if (it != abn_.end()) return it->second;
  u64 n = 1;
  for (i64 o : A_->Q().sub(uid).ab.orders) n += (u64)o - 1;
  abn_[uid] = (unsigned)n;
  return (unsigned)n;
}

AbelVec LogMap::log_1p(const AbelVec& u) const {
  if (u.scale != 0) fail(errc::invalid_input, "log_1p: scaled input");
  AbelVec j = A_->sub(u, A_->aone(u.uid));
  if (!A_->is_zero_at(j, 1)) fail(errc::not_in_ideal, "log_1p: u != 1 mod p");
  // write j = p j1; the term j^m/m = p^(m - v(m)) j1^m / unit(m) multiplies
  // enough p back to keep the full modulus (m - v_p(m) >= 1 for p odd)
  const Mod& M = A_->O().mod();
  u64 m_max = A_->K() + ilog_floor(A_->p(), A_->K()) + 3;
  AbelVec j1 = j;
  for (auto& x : j1.c) {
    if (x % A_->p()) fail(errc::not_divisible, "log_1p: entry not divisible by p");
    x /= A_->p();
  }
  AbelVec pw = A_->aone(u.uid);
  AbelVec acc = A_->azero(u.uid);
  for (u64 m = 1; m <= m_max; ++m) {
    pw = A_->amul(pw, j1);
    unsigned vm = 0;
    u64 mm = m;
    while (mm % A_->p() == 0) { mm /= A_->p(); ++vm; }
    u64 coef = M.mul(ipow(A_->p(), (unsigned)std::min<u64>(m - vm, A_->K())) % M.m,
                     M.inv(mm % M.m));
    if (m % 2 == 0) coef = M.neg(coef);
    if (!coef) continue;
    AbelVec term = pw;
    for (auto& x : term.c) x = M.mul(x, coef);
    acc = A_->add(acc, term);
  }
  acc.cert = u.cert;
  return acc;
}

AbelVec LogMap::exp_p(const AbelVec& a) const {
  if (a.scale != 0) fail(errc::invalid_input, "exp_p: scaled input");
  if (!A_->is_zero_at(a, 1)) fail(errc::not_in_ideal, "exp_p: a != 0 mod p");
  // a = p a1; term a^m/m! = p^(m - v(m!)) a1^m / unit(m!), and
  // m - v_p(m!) >= 1 for p odd, so no modulus is lost
  const Mod& M = A_->O().mod();
  u64 m_max = 2 * (u64)A_->K() + 4;
  AbelVec a1 = a;
  for (auto& x : a1.c) {
    if (x % A_->p()) fail(errc::not_divisible, "exp_p: entry not divisible by p");
    x /= A_->p();
  }
  AbelVec pw = A_->aone(a.uid);
  AbelVec acc = A_->aone(a.uid);
  u64 fact_unit = 1;
  u64 fact_v = 0;
  for (u64 m = 1; m <= m_max; ++m) {
    pw = A_->amul(pw, a1);
    u64 mm = m;
    while (mm % A_->p() == 0) { mm /= A_->p(); ++fact_v; }
    fact_unit = M.mul(fact_unit, mm % M.m);
    u64 coef = M.mul(ipow(A_->p(), (unsigned)std::min<u64>(m - fact_v, A_->K())) % M.m,
                     M.inv(fact_unit));
    if (!coef) continue;
    AbelVec term = pw;
    for (auto& x : term.c) x = M.mul(x, coef);
    acc = A_->add(acc, term);
  }
  acc.cert = a.cert;
  return acc;
}

AbelVec LogMap::log_ab_unit(const AbelVec& y) const {
  if (!A_->ais_unit(y)) fail(errc::not_a_unit, "log_ab_unit: not a unit");
  CoeffElt zeta = A_->O().teichmuller(A_->aaug(y));
  AbelVec u = A_->scalar_mul(y, A_->O().inv(zeta));
  AbelVec j = A_->sub(u, A_->aone(y.uid));
  unsigned N = abel_nilpotency(y.uid);
  SeriesPlan pl = plan_log(N, A_->K());
  const Mod& M = A_->O().mod();
  AbelVec pw = A_->aone(y.uid);
  AbelVec acc = A_->azero(y.uid);
  for (u64 m = 1; m <= pl.m_max; ++m) {
    pw = A_->amul(pw, j);
    bool zero = std::all_of(pw.c.begin(), pw.c.end(), [](u64 x) { return x == 0; });
    if (zero) break;
    unsigned vm = 0;
    u64 mm = m;
    while (mm % A_->p() == 0) { mm /= A_->p(); ++vm; }
    u64 coef = M.mul(ipow(A_->p(), pl.c - vm) % M.m, M.inv(mm % M.m));
    if (m % 2 == 0) coef = M.neg(coef);
    AbelVec term = pw;
    for (auto& x : term.c) x = M.mul(x, coef);
    acc = A_->add(acc, term);
  }
  acc.scale = (int)pl.c;
  unsigned base = std::min(y.cert, (unsigned)A_->K());
  acc.cert = std::min((unsigned)A_->K(), base + pl.c >= pl.loss ? base + pl.c - pl.loss : 0);
  return acc;
}

ClassVec LogMap::integral_log_L(const GroupVec& x) const {
  auto [zeta, u] = K_->teichmuller_decompose(x);
  (void)zeta;
  ClassVec lg = log_unit(u);
  ClassVec ph = A_->phi_class(lg);
  ph.scale += 1;  // (1/p) phi(log u)
  ClassVec L = A_->sub(lg, ph);
  return A_->descale_integral(L);  // Oliver-Taylor integrality; failure = bug trap
}

AbelVec LogMap::alpha_U(const AbelVec& f) const {
  const Subgroup& U = A_->Q().sub(f.uid);
  if (!U.cyclic_over_z) fail(errc::not_cyclic, "alpha_U: U not in C(G,Z)");
  if (!A_->ais_unit(f)) fail(errc::not_a_unit, "alpha_U: f not a unit");
  AbelVec num = A_->apow(f, A_->p());
  AbelVec den;
  if (f.uid == A_->Q().id_Z()) {
    den = A_->phi_ab(f);
  } else {
    AbelVec nm = K_->norm_abelian(f.uid, U.uprime, f);
    den = A_->incl_push(nm, f.uid);
  }
  AbelVec r = A_->amul(num, A_->ainvert(den));
  AbelVec diff = A_->sub(r, A_->aone(f.uid));
  if (!A_->is_zero_at(diff, 1))
    fail(errc::invalid_input, "alpha_U: output not 1 mod p");
  return r;
}

AbelVec LogMap::restrict_abelian(const AbelVec& a, int Sid) const {
  auto t = A_->Q().incl_ab_map(Sid, a.uid);
  std::vector<int> invmap(A_->Q().ab_size(a.uid), -1);
  for (size_t i = 0; i < t.size(); ++i) invmap[t[i]] = (int)i;
  AbelVec r = A_->azero(Sid);
  r.scale = a.scale;
  r.cert = a.cert;
  unsigned ff = A_->f();
  for (i64 i = 0; i < A_->Q().ab_size(a.uid); ++i) {
    bool z = true;
    for (unsigned j = 0; j < ff; ++j) z &= (a.c[(size_t)i * ff + j] == 0);
    if (z) continue;
    if (invmap[i] < 0)
      fail(errc::invalid_input, "restrict_abelian: support leaves the subgroup");
    for (unsigned j = 0; j < ff; ++j) r.c[(size_t)invmap[i] * ff + j] = a.c[(size_t)i * ff + j];
  }
  return r;
}

AbelVec LogMap::m3a_residual(const Tuple& t, int uid) const {
  const Quotient& Q = A_->Q();
  i64 uz = Q.sub(uid).order / Q.z_order();
  AbelVec lhs = A_->apow(t.comp[uid], (u64)uz);
  AbelVec xz = A_->incl_push(t.comp[Q.id_Z()], uid);
  return A_->sub(lhs, xz);
}

void LogMap::require_M3a(const Tuple& t) const {
  for (int uid = 0; uid < A_->Q().n_subgroups(); ++uid) {
    AbelVec res = m3a_residual(t, uid);
    if (!A_->is_zero_at(res, 1))
      fail(errc::m3a_violation, "tuple violates (M3a) at subgroup " + std::to_string(uid));
  }
}

AbelVec LogMap::script_L_V(const Tuple& t, int Vid) const {
  const Quotient& Q = A_->Q();
  i64 vz = Q.sub(Vid).order / Q.z_order();
  u64 expo = (u64)A_->p() * A_->p() * (u64)vz;
  AbelVec num = A_->apow(t.comp[Vid], expo);
  // denominator: phi_Z(y_Z^p) * prod phi_W(alpha_W(y_W))^(|W/Z|), in Lambda(V^ab)
  AbelVec den = A_->incl_push(A_->phi_ab(A_->apow(t.comp[Q.id_Z()], A_->p())), Vid);
  for (int wid : Q.sub(Vid).pv) {
    const Subgroup& W = Q.sub(wid);
    AbelVec aw = alpha_U(t.comp[wid]);
    AbelVec paw = A_->phi_ab(aw);                       // lands in Lambda(W')
    AbelVec pw = restrict_abelian(paw, W.uprime);       // view in Lambda(W')
    AbelVec pushed = A_->incl_push(pw, Vid);            // W' <= V
    den = A_->amul(den, A_->apow(pushed, (u64)(W.order / Q.z_order())));
  }
  AbelVec Qv = A_->amul(num, A_->ainvert(den));
  AbelVec diff = A_->sub(Qv, A_->aone(Vid));
  if (!A_->is_zero_at(diff, 1))
    fail(errc::m3a_violation, "script_L: log argument not 1 mod p at V");
  AbelVec lg = log_1p(Qv);
  lg.scale += 2 + (int)ilog_floor(A_->p(), (u64)vz);
  return lg;
}

Tuple LogMap::script_L(const Tuple& t) const {
  require_M3a(t);
  Tuple r;
  r.comp.reserve(A_->Q().n_subgroups());
  for (int Vid = 0; Vid < A_->Q().n_subgroups(); ++Vid) r.comp.push_back(script_L_V(t, Vid));
  return r;
}

}  // namespace iwk1
