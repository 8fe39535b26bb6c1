#include "iwk1/algebra.hpp"

#include <algorithm>
#include <functional>

namespace iwk1 {

Algebra::Algebra(const Quotient& Q, unsigned Kint, unsigned k_report, unsigned f,
                 std::vector<u64> minpoly)
    : Q_(&Q), O_((u64)Q.def().p, f, Kint, std::move(minpoly)), k_(k_report) {
  if (k_report > Kint) fail(errc::invalid_input, "Algebra: k_report > internal precision");
}

// ---- constructors ----

GroupVec Algebra::gzero() const {
  return GroupVec{std::vector<u64>((size_t)Q_->order() * f(), 0), 0, K()};
}

GroupVec Algebra::gone() const {
  GroupVec g = gzero();
  g.c[(size_t)Q_->one() * f()] = 1;
  return g;
}

GroupVec Algebra::gelt(int x, const CoeffElt& a) const {
  GroupVec g = gzero();
  for (unsigned j = 0; j < f(); ++j) g.c[(size_t)x * f() + j] = a.c[j];
  g.cert = std::min((unsigned)K(), a.cert);
  return g;
}

ClassVec Algebra::czero(int uid) const {
  return ClassVec{uid, std::vector<u64>((size_t)Q_->sub(uid).n_uclasses * f(), 0), 0, K()};
}

ClassVec Algebra::cbasis(int uid, int cls) const {
  ClassVec c = czero(uid);
  c.c[(size_t)cls * f()] = 1;
  return c;
}

AbelVec Algebra::azero(int uid) const {
  return AbelVec{uid, std::vector<u64>((size_t)Q_->ab_size(uid) * f(), 0), 0, K()};
}

AbelVec Algebra::aone(int uid) const {
  AbelVec a = azero(uid);
  a.c[0] = 1;  // index 0 is the identity in mixed-radix coordinates
  return a;
}

AbelVec Algebra::abasis(int uid, int idx, const CoeffElt& a) const {
  AbelVec v = azero(uid);
  for (unsigned j = 0; j < f(); ++j) v.c[(size_t)idx * f() + j] = a.c[j];
  v.cert = std::min((unsigned)K(), a.cert);
  return v;
}

SubAbVec Algebra::sazero(int Vid, int Uid) const {
  const SubAbRing& R = subab(Vid, Uid);
  return SubAbVec{Vid, Uid, std::vector<u64>(R.elems.size() * f(), 0), 0, K()};
}

// ---- ring structure ----

GroupVec Algebra::gmulv(const GroupVec& a, const GroupVec& b) const {
  GroupVec r = gzero();
  r.cert = std::min(a.cert, b.cert);
  int n = Q_->order();
  unsigned ff = f();
  if (ff == 1) {
    for (int i = 0; i < n; ++i) {
      u64 ai = a.c[i];
      if (!ai) continue;
      const int* row = nullptr;
      for (int j = 0; j < n; ++j) {
        u64 bj = b.c[j];
        if (!bj) continue;
        int k = Q_->mul(i, j);
        r.c[k] = O_.mod().add(r.c[k], O_.mod().mul(ai, bj));
      }
      (void)row;
    }
    return r;
  }
  for (int i = 0; i < n; ++i) {
    bool az = true;
    for (unsigned j = 0; j < ff; ++j) az &= (a.c[(size_t)i * ff + j] == 0);
    if (az) continue;
    for (int j = 0; j < n; ++j) {
      bool bz = true;
      for (unsigned t = 0; t < ff; ++t) bz &= (b.c[(size_t)j * ff + t] == 0);
      if (bz) continue;
      int k = Q_->mul(i, j);
      O_.smul_acc(&r.c[(size_t)k * ff], &a.c[(size_t)i * ff], &b.c[(size_t)j * ff]);
    }
  }
  return r;
}

AbelVec Algebra::amul(const AbelVec& a, const AbelVec& b) const {
  AbelVec r = azero(a.uid);
  r.scale = a.scale + b.scale;
  r.cert = std::min(a.cert, b.cert);
  i64 n = Q_->ab_size(a.uid);
  unsigned ff = f();
  for (i64 i = 0; i < n; ++i) {
    bool az = true;
    for (unsigned j = 0; j < ff; ++j) az &= (a.c[(size_t)i * ff + j] == 0);
    if (az) continue;
    for (i64 j = 0; j < n; ++j) {
      bool bz = true;
      for (unsigned t = 0; t < ff; ++t) bz &= (b.c[(size_t)j * ff + t] == 0);
      if (bz) continue;
      int k = Q_->ab_add(a.uid, (int)i, (int)j);
      if (ff == 1)
        r.c[k] = O_.mod().add(r.c[k], O_.mod().mul(a.c[i], b.c[j]));
      else
        O_.smul_acc(&r.c[(size_t)k * ff], &a.c[(size_t)i * ff], &b.c[(size_t)j * ff]);
    }
  }
  return r;
}

AbelVec Algebra::apow(const AbelVec& a, u64 e) const {
  AbelVec r = aone(a.uid);
  r.cert = a.cert;
  AbelVec b = a;
  while (e) {
    if (e & 1) r = amul(r, b);
    b = amul(b, b);
    e >>= 1;
  }
  return r;
}

SubAbVec Algebra::samul(const SubAbVec& a, const SubAbVec& b) const {
  const SubAbRing& R = subab(a.Vid, a.Uid);
  SubAbVec r = sazero(a.Vid, a.Uid);
  r.scale = a.scale + b.scale;
  r.cert = std::min(a.cert, b.cert);
  size_t n = R.elems.size();
  unsigned ff = f();
  for (size_t i = 0; i < n; ++i) {
    bool az = true;
    for (unsigned j = 0; j < ff; ++j) az &= (a.c[i * ff + j] == 0);
    if (az) continue;
    for (size_t j = 0; j < n; ++j) {
      bool bz = true;
      for (unsigned t = 0; t < ff; ++t) bz &= (b.c[j * ff + t] == 0);
      if (bz) continue;
      int k = R.pos[Q_->ab_add(a.Vid, R.elems[i], R.elems[j])];
      O_.smul_acc(&r.c[(size_t)k * ff], &a.c[i * ff], &b.c[j * ff]);
    }
  }
  return r;
}

CoeffElt Algebra::gaug(const GroupVec& a) const {
  CoeffElt s = O_.zero();
  s.cert = a.cert;
  for (int i = 0; i < Q_->order(); ++i) O_.sadd(s.c.data(), &a.c[(size_t)i * f()]);
  return s;
}

CoeffElt Algebra::aaug(const AbelVec& a) const {
  CoeffElt s = O_.zero();
  s.cert = a.cert;
  for (i64 i = 0; i < Q_->ab_size(a.uid); ++i) O_.sadd(s.c.data(), &a.c[(size_t)i * f()]);
  return s;
}

bool Algebra::gis_unit(const GroupVec& a) const { return O_.is_unit(gaug(a)); }
bool Algebra::ais_unit(const AbelVec& a) const { return a.scale == 0 && O_.is_unit(aaug(a)); }

bool Algebra::sais_unit(const SubAbVec& a) const {
  CoeffElt s = O_.zero();
  for (size_t i = 0; i * f() < a.c.size(); ++i) O_.sadd(s.c.data(), &a.c[i * f()]);
  return a.scale == 0 && O_.is_unit(s);
}


GroupVec Algebra::ginvert(const GroupVec& x) const {
  CoeffElt av = gaug(x);
  if (!O_.is_unit(av)) fail(errc::not_a_unit, "ginvert: augmentation not a unit");
  CoeffElt ai = O_.inv(av);
  GroupVec u = scalar_mul(x, ai);  // 1 + j
  GroupVec j = sub(u, gone());
  GroupVec acc = gone();
  GroupVec pw = gone();
  u64 cap = (u64)(jac_nilpotency() + 1) * (K() + 1) + 4;
  for (u64 m = 1; m <= cap; ++m) {
    pw = gmulv(pw, j);
    bool zero = std::all_of(pw.c.begin(), pw.c.end(), [](u64 v) { return v == 0; });
    if (zero) break;
    if (m & 1)
      acc = sub(acc, pw);
    else
      acc = add(acc, pw);
    if (m == cap) fail(errc::not_a_unit, "ginvert: series did not terminate");
  }
  GroupVec r = scalar_mul(acc, ai);
  r.cert = std::min(x.cert, (unsigned)K());
  return r;
}

AbelVec Algebra::ainvert(const AbelVec& x) const {
  if (x.scale != 0) fail(errc::not_a_unit, "ainvert: scaled element");
  CoeffElt av = aaug(x);
  if (!O_.is_unit(av)) fail(errc::not_a_unit, "ainvert: augmentation not a unit");
  CoeffElt ai = O_.inv(av);
  AbelVec u = scalar_mul(x, ai);
  AbelVec j = sub(u, aone(x.uid));
  AbelVec acc = aone(x.uid);
  AbelVec pw = aone(x.uid);
  u64 cap = (u64)(Q_->ab_size(x.uid) + 1) * (K() + 1) + 4;
  for (u64 m = 1; m <= cap; ++m) {
    pw = amul(pw, j);
    bool zero = std::all_of(pw.c.begin(), pw.c.end(), [](u64 v) { return v == 0; });
    if (zero) break;
    if (m & 1)
      acc = sub(acc, pw);
    else
      acc = add(acc, pw);
    if (m == cap) fail(errc::not_a_unit, "ainvert: series did not terminate");
  }
  AbelVec r = scalar_mul(acc, ai);
  r.cert = x.cert;
  return r;
}

SubAbVec Algebra::sainvert(const SubAbVec& x) const {
  if (!sais_unit(x)) fail(errc::not_a_unit, "sainvert: not a unit");
  CoeffElt av = O_.zero();
  for (size_t i = 0; i * f() < x.c.size(); ++i) O_.sadd(av.c.data(), &x.c[i * f()]);
  CoeffElt ai = O_.inv(av);
  SubAbVec u = scalar_mul(x, ai);
  SubAbVec one = sazero(x.Vid, x.Uid);
  one.c[0] = 1;  // identity has V^ab index 0, position 0 (sorted, 0 minimal)
  SubAbVec j = sub(u, one);
  SubAbVec acc = one, pw = one;
  u64 cap = (u64)(x.c.size() / f() + 1) * (K() + 1) + 4;
  for (u64 m = 1; m <= cap; ++m) {
    pw = samul(pw, j);
    bool zero = std::all_of(pw.c.begin(), pw.c.end(), [](u64 v) { return v == 0; });
    if (zero) break;
    if (m & 1)
      acc = sub(acc, pw);
    else
      acc = add(acc, pw);
    if (m == cap) fail(errc::not_a_unit, "sainvert: series did not terminate");
  }
  SubAbVec r = scalar_mul(acc, ai);
  r.cert = x.cert;
  return r;
}

// ---- maps ----

ClassVec Algebra::conj_project(const GroupVec& x) const {
  ClassVec r = czero(Q_->id_G());
  r.cert = x.cert;
  const Subgroup& G = Q_->sub(Q_->id_G());
  for (int e = 0; e < Q_->order(); ++e) {
    int c = G.uclass_of[G.mpos[e]];
    O_.sadd(&r.c[(size_t)c * f()], &x.c[(size_t)e * f()]);
  }
  return r;
}

const std::vector<std::vector<std::pair<int, int>>>& Algebra::tr_matrix(int Vid, int Uid) const {
  auto key = std::make_pair(Vid, Uid);
  auto it = tr_mat_.find(key);
  if (it != tr_mat_.end()) return it->second;
  const Subgroup& V = Q_->sub(Vid);
  const Subgroup& U = Q_->sub(Uid);
  std::vector<std::vector<std::pair<int, int>>> M(V.n_uclasses);
  auto R = Q_->left_transversal(Vid, Uid);
  for (int cv = 0; cv < V.n_uclasses; ++cv) {
    int g = V.uclass_rep[cv];
    std::map<int, int> acc;
    for (int x : R) {
      int y = Q_->mul(Q_->mul(Q_->inv(x), g), x);
      if (U.mpos[y] >= 0) acc[U.uclass_of[U.mpos[y]]] += 1;
    }
    for (auto& [cu, m] : acc) M[cv].emplace_back(cu, m);
  }
  return tr_mat_.emplace(key, std::move(M)).first->second;
}

ClassVec Algebra::tr(int Vid, int Uid, const ClassVec& x) const {
  if (x.uid != Vid) fail(errc::invalid_input, "tr: tag mismatch");
  if (!Q_->subset(Uid, Vid)) fail(errc::not_subgroup, "tr: U not inside V");
  const auto& M = tr_matrix(Vid, Uid);
  ClassVec r = czero(Uid);
  r.scale = x.scale;
  r.cert = x.cert;
  for (size_t cv = 0; cv < M.size(); ++cv) {
    bool z = true;
    for (unsigned j = 0; j < f(); ++j) z &= (x.c[cv * f() + j] == 0);
    if (z) continue;
    for (auto& [cu, m] : M[cv]) {
      std::vector<u64> t(f());
      O_.smul_int(t.data(), &x.c[cv * f()], (u64)m);
      O_.sadd(&r.c[(size_t)cu * f()], t.data());
    }
  }
  return r;
}

AbelVec Algebra::pr_ab(const ClassVec& x) const {
  const Subgroup& U = Q_->sub(x.uid);
  AbelVec r = azero(x.uid);
  r.scale = x.scale;
  r.cert = x.cert;
  for (int c = 0; c < U.n_uclasses; ++c) {
    int idx = Q_->ab_of(x.uid, U.uclass_rep[c]);
    O_.sadd(&r.c[(size_t)idx * f()], &x.c[(size_t)c * f()]);
  }
  return r;
}

ClassVec Algebra::ab_to_class(const AbelVec& a) const {
  const Subgroup& U = Q_->sub(a.uid);
  if ((i64)U.n_uclasses != U.ab.size)
    fail(errc::invalid_input, "ab_to_class: subgroup not abelian");
  ClassVec r = czero(a.uid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (i64 i = 0; i < U.ab.size; ++i) {
    int cls = U.uclass_of[U.mpos[U.ab.lift[i]]];
    O_.sadd(&r.c[(size_t)cls * f()], &a.c[(size_t)i * f()]);
  }
  return r;
}

AbelVec Algebra::beta_U(int uid, const ClassVec& f_) const {
  if (f_.uid != Q_->id_G()) fail(errc::invalid_input, "beta_U: input not over G");
  return pr_ab(tr(Q_->id_G(), uid, f_));
}

Tuple Algebra::beta(const ClassVec& f_) const {
  Tuple t;
  t.comp.reserve(Q_->n_subgroups());
  for (int uid = 0; uid < Q_->n_subgroups(); ++uid) t.comp.push_back(beta_U(uid, f_));
  return t;
}

AbelVec Algebra::eta(const AbelVec& a) const {
  const Subgroup& U = Q_->sub(a.uid);
  if (!U.cyclic_over_z) fail(errc::not_cyclic, "eta: U not in C(G,Z)");
  auto it = eta_flags_.find(a.uid);
  if (it == eta_flags_.end()) {
    std::vector<char> flags(U.ab.size, 0);
    for (i64 i = 0; i < U.ab.size; ++i) flags[i] = Q_->ab_generates_over_z(a.uid, (int)i);
    it = eta_flags_.emplace(a.uid, std::move(flags)).first;
  }
  AbelVec r = a;
  for (i64 i = 0; i < U.ab.size; ++i)
    if (!it->second[i])
      for (unsigned j = 0; j < f(); ++j) r.c[(size_t)i * f() + j] = 0;
  return r;
}

ClassVec Algebra::delta_section(const std::map<int, AbelVec>& cyc) const {
  // sum over U in C(G,Z) of delta_U(eta_U(a_U)); output carries scale
  int S = 0;
  unsigned cert = K();
  for (int uid : Q_->cyclic_ids()) {
    auto it = cyc.find(uid);
    if (it == cyc.end()) fail(errc::invalid_input, "delta_section: missing cyclic component");
    int vU = (int)ilog_floor(p(), (u64)(Q_->order() / Q_->sub(uid).order));
    S = std::max(S, it->second.scale + vU);
  }
  ClassVec r = czero(Q_->id_G());
  r.scale = S;
  const Subgroup& G = Q_->sub(Q_->id_G());
  for (int uid : Q_->cyclic_ids()) {
    const AbelVec& a = cyc.at(uid);
    AbelVec ea = eta(a);
    unsigned vU = ilog_floor(p(), (u64)(Q_->order() / Q_->sub(uid).order));
    int shift = S - a.scale - (int)vU;
    if (shift < 0) fail(errc::precision_exhausted, "delta_section: negative shift");
    u64 mult = ipow(p(), (unsigned)shift) % O_.mod().m;
    cert = std::min(cert, std::min((unsigned)K(), ea.cert + (unsigned)shift));
    for (i64 i = 0; i < Q_->ab_size(uid); ++i) {
      bool z = true;
      for (unsigned j = 0; j < f(); ++j) z &= (ea.c[(size_t)i * f() + j] == 0);
      if (z) continue;
      int elt = Q_->ab_lift(uid, (int)i);
      int cls = G.uclass_of[G.mpos[elt]];
      std::vector<u64> t(f());
      O_.smul_int(t.data(), &ea.c[(size_t)i * f()], mult);
      O_.sadd(&r.c[(size_t)cls * f()], t.data());
    }
  }
  r.cert = cert;
  return r;
}

std::map<int, AbelVec> Algebra::pr_cyc(const Tuple& t) const {
  std::map<int, AbelVec> m;
  for (int uid : Q_->cyclic_ids()) m.emplace(uid, t.comp[uid]);
  return m;
}

AbelVec Algebra::sigma_N(const AbelVec& a) const {
  const Subgroup& U = Q_->sub(a.uid);
  AbelVec r = azero(a.uid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (int g : U.w_transversal) {
    auto cmap = Q_->conj_ab_map(g, a.uid);  // target = U (g normalizes U)
    for (i64 i = 0; i < U.ab.size; ++i) O_.sadd(&r.c[(size_t)cmap[i] * f()], &a.c[(size_t)i * f()]);
  }
  return r;
}

AbelVec Algebra::sigma_pair(int Vid, int Uid, const AbelVec& a) const {
  if (a.uid != Uid) fail(errc::invalid_input, "sigma_pair: tag mismatch");
  // U must be normal in V
  for (int g : Q_->sub(Vid).members)
    if (Q_->conj_subgroup(g, Uid) != Uid) fail(errc::not_normal, "sigma_pair: U not normal in V");
  AbelVec r = azero(Uid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (int g : Q_->left_transversal(Vid, Uid)) {
    auto cmap = Q_->conj_ab_map(g, Uid);
    for (i64 i = 0; i < Q_->ab_size(Uid); ++i)
      O_.sadd(&r.c[(size_t)cmap[i] * f()], &a.c[(size_t)i * f()]);
  }
  return r;
}

AbelVec Algebra::conj_translate(int g, const AbelVec& a) const {
  int tid = Q_->conj_subgroup(g, a.uid);
  auto cmap = Q_->conj_ab_map(g, a.uid);
  AbelVec r = azero(tid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (i64 i = 0; i < Q_->ab_size(a.uid); ++i)
    for (unsigned j = 0; j < f(); ++j) r.c[(size_t)cmap[i] * f() + j] = a.c[(size_t)i * f() + j];
  return r;
}

ClassVec Algebra::phi_class(const ClassVec& x) const {
  const Subgroup& U = Q_->sub(x.uid);
  ClassVec r = czero(x.uid);
  r.scale = x.scale;
  r.cert = x.cert;
  for (int c = 0; c < U.n_uclasses; ++c) {
    int gp = Q_->pw(U.uclass_rep[c], (i64)p());
    int cp = U.uclass_of[U.mpos[gp]];
    std::vector<u64> t(f());
    O_.frobenius_slice(t.data(), &x.c[(size_t)c * f()]);
    O_.sadd(&r.c[(size_t)cp * f()], t.data());
  }
  return r;
}

AbelVec Algebra::phi_ab(const AbelVec& a) const {
  AbelVec r = azero(a.uid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (i64 i = 0; i < Q_->ab_size(a.uid); ++i) {
    int ip = Q_->ab_scale(a.uid, (int)i, (i64)p());
    std::vector<u64> t(f());
    O_.frobenius_slice(t.data(), &a.c[(size_t)i * f()]);
    O_.sadd(&r.c[(size_t)ip * f()], t.data());
  }
  return r;
}

AbelVec Algebra::ver_ring(int Vid, int Uid, const AbelVec& a) const {
  if (a.uid != Vid) fail(errc::invalid_input, "ver_ring: tag mismatch");
  const Subgroup& V = Q_->sub(Vid);
  unsigned m = ilog_floor(p(), (u64)(V.order / Q_->sub(Uid).order));
  auto R = Q_->left_transversal(Vid, Uid);
  AbelVec r = azero(Uid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (i64 i = 0; i < V.ab.size; ++i) {
    bool z = true;
    for (unsigned j = 0; j < f(); ++j) z &= (a.c[(size_t)i * f() + j] == 0);
    if (z) continue;
    int tgt = Q_->ver_idx_with_transversal(Vid, Uid, V.ab.lift[i], R);
    std::vector<u64> t(a.c.begin() + i * f(), a.c.begin() + (i + 1) * f());
    for (unsigned s = 0; s < m; ++s) O_.frobenius_slice(t.data(), t.data());
    O_.sadd(&r.c[(size_t)tgt * f()], t.data());
  }
  return r;
}

AbelVec Algebra::incl_push(const AbelVec& a, int Vid) const {
  auto t = Q_->incl_ab_map(a.uid, Vid);
  AbelVec r = azero(Vid);
  r.scale = a.scale;
  r.cert = a.cert;
  for (i64 i = 0; i < Q_->ab_size(a.uid); ++i)
    O_.sadd(&r.c[(size_t)t[i] * f()], &a.c[(size_t)i * f()]);
  return r;
}

const Algebra::SubAbRing& Algebra::subab(int Vid, int Uid) const {
  auto key = std::make_pair(Vid, Uid);
  auto it = subab_.find(key);
  if (it != subab_.end()) return *it->second;
  if (!Q_->subset(Uid, Vid)) fail(errc::not_subgroup, "subab: U not inside V");
  auto R = std::make_unique<SubAbRing>();
  R->Vid = Vid;
  R->Uid = Uid;
  std::vector<char> seen(Q_->ab_size(Vid), 0);
  for (int u : Q_->sub(Uid).members) seen[Q_->ab_of(Vid, u)] = 1;
  R->pos.assign(Q_->ab_size(Vid), -1);
  for (i64 i = 0; i < Q_->ab_size(Vid); ++i)
    if (seen[i]) {
      R->pos[i] = (int)R->elems.size();
      R->elems.push_back((int)i);
    }
  return *subab_.emplace(key, std::move(R)).first->second;
}

SubAbVec Algebra::pi_VU(int Vid, int Uid, const AbelVec& aU) const {
  if (aU.uid != Uid) fail(errc::invalid_input, "pi_VU: tag mismatch");
  const SubAbRing& R = subab(Vid, Uid);
  auto t = Q_->incl_ab_map(Uid, Vid);
  SubAbVec r = sazero(Vid, Uid);
  r.scale = aU.scale;
  r.cert = aU.cert;
  for (i64 i = 0; i < Q_->ab_size(Uid); ++i)
    O_.sadd(&r.c[(size_t)R.pos[t[i]] * f()], &aU.c[(size_t)i * f()]);
  return r;
}

SubAbVec Algebra::tau_VU(int Vid, int Uid, const AbelVec& aV) const {
  if (aV.uid != Vid) fail(errc::invalid_input, "tau_VU: tag mismatch");
  const SubAbRing& R = subab(Vid, Uid);
  int m = (int)(Q_->ab_size(Vid) / (i64)R.elems.size());  // [V^ab : U/[V,V]]
  SubAbVec r = sazero(Vid, Uid);
  r.scale = aV.scale;
  r.cert = aV.cert;
  for (i64 i = 0; i < Q_->ab_size(Vid); ++i) {
    if (R.pos[i] < 0) continue;
    std::vector<u64> t(f());
    O_.smul_int(t.data(), &aV.c[(size_t)i * f()], (u64)m);
    O_.sadd(&r.c[(size_t)R.pos[i] * f()], t.data());
  }
  return r;
}

int Algebra::omega(const ClassVec& x) const {
  if (x.uid != Q_->id_G()) fail(errc::invalid_input, "omega: input not over G");
  const Subgroup& G = Q_->sub(Q_->id_G());
  i64 expo = 1;
  for (i64 o : G.ab.orders) expo = std::max(expo, o);
  unsigned avail = value_prec(x);
  if (ipow(p(), std::min(avail, (unsigned)20)) < (u64)expo)
    fail(errc::precision_exhausted, "omega: precision below exponent of G^ab");
  ClassVec xi = descale_integral(x);
  int acc = 0;
  for (int c = 0; c < G.n_uclasses; ++c) {
    CoeffElt a = O_.zero();
    for (unsigned j = 0; j < f(); ++j) a.c[j] = xi.c[(size_t)c * f() + j];
    u64 tr = O_.trace_to_zp(a);
    int g = G.uclass_rep[c];
    acc = Q_->ab_add(Q_->id_G(), acc, Q_->ab_scale(Q_->id_G(), Q_->ab_of(Q_->id_G(), g), (i64)(tr % (u64)expo)));
  }
  return acc;
}

// ---- membership ----

Membership Algebra::membership(int uid, const std::vector<AbelVec>& gens, const AbelVec& ff,
                               unsigned p_power) const {
  unsigned t = std::min(k_, value_prec(ff));
  for (auto& g : gens) t = std::min(t, value_prec(g));
  EchelonPK ech(O_.mod(), (unsigned)(Q_->ab_size(uid) * f()));
  u64 scale = ipow(p(), p_power) % O_.mod().m;
  for (size_t gi = 0; gi < gens.size(); ++gi) {
    std::vector<u64> row = gens[gi].c;
    for (auto& v : row) v = O_.mod().mul(v, scale);
    ech.insert(std::move(row), (int)gi);
  }
  // decision at precision t: adjoin p^t rows
  u64 pt = ipow(p(), t) % O_.mod().m;
  for (unsigned j = 0; j < Q_->ab_size(uid) * f(); ++j) {
    std::vector<u64> row(Q_->ab_size(uid) * f(), 0);
    row[j] = pt;
    ech.insert(std::move(row), -1);
  }
  auto red = ech.reduce(ff.c);
  Membership m;
  m.cert = t;
  m.member = red.member;
  m.residual = std::move(red.residual);
  for (auto& [i, c] : red.combo)
    if (i >= 0) m.witness.emplace_back(i, c);
  return m;
}

namespace {
EchelonPK build_image_echelon(const Algebra& A, int uid, unsigned t,
                              const std::function<AbelVec(const AbelVec&)>& mapfn, u64 p_power) {
  const Quotient& Q = A.Q();
  unsigned dim = (unsigned)(Q.ab_size(uid) * A.f());
  EchelonPK ech(A.O().mod(), dim);
  u64 sc = ipow(A.p(), (unsigned)p_power) % A.O().mod().m;
  for (i64 i = 0; i < Q.ab_size(uid); ++i)
    for (unsigned j = 0; j < A.f(); ++j) {
      CoeffElt e = A.O().zero();
      e.c[j] = 1;
      AbelVec b = A.abasis(uid, (int)i, e);
      AbelVec img = mapfn(b);
      std::vector<u64> row = img.c;
      for (auto& v : row) v = A.O().mod().mul(v, sc);
      ech.insert(std::move(row), (int)(i * A.f() + j));
    }
  u64 pt = ipow(A.p(), t) % A.O().mod().m;
  for (unsigned j = 0; j < dim; ++j) {
    std::vector<u64> row(dim, 0);
    row[j] = pt;
    ech.insert(std::move(row), -1);
  }
  return ech;
}

Membership run_membership(const EchelonPK& ech, const AbelVec& f_, unsigned t) {
  auto red = ech.reduce(f_.c);
  Membership m;
  m.cert = t;
  m.member = red.member;
  m.residual = std::move(red.residual);
  for (auto& [i, c] : red.combo)
    if (i >= 0) m.witness.emplace_back(i, c);
  return m;
}
}  // namespace

Membership Algebra::in_sigma_N_image(const AbelVec& a) const {
  unsigned t = std::min(k_, value_prec(a));
  auto key = std::make_pair(a.uid, t);
  auto it = sigmaN_ech_.find(key);
  if (it == sigmaN_ech_.end()) {
    auto e = std::make_unique<EchelonPK>(
        build_image_echelon(*this, a.uid, t, [&](const AbelVec& b) { return sigma_N(b); }, 0));
    it = sigmaN_ech_.emplace(key, std::move(e)).first;
  }
  if (a.scale) {
    AbelVec ai = descale_integral(a);
    return run_membership(*it->second, ai, t);
  }
  return run_membership(*it->second, a, t);
}

Membership Algebra::in_sigma_pair_image(int Vid, int Uid, const AbelVec& a) const {
  unsigned t = std::min(k_, value_prec(a));
  auto key = std::make_pair(Vid * 4096 + Uid, t);
  auto it = sigmaVU_ech_.find(key);
  if (it == sigmaVU_ech_.end()) {
    auto e = std::make_unique<EchelonPK>(build_image_echelon(
        *this, Uid, t, [&](const AbelVec& b) { return sigma_pair(Vid, Uid, b); }, 0));
    it = sigmaVU_ech_.emplace(key, std::move(e)).first;
  }
  return run_membership(*it->second, a, t);
}

Membership Algebra::in_p_sigma_image(const AbelVec& a) const {
  unsigned t = std::min(k_, value_prec(a));
  auto key = std::make_pair(a.uid, t);
  auto it = psigma_ech_.find(key);
  if (it == psigma_ech_.end()) {
    auto e = std::make_unique<EchelonPK>(
        build_image_echelon(*this, a.uid, t, [&](const AbelVec& b) { return sigma_N(b); }, 1));
    it = psigma_ech_.emplace(key, std::move(e)).first;
  }
  return run_membership(*it->second, a, t);
}

// ---- level projections ----

GroupVec Algebra::project_group(const Algebra& finer, const GroupVec& x) const {
  GroupVec r = gzero();
  r.cert = x.cert;
  for (int e = 0; e < finer.Q().order(); ++e) {
    int t = Q_->project_elt(finer.Q(), e);
    O_.sadd(&r.c[(size_t)t * f()], &x.c[(size_t)e * f()]);
  }
  return r;
}

ClassVec Algebra::project_class(const Algebra& finer, const ClassVec& x) const {
  int cid = Q_->match_subgroup(finer.Q(), x.uid);
  const Subgroup& FU = finer.Q().sub(x.uid);
  const Subgroup& CU = Q_->sub(cid);
  ClassVec r = czero(cid);
  r.scale = x.scale;
  r.cert = x.cert;
  for (int c = 0; c < FU.n_uclasses; ++c) {
    int t = CU.uclass_of[CU.mpos[Q_->project_elt(finer.Q(), FU.uclass_rep[c])]];
    O_.sadd(&r.c[(size_t)t * f()], &x.c[(size_t)c * f()]);
  }
  return r;
}

AbelVec Algebra::project_abel(const Algebra& finer, const AbelVec& x) const {
  int cid = Q_->match_subgroup(finer.Q(), x.uid);
  AbelVec r = azero(cid);
  r.scale = x.scale;
  r.cert = x.cert;
  for (i64 i = 0; i < finer.Q().ab_size(x.uid); ++i) {
    int elt = Q_->project_elt(finer.Q(), finer.Q().ab_lift(x.uid, (int)i));
    O_.sadd(&r.c[(size_t)Q_->ab_of(cid, elt) * f()], &x.c[(size_t)i * f()]);
  }
  return r;
}

unsigned Algebra::jac_nilpotency() const {
  if (nilp_) return nilp_;
  // Jennings: t(G) = 1 + (p-1) * sum_i i * dim(D_i / D_{i+1})
  std::vector<std::vector<int>> D;
  D.push_back(Q_->sub(Q_->id_G()).members);  // D_1 = G
  for (;;) {
    size_t i = D.size() + 1;  // computing D_i
    std::vector<int> seed;
    for (int x : D[i - 2])
      for (int g = 0; g < Q_->order(); ++g)
        seed.push_back(Q_->mul(Q_->mul(x, g), Q_->mul(Q_->inv(x), Q_->inv(g))));
    size_t half = (i + p() - 1) / p();  // ceil(i/p)
    for (int x : D[half - 1]) seed.push_back(Q_->pw(x, (i64)p()));
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
    std::vector<int> Di = Q_->closure(seed);
    D.push_back(Di);
    if ((int)Di.size() == 1) break;
    if (D.size() > 200) fail(errc::invalid_input, "jennings series did not terminate");
  }
  u64 total = 0;
  for (size_t i = 0; i + 1 < D.size(); ++i) {
    u64 quot = D[i].size() / D[i + 1].size();
    total += (i + 1) * (u64)ilog_floor(p(), quot);
  }
  nilp_ = (unsigned)(1 + (p() - 1) * total);
  return nilp_;
}

}  // namespace iwk1
