#include "iwk1/kone.hpp"

#include <algorithm>

namespace iwk1 {

UnitElement Kone::make_unit(GroupVec x) const {
  if (!A_->gis_unit(x)) fail(errc::not_a_unit, "make_unit: augmentation not a unit");
  return UnitElement{std::move(x), nullptr};
}

const GroupVec& Kone::inverse(const UnitElement& u) const {
  if (!u.inverse) u.inverse = std::make_shared<GroupVec>(A_->ginvert(u.x));
  return *u.inverse;
}

std::pair<CoeffElt, GroupVec> Kone::teichmuller_decompose(const GroupVec& x) const {
  if (!A_->gis_unit(x)) fail(errc::not_a_unit, "teichmuller_decompose: not a unit");
  CoeffElt r = A_->gaug(x);
  CoeffElt zeta = A_->O().teichmuller(r);
  CoeffElt zi = A_->O().inv(zeta);
  GroupVec u = A_->scalar_mul(x, zi);
  u.cert = x.cert;
  return {zeta, u};
}

const Kone::CosetTable& Kone::coset_table(int Vid, int Uid) const {
  auto key = std::make_pair(Vid, Uid);
  auto it = cosets_.find(key);
  if (it != cosets_.end()) return it->second;
  const Quotient& Q = A_->Q();
  CosetTable T;
  T.reps = Q.right_transversal(Vid, Uid);
  T.coset_of.assign(Q.order(), -1);
  const Subgroup& U = Q.sub(Uid);
  for (size_t j = 0; j < T.reps.size(); ++j)
    for (int u : U.members) T.coset_of[Q.mul(u, T.reps[j])] = (int)j;
  return cosets_.emplace(key, std::move(T)).first->second;
}

AbelVec Kone::theta_VU(int Vid, int Uid, const GroupVec& x) const {
  const Quotient& Q = A_->Q();
  if (!Q.subset(Uid, Vid)) fail(errc::not_subgroup, "theta: U not inside V");
  const Subgroup& V = Q.sub(Vid);
  const Subgroup& U = Q.sub(Uid);
  // support must lie in V
  for (int e = 0; e < Q.order(); ++e) {
    bool z = true;
    for (unsigned j = 0; j < A_->f(); ++j) z &= (x.c[(size_t)e * A_->f() + j] == 0);
    if (!z && V.mpos[e] < 0) fail(errc::invalid_input, "theta: support not inside V");
  }
  const CosetTable& T = coset_table(Vid, Uid);
  int m = (int)T.reps.size();
  AbelOps R{A_, Uid};
  std::vector<AbelVec> M((size_t)m * m, A_->azero(Uid));
  unsigned ff = A_->f();
  for (int i = 0; i < m; ++i) {
    for (int e : V.members) {
      bool z = true;
      for (unsigned j = 0; j < ff; ++j) z &= (x.c[(size_t)e * ff + j] == 0);
      if (z) continue;
      int t = Q.mul(T.reps[i], e);  // s_i x = u s_j
      int j = T.coset_of[t];
      int u = Q.mul(t, Q.inv(T.reps[j]));
      int idx = Q.ab_of(Uid, u);
      A_->O().sadd(&M[(size_t)i * m + j].c[(size_t)idx * ff], &x.c[(size_t)e * ff]);
    }
  }
  unsigned cert = x.cert;
  for (auto& e : M) e.cert = cert;
  AbelVec det = berkowitz_det(R, M, m);
  det.cert = std::min(det.cert, cert);
  (void)U;
  return det;
}

Tuple Kone::theta(const GroupVec& x) const {
  if (!A_->gis_unit(x)) fail(errc::not_a_unit, "theta: not a unit");
  Tuple t;
  t.comp.reserve(A_->Q().n_subgroups());
  for (int uid = 0; uid < A_->Q().n_subgroups(); ++uid) t.comp.push_back(theta_U(uid, x));
  return t;
}

GroupVec Kone::ab_lift_vec(const AbelVec& y) const {
  const Quotient& Q = A_->Q();
  const Subgroup& V = Q.sub(y.uid);
  if ((i64)V.n_uclasses != V.ab.size) fail(errc::invalid_input, "ab_lift_vec: V not abelian");
  GroupVec g = A_->gzero();
  g.cert = y.cert;
  if (y.scale) fail(errc::invalid_input, "ab_lift_vec: scaled input");
  for (i64 i = 0; i < V.ab.size; ++i)
    for (unsigned j = 0; j < A_->f(); ++j)
      g.c[(size_t)V.ab.lift[i] * A_->f() + j] = y.c[(size_t)i * A_->f() + j];
  return g;
}

AbelVec Kone::norm_abelian(int Vid, int Uid, const AbelVec& y) const {
  if (y.uid != Vid) fail(errc::invalid_input, "norm_abelian: tag mismatch");
  return theta_VU(Vid, Uid, ab_lift_vec(y));
}

SubAbVec Kone::nu_VU(int Vid, int Uid, const AbelVec& y) const {
  const Quotient& Q = A_->Q();
  if (y.uid != Vid) fail(errc::invalid_input, "nu_VU: y must live over V^ab");
  if (!Q.subset(Uid, Vid)) fail(errc::not_subgroup, "nu_VU: U not inside V");
  // [V,V] <= U required for U/[V,V] to make sense
  for (int c : Q.sub(Vid).comm)
    if (!Q.sub(Uid).mask[c]) fail(errc::not_subgroup, "nu_VU: [V,V] not inside U");
  const Algebra::SubAbRing& S = A_->subab(Vid, Uid);
  i64 nV = Q.ab_size(Vid);
  int m = (int)(nV / (i64)S.elems.size());
  // cosets of U'' inside V^ab with minimal representatives
  std::vector<int> coset_of(nV, -1), reps;
  for (i64 v = 0; v < nV; ++v) {
    if (coset_of[v] >= 0) continue;
    int j = (int)reps.size();
    reps.push_back((int)v);
    for (int s : S.elems) coset_of[Q.ab_add(Vid, (int)v, s)] = j;
  }
  if ((int)reps.size() != m) fail(errc::invalid_input, "nu_VU: coset count mismatch");
  SubAbOps R{A_, Vid, Uid};
  std::vector<SubAbVec> M((size_t)m * m, A_->sazero(Vid, Uid));
  unsigned ff = A_->f();
  for (int i = 0; i < m; ++i)
    for (i64 v = 0; v < nV; ++v) {
      bool z = true;
      for (unsigned j = 0; j < ff; ++j) z &= (y.c[(size_t)v * ff + j] == 0);
      if (z) continue;
      int t = Q.ab_add(Vid, reps[i], (int)v);
      int j = coset_of[t];
      int u = Q.ab_add(Vid, t, Q.ab_neg(Vid, reps[j]));
      int pos = S.pos[u];
      if (pos < 0) fail(errc::invalid_input, "nu_VU: decomposition left the subgroup");
      A_->O().sadd(&M[(size_t)i * m + j].c[(size_t)pos * ff], &y.c[(size_t)v * ff]);
    }
  for (auto& e : M) e.cert = y.cert;
  SubAbVec det = berkowitz_det(R, M, m);
  det.cert = std::min(det.cert, y.cert);
  return det;
}

LeibnizReport Kone::leibniz_norm_oracle(int Vid, int Uid, const GroupVec& x) const {
  const Quotient& Q = A_->Q();
  int p = (int)A_->p();
  if (!Q.subset(Uid, Vid) || Q.index_in(Uid, Vid) != p)
    fail(errc::not_index_p, "leibniz: [V:U] must be p");
  const Subgroup& V = Q.sub(Vid);
  const Subgroup& U = Q.sub(Uid);
  // choose g in V minus U, minimal index; decompose x = sum_k x_k g^k
  int g = -1;
  for (int e : V.members)
    if (U.mpos[e] < 0) { g = e; break; }
  std::vector<int> gpow(p + 1);
  gpow[0] = Q.one();
  for (int i = 1; i <= p; ++i) gpow[i] = Q.mul(gpow[i - 1], g);
  // which coset U g^k an element lies in, and its U-part
  std::vector<int> kof(Q.order(), -1);
  for (int k = 0; k < p; ++k)
    for (int u : U.members) kof[Q.mul(u, gpow[k])] = k;
  unsigned ff = A_->f();
  // x_k projected to Lambda(U^ab)
  std::vector<AbelVec> xk(p, A_->azero(Uid));
  for (int e : V.members) {
    bool z = true;
    for (unsigned j = 0; j < ff; ++j) z &= (x.c[(size_t)e * ff + j] == 0);
    if (z) continue;
    int k = kof[e];
    int u = Q.mul(e, Q.inv(gpow[k]));
    A_->O().sadd(&xk[k].c[(size_t)Q.ab_of(Uid, u) * ff], &x.c[(size_t)e * ff]);
  }
  for (auto& v : xk) v.cert = x.cert;
  // sigma^c on Lambda(U^ab): conjugation by g
  auto sigma_pow = [&](const AbelVec& a, int c) {
    AbelVec r = a;
    for (int i = 0; i < c; ++i) r = A_->conj_translate(g, r);
    r.uid = Uid;  // g normalizes U ([V:U] = p prime: U normal in V)
    return r;
  };
  AbelVec gp = A_->abasis(Uid, Q.ab_of(Uid, gpow[p]), A_->O().one());
  // matrix M[c][c'] = sigma^c(x_{kappa(c'-c)}) * g^p when it wraps
  AbelOps R{A_, Uid};
  std::vector<AbelVec> M((size_t)p * p, A_->azero(Uid));
  for (int c = 0; c < p; ++c)
    for (int cp = 0; cp < p; ++cp) {
      int k = ((cp - c) % p + p) % p;
      AbelVec e = sigma_pow(xk[k], c);
      if (c + k >= p) e = A_->amul(e, gp);
      M[(size_t)c * p + cp] = e;
    }
  LeibnizReport rep{A_->azero(Uid), A_->azero(Uid), {}};
  rep.det_form = berkowitz_det(R, M, p);
  // collapsed: sum_k g^(pk) prod_i sigma^i pr(x_k)
  for (int k = 0; k < p; ++k) {
    AbelVec prod = A_->aone(Uid);
    prod.cert = x.cert;
    for (int i = 0; i < p; ++i) prod = A_->amul(prod, sigma_pow(xk[k], i));
    AbelVec gpk = A_->abasis(Uid, Q.ab_scale(Uid, Q.ab_of(Uid, gpow[p]), k), A_->O().one());
    rep.collapsed = A_->add(rep.collapsed, A_->amul(gpk, prod));
  }
  rep.diff_in_sigma = A_->in_sigma_pair_image(Vid, Uid, A_->sub(rep.det_form, rep.collapsed));
  return rep;
}

}  // namespace iwk1
