#include "iwk1/group.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "iwk1/linalg.hpp"

namespace iwk1 {

void GroupDef::validate() {
  if (p < 3) fail(errc::invalid_input, "(H4): p must be an odd prime");
  for (u64 d = 2; d * d <= p; ++d)
    if (p % d == 0) fail(errc::invalid_input, "(H4): p not prime");
  if (nH < 1 || (int)h_table.size() != nH * nH)
    fail(errc::invalid_input, "h_table size mismatch");
  {
    int m = nH;
    while (m % (int)p == 0) m /= (int)p;
    if (m != 1) fail(errc::invalid_input, "|H| is not a power of p");
  }
  for (int x : h_table)
    if (x < 0 || x >= nH) fail(errc::invalid_input, "h_table entry out of range");
  for (int i = 0; i < nH; ++i) {
    if (hmul(0, i) != i || hmul(i, 0) != i)
      fail(errc::invalid_input, "index 0 is not the identity of H");
  }
  // associativity and inverses
  for (int i = 0; i < nH; ++i)
    for (int j = 0; j < nH; ++j)
      for (int k = 0; k < nH; ++k)
        if (hmul(hmul(i, j), k) != hmul(i, hmul(j, k)))
          fail(errc::invalid_input, "h_table is not associative");
  h_inv.assign(nH, -1);
  for (int i = 0; i < nH; ++i) {
    for (int j = 0; j < nH; ++j)
      if (hmul(i, j) == 0) { h_inv[i] = j; break; }
    if (h_inv[i] < 0) fail(errc::invalid_input, "h_table has no inverse for some element");
  }
  if ((int)gamma_action.size() != nH) fail(errc::invalid_input, "gamma_action size mismatch");
  {
    std::vector<char> seen(nH, 0);
    for (int x : gamma_action) {
      if (x < 0 || x >= nH || seen[x]) fail(errc::invalid_input, "gamma_action is not a permutation");
      seen[x] = 1;
    }
  }
  for (int i = 0; i < nH; ++i)
    for (int j = 0; j < nH; ++j)
      if (gamma_action[hmul(i, j)] != hmul(gamma_action[i], gamma_action[j]))
        fail(errc::invalid_input, "gamma_action is not an automorphism");
  // (H1): Z = Gamma^(p^e) must centralize H, i.e. action^(p^e) = id
  i64 pe = (i64)ipow(p, e);
  std::vector<int> pw(nH);
  std::iota(pw.begin(), pw.end(), 0);
  act_pow.clear();
  for (i64 a = 0; a < pe; ++a) {
    act_pow.push_back(pw);
    std::vector<int> nx(nH);
    for (int i = 0; i < nH; ++i) nx[i] = gamma_action[pw[i]];
    pw = nx;
  }
  for (int i = 0; i < nH; ++i)
    if (pw[i] != i) fail(errc::invalid_input, "(H1): gamma_action^(p^e) != id, Z not central");
}

GElt gmul(const GroupDef& d, const GElt& x, const GElt& y) {
  return GElt{d.hmul(x.h, d.act(x.a, y.h)), x.a + y.a};
}

GElt ginv(const GroupDef& d, const GElt& x) {
  int hh = d.act(-x.a, d.h_inv[x.h]);
  return GElt{hh, -x.a};
}

Quotient::Quotient(const GroupDef& def, int n) : def_(&def), n_(n) {
  if (n < 0) fail(errc::invalid_input, "Quotient: n >= 0 required");
  a_mod_ = (i64)ipow(def.p, def.e + (unsigned)n);
  if ((i64)def.nH * a_mod_ > 100000) fail(errc::invalid_input, "Quotient: group too large");
  order_ = def.nH * (int)a_mod_;
  mul_.assign((size_t)order_ * order_, 0);
  inv_.assign(order_, 0);
  for (int x = 0; x < order_; ++x) {
    int hx = hof(x);
    i64 ax = aof(x);
    for (int y = 0; y < order_; ++y)
      mul_[(size_t)x * order_ + y] = idx(def.hmul(hx, def.act(ax, hof(y))), ax + aof(y));
  }
  for (int x = 0; x < order_; ++x) {
    GElt g = ginv(def, GElt{hof(x), aof(x)});
    inv_[x] = project_from(g);
  }
  // Z-bar: generated by (1, p^e), order p^n
  z_order_ = (int)ipow(def.p, (unsigned)n);
  z_gen_ = (n == 0) ? one() : idx(0, (i64)ipow(def.p, def.e));
  {
    int z = one();
    for (int i = 0; i < z_order_; ++i) {
      z_members_.push_back(z);
      z = mul(z, z_gen_);
    }
    std::sort(z_members_.begin(), z_members_.end());
  }
  build_classes();
  build_lattice();
}

int Quotient::pw(int x, i64 m) const {
  m %= (i64)order_;  // element order divides |G|
  if (m < 0) m += order_;
  int r = one();
  while (m) {
    if (m & 1) r = mul(r, x);
    x = mul(x, x);
    m >>= 1;
  }
  return r;
}

i64 Quotient::elt_order(int x) const {
  i64 o = 1;
  int y = x;
  while (y != one()) {
    y = mul(y, x);
    ++o;
  }
  return o;
}

void Quotient::build_classes() {
  class_of_.assign(order_, -1);
  for (int x = 0; x < order_; ++x) {
    if (class_of_[x] >= 0) continue;
    int c = n_classes_++;
    std::vector<int> mem;
    for (int g = 0; g < order_; ++g) {
      int y = conj(g, x);
      if (class_of_[y] < 0) {
        class_of_[y] = c;
        mem.push_back(y);
      }
    }
    std::sort(mem.begin(), mem.end());
    class_members_.push_back(mem);
    class_rep_.push_back(mem.front());
  }
}

std::vector<int> Quotient::closure(std::vector<int> seed) const {
  std::vector<char> in(order_, 0);
  std::vector<int> elems;
  auto push = [&](int x) {
    if (!in[x]) {
      in[x] = 1;
      elems.push_back(x);
    }
  };
  push(one());
  for (int s : seed) push(s);
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = 0; j < elems.size(); ++j) {
      push(mul(elems[i], elems[j]));
      if (elems.size() > (size_t)order_) break;
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

void Quotient::build_lattice() {
  // bottom-up closure over cyclic extensions starting from Z-bar
  std::map<std::vector<char>, std::vector<int>> found;
  auto mask_of = [&](const std::vector<int>& mem) {
    std::vector<char> m(order_, 0);
    for (int x : mem) m[x] = 1;
    return m;
  };
  std::vector<std::vector<int>> queue;
  {
    std::vector<int> z = z_members_;
    found[mask_of(z)] = z;
    queue.push_back(z);
  }
  while (!queue.empty()) {
    std::vector<int> U = queue.back();
    queue.pop_back();
    std::vector<char> um = mask_of(U);
    for (int g = 0; g < order_; ++g) {
      if (um[g]) continue;
      std::vector<int> seed = U;
      seed.push_back(g);
      std::vector<int> W = closure(seed);
      auto wm = mask_of(W);
      if (!found.count(wm)) {
        found[wm] = W;
        queue.push_back(W);
      }
    }
  }
  // deterministic order: by size, then lexicographic member list
  std::vector<std::vector<int>> subs;
  for (auto& [m, mem] : found) subs.push_back(mem);
  std::sort(subs.begin(), subs.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  lat_.resize(subs.size());
  for (size_t i = 0; i < subs.size(); ++i) {
    Subgroup& U = lat_[i];
    U.id = (int)i;
    U.members = subs[i];
    U.order = (int)subs[i].size();
    U.mask = mask_of(subs[i]);
    U.mpos.assign(order_, -1);
    for (size_t k = 0; k < subs[i].size(); ++k) U.mpos[subs[i][k]] = (int)k;
    mask_index_[U.mask] = (int)i;
  }
  id_Z_ = find_subgroup(lat_.front().mask);  // smallest is Z-bar itself
  {
    std::vector<char> gm(order_, 1);
    id_G_ = find_subgroup(gm);
  }
  if (lat_[id_Z_].members != z_members_) fail(errc::invalid_input, "lattice bottom is not Z");

  // conjugation action on the lattice
  conj_sub_.assign((size_t)order_ * lat_.size(), -1);
  for (int g = 0; g < order_; ++g)
    for (size_t i = 0; i < lat_.size(); ++i) {
      std::vector<char> m(order_, 0);
      for (int x : lat_[i].members) m[conj(g, x)] = 1;
      conj_sub_[(size_t)g * lat_.size() + i] = find_subgroup(m);
    }

  for (auto& U : lat_) build_subgroup_caches(U);

  // normalizers and W(U) transversals
  for (auto& U : lat_) {
    std::vector<char> nm(order_, 0);
    for (int g = 0; g < order_; ++g)
      if (conj_subgroup(g, U.id) == U.id) nm[g] = 1;
    U.normalizer = find_subgroup(nm);
    if (U.normalizer < 0) fail(errc::invalid_input, "normalizer not in lattice");
    U.w_transversal = left_transversal(U.normalizer, U.id);
  }

  // C(G,Z), U', P(V), P_c(V)
  for (auto& U : lat_) {
    U.cyclic_over_z = false;
    for (int u : U.members) {
      // does uZ generate U/Z?
      std::vector<int> seed = z_members_;
      seed.push_back(u);
      if ((int)closure(seed).size() == U.order) {
        U.cyclic_over_z = true;
        break;
      }
    }
    if (U.cyclic_over_z) cyc_ids_.push_back(U.id);
  }
  for (int cid : cyc_ids_) {
    Subgroup& U = lat_[cid];
    if (U.order == z_order_) continue;  // U = Z
    // U' = Z * (p-th powers of U): the unique index-p subgroup over Z
    std::vector<int> seed = z_members_;
    for (int u : U.members) seed.push_back(pw(u, (i64)def_->p));
    std::vector<int> W = closure(seed);
    std::vector<char> m(order_, 0);
    for (int x : W) m[x] = 1;
    U.uprime = find_subgroup(m);
    if (U.uprime < 0 || lat_[U.uprime].order * (int)def_->p != U.order)
      fail(errc::invalid_input, "U' computation failed");
  }
  for (auto& V : lat_) {
    for (int wid : cyc_ids_) {
      const Subgroup& W = lat_[wid];
      if (W.order == z_order_) continue;  // W != Z
      if (subset(W.uprime, V.id)) V.pv.push_back(wid);
    }
    if (V.cyclic_over_z) {
      for (int wid : cyc_ids_) {
        const Subgroup& W = lat_[wid];
        if (W.order == V.order * (int)def_->p && subset(V.id, wid)) V.pcv.push_back(wid);
      }
    }
  }
}

int Quotient::find_subgroup(const std::vector<char>& mask) const {
  auto it = mask_index_.find(mask);
  return it == mask_index_.end() ? -1 : it->second;
}

bool Quotient::subset(int Uid, int Vid) const {
  const auto& u = lat_[Uid];
  const auto& v = lat_[Vid];
  for (int x : u.members)
    if (!v.mask[x]) return false;
  return true;
}

void Quotient::build_subgroup_caches(Subgroup& U) {
  // commutator subgroup [U,U] (closure of commutators)
  {
    std::vector<int> seed;
    for (int a : U.members)
      for (int b : U.members) seed.push_back(mul(mul(a, b), mul(inv(a), inv(b))));
    std::sort(seed.begin(), seed.end());
    seed.erase(std::unique(seed.begin(), seed.end()), seed.end());
    U.comm = closure(seed);
    U.comm_mask.assign(order_, 0);
    for (int x : U.comm) U.comm_mask[x] = 1;
  }
  // classes of U as a group
  {
    U.uclass_of.assign(U.members.size(), -1);
    U.n_uclasses = 0;
    for (size_t i = 0; i < U.members.size(); ++i) {
      if (U.uclass_of[i] >= 0) continue;
      int c = U.n_uclasses++;
      int rep = U.members[i];
      for (int g : U.members) {
        int y = conj(g, U.members[i]);
        int pos = U.mpos[y];
        if (U.uclass_of[pos] < 0) U.uclass_of[pos] = c;
      }
      U.uclass_rep.push_back(rep);
    }
  }
  build_abelianization(U);
}

void Quotient::build_abelianization(Subgroup& U) {
  // A = U/[U,U]; cosets with minimal-index representatives
  int m = U.order;
  std::vector<int> coset_of(m, -1);
  std::vector<int> coset_rep;
  for (int i = 0; i < m; ++i) {
    if (coset_of[i] >= 0) continue;
    int c = (int)coset_rep.size();
    coset_rep.push_back(U.members[i]);
    for (int x : U.comm) {
      int y = mul(U.members[i], x);
      coset_of[U.mpos[y]] = c;
    }
  }
  int na = (int)coset_rep.size();
  auto cmul = [&](int c1, int c2) {
    return coset_of[U.mpos[mul(coset_rep[c1], coset_rep[c2])]];
  };
  // generating set, greedily by minimal representative
  std::vector<int> gens;
  {
    std::vector<char> in(na, 0);
    int idc = coset_of[U.mpos[one()]];
    in[idc] = 1;
    for (int c = 0; c < na; ++c) {
      if (in[c]) continue;
      gens.push_back(c);
      // close
      std::vector<int> cur;
      for (int t = 0; t < na; ++t)
        if (in[t]) cur.push_back(t);
      cur.push_back(c);
      in[c] = 1;
      for (size_t i = 0; i < cur.size(); ++i)
        for (size_t j = 0; j < cur.size(); ++j) {
          int y = cmul(cur[i], cur[j]);
          if (!in[y]) {
            in[y] = 1;
            cur.push_back(y);
          }
        }
    }
  }
  unsigned d = (unsigned)gens.size();
  AbelData& ab = U.ab;
  if (d == 0) {
    ab.orders.clear();
    ab.size = 1;
    ab.coord.assign(m, 0);
    ab.lift = {one()};
    return;
  }
  // BFS word vectors over the generators
  std::vector<std::vector<i64>> word(na);
  std::vector<char> vis(na, 0);
  int idc = coset_of[U.mpos[one()]];
  word[idc].assign(d, 0);
  vis[idc] = 1;
  std::queue<int> bfs;
  bfs.push(idc);
  while (!bfs.empty()) {
    int c = bfs.front();
    bfs.pop();
    for (unsigned i = 0; i < d; ++i) {
      int y = cmul(c, gens[i]);
      if (!vis[y]) {
        vis[y] = 1;
        word[y] = word[c];
        word[y][i] += 1;
        bfs.push(y);
      }
    }
  }
  // abelianized Schreier relations
  std::vector<std::vector<i64>> rels;
  for (int c = 0; c < na; ++c)
    for (unsigned i = 0; i < d; ++i) {
      int y = cmul(c, gens[i]);
      std::vector<i64> r = word[c];
      r[i] += 1;
      bool nz = false;
      for (unsigned j = 0; j < d; ++j) {
        r[j] -= word[y][j];
        nz |= (r[j] != 0);
      }
      if (nz) rels.push_back(r);
    }
  SmithZ s = smith_over_z(rels, d);
  // canonical coordinates
  std::vector<unsigned> keep;
  for (unsigned j = 0; j < d; ++j) {
    if (s.diag[j] == 0) fail(errc::invalid_input, "abelianization not finite");
    if (s.diag[j] != 1) keep.push_back(j);
  }
  ab.orders.clear();
  ab.size = 1;
  for (unsigned j : keep) {
    ab.orders.push_back(s.diag[j]);
    ab.size *= s.diag[j];
  }
  ab.coord.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    const std::vector<i64>& x = word[coset_of[i]];
    i64 index = 0, radix = 1;
    for (unsigned t = 0; t < keep.size(); ++t) {
      unsigned j = keep[t];
      i64 y = 0;
      for (unsigned a = 0; a < d; ++a) y += x[a] * s.V[a * d + j];
      y %= s.diag[j];
      if (y < 0) y += s.diag[j];
      index += y * radix;
      radix *= s.diag[j];
    }
    ab.coord[i] = (int)index;
  }
  ab.lift.assign(ab.size, -1);
  for (int i = 0; i < m; ++i)
    if (ab.lift[ab.coord[i]] < 0) ab.lift[ab.coord[i]] = U.members[i];
  for (i64 i = 0; i < ab.size; ++i)
    if (ab.lift[i] < 0) fail(errc::invalid_input, "abelianization coordinates not surjective");
}

int Quotient::ab_of(int id, int elt) const {
  const Subgroup& U = lat_[id];
  int pos = U.mpos[elt];
  if (pos < 0) fail(errc::not_subgroup, "ab_of: element not in subgroup");
  return U.ab.coord[pos];
}

int Quotient::ab_add(int id, int x, int y) const {
  const auto& ords = lat_[id].ab.orders;
  int r = 0;
  i64 radix = 1;
  for (i64 o : ords) {
    i64 xa = (x / radix) % o, ya = (y / radix) % o;
    r += (int)(((xa + ya) % o) * radix);
    radix *= o;
  }
  return r;
}

int Quotient::ab_neg(int id, int x) const {
  const auto& ords = lat_[id].ab.orders;
  int r = 0;
  i64 radix = 1;
  for (i64 o : ords) {
    i64 xa = (x / radix) % o;
    r += (int)(((o - xa) % o) * radix);
    radix *= o;
  }
  return r;
}

int Quotient::ab_scale(int id, int x, i64 m) const {
  const auto& ords = lat_[id].ab.orders;
  int r = 0;
  i64 radix = 1;
  for (i64 o : ords) {
    i64 xa = (x / radix) % o;
    i64 mm = ((m % o) + o) % o;
    r += (int)(((xa * mm) % o) * radix);
    radix *= o;
  }
  return r;
}

std::vector<int> Quotient::conj_ab_map(int g, int id) const {
  int tid = conj_subgroup(g, id);
  const Subgroup& U = lat_[id];
  std::vector<int> t(U.ab.size);
  for (i64 i = 0; i < U.ab.size; ++i) t[i] = ab_of(tid, conj(g, U.ab.lift[i]));
  return t;
}

std::vector<int> Quotient::incl_ab_map(int Uid, int Vid) const {
  if (!subset(Uid, Vid)) fail(errc::not_subgroup, "incl_ab_map: U not inside V");
  const Subgroup& U = lat_[Uid];
  std::vector<int> t(U.ab.size);
  for (i64 i = 0; i < U.ab.size; ++i) t[i] = ab_of(Vid, U.ab.lift[i]);
  return t;
}

bool Quotient::ab_generates_over_z(int id, int x) const {
  const Subgroup& U = lat_[id];
  if (!U.cyclic_over_z) fail(errc::not_cyclic, "eta: U not in C(G,Z)");
  int u = U.ab.lift[x];
  std::vector<int> seed = z_members_;
  seed.push_back(u);
  return (int)closure(seed).size() == U.order;
}

std::vector<int> Quotient::left_transversal(int Vid, int Uid) const {
  if (!subset(Uid, Vid)) fail(errc::not_subgroup, "transversal: U not inside V");
  const Subgroup& V = lat_[Vid];
  const Subgroup& U = lat_[Uid];
  std::vector<char> seen(order_, 0);
  std::vector<int> reps;
  for (int v : V.members) {
    if (seen[v]) continue;
    reps.push_back(v);
    for (int u : U.members) seen[mul(v, u)] = 1;
  }
  return reps;
}

std::vector<int> Quotient::right_transversal(int Vid, int Uid) const {
  if (!subset(Uid, Vid)) fail(errc::not_subgroup, "transversal: U not inside V");
  const Subgroup& V = lat_[Vid];
  const Subgroup& U = lat_[Uid];
  std::vector<char> seen(order_, 0);
  std::vector<int> reps;
  for (int v : V.members) {
    if (seen[v]) continue;
    reps.push_back(v);
    for (int u : U.members) seen[mul(u, v)] = 1;
  }
  return reps;
}

int Quotient::ver_idx(int Vid, int Uid, int g) const {
  return ver_idx_with_transversal(Vid, Uid, g, left_transversal(Vid, Uid));
}

int Quotient::ver_idx_with_transversal(int Vid, int Uid, int g,
                                        const std::vector<int>& R) const {
  const Subgroup& V = lat_[Vid];
  const Subgroup& U = lat_[Uid];
  if (!subset(Uid, Vid)) fail(errc::not_subgroup, "ver: U not inside V");
  if (V.mpos[g] < 0) fail(errc::not_subgroup, "ver: g not in V");
  // gh = h_g c_{g,h}; product of the cocycles in U^ab
  int acc = 0;  // identity of U^ab
  for (int h : R) {
    int gh = mul(g, h);
    int hg = -1;
    for (int r : R) {
      if (U.mask[mul(inv(r), gh)]) { hg = r; break; }
    }
    int c = mul(inv(hg), gh);
    acc = ab_add(Uid, acc, ab_of(Uid, c));
  }
  return acc;
}

std::vector<int> Quotient::check_H3() const {
  i64 pe = (i64)ipow(def_->p, def_->e);
  std::vector<int> R;
  for (i64 j = 0; j < pe; ++j)
    for (int h = 0; h < def_->nH; ++h) R.push_back(idx(h, j));
  std::sort(R.begin(), R.end());
  // transversal of G/Z containing 1
  std::vector<char> seen(order_, 0);
  for (int r : R)
    for (int z : z_members_) {
      int x = mul(r, z);
      if (seen[x]) fail(errc::h3_violation, "(H3): R meets a Z-coset twice");
      seen[x] = 1;
    }
  for (int x = 0; x < order_; ++x)
    if (!seen[x]) fail(errc::h3_violation, "(H3): R misses a Z-coset");
  if (!std::binary_search(R.begin(), R.end(), one()))
    fail(errc::h3_violation, "(H3): 1 not in R");
  // closed under conjugation
  std::vector<char> rm(order_, 0);
  for (int r : R) rm[r] = 1;
  for (int g = 0; g < order_; ++g)
    for (int r : R)
      if (!rm[conj(g, r)]) fail(errc::h3_violation, "(H3): R not a union of G-orbits");
  return R;
}

int Quotient::project_elt(const Quotient& finer, int x) const {
  return idx(finer.hof(x), finer.aof(x));
}

int Quotient::match_subgroup(const Quotient& finer, int fid) const {
  std::vector<char> m(order_, 0);
  for (int x : finer.sub(fid).members) m[project_elt(finer, x)] = 1;
  return find_subgroup(m);
}

}  // namespace iwk1
