#pragma once

// Concrete model of G = H x| Gamma with H a finite p-group acted on by the
// topological generator gamma, Z = Gamma^(p^e) central, and the finite
// quotients G_n = G / Z^(p^n).  Elements of G_n are pairs (h, a) with
// h in H and a in Z/p^(e+n), indexed as h + |H|*a.  Multiplication:
// (h1,a1)(h2,a2) = (h1 * gamma^a1(h2), a1 + a2).

#include <map>
#include <string>
#include <vector>

#include "iwk1/base.hpp"

namespace iwk1 {

struct GroupDef {
  u64 p = 3;
  unsigned e = 0;
  int nH = 1;
  std::vector<int> h_table;       // row-major nH x nH, index 0 = identity
  std::vector<int> gamma_action;  // permutation of 0..nH-1
  std::string label;

  std::vector<std::vector<int>> act_pow;  // act_pow[a][h] = gamma^a(h), a < p^e
  std::vector<int> h_inv;

  void validate();  // group axioms, p-power order, automorphism, (H1), (H4)
  int hmul(int i, int j) const { return h_table[i * nH + j]; }
  int act(i64 a, int h) const {
    i64 pe = (i64)ipow(p, e);
    return act_pow[((a % pe) + pe) % pe][h];
  }
};

// element of the infinite group G, exact (a is an honest integer)
struct GElt {
  int h = 0;
  i64 a = 0;
};
GElt gmul(const GroupDef& d, const GElt& x, const GElt& y);
GElt ginv(const GroupDef& d, const GElt& x);

struct AbelData {
  std::vector<i64> orders;  // nontrivial cyclic factor orders, divisibility chain
  i64 size = 1;
  std::vector<int> coord;   // member position -> mixed-radix index in U^ab
  std::vector<int> lift;    // U^ab index -> element index of a preimage
};

struct Subgroup {
  int id = -1;
  std::vector<int> members;  // sorted element indices
  std::vector<char> mask;
  std::vector<int> mpos;     // element index -> position in members, or -1
  int order = 0;
  bool cyclic_over_z = false;  // U in C(G,Z)
  std::vector<int> comm;       // [U,U], sorted
  std::vector<char> comm_mask;
  AbelData ab;
  int normalizer = -1;               // lattice id of N(U)
  std::vector<int> w_transversal;    // left-coset reps of U in N(U)
  std::vector<int> uclass_of;        // member position -> class index (classes of U)
  std::vector<int> uclass_rep;       // class index -> element index of minimal rep
  int n_uclasses = 0;
  int uprime = -1;                   // unique Z <= U' <= U with [U:U'] = p (U in C, U != Z)
  std::vector<int> pv;               // P(U): W in C, W != Z, with W' <= U
  std::vector<int> pcv;              // P_c(U): W in C with U <= W, [W:U] = p (U in C)
};

class Quotient {
 public:
  Quotient(const GroupDef& def, int n);

  const GroupDef& def() const { return *def_; }
  int level() const { return n_; }
  int order() const { return order_; }
  int nH() const { return def_->nH; }
  i64 a_mod() const { return a_mod_; }

  int idx(int h, i64 a) const {
    i64 aa = ((a % a_mod_) + a_mod_) % a_mod_;
    return h + def_->nH * (int)aa;
  }
  int hof(int x) const { return x % def_->nH; }
  i64 aof(int x) const { return x / def_->nH; }
  int one() const { return 0; }
  int mul(int x, int y) const { return mul_[x * order_ + y]; }
  int inv(int x) const { return inv_[x]; }
  int conj(int g, int x) const { return mul(mul(g, x), inv(g)); }
  int pw(int x, i64 m) const;
  i64 elt_order(int x) const;

  int project_from(const GElt& g) const { return idx(g.h, g.a); }
  GElt lift_elt(int x) const { return GElt{hof(x), aof(x)}; }

  // conjugacy classes of the full quotient; representatives are minimal
  int n_classes() const { return n_classes_; }
  int class_of(int x) const { return class_of_[x]; }
  int class_rep(int c) const { return class_rep_[c]; }
  const std::vector<int>& class_members(int c) const { return class_members_[c]; }

  // central cyclic subgroup Z-bar of order p^n
  int z_order() const { return z_order_; }
  int z_gen() const { return z_gen_; }
  const std::vector<int>& z_members() const { return z_members_; }

  // subgroup lattice S(G,Z)
  const std::vector<Subgroup>& lattice() const { return lat_; }
  const Subgroup& sub(int id) const { return lat_[id]; }
  int n_subgroups() const { return (int)lat_.size(); }
  int id_Z() const { return id_Z_; }
  int id_G() const { return id_G_; }
  const std::vector<int>& cyclic_ids() const { return cyc_ids_; }  // C(G,Z)
  int conj_subgroup(int g, int id) const { return conj_sub_[(size_t)g * lat_.size() + id]; }
  int find_subgroup(const std::vector<char>& mask) const;
  bool subset(int Uid, int Vid) const;  // U <= V
  int index_in(int Uid, int Vid) const { return lat_[Vid].order / lat_[Uid].order; }

  std::vector<int> closure(std::vector<int> seed) const;

  // coset transversals, minimal-representative order
  std::vector<int> left_transversal(int Vid, int Uid) const;   // V = |_| r U
  std::vector<int> right_transversal(int Vid, int Uid) const;  // V = |_| U s

  // abelianization helpers for U = lat_[id]
  i64 ab_size(int id) const { return lat_[id].ab.size; }
  int ab_of(int id, int elt) const;                    // U-member -> U^ab index
  int ab_add(int id, int x, int y) const;
  int ab_neg(int id, int x) const;
  int ab_scale(int id, int x, i64 m) const;            // m-th power in coords
  int ab_lift(int id, int x) const { return lat_[id].ab.lift[x]; }
  // induced maps on abelianizations (tables indexed by U^ab)
  std::vector<int> conj_ab_map(int g, int id) const;   // U^ab -> (gUg^-1)^ab
  std::vector<int> incl_ab_map(int Uid, int Vid) const;  // U^ab -> V^ab, U <= V

  // eta support: does lift(x) generate U/Z? (U in C(G,Z))
  bool ab_generates_over_z(int id, int x) const;

  // Verlagerung V^ab -> U^ab on a group element g in V, as U^ab index
  int ver_idx(int Vid, int Uid, int g) const;
  int ver_idx_with_transversal(int Vid, int Uid, int g, const std::vector<int>& R) const;

  // (H3): representative system H x {gamma^j : j < p^e}; verifies closure
  std::vector<int> check_H3() const;

  // level projection from a finer quotient (level n+1 -> n etc.)
  int project_elt(const Quotient& finer, int x) const;
  int match_subgroup(const Quotient& finer, int fid) const;

 private:
  const GroupDef* def_;
  int n_;
  i64 a_mod_;
  int order_;
  std::vector<int> mul_, inv_;
  int n_classes_ = 0;
  std::vector<int> class_of_, class_rep_;
  std::vector<std::vector<int>> class_members_;
  int z_order_ = 1, z_gen_ = 0;
  std::vector<int> z_members_;
  std::vector<Subgroup> lat_;
  int id_Z_ = -1, id_G_ = -1;
  std::vector<int> cyc_ids_;
  std::vector<int> conj_sub_;
  std::map<std::vector<char>, int> mask_index_;

  void build_classes();
  void build_lattice();
  void build_subgroup_caches(Subgroup& U);
  void build_abelianization(Subgroup& U);
};

}  // namespace iwk1
