#pragma once

// B-coefficient extensions: the crossed-product form B(G) = (+)_{c in G/Z}
// B(Z) c-hat over the level-0 quotient, B(U^ab) and B(G)/[B(G),B(G)] as free
// B(Z)-modules with exact integer z-cocycles, and the maps theta_B, beta_B,
// L_B, script-L_B together with the B-variants of the (A) and (M) checks.

#include "iwk1/skewseries.hpp"
#include "iwk1/verify.hpp"

namespace iwk1 {

struct Crossed {
  std::vector<BZElt> comp;  // over the elements of G_0 = G/Z
  int scale = 0;
};

struct BAbel {
  int uid0 = -1;            // lattice id in the level-0 quotient
  std::vector<BZElt> comp;  // over U^ab_0
  int scale = 0;
};

struct BClass {
  std::vector<BZElt> comp;  // over Conj(G_0)
  int scale = 0;
};

using BTuple = std::vector<BAbel>;  // indexed by level-0 lattice id

class BSide {
 public:
  BSide(const GroupDef& def, unsigned Kint, unsigned k, int wlo, int whi, unsigned f = 1,
        std::vector<u64> minpoly = {});

  const Quotient& Q0() const { return Q0_; }
  const CoeffRing& O() const { return O_; }
  const BZRing& bz() const { return bz_; }
  SkewRing& skew() { return skew_; }
  const SkewRing& skew() const { return skew_; }
  unsigned kres() const { return k_; }
  int wlo() const { return wlo_; }
  int whi() const { return whi_; }

  // ---- crossed-product B(G) ----
  Crossed cr_zero() const;
  Crossed cr_one() const;
  Crossed cr_basis(int g0, const BZElt& c) const;
  Crossed cr_add(const Crossed& x, const Crossed& y) const;
  Crossed cr_sub(const Crossed& x, const Crossed& y) const;
  Crossed cr_mul(const Crossed& x, const Crossed& y) const;
  Crossed cr_invert(const Crossed& x) const;  // identity-dominant units
  bool cr_equal_at(const Crossed& x, const Crossed& y, unsigned prec) const;
  unsigned cr_cert(const Crossed& x) const;

  Crossed from_skew(const SkewElt& x) const;
  SkewElt to_skew(const Crossed& x) const;

  // ---- B(U^ab) ----
  BAbel ba_zero(int uid0) const;
  BAbel ba_one(int uid0) const;
  BAbel ba_basis(int uid0, int idx, const BZElt& c) const;
  BAbel ba_add(const BAbel& x, const BAbel& y) const;
  BAbel ba_sub(const BAbel& x, const BAbel& y) const;
  BAbel ba_mul(const BAbel& x, const BAbel& y) const;
  BAbel ba_pow(const BAbel& x, u64 e) const;
  BAbel ba_invert(const BAbel& x) const;
  bool ba_is_zero_at(const BAbel& x, unsigned prec) const;
  bool ba_equal_at(const BAbel& x, const BAbel& y, unsigned prec) const;
  unsigned ba_cert(const BAbel& x) const;
  BAbel ba_phi(const BAbel& x) const;                    // [g] -> [g^p], phi on B(Z)
  BAbel ba_push(const BAbel& x, int Vid0) const;         // along U <= V
  BAbel ba_restrict(const BAbel& x, int Sid0) const;     // support in S <= U
  BAbel ba_conj(int g0, const BAbel& x) const;
  BAbel ba_ver(int Vid0, int Uid0, const BAbel& x) const;
  BAbel ba_log_1p(const BAbel& x) const;                 // x = 1 mod p
  BAbel ba_norm(int Vid0, int Uid0, const BAbel& y) const;  // abelian pair
  BAbel ba_alpha(const BAbel& y) const;                  // alpha_U, U in C(G,Z)

  // tau/pi into Lambda(U/[V,V]) represented on the level-0 SubAb basis
  std::vector<BZElt> ba_pi(int Vid0, int Uid0, const BAbel& aU) const;
  std::vector<BZElt> ba_tau(int Vid0, int Uid0, const BAbel& aV) const;
  std::vector<BZElt> ba_nu(int Vid0, int Uid0, const BAbel& yV) const;

  // orbit-wise membership in im(sigma) twisted by p^extra
  struct BMember {
    bool member = true;
    unsigned cert = 0;
    std::string note;
  };
  BMember ba_in_sigma_image(const std::vector<int>& transversal, const BAbel& w,
                            unsigned extra_p) const;

  // ---- class side ----
  BClass bc_zero() const;
  BClass bc_add(const BClass& x, const BClass& y) const;
  BClass bc_sub(const BClass& x, const BClass& y) const;
  bool bc_is_zero_at(const BClass& x, unsigned prec) const;
  bool bc_equal_at(const BClass& x, const BClass& y, unsigned prec) const;
  unsigned bc_cert(const BClass& x) const;
  BClass class_project(const Crossed& x) const;
  BClass bc_phi(const BClass& x) const;
  BClass bc_descale(const BClass& x) const;

  // beta_B = id tensor beta_U, componentwise over the level-0 tables
  BAbel beta_B_U(int uid0, const BClass& f) const;
  BTuple beta_B(const BClass& f) const;

  // theta_B via coset matrices with entries in B(U) projected to B(U^ab)
  BAbel theta_B_U(int uid0, const Crossed& x) const;
  BTuple theta_B(const Crossed& x) const;

  // the integral logarithm on B(G)^x, through the (f:units) splitting
  struct BUnitParts {
    SkewElt reduced;   // eps_H(x), a unit of B(Gamma) in t-coordinates
    SkewElt one_part;  // v in 1 + I_B with x = v * reduced
    unsigned ell;      // certificate exponent used for the Gamma-part
  };
  BUnitParts b_unit_decompose(const SkewElt& x) const;
  BClass integral_log_LB(const SkewElt& x) const;

  // script-L_B on (M3a)-tuples
  BAbel script_LB_V(const BTuple& t, int Vid0) const;
  BTuple script_LB(const BTuple& t) const;
  void require_M3a_B(const BTuple& t) const;

  // B-variants of the condition checks
  CheckReport check_A_B(const BTuple& t) const;
  CheckReport check_M_B(const BTuple& t) const;

  // ---- comparison with the Lambda-side at level n ----
  ClassVec bclass_to_level(const Algebra& An, const BClass& x) const;
  AbelVec babel_to_level(const Algebra& An, const BAbel& x) const;
  int match_level_subgroup(const Algebra& An, int uid0) const;

  // final window clip for reporting
  BZElt clip(const BZElt& x) const { return bz_.clip_window(x, wlo_, whi_); }

 private:
  GroupDef def_;
  Quotient Q0_;
  CoeffRing O_;
  BZRing bz_;
  SkewRing skew_;
  unsigned k_;
  int wlo_, whi_;
  i64 pe_;

  // crossed multiplication table over G_0 with z-exponents
  std::vector<int> cr_rep_;
  std::vector<int> cr_zexp_;
  // per-subgroup B(U^ab) multiplication tables
  struct BaTable {
    std::vector<int> rep;
    std::vector<int> zexp;
    std::vector<int> phi_rep;
    std::vector<int> phi_zexp;
  };
  mutable std::map<int, BaTable> ba_tab_;
  const BaTable& ba_table(int uid0) const;
  // beta tables: class -> list of (abel index, multiplicity)
  mutable std::map<int, std::vector<std::vector<std::pair<int, int>>>> beta_tab_;
  const std::vector<std::vector<std::pair<int, int>>>& beta_table(int uid0) const;

  GElt lift0(int g0) const { return GElt{Q0_.hof(g0), Q0_.aof(g0)}; }
  i64 zdiff(i64 a_total, i64 a_rep) const {
    i64 d = a_total - a_rep;
    if (d % pe_) fail(errc::invalid_input, "z-exponent not integral");
    return d / pe_;
  }
  SkewElt phi_gamma(const SkewElt& y) const;
  mutable std::unique_ptr<Crossed> tinv_cr_;
  const Crossed& tinv_crossed() const;
};

}  // namespace iwk1
