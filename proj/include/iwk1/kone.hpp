#pragma once

// K_1-level maps on unit representatives: the norms N^V_U realized as
// determinants of right-multiplication matrices on right-coset bases (after
// entrywise projection to the commutative quotient), the tuple map theta,
// nu^V_U, the explicit index-p Leibniz determinant, and the Teichmuller
// splitting of units.  SK_1 is never represented; every map used downstream
// is well defined on representatives.

#include "iwk1/algebra.hpp"

namespace iwk1 {

struct UnitElement {
  GroupVec x;
  mutable std::shared_ptr<GroupVec> inverse;  // filled on demand
};

struct LeibnizReport {
  AbelVec det_form;     // pr N^V_U(x) via the p x p determinant
  AbelVec collapsed;    // sum_k g^(pk) prod_i sigma^i pr(x_k)
  Membership diff_in_sigma;  // det - collapsed in im(sigma_U^V)
};

class Kone {
 public:
  explicit Kone(const Algebra& A) : A_(&A) {}

  const Algebra& alg() const { return *A_; }

  UnitElement make_unit(GroupVec x) const;
  const GroupVec& inverse(const UnitElement& u) const;

  // x = zeta * u with zeta the Teichmuller lift of x mod Jac, u = 1 mod Jac
  std::pair<CoeffElt, GroupVec> teichmuller_decompose(const GroupVec& x) const;

  // theta_U relative to V: x supported in V, matrix over the right cosets of
  // U in V, entries projected to Lambda(U^ab), division-free determinant
  AbelVec theta_VU(int Vid, int Uid, const GroupVec& x) const;
  AbelVec theta_U(int uid, const GroupVec& x) const { return theta_VU(A_->Q().id_G(), uid, x); }
  Tuple theta(const GroupVec& x) const;

  // nu^V_U = N^(V^ab)_(U/[V,V]) on units of Lambda(V^ab)
  SubAbVec nu_VU(int Vid, int Uid, const AbelVec& y) const;

  // norm between abelian subgroups U <= V given y in Lambda(V)
  AbelVec norm_abelian(int Vid, int Uid, const AbelVec& y) const;

  // lift Lambda(V^ab) back to a group-ring element supported in V (V abelian)
  GroupVec ab_lift_vec(const AbelVec& y) const;

  // index-p pair (U <= V): evaluate the explicit determinant and the
  // collapsed form; report membership of the difference in im(sigma_U^V)
  LeibnizReport leibniz_norm_oracle(int Vid, int Uid, const GroupVec& x) const;

  // commutative-ring ops used by berkowitz_det
  struct AbelOps {
    const Algebra* A;
    int uid;
    using Elt = AbelVec;
    Elt zero() const { return A->azero(uid); }
    Elt one() const { return A->aone(uid); }
    Elt add(const Elt& a, const Elt& b) const { return A->add(a, b); }
    Elt mul(const Elt& a, const Elt& b) const { return A->amul(a, b); }
    Elt neg(const Elt& a) const { return A->negate(a); }
  };
  struct SubAbOps {
    const Algebra* A;
    int Vid, Uid;
    using Elt = SubAbVec;
    Elt zero() const { return A->sazero(Vid, Uid); }
    Elt one() const {
      auto e = A->sazero(Vid, Uid);
      e.c[0] = 1;
      return e;
    }
    Elt add(const Elt& a, const Elt& b) const { return A->add(a, b); }
    Elt mul(const Elt& a, const Elt& b) const { return A->samul(a, b); }
    Elt neg(const Elt& a) const { return A->negate(a); }
  };

 private:
  const Algebra* A_;
  struct CosetTable {
    std::vector<int> reps;       // right transversal: V = |_| U s_j
    std::vector<int> coset_of;   // element of V -> j
  };
  mutable std::map<std::pair<int, int>, CosetTable> cosets_;
  const CosetTable& coset_table(int Vid, int Uid) const;
};

}  // namespace iwk1
