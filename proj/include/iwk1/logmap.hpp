#pragma once

// Logarithmic machinery: log on 1 + Jac and 1 + p*Lambda, exp on p*Lambda,
// the integral logarithm L(x) = log x - (1/p) phi_G(log x), the maps alpha_U,
// the tuple-level map script-L, and omega-side helpers.  Series run at the
// lifted modulus with explicit scale tracking; every output carries the
// certified loss documented by its series plan.

#include "iwk1/kone.hpp"

namespace iwk1 {

// truncation plan for one logarithm/exponential series
struct SeriesPlan {
  unsigned N = 1;      // ideal nilpotency: J^N <= p * ring
  u64 m_max = 1;       // last term computed
  unsigned c = 0;      // common denominator scale p^c
  unsigned loss = 0;   // certified precision lost by the series
};

class LogMap {
 public:
  LogMap(const Algebra& A, const Kone& K) : A_(&A), K_(&K) {}

  const Algebra& alg() const { return *A_; }

  SeriesPlan plan_log(unsigned N, unsigned target) const;

  // log on 1 + Jac(Lambda(G_n)), projected to the class module; scaled output
  ClassVec log_unit(const GroupVec& u) const;

  // abelian helpers on Lambda(U^ab)
  unsigned abel_nilpotency(int uid) const;  // 1 + sum (p^(a_j) - 1)
  AbelVec log_1p(const AbelVec& u) const;   // u = 1 mod p, result in p*Lambda
  AbelVec exp_p(const AbelVec& a) const;    // a = 0 mod p, result in 1 + p*Lambda
  AbelVec log_ab_unit(const AbelVec& y) const;  // Teichmuller part killed

  // L(x) = log(u) - (1/p) phi_G(log u) for x = zeta * u; integral output
  ClassVec integral_log_L(const GroupVec& x) const;

  // alpha_Z(f) = f^p / phi_Z(f); alpha_U(f) = f^p / N^U_{U'}(f)
  AbelVec alpha_U(const AbelVec& f) const;

  // restrict an element of Lambda(W) supported in the subgroup S <= W
  AbelVec restrict_abelian(const AbelVec& a, int Sid) const;

  // script-L component for V, on a tuple satisfying (M3a)
  AbelVec script_L_V(const Tuple& t, int Vid) const;
  Tuple script_L(const Tuple& t) const;
  void require_M3a(const Tuple& t) const;  // throws M3aViolation

  // (M3a) residual for one component: x_U^{|U/Z|} - x_Z in Lambda(U^ab)
  AbelVec m3a_residual(const Tuple& t, int uid) const;

 private:
  const Algebra* A_;
  const Kone* K_;
  mutable std::map<int, unsigned> abn_;
};

}  // namespace iwk1
