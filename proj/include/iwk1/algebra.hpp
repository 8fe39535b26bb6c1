#pragma once

// Group rings (O/p^K)[G_n], conjugacy-class modules O[Conj(U)], truncated
// Lambda(U^ab), and the O-linear maps of the additive theory: pr, tr, pi,
// tau, sigma_U, sigma_U^V, eta_U, phi_U, delta_U, beta, delta, pr_cyc,
// plus submodule membership over Z/p^K.
//
// Scaled values: a vector v with scale s represents v / p^s; `cert` is the
// exponent to which the stored vector is trusted.  All arithmetic runs at
// the lifted internal modulus p^Kint; k_report is the precision the artifact
// reports against.

#include <map>
#include <memory>
#include <optional>

#include "iwk1/coeff.hpp"
#include "iwk1/group.hpp"
#include "iwk1/linalg.hpp"

namespace iwk1 {

struct GroupVec {
  std::vector<u64> c;  // order * f
  int scale = 0;       // units always live at scale 0
  unsigned cert = 0;
};

struct ClassVec {
  int uid = -1;        // class module of the subgroup lat_[uid] (id_G: the full one)
  std::vector<u64> c;  // n_uclasses * f
  int scale = 0;
  unsigned cert = 0;
};

struct AbelVec {
  int uid = -1;        // ring Lambda(U^ab)
  std::vector<u64> c;  // ab_size * f
  int scale = 0;
  unsigned cert = 0;
};

struct SubAbVec {
  int Vid = -1, Uid = -1;  // ring Lambda(U/[V,V]) inside V^ab
  std::vector<u64> c;
  int scale = 0;
  unsigned cert = 0;
};

// one component per subgroup in S(G,Z), indexed by lattice id
struct Tuple {
  std::vector<AbelVec> comp;
};

struct Membership {
  bool member = false;
  std::vector<std::pair<int, u64>> witness;  // generator index -> coefficient
  std::vector<u64> residual;
  unsigned cert = 0;
};

class Algebra {
 public:
  Algebra(const Quotient& Q, unsigned Kint, unsigned k_report, unsigned f = 1,
          std::vector<u64> minpoly = {});

  const Quotient& Q() const { return *Q_; }
  const CoeffRing& O() const { return O_; }
  unsigned K() const { return O_.K(); }
  unsigned kres() const { return k_; }
  unsigned f() const { return O_.f(); }
  u64 p() const { return O_.p(); }

  // ---- constructors ----
  GroupVec gzero() const;
  GroupVec gone() const;
  GroupVec gelt(int x, const CoeffElt& a) const;
  ClassVec czero(int uid) const;
  ClassVec cbasis(int uid, int cls) const;
  AbelVec azero(int uid) const;
  AbelVec aone(int uid) const;
  AbelVec abasis(int uid, int idx, const CoeffElt& a) const;
  SubAbVec sazero(int Vid, int Uid) const;

  // ---- generic vector arithmetic ----
  template <class V>
  V add(const V& a, const V& b) const;
  template <class V>
  V sub(const V& a, const V& b) const;
  template <class V>
  V negate(const V& a) const;
  template <class V>
  V scalar_mul(const V& a, const CoeffElt& s) const;
  template <class V>
  bool is_zero_at(const V& a, unsigned prec) const;  // value == 0 mod p^prec
  template <class V>
  bool equal_at(const V& a, const V& b, unsigned prec) const;
  template <class V>
  unsigned value_prec(const V& a) const {
    return a.cert >= (unsigned)a.scale ? a.cert - (unsigned)a.scale : 0;
  }
  // value *= p^-t (scale up) / make integral (divide stored vector by p^scale)
  template <class V>
  V rescale(const V& a, int new_scale) const;  // new_scale >= a.scale
  template <class V>
  V descale_integral(const V& a) const;  // throws IntegralityViolation / PrecisionExhausted

  // ---- ring structure ----
  GroupVec gmulv(const GroupVec& a, const GroupVec& b) const;
  AbelVec amul(const AbelVec& a, const AbelVec& b) const;
  AbelVec apow(const AbelVec& a, u64 e) const;
  SubAbVec samul(const SubAbVec& a, const SubAbVec& b) const;
  CoeffElt gaug(const GroupVec& a) const;  // augmentation
  CoeffElt aaug(const AbelVec& a) const;
  bool gis_unit(const GroupVec& a) const;
  bool ais_unit(const AbelVec& a) const;
  bool sais_unit(const SubAbVec& a) const;
  GroupVec ginvert(const GroupVec& a) const;
  AbelVec ainvert(const AbelVec& a) const;
  SubAbVec sainvert(const SubAbVec& a) const;

  // ---- class-module and abelian maps ----
  ClassVec conj_project(const GroupVec& x) const;
  ClassVec tr(int Vid, int Uid, const ClassVec& x) const;
  AbelVec pr_ab(const ClassVec& x) const;               // over U -> Lambda(U^ab)
  ClassVec ab_to_class(const AbelVec& a) const;         // abelian U: Lambda(U) = O[Conj(U)]
  AbelVec beta_U(int uid, const ClassVec& f) const;     // f over id_G
  Tuple beta(const ClassVec& f) const;
  AbelVec eta(const AbelVec& a) const;                  // U in C(G,Z)
  ClassVec delta_section(const std::map<int, AbelVec>& cyc) const;  // scaled output
  std::map<int, AbelVec> pr_cyc(const Tuple& t) const;
  AbelVec sigma_N(const AbelVec& a) const;              // sigma_U^{N(U)}
  AbelVec sigma_pair(int Vid, int Uid, const AbelVec& a) const;  // sigma_U^V
  AbelVec conj_translate(int g, const AbelVec& a) const;  // -> over gUg^-1
  ClassVec phi_class(const ClassVec& x) const;          // [g] -> [g^p], phi on O
  AbelVec phi_ab(const AbelVec& a) const;
  AbelVec ver_ring(int Vid, int Uid, const AbelVec& a) const;
  AbelVec incl_push(const AbelVec& a, int Vid) const;   // along U <= V
  SubAbVec pi_VU(int Vid, int Uid, const AbelVec& aU) const;
  SubAbVec tau_VU(int Vid, int Uid, const AbelVec& aV) const;

  // omega: class element -> element of G^ab (needs p^prec >= exponent of G^ab)
  int omega(const ClassVec& x) const;

  // ---- membership ----
  Membership in_sigma_N_image(const AbelVec& a) const;
  Membership in_sigma_pair_image(int Vid, int Uid, const AbelVec& a) const;
  Membership in_p_sigma_image(const AbelVec& a) const;  // p im(sigma_U), U in C
  Membership membership(int uid, const std::vector<AbelVec>& gens, const AbelVec& f,
                        unsigned p_power) const;

  // ---- level projection (this = coarser, src over finer) ----
  GroupVec project_group(const Algebra& finer, const GroupVec& x) const;
  ClassVec project_class(const Algebra& finer, const ClassVec& x) const;
  AbelVec project_abel(const Algebra& finer, const AbelVec& x) const;

  // mod-p nilpotency degree N of the augmentation ideal: I^N <= p Lambda
  // (Jennings bound; exact for the full group algebra)
  unsigned jac_nilpotency() const;

  // ring descriptor for Lambda(U/[V,V]) as a subgroup of V^ab
  struct SubAbRing {
    int Vid, Uid;
    std::vector<int> elems;  // sorted V^ab indices
    std::vector<int> pos;    // V^ab index -> position or -1
  };
  const SubAbRing& subab(int Vid, int Uid) const;

 private:
  const Quotient* Q_;
  CoeffRing O_;
  unsigned k_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<SubAbRing>> subab_;
  mutable std::map<std::pair<int, int>, std::vector<std::vector<std::pair<int, int>>>> tr_mat_;
  mutable std::map<int, std::vector<char>> eta_flags_;
  mutable std::map<std::pair<int, unsigned>, std::unique_ptr<EchelonPK>> sigmaN_ech_;
  mutable std::map<std::pair<int, unsigned>, std::unique_ptr<EchelonPK>> sigmaVU_ech_;
  mutable std::map<std::pair<int, unsigned>, std::unique_ptr<EchelonPK>> psigma_ech_;
  mutable unsigned nilp_ = 0;

  const std::vector<std::vector<std::pair<int, int>>>& tr_matrix(int Vid, int Uid) const;
};

// ---- generic vector arithmetic (scale-aware) ----

template <class V>
V Algebra::rescale(const V& a, int new_scale) const {
  if (new_scale < a.scale) fail(errc::invalid_input, "rescale: cannot lower scale");
  if (new_scale == a.scale) return a;
  V r = a;
  u64 m = ipow(O().p(), (unsigned)(new_scale - a.scale)) % O().mod().m;
  for (auto& x : r.c) x = O().mod().mul(x, m);
  r.scale = new_scale;
  r.cert = std::min((unsigned)O().K(), a.cert + (unsigned)(new_scale - a.scale));
  return r;
}

template <class V>
V Algebra::add(const V& a, const V& b) const {
  int s = std::max(a.scale, b.scale);
  V x = rescale(a, s), y = rescale(b, s);
  V r = x;
  r.cert = std::min(x.cert, y.cert);
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = O().mod().add(x.c[i], y.c[i]);
  return r;
}

template <class V>
V Algebra::sub(const V& a, const V& b) const {
  int s = std::max(a.scale, b.scale);
  V x = rescale(a, s), y = rescale(b, s);
  V r = x;
  r.cert = std::min(x.cert, y.cert);
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = O().mod().sub(x.c[i], y.c[i]);
  return r;
}

template <class V>
V Algebra::negate(const V& a) const {
  V r = a;
  for (auto& x : r.c) x = O().mod().neg(x);
  return r;
}

template <class V>
V Algebra::scalar_mul(const V& a, const CoeffElt& s) const {
  V r = a;
  r.cert = std::min(a.cert, s.cert);
  if (O().f() == 1) {
    for (auto& x : r.c) x = O().mod().mul(x, s.c[0]);
    return r;
  }
  for (size_t i = 0; i * O().f() < a.c.size(); ++i) {
    std::vector<u64> t(O().f(), 0);
    O().smul_acc(t.data(), &a.c[i * O().f()], s.c.data());
    for (unsigned j = 0; j < O().f(); ++j) r.c[i * O().f() + j] = t[j];
  }
  return r;
}

template <class V>
bool Algebra::is_zero_at(const V& a, unsigned prec) const {
  if (value_prec(a) < prec) fail(errc::precision_exhausted, "is_zero_at: insufficient certification");
  unsigned t = std::min((unsigned)O().K(), prec + (unsigned)a.scale);
  u64 m = ipow(O().p(), t);
  for (u64 x : a.c)
    if (x % m) return false;
  return true;
}

template <class V>
bool Algebra::equal_at(const V& a, const V& b, unsigned prec) const {
  return is_zero_at(sub(a, b), prec);
}

template <class V>
V Algebra::descale_integral(const V& a) const {
  if (a.scale == 0) return a;
  if (a.cert < (unsigned)a.scale)
    fail(errc::precision_exhausted, "descale: certification below scale");
  u64 q = ipow(O().p(), (unsigned)a.scale);
  V r = a;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] % q)
      fail(errc::integrality_violation, "descale: value not integral at certified precision");
    r.c[i] = a.c[i] / q;
  }
  r.scale = 0;
  r.cert = a.cert - (unsigned)a.scale;
  return r;
}

// division-free determinant over a commutative ring (Berkowitz).  Ring ops
// are provided by R: R::Elt, zero(), one(), add, mul, neg.
template <class R>
typename R::Elt berkowitz_det(const R& ring, const std::vector<typename R::Elt>& A, int n) {
  using E = typename R::Elt;
  if (n == 0) return ring.one();
  auto at = [&](int i, int j) -> const E& { return A[i * n + j]; };
  std::vector<E> P = {ring.one(), ring.neg(at(0, 0))};
  for (int r = 2; r <= n; ++r) {
    // principal (r-1)x(r-1) block M, row R_ = A[r-1][0..r-2], col S = A[0..r-2][r-1]
    int m = r - 1;
    std::vector<E> toe(r + 1);
    toe[0] = ring.one();
    toe[1] = ring.neg(at(m, m));
    std::vector<E> v(m);
    for (int i = 0; i < m; ++i) v[i] = at(i, m);
    for (int t = 2; t <= r; ++t) {
      // entry = - R_ . M^(t-2) . S
      E dot = ring.zero();
      for (int i = 0; i < m; ++i) dot = ring.add(dot, ring.mul(at(m, i), v[i]));
      toe[t] = ring.neg(dot);
      if (t < r) {
        std::vector<E> nv(m, ring.zero());
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) nv[i] = ring.add(nv[i], ring.mul(at(i, j), v[j]));
        v = nv;
      }
    }
    std::vector<E> nP(r + 1, ring.zero());
    for (int i = 0; i <= r; ++i)
      for (int j = 0; j < std::min((int)P.size(), i + 1); ++j)
        if (i - j <= r) nP[i] = ring.add(nP[i], ring.mul(toe[i - j], P[j]));
    P = nP;
  }
  // P holds the characteristic polynomial coefficients (leading 1);
  // det = (-1)^n * P[n]
  E d = P[n];
  if (n % 2) d = ring.neg(d);
  return d;
}

}  // namespace iwk1
