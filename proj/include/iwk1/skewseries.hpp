#pragma once

// Truncated skew power/Laurent series Lambda(H)[[t; sigma, delta]] = Lambda(G)
// and its completed localization B(G), with the (sigma, delta)-commutation
// engine.  Elements are degree-windowed Laurent polynomials in t over
// (O/p^K)[H] in left-coefficient normal form sum a_i t^i, with
//     t a = sigma(a) t + delta(a),          delta = sigma - id,
// and the infinite negative-direction expansion
//     t^-1 a = sum_{m>=1} (-1)^(m-1) (sigma^-1 delta)^(m-1) sigma^-1(a) t^-m
// truncated where delta-powers fall below the working precision.
//
// B(Z)-coefficients are Laurent polynomials in s = z0 - 1 over O carrying an
// exact integer prefactor (1+s)^zfloor, so that z-cocycle bookkeeping in the
// crossed-product form B(G) = (+) B(Z) c-hat stays exact in both directions.

#include "iwk1/algebra.hpp"

namespace iwk1 {

struct SkewElt {
  int lo = 0;                       // degree of a[0]
  std::vector<std::vector<u64>> a;  // each slice: nH * f coefficients
  unsigned cert = 0;
};

class SkewRing {
 public:
  SkewRing(const GroupDef& def, const CoeffRing& O, int dneg, int dpos);

  const GroupDef& def() const { return *def_; }
  const CoeffRing& O() const { return *O_; }
  int dneg() const { return dneg_; }
  int dpos() const { return dpos_; }
  unsigned n_delta() const { return n_delta_; }  // delta^N in p Lambda(H)

  // Lambda(H) slice helpers (length nH * f)
  std::vector<u64> hzero() const;
  void hmul_acc(std::vector<u64>& dst, const std::vector<u64>& x, const std::vector<u64>& y) const;
  std::vector<u64> sigma_h(const std::vector<u64>& x, bool inverse = false) const;
  std::vector<u64> delta_h(const std::vector<u64>& x) const;
  bool h_is_zero(const std::vector<u64>& x) const;
  bool h_is_unit(const std::vector<u64>& x) const;  // augmentation a unit
  std::vector<u64> h_invert(const std::vector<u64>& x) const;

  SkewElt zero() const;
  SkewElt one() const;
  SkewElt t_pow(int j) const;
  SkewElt from_h(int h, const CoeffElt& c, int deg = 0) const;

  SkewElt add(const SkewElt& x, const SkewElt& y) const;
  SkewElt sub(const SkewElt& x, const SkewElt& y) const;
  SkewElt neg(const SkewElt& x) const;
  bool is_zero(const SkewElt& x) const;
  bool equal_at(const SkewElt& x, const SkewElt& y, unsigned prec) const;

  // unwindowed product (support grows as needed, pruned mod p^K)
  SkewElt mul(const SkewElt& x, const SkewElt& y) const;
  // windowed product per the ring configuration; positive overflow throws
  SkewElt skew_mul(const SkewElt& x, const SkewElt& y) const { return clip(mul(x, y)); }
  SkewElt clip(SkewElt x) const;

  // unit test per the radical description: unit iff some a_i is a unit
  bool is_unit(const SkewElt& x) const;
  SkewElt invert_unit(const SkewElt& x) const;
  SkewElt pow(const SkewElt& x, i64 e) const;

  // t = gamma - 1 substitution into Lambda(G_n) and its filtration inverse
  GroupVec to_group_ring(const SkewElt& x, const Algebra& A) const;
  SkewElt from_group_ring(const Algebra& A, const GroupVec& y) const;

  SkewElt prune(SkewElt x) const;

 private:
  const GroupDef* def_;
  const CoeffRing* O_;
  int dneg_, dpos_;
  unsigned n_delta_ = 1;
  std::vector<int> act_, act_inv_;

  SkewElt tmul(const SkewElt& x) const;      // t * x
  SkewElt tinv_mul(const SkewElt& x) const;  // t^-1 * x
};

// ---- B(Z): (1+s)^zfloor * Laurent in s over O ----

struct BZElt {
  int zfloor = 0;
  int lo = 0;
  std::vector<u64> c;  // len * f coefficients, degree lo + i
  unsigned cert = 0;
};

class BZRing {
 public:
  BZRing(const CoeffRing& O, int cap = 4096) : O_(&O), cap_(cap) {}
  const CoeffRing& O() const { return *O_; }

  BZElt zero() const { return BZElt{0, 0, {}, O_->K()}; }
  BZElt one() const;
  BZElt mono(int deg, const CoeffElt& c) const;  // c * s^deg
  BZElt zpow(i64 w) const;                       // (1+s)^w, exact

  BZElt add(const BZElt& x, const BZElt& y) const;
  BZElt sub(const BZElt& x, const BZElt& y) const;
  BZElt neg(BZElt x) const;
  BZElt mul(const BZElt& x, const BZElt& y) const;
  BZElt mul_int(BZElt x, u64 m) const;
  BZElt shift_z(BZElt x, i64 w) const {  // multiply by (1+s)^w
    x.zfloor += (int)w;
    return x;
  }
  BZElt pow(const BZElt& x, u64 e) const;
  bool is_zero_at(const BZElt& x, unsigned prec) const;
  bool equal_at(const BZElt& x, const BZElt& y, unsigned prec) const;
  bool is_unit(const BZElt& x) const;
  BZElt invert(const BZElt& x) const;  // pivot factorization + graded series
  BZElt phi(const BZElt& x) const;     // s -> (1+s)^p - 1
  BZElt prune(BZElt x) const;
  // align zfloor to a common value <= both (expanding (1+s)-powers)
  void align(BZElt& x, BZElt& y) const;
  // drop coefficients outside [wlo, whi] (absolute s-degrees at zfloor 0 not
  // enforced; applies to the stored window): returns certified loss
  BZElt clip_window(BZElt x, int wlo, int whi) const;

  u64 p() const { return O_->p(); }

 private:
  const CoeffRing* O_;
  int cap_;
  void check_cap(size_t n) const {
    if ((int)n > cap_) fail(errc::window_overflow, "B(Z) support cap exceeded");
  }
};

}  // namespace iwk1
