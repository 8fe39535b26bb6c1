#pragma once

// Truncated arithmetic in the ring of integers O of an unramified extension
// of Q_p, working modulo p^K.  Elements are coordinate vectors of length f in
// the polynomial basis of a fixed monic lift of an irreducible polynomial
// over F_p; f = 1 means O = Z_p and an element is a single residue.

#include <vector>

#include "iwk1/base.hpp"

namespace iwk1 {

struct CoeffElt {
  std::vector<u64> c;       // f coordinates mod p^K
  unsigned cert = 0;        // trusted mod p^cert
};

class CoeffRing {
 public:
  // f = 1: minpoly ignored.  f > 1: minpoly lists the f non-leading
  // coefficients c0..c_{f-1} of a monic degree-f polynomial whose reduction
  // mod p is irreducible (validated).
  CoeffRing(u64 p, unsigned f, unsigned K, std::vector<u64> minpoly = {});

  u64 p() const { return mod_.p; }
  unsigned f() const { return f_; }
  unsigned K() const { return mod_.K; }
  u64 q() const { return q_; }  // residue field size p^f
  const Mod& mod() const { return mod_; }

  CoeffElt zero() const { return CoeffElt{std::vector<u64>(f_, 0), mod_.K}; }
  CoeffElt one() const;
  CoeffElt from_int(u64 a) const;

  bool is_zero(const CoeffElt& a) const;
  bool is_unit(const CoeffElt& a) const;  // nonzero residue mod p

  CoeffElt add(const CoeffElt& a, const CoeffElt& b) const;
  CoeffElt sub(const CoeffElt& a, const CoeffElt& b) const;
  CoeffElt neg(const CoeffElt& a) const;
  CoeffElt mul(const CoeffElt& a, const CoeffElt& b) const;
  CoeffElt inv(const CoeffElt& a) const;
  CoeffElt pow(const CoeffElt& a, u64 e) const;

  // raw slice ops used by the vector types; all slices have length f
  void sadd(u64* dst, const u64* a) const;
  void ssub(u64* dst, const u64* a) const;
  void smul_acc(u64* dst, const u64* a, const u64* b) const;  // dst += a*b
  void smul_int(u64* dst, const u64* a, u64 s) const;         // dst = a*s

  // Frobenius: the unique automorphism lifting x -> x^p; identity for f = 1.
  CoeffElt frobenius(const CoeffElt& a) const;
  void frobenius_slice(u64* dst, const u64* a) const;

  // Teichmuller lift of a residue-field element (given by any representative
  // vector); teichmuller(0) = 0 and the nonzero lifts satisfy z^(q-1) = 1.
  CoeffElt teichmuller(const CoeffElt& r) const;

  // v_p on O (unramified: min over coordinates), capped at K.
  unsigned valuation(const CoeffElt& a) const;

  // exact division by p^m; requires v_p(a) >= m at certified precision,
  // certified precision drops by m.
  CoeffElt divide_by_p_power(const CoeffElt& a, unsigned m) const;

  // trace to Z_p of the coordinate vector: sum of the f Frobenius conjugates
  // (a single coordinate for f = 1).
  u64 trace_to_zp(const CoeffElt& a) const;

 private:
  Mod mod_;
  unsigned f_;
  u64 q_;
  std::vector<u64> minpoly_;   // f entries, or empty when f = 1
  std::vector<u64> frob_;      // f*f matrix, column j = frobenius(x^j)

  void reduce_poly(std::vector<u64>& t) const;  // degree < 2f-1 -> < f
  void build_frobenius();
};

}  // namespace iwk1
