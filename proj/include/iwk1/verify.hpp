#pragma once

// Deciders for the congruence conditions cutting out Psi ((A1)-(A3)) and Phi
// ((M1)-(M4), (M3a), (M1a)), plus the diagram-commutativity harness.  Every
// failure carries the subgroup (pair), the condition, and a residual at the
// precision of refusal; reports are deterministic for fixed inputs and seed.

#include "iwk1/logmap.hpp"

namespace iwk1 {

struct CheckItem {
  std::string condition;
  std::vector<std::string> subgroups;
  bool pass = false;
  unsigned certified_precision = 0;
  std::string witness;  // combination witness or residual summary
};

struct CheckReport {
  bool ok = true;
  int level = 0;
  unsigned k = 0;
  std::vector<CheckItem> items;
  void add(CheckItem it) {
    ok = ok && it.pass;
    items.push_back(std::move(it));
  }
};

class Verify {
 public:
  Verify(const Algebra& A, const Kone& K, const LogMap& L) : A_(&A), K_(&K), L_(&L) {}

  static std::string label(const Quotient& Q, int uid);

  CheckReport check_A(const Tuple& t) const;
  CheckReport check_M(const Tuple& t) const;

  // seeded generators
  GroupVec random_unit(Rng& rng) const;        // 1 + Jac, times Teichmuller and a group element
  GroupVec random_one_unit(Rng& rng) const;    // 1 + Jac only
  ClassVec random_class(Rng& rng) const;

  struct HarnessOptions {
    int samples = 20;
    bool mutate_skip_phi_in_L = false;  // fault injection for the test battery
  };
  CheckReport diagram_harness(Rng& rng, const HarnessOptions& opt) const;

 private:
  const Algebra* A_;
  const Kone* K_;
  const LogMap* L_;

  std::string witness_string(const Membership& m) const;
  template <class V>
  std::string residual_string(const V& v) const;
};

}  // namespace iwk1
