#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iwk1/coeff.hpp"

using namespace iwk1;

TEST_CASE("frobenius is the identity on Z_p") {
  CoeffRing O(3, 1, 2);
  CHECK(O.frobenius(O.from_int(5)).c[0] == 5);
  CHECK(O.frobenius(O.from_int(0)).c[0] == 0);
  CHECK(O.frobenius(O.one()).c[0] == 1);
}

TEST_CASE("frobenius on F_9-lift: order 2, ring hom, Newton oracle") {
  // x^2 + 1 is irreducible mod 3
  CoeffRing O(3, 2, 6, {1, 0});
  CoeffElt x = O.zero();
  x.c[1] = 1;

  CoeffElt fx = O.frobenius(x);
  // oracle: fx must be a root of the minimal polynomial with fx = x^3 mod 3
  CoeffElt val = O.add(O.mul(fx, fx), O.one());
  CHECK(O.is_zero(val));
  CoeffElt x3 = O.pow(x, 3);
  CHECK(fx.c[0] % 3 == x3.c[0] % 3);
  CHECK(fx.c[1] % 3 == x3.c[1] % 3);
  // frobenius o frobenius = id
  CHECK(O.frobenius(fx).c == x.c);

  // ring homomorphism on random elements
  Rng rng(7);
  for (int i = 0; i < 40; ++i) {
    CoeffElt a = O.zero(), b = O.zero();
    for (int j = 0; j < 2; ++j) {
      a.c[j] = rng.below(O.mod().m);
      b.c[j] = rng.below(O.mod().m);
    }
    CHECK(O.frobenius(O.mul(a, b)).c == O.mul(O.frobenius(a), O.frobenius(b)).c);
    CHECK(O.frobenius(O.add(a, b)).c == O.add(O.frobenius(a), O.frobenius(b)).c);
    // Frobenius congruence: frobenius(a) = a^p mod p
    CoeffElt ap = O.pow(a, 3);
    CoeffElt fa = O.frobenius(a);
    CHECK(fa.c[0] % 3 == ap.c[0] % 3);
    CHECK(fa.c[1] % 3 == ap.c[1] % 3);
  }
}

TEST_CASE("teichmuller") {
  CoeffRing O(3, 1, 2);
  CHECK(O.teichmuller(O.from_int(1)).c[0] == 1);
  // -1 lifts to p^k - 1
  CHECK(O.teichmuller(O.from_int(2)).c[0] == 8);
  CHECK(O.teichmuller(O.from_int(0)).c[0] == 0);

  // derived oracle: iterate x -> x^p to stabilization by hand
  u64 x = 2;
  for (int i = 0; i < 5; ++i) x = (x * x % 9) * x % 9;
  CHECK(O.teichmuller(O.from_int(2)).c[0] == x);

  // z^(q-1) = 1 exactly mod p^K, all residues
  CoeffRing O5(5, 1, 6);
  for (u64 r = 1; r < 5; ++r) {
    CoeffElt z = O5.teichmuller(O5.from_int(r));
    CHECK(O5.pow(z, 4).c[0] == 1);
    CHECK(z.c[0] % 5 == r);
  }

  // f = 2: teichmuller of a generator has order q - 1 = 8
  CoeffRing O9(3, 2, 4, {1, 0});
  CoeffElt g = O9.zero();
  g.c[0] = 1;
  g.c[1] = 1;  // 1 + x generates F_9^*
  CoeffElt z = O9.teichmuller(g);
  CHECK(O9.pow(z, 8).c == O9.one().c);
  CHECK_FALSE(O9.pow(z, 4).c == O9.one().c);
}

TEST_CASE("divide_by_p_power") {
  CoeffRing O(3, 1, 4);
  CoeffElt a = O.from_int(9);
  CoeffElt r = O.divide_by_p_power(a, 2);
  CHECK(r.c[0] == 1);
  CHECK(r.cert == 2);

  CHECK(O.divide_by_p_power(O.zero(), 3).c[0] == 0);

  CoeffRing O3(3, 1, 3);
  CoeffElt b = O3.from_int(6);
  CoeffElt rb = O3.divide_by_p_power(b, 1);
  CHECK(rb.c[0] == 2);
  CHECK(rb.cert == 2);

  CHECK_THROWS_AS((void)O.divide_by_p_power(O.from_int(3), 2), Error);
}

TEST_CASE("frobenius has order f on samples") {
  CoeffRing O(5, 3, 4, {1, 1, 0});  // x^3 + x + 1, no roots mod 5
  Rng rng(11);
  for (int i = 0; i < 25; ++i) {
    CoeffElt a = O.zero();
    for (unsigned j = 0; j < 3; ++j) a.c[j] = rng.below(O.mod().m);
    CoeffElt b = a;
    for (unsigned j = 0; j < 3; ++j) b = O.frobenius(b);
    CHECK(b.c == a.c);
  }
}

TEST_CASE("unit inverse") {
  CoeffRing O(3, 2, 5, {1, 0});
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    CoeffElt a = O.zero();
    for (unsigned j = 0; j < 2; ++j) a.c[j] = rng.below(O.mod().m);
    if (!O.is_unit(a)) continue;
    CHECK(O.mul(a, O.inv(a)).c == O.one().c);
  }
  CHECK_THROWS_AS((void)O.inv(O.from_int(3)), Error);
}
