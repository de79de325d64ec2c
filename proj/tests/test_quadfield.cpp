#include <set>

#include "doctest.h"
#include "towerforge/modarith.hpp"
#include "towerforge/quadfield.hpp"

using namespace towerforge;

TEST_CASE("field constants for common radicands") {
  QuadField k2 = QuadField::make(2);
  CHECK(k2.t == 0);
  CHECK(k2.n == 2);
  CHECK(k2.disc == 8);

  QuadField k3 = QuadField::make(3);
  CHECK(k3.t == 0);
  CHECK(k3.n == 3);
  CHECK(k3.disc == 12);

  // 5 = 1 mod 4: half-integers enter, omega = (1 + sqrt 5)/2
  QuadField k5 = QuadField::make(5);
  CHECK(k5.t == 1);
  CHECK(k5.n == 1);
  CHECK(k5.disc == 5);

  QuadField k210 = QuadField::make(210);
  CHECK(k210.t == 0);
  CHECK(k210.n == 210);
  CHECK(k210.disc == 840);

  QuadField km1 = QuadField::make(-1);
  CHECK(km1.disc == -4);
  QuadField km7 = QuadField::make(-7);
  CHECK(km7.t == 1);
  CHECK(km7.disc == -7);
}

TEST_CASE("ring arithmetic identities") {
  for (long m : {2L, 5L, -1L, 210L}) {
    QuadField k = QuadField::make(m);
    QElt a{3, -2}, b{-1, 4};
    CHECK(qnorm(k, qmul(k, a, b)) == qnorm(k, a) * qnorm(k, b));
    CHECK(qnorm(k, a) == qmul(k, a, qconj(k, a)).x);
    CHECK(qmul(k, a, qconj(k, a)).y == 0);
    CHECK(qtrace(k, a) == qadd(a, qconj(k, a)).x);
    QElt s = qsub(qadd(a, b), b);
    CHECK(qeq(s, a));
    // multiplication commutes
    CHECK(qeq(qmul(k, a, b), qmul(k, b, a)));
  }
}

TEST_CASE("pell units are fundamental modulo squares") {
  QuadField k2 = QuadField::make(2);
  QElt u2 = pell_unit(k2);
  CHECK(u2.x == 1);
  CHECK(u2.y == 1);
  CHECK(qnorm(k2, u2) == -1);

  QuadField k3 = QuadField::make(3);
  QElt u3 = pell_unit(k3);
  CHECK(u3.x == 2);
  CHECK(u3.y == 1);
  CHECK(qnorm(k3, u3) == 1);

  // for 5 the unit with integer sqrt-coordinates is 2 + sqrt 5 = 1 + 2 omega
  QuadField k5 = QuadField::make(5);
  QElt u5 = pell_unit(k5);
  CHECK(u5.x == 1);
  CHECK(u5.y == 2);
  CHECK(qnorm(k5, u5) == -1);

  // x^2 - 210 y^2 = 1 first solves at (29, 2)
  QuadField k210 = QuadField::make(210);
  QElt u = pell_unit(k210);
  CHECK(u.x == 29);
  CHECK(u.y == 2);
  CHECK(qnorm(k210, u) == 1);
}

TEST_CASE("sqrt-basis coordinates reconstruct the element") {
  QuadField k2 = QuadField::make(2);
  Int na, nb, den;
  sqrtm_coords(k2, QElt{3, 1}, na, nb, den);
  CHECK(na == 3 * den);
  CHECK(nb == den);

  // 1 + omega = (3 + sqrt 5)/2 needs the half-integer denominator
  QuadField k5 = QuadField::make(5);
  sqrtm_coords(k5, QElt{1, 1}, na, nb, den);
  CHECK(2 * na == 3 * den);
  CHECK(2 * nb == den);
}

TEST_CASE("splitting types follow the discriminant character") {
  QuadField k2 = QuadField::make(2);
  CHECK(splitting_type(k2, 7) == SplitType::split);
  CHECK(splitting_type(k2, 3) == SplitType::inert);
  CHECK(splitting_type(k2, 2) == SplitType::ramified);

  QuadField k5 = QuadField::make(5);
  CHECK(splitting_type(k5, 5) == SplitType::ramified);
  CHECK(splitting_type(k5, 11) == SplitType::split);
  CHECK(splitting_type(k5, 2) == SplitType::inert);

  QuadField k210 = QuadField::make(210);
  CHECK(splitting_type(k210, 19) == SplitType::split);
  for (long p : {2L, 3L, 5L, 7L}) {
    CHECK(splitting_type(k210, p) == SplitType::ramified);
  }
  // agreement with the kronecker symbol of the discriminant
  for (long p : {11L, 13L, 17L, 19L, 23L, 29L}) {
    int chi = kronecker(k210.disc, Int(p));
    SplitType st = splitting_type(k210, p);
    if (chi == 1) CHECK(st == SplitType::split);
    if (chi == -1) CHECK(st == SplitType::inert);
  }
}

TEST_CASE("primes above and ideal valuations") {
  QuadField k = QuadField::make(210);
  std::vector<PrimeSlot> above = primes_above(k, 19);
  REQUIRE(above.size() == 2);
  std::set<long> rs = {long(above[0].r.get_si()), long(above[1].r.get_si())};
  // 210 = 1 mod 19, so omega = +-1 at the two slots
  CHECK(rs == std::set<long>{1, 18});
  for (const PrimeSlot& s : above) {
    CHECK(s.e == 1);
    CHECK(s.f == 1);
    CHECK(s.type == SplitType::split);
  }

  // beta = 59 + 2 sqrt 210 has norm 2641 = 19 * 139
  QElt beta{59, 2};
  CHECK(qnorm(k, beta) == 2641);
  PrimeSlot at18 = above[0].r == 18 ? above[0] : above[1];
  PrimeSlot at1 = above[0].r == 1 ? above[0] : above[1];
  CHECK(ideal_valuation(k, at18, beta) == 1);
  CHECK(ideal_valuation(k, at1, beta) == 0);
  // conjugate slots swap under conjugation
  CHECK(ideal_valuation(k, at1, qconj(k, beta)) == 1);
  CHECK(ideal_valuation(k, at18, qconj(k, beta)) == 0);

  // 210 = 2 mod 13 and 2 is not a residue mod 13
  std::vector<PrimeSlot> inert = primes_above(k, 13);
  REQUIRE(inert.size() == 1);
  CHECK(inert[0].f == 2);
  CHECK(ideal_valuation(k, inert[0], QElt{13 * 3, 13 * 5}) == 1);
  CHECK(ideal_valuation(k, inert[0], QElt{169, 0}) == 2);

  std::vector<PrimeSlot> ram = primes_above(k, 5);
  REQUIRE(ram.size() == 1);
  CHECK(ram[0].e == 2);
  // sqrt 210 generates the ramified prime over 5 once
  CHECK(ideal_valuation(k, ram[0], QElt{0, 1}) == 1);
  CHECK(ideal_valuation(k, ram[0], QElt{5, 0}) == 2);
  CHECK(ideal_valuation(k, ram[0], QElt{59, 2}) == 0);
}

TEST_CASE("local squares match residue-field characters") {
  QuadField k = QuadField::make(5);

  // split slot: the residue of x + y omega is x + y r, an ordinary
  // quadratic-residue question mod p
  std::vector<PrimeSlot> above = primes_above(k, 11);
  REQUIRE(above.size() == 2);
  for (const PrimeSlot& s : above) {
    for (long x = 1; x <= 6; ++x) {
      for (long y = 0; y <= 3; ++y) {
        QElt b{x, y};
        Int res = mod_pos(b.x + b.y * s.r, Int(11));
        if (res == 0) continue;  // not a unit at the slot
        bool expect = jacobi64(res.get_si(), 11) == 1;
        CHECK(local_square(k, s, b) == expect);
      }
    }
  }

  // inert slot: a unit is a square exactly when its norm is a residue
  std::vector<PrimeSlot> in13 = primes_above(k, 13);
  REQUIRE(in13.size() == 1);
  for (long x = 0; x <= 5; ++x) {
    for (long y = 1; y <= 4; ++y) {
      QElt b{x, y};
      Int nm = mod_pos(qnorm(k, b), Int(13));
      if (nm == 0) continue;
      bool expect = jacobi64(nm.get_si(), 13) == 1;
      CHECK(local_square(k, in13[0], b) == expect);
    }
  }

  // squares are local squares everywhere
  QuadField k210 = QuadField::make(210);
  QElt beta{59, 2};
  QElt sq = qmul(k210, beta, beta);
  for (long p : {11L, 13L, 19L, 139L}) {
    for (const PrimeSlot& s : primes_above(k210, p)) {
      CHECK(local_square(k210, s, sq));
    }
  }
}

TEST_CASE("real embeddings and total positivity") {
  QuadField k = QuadField::make(2);
  QElt u{1, 1};  // 1 + sqrt 2
  CHECK(embedding_sign(k, u, true) == 1);
  CHECK(embedding_sign(k, u, false) == -1);
  CHECK_FALSE(totally_positive(k, u));
  CHECK(totally_positive(k, QElt{3, 1}));
  CHECK_FALSE(totally_positive(k, QElt{-3, -1}));

  QuadField k210 = QuadField::make(210);
  CHECK(totally_positive(k210, QElt{59, 2}));
  CHECK_FALSE(totally_positive(k210, QElt{28, 2}));  // 28 < 2 sqrt 210 < 29

  // half-integer coordinates: -1 + omega = (sqrt 5 - 1)/2 > 0, conjugate < 0
  QuadField k5 = QuadField::make(5);
  CHECK(embedding_sign(k5, QElt{-1, 1}, true) == 1);
  CHECK(embedding_sign(k5, QElt{-1, 1}, false) == -1);
}
