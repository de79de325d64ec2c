#include "doctest.h"
#include "towerforge/membership.hpp"

using namespace towerforge;

TEST_CASE("the conductor-67 curve passes every structural gate") {
  CurveQ e(0, 1, 1, -12, -21);
  MembershipReport r = check_S_membership(e, "67a1");
  CHECK(r.label == "67a1");
  CHECK(r.disc_min == -67);
  CHECK(r.disc_mod4_ok);
  REQUIRE(r.odd_multiplicative_witness.has_value());
  CHECK(*r.odd_multiplicative_witness == 67);
  CHECK(r.witness_ord == 1);
  CHECK(r.mod2_surjective);
  CHECK(r.mod2_reason ==
        "2-division cubic irreducible and discriminant nonsquare");
  CHECK(r.modl.size() == 7);  // levels 3, 5, 7, ..., 19
  for (const ModlVerdict& v : r.modl) {
    CHECK(v.status == "obstruction-free");
    CHECK(v.sample_bound == 1000);
    CHECK(v.samples > 0);
  }
  CHECK(r.in_S);
  CHECK_FALSE(r.rank0_attempted);
}

TEST_CASE("the conductor-67 curve lands in the rank-zero core") {
  CurveQ e(0, 1, 1, -12, -21);
  MembershipReport r = check_S0(e, 8, 1e-6, "67a1");
  CHECK(r.in_S);
  CHECK(r.rank0_attempted);
  REQUIRE(r.rank0_cert.has_value());
  CHECK(r.rank0_cert->w == 1);
  CHECK(r.rank0_cert->terms == 28);
  CHECK(r.rank0_cert->l_value ==
        doctest::Approx(1.2737700371978766).epsilon(1e-9));
  CHECK(r.rank0_cert->w_residual < 1e-6);
  CHECK(r.rank0_cert->tail_bound < 1e-6);
  CHECK(r.rank0_certified);
  CHECK(r.torsion_trivial);
  CHECK(r.torsion_order == 1);
  CHECK(r.extra_points_found == 0);
  CHECK(r.in_S0);
}

TEST_CASE("a rank-one member stays outside the core") {
  CurveQ e(0, 0, 1, -1, 0);
  MembershipReport r = check_S0(e, 5, 1e-6, "37a1");
  CHECK(r.in_S);
  REQUIRE(r.odd_multiplicative_witness.has_value());
  CHECK(*r.odd_multiplicative_witness == 37);
  CHECK(r.rank0_attempted);
  REQUIRE(r.rank0_cert.has_value());
  CHECK(r.rank0_cert->w == -1);
  CHECK(r.rank0_cert->w_residual < 1e-3);
  CHECK(r.rank0_cert->verdict == "L-vanishes-consistent");
  CHECK_FALSE(r.rank0_certified);
  CHECK(r.torsion_trivial);
  CHECK(r.extra_points_found == 10);
  CHECK_FALSE(r.in_S0);
}

TEST_CASE("rational two-division points are disqualifying") {
  // y^2 = x^3 - x: the cubic splits completely
  MembershipReport a = check_S_membership(CurveQ(0, 0, 0, -1, 0));
  CHECK_FALSE(a.mod2_surjective);
  CHECK(a.mod2_reason == "2-division cubic has a rational root");
  CHECK_FALSE(a.in_S);

  // conductor 32: a rational two-torsion point again
  MembershipReport b = check_S_membership(CurveQ(0, 0, 0, 4, 0));
  CHECK_FALSE(b.mod2_surjective);
  CHECK_FALSE(b.in_S);

  // conductor 14: torsion of order 6 forces a rational root too
  MembershipReport c = check_S_membership(CurveQ(1, 0, 1, 4, -6));
  CHECK_FALSE(c.mod2_surjective);
  REQUIRE(c.odd_multiplicative_witness.has_value());
  CHECK(*c.odd_multiplicative_witness == 7);
  CHECK(c.witness_ord == 3);
  CHECK_FALSE(c.in_S);
}

TEST_CASE("a square discriminant is disqualifying on its own") {
  // y^2 = x^3 - 3x - 1: irreducible cubic, discriminant 1296 = 36^2
  CurveQ e(0, 0, 0, -3, -1);
  MembershipReport r = check_S_membership(e);
  CHECK_FALSE(r.mod2_surjective);
  CHECK(r.mod2_reason == "discriminant is a rational square");
  CHECK_FALSE(r.in_S);
}

TEST_CASE("odd-level screening catches a rational isogeny") {
  // conductor 11: the classical level-5 obstruction
  CurveQ e(0, -1, 1, -10, -20);
  MembershipReport r = check_S_membership(e, "11a1");
  CHECK(r.mod2_surjective);
  bool saw = false;
  for (const ModlVerdict& v : r.modl) {
    if (v.ell == 5) {
      saw = true;
      CHECK(v.status == "obstruction");
    }
  }
  CHECK(saw);
  CHECK_FALSE(r.in_S);
}

TEST_CASE("surjectivity verdicts stand alone") {
  Mod2Result good = check_mod2_surjective(CurveQ(0, 1, 1, -12, -21));
  CHECK(good.surjective);
  Mod2Result split = check_mod2_surjective(CurveQ(0, 0, 0, -1, 0));
  CHECK_FALSE(split.surjective);

  // the screen stops at the first nonsquare Frobenius discriminant
  ModlVerdict v = check_modl_obstructions(CurveQ(0, 1, 1, -12, -21), 3, 1000);
  CHECK(v.ell == 3);
  CHECK(v.status == "obstruction-free");
  CHECK(v.samples >= 1);

  // a sample bound below the first usable prime cannot rule anything out
  ModlVerdict tiny = check_modl_obstructions(CurveQ(0, 1, 1, -12, -21), 19, 2);
  CHECK(tiny.status == "insufficient-samples");
}
