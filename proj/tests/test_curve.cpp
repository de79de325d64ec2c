#include "doctest.h"
#include "towerforge/curve.hpp"

using namespace towerforge;

namespace {
const CurveQ k67a1(0, 1, 1, -12, -21);
const CurveQ k37a1(0, 0, 1, -1, 0);
const CurveQ k11a1(0, -1, 1, -10, -20);
}  // namespace

TEST_CASE("b- and c-invariants of the reference curve") {
  CHECK(k67a1.b2() == 4);
  CHECK(k67a1.b4() == -24);
  CHECK(k67a1.b6() == -83);
  CHECK(k67a1.c4() == 592);
  CHECK(k67a1.c6() == 14408);
  CHECK(k67a1.discriminant() == -67);
}

TEST_CASE("b8 satisfies the standard relation 4 b8 = b2 b6 - b4^2") {
  for (const CurveQ& e : {k67a1, k37a1, k11a1, CurveQ(1, 0, 1, 4, -6)})
    CHECK(4 * e.b8() == e.b2() * e.b6() - e.b4() * e.b4());
}

TEST_CASE("discriminants of classical curves") {
  CHECK(k37a1.discriminant() == 37);
  CHECK(k11a1.discriminant() == Int(-161051));  // -11^5
  CHECK(CurveQ(0, 0, 1, -7, 6).discriminant() == 5077);
  CHECK(CurveQ(0, 1, 1, -2, 0).discriminant() == 389);
  CHECK(CurveQ(1, 0, 1, 4, -6).discriminant() == -21952);  // -2^6 7^3
}

TEST_CASE("singularity detection") {
  CHECK(CurveQ(0, 0, 0, 0, 0).is_singular());
  // 4(-3)^3 + 27(2)^2 = 0: a cuspidal cubic
  CHECK(CurveQ(0, 0, 0, -3, 2).is_singular());
  CHECK(!k67a1.is_singular());
}

TEST_CASE("coordinate shifts preserve c4, c6 and the discriminant") {
  CurveQ f = transform_rst(k67a1, Int(3), Int(-2), Int(5));
  CHECK(f.c4() == k67a1.c4());
  CHECK(f.c6() == k67a1.c6());
  CHECK(f.discriminant() == k67a1.discriminant());
  CHECK(f != k67a1);
}

TEST_CASE("scaling up multiplies the discriminant by u^12") {
  CurveQ f = scale_up(k37a1, Int(2));
  CHECK(f.discriminant() == k37a1.discriminant() * int_pow(Int(2), 12));
  CHECK(f.c4() == k37a1.c4() * 16);
}

TEST_CASE("minimal model recovers the reduced form") {
  for (const CurveQ& e : {k67a1, k37a1, k11a1}) {
    CHECK(minimal_model(e) == e);  // already minimal and reduced
    CurveQ big = transform_rst(scale_up(e, Int(6)), Int(12), Int(6), Int(-30));
    CHECK(minimal_model(big) == e);
  }
}

TEST_CASE("minimal model lands in the normal form") {
  CurveQ big = transform_rst(scale_up(k67a1, Int(5)), Int(7), Int(3), Int(2));
  CurveQ m = minimal_model(big);
  CHECK((m.a1 == 0 || m.a1 == 1));
  CHECK((m.a3 == 0 || m.a3 == 1));
  CHECK((m.a2 >= -1 && m.a2 <= 1));
}

TEST_CASE("twisting is involutive up to minimal models") {
  for (const Int& d : {Int(2), Int(5), Int(-1), Int(210)}) {
    CurveQ t = quadratic_twist(k67a1, d);
    CHECK(minimal_model(quadratic_twist(t, d)) == minimal_model(k67a1));
  }
  CHECK(quadratic_twist(k37a1, Int(1)) == minimal_model(k37a1));
}

TEST_CASE("the twist by 2 of the reference curve") {
  CurveQ t = quadratic_twist(k67a1, 2);
  CHECK(t == CurveQ(0, -1, 0, -49, -117));
  CHECK(t.discriminant() == -4288);  // -2^6 67
}
