#include "doctest.h"
#include "towerforge/countpoints.hpp"
#include "towerforge/localdata.hpp"

using namespace towerforge;

TEST_CASE("conductors of classical curves") {
  struct Row {
    CurveQ e;
    long n;
  };
  const Row rows[] = {
      {CurveQ(0, -1, 1, -10, -20), 11},  {CurveQ(1, 0, 1, 4, -6), 14},
      {CurveQ(0, 0, 1, 0, -7), 27},      {CurveQ(0, 0, 0, 4, 0), 32},
      {CurveQ(0, 0, 1, -1, 0), 37},      {CurveQ(0, 1, 1, -12, -21), 67},
      {CurveQ(0, 1, 1, -2, 0), 389},     {CurveQ(0, 0, 1, -7, 6), 5077},
  };
  for (const Row& r : rows) CHECK(conductor(r.e) == r.n);
}

TEST_CASE("multiplicative reduction with split and nonsplit tags") {
  // -c6 = 1 mod 11 is a square: split
  ReductionData r11 = reduction_at(CurveQ(0, -1, 1, -10, -20), 11);
  CHECK(r11.multiplicative());
  CHECK(r11.v_disc == 5);
  CHECK(r11.index == 5);
  CHECK(r11.f == 1);
  CHECK(r11.split);
  CHECK(r11.kodaira_str() == "I5");

  // -c6 = 216 = 31 mod 37 is a nonsquare: nonsplit
  ReductionData r37 = reduction_at(CurveQ(0, 0, 1, -1, 0), 37);
  CHECK(r37.multiplicative());
  CHECK(r37.index == 1);
  CHECK(!r37.split);

  // -c6 = -14408 = 64 mod 67 is a square: split
  ReductionData r67 = reduction_at(CurveQ(0, 1, 1, -12, -21), 67);
  CHECK(r67.multiplicative());
  CHECK(r67.index == 1);
  CHECK(r67.f == 1);
  CHECK(r67.split);
}

TEST_CASE("even multiplicative places of a composite level") {
  // disc -2^6 7^3, conductor 14: I6 at 2 and I3 at 7
  CurveQ e(1, 0, 1, 4, -6);
  ReductionData r2 = reduction_at(e, 2);
  CHECK(r2.multiplicative());
  CHECK(r2.index == 6);
  CHECK(r2.f == 1);
  ReductionData r7 = reduction_at(e, 7);
  CHECK(r7.multiplicative());
  CHECK(r7.index == 3);
  CHECK(r7.f == 1);
}

TEST_CASE("additive types pinned by the component-count relation") {
  // v(disc) = f + m - 1 throughout; m = 7 for IV*, m = n + 5 for In*
  ReductionData r27 = reduction_at(CurveQ(0, 0, 1, 0, -7), 3);
  CHECK(r27.additive());
  CHECK(r27.family == KodairaFamily::IVstar);
  CHECK(r27.v_disc == 9);
  CHECK(r27.f == 3);

  ReductionData r32 = reduction_at(CurveQ(0, 0, 0, 4, 0), 2);
  CHECK(r32.additive());
  CHECK(r32.family == KodairaFamily::Instar);
  CHECK(r32.index == 3);
  CHECK(r32.v_disc == 12);
  CHECK(r32.f == 5);
  CHECK(r32.kodaira_str() == "I3*");
}

TEST_CASE("the twist by 2 acquires additive reduction at 2") {
  CurveQ t(0, -1, 0, -49, -117);  // minimal model of the twisted curve
  ReductionData r = reduction_at(t, 2);
  CHECK(r.additive());
  CHECK(r.family == KodairaFamily::II);
  CHECK(r.v_disc == 6);
  CHECK(r.f == 6);
  CHECK(conductor(t) == 4288);  // 2^6 67
  // the odd place is untouched by the even twist
  ReductionData r67 = reduction_at(t, 67);
  CHECK(r67.multiplicative());
  CHECK(r67.f == 1);
}

TEST_CASE("reduction data covers exactly the bad primes") {
  auto red = reduction_data(CurveQ(1, 0, 1, 4, -6));
  REQUIRE(red.size() == 2);
  CHECK(red.count(Int(2)) == 1);
  CHECK(red.count(Int(7)) == 1);
  CHECK(good_at(CurveQ(1, 0, 1, 4, -6), 3));
  CHECK(!good_at(CurveQ(1, 0, 1, 4, -6), 7));
}

TEST_CASE("conductor is a model invariant") {
  CurveQ e(0, 1, 1, -12, -21);
  CurveQ big = transform_rst(scale_up(e, Int(6)), Int(-6), Int(3), Int(12));
  CHECK(conductor(big) == 67);
}
