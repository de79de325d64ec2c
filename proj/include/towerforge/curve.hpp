#pragma once

#include <array>
#include <string>

#include "towerforge/bigint.hpp"

namespace towerforge {

// Elliptic curve over Q in long Weierstrass form
//   y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
// with integral coefficients.  All derived quantities are exact.
struct CurveQ {
  Int a1, a2, a3, a4, a6;

  CurveQ() = default;
  CurveQ(Int a1_, Int a2_, Int a3_, Int a4_, Int a6_)
      : a1(std::move(a1_)), a2(std::move(a2_)), a3(std::move(a3_)),
        a4(std::move(a4_)), a6(std::move(a6_)) {}

  static CurveQ from_list(const std::array<Int, 5>& a) {
    return CurveQ(a[0], a[1], a[2], a[3], a[4]);
  }

  Int b2() const { return a1 * a1 + 4 * a2; }
  Int b4() const { return 2 * a4 + a1 * a3; }
  Int b6() const { return a3 * a3 + 4 * a6; }
  Int b8() const {
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  }
  Int c4() const { return b2() * b2() - 24 * b4(); }
  Int c6() const {
    Int B2 = b2();
    return -B2 * B2 * B2 + 36 * B2 * b4() - 216 * b6();
  }
  Int discriminant() const;

  // j-invariant numerator/denominator pair c4^3 / Delta, not reduced.
  bool is_singular() const { return discriminant() == 0; }

  bool operator==(const CurveQ& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
  }
  bool operator!=(const CurveQ& o) const { return !(*this == o); }

  std::string str() const;
};

// Isomorphism (u,r,s,t): x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.
// transform_rst applies the integral-shift part (u = 1).
CurveQ transform_rst(const CurveQ& e, const Int& r, const Int& s, const Int& t);

// Scale-up by integer u >= 1: a_i -> u^i a_i.  Multiplies Delta by u^12.
// This is the inverse direction of minimalisation.
CurveQ scale_up(const CurveQ& e, const Int& u);

// Global minimal model in the reduced normal form a1, a3 in {0,1},
// a2 in {-1,0,1}.  The result is the unique such model, so curve
// identity checks can compare coefficient tuples literally.
CurveQ minimal_model(const CurveQ& e);

// Quadratic twist by squarefree d, returned as a minimal model.
CurveQ quadratic_twist(const CurveQ& e, const Int& d);

}  // namespace towerforge
