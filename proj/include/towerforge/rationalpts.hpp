#pragma once

#include <vector>

#include "towerforge/curve.hpp"

namespace towerforge {

// Affine rational point or the point at infinity.
struct PointQ {
  Rat x, y;
  bool inf = true;
  PointQ() = default;
  PointQ(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)), inf(false) {}
};

bool on_curve(const CurveQ& e, const PointQ& p);
PointQ negate_point(const CurveQ& e, const PointQ& p);
PointQ add_points(const CurveQ& e, const PointQ& p, const PointQ& q);
PointQ mul_point(const CurveQ& e, PointQ p, long k);

// Smallest k in [1, max_order] with k*p = O, else 0.
long point_order(const CurveQ& e, const PointQ& p, long max_order = 12);

struct TorsionInfo {
  long order = 1;
  // invariant-factor shape: {} trivial, {n} cyclic, {2, n} for Z/2 x Z/n
  std::vector<long> structure;
  std::vector<PointQ> points;  // affine torsion points only
};

// Exact rational torsion subgroup: finite-field gcd bound, then integral
// candidate enumeration on the short model with order confirmation.
TorsionInfo torsion_subgroup(const CurveQ& e);

// All affine points with x = u/w, gcd(u, w) = 1, |u|, w <= bound.
std::vector<PointQ> point_search_q(const CurveQ& e, long bound);

// Element a + b*sqrt(m) of a quadratic field.
struct QuadElem {
  Rat a, b;
};

struct PointQuad {
  QuadElem x, y;
  bool inf = true;
};

bool quad_on_curve(const CurveQ& e, const Int& m, const PointQuad& p);
bool quad_is_rational(const PointQuad& p);

// All affine points with x = (a + b sqrt(m))/c, |a|, |b|, c <= bound,
// gcd(a, b, c) = 1.  Exact arithmetic throughout.
std::vector<PointQuad> point_search_quad(const CurveQ& e, const Int& m,
                                         long bound);

// Square root in Q(sqrt(m)) if one exists.
bool quad_sqrt(const Int& m, const QuadElem& v, QuadElem& out);

// Integer roots of X^3 + A X + B, sorted increasing.
std::vector<Int> depressed_cubic_integer_roots(const Int& A, const Int& B);

}  // namespace towerforge
