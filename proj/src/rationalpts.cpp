#include "towerforge/rationalpts.hpp"

#include <algorithm>
#include <numeric>

#include "towerforge/countpoints.hpp"
#include "towerforge/modarith.hpp"

namespace towerforge {

namespace {

Rat rat(const Int& n) { return Rat(n); }

// y-coordinate pair for abscissa x, from z^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
// with z = 2y + a1 x + a3.
bool lift_x(const CurveQ& e, const Rat& x, const Rat& z, Rat& y) {
  y = (z - rat(e.a1) * x - rat(e.a3)) / 2;
  return true;
}

Rat quartic(const CurveQ& e, const Rat& x) {
  return ((4 * x + rat(e.b2())) * x + 2 * rat(e.b4())) * x + rat(e.b6());
}

}  // namespace

bool on_curve(const CurveQ& e, const PointQ& p) {
  if (p.inf) return true;
  Rat lhs = p.y * p.y + rat(e.a1) * p.x * p.y + rat(e.a3) * p.y;
  Rat rhs = p.x * p.x * p.x + rat(e.a2) * p.x * p.x + rat(e.a4) * p.x +
            rat(e.a6);
  return lhs == rhs;
}

PointQ negate_point(const CurveQ& e, const PointQ& p) {
  if (p.inf) return p;
  return PointQ(p.x, -p.y - rat(e.a1) * p.x - rat(e.a3));
}

PointQ add_points(const CurveQ& e, const PointQ& p, const PointQ& q) {
  if (p.inf) return q;
  if (q.inf) return p;
  Rat lam;
  if (p.x == q.x) {
    if (p.y == negate_point(e, q).y) return PointQ();
    Rat num = 3 * p.x * p.x + 2 * rat(e.a2) * p.x + rat(e.a4) -
              rat(e.a1) * p.y;
    Rat den = 2 * p.y + rat(e.a1) * p.x + rat(e.a3);
    lam = num / den;
  } else {
    lam = (q.y - p.y) / (q.x - p.x);
  }
  Rat nu = p.y - lam * p.x;
  Rat x3 = lam * lam + rat(e.a1) * lam - rat(e.a2) - p.x - q.x;
  Rat y3 = -(lam + rat(e.a1)) * x3 - nu - rat(e.a3);
  return PointQ(x3, y3);
}

PointQ mul_point(const CurveQ& e, PointQ p, long k) {
  if (k < 0) {
    p = negate_point(e, p);
    k = -k;
  }
  PointQ r;
  while (k) {
    if (k & 1) r = add_points(e, r, p);
    p = add_points(e, p, p);
    k >>= 1;
  }
  return r;
}

long point_order(const CurveQ& e, const PointQ& p, long max_order) {
  if (p.inf) return 1;
  PointQ acc = p;
  for (long k = 1; k <= max_order; ++k) {
    if (acc.inf) return k;
    acc = add_points(e, acc, p);
  }
  return 0;
}

// Integer roots of the monic cubic X^3 + A X + B, by sign-change bisection
// on each monotone piece; avoids factoring large constants.
std::vector<Int> depressed_cubic_integer_roots(const Int& A, const Int& B) {
  auto f = [&](const Int& x) -> Int { return x * x * x + A * x + B; };
  // root magnitude bound: |x|^3 <= |A||x| + |B| gives |x| <= 1 + sqrt|A| + cbrt|B|
  Int bound = 2 + isqrt(abs(A)) + iroot(abs(B) + 1, 3);
  // integer ranges on which the cubic is monotone; for A < 0 the turning
  // points are at +-sqrt(-A/3), so split at fc = floor(sqrt(-A/3))
  std::vector<std::pair<Int, Int>> ranges;
  if (A < 0) {
    Int q = (-A - mod_pos(-A, 3)) / 3;
    Int fc = isqrt(q);
    ranges.push_back({-bound, -fc - 1});
    ranges.push_back({-fc, fc});
    ranges.push_back({fc + 1, bound});
  } else {
    ranges.push_back({-bound, bound});
  }
  std::vector<Int> roots;
  auto push = [&](const Int& r) {
    if (f(r) == 0 &&
        std::find(roots.begin(), roots.end(), r) == roots.end())
      roots.push_back(r);
  };
  for (const auto& [rlo, rhi] : ranges) {
    Int lo = rlo, hi = rhi;
    if (lo > hi) continue;
    push(lo);
    push(hi);
    Int flo = f(lo), fhi = f(hi);
    if (flo == 0 || fhi == 0) continue;
    if ((flo < 0) == (fhi < 0)) continue;
    bool inc = flo < 0;
    while (hi - lo > 1) {
      Int mid = (lo + hi) / 2;
      Int fm = f(mid);
      if (fm == 0) {
        push(mid);
        break;
      }
      if ((fm < 0) == inc)
        lo = mid;
      else
        hi = mid;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

TorsionInfo torsion_subgroup(const CurveQ& e0) {
  CurveQ e = minimal_model(e0);
  TorsionInfo out;

  // Reduction bound: torsion injects into E(F_p) for odd good p.
  Int g = 0;
  int used = 0;
  for (uint64_t p = 3; used < 10; p += 2) {
    if (!is_prime_u64(p) || !good_at(e, p)) continue;
    g = gcd(g, Int(count_points(e, p)));
    ++used;
    if (g == 1) break;
  }
  if (g == 1) {
    out.order = 1;
    return out;
  }

  // Candidate enumeration on Y^2 = X^3 - 27 c4 X - 54 c6 (X = 36x + 3 b2,
  // Y = 108(2y + a1 x + a3), model discriminant 6^12 disc).
  Int A = -27 * e.c4(), B = -54 * e.c6();
  Int ds = abs(e.discriminant());
  for (int i = 0; i < 12; ++i) ds *= 6;
  std::vector<Int> ys{0};
  {
    std::vector<Int> part{1};
    for (const auto& [p, k] : factorize(ds)) {
      std::vector<Int> next;
      Int pe = 1;
      for (unsigned j = 0; 2 * j <= k; ++j) {
        for (const Int& v : part) next.push_back(v * pe);
        pe *= p;
      }
      part = std::move(next);
    }
    for (const Int& v : part) ys.push_back(v);
  }

  std::vector<PointQ> tors;
  auto consider = [&](const Rat& x, const Rat& y) {
    PointQ p(x, y);
    if (!on_curve(e, p)) return;
    long ord = point_order(e, p, 12);
    if (ord == 0) return;
    for (const PointQ& q : tors)
      if (q.x == p.x && q.y == p.y) return;
    tors.push_back(p);
  };
  for (const Int& Y : ys) {
    for (const Int& X : depressed_cubic_integer_roots(A, B - Y * Y)) {
      Rat x = Rat(X - 3 * e.b2()) / 36;
      Rat z = Rat(Y) / 108;
      Rat y;
      lift_x(e, x, z, y);
      consider(x, y);
      lift_x(e, x, -z, y);
      consider(x, y);
    }
  }

  long n = (long)tors.size() + 1;
  static const long mazur[] = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12};
  if (std::find(std::begin(mazur), std::end(mazur), n) == std::end(mazur))
    throw Error("torsion order outside the admissible list");
  long two = 1;
  long maxord = 1;
  for (const PointQ& p : tors) {
    long o = point_order(e, p, 12);
    maxord = std::max(maxord, o);
    if (o == 2) ++two;
  }
  out.order = n;
  out.points = tors;
  if (n == 1) {
    // trivial
  } else if (two == 4) {
    out.structure = {2, n / 2};
    if (maxord != n / 2) throw Error("torsion structure mismatch");
  } else {
    out.structure = {n};
    if (maxord != n) throw Error("torsion structure mismatch");
  }
  return out;
}

std::vector<PointQ> point_search_q(const CurveQ& e, long bound) {
  std::vector<PointQ> found;
  for (long w = 1; w <= bound; ++w)
    for (long u = -bound; u <= bound; ++u) {
      if (std::gcd(std::abs(u), w) != 1) continue;
      Rat x = Rat(Int(u), Int(w));
      auto z = rat_sqrt(quartic(e, x));
      if (!z) continue;
      Rat y;
      lift_x(e, x, *z, y);
      found.emplace_back(x, y);
      if (*z != 0) {
        lift_x(e, x, -*z, y);
        found.emplace_back(x, y);
      }
    }
  for (const PointQ& p : found)
    if (!on_curve(e, p)) throw Error("search produced an off-curve point");
  return found;
}

bool quad_is_rational(const PointQuad& p) {
  return p.inf || (p.x.b == 0 && p.y.b == 0);
}

namespace {

QuadElem qmul(const Int& m, const QuadElem& u, const QuadElem& v) {
  return {u.a * v.a + rat(m) * u.b * v.b, u.a * v.b + u.b * v.a};
}

QuadElem qadd(const QuadElem& u, const QuadElem& v) {
  return {u.a + v.a, u.b + v.b};
}

QuadElem qscale(const Rat& c, const QuadElem& u) { return {c * u.a, c * u.b}; }

bool qzero(const QuadElem& u) { return u.a == 0 && u.b == 0; }

}  // namespace

bool quad_sqrt(const Int& m, const QuadElem& v, QuadElem& out) {
  if (qzero(v)) {
    out = {0, 0};
    return true;
  }
  if (v.b == 0) {
    if (auto r = rat_sqrt(v.a)) {
      out = {*r, 0};
      return true;
    }
    if (auto r = rat_sqrt(v.a / rat(m))) {
      out = {0, *r};
      return true;
    }
    return false;
  }
  // (s + t sqrt m)^2 = v needs s^2 + m t^2 = v.a and 2 s t = v.b;
  // the norm s^2 - m t^2 of the root squares to the norm of v.
  Rat norm = v.a * v.a - rat(m) * v.b * v.b;
  auto n = rat_sqrt(norm);
  if (!n) return false;
  for (int sign = 0; sign < 2; ++sign) {
    Rat nn = sign ? -*n : *n;
    Rat s2 = (v.a + nn) / 2;
    auto s = rat_sqrt(s2);
    if (!s || *s == 0) continue;
    Rat t = v.b / (2 * *s);
    QuadElem cand{*s, t};
    if (qmul(m, cand, cand).a == v.a && qmul(m, cand, cand).b == v.b) {
      out = cand;
      return true;
    }
  }
  return false;
}

bool quad_on_curve(const CurveQ& e, const Int& m, const PointQuad& p) {
  if (p.inf) return true;
  QuadElem lhs = qadd(qmul(m, p.y, p.y),
                      qadd(qmul(m, qscale(rat(e.a1), p.x), p.y),
                           qscale(rat(e.a3), p.y)));
  QuadElem x2 = qmul(m, p.x, p.x);
  QuadElem rhs = qadd(qmul(m, x2, p.x),
                      qadd(qscale(rat(e.a2), x2),
                           qadd(qscale(rat(e.a4), p.x),
                                QuadElem{rat(e.a6), 0})));
  return lhs.a == rhs.a && lhs.b == rhs.b;
}

std::vector<PointQuad> point_search_quad(const CurveQ& e, const Int& m,
                                         long bound) {
  if (!is_squarefree(m) || m == 1 || m == 0)
    throw Error("field parameter must be squarefree and not 0, 1");
  std::vector<PointQuad> found;
  for (long c = 1; c <= bound; ++c)
    for (long a = -bound; a <= bound; ++a)
      for (long b = -bound; b <= bound; ++b) {
        long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), c);
        if (g != 1) continue;
        QuadElem x{Rat(Int(a), Int(c)), Rat(Int(b), Int(c))};
        // z^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
        QuadElem w = qadd(
            qmul(m, qadd(qmul(m, qadd(qscale(4, x), QuadElem{rat(e.b2()), 0}),
                              x),
                         QuadElem{2 * rat(e.b4()), 0}),
                 x),
            QuadElem{rat(e.b6()), 0});
        QuadElem z;
        if (!quad_sqrt(m, w, z)) continue;
        for (int sign = 0; sign < (qzero(z) ? 1 : 2); ++sign) {
          QuadElem zz = sign ? qscale(-1, z) : z;
          QuadElem y = qscale(Rat(1, 2),
                              qadd(zz, qadd(qscale(-rat(e.a1), x),
                                            QuadElem{-rat(e.a3), 0})));
          PointQuad p;
          p.x = x;
          p.y = y;
          p.inf = false;
          if (!quad_on_curve(e, m, p))
            throw Error("quadratic search produced an off-curve point");
          found.push_back(p);
        }
      }
  return found;
}

}  // namespace towerforge
