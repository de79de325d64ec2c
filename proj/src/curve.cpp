#include "towerforge/curve.hpp"

#include <sstream>

namespace towerforge {

Int CurveQ::discriminant() const {
  Int B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  // Standard consistency checks; cheap relative to everything else we do.
  if (4 * B8 != B2 * B6 - B4 * B4) throw Error("b-invariant identity failed");
  Int d = -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
  Int C4 = c4(), C6 = c6();
  if (1728 * d != C4 * C4 * C4 - C6 * C6)
    throw Error("c-invariant identity failed");
  return d;
}

std::string CurveQ::str() const {
  std::ostringstream os;
  os << "[" << a1 << "," << a2 << "," << a3 << "," << a4 << "," << a6 << "]";
  return os.str();
}

CurveQ transform_rst(const CurveQ& e, const Int& r, const Int& s, const Int& t) {
  CurveQ f;
  f.a1 = e.a1 + 2 * s;
  f.a2 = e.a2 - s * e.a1 + 3 * r - s * s;
  f.a3 = e.a3 + r * e.a1 + 2 * t;
  f.a4 = e.a4 - s * e.a3 + 2 * r * e.a2 - (t + r * s) * e.a1 + 3 * r * r -
         2 * s * t;
  f.a6 = e.a6 + r * e.a4 + r * r * e.a2 + r * r * r - t * e.a3 - t * t -
         r * t * e.a1;
  return f;
}

CurveQ scale_up(const CurveQ& e, const Int& u) {
  Int u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
  return CurveQ(e.a1 * u, e.a2 * u2, e.a3 * u3, e.a4 * u4, e.a6 * u6);
}

namespace {

// Rebuild a reduced integral model from (c4, c6) when one exists.
// Returns false when (c4, c6) are not the invariants of any integral
// curve (Kraus' congruence conditions fail).
bool curve_from_c_invariants(const Int& C4, const Int& C6, CurveQ& out) {
  // b2 is determined mod 12 by c6 = -b2^3 mod 36: reduce -c6 mod 12 and
  // pick the standard class representative.  Only cubes mod 12 can occur.
  Int m = mod_pos(-C6, 12);
  long ml = m.get_si();
  Int B2;
  switch (ml) {
    case 0: B2 = 0; break;
    case 1: B2 = 1; break;
    case 4: B2 = 4; break;
    case 5: B2 = 5; break;
    case 8: B2 = -4; break;
    case 9: B2 = -3; break;
    default: return false;
  }
  Int num_b4 = B2 * B2 - C4;
  if (!divides(num_b4, 24)) return false;
  Int B4 = divexact(num_b4, 24);
  Int num_b6 = -B2 * B2 * B2 + 36 * B2 * B4 - C6;
  if (!divides(num_b6, 216)) return false;
  Int B6 = divexact(num_b6, 216);

  Int A1 = mod_pos(B2, 2);
  if (!divides(B2 - A1, 4)) return false;
  Int A2 = divexact(B2 - A1, 4);
  Int A3 = mod_pos(B6, 2);
  if (!divides(B6 - A3, 4)) return false;
  Int A6 = divexact(B6 - A3, 4);
  Int num_a4 = B4 - A1 * A3;
  if (!divides(num_a4, 2)) return false;
  Int A4 = divexact(num_a4, 2);
  out = CurveQ(A1, A2, A3, A4, A6);
  if (out.c4() != C4 || out.c6() != C6) return false;
  // a2 normalisation: shift by r in {-1,0,1} adjustments is already
  // implied by the b2 class choice (b2 in [-4, 5] gives a2 in [-1, 1]).
  return true;
}

}  // namespace

CurveQ minimal_model(const CurveQ& e) {
  Int C4 = e.c4(), C6 = e.c6(), D = e.discriminant();
  if (D == 0) throw Error("singular curve has no minimal model");
  // Any u with u^4 | c4, u^6 | c6, u^12 | Delta and integral reconstruction
  // gives a smaller model; the largest such u gives the minimal one.
  Int abs_d = abs(D);
  Int umax = iroot(abs_d, 12);
  CurveQ best;
  bool have = false;
  for (Int u = 1; u <= umax; ++u) {
    Int u4 = u * u * u * u, u6 = u4 * u * u;
    Int u12 = u6 * u6;
    if (!divides(D, u12)) continue;
    if (C4 != 0 && !divides(C4, u4)) continue;
    if (!divides(C6, u6)) continue;
    CurveQ cand;
    if (!curve_from_c_invariants(divexact(C4, u4), divexact(C6, u6), cand))
      continue;
    best = cand;
    have = true;
  }
  if (!have) throw Error("minimal model reconstruction failed");
  if (abs(best.discriminant()) > abs_d) throw Error("minimalisation grew Delta");
  return best;
}

CurveQ quadratic_twist(const CurveQ& e, const Int& d) {
  if (d == 0) throw Error("twist parameter must be nonzero");
  if (!is_squarefree(d)) throw Error("twist parameter must be squarefree");
  // Twist the short model y^2 = x^3 - 27 c4 x - 54 c6 by d and reduce.
  Int C4 = e.c4(), C6 = e.c6();
  CurveQ t(0, 0, 0, -27 * d * d * C4, -54 * d * d * d * C6);
  return minimal_model(t);
}

}  // namespace towerforge
