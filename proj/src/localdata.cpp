#include "towerforge/localdata.hpp"

#include <sstream>

namespace towerforge {

namespace {

Int inv_mod(const Int& a, const Int& m) {
  Int r;
  if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
    throw Error("inv_mod: not invertible");
  return r;
}

Int pow_int(const Int& p, unsigned k) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), k);
  return r;
}

bool is_square_mod(const Int& a, const Int& p) {
  // p odd prime, a a p-adic unit.
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()) == 1;
}

// Move the singular point of e mod p to (0,0).  Caller guarantees the
// reduction is not smooth.
CurveQ move_singular_point(const CurveQ& e, const Int& p) {
  Int x0, y0;
  if (p <= 3) {
    bool found = false;
    for (Int x = 0; x < p && !found; ++x)
      for (Int y = 0; y < p && !found; ++y) {
        Int fv = y * y + e.a1 * x * y + e.a3 * y - x * x * x - e.a2 * x * x -
                 e.a4 * x - e.a6;
        Int fx = e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4;
        Int fy = 2 * y + e.a1 * x + e.a3;
        if (divides(fv, p) && divides(fx, p) && divides(fy, p)) {
          x0 = x;
          y0 = y;
          found = true;
        }
      }
    if (!found) throw Error("no singular point found mod small p");
  } else {
    // Cusp/node x-coordinate; for additive reduction the right-hand cubic
    // has its repeated root at -b2/12, and we only call this when c4 = 0
    // mod p so the root is triple.
    x0 = mod_pos(-e.b2() * inv_mod(12 % p, p), p);
    y0 = mod_pos(-(e.a1 * x0 + e.a3) * inv_mod(Int(2), p), p);
  }
  CurveQ f = transform_rst(e, x0, 0, y0);
  if (!divides(f.a3, p) || !divides(f.a4, p) || !divides(f.a6, p))
    throw Error("singular point translation failed");
  return f;
}

// After the earlier exits we may normalise so that p | a1, a2,
// p^2 | a3, a4 and p^3 | a6; the shift (s, t) below achieves this.
CurveQ normalise_for_cubic(const CurveQ& e, const Int& p) {
  if (p == 2) {
    for (Int s = 0; s < 2; ++s)
      for (Int t = 0; t < 8; ++t) {
        CurveQ f = transform_rst(e, 0, s, t);
        if (divides(f.a1, 2) && divides(f.a2, 2) && divides(f.a3, 4) &&
            divides(f.a4, 4) && divides(f.a6, 8))
          return f;
      }
    throw Error("dyadic normalisation failed");
  }
  Int p2 = p * p;
  Int s = mod_pos(-e.a1 * inv_mod(Int(2), p), p);
  Int t = mod_pos(-e.a3 * inv_mod(Int(2), p2), p2);
  CurveQ f = transform_rst(e, 0, s, t);
  if (!(divides(f.a1, p) && divides(f.a2, p) && divides(f.a3, p2) &&
        divides(f.a4, p2) && divides(f.a6, p2 * p)))
    throw Error("odd normalisation failed");
  return f;
}

// Root structure of T^3 + a T^2 + b T + c over F_p.
enum class CubicShape { separable, double_root, triple_root };

CubicShape cubic_shape(const Int& a, const Int& b, const Int& c, const Int& p,
                       Int& root_out) {
  Int disc = 18 * a * b * c - 4 * a * a * a * c + a * a * b * b -
             4 * b * b * b - 27 * c * c;
  if (!divides(disc, p)) return CubicShape::separable;
  // Repeated root exists; triple iff the polynomial is a perfect cube.
  Int tau;
  if (p == 3)
    tau = mod_pos(-c, p);
  else
    tau = mod_pos(-a * inv_mod(Int(3) % p, p), p);
  // (T - tau)^3 = T^3 - 3 tau T^2 + 3 tau^2 T - tau^3
  if (divides(a + 3 * tau, p) && divides(b - 3 * tau * tau, p) &&
      divides(c + tau * tau * tau, p)) {
    root_out = tau;
    return CubicShape::triple_root;
  }
  // Double root: common root of the cubic and its derivative 3T^2 + 2aT + b.
  if (p == 2) {
    tau = mod_pos(b, p);  // derivative is T^2 + b, root sqrt(b) = b in F_2
  } else if (p == 3) {
    // derivative is 2aT + b with a nonzero mod 3 (else triple, handled above)
    if (divides(a, p)) throw Error("degenerate cubic at p = 3");
    tau = mod_pos(-b * inv_mod(mod_pos(2 * a, p), p), p);
  } else {
    Int d = mod_pos(a * a - 3 * b, p);
    Int* rt = nullptr;
    Int r;
    if (!mpz_legendre(d.get_mpz_t(), p.get_mpz_t())) {
      r = 0;
      rt = &r;
    } else if (mpz_legendre(d.get_mpz_t(), p.get_mpz_t()) == 1) {
      // Tonelli: p odd, small enough that a simple search is also fine,
      // but use exponentiation for p = 3 mod 4 and fall back otherwise.
      if (mod_pos(p, 4) == 3) {
        Int ex = (p + 1) / 4;
        mpz_powm(r.get_mpz_t(), d.get_mpz_t(), ex.get_mpz_t(), p.get_mpz_t());
        rt = &r;
      } else {
        for (Int y = 0; y < p; ++y)
          if (divides(y * y - d, p)) {
            r = y;
            rt = &r;
            break;
          }
      }
    }
    if (rt == nullptr) throw Error("double root not in F_p");
    Int inv6 = inv_mod(Int(6) % p, p);
    Int t1 = mod_pos((-2 * a + 2 * r) * inv6, p);
    Int t2 = mod_pos((-2 * a - 2 * r) * inv6, p);
    auto is_root = [&](const Int& t) {
      return divides(t * t * t + a * t * t + b * t + c, p);
    };
    if (is_root(t1))
      tau = t1;
    else if (is_root(t2))
      tau = t2;
    else
      throw Error("no double root found");
  }
  if (!divides(tau * tau * tau + a * tau * tau + b * tau + c, p))
    throw Error("double root candidate is not a root");
  root_out = tau;
  return CubicShape::double_root;
}

}  // namespace

std::string ReductionData::kodaira_str() const {
  std::ostringstream os;
  switch (family) {
    case KodairaFamily::I0: return "I0";
    case KodairaFamily::In: os << "I" << index; return os.str();
    case KodairaFamily::II: return "II";
    case KodairaFamily::III: return "III";
    case KodairaFamily::IV: return "IV";
    case KodairaFamily::I0star: return "I0*";
    case KodairaFamily::Instar: os << "I" << index << "*"; return os.str();
    case KodairaFamily::IVstar: return "IV*";
    case KodairaFamily::IIIstar: return "III*";
    case KodairaFamily::IIstar: return "II*";
  }
  throw Error("unreachable");
}

ReductionData reduction_at(const CurveQ& e0, const Int& p) {
  if (p < 2 || !is_probable_prime(p)) throw Error("reduction_at: bad prime");
  CurveQ e = e0;
  ReductionData rd;
  rd.p = p;

  for (;;) {  // restarts only when the model is non-minimal at p
    Int disc = e.discriminant();
    if (disc == 0) throw Error("singular curve");
    long n = valuation(disc, p);
    rd.v_disc = n;
    if (n == 0) {
      rd.family = KodairaFamily::I0;
      rd.index = 0;
      rd.f = 0;
      return rd;
    }
    if (!divides(e.c4(), p)) {
      // Nodal reduction.  The node is split exactly when its tangent
      // slopes are rational, i.e. when -c6 is a local square.
      rd.family = KodairaFamily::In;
      rd.index = n;
      rd.f = 1;
      Int mc6 = -e.c6();
      if (p == 2)
        rd.split = (mod_pos(mc6, 8) == 1);
      else
        rd.split = is_square_mod(mod_pos(mc6, p), p);
      return rd;
    }

    e = move_singular_point(e, p);
    Int p2 = p * p, p3 = p2 * p, p4 = p3 * p;
    if (!divides(e.a6, p2)) {
      rd.family = KodairaFamily::II;
      rd.f = n;
      return rd;
    }
    if (!divides(e.b8(), p3)) {
      rd.family = KodairaFamily::III;
      rd.f = n - 1;
      return rd;
    }
    if (!divides(e.b6(), p3)) {
      rd.family = KodairaFamily::IV;
      rd.f = n - 2;
      return rd;
    }

    e = normalise_for_cubic(e, p);
    Int root;
    CubicShape shape = cubic_shape(divexact(e.a2, p), divexact(e.a4, p2),
                                   divexact(e.a6, p3), p, root);
    if (shape == CubicShape::separable) {
      rd.family = KodairaFamily::I0star;
      rd.index = 0;
      rd.f = n - 4;
      return rd;
    }

    if (shape == CubicShape::double_root) {
      e = transform_rst(e, p * root, 0, 0);
      // Now v(a2) = 1 and the quotients below stay integral as the two
      // quadratics are alternately recentred at their repeated roots.
      long ix = 2, iy = 2;
      Int mx = p2, my = p2;
      for (;;) {
        Int c1 = divexact(e.a3, my);
        Int d1 = divexact(e.a6, mx * my);
        bool ydist = p == 2 ? !divides(c1, 2) : !divides(c1 * c1 + 4 * d1, p);
        if (ydist) break;
        Int y1 = p == 2 ? mod_pos(d1, 2)
                        : mod_pos(-c1 * inv_mod(Int(2), p), p);
        e = transform_rst(e, 0, 0, my * y1);
        my *= p;
        ++iy;
        Int lead = divexact(e.a2, p);
        Int b1 = divexact(e.a4, p * mx);
        Int e1 = divexact(e.a6, mx * my);
        bool xdist = p == 2 ? !divides(b1, 2)
                            : !divides(b1 * b1 - 4 * lead * e1, p);
        if (xdist) break;
        Int x1 = p == 2 ? mod_pos(e1 * lead, 2)
                        : mod_pos(-b1 * inv_mod(mod_pos(2 * lead, p), p), p);
        e = transform_rst(e, mx * x1, 0, 0);
        mx *= p;
        ++ix;
      }
      rd.family = KodairaFamily::Instar;
      rd.index = ix + iy - 3;
      rd.f = n - 4 - rd.index;
      return rd;
    }

    // Triple root: recentre and look at the quadratic in Y.
    e = transform_rst(e, p * root, 0, 0);
    Int c1 = divexact(e.a3, p2);
    Int d1 = divexact(e.a6, p4);
    bool ydist = p == 2 ? !divides(c1, 2) : !divides(c1 * c1 + 4 * d1, p);
    if (ydist) {
      rd.family = KodairaFamily::IVstar;
      rd.f = n - 6;
      return rd;
    }
    Int y1 =
        p == 2 ? mod_pos(d1, 2) : mod_pos(-c1 * inv_mod(Int(2), p), p);
    e = transform_rst(e, 0, 0, p2 * y1);
    if (!divides(e.a4, p4)) {
      rd.family = KodairaFamily::IIIstar;
      rd.f = n - 7;
      return rd;
    }
    if (!divides(e.a6, p4 * p2)) {
      rd.family = KodairaFamily::IIstar;
      rd.f = n - 8;
      return rd;
    }
    // Non-minimal at p: shrink and start over.
    e = CurveQ(divexact(e.a1, p), divexact(e.a2, p2), divexact(e.a3, p3),
               divexact(e.a4, p4), divexact(e.a6, p4 * p2));
  }
}

std::map<Int, ReductionData> reduction_data(const CurveQ& e) {
  CurveQ m = minimal_model(e);
  std::map<Int, ReductionData> out;
  for (const auto& [p, k] : factorize(m.discriminant()))
    out.emplace(p, reduction_at(m, p));
  return out;
}

Int conductor(const CurveQ& e) {
  Int n = 1;
  for (const auto& [p, rd] : reduction_data(e)) n *= pow_int(p, rd.f);
  return n;
}

}  // namespace towerforge
