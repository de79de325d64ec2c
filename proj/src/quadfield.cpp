#include "towerforge/quadfield.hpp"

#include <cassert>
#include <sstream>

#include "towerforge/modarith.hpp"

namespace towerforge {

QuadField QuadField::make(const Int& m) {
  if (m == 0 || m == 1) throw Error("quadfield: m must not be 0 or 1");
  if (!is_squarefree(m)) throw Error("quadfield: m must be squarefree");
  QuadField k;
  k.m = m;
  if (mod_pos(m, 4) == 1) {
    // omega = (1 + sqrt(m))/2, x^2 - x - (m-1)/4.
    k.t = 1;
    k.n = divexact(m - 1, 4);
    k.disc = m;
  } else {
    // omega = sqrt(m), x^2 - m.
    k.t = 0;
    k.n = m;
    k.disc = 4 * m;
  }
  return k;
}

QElt qadd(const QElt& a, const QElt& b) { return {a.x + b.x, a.y + b.y}; }
QElt qsub(const QElt& a, const QElt& b) { return {a.x - b.x, a.y - b.y}; }

QElt qmul(const QuadField& k, const QElt& a, const QElt& b) {
  // (x1 + y1 w)(x2 + y2 w) with w^2 = t w + n.
  Int yy = a.y * b.y;
  return {a.x * b.x + k.n * yy, a.x * b.y + a.y * b.x + k.t * yy};
}

QElt qconj(const QuadField& k, const QElt& a) {
  // conj(w) = t - w.
  return {a.x + k.t * a.y, -a.y};
}

Int qnorm(const QuadField& k, const QElt& a) {
  return a.x * a.x + k.t * a.x * a.y - k.n * a.y * a.y;
}

Int qtrace(const QuadField& k, const QElt& a) { return 2 * a.x + k.t * a.y; }

bool qeq(const QElt& a, const QElt& b) { return a.x == b.x && a.y == b.y; }

std::string qstr(const QuadField& k, const QElt& a) {
  std::ostringstream os;
  os << a.x.get_str();
  if (a.y != 0) {
    os << (a.y < 0 ? " - " : " + ") << Int(abs(a.y)).get_str()
       << (k.t == 0 ? "*sqrt(" : "*(1+sqrt(") << k.m.get_str()
       << (k.t == 0 ? ")" : "))/2");
  }
  return os.str();
}

void sqrtm_coords(const QuadField& k, const QElt& a, Int& num_a, Int& num_b,
                  Int& den) {
  if (k.t == 0) {
    num_a = a.x;
    num_b = a.y;
    den = 1;
  } else {
    // x + y(1+sqrt m)/2 = (2x + y)/2 + (y/2) sqrt m.
    num_a = 2 * a.x + a.y;
    num_b = a.y;
    den = 2;
  }
}

SplitType splitting_type(const QuadField& k, const Int& p) {
  int kr = kronecker(k.disc, p);
  if (kr == 1) return SplitType::split;
  if (kr == -1) return SplitType::inert;
  return SplitType::ramified;
}

namespace {

// min poly of omega at r.
Int minpoly_at(const QuadField& k, const Int& r) {
  return r * r - k.t * r - k.n;
}

// Root of x^2 - t x - n modulo an odd prime p with nonzero derivative,
// i.e. the split case.  Returns one of the two roots.
Int split_root_mod_p(const QuadField& k, const Int& p) {
  assert(p > 2);
  if (!p.fits_ulong_p()) throw Error("quadfield: split prime too large");
  uint64_t pu = p.get_ui();
  uint64_t d = mod_pos(k.t * k.t + 4 * k.n, p).get_ui();
  auto s = sqrt_mod_p(d, pu);
  if (!s) throw Error("quadfield: split prime without square root of disc");
  // r = (t + sqrt(disc)) / 2; t is 0 or 1.
  uint64_t tt = k.t.get_ui();
  uint64_t r = mulmod((tt + *s) % pu, invmod(2 % pu, pu), pu);
  return Int(r);
}

// Hensel-lift the simple root r0 of x^2 - t x - n from mod p to mod p^prec.
// Requires f'(r0) = 2 r0 - t invertible mod p; for p = 2 this forces t = 1.
Int hensel_root(const QuadField& k, const Int& p, Int r0, long prec) {
  if (p == 2) assert(k.t == 1);
  Int pk = p;
  long have = 1;
  while (have < prec) {
    have = std::min(2 * have, prec);
    Int target = int_pow(p, have);
    Int fr = mod_pos(minpoly_at(k, r0), target);
    Int dr = mod_pos(2 * r0 - k.t, target);
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), dr.get_mpz_t(), target.get_mpz_t()) == 0)
      throw Error("quadfield: hensel derivative not invertible");
    r0 = mod_pos(r0 - fr * inv, target);
    pk = target;
  }
  Int check = mod_pos(minpoly_at(k, r0), pk);
  if (check != 0) throw Error("quadfield: hensel lift failed");
  return r0;
}

}  // namespace

std::vector<PrimeSlot> primes_above(const QuadField& k, const Int& p) {
  std::vector<PrimeSlot> out;
  SplitType st = splitting_type(k, p);
  if (st == SplitType::inert) {
    out.push_back({p, st, Int(-1), 1, 2});
    return out;
  }
  if (st == SplitType::ramified) {
    Int r;
    if (p == 2) {
      // t = 0 here (odd disc would be unramified at 2): root of x^2 - m.
      r = mod_pos(k.m, 2);
    } else if (k.t == 0) {
      // p | m, double root 0; v_p(f(0)) = v_p(m) = 1 by squarefreeness.
      r = 0;
    } else {
      // Double root (p+1)/2 of x^2 - x - n; f((p+1)/2) = (p^2 - m)/4 has
      // p-valuation exactly 1.
      r = divexact(p + 1, 2);
    }
    if (p > 2 && valuation(minpoly_at(k, r), p) != 1)
      throw Error("quadfield: ramified uniformizer degenerate");
    out.push_back({p, st, r, 2, 1});
    return out;
  }
  Int r = (p == 2) ? Int(0) : split_root_mod_p(k, p);
  if (p == 2 && mod_pos(minpoly_at(k, r), 2) != 0) r = 1;
  Int r2 = mod_pos(k.t - r, p);
  if (r2 == r) throw Error("quadfield: split root collision");
  out.push_back({p, st, r, 1, 1});
  out.push_back({p, st, r2, 1, 1});
  return out;
}

long ideal_valuation(const QuadField& k, const PrimeSlot& pr, const QElt& b) {
  if (b.x == 0 && b.y == 0) throw Error("quadfield: valuation of zero");
  const Int& p = pr.p;
  if (pr.type == SplitType::inert) {
    if (b.x == 0) return valuation(b.y, p);
    if (b.y == 0) return valuation(b.x, p);
    return std::min(valuation(b.x, p), valuation(b.y, p));
  }
  if (pr.type == SplitType::ramified) return valuation(qnorm(k, b), p);
  // Split: embed into Z_p via the lifted root; the valuation is capped by
  // v_p(norm) so the precision below cannot truncate it.
  long cap = valuation(qnorm(k, b), p);
  long prec = cap + 2;
  Int rhat = hensel_root(k, p, pr.r, prec);
  Int image = mod_pos(b.x + b.y * rhat, int_pow(p, prec));
  if (image == 0) throw Error("quadfield: split valuation overflow");
  return valuation(image, p);
}

namespace {

// u^e in F_p[x]/(x^2 - t x - n), u a unit; returns pair (c0, c1).
std::pair<Int, Int> fp2_pow(const QuadField& k, const Int& p, std::pair<Int, Int> u,
                            Int e) {
  std::pair<Int, Int> acc{1, 0};
  auto mul = [&](const std::pair<Int, Int>& a, const std::pair<Int, Int>& b) {
    Int yy = a.second * b.second;
    return std::pair<Int, Int>{mod_pos(a.first * b.first + k.n * yy, p),
                               mod_pos(a.first * b.second + a.second * b.first +
                                           k.t * yy,
                                       p)};
  };
  while (e > 0) {
    if (mod_pos(e, 2) == 1) acc = mul(acc, u);
    u = mul(u, u);
    e = e / 2;
  }
  return acc;
}

}  // namespace

bool local_square(const QuadField& k, const PrimeSlot& pr, const QElt& b0) {
  if (b0.x == 0 && b0.y == 0) throw Error("quadfield: local_square of zero");
  const Int& p = pr.p;
  long v = ideal_valuation(k, pr, b0);
  if (v % 2 != 0) return false;
  QElt b = b0;

  if (pr.type == SplitType::split) {
    // The completion is Q_p itself; read off the unit part of the image.
    long prec = v + 3;
    Int rhat = hensel_root(k, p, pr.r, prec);
    Int image = mod_pos(b.x + b.y * rhat, int_pow(p, prec));
    Int u = divexact(image, int_pow(p, v));
    if (p == 2) return mod_pos(u, 8) == 1;
    return kronecker(mod_pos(u, p), p) == 1;
  }

  if (pr.type == SplitType::inert) {
    Int pv = int_pow(p, v);
    b = {divexact(b.x, pv), divexact(b.y, pv)};
    if (p > 2) {
      // Unit square iff residue is a square in F_{p^2}.
      std::pair<Int, Int> u{mod_pos(b.x, p), mod_pos(b.y, p)};
      auto r = fp2_pow(k, p, u, divexact(p * p - 1, 2));
      return r.first == 1 && r.second == 0;
    }
    // p = 2, e = 1: square iff congruent to a square mod P^3; classes mod 8
    // surject onto classes mod P^3.
    for (long a = 0; a < 8; ++a)
      for (long c = 0; c < 8; ++c) {
        QElt z{Int(a), Int(c)};
        QElt d = qsub(qmul(k, z, z), b);
        if (d.x == 0 && d.y == 0) return true;
        long vx = (d.x == 0) ? 64 : valuation(d.x, 2);
        long vy = (d.y == 0) ? 64 : valuation(d.y, 2);
        if (std::min(vx, vy) >= 3) return true;
      }
    return false;
  }

  // Ramified.  P^2 = (p), so valuation >= 2 forces p | coordinates.
  long vv = v;
  while (vv >= 2) {
    b = {divexact(b.x, p), divexact(b.y, p)};
    vv -= 2;
  }
  if (p > 2) {
    Int u = mod_pos(b.x + b.y * pr.r, p);
    return kronecker(u, p) == 1;
  }
  // p = 2, e = 2: square iff a square mod P^5; v_P(8) = 6 >= 5, so pairs
  // mod 8 cover the classes.  v_P is read through the norm.
  for (long a = 0; a < 8; ++a)
    for (long c = 0; c < 8; ++c) {
      QElt z{Int(a), Int(c)};
      QElt d = qsub(qmul(k, z, z), b);
      if (d.x == 0 && d.y == 0) return true;
      if (valuation(qnorm(k, d), 2) >= 5) return true;
    }
  return false;
}

int embedding_sign(const QuadField& k, const QElt& b, bool plus_root) {
  if (k.m < 0) throw Error("quadfield: embedding_sign needs m > 0");
  // 2 * embedding = A + B sqrt(t^2 + 4n) with A = 2x + t y, B = +-y; the
  // radicand is 4m for integral omega and m in the half-integer case.
  Int a = 2 * b.x + k.t * b.y;
  Int bb = plus_root ? b.y : -b.y;
  int sa = sgn(a), sb = sgn(bb);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  Int lhs = a * a, rhs = (k.t * k.t + 4 * k.n) * bb * bb;
  if (lhs == rhs) throw Error("quadfield: embedding hit zero");
  return lhs > rhs ? sa : sb;
}

bool totally_positive(const QuadField& k, const QElt& b) {
  return embedding_sign(k, b, true) > 0 && embedding_sign(k, b, false) > 0;
}

QElt pell_unit(const QuadField& k) {
  if (k.m < 2) throw Error("quadfield: pell_unit needs real field");
  const Int& m = k.m;
  Int a0 = isqrt(m);
  if (a0 * a0 == m) throw Error("quadfield: m is a square");
  // Continued fraction of sqrt(m); convergents h/kq until h^2 - m k^2 = +-1.
  Int P = 0, Q = 1, a = a0;
  Int h_prev = 1, h = a0, kq_prev = 0, kq = 1;
  for (int steps = 0; steps < 100000; ++steps) {
    Int val = h * h - m * kq * kq;
    if (val == 1 || val == -1) {
      // sqrt(m)-coordinates (h, kq) -> omega-coordinates.
      if (k.t == 0) return {h, kq};
      return {h - kq, 2 * kq};
    }
    P = a * Q - P;
    Q = divexact(m - P * P, Q);
    a = (a0 + P) / Q;  // floor; both operands nonnegative
    Int h_new = a * h + h_prev;
    Int kq_new = a * kq + kq_prev;
    h_prev = h;
    kq_prev = kq;
    h = h_new;
    kq = kq_new;
  }
  throw Error("quadfield: pell expansion did not terminate");
}

}  // namespace towerforge
