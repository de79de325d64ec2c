#pragma once

#include <vector>

#include "towerforge/bigint.hpp"

namespace towerforge {

// Real or imaginary quadratic field Q(sqrt(m)), m squarefree, m != 0, 1.
// Ring of integers Z[omega] with omega = sqrt(m) or (1 + sqrt(m))/2;
// omega has minimal polynomial x^2 - t x - n.
struct QuadField {
  Int m, t, n, disc;
  static QuadField make(const Int& m);
};

// x + y * omega with integer coordinates.
struct QElt {
  Int x, y;
};

QElt qadd(const QElt& a, const QElt& b);
QElt qsub(const QElt& a, const QElt& b);
QElt qmul(const QuadField& k, const QElt& a, const QElt& b);
QElt qconj(const QuadField& k, const QElt& a);
Int qnorm(const QuadField& k, const QElt& a);
Int qtrace(const QuadField& k, const QElt& a);
bool qeq(const QElt& a, const QElt& b);
std::string qstr(const QuadField& k, const QElt& a);

// Coordinates over the sqrt(m) basis: a + b sqrt(m) with half-integers
// allowed when omega = (1 + sqrt(m))/2; returns numerators over 2.
void sqrtm_coords(const QuadField& k, const QElt& a, Int& num_a, Int& num_b,
                  Int& den);

enum class SplitType { split, inert, ramified };

// Prime of Z[omega] over p, in two-element form (p, omega - r) when split
// or ramified; r < 0 marks the inert case (the ideal is just (p)).
struct PrimeSlot {
  Int p;
  SplitType type = SplitType::inert;
  Int r = -1;
  int e = 1, f = 1;
};

SplitType splitting_type(const QuadField& k, const Int& p);
// One slot for inert/ramified p, two (conjugate) slots for split p.
std::vector<PrimeSlot> primes_above(const QuadField& k, const Int& p);

long ideal_valuation(const QuadField& k, const PrimeSlot& pr, const QElt& b);

// Is b a square in the completion at pr?  b != 0.
bool local_square(const QuadField& k, const PrimeSlot& pr, const QElt& b);

// Exact sign of b under the embedding sending sqrt(m) to +sqrt(m) or
// -sqrt(m); m > 0 required.
int embedding_sign(const QuadField& k, const QElt& b, bool plus_root);
bool totally_positive(const QuadField& k, const QElt& b);

// Smallest unit > 1 with integer sqrt(m)-coordinates (the Pell solution);
// an odd power of the fundamental unit, hence a generator modulo squares.
QElt pell_unit(const QuadField& k);

}  // namespace towerforge
