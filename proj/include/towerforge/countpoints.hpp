#pragma once

#include <cstdint>

#include "towerforge/curve.hpp"

namespace towerforge {

bool good_at(const CurveQ& e, uint64_t p);

// #E(F_p) (point at infinity included).  p must be a prime of good
// reduction.  Exhaustive or character-sum counting below a fixed cutoff,
// baby-step giant-step order finding above it.
uint64_t count_points(const CurveQ& e, uint64_t p);

// Trace of Frobenius p + 1 - #E(F_p).
int64_t trace_of_frobenius(const CurveQ& e, uint64_t p);

// dim_{F_2} E(F_p)[2] for odd good p: number of roots mod p of the
// 2-division cubic 4x^3 + b2 x^2 + 2 b4 x + b6, folded 0/1/3 -> 0/1/2.
int two_torsion_dim_mod_p(const CurveQ& e, uint64_t p);

// dim_{F_l} E(F_p)[l] for l in {2, 3, 5}, p an odd good prime, p != l.
int ell_torsion_dim_mod_p(const CurveQ& e, uint64_t p, unsigned ell);

}  // namespace towerforge
