#pragma once

#include <map>
#include <string>

#include "towerforge/curve.hpp"

namespace towerforge {

enum class KodairaFamily {
  I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar
};

// Local reduction data of a curve at a prime, as produced by the standard
// step-by-step reduction-type procedure on an integral model.  The model is
// re-minimalised at p internally if needed, so v_disc is the valuation of
// the local minimal discriminant.
struct ReductionData {
  Int p;
  long v_disc = 0;
  KodairaFamily family = KodairaFamily::I0;
  long index = 0;  // n for In, m for Im*
  long f = 0;      // conductor exponent, wild part included
  bool split = false;  // meaningful only for multiplicative reduction

  bool good() const { return family == KodairaFamily::I0; }
  bool multiplicative() const { return family == KodairaFamily::In; }
  bool additive() const { return !good() && !multiplicative(); }
  std::string kodaira_str() const;
};

ReductionData reduction_at(const CurveQ& e, const Int& p);

// Reduction data at every prime dividing the minimal discriminant.
std::map<Int, ReductionData> reduction_data(const CurveQ& e);

// Product of p^f over bad primes of the minimal model.
Int conductor(const CurveQ& e);

}  // namespace towerforge
