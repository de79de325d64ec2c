#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "towerforge/curve.hpp"

namespace towerforge {

// The excluded place set for descent bookkeeping: always contains 2, the
// working level, and every bad prime; infinity is implicit.  sigma0 marks
// odd multiplicative primes whose minimal discriminant valuation is odd
// (only populated at level 2).
struct SigmaSet {
  unsigned ell = 2;
  std::vector<Int> finite;
  std::vector<Int> sigma0;
  std::string justification;
  bool contains(const Int& p) const;
};

SigmaSet build_sigma(const CurveQ& e, unsigned ell);

enum class PrimeClassKind {
  excluded_sigma,
  excluded_congruence,  // p not 1 mod ell; only at odd levels
  p0,
  p1,
  p2,
};

struct PrimeClass {
  Int prime;
  PrimeClassKind kind;
  int local_dim = -1;  // dim of the mod-ell torsion over F_p when classified
};

const char* prime_class_name(PrimeClassKind k);

PrimeClass classify_prime(const CurveQ& e, unsigned ell, const Int& p);

struct PrimePartitionReport {
  std::string label;
  unsigned ell = 2;
  uint64_t bound = 0;
  uint64_t scanned = 0;
  uint64_t n_excluded_sigma = 0, n_excluded_congruence = 0;
  uint64_t n0 = 0, n1 = 0, n2 = 0;
  // Fractions among the classified (non-excluded) primes.
  double frac0 = 0, frac1 = 0, frac2 = 0;
  std::vector<std::pair<uint64_t, int>> per_prime;  // filled on request
};

PrimePartitionReport scan_partition(const CurveQ& e, unsigned ell,
                                    uint64_t bound,
                                    const std::string& label = "",
                                    bool keep_per_prime = false);

}  // namespace towerforge
