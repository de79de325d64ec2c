#pragma once
// Arbitrary-precision integer/rational helpers on top of GMP.
#include <gmpxx.h>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace towerforge {

using Int = mpz_class;
using Rat = mpq_class;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// p-adic valuation of n != 0; returns 0 for units. v(0) is an error.
long valuation(const Int& n, const Int& p);

// n / p^valuation(n, p)
Int strip_power(const Int& n, const Int& p);

bool is_perfect_square(const Int& n);
// floor square root, n >= 0
Int isqrt(const Int& n);
// largest u with u^k <= n (n >= 1)
Int iroot(const Int& n, unsigned k);
Int int_pow(const Int& b, unsigned long e);
// true when d | n (numerator first, matching divexact).
bool divides(const Int& n, const Int& d);
Int divexact(const Int& n, const Int& d);

// Symmetric representative of a mod m in (-m/2, m/2].
Int mod_sym(const Int& a, const Int& m);
// Representative in [0, m).
Int mod_pos(const Int& a, const Int& m);

bool is_probable_prime(const Int& n);

// Factorization of |n| as prime -> exponent (n != 0). Trial division followed
// by Brent-Pollard rho; intended for desk-scale inputs.
std::map<Int, unsigned> factorize(const Int& n);

// Squarefree check / squarefree kernel via factorization.
bool is_squarefree(const Int& n);

// Kronecker symbol (a|n).
int kronecker(const Int& a, const Int& n);

// All primes <= bound, bound < 2^31.
std::vector<uint64_t> primes_up_to(uint64_t bound);

std::string to_str(const Int& n);
Int int_from_str(const std::string& s);

// Exact rational square root if it exists.
std::optional<Rat> rat_sqrt(const Rat& r);

}  // namespace towerforge
