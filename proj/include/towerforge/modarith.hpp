#pragma once
// 64-bit modular arithmetic and small-degree polynomial arithmetic mod p.
#include <cstdint>
#include <optional>
#include <vector>

namespace towerforge {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
// Inverse of a mod m, gcd(a, m) = 1.
uint64_t invmod(uint64_t a, uint64_t m);
// Jacobi symbol (a|n) for odd n > 0; a reduced internally.
int jacobi64(int64_t a, uint64_t n);
// Square root of a mod odd prime p when it exists.
std::optional<uint64_t> sqrt_mod_p(uint64_t a, uint64_t p);

bool is_prime_u64(uint64_t n);

// Dense polynomial over F_p, coefficient i of x^i, normalized (no leading 0).
using PolyP = std::vector<uint64_t>;

PolyP poly_trim(PolyP f);
PolyP poly_mul(const PolyP& f, const PolyP& g, uint64_t p);
PolyP poly_mod(PolyP f, const PolyP& g, uint64_t p);  // g monic-izable
PolyP poly_gcd(PolyP f, PolyP g, uint64_t p);
// x^e mod g over F_p.
PolyP poly_xpow_mod(uint64_t e, const PolyP& g, uint64_t p);
// Number of distinct roots of f in F_p (deg f small, p prime).
int poly_count_roots(const PolyP& f, uint64_t p);
// f(x) mod p
uint64_t poly_eval(const PolyP& f, uint64_t x, uint64_t p);

}  // namespace towerforge
