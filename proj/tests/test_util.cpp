#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "towerforge/bigint.hpp"
#include "towerforge/modarith.hpp"
#include "towerforge/sha256.hpp"

using namespace towerforge;

TEST_CASE("integer valuation and stripping") {
  CHECK(valuation(Int(720), Int(2)) == 4);
  CHECK(valuation(Int(720), Int(3)) == 2);
  CHECK(valuation(Int(720), Int(5)) == 1);
  CHECK(valuation(Int(-8), Int(2)) == 3);
  CHECK(strip_power(Int(720), Int(2)) == 45);
  CHECK(strip_power(Int(-67), Int(67)) == -1);
}

TEST_CASE("square detection and integer roots") {
  CHECK(is_perfect_square(Int(0)));
  CHECK(is_perfect_square(Int(1)));
  CHECK(is_perfect_square(Int(144)));
  CHECK(!is_perfect_square(Int(-4)));
  CHECK(!is_perfect_square(Int(2)));
  CHECK(isqrt(Int(143)) == 11);
  CHECK(isqrt(Int(144)) == 12);
  CHECK(iroot(Int(1000), 3) == 10);
  CHECK(iroot(Int(999), 3) == 9);
  CHECK(int_pow(Int(3), 5) == 243);
}

TEST_CASE("symmetric and positive residues") {
  CHECK(mod_pos(Int(-1), Int(8)) == 7);
  CHECK(mod_pos(Int(17), Int(8)) == 1);
  CHECK(mod_sym(Int(7), Int(8)) == -1);
  CHECK(mod_sym(Int(3), Int(8)) == 3);
  CHECK(divides(Int(84), Int(7)));
  CHECK(!divides(Int(85), Int(7)));
  CHECK(divexact(Int(84), Int(7)) == 12);
}

TEST_CASE("factorization of moderate integers") {
  auto f = factorize(Int(720));
  REQUIRE(f.size() == 3);
  CHECK(f[Int(2)] == 4);
  CHECK(f[Int(3)] == 2);
  CHECK(f[Int(5)] == 1);
  // negative input factors the absolute value
  auto g = factorize(Int(-67));
  REQUIRE(g.size() == 1);
  CHECK(g[Int(67)] == 1);
  CHECK(is_squarefree(Int(105)));
  CHECK(!is_squarefree(Int(12)));
  CHECK(is_squarefree(Int(1)));
}

TEST_CASE("kronecker symbol anchors") {
  // classical second-supplement values: (2/p) by p mod 8
  CHECK(kronecker(Int(2), Int(7)) == 1);
  CHECK(kronecker(Int(2), Int(17)) == 1);
  CHECK(kronecker(Int(2), Int(3)) == -1);
  CHECK(kronecker(Int(2), Int(67)) == -1);  // 67 = 3 mod 8
  // values the sign-branch analysis of the layer search rests on
  CHECK(kronecker(Int(33), Int(67)) == 1);
  CHECK(kronecker(Int(57), Int(67)) == -1);
  CHECK(kronecker(Int(105), Int(67)) == -1);
  CHECK(kronecker(Int(65), Int(67)) == 1);
  // ramified and trivial cases
  CHECK(kronecker(Int(67), Int(67)) == 0);
  CHECK(kronecker(Int(1), Int(999)) == 1);
}

TEST_CASE("kronecker is completely multiplicative in the top argument") {
  std::vector<Int> ns = {Int(3), Int(5), Int(67), Int(105)};
  for (const Int& n : ns)
    for (long a = -20; a <= 20; ++a)
      for (long b = -20; b <= 20; ++b)
        CHECK(kronecker(Int(a) * Int(b), n) ==
              kronecker(Int(a), n) * kronecker(Int(b), n));
}

TEST_CASE("prime sieve") {
  auto ps = primes_up_to(100);
  CHECK(ps.size() == 25);
  CHECK(ps.front() == 2);
  CHECK(ps.back() == 97);
}

TEST_CASE("string round trips") {
  CHECK(to_str(Int(-67)) == "-67");
  CHECK(int_from_str("4936898752") == Int("4936898752"));
  CHECK(to_str(int_from_str("-123456789012345678901234567890")) ==
        "-123456789012345678901234567890");
}

TEST_CASE("rational square roots") {
  auto r = rat_sqrt(Rat(49, 81));
  REQUIRE(r.has_value());
  CHECK(*r == Rat(7, 9));
  CHECK(!rat_sqrt(Rat(2, 1)).has_value());
  CHECK(!rat_sqrt(Rat(-1, 4)).has_value());
  CHECK(rat_sqrt(Rat(0, 1)).has_value());
}

TEST_CASE("64-bit modular arithmetic") {
  const uint64_t p = 1000000007ull;
  CHECK(mulmod(p - 1, p - 1, p) == 1);  // (-1)^2
  CHECK(powmod(2, p - 1, p) == 1);      // Fermat
  CHECK(mulmod(invmod(12345, p), 12345, p) == 1);
  for (uint64_t a = 1; a < 50; ++a)
    CHECK(jacobi64(int64_t(a), 67) == kronecker(Int(long(a)), Int(67)));
}

TEST_CASE("square roots modulo p") {
  // both congruence classes of p mod 4, plus p = 2 mod 3 territory
  for (uint64_t p : {5ull, 7ull, 13ull, 67ull, 1000000007ull}) {
    for (uint64_t a = 1; a < 30; ++a) {
      uint64_t sq = mulmod(a, a, p);
      auto r = sqrt_mod_p(sq, p);
      REQUIRE(r.has_value());
      CHECK(mulmod(*r, *r, p) == sq);
    }
  }
  CHECK(!sqrt_mod_p(3, 7).has_value());  // 3 is not a square mod 7
}

TEST_CASE("64-bit primality") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(67));
  CHECK(is_prime_u64(2147483647ull));  // 2^31 - 1
  CHECK(!is_prime_u64(1));
  CHECK(!is_prime_u64(561));   // Carmichael
  CHECK(!is_prime_u64(4033));  // base-2 pseudoprime
  CHECK(!is_prime_u64(uint64_t(87178291199ull) * 3));
}

TEST_CASE("polynomial arithmetic over a prime field") {
  // x^3 - x has all of F_5 ∩ {0, ±1} as roots
  PolyP f = {0, 4, 0, 1};  // x^3 + 4x = x^3 - x mod 5
  CHECK(poly_count_roots(f, 5) == 3);
  // x^2 + 1 is irreducible mod 7 (7 = 3 mod 4)
  CHECK(poly_count_roots({1, 0, 1}, 7) == 0);
  // gcd(x^2 - 1, x^2 - 2x + 1) = x - 1 over F_11
  PolyP g = poly_gcd({10, 0, 1}, {1, 9, 1}, 11);
  REQUIRE(g.size() == 2);
  CHECK(mulmod(g[0], invmod(g[1], 11), 11) == 10);  // monic form x + 10
  // Frobenius power consistency: x^p = x mod (x^2 - x) for any p
  PolyP xp = poly_xpow_mod(13, {0, 12, 1}, 13);
  REQUIRE(xp.size() == 2);
  CHECK(xp[0] == 0);
  CHECK(xp[1] == 1);
  CHECK(poly_eval({3, 2, 1}, 4, 7) == (3 + 8 + 16) % 7);
}

TEST_CASE("sha-256 reference vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  // 56 bytes straddles the padding boundary
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}
