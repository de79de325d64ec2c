#include "towerforge/bigint.hpp"

namespace towerforge {

long valuation(const Int& n, const Int& p) {
  if (n == 0) throw Error("valuation of zero");
  Int m = abs(n);
  long v = 0;
  Int q, r;
  while (true) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return v;
    m = q;
    ++v;
  }
}

Int strip_power(const Int& n, const Int& p) {
  Int m = n;
  Int q, r;
  while (m != 0) {
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
    if (r != 0) break;
    m = q;
  }
  return m;
}

bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

Int isqrt(const Int& n) {
  if (n < 0) throw Error("isqrt of negative");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Int iroot(const Int& n, unsigned k) {
  if (n < 1) throw Error("iroot needs n >= 1");
  Int r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

Int int_pow(const Int& b, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool divides(const Int& n, const Int& d) {
  if (d == 0) return n == 0;
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

Int divexact(const Int& n, const Int& d) {
  if (!divides(n, d)) throw Error("divexact: not divisible");
  Int q;
  mpz_divexact(q.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int mod_sym(const Int& a, const Int& m) {
  Int r = mod_pos(a, m);
  if (2 * r > m) r -= m;
  return r;
}

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0;
}

namespace {

Int rho_brent(const Int& n) {
  // Brent's cycle-finding variant of Pollard rho. n odd composite, not a
  // prime power handled specially by caller retries.
  for (unsigned c = 1;; ++c) {
    Int x = 2, y = 2, d = 1, q = 1, ys = 0;
    long r = 1;
    const long m = 128;
    auto f = [&](const Int& v) { return mod_pos(v * v + c, n); };
    while (d == 1) {
      x = y;
      for (long i = 0; i < r; ++i) y = f(y);
      long k = 0;
      while (k < r && d == 1) {
        ys = y;
        long lim = std::min(m, r - k);
        for (long i = 0; i < lim; ++i) {
          y = f(y);
          q = mod_pos(q * abs(x - y), n);
        }
        mpz_gcd(d.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
      }
      r *= 2;
    }
    if (d == n) {
      d = 1;
      do {
        ys = f(ys);
        Int diff = abs(x - ys);
        mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (d == 1);
    }
    if (d != n) return d;
  }
}

void factor_into(Int n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += 1;
    return;
  }
  Int d = rho_brent(n);
  factor_into(d, out);
  factor_into(divexact(n, d), out);
}

}  // namespace

std::map<Int, unsigned> factorize(const Int& n) {
  if (n == 0) throw Error("factorize(0)");
  std::map<Int, unsigned> out;
  Int m = abs(n);
  if (m == 1) return out;
  static const std::vector<uint64_t> small = primes_up_to(100000);
  for (uint64_t p : small) {
    if (Int(p) * Int(p) > m) break;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
      out[Int(p)] += 1;
      mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
    }
    if (m == 1) return out;
  }
  if (m > 1) factor_into(m, out);
  return out;
}

bool is_squarefree(const Int& n) {
  if (n == 0) return false;
  for (const auto& [p, e] : factorize(n))
    if (e > 1) return false;
  return true;
}

int kronecker(const Int& a, const Int& n) {
  return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

std::vector<uint64_t> primes_up_to(uint64_t bound) {
  std::vector<uint64_t> out;
  if (bound < 2) return out;
  std::vector<bool> comp(bound + 1, false);
  for (uint64_t i = 2; i <= bound; ++i) {
    if (!comp[i]) {
      out.push_back(i);
      for (uint64_t j = i * i; j <= bound; j += i) comp[j] = true;
    }
  }
  return out;
}

std::string to_str(const Int& n) { return n.get_str(); }

Int int_from_str(const std::string& s) {
  if (s.empty()) throw Error("empty integer string");
  size_t pos = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (pos == s.size()) throw Error("bad integer string: " + s);
  for (size_t i = pos; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') throw Error("bad integer string: " + s);
  return Int(s);
}

std::optional<Rat> rat_sqrt(const Rat& r) {
  if (r < 0) return std::nullopt;
  Rat c = r;
  c.canonicalize();
  const Int num = c.get_num(), den = c.get_den();
  if (!is_perfect_square(num) || !is_perfect_square(den)) return std::nullopt;
  return Rat(isqrt(num), isqrt(den));
}

}  // namespace towerforge
