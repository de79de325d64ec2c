#include "towerforge/modarith.hpp"

#include <algorithm>

namespace towerforge {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
  uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
  // extended euclid on signed 128-bit accumulators
  __int128 t = 0, nt = 1;
  uint64_t r = m, nr = a % m;
  while (nr != 0) {
    uint64_t q = r / nr;
    __int128 tmp = t - (__int128)q * nt;
    t = nt;
    nt = tmp;
    uint64_t tr = r - q * nr;
    r = nr;
    nr = tr;
  }
  __int128 res = t < 0 ? t + m : t;
  return (uint64_t)res;
}

int jacobi64(int64_t a, uint64_t n) {
  // n odd > 0
  uint64_t ua;
  int s = 1;
  int64_t am = a % (int64_t)n;
  if (am < 0) am += n;
  ua = (uint64_t)am;
  uint64_t un = n;
  while (ua != 0) {
    while ((ua & 1) == 0) {
      ua >>= 1;
      uint64_t r = un & 7;
      if (r == 3 || r == 5) s = -s;
    }
    std::swap(ua, un);
    if ((ua & 3) == 3 && (un & 3) == 3) s = -s;
    ua %= un;
  }
  return un == 1 ? s : 0;
}

std::optional<uint64_t> sqrt_mod_p(uint64_t a, uint64_t p) {
  a %= p;
  if (p == 2) return a;
  if (a == 0) return 0;
  if (jacobi64((int64_t)a, p) != 1) return std::nullopt;
  if ((p & 3) == 3) return powmod(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  uint64_t q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  uint64_t z = 2;
  while (jacobi64((int64_t)z, p) != -1) ++z;
  uint64_t m = s, c = powmod(z, q, p), t = powmod(a, q, p),
           r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    uint64_t i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    uint64_t b = c;
    for (uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    uint64_t x = powmod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool comp = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        comp = false;
        break;
      }
    }
    if (comp) return false;
  }
  return true;
}

PolyP poly_trim(PolyP f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
  return f;
}

PolyP poly_mul(const PolyP& f, const PolyP& g, uint64_t p) {
  if (f.empty() || g.empty()) return {};
  PolyP h(f.size() + g.size() - 1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size(); ++j)
      h[i + j] = (h[i + j] + (__uint128_t)f[i] * g[j]) % p;
  }
  return poly_trim(std::move(h));
}

PolyP poly_mod(PolyP f, const PolyP& g, uint64_t p) {
  f = poly_trim(std::move(f));
  PolyP gg = poly_trim(g);
  if (gg.empty()) return f;
  uint64_t lead_inv = invmod(gg.back(), p);
  while (f.size() >= gg.size()) {
    uint64_t c = mulmod(f.back(), lead_inv, p);
    size_t off = f.size() - gg.size();
    for (size_t i = 0; i < gg.size(); ++i) {
      uint64_t sub = mulmod(c, gg[i], p);
      f[off + i] = (f[off + i] + p - sub) % p;
    }
    f = poly_trim(std::move(f));
    if (f.empty()) break;
  }
  return f;
}

PolyP poly_gcd(PolyP f, PolyP g, uint64_t p) {
  f = poly_trim(std::move(f));
  g = poly_trim(std::move(g));
  while (!g.empty()) {
    PolyP r = poly_mod(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  if (!f.empty() && f.back() != 1) {
    uint64_t inv = invmod(f.back(), p);
    for (auto& c : f) c = mulmod(c, inv, p);
  }
  return f;
}

PolyP poly_xpow_mod(uint64_t e, const PolyP& g, uint64_t p) {
  PolyP base = poly_mod(PolyP{0, 1}, g, p);
  PolyP acc{1};
  while (e) {
    if (e & 1) acc = poly_mod(poly_mul(acc, base, p), g, p);
    base = poly_mod(poly_mul(base, base, p), g, p);
    e >>= 1;
  }
  return acc;
}

int poly_count_roots(const PolyP& f, uint64_t p) {
  PolyP ff = poly_trim(f);
  if (ff.empty()) return (int)p;  // zero polynomial
  if (ff.size() == 1) return 0;
  // Remove repeated factors: gcd with derivative, then count distinct via
  // gcd(x^p - x, f).
  PolyP d(ff.size() - 1);
  for (size_t i = 1; i < ff.size(); ++i) d[i - 1] = (ff[i] * (uint64_t)(i % p)) % p;
  PolyP sq = poly_gcd(ff, poly_trim(std::move(d)), p);
  // distinct-root count works on the radical-ish part too; gcd(x^p-x, f)
  // already collects each distinct root once.
  PolyP xp = poly_xpow_mod(p, ff, p);
  // xp - x
  PolyP diff = xp;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = (diff[1] + p - 1) % p;
  diff = poly_trim(std::move(diff));
  PolyP g = poly_gcd(diff, ff, p);
  (void)sq;
  return g.empty() ? 0 : (int)(g.size() - 1);
}

uint64_t poly_eval(const PolyP& f, uint64_t x, uint64_t p) {
  uint64_t r = 0;
  for (size_t i = f.size(); i-- > 0;) r = (mulmod(r, x, p) + f[i]) % p;
  return r;
}

}  // namespace towerforge
