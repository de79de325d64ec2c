#include "towerforge/primeclass.hpp"

#include <algorithm>

#include "towerforge/countpoints.hpp"
#include "towerforge/localdata.hpp"

namespace towerforge {

bool SigmaSet::contains(const Int& p) const {
  return std::find(finite.begin(), finite.end(), p) != finite.end();
}

SigmaSet build_sigma(const CurveQ& e, unsigned ell) {
  if (e.is_singular()) throw Error("build_sigma: singular curve");
  SigmaSet s;
  s.ell = ell;
  s.finite = {Int(2), Int(ell)};
  auto red = reduction_data(e);
  for (const auto& [p, rd] : red) {
    if (rd.good()) continue;
    s.finite.push_back(p);
    if (ell == 2 && p != 2 && rd.multiplicative() && rd.v_disc % 2 != 0)
      s.sigma0.push_back(p);
  }
  std::sort(s.finite.begin(), s.finite.end());
  s.finite.erase(std::unique(s.finite.begin(), s.finite.end()),
                 s.finite.end());
  std::sort(s.sigma0.begin(), s.sigma0.end());
  // Over the rationals the residual conditions on the place set hold for
  // free: the class group is trivial, and with infinity and 2 present the
  // units {+-1} inject into the product of local unit groups.
  s.justification =
      "base field Q: trivial class group; unit sign detected at the real "
      "place, so no extra places are needed";
  return s;
}

const char* prime_class_name(PrimeClassKind k) {
  switch (k) {
    case PrimeClassKind::excluded_sigma: return "excluded-sigma";
    case PrimeClassKind::excluded_congruence: return "excluded-congruence";
    case PrimeClassKind::p0: return "class-0";
    case PrimeClassKind::p1: return "class-1";
    case PrimeClassKind::p2: return "class-2";
  }
  return "?";
}

PrimeClass classify_prime(const CurveQ& e, unsigned ell, const Int& p) {
  if (!is_probable_prime(p)) throw Error("classify_prime: p must be prime");
  SigmaSet s = build_sigma(e, ell);
  PrimeClass out{p, PrimeClassKind::excluded_sigma, -1};
  if (s.contains(p)) return out;
  if (ell > 2 && mod_pos(p, ell) != 1) {
    out.kind = PrimeClassKind::excluded_congruence;
    return out;
  }
  if (!p.fits_ulong_p()) throw Error("classify_prime: p too large");
  uint64_t pu = p.get_ui();
  int dim = (ell == 2) ? two_torsion_dim_mod_p(e, pu)
                       : ell_torsion_dim_mod_p(e, pu, ell);
  out.local_dim = dim;
  out.kind = dim == 0   ? PrimeClassKind::p0
             : dim == 1 ? PrimeClassKind::p1
                        : PrimeClassKind::p2;
  return out;
}

PrimePartitionReport scan_partition(const CurveQ& e, unsigned ell,
                                    uint64_t bound, const std::string& label,
                                    bool keep_per_prime) {
  if (bound < 100) throw Error("scan_partition: bound must be >= 100");
  PrimePartitionReport rep;
  rep.label = label;
  rep.ell = ell;
  rep.bound = bound;
  SigmaSet s = build_sigma(e, ell);
  auto primes = primes_up_to(bound);
  for (uint64_t pu : primes) {
    Int p(pu);
    int dim = -1;
    if (s.contains(p)) {
      ++rep.n_excluded_sigma;
    } else if (ell > 2 && pu % ell != 1) {
      ++rep.n_excluded_congruence;
    } else {
      dim = (ell == 2) ? two_torsion_dim_mod_p(e, pu)
                       : ell_torsion_dim_mod_p(e, pu, ell);
      if (dim == 0) ++rep.n0;
      else if (dim == 1) ++rep.n1;
      else ++rep.n2;
    }
    if (keep_per_prime) rep.per_prime.emplace_back(pu, dim);
  }
  rep.scanned = primes.size();
  uint64_t classified = rep.n0 + rep.n1 + rep.n2;
  if (classified > 0) {
    rep.frac0 = double(rep.n0) / double(classified);
    rep.frac1 = double(rep.n1) / double(classified);
    rep.frac2 = double(rep.n2) / double(classified);
  }
  return rep;
}

}  // namespace towerforge
