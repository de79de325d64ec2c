#include "towerforge/membership.hpp"

#include <sstream>

#include "towerforge/countpoints.hpp"
#include "towerforge/localdata.hpp"
#include "towerforge/rationalpts.hpp"

namespace towerforge {

Mod2Result check_mod2_surjective(const CurveQ& e) {
  // Rational roots of the 2-division cubic 4x^3 + b2 x^2 + 2 b4 x + b6
  // correspond to integer roots of Y^3 - 3 c4 Y - 2 c6 (Y = 12x + b2).
  auto roots = depressed_cubic_integer_roots(-3 * e.c4(), -2 * e.c6());
  if (!roots.empty())
    return {false, "2-division cubic has a rational root"};
  Int d = e.discriminant();
  if (d > 0 && is_perfect_square(d))
    return {false, "discriminant is a rational square"};
  return {true, "2-division cubic irreducible and discriminant nonsquare"};
}

ModlVerdict check_modl_obstructions(const CurveQ& e, unsigned ell,
                                    uint64_t sample_bound) {
  if (ell == 2)
    throw Error("check_modl_obstructions: level 2 has an exact test");
  if (ell % 2 == 0 || !is_probable_prime(Int(ell)))
    throw Error("check_modl_obstructions: level must be an odd prime");
  ModlVerdict v;
  v.ell = ell;
  v.sample_bound = sample_bound;
  if (sample_bound < 3) {
    v.status = "insufficient-samples";
    v.description = "no good primes below the sample bound";
    return v;
  }
  CurveQ em = minimal_model(e);
  Int disc = em.discriminant();
  for (uint64_t p : primes_up_to(sample_bound)) {
    if (p == 2 || p == ell) continue;
    if (divides(disc, Int(p))) continue;  // bad reduction
    int64_t ap = trace_of_frobenius(em, p);
    ++v.samples;
    Int frob_disc = Int(ap) * Int(ap) - 4 * Int(p);
    if (kronecker(mod_pos(frob_disc, ell), Int(ell)) == -1) {
      std::ostringstream os;
      os << "a_p^2 - 4p is a nonsquare mod " << ell << " at p = " << p
         << "; incompatible with a reducible mod-" << ell << " image";
      v.status = "obstruction-free";
      v.description = os.str();
      return v;
    }
  }
  if (v.samples == 0) {
    v.status = "insufficient-samples";
    v.description = "no usable primes below the sample bound";
    return v;
  }
  std::ostringstream os;
  os << "all " << v.samples << " sampled Frobenius discriminants are squares "
     << "mod " << ell << "; consistent with a reducible image";
  v.status = "obstruction";
  v.description = os.str();
  return v;
}

MembershipReport check_S_membership(const CurveQ& e,
                                    const std::string& label) {
  MembershipReport rep;
  rep.label = label;
  rep.minimal = minimal_model(e);
  rep.disc_min = rep.minimal.discriminant();
  rep.disc_mod4_ok = mod_pos(rep.disc_min, 4) == 1;

  auto red = reduction_data(rep.minimal);
  for (const auto& [p, rd] : red) {
    if (p == 2 || !rd.multiplicative()) continue;
    if (rd.v_disc % 2 == 0) continue;
    if (!rep.odd_multiplicative_witness || p < *rep.odd_multiplicative_witness) {
      rep.odd_multiplicative_witness = p;
      rep.witness_ord = rd.v_disc;
    }
  }

  Mod2Result m2 = check_mod2_surjective(rep.minimal);
  rep.mod2_surjective = m2.surjective;
  rep.mod2_reason = m2.reason;

  bool modl_clean = true;
  for (unsigned ell : {3u, 5u, 7u, 11u, 13u, 17u, 19u}) {
    rep.modl.push_back(check_modl_obstructions(rep.minimal, ell, 1000));
    if (rep.modl.back().status != "obstruction-free") modl_clean = false;
  }

  rep.in_S = rep.disc_mod4_ok && rep.odd_multiplicative_witness.has_value() &&
             rep.mod2_surjective && modl_clean;
  return rep;
}

MembershipReport check_S0(const CurveQ& e, uint64_t height_bound,
                          double precision_target, const std::string& label) {
  MembershipReport rep = check_S_membership(e, label);
  rep.height_bound = height_bound;
  if (!rep.in_S) {
    rep.in_S0 = false;
    rep.notes = "structural membership fails; rank stage skipped";
    return rep;
  }
  rep.rank0_attempted = true;
  rep.rank0_cert = l_value_at_1(rep.minimal, precision_target, std::nullopt,
                                label);
  rep.rank0_certified = rep.rank0_cert->verdict == "rank0-certified";

  TorsionInfo tor = torsion_subgroup(rep.minimal);
  rep.torsion_order = tor.order;
  rep.torsion_trivial = tor.order == 1;

  long bound = height_bound > 1000000 ? 1000000 : long(height_bound);
  for (const PointQ& pt : point_search_q(rep.minimal, bound)) {
    if (point_order(rep.minimal, pt) == 0) ++rep.extra_points_found;
  }
  if (rep.extra_points_found > 0 && rep.rank0_certified) {
    rep.notes = "contradiction: certified rank 0 but non-torsion point found";
    throw Error(rep.notes);
  }

  rep.in_S0 = rep.in_S && rep.rank0_certified && rep.torsion_trivial;
  if (!rep.rank0_certified && rep.rank0_cert->verdict == "L-vanishes-consistent")
    rep.notes = "L-value consistent with vanishing; positive rank expected";
  return rep;
}

}  // namespace towerforge
