#pragma once

#include <optional>
#include <string>
#include <vector>

#include "towerforge/analytic.hpp"
#include "towerforge/curve.hpp"

namespace towerforge {

struct Mod2Result {
  bool surjective = false;
  std::string reason;
};

// Exact: the mod-2 image is all of GL2(F_2) iff the 2-division cubic is
// irreducible over Q and the discriminant is not a rational square.
Mod2Result check_mod2_surjective(const CurveQ& e);

struct ModlVerdict {
  unsigned ell = 0;
  // "obstruction-free" | "obstruction" | "insufficient-samples"
  std::string status;
  std::string description;
  uint64_t sample_bound = 0;
  uint64_t samples = 0;
};

// Frobenius-trace screening at an odd level: every sampled a_p with
// a_p^2 - 4p a square mod ell is what a reducible image would produce; a
// single nonsquare witnesses irreducibility.  Evidence, not proof.
ModlVerdict check_modl_obstructions(const CurveQ& e, unsigned ell,
                                    uint64_t sample_bound);

struct MembershipReport {
  std::string label;
  CurveQ minimal{0, 0, 0, 0, 0};
  Int disc_min = 0;
  bool disc_mod4_ok = false;
  std::optional<Int> odd_multiplicative_witness;
  long witness_ord = 0;
  bool mod2_surjective = false;
  std::string mod2_reason;
  std::vector<ModlVerdict> modl;
  bool in_S = false;

  // Filled by the rank-0/torsion stage.
  bool rank0_attempted = false;
  std::optional<LValueCertificate> rank0_cert;
  bool rank0_certified = false;
  bool torsion_trivial = false;
  long torsion_order = 0;
  uint64_t height_bound = 0;
  uint64_t extra_points_found = 0;  // non-torsion points within the bound
  bool in_S0 = false;
  std::string notes;
};

// The three structural requirements on the minimal model plus odd-level
// screening (levels 3..19, bound 1000).
MembershipReport check_S_membership(const CurveQ& e,
                                    const std::string& label = "");

// Extends check_S_membership with the rank-0 certificate, the torsion
// computation, and a point-search corroboration.
MembershipReport check_S0(const CurveQ& e, uint64_t height_bound,
                          double precision_target = 1e-6,
                          const std::string& label = "");

}  // namespace towerforge
