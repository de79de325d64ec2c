#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "towerforge/curve.hpp"
#include "towerforge/primeclass.hpp"
#include "towerforge/quadfield.hpp"

namespace towerforge {

// A quadratic extension Q(sqrt(d))/Q with its verified local behavior.
// The ramified set is recomputed from d alone; split verification stores
// the checked places (0 stands for the real place).
struct QuadExtensionSpecQ {
  Int d = 1;
  bool trivial = false;
  std::vector<Int> ramified;        // odd p | d, plus 2 iff d != 1 mod 4
  std::vector<Int> split_verified;  // places confirmed split, 0 = infinity
  bool positive = false;
  // Symbol at each excluded place that carries no split demand, one record
  // per run: the search is allowed to land on either sign there.
  std::vector<std::pair<Int, int>> undetermined_symbols;
  std::vector<Int> extra_ramified_chosen;  // auxiliary primes the search added
  std::string note;
};

struct TwistConstraints {
  // Minimum number of odd prime divisors of d at which the curve has good
  // reduction.
  long min_good_odd_divisors = 0;
  bool allow_extra_auxiliary = true;  // may the search add auxiliary primes
  Int d_bound = 1000000;
  Int min_abs_d = 1;                  // scan start, for resuming enumeration
  bool require_two_ramified = false;  // force d != 1 mod 4
  // Extra per-prime behavior demands on Q(sqrt(d)), beyond the split
  // conditions the place set already imposes.  The relaxed primes of the
  // place set carry no condition by default; a caller may pick a branch
  // here (split or inert), and the choice is recorded with the result.
  std::vector<Int> demand_split;  // kronecker(d, q) = +1 required
  std::vector<Int> demand_inert;  // kronecker(d, q) = -1 required
};

struct TwistSearchResult {
  bool found = false;
  std::string status;  // "found", "trivial", "search-exhausted", "unimplemented"
  QuadExtensionSpecQ spec;
  Int bound = 0;
  uint64_t candidates_checked = 0;
};

// Builds the verified record for a concrete d: recomputes the ramified set
// from d, checks the split conditions demanded by sigma, and records the
// symbol at no-demand excluded places.  Throws if a demanded split fails.
QuadExtensionSpecQ quad_spec_from_d(const Int& d, const SigmaSet& sigma);

// Smallest-|d| squarefree twist parameter whose quadratic extension is
// ramified exactly at T plus search-chosen auxiliary good odd primes and
// split at every excluded place that demands it.  Ties broken toward d > 0.
TwistSearchResult find_twist_parameter(const CurveQ& e, unsigned ell,
                                       const std::vector<Int>& T,
                                       const SigmaSet& sigma,
                                       const TwistConstraints& extra);

struct PrimeFactorization {
  SplitType type = SplitType::inert;
  std::vector<PrimeSlot> slots;
  std::vector<std::string> ideal_strings;  // two-element form, for reports
};

PrimeFactorization factor_prime_in_quadratic(const QuadField& k, const Int& p);

// Squareness of beta in the completion at the slot; beta != 0 required.
bool local_square_test(const QuadField& k, const PrimeSlot& pr,
                       const QElt& beta);

// Requirements for the asymmetric-ramification element search over a real
// quadratic base.
struct BetaRequirements {
  // Rational prime, split in the base, carrying the witness pair; 0 demands
  // a spherically trivial element (square everywhere, totally positive).
  Int witness_p = 0;
  int ram_slot_index = 0;      // which prime over witness_p must ramify
  std::vector<Int> avoid_aux;  // rational primes barred from auxiliary use
  // Demand an auxiliary ramified prime besides the witness, so the extension
  // ramifies at good primes of two distinct residue characteristics.
  bool require_aux = false;
};

struct RelativeQuadSpec {
  QuadField base;
  QElt beta{0, 0};
  bool found = false;
  bool trivial = false;
  std::string status;  // "found", "trivial", "search-exhausted"
  Int witness_p = 0;
  PrimeSlot witness_ram, witness_unram;
  Int aux_prime = 0;  // auxiliary ramified rational prime picked by the scan
  // (place description, valuation) pairs for the ramification record.
  std::vector<std::pair<std::string, long>> valuations;
  std::vector<std::string> checks;
  Int bound = 0;
  uint64_t candidates_checked = 0;
};

// Searches beta = x + y*omega, |x|, |y| <= bound, with odd valuation at the
// chosen witness prime, even valuation and square unit part at its
// conjugate, square at every place over 2, totally positive, and odd
// valuations only at the witness prime and one auxiliary split prime.
RelativeQuadSpec find_relative_beta(const QuadField& k,
                                    const BetaRequirements& req,
                                    const Int& bound);

// For rational beta the valuations at the two primes over a split p agree;
// this is why the asymmetric witness needs a genuinely quadratic element.
bool conjugate_valuations_equal(const QuadField& k, const Int& p,
                                const QElt& beta);

nlohmann::ordered_json quad_spec_json(const QuadExtensionSpecQ& s);
nlohmann::ordered_json beta_spec_json(const RelativeQuadSpec& s);
QuadExtensionSpecQ quad_spec_from_json(const nlohmann::ordered_json& j);
RelativeQuadSpec beta_spec_from_json(const nlohmann::ordered_json& j);

}  // namespace towerforge
