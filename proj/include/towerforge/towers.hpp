#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "towerforge/analytic.hpp"
#include "towerforge/bigint.hpp"
#include "towerforge/curve.hpp"
#include "towerforge/extbuilder.hpp"
#include "towerforge/quadfield.hpp"

namespace towerforge {

// Degree plan for an iterated extension: layer i has relative degree
// prefix[i-1].  The rule names how the sequence continues past the prefix.
struct EllSchedule {
  std::vector<unsigned> prefix;
  std::string rule = "round-robin-all-primes";
};

// One completed step of the construction.  Layer 1 sits over the rationals;
// higher layers are relative quadratic steps over the previous field.
struct LayerCertificate {
  int index = 0;
  unsigned ell = 2;
  std::string kind;      // quadratic-from-rational | quadratic-relative
  std::string evidence;  // rank0-certified | point-search-only

  // Layer 1: field adjoins sqrt(m) with m = 2d, d odd squarefree positive.
  Int d = 0;
  Int m = 0;
  long wild_ord2 = 0;  // valuation of the field discriminant at 2
  QuadExtensionSpecQ ext;
  LValueCertificate rank_cert;
  std::vector<Int> good_ramified;  // ramified primes that are good for E
  std::string torsion_note;
  Int search_bound = 0;
  long candidates_checked = 0;
  long skipped = 0;  // admissible candidates passed over for branching

  // Layer 2: relative element beta generating the step over the layer-1
  // field, with its witness data and the quartic absolute polynomial.
  RelativeQuadSpec beta_spec;
  std::vector<Int> abs_poly;  // ascending degree

  struct PointScan {
    long height_bound = 0;
    uint64_t candidates = 0;
    uint64_t base_points = 0;        // rational points of the ambient model
    uint64_t base_field_points = 0;  // proper quadratic points (must stay 0)
    uint64_t new_points = 0;         // points seen only in the top layer
    std::vector<std::string> notes;
  };
  PointScan scan;

  std::map<std::string, std::string> params;
};

struct TowerCertificate {
  int format_version = 1;
  std::string tool_version;
  std::string label;
  CurveQ curve{0, 0, 0, 0, 0};
  EllSchedule schedule;
  std::vector<LayerCertificate> layers;
  std::string verdict;
  std::map<std::string, std::string> meta;
};

struct Layer1Config {
  Int d_bound = 10000;
  double precision = 1e-6;
  uint64_t seed = 0;       // skips seed % 8 admissible candidates
  int max_candidates = 64; // rank-certification attempts before giving up
};

struct Layer2Config {
  Int p_bound = 500;
  Int beta_bound = 400;
  long height_bound = 20;
  uint64_t seed = 0;
};

// Builds the first layer over a curve already known to lie in the good
// class: finds an admissible twist parameter d, certifies the companion
// twist has rank zero, and records the criterion forcing the point group
// to be unchanged in the new field.
LayerCertificate build_layer1(const CurveQ& e, const std::string& label,
                              const Layer1Config& cfg);

// Proposes a second layer over the layer-1 field.  The output is evidence
// only: the witness pair and local conditions are verified exactly, but
// the unchanged-points claim rests on a bounded point search.
LayerCertificate build_layer2_candidate(const CurveQ& e,
                                        const LayerCertificate& layer1,
                                        const Layer2Config& cfg);

// Bounded search for points of the ambient curve over the degree-4 layer,
// restricted to x-coordinates in the quadratic subfield; this sees both
// halves of the new-point space.  Model: y^2 = x^3 - 27 c4 x - 54 c6,
// x = (a + b sqrt(m))/c with |a|, |b| <= h and 1 <= c <= h.
LayerCertificate::PointScan scan_relative_points(const CurveQ& e,
                                                 const Int& m,
                                                 const QElt& beta,
                                                 long height_bound);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string label;
  std::string verdict;  // valid-prefix | invalid
  std::vector<CheckResult> checks;
  bool valid() const { return verdict == "valid-prefix"; }
};

// Recomputes every stored field of the certificate from the curve and the
// recorded search outcomes; any edit trips a named check.
VerifyReport verify_tower_prefix(const CurveQ& e, const TowerCertificate& cert);

struct DescentReport {
  bool found = false;
  std::string detail;
  long tried = 0;
  std::string witness;  // rational class exhibiting the collapse, if found
};

// Tests whether the relative layer secretly descends to a rational class:
// the step field would then be Galois over the rationals of the wrong
// shape.  Only layer_index == 2 is supported.
DescentReport check_no_galois_descent(const CurveQ& e,
                                      const TowerCertificate& cert,
                                      int layer_index);

struct ScheduleReport {
  bool big = false;
  std::string reason;
};

// A schedule is big when every prime occurs infinitely often in the full
// sequence; decided from the continuation rule, not the finite prefix.
ScheduleReport check_big_schedule(const EllSchedule& s);

// prefix-certified when every layer carries a rank certification,
// prefix-evidence as soon as any layer rests on search evidence alone.
std::string tower_verdict(const std::vector<LayerCertificate>& layers);

nlohmann::ordered_json layer_certificate_json(const LayerCertificate& c);
LayerCertificate layer_certificate_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json tower_certificate_json(const TowerCertificate& c);
TowerCertificate tower_certificate_from_json(const nlohmann::ordered_json& j);

}  // namespace towerforge
