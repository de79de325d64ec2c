#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "towerforge/curve.hpp"

namespace towerforge {

// Double with an accumulated absolute error bound; every operation adds its
// own rounding contribution, so .v is always within .e of the exact value.
struct Tracked {
  double v = 0, e = 0;
};

Tracked t_exact(double integer_value);  // value exactly representable
Tracked t_ratio(long long num, long long den);
Tracked t_add(const Tracked& a, const Tracked& b);
Tracked t_sub(const Tracked& a, const Tracked& b);
Tracked t_mul(const Tracked& a, const Tracked& b);
Tracked t_div(const Tracked& a, const Tracked& b);
Tracked t_exp_neg(const Tracked& x);  // exp(-x), x >= 0

// a_1..a_n of the L-series on the minimal model; index i holds a_i.
// |a_n| <= 2n is enforced.
std::vector<long long> an_coefficients(const CurveQ& e, uint64_t n_max);

struct LValueCertificate {
  std::string label;
  Int conductor;
  Int twist_d = 1;
  uint64_t terms = 0;
  // Independent evaluation abscissas; each with its reciprocal.
  double t1 = 0, t2 = 0;
  double s_t1 = 0, s_inv_t1 = 0, s_t2 = 0, s_inv_t2 = 0;
  double sum_round_err = 0;
  int w = 0;  // extracted root number; 0 when unresolved
  double w_residual = 0;
  double l_value = 0;
  double tail_bound = 0;
  double total_error = 0;  // tail + rounding for the L estimate
  double cross_check_gap = 0;
  std::string verdict;  // rank0-certified | L-vanishes-consistent | indeterminate
  std::string note;
  std::string basis_note;
};

// Truncated L(1) with rigorous tail bounds.  terms empty = choose from the
// precision target; terms = 0 gives an (honestly) indeterminate certificate.
LValueCertificate l_value_at_1(const CurveQ& e, double precision_target,
                               std::optional<uint64_t> terms = std::nullopt,
                               const std::string& label = "");

LValueCertificate certify_twist_rank_zero(const CurveQ& e, const Int& d,
                                          double precision_target,
                                          const std::string& label = "");

// Round-trippable certificate records.  Doubles are stored via
// shortest-exact formatting so reruns are byte identical.
nlohmann::ordered_json lvalue_certificate_json(const LValueCertificate& c);
LValueCertificate lvalue_certificate_from_json(const nlohmann::ordered_json& j);

}  // namespace towerforge
