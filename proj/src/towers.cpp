#include "towerforge/towers.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <set>
#include <utility>

#include "towerforge/countpoints.hpp"
#include "towerforge/localdata.hpp"
#include "towerforge/membership.hpp"
#include "towerforge/primeclass.hpp"
#include "towerforge/rationalpts.hpp"

namespace towerforge {

namespace {

std::string dbl_str(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double dbl_from_str(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

std::string param(const std::map<std::string, std::string>& m,
                  const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw Error("missing search parameter: " + key);
  return it->second;
}

Int igcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Integer pairs x + y sqrt(m); the point scan never needs half-integer
// coordinates, so this stays independent of the maximal-order elements.
struct RootPair {
  Int x, y;
};

RootPair rp_mul(const Int& m, const RootPair& a, const RootPair& b) {
  return {a.x * b.x + m * a.y * b.y, a.x * b.y + a.y * b.x};
}

const char* kLayer1Note =
    "twist rank zero plus trivial rational 2-torsion pins the free part; "
    "ramification at good primes of two residue characteristics pins the "
    "torsion, so the point group is unchanged in the quadratic layer";

struct Layer1Search {
  bool found = false;
  bool any_admissible = false;
  Int d = 0;
  LValueCertificate cert;
  long skipped = 0;
  long candidates_checked = 0;
  int attempts = 0;
  int w_base = 0;          // measured sign for the base curve, 0 = unused
  std::string sign_rule = "off";  // branch demanded at the relaxed primes
};

// Walks admissible twist parameters in increasing order, skipping the
// first seed%8 for branching, and keeps the first one whose companion
// twist certifies as rank zero.  Deterministic, so the verifier replays it.
Layer1Search layer1_search(const CurveQ& e, const std::string& twist_label,
                           const Layer1Config& cfg) {
  CurveQ a = quadratic_twist(e, 2);
  SigmaSet sigma = build_sigma(a, 2);
  Layer1Search out;
  long to_skip = long(cfg.seed % 8);
  TwistConstraints want;
  want.min_good_odd_divisors = 2;
  want.allow_extra_auxiliary = true;
  want.d_bound = cfg.d_bound;
  want.min_abs_d = 1;

  // Aim the scan at parameters whose companion twist has sign +1.  With d
  // ramified only at odd good primes and the base conductor n odd,
  // sign(companion) = sign(base) * kronecker(8d, n); the split conditions
  // already pin kronecker(d, q) at every odd bad prime except the relaxed
  // ones, so picking a branch there fixes the sign of the whole scan.
  // The branch is recorded and replayed, never assumed.
  Int n = conductor(e);
  if (n % 2 != 0) {
    LValueCertificate base =
        l_value_at_1(e, cfg.precision, std::nullopt, "sign-probe");
    if ((base.w == 1 || base.w == -1) && base.w_residual < 1e-3) {
      out.w_base = base.w;
      int rhs = base.w * kronecker(Int(8), n);
      std::vector<Int> relaxed = sigma.sigma0;
      if (relaxed.empty()) {
        out.sign_rule = rhs == 1 ? "none-needed" : "unreachable";
      } else {
        std::string rule;
        for (size_t i = 0; i < relaxed.size(); ++i) {
          bool inert = (rhs == -1 && i == 0);
          (inert ? want.demand_inert : want.demand_split)
              .push_back(relaxed[i]);
          if (!rule.empty()) rule += ",";
          rule += to_str(relaxed[i]) + (inert ? ":inert" : ":split");
        }
        out.sign_rule = rule;
      }
    }
  }
  while (true) {
    TwistSearchResult r = find_twist_parameter(a, 2, {}, sigma, want);
    out.candidates_checked += r.candidates_checked;
    if (!r.found) break;
    out.any_admissible = true;
    if (out.skipped < to_skip) {
      ++out.skipped;
      want.min_abs_d = r.spec.d + 1;
      continue;
    }
    if (out.attempts >= cfg.max_candidates) break;
    ++out.attempts;
    LValueCertificate c =
        certify_twist_rank_zero(e, 2 * r.spec.d, cfg.precision, twist_label);
    if (c.verdict == "rank0-certified") {
      out.found = true;
      out.d = r.spec.d;
      out.cert = c;
      return out;
    }
    want.min_abs_d = r.spec.d + 1;
  }
  return out;
}

// Ramified primes of the layer-1 field that are good for e: all odd
// divisors of d qualify by admissibility, plus 2 when the conductor is odd.
std::vector<Int> good_ramified_for(const CurveQ& e, const Int& d) {
  Int n = conductor(e);
  std::vector<Int> out;
  if (n % 2 != 0) out.push_back(2);
  for (const auto& [p, ex] : factorize(d)) {
    (void)ex;
    if (n % p != 0) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string tower_verdict(const std::vector<LayerCertificate>& layers) {
  for (const auto& l : layers)
    if (l.evidence != "rank0-certified") return "prefix-evidence";
  return "prefix-certified";
}

LayerCertificate build_layer1(const CurveQ& e, const std::string& label,
                              const Layer1Config& cfg) {
  MembershipReport mem = check_S_membership(e, label);
  if (!mem.in_S) throw Error("layer 1 requires a curve in the good class");
  std::string twist_label = label.empty() ? "twist" : label + "-twist";
  Layer1Search s = layer1_search(e, twist_label, cfg);
  if (!s.found) {
    if (!s.any_admissible)
      throw Error("no admissible twist parameter below the bound");
    throw Error(
        "rank certification indeterminate for every admissible candidate");
  }
  LayerCertificate c;
  c.index = 1;
  c.ell = 2;
  c.kind = "quadratic-from-rational";
  c.evidence = "rank0-certified";
  c.d = s.d;
  c.m = 2 * s.d;
  c.wild_ord2 = valuation(4 * c.m, 2);  // field discriminant is 4m here
  CurveQ a = quadratic_twist(e, 2);
  c.ext = quad_spec_from_d(s.d, build_sigma(a, 2));
  c.rank_cert = s.cert;
  c.good_ramified = good_ramified_for(e, s.d);
  if (c.good_ramified.size() < 2)
    throw Error("fewer than two good ramified primes; point group not pinned");
  c.torsion_note = kLayer1Note;
  c.search_bound = cfg.d_bound;
  c.candidates_checked = s.candidates_checked;
  c.skipped = s.skipped;
  c.params["d_bound"] = to_str(cfg.d_bound);
  c.params["precision"] = dbl_str(cfg.precision);
  c.params["seed"] = std::to_string(cfg.seed);
  c.params["max_candidates"] = std::to_string(cfg.max_candidates);
  c.params["w_base"] = std::to_string(s.w_base);
  c.params["sign_rule"] = s.sign_rule;
  std::string classes;
  for (const auto& [q, ex] : factorize(s.d)) {
    (void)ex;
    if (!classes.empty()) classes += ",";
    classes += to_str(q) + ":" + prime_class_name(classify_prime(a, 2, q).kind);
  }
  c.params["divisor_classes"] = classes;
  return c;
}

LayerCertificate build_layer2_candidate(const CurveQ& e,
                                        const LayerCertificate& layer1,
                                        const Layer2Config& cfg) {
  TowerCertificate probe;
  probe.label = "layer1-recheck";
  probe.curve = e;
  probe.schedule.prefix = {2, 2};
  probe.layers = {layer1};
  probe.verdict = tower_verdict(probe.layers);
  VerifyReport vr = verify_tower_prefix(e, probe);
  if (!vr.valid()) {
    std::string why = "unknown";
    for (const auto& ck : vr.checks)
      if (!ck.pass) {
        why = ck.name + ": " + ck.detail;
        break;
      }
    throw Error("first layer fails verification; " + why);
  }

  QuadField k = QuadField::make(layer1.m);
  Int ne = conductor(e);
  std::vector<Int> avoid;
  for (const auto& [q, ex] : factorize(ne)) {
    (void)ex;
    avoid.push_back(q);
  }
  long to_skip = long(cfg.seed % 4);
  long skipped = 0;
  for (uint64_t pu : primes_up_to(cfg.p_bound.get_ui())) {
    if (pu == 2) continue;
    Int p = Int(static_cast<unsigned long>(pu));
    if (ne % p == 0) continue;
    if (layer1.m % p == 0) continue;
    if (splitting_type(k, p) != SplitType::split) continue;
    if (two_torsion_dim_mod_p(e, pu) != 0) continue;
    if (skipped < to_skip) {
      ++skipped;
      continue;
    }
    BetaRequirements req;
    req.witness_p = p;
    req.ram_slot_index = 0;
    req.avoid_aux = avoid;
    req.require_aux = true;
    RelativeQuadSpec r = find_relative_beta(k, req, cfg.beta_bound);
    if (!r.found) continue;

    LayerCertificate c;
    c.index = 2;
    c.ell = 2;
    c.kind = "quadratic-relative";
    c.evidence = "point-search-only";
    c.m = layer1.m;
    c.beta_spec = r;
    c.abs_poly = {qnorm(k, r.beta), 0, -qtrace(k, r.beta), 0, 1};
    c.scan = scan_relative_points(e, layer1.m, r.beta, cfg.height_bound);
    if (c.scan.base_field_points != 0)
      throw Error(
          "point search found a quadratic point over the base; the first "
          "layer's conclusion is violated");
    c.params["p_bound"] = to_str(cfg.p_bound);
    c.params["beta_bound"] = to_str(cfg.beta_bound);
    c.params["height_bound"] = std::to_string(cfg.height_bound);
    c.params["seed"] = std::to_string(cfg.seed);
    c.params["witness_skipped"] = std::to_string(skipped);
    return c;
  }
  throw Error(
      "no qualifying witness prime below the bound produced a relative "
      "generator");
}

LayerCertificate::PointScan scan_relative_points(const CurveQ& e, const Int& m,
                                                 const QElt& beta,
                                                 long height_bound) {
  QuadField k = QuadField::make(m);
  if (k.t != 0)
    throw Error("point scan expects a base generated by the square root");
  if (height_bound < 1) throw Error("height bound must be positive");
  LayerCertificate::PointScan out;
  out.height_bound = height_bound;
  Int A = -27 * e.c4(), B = -54 * e.c6();
  RootPair bt{beta.x, beta.y};  // omega is sqrt(m) when t = 0
  Int h = height_bound;
  for (Int aa = -h; aa <= h; ++aa)
    for (Int bb = -h; bb <= h; ++bb)
      for (Int cc = 1; cc <= h; ++cc) {
        if (igcd(igcd(aa, bb), cc) != 1) continue;
        ++out.candidates;
        RootPair n{aa, bb};
        RootPair n3 = rp_mul(m, rp_mul(m, n, n), n);
        Int c2 = cc * cc, c3 = c2 * cc;
        // c^3 f(n/c) = n^3 + A c^2 n + B c^3; then c^4 f = (that) * c, so
        // testing squares of u * c tests squares of f itself.
        RootPair u{n3.x + A * c2 * aa + B * c3, n3.y + A * c2 * bb};
        RootPair s{u.x * cc, u.y * cc};
        if (s.x == 0 && s.y == 0) {
          if (bb == 0) {
            ++out.base_points;
          } else {
            ++out.base_field_points;
            out.notes.push_back("quadratic two-torsion at x = (" + to_str(aa) +
                                " + " + to_str(bb) + " sqrt(m))/" +
                                to_str(cc));
          }
          continue;
        }
        QuadElem v{Rat(s.x), Rat(s.y)}, root;
        if (quad_sqrt(m, v, root)) {
          if (bb == 0 && root.b == 0) {
            ++out.base_points;
          } else {
            ++out.base_field_points;
            out.notes.push_back("quadratic point at x = (" + to_str(aa) +
                                " + " + to_str(bb) + " sqrt(m))/" +
                                to_str(cc));
          }
          continue;
        }
        RootPair sb = rp_mul(m, s, bt);
        QuadElem vb{Rat(sb.x), Rat(sb.y)};
        if (quad_sqrt(m, vb, root)) {
          ++out.new_points;
          out.notes.push_back("top-layer point at x = (" + to_str(aa) + " + " +
                              to_str(bb) + " sqrt(m))/" + to_str(cc));
        }
      }
  return out;
}

namespace {

using CheckFn = std::pair<bool, std::string>;

void guarded(VerifyReport& rep, const std::string& name,
             const std::function<CheckFn()>& fn) {
  CheckResult r;
  r.name = name;
  try {
    auto [ok, detail] = fn();
    r.pass = ok;
    r.detail = detail;
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = std::string("error: ") + ex.what();
  }
  rep.checks.push_back(std::move(r));
}

}  // namespace

VerifyReport verify_tower_prefix(const CurveQ& e,
                                 const TowerCertificate& cert) {
  VerifyReport rep;
  rep.label = cert.label;

  guarded(rep, "format", [&]() -> CheckFn {
    if (cert.format_version != 1)
      return {false, "unknown format version " +
                         std::to_string(cert.format_version)};
    return {true, "format version 1"};
  });

  guarded(rep, "curve-match", [&]() -> CheckFn {
    if (!(cert.curve == e))
      return {false, "certificate curve " + cert.curve.str() +
                         " differs from " + e.str()};
    return {true, "curve " + e.str()};
  });

  guarded(rep, "schedule-shape", [&]() -> CheckFn {
    if (cert.schedule.prefix.empty()) return {false, "empty degree schedule"};
    if (cert.layers.size() > cert.schedule.prefix.size())
      return {false, "more layers than scheduled degrees"};
    for (unsigned l : cert.schedule.prefix)
      if (!is_probable_prime(Int(l)))
        return {false, "schedule entry " + std::to_string(l) + " is not prime"};
    for (size_t i = 0; i < cert.layers.size(); ++i) {
      if (cert.layers[i].index != int(i) + 1)
        return {false, "layer " + std::to_string(i + 1) + " mislabeled"};
      if (cert.layers[i].ell != cert.schedule.prefix[i])
        return {false, "layer " + std::to_string(i + 1) +
                           " degree disagrees with the schedule"};
    }
    return {true, std::to_string(cert.layers.size()) + " layer(s) against a " +
                      std::to_string(cert.schedule.prefix.size()) +
                      "-entry schedule"};
  });

  guarded(rep, "verdict-consistent", [&]() -> CheckFn {
    std::string want = tower_verdict(cert.layers);
    if (cert.verdict != want)
      return {false, "stored verdict '" + cert.verdict + "', recomputed '" +
                         want + "'"};
    return {true, "verdict '" + want + "'"};
  });

  if (cert.layers.size() > 2) {
    rep.checks.push_back(
        {"layer-count", false, "layers beyond the second are not supported"});
  }

  if (!cert.layers.empty()) {
    const LayerCertificate& L = cert.layers[0];

    guarded(rep, "layer1-kind", [&]() -> CheckFn {
      if (L.index != 1 || L.ell != 2) return {false, "index or degree wrong"};
      if (L.kind != "quadratic-from-rational")
        return {false, "unexpected kind '" + L.kind + "'"};
      if (L.evidence != "rank0-certified")
        return {false, "unexpected evidence level '" + L.evidence + "'"};
      return {true, "quadratic layer with certified rank"};
    });

    guarded(rep, "layer1-base-class", [&]() -> CheckFn {
      MembershipReport mem = check_S_membership(e);
      if (!mem.in_S)
        return {false, "the curve fails the structural membership checks"};
      return {true, "curve lies in the good class"};
    });

    guarded(rep, "layer1-parameter", [&]() -> CheckFn {
      if (L.d <= 0) return {false, "parameter is not positive"};
      if (L.d % 2 == 0) return {false, "parameter is even"};
      if (!is_squarefree(L.d)) return {false, "parameter is not squarefree"};
      if (mod_pos(L.d, 8) != 1)
        return {false, "parameter is not 1 mod 8; the prime 2 would not split "
                       "in the companion field"};
      if (L.m != 2 * L.d) return {false, "field generator is not twice the "
                                         "parameter"};
      long w2 = valuation(4 * L.m, 2);
      if (L.wild_ord2 != w2)
        return {false, "stored dyadic discriminant valuation " +
                           std::to_string(L.wild_ord2) + ", recomputed " +
                           std::to_string(w2)};
      if (w2 < 2) return {false, "ramification at 2 is not wild"};
      return {true, "d = " + to_str(L.d) + ", field adjoins sqrt(" +
                        to_str(L.m) + "), dyadic valuation " +
                        std::to_string(w2)};
    });

    guarded(rep, "layer1-admissibility", [&]() -> CheckFn {
      CurveQ a = quadratic_twist(e, 2);
      QuadExtensionSpecQ spec = quad_spec_from_d(L.d, build_sigma(a, 2));
      if (quad_spec_json(spec).dump() != quad_spec_json(L.ext).dump())
        return {false, "stored splitting record disagrees with recomputation"};
      return {true, "splitting and ramification record reproduced"};
    });

    guarded(rep, "layer1-search-replay", [&]() -> CheckFn {
      Layer1Config cfg;
      cfg.d_bound = int_from_str(param(L.params, "d_bound"));
      cfg.precision = dbl_from_str(param(L.params, "precision"));
      cfg.seed = std::stoull(param(L.params, "seed"));
      cfg.max_candidates = std::stoi(param(L.params, "max_candidates"));
      if (cfg.d_bound != L.search_bound)
        return {false, "recorded bound disagrees with the search parameters"};
      Layer1Search s = layer1_search(e, L.rank_cert.label, cfg);
      if (!s.found) return {false, "replayed search finds no certified layer"};
      if (s.d != L.d)
        return {false, "replayed search chooses d = " + to_str(s.d) +
                           ", certificate stores " + to_str(L.d)};
      if (s.skipped != L.skipped)
        return {false, "branching skip count differs"};
      if (s.candidates_checked != L.candidates_checked)
        return {false, "scan effort counter differs"};
      if (lvalue_certificate_json(s.cert).dump() !=
          lvalue_certificate_json(L.rank_cert).dump())
        return {false, "rank certificate differs from replay"};
      if (L.rank_cert.verdict != "rank0-certified")
        return {false, "rank certificate is not a rank-zero certification"};
      if (L.rank_cert.twist_d != 2 * L.d)
        return {false, "rank certificate twists by the wrong parameter"};
      if (std::to_string(s.w_base) != param(L.params, "w_base") ||
          s.sign_rule != param(L.params, "sign_rule"))
        return {false, "sign-branch record differs from replay"};
      CurveQ a2 = quadratic_twist(e, 2);
      std::string classes;
      for (const auto& [q, ex] : factorize(s.d)) {
        (void)ex;
        if (!classes.empty()) classes += ",";
        classes +=
            to_str(q) + ":" + prime_class_name(classify_prime(a2, 2, q).kind);
      }
      if (classes != param(L.params, "divisor_classes"))
        return {false, "divisor class record differs from replay"};
      return {true, "search and rank certification replayed bit for bit"};
    });

    guarded(rep, "layer1-good-ramified", [&]() -> CheckFn {
      std::vector<Int> want = good_ramified_for(e, L.d);
      if (want != L.good_ramified)
        return {false, "stored good ramified list disagrees"};
      if (L.good_ramified.size() < 2)
        return {false, "fewer than two good ramified primes"};
      std::set<Int> chars(L.good_ramified.begin(), L.good_ramified.end());
      if (chars.size() < 2)
        return {false, "good ramified primes share a residue characteristic"};
      Int n = conductor(e);
      for (const Int& p : L.good_ramified) {
        if (n % p == 0)
          return {false, to_str(p) + " is not a good prime"};
        if (p != 2 && L.d % p != 0)
          return {false, to_str(p) + " does not ramify in the layer"};
      }
      return {true, std::to_string(L.good_ramified.size()) +
                        " good ramified primes of distinct characteristics"};
    });

    guarded(rep, "layer1-conclusion", [&]() -> CheckFn {
      if (L.torsion_note != kLayer1Note)
        return {false, "the unchanged-point-group argument was altered"};
      return {true, "argument note intact"};
    });
  }

  if (cert.layers.size() >= 2) {
    const LayerCertificate& L1 = cert.layers[0];
    const LayerCertificate& L2 = cert.layers[1];

    guarded(rep, "layer2-kind", [&]() -> CheckFn {
      if (L2.index != 2 || L2.ell != 2) return {false, "index or degree wrong"};
      if (L2.kind != "quadratic-relative")
        return {false, "unexpected kind '" + L2.kind + "'"};
      if (L2.evidence != "point-search-only")
        return {false, "unexpected evidence level '" + L2.evidence + "'"};
      return {true, "relative quadratic layer, search evidence only"};
    });

    guarded(rep, "layer2-base-field", [&]() -> CheckFn {
      if (L2.m != L1.m)
        return {false, "relative layer sits over a different field"};
      if (L2.beta_spec.base.m != L2.m)
        return {false, "generator record names a different base field"};
      QuadField k = QuadField::make(L2.m);
      if (k.t != L2.beta_spec.base.t || k.n != L2.beta_spec.base.n ||
          k.disc != L2.beta_spec.base.disc)
        return {false, "stored base ring data is inconsistent"};
      return {true, "base adjoins sqrt(" + to_str(L2.m) + ")"};
    });

    guarded(rep, "layer2-witness-admissible", [&]() -> CheckFn {
      const Int& p = L2.beta_spec.witness_p;
      if (p == 0) return {false, "no witness prime recorded"};
      if (p == 2 || !is_probable_prime(p)) return {false, "witness is not an "
                                                          "odd prime"};
      if (conductor(e) % p == 0) return {false, "witness is a bad prime"};
      if (L2.m % p == 0) return {false, "witness ramifies in the base"};
      QuadField k = QuadField::make(L2.m);
      if (splitting_type(k, p) != SplitType::split)
        return {false, "witness does not split in the base"};
      if (two_torsion_dim_mod_p(e, p.get_ui()) != 0)
        return {false, "two-torsion is visible at the witness"};
      const PrimeSlot& ram = L2.beta_spec.witness_ram;
      const PrimeSlot& un = L2.beta_spec.witness_unram;
      if (ram.p != p || un.p != p || ram.type != SplitType::split ||
          un.type != SplitType::split || ram.r == un.r)
        return {false, "stored slots are not the degree-1 conjugate pair"};
      return {true, "witness " + to_str(p) +
                        " splits with trivial visible two-torsion"};
    });

    guarded(rep, "layer2-beta-replay", [&]() -> CheckFn {
      QuadField k = QuadField::make(L2.m);
      auto slots = primes_above(k, L2.beta_spec.witness_p);
      int ram_idx = (slots[0].r == L2.beta_spec.witness_ram.r) ? 0 : 1;
      BetaRequirements req;
      req.witness_p = L2.beta_spec.witness_p;
      req.ram_slot_index = ram_idx;
      for (const auto& [q, ex] : factorize(conductor(e))) {
        (void)ex;
        req.avoid_aux.push_back(q);
      }
      req.require_aux = true;
      RelativeQuadSpec r = find_relative_beta(k, req, L2.beta_spec.bound);
      if (!r.found) return {false, "replayed generator search fails"};
      if (beta_spec_json(r).dump() != beta_spec_json(L2.beta_spec).dump())
        return {false, "stored generator record disagrees with replay"};
      return {true, "generator search replayed bit for bit"};
    });

    guarded(rep, "layer2-beta-local", [&]() -> CheckFn {
      QuadField k = QuadField::make(L2.m);
      const QElt& b = L2.beta_spec.beta;
      long vr = ideal_valuation(k, L2.beta_spec.witness_ram, b);
      if (vr != 1) return {false, "witness-slot valuation is not 1"};
      long vu = ideal_valuation(k, L2.beta_spec.witness_unram, b);
      if (vu != 0) return {false, "conjugate-slot valuation is not 0"};
      if (!local_square(k, L2.beta_spec.witness_unram, b))
        return {false, "generator is not a square at the conjugate slot"};
      for (const PrimeSlot& sl : primes_above(k, 2))
        if (!local_square(k, sl, b))
          return {false, "generator is not a square at a dyadic slot"};
      if (!totally_positive(k, b))
        return {false, "generator is not totally positive"};
      Int nb = qnorm(k, b);
      Int q = abs(nb) / L2.beta_spec.witness_p;
      if (L2.beta_spec.aux_prime == 0) {
        if (q != 1) return {false, "norm hides an unrecorded auxiliary prime"};
        return {false, "no auxiliary ramified prime; a second good residue "
                       "characteristic is required"};
      }
      if (q != L2.beta_spec.aux_prime)
        return {false, "auxiliary prime disagrees with the norm"};
      if (!is_probable_prime(q)) return {false, "auxiliary factor not prime"};
      if (conductor(e) % q == 0) return {false, "auxiliary prime is bad"};
      if (q == 2 || L2.m % q == 0 || q == L2.beta_spec.witness_p)
        return {false, "auxiliary prime collides with the base or witness"};
      if (splitting_type(k, q) != SplitType::split)
        return {false, "auxiliary prime does not split in the base"};
      return {true, "odd witness valuation, dyadic and conjugate squares, "
                    "totally positive, auxiliary prime " +
                        to_str(q)};
    });

    guarded(rep, "layer2-abs-poly", [&]() -> CheckFn {
      QuadField k = QuadField::make(L2.m);
      std::vector<Int> want = {qnorm(k, L2.beta_spec.beta), 0,
                               -qtrace(k, L2.beta_spec.beta), 0, 1};
      if (L2.abs_poly != want)
        return {false, "absolute polynomial does not match the generator"};
      unsigned long deg = 1;
      for (size_t i = 0; i < 2 && i < cert.schedule.prefix.size(); ++i)
        deg *= cert.schedule.prefix[i];
      if (L2.abs_poly.size() != deg + 1)
        return {false, "absolute degree disagrees with the schedule"};
      return {true, "monic quartic matches trace and norm"};
    });

    guarded(rep, "layer2-scan-replay", [&]() -> CheckFn {
      LayerCertificate::PointScan s = scan_relative_points(
          e, L2.m, L2.beta_spec.beta, L2.scan.height_bound);
      if (s.candidates != L2.scan.candidates)
        return {false, "scan candidate count differs"};
      if (s.base_points != L2.scan.base_points)
        return {false, "rational point count differs"};
      if (s.base_field_points != L2.scan.base_field_points)
        return {false, "quadratic point count differs"};
      if (s.new_points != L2.scan.new_points)
        return {false, "top-layer point count differs"};
      if (s.notes != L2.scan.notes) return {false, "scan notes differ"};
      if (L2.scan.base_field_points != 0)
        return {false, "scan saw quadratic points; the first layer's "
                       "conclusion is violated"};
      if (L2.scan.new_points != 0)
        return {false, "scan saw genuinely new points in the top layer"};
      return {true, "scan of " + std::to_string(L2.scan.candidates) +
                        " candidates replayed; nothing beyond the rational "
                        "points"};
    });

    guarded(rep, "layer2-params", [&]() -> CheckFn {
      long hb = std::stol(param(L2.params, "height_bound"));
      if (hb != L2.scan.height_bound)
        return {false, "recorded height bound disagrees with the scan"};
      Int pb = int_from_str(param(L2.params, "p_bound"));
      if (pb < L2.beta_spec.witness_p)
        return {false, "witness exceeds its stated search bound"};
      Int bb = int_from_str(param(L2.params, "beta_bound"));
      if (bb != L2.beta_spec.bound)
        return {false, "generator bound disagrees with its record"};
      return {true, "search parameters consistent"};
    });

    guarded(rep, "layer2-no-descent", [&]() -> CheckFn {
      DescentReport dr = check_no_galois_descent(e, cert, 2);
      if (dr.found)
        return {false, "the relative step descends to a rational class: " +
                           dr.detail};
      return {true, "no rational descent among " + std::to_string(dr.tried) +
                        " candidate classes"};
    });
  }

  bool all = true;
  for (const auto& c : rep.checks) all = all && c.pass;
  rep.verdict = all ? "valid-prefix" : "invalid";
  return rep;
}

DescentReport check_no_galois_descent(const CurveQ& e,
                                      const TowerCertificate& cert,
                                      int layer_index) {
  if (layer_index != 2)
    throw Error("descent check supports only the first relative layer");
  if (cert.layers.size() < 2)
    throw Error("certificate has no relative layer");
  if (!(cert.curve == e))
    throw Error("certificate belongs to a different curve");
  const LayerCertificate& l1 = cert.layers[0];
  const LayerCertificate& l2 = cert.layers[1];
  QuadField k = QuadField::make(l2.m);
  if (k.t != 0) throw Error("descent check expects a sqrt-generated base");
  const QElt& beta = l2.beta_spec.beta;

  // Any rational class gluing the step into a Galois square over the
  // rationals must be supported on the ramified primes of the data.
  std::set<Int> support{Int(2)};
  for (const auto& [p, ex] : factorize(l1.d)) {
    (void)ex;
    support.insert(p);
  }
  if (l2.beta_spec.witness_p != 0) support.insert(l2.beta_spec.witness_p);
  if (l2.beta_spec.aux_prime != 0) support.insert(l2.beta_spec.aux_prime);
  std::vector<Int> pr(support.begin(), support.end());
  if (pr.size() > 20) throw Error("ramified support too large to enumerate");

  DescentReport rep;
  for (size_t mask = 0; mask < (size_t(1) << pr.size()); ++mask) {
    Int prod = 1;
    for (size_t i = 0; i < pr.size(); ++i)
      if (mask >> i & 1) prod *= pr[i];
    for (int sign : {1, -1}) {
      Int mp = sign * prod;
      if (mp == 1) continue;
      ++rep.tried;
      QuadElem v{Rat(mp * beta.x), Rat(mp * beta.y)}, root;
      if (quad_sqrt(k.m, v, root)) {
        rep.found = true;
        rep.witness = to_str(mp);
        rep.detail = "the relative step collapses: " + to_str(mp) +
                     " times the generator is a square in the base";
        return rep;
      }
    }
  }
  rep.detail = "no rational class in the ramified support collapses the step";
  return rep;
}

ScheduleReport check_big_schedule(const EllSchedule& s) {
  for (unsigned l : s.prefix)
    if (!is_probable_prime(Int(l)))
      throw Error("schedule prefix contains a non-prime entry");
  if (s.rule == "round-robin-all-primes")
    return {true,
            "every prime recurs infinitely often under the round-robin "
            "continuation"};
  if (s.rule == "constant-2")
    return {false, "the constant continuation misses every odd prime"};
  if (s.rule == "prefix-only")
    return {false, "a finite prefix cannot make every prime recur"};
  throw Error("unknown schedule rule: " + s.rule);
}

nlohmann::ordered_json layer_certificate_json(const LayerCertificate& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["index"] = c.index;
  j["ell"] = c.ell;
  j["kind"] = c.kind;
  j["evidence"] = c.evidence;
  if (c.kind == "quadratic-from-rational") {
    j["d"] = to_str(c.d);
    j["m"] = to_str(c.m);
    j["wild_ord2"] = c.wild_ord2;
    j["ext"] = quad_spec_json(c.ext);
    j["rank_cert"] = lvalue_certificate_json(c.rank_cert);
    nlohmann::ordered_json gr = nlohmann::ordered_json::array();
    for (const Int& p : c.good_ramified) gr.push_back(to_str(p));
    j["good_ramified"] = std::move(gr);
    j["torsion_note"] = c.torsion_note;
    nlohmann::ordered_json search = nlohmann::ordered_json::object();
    search["bound"] = to_str(c.search_bound);
    search["candidates_checked"] = c.candidates_checked;
    search["skipped"] = c.skipped;
    j["search"] = std::move(search);
  } else if (c.kind == "quadratic-relative") {
    j["m"] = to_str(c.m);
    j["beta_spec"] = beta_spec_json(c.beta_spec);
    nlohmann::ordered_json ap = nlohmann::ordered_json::array();
    for (const Int& v : c.abs_poly) ap.push_back(to_str(v));
    j["abs_poly"] = std::move(ap);
    nlohmann::ordered_json scan = nlohmann::ordered_json::object();
    scan["height_bound"] = c.scan.height_bound;
    scan["candidates"] = c.scan.candidates;
    scan["base_points"] = c.scan.base_points;
    scan["base_field_points"] = c.scan.base_field_points;
    scan["new_points"] = c.scan.new_points;
    scan["notes"] = c.scan.notes;
    j["scan"] = std::move(scan);
  } else {
    throw Error("unknown layer kind: " + c.kind);
  }
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k2, v] : c.params) params[k2] = v;
  j["params"] = std::move(params);
  return j;
}

LayerCertificate layer_certificate_from_json(const nlohmann::ordered_json& j) {
  LayerCertificate c;
  c.index = j.at("index").get<int>();
  c.ell = j.at("ell").get<unsigned>();
  c.kind = j.at("kind").get<std::string>();
  c.evidence = j.at("evidence").get<std::string>();
  if (c.kind == "quadratic-from-rational") {
    c.d = int_from_str(j.at("d").get<std::string>());
    c.m = int_from_str(j.at("m").get<std::string>());
    c.wild_ord2 = j.at("wild_ord2").get<long>();
    c.ext = quad_spec_from_json(j.at("ext"));
    c.rank_cert = lvalue_certificate_from_json(j.at("rank_cert"));
    for (const auto& v : j.at("good_ramified"))
      c.good_ramified.push_back(int_from_str(v.get<std::string>()));
    c.torsion_note = j.at("torsion_note").get<std::string>();
    c.search_bound = int_from_str(j.at("search").at("bound").get<std::string>());
    c.candidates_checked = j.at("search").at("candidates_checked").get<long>();
    c.skipped = j.at("search").at("skipped").get<long>();
  } else if (c.kind == "quadratic-relative") {
    c.m = int_from_str(j.at("m").get<std::string>());
    c.beta_spec = beta_spec_from_json(j.at("beta_spec"));
    for (const auto& v : j.at("abs_poly"))
      c.abs_poly.push_back(int_from_str(v.get<std::string>()));
    const auto& scan = j.at("scan");
    c.scan.height_bound = scan.at("height_bound").get<long>();
    c.scan.candidates = scan.at("candidates").get<uint64_t>();
    c.scan.base_points = scan.at("base_points").get<uint64_t>();
    c.scan.base_field_points = scan.at("base_field_points").get<uint64_t>();
    c.scan.new_points = scan.at("new_points").get<uint64_t>();
    for (const auto& v : scan.at("notes"))
      c.scan.notes.push_back(v.get<std::string>());
  } else {
    throw Error("unknown layer kind: " + c.kind);
  }
  for (const auto& [k2, v] : j.at("params").items())
    c.params[k2] = v.get<std::string>();
  return c;
}

nlohmann::ordered_json tower_certificate_json(const TowerCertificate& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["format_version"] = c.format_version;
  j["tool_version"] = c.tool_version;
  j["label"] = c.label;
  j["curve"] = {to_str(c.curve.a1), to_str(c.curve.a2), to_str(c.curve.a3),
                to_str(c.curve.a4), to_str(c.curve.a6)};
  nlohmann::ordered_json sched = nlohmann::ordered_json::object();
  sched["prefix"] = c.schedule.prefix;
  sched["rule"] = c.schedule.rule;
  j["schedule"] = std::move(sched);
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& l : c.layers) layers.push_back(layer_certificate_json(l));
  j["layers"] = std::move(layers);
  j["verdict"] = c.verdict;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k2, v] : c.meta) meta[k2] = v;
  j["meta"] = std::move(meta);
  return j;
}

TowerCertificate tower_certificate_from_json(const nlohmann::ordered_json& j) {
  TowerCertificate c;
  c.format_version = j.at("format_version").get<int>();
  c.tool_version = j.at("tool_version").get<std::string>();
  c.label = j.at("label").get<std::string>();
  const auto& a = j.at("curve");
  if (a.size() != 5) throw Error("curve record needs five coefficients");
  c.curve = CurveQ(int_from_str(a[0].get<std::string>()),
                   int_from_str(a[1].get<std::string>()),
                   int_from_str(a[2].get<std::string>()),
                   int_from_str(a[3].get<std::string>()),
                   int_from_str(a[4].get<std::string>()));
  for (const auto& v : j.at("schedule").at("prefix"))
    c.schedule.prefix.push_back(v.get<unsigned>());
  c.schedule.rule = j.at("schedule").at("rule").get<std::string>();
  for (const auto& l : j.at("layers"))
    c.layers.push_back(layer_certificate_from_json(l));
  c.verdict = j.at("verdict").get<std::string>();
  for (const auto& [k2, v] : j.at("meta").items())
    c.meta[k2] = v.get<std::string>();
  return c;
}

}  // namespace towerforge
