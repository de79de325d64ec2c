#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "towerforge/towers.hpp"

using namespace towerforge;

namespace {

const CurveQ& curve67() {
  static CurveQ e(0, 1, 1, -12, -21);
  return e;
}

// one shared slow build per binary run
const LayerCertificate& layer1_seed0() {
  static LayerCertificate l = [] {
    Layer1Config cfg;
    return build_layer1(curve67(), "67a1", cfg);
  }();
  return l;
}

TowerCertificate tower_of(std::vector<LayerCertificate> layers) {
  TowerCertificate t;
  t.tool_version = "towerforge 0.1.0";
  t.label = "67a1";
  t.curve = curve67();
  t.schedule.prefix = {2, 2};
  t.layers = std::move(layers);
  t.verdict = tower_verdict(t.layers);
  return t;
}

const TowerCertificate& tower2() {
  static TowerCertificate t = [] {
    Layer2Config cfg;
    LayerCertificate l2 = build_layer2_candidate(curve67(), layer1_seed0(), cfg);
    return tower_of({layer1_seed0(), l2});
  }();
  return t;
}

std::set<std::string> failed_names(const VerifyReport& r) {
  std::set<std::string> out;
  for (const CheckResult& c : r.checks)
    if (!c.pass) out.insert(c.name);
  return out;
}

std::string detail_of(const VerifyReport& r, const std::string& name) {
  for (const CheckResult& c : r.checks)
    if (c.name == name) return c.detail;
  return "";
}

}  // namespace

TEST_CASE("layer one lands on the first certifiable parameter") {
  const LayerCertificate& l = layer1_seed0();
  CHECK(l.index == 1);
  CHECK(l.ell == 2);
  CHECK(l.kind == "quadratic-from-rational");
  CHECK(l.evidence == "rank0-certified");
  CHECK(l.d == 105);
  CHECK(l.m == 210);
  CHECK(l.wild_ord2 == 3);
  CHECK(l.candidates_checked == 105);
  CHECK(l.skipped == 0);
  CHECK(l.good_ramified ==
        std::vector<Int>{Int(2), Int(3), Int(5), Int(7)});
  CHECK(l.rank_cert.twist_d == 210);
  CHECK(l.rank_cert.terms == 30567);
  CHECK(l.rank_cert.w == 1);
  CHECK(l.rank_cert.l_value ==
        doctest::Approx(2.812751464775034).epsilon(1e-9));
  CHECK(l.rank_cert.verdict == "rank0-certified");
  CHECK(l.torsion_note.find("point group is unchanged") != std::string::npos);
  CHECK(l.params.at("w_base") == "1");
  CHECK(l.params.at("sign_rule") == "67:inert");
  CHECK(l.params.at("divisor_classes") == "3:class-1,5:class-1,7:class-1");
  CHECK(l.params.at("max_candidates") == "64");
  // ext block agrees with the chosen parameter
  CHECK(l.ext.d == 105);
  CHECK_FALSE(l.ext.trivial);
  REQUIRE(l.ext.undetermined_symbols.size() == 1);
  CHECK(l.ext.undetermined_symbols[0].first == 67);
  CHECK(l.ext.undetermined_symbols[0].second == -1);
}

TEST_CASE("seed branching skips admissible candidates") {
  Layer1Config cfg;
  cfg.seed = 2;
  LayerCertificate l = build_layer1(curve67(), "67a1", cfg);
  CHECK(l.skipped == 2);
  CHECK(l.d == 145);
  CHECK(l.evidence == "rank0-certified");
  CHECK(l.params.at("sign_rule") == "67:inert");
}

TEST_CASE("a freshly built first layer verifies check by check") {
  TowerCertificate t = tower_of({layer1_seed0()});
  VerifyReport r = verify_tower_prefix(curve67(), t);
  CHECK(r.verdict == "valid-prefix");
  CHECK(r.valid());
  std::vector<std::string> names;
  for (const CheckResult& c : r.checks) {
    CHECK(c.pass);
    names.push_back(c.name);
  }
  const std::vector<std::string> want = {
      "format",
      "curve-match",
      "schedule-shape",
      "verdict-consistent",
      "layer1-kind",
      "layer1-base-class",
      "layer1-parameter",
      "layer1-admissibility",
      "layer1-search-replay",
      "layer1-good-ramified",
      "layer1-conclusion",
  };
  CHECK(names == want);
}

TEST_CASE("tampered first-layer certificates trip the named check") {
  TowerCertificate base = tower_of({layer1_seed0()});

  SUBCASE("parameter swap") {
    TowerCertificate t = base;
    t.layers[0].d = 113;
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer1-parameter") == 1);
    CHECK(detail_of(r, "layer1-parameter").find("not twice the parameter") !=
          std::string::npos);
  }
  SUBCASE("edited rank certificate") {
    TowerCertificate t = base;
    t.layers[0].rank_cert.l_value += 0.25;
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer1-search-replay") == 1);
    CHECK(detail_of(r, "layer1-search-replay")
              .find("rank certificate differs from replay") !=
          std::string::npos);
  }
  SUBCASE("edited sign-branch record") {
    TowerCertificate t = base;
    t.layers[0].params["sign_rule"] = "67:split";
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer1-search-replay") == 1);
    CHECK(detail_of(r, "layer1-search-replay")
              .find("sign-branch record differs from replay") !=
          std::string::npos);
  }
  SUBCASE("edited conclusion note") {
    TowerCertificate t = base;
    t.layers[0].torsion_note = "the group doubles";
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer1-conclusion") == 1);
  }
  SUBCASE("upgraded verdict") {
    TowerCertificate t = tower2();
    t.verdict = "prefix-certified";
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("verdict-consistent") == 1);
  }
  SUBCASE("wrong curve") {
    VerifyReport r = verify_tower_prefix(CurveQ(0, 0, 1, -1, 0), base);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("curve-match") == 1);
  }
  SUBCASE("non-quadratic schedule") {
    TowerCertificate t = base;
    t.schedule.prefix = {3, 2};
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("schedule-shape") == 1);
  }
  SUBCASE("three layers are refused") {
    TowerCertificate t = tower2();
    t.layers.push_back(t.layers[1]);
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer-count") == 1);
  }
}

TEST_CASE("the relative layer builds on the stored witness") {
  const TowerCertificate& t = tower2();
  CHECK(t.verdict == "prefix-evidence");
  REQUIRE(t.layers.size() == 2);
  const LayerCertificate& l2 = t.layers[1];
  CHECK(l2.kind == "quadratic-relative");
  CHECK(l2.evidence == "point-search-only");
  CHECK(l2.beta_spec.beta.x == 59);
  CHECK(l2.beta_spec.beta.y == 2);
  CHECK(l2.beta_spec.witness_p == 19);
  CHECK(l2.beta_spec.aux_prime == 139);
  CHECK(l2.beta_spec.candidates_checked == 68);
  CHECK(l2.abs_poly ==
        std::vector<Int>{Int(2641), Int(0), Int(-118), Int(0), Int(1)});
  CHECK(l2.scan.height_bound == 20);
  CHECK(l2.scan.candidates == 28001);
  CHECK(l2.scan.base_field_points == 0);
  CHECK(l2.scan.new_points == 0);
  CHECK(l2.params.at("witness_skipped") == "0");
}

TEST_CASE("a full two-layer prefix verifies with the relative checks") {
  VerifyReport r = verify_tower_prefix(curve67(), tower2());
  CHECK(r.valid());
  std::set<std::string> names;
  for (const CheckResult& c : r.checks) {
    CHECK(c.pass);
    names.insert(c.name);
  }
  for (const char* n :
       {"layer2-kind", "layer2-base-field", "layer2-witness-admissible",
        "layer2-beta-replay", "layer2-beta-local", "layer2-abs-poly",
        "layer2-scan-replay", "layer2-params", "layer2-no-descent"}) {
    CHECK(names.count(n) == 1);
  }
}

TEST_CASE("tampered relative layers trip the named check") {
  SUBCASE("edited generator") {
    TowerCertificate t = tower2();
    t.layers[1].beta_spec.beta.x = 61;
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer2-beta-replay") == 1);
  }
  SUBCASE("edited absolute polynomial") {
    TowerCertificate t = tower2();
    t.layers[1].abs_poly[0] = 2640;
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer2-abs-poly") == 1);
    CHECK(detail_of(r, "layer2-abs-poly")
              .find("does not match the generator") != std::string::npos);
  }
  SUBCASE("edited point-scan tally") {
    TowerCertificate t = tower2();
    t.layers[1].scan.new_points = 2;
    VerifyReport r = verify_tower_prefix(curve67(), t);
    CHECK_FALSE(r.valid());
    CHECK(failed_names(r).count("layer2-scan-replay") == 1);
  }
}

TEST_CASE("the descent probe separates genuine and collapsing steps") {
  DescentReport good = check_no_galois_descent(curve67(), tower2(), 2);
  CHECK_FALSE(good.found);
  CHECK(good.tried > 100);

  TowerCertificate fake = tower2();
  fake.layers[1].beta_spec.beta = QElt{2641, 0};
  DescentReport bad = check_no_galois_descent(curve67(), fake, 2);
  CHECK(bad.found);
  CHECK(bad.witness == "2641");
  CHECK(bad.detail.find("square in the base") != std::string::npos);

  // through the verifier the same counterfeit trips the descent check
  VerifyReport r = verify_tower_prefix(curve67(), fake);
  CHECK_FALSE(r.valid());
  CHECK(failed_names(r).count("layer2-no-descent") == 1);
  CHECK(detail_of(r, "layer2-no-descent")
            .find("descends to a rational class") != std::string::npos);

  CHECK_THROWS(check_no_galois_descent(curve67(), tower2(), 1));
}

TEST_CASE("point scans over the relative layer stay empty") {
  LayerCertificate::PointScan s =
      scan_relative_points(curve67(), 210, QElt{59, 2}, 10);
  CHECK(s.height_bound == 10);
  CHECK(s.candidates > 0);
  CHECK(s.base_field_points == 0);
  CHECK(s.new_points == 0);
}

TEST_CASE("schedule rules decide bigness from the continuation") {
  EllSchedule rr;
  rr.prefix = {2, 2};
  ScheduleReport a = check_big_schedule(rr);
  CHECK(a.big);
  CHECK(a.reason.find("recurs infinitely often") != std::string::npos);

  EllSchedule c2;
  c2.prefix = {2, 2};
  c2.rule = "constant-2";
  ScheduleReport b = check_big_schedule(c2);
  CHECK_FALSE(b.big);
  CHECK(b.reason == "the constant continuation misses every odd prime");

  EllSchedule fin;
  fin.prefix = {2, 3, 5};
  fin.rule = "prefix-only";
  CHECK_FALSE(check_big_schedule(fin).big);

  EllSchedule bad;
  bad.prefix = {2, 4};
  CHECK_THROWS(check_big_schedule(bad));
  EllSchedule unknown;
  unknown.rule = "alternate";
  CHECK_THROWS(check_big_schedule(unknown));
}

TEST_CASE("tower certificates round trip through json") {
  const TowerCertificate& t = tower2();
  auto j = tower_certificate_json(t);
  TowerCertificate r = tower_certificate_from_json(j);
  CHECK(tower_certificate_json(r) == j);
  CHECK(r.label == t.label);
  CHECK(r.layers.size() == 2);
  CHECK(r.layers[1].beta_spec.beta.x == 59);
  CHECK(r.verdict == t.verdict);
  // the round-tripped certificate still verifies
  VerifyReport v = verify_tower_prefix(curve67(), r);
  CHECK(v.valid());
}

TEST_CASE("verdict aggregation over layer evidence") {
  CHECK(tower_verdict({layer1_seed0()}) == "prefix-certified");
  CHECK(tower_verdict(tower2().layers) == "prefix-evidence");
}
