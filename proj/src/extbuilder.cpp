#include "towerforge/extbuilder.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace towerforge {

namespace {

Int int_gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

std::string slot_str(const PrimeSlot& pr) {
  if (pr.type == SplitType::inert) return "(" + to_str(pr.p) + ")";
  return "(" + to_str(pr.p) + ", w - " + to_str(pr.r) + ")";
}

}  // namespace

QuadExtensionSpecQ quad_spec_from_d(const Int& d, const SigmaSet& sigma) {
  if (d == 0) throw Error("extension parameter must be nonzero");
  if (!is_squarefree(d)) throw Error("extension parameter must be squarefree");
  QuadExtensionSpecQ s;
  s.d = d;
  s.trivial = (d == 1);
  s.positive = (d > 0);

  Int ad = abs(d);
  for (const auto& [p, e] : factorize(ad)) {
    (void)e;
    if (p != 2) s.ramified.push_back(p);
  }
  std::sort(s.ramified.begin(), s.ramified.end());
  if (mod_pos(d, 4) != 1) s.ramified.insert(s.ramified.begin(), 2);

  std::set<Int> in_sigma0(sigma.sigma0.begin(), sigma.sigma0.end());
  // The real place always demands a split: d must be positive.
  if (d < 0) throw Error("demanded split fails at the real place");
  s.split_verified.push_back(0);
  for (const Int& p : sigma.finite) {
    if (in_sigma0.count(p)) {
      s.undetermined_symbols.push_back({p, kronecker(d, p)});
      continue;
    }
    if (p == 2) {
      if (mod_pos(d, 8) != 1)
        throw Error("demanded split fails at 2");
    } else if (kronecker(d, p) != 1) {
      throw Error("demanded split fails at " + to_str(p));
    }
    s.split_verified.push_back(p);
  }
  return s;
}

TwistSearchResult find_twist_parameter(const CurveQ& e, unsigned ell,
                                       const std::vector<Int>& T,
                                       const SigmaSet& sigma,
                                       const TwistConstraints& extra) {
  TwistSearchResult res;
  res.bound = extra.d_bound;
  if (ell != 2) {
    res.status = "unimplemented: odd-degree cyclic extension search";
    return res;
  }
  for (const Int& t : T) {
    if (sigma.contains(t))
      throw Error("ramification target " + to_str(t) +
                  " lies in the excluded set");
    PrimeClass c = classify_prime(e, 2, t);
    if (c.kind != PrimeClassKind::p0 && c.kind != PrimeClassKind::p1)
      throw Error("ramification target " + to_str(t) +
                  " is not in the dimension-0/1 classes");
  }

  const bool need_2_split =
      std::find(sigma.finite.begin(), sigma.finite.end(), Int(2)) !=
          sigma.finite.end() &&
      std::find(sigma.sigma0.begin(), sigma.sigma0.end(), Int(2)) ==
          sigma.sigma0.end();
  std::vector<Int> odd_split_demand;
  std::set<Int> in_sigma0(sigma.sigma0.begin(), sigma.sigma0.end());
  for (const Int& p : sigma.finite)
    if (p != 2 && !in_sigma0.count(p)) odd_split_demand.push_back(p);

  const Int dmin = minimal_model(e).discriminant();

  Int start = extra.min_abs_d < 1 ? Int(1) : extra.min_abs_d;
  for (Int ad = start; ad <= extra.d_bound; ++ad) {
    // The real place demands d > 0, so the negative twin never qualifies;
    // ties would break toward the positive sign anyway.
    Int d = ad;
    ++res.candidates_checked;
    if (need_2_split && mod_pos(d, 8) != 1) continue;
    if (extra.require_two_ramified && mod_pos(d, 4) == 1) continue;

    bool skip = false;
    for (const Int& t : T)
      if (d % t != 0) {
        skip = true;
        break;
      }
    if (skip) continue;

    auto fac = factorize(ad);
    for (const auto& [p, k] : fac)
      if (k > 1) {
        skip = true;
        break;
      }
    if (skip) continue;

    std::set<Int> t_set(T.begin(), T.end());
    std::vector<Int> extras;
    long good_odd = 0;
    for (const auto& [p, k] : fac) {
      (void)k;
      if (p == 2) continue;
      if (dmin % p != 0) ++good_odd;
      if (t_set.count(p)) continue;
      extras.push_back(p);
    }
    if (!extras.empty() && !extra.allow_extra_auxiliary) continue;
    // Auxiliary ramification may only touch places outside the excluded
    // set; within that, any good odd prime is allowed and the dimension
    // class of each divisor is recorded downstream rather than filtered
    // on, since class filters can make the sign of the functional
    // equation constant across the whole search range.
    for (const Int& q : extras)
      if (sigma.contains(q)) {
        skip = true;
        break;
      }
    if (skip) continue;
    if (good_odd < extra.min_good_odd_divisors) continue;

    for (const Int& p : odd_split_demand)
      if (kronecker(d, p) != 1) {
        skip = true;
        break;
      }
    if (skip) continue;
    for (const Int& q : extra.demand_split)
      if (kronecker(d, q) != 1) {
        skip = true;
        break;
      }
    if (skip) continue;
    for (const Int& q : extra.demand_inert)
      if (kronecker(d, q) != -1) {
        skip = true;
        break;
      }
    if (skip) continue;

    res.spec = quad_spec_from_d(d, sigma);
    res.spec.extra_ramified_chosen = extras;
    if (res.spec.trivial) {
      res.status = "trivial";
      res.found = false;
    } else {
      res.status = "found";
      res.found = true;
    }
    return res;
  }
  res.status = "search-exhausted";
  return res;
}

PrimeFactorization factor_prime_in_quadratic(const QuadField& k,
                                             const Int& p) {
  PrimeFactorization f;
  f.type = splitting_type(k, p);
  f.slots = primes_above(k, p);
  for (const PrimeSlot& s : f.slots) f.ideal_strings.push_back(slot_str(s));
  return f;
}

bool local_square_test(const QuadField& k, const PrimeSlot& pr,
                       const QElt& beta) {
  if (beta.x == 0 && beta.y == 0)
    throw Error("local square test needs a nonzero element");
  return local_square(k, pr, beta);
}

bool conjugate_valuations_equal(const QuadField& k, const Int& p,
                                const QElt& beta) {
  auto slots = primes_above(k, p);
  if (slots.size() != 2)
    throw Error("conjugate valuation comparison needs a split prime");
  return ideal_valuation(k, slots[0], beta) ==
         ideal_valuation(k, slots[1], beta);
}

RelativeQuadSpec find_relative_beta(const QuadField& k,
                                    const BetaRequirements& req,
                                    const Int& bound) {
  RelativeQuadSpec out;
  out.base = k;
  out.bound = bound;

  auto slots2 = primes_above(k, 2);

  if (req.witness_p == 0) {
    // Nothing to ramify: the unit element already satisfies every demand.
    out.beta = QElt{1, 0};
    out.found = true;
    out.trivial = true;
    out.status = "trivial";
    for (const PrimeSlot& s : slots2) {
      if (!local_square(k, s, out.beta))
        throw Error("unit element failed a dyadic square test");
      out.checks.push_back("square at " + slot_str(s));
    }
    if (k.m > 0) {
      if (!totally_positive(k, out.beta))
        throw Error("unit element failed positivity");
      out.checks.push_back("totally positive");
    }
    return out;
  }

  if (k.m < 0) throw Error("witness search needs a real base field");
  if (req.witness_p == 2 || !is_probable_prime(req.witness_p))
    throw Error("witness prime must be an odd rational prime");
  if (splitting_type(k, req.witness_p) != SplitType::split)
    throw Error("witness prime must split in the base field");

  auto slots_p = primes_above(k, req.witness_p);
  const PrimeSlot& ram = slots_p[req.ram_slot_index % 2];
  const PrimeSlot& unram = slots_p[(req.ram_slot_index + 1) % 2];
  out.witness_p = req.witness_p;
  out.witness_ram = ram;
  out.witness_unram = unram;

  std::set<Int> avoid(req.avoid_aux.begin(), req.avoid_aux.end());
  avoid.insert(2);
  avoid.insert(req.witness_p);
  for (const auto& [p, e] : factorize(abs(k.m))) {
    (void)e;
    avoid.insert(p);
  }

  QElt eps = pell_unit(k);
  std::vector<QElt> units = {
      QElt{1, 0}, QElt{-1, 0}, eps, QElt{-eps.x, -eps.y}};

  const Int& p = req.witness_p;
  for (Int y = 1; y <= bound; ++y) {
    // Norm divisible by p exactly at the chosen slot: x = -y*r mod p puts
    // beta inside (p, w - r) by construction.
    Int x0 = mod_pos(-y * ram.r, p);
    Int x = x0 - ((x0 + bound) / p) * p;
    if (x < -bound) x += p;
    for (; x <= bound; x += p) {
      ++out.candidates_checked;
      if (int_gcd(x, y) != 1) continue;
      QElt b{x, y};
      Int nb = qnorm(k, b);
      Int q = abs(nb) / p;
      if (q % p == 0) continue;  // keep the witness valuation at exactly 1
      if (q == 1 && req.require_aux) continue;
      if (q > 1) {
        if (!is_probable_prime(q)) continue;
        if (avoid.count(q)) continue;
      }
      for (const QElt& u : units) {
        QElt cand = qmul(k, b, u);
        if (!local_square(k, unram, cand)) continue;
        bool ok = true;
        for (const PrimeSlot& s : slots2)
          if (!local_square(k, s, cand)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        if (!totally_positive(k, cand)) continue;

        // Independent re-verification of the ramification pattern.
        long v_ram = ideal_valuation(k, ram, cand);
        long v_unram = ideal_valuation(k, unram, cand);
        if (v_ram % 2 != 1 || v_unram % 2 != 0) continue;

        out.beta = cand;
        out.found = true;
        out.status = "found";
        out.aux_prime = (q > 1) ? q : Int(0);
        out.valuations.push_back({slot_str(ram), v_ram});
        out.valuations.push_back({slot_str(unram), v_unram});
        out.checks.push_back("odd valuation at the ramifying witness prime");
        out.checks.push_back(
            "even valuation and square unit part at the conjugate prime");
        for (const PrimeSlot& s : slots2) {
          out.valuations.push_back({slot_str(s), ideal_valuation(k, s, cand)});
          out.checks.push_back("square at the place " + slot_str(s));
        }
        if (q > 1) {
          if (splitting_type(k, q) != SplitType::split)
            throw Error("auxiliary prime unexpectedly fails to split");
          for (const PrimeSlot& s : primes_above(k, q))
            out.valuations.push_back(
                {slot_str(s), ideal_valuation(k, s, cand)});
          out.checks.push_back("auxiliary ramified prime " + to_str(q) +
                               " splits in the base");
        }
        out.checks.push_back("totally positive");
        return out;
      }
    }
  }
  out.status = "search-exhausted";
  return out;
}

nlohmann::ordered_json quad_spec_json(const QuadExtensionSpecQ& s) {
  nlohmann::ordered_json j;
  j["d"] = to_str(s.d);
  j["trivial"] = s.trivial;
  j["positive"] = s.positive;
  nlohmann::ordered_json ram = nlohmann::ordered_json::array();
  for (const Int& p : s.ramified) ram.push_back(to_str(p));
  j["ramified"] = std::move(ram);
  nlohmann::ordered_json spl = nlohmann::ordered_json::array();
  for (const Int& p : s.split_verified)
    spl.push_back(p == 0 ? std::string("infinity") : to_str(p));
  j["split_verified"] = std::move(spl);
  nlohmann::ordered_json und = nlohmann::ordered_json::array();
  for (const auto& [p, sym] : s.undetermined_symbols) {
    nlohmann::ordered_json rec;
    rec["place"] = to_str(p);
    rec["symbol"] = sym;
    und.push_back(std::move(rec));
  }
  j["undetermined_symbols"] = std::move(und);
  nlohmann::ordered_json ex = nlohmann::ordered_json::array();
  for (const Int& p : s.extra_ramified_chosen) ex.push_back(to_str(p));
  j["auxiliary_ramified"] = std::move(ex);
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

nlohmann::ordered_json beta_spec_json(const RelativeQuadSpec& s) {
  nlohmann::ordered_json j;
  j["base_m"] = to_str(s.base.m);
  j["status"] = s.status;
  j["found"] = s.found;
  j["trivial"] = s.trivial;
  j["beta"] = {{"x", to_str(s.beta.x)}, {"y", to_str(s.beta.y)}};
  if (s.witness_p != 0) {
    j["witness_p"] = to_str(s.witness_p);
    j["witness_ram"] = slot_str(s.witness_ram);
    j["witness_unram"] = slot_str(s.witness_unram);
  }
  if (s.aux_prime != 0) j["auxiliary_prime"] = to_str(s.aux_prime);
  nlohmann::ordered_json vals = nlohmann::ordered_json::array();
  for (const auto& [place, v] : s.valuations) {
    nlohmann::ordered_json rec;
    rec["place"] = place;
    rec["valuation"] = v;
    vals.push_back(std::move(rec));
  }
  j["valuations"] = std::move(vals);
  j["checks"] = s.checks;
  j["bound"] = to_str(s.bound);
  j["candidates_checked"] = s.candidates_checked;
  return j;
}

QuadExtensionSpecQ quad_spec_from_json(const nlohmann::ordered_json& j) {
  QuadExtensionSpecQ s;
  s.d = int_from_str(j.at("d").get<std::string>());
  s.trivial = j.at("trivial").get<bool>();
  s.positive = j.at("positive").get<bool>();
  for (const auto& v : j.at("ramified"))
    s.ramified.push_back(int_from_str(v.get<std::string>()));
  for (const auto& v : j.at("split_verified")) {
    std::string p = v.get<std::string>();
    s.split_verified.push_back(p == "infinity" ? Int(0) : int_from_str(p));
  }
  for (const auto& rec : j.at("undetermined_symbols"))
    s.undetermined_symbols.emplace_back(
        int_from_str(rec.at("place").get<std::string>()),
        rec.at("symbol").get<int>());
  for (const auto& v : j.at("auxiliary_ramified"))
    s.extra_ramified_chosen.push_back(int_from_str(v.get<std::string>()));
  if (j.contains("note")) s.note = j.at("note").get<std::string>();
  return s;
}

RelativeQuadSpec beta_spec_from_json(const nlohmann::ordered_json& j) {
  RelativeQuadSpec s;
  s.base = QuadField::make(int_from_str(j.at("base_m").get<std::string>()));
  s.status = j.at("status").get<std::string>();
  s.found = j.at("found").get<bool>();
  s.trivial = j.at("trivial").get<bool>();
  s.beta.x = int_from_str(j.at("beta").at("x").get<std::string>());
  s.beta.y = int_from_str(j.at("beta").at("y").get<std::string>());
  if (j.contains("witness_p")) {
    s.witness_p = int_from_str(j.at("witness_p").get<std::string>());
    // Slots are stored by their display form; rebuild from the field.
    std::string ram = j.at("witness_ram").get<std::string>();
    std::string unram = j.at("witness_unram").get<std::string>();
    bool seen_ram = false, seen_unram = false;
    for (const PrimeSlot& sl : primes_above(s.base, s.witness_p)) {
      if (slot_str(sl) == ram) s.witness_ram = sl, seen_ram = true;
      if (slot_str(sl) == unram) s.witness_unram = sl, seen_unram = true;
    }
    if (!seen_ram || !seen_unram)
      throw Error("stored witness slots do not match the base field");
  }
  if (j.contains("auxiliary_prime"))
    s.aux_prime = int_from_str(j.at("auxiliary_prime").get<std::string>());
  for (const auto& rec : j.at("valuations"))
    s.valuations.emplace_back(rec.at("place").get<std::string>(),
                              rec.at("valuation").get<long>());
  for (const auto& v : j.at("checks")) s.checks.push_back(v.get<std::string>());
  s.bound = int_from_str(j.at("bound").get<std::string>());
  s.candidates_checked = j.at("candidates_checked").get<long>();
  return s;
}

}  // namespace towerforge
