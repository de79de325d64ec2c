#include "towerforge/selmerlat.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace towerforge {

namespace {

size_t place_index(const SelmerStructure& s, const std::string& id) {
  for (size_t i = 0; i < s.places.size(); ++i)
    if (s.places[i].place == id) return i;
  throw Error("selmer: unknown place " + id);
}

std::set<std::string> ideal_set(const SelmerStructure& s, const IdealTag& a) {
  std::set<std::string> out;
  for (const auto& id : a.places) {
    place_index(s, id);
    out.insert(id);
  }
  return out;
}

const GFMat& condition_of(const LocalSpace& v, const std::string& tag) {
  auto it = v.conditions.find(tag);
  if (it == v.conditions.end())
    throw Error("selmer: place " + v.place + " has no condition for tag " +
                tag);
  return it->second;
}

// Entrywise m += x over F_ell.
void add_into(GFMat& m, const GFMat& x) {
  if (m.rows != x.rows || m.cols != x.cols || m.ell != x.ell)
    throw Error("selmer: accumulate mismatch");
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j)
      m.set(i, j, (m.get(i, j) + x.get(i, j)) % m.ell);
}

}  // namespace

void validate_shapes(const SelmerStructure& s) {
  if (s.ell != 2 && s.ell != 3 && s.ell != 5)
    throw Error("selmer: unsupported residue field");
  if (s.loc_maps.size() != s.places.size())
    throw Error("selmer: one localization map per place required");
  for (size_t i = 0; i < s.places.size(); ++i) {
    const LocalSpace& v = s.places[i];
    const GFMat& L = s.loc_maps[i];
    if (v.pairing.rows != v.dim || v.pairing.cols != v.dim)
      throw Error("selmer: pairing shape mismatch at " + v.place);
    if (v.ur.cols != v.dim)
      throw Error("selmer: unramified subspace shape mismatch at " + v.place);
    if (L.rows != s.global_dim || L.cols != v.dim)
      throw Error("selmer: localization map shape mismatch at " + v.place);
    if (v.pairing.ell != s.ell || v.ur.ell != s.ell || L.ell != s.ell)
      throw Error("selmer: residue field mismatch at " + v.place);
    for (const auto& [tag, c] : v.conditions) {
      if (c.cols != v.dim || c.ell != s.ell)
        throw Error("selmer: condition shape mismatch at " + v.place +
                    " tag " + tag);
    }
    for (const auto& tag : v.good_ur_tags) {
      if (!gf_same_rowspace(condition_of(v, tag), v.ur))
        throw Error("selmer: good-unramified tag " + tag +
                    " differs from the unramified subspace at " + v.place);
    }
  }
}

void validate_self_dual(const SelmerStructure& s,
                        const std::set<std::string>& skip) {
  validate_shapes(s);
  for (const LocalSpace& v : s.places) {
    if (skip.count(v.place)) continue;
    if (v.dim % 2 != 0)
      throw Error("selmer: odd local dimension at " + v.place);
    if (gf_rank(v.pairing) != v.dim)
      throw Error("selmer: degenerate pairing at " + v.place);
    for (const auto& [tag, c] : v.conditions) {
      if (gf_rank(c) != v.dim / 2)
        throw Error("selmer: condition for tag " + tag + " at " + v.place +
                    " is not half-dimensional");
      GFMat gram = gf_mul(gf_mul(c, v.pairing), gf_transpose(c));
      if (!gf_is_zero(gram))
        throw Error("selmer: condition for tag " + tag + " at " + v.place +
                    " is not isotropic");
    }
  }
}

GFMat selmer_kernel_general(const SelmerStructure& s, const std::string& tag,
                            const std::vector<LocalRule>& rules) {
  validate_shapes(s);
  if (rules.size() != s.places.size())
    throw Error("selmer: one rule per place required");
  GFMat constraints = GFMat::zero(s.ell, 0, s.global_dim);
  for (size_t i = 0; i < s.places.size(); ++i) {
    if (rules[i] == LocalRule::dropped) continue;
    const GFMat lt = gf_transpose(s.loc_maps[i]);
    if (rules[i] == LocalRule::zero) {
      constraints = gf_vstack(constraints, lt);
      continue;
    }
    // Membership in the condition row space, via its annihilator: x lands in
    // the span iff every kernel vector of the condition matrix kills x*L.
    const GFMat& c = condition_of(s.places[i], tag);
    GFMat ann = gf_kernel(c);
    constraints = gf_vstack(constraints, gf_mul(ann, lt));
  }
  return gf_row_basis(gf_kernel(constraints));
}

GFMat selmer_kernel(const SelmerStructure& s, const std::string& tag) {
  std::vector<LocalRule> rules(s.places.size(), LocalRule::condition);
  return selmer_kernel_general(s, tag, rules);
}

std::pair<GFMat, GFMat> relaxed_strict(const SelmerStructure& s,
                                       const IdealTag& a,
                                       const std::string& tag) {
  const std::string t = tag.empty() ? s.base_tag : tag;
  std::set<std::string> in_a = ideal_set(s, a);
  std::vector<LocalRule> relaxed_rules(s.places.size(), LocalRule::condition);
  std::vector<LocalRule> strict_rules(s.places.size(), LocalRule::condition);
  for (size_t i = 0; i < s.places.size(); ++i) {
    if (!in_a.count(s.places[i].place)) continue;
    relaxed_rules[i] = LocalRule::dropped;
    strict_rules[i] = LocalRule::zero;
  }
  return {selmer_kernel_general(s, t, relaxed_rules),
          selmer_kernel_general(s, t, strict_rules)};
}

DualityReport duality_defect(const SelmerStructure& s, const IdealTag& a,
                             const std::string& tag) {
  const std::string t = tag.empty() ? s.base_tag : tag;
  std::set<std::string> in_a = ideal_set(s, a);
  validate_self_dual(s, in_a);

  DualityReport rep;
  rep.tag = t;
  rep.ideal.assign(in_a.begin(), in_a.end());
  rep.duality_declared = s.duality_declared;

  GFMat sel = selmer_kernel(s, t);
  auto [relaxed, strict] = relaxed_strict(s, a, t);
  rep.dim_sel = long(sel.rows);
  rep.dim_relaxed = long(relaxed.rows);
  rep.dim_strict = long(strict.rows);

  // Concatenated localizations at the ideal places, plus the block-placed
  // unramified subspaces for the quotient dimension.
  size_t total = 0;
  for (const LocalSpace& v : s.places)
    if (in_a.count(v.place)) {
      if (v.dim % 2 != 0)
        throw Error("selmer: odd local dimension at ideal place " + v.place);
      total += v.dim;
      rep.half_local_sum += long(v.dim / 2);
    }

  GFMat img_relaxed = GFMat::zero(s.ell, relaxed.rows, 0);
  GFMat img_sel = GFMat::zero(s.ell, sel.rows, 0);
  GFMat ur_blocks = GFMat::zero(s.ell, 0, total);
  GFMat orth = GFMat::zero(s.ell, relaxed.rows, sel.rows);
  size_t off = 0;
  for (size_t i = 0; i < s.places.size(); ++i) {
    const LocalSpace& v = s.places[i];
    if (!in_a.count(v.place)) continue;
    GFMat rl = gf_mul(relaxed, s.loc_maps[i]);
    GFMat sl = gf_mul(sel, s.loc_maps[i]);
    img_relaxed = gf_hstack(img_relaxed, rl);
    img_sel = gf_hstack(img_sel, sl);
    add_into(orth, gf_mul(gf_mul(rl, v.pairing), gf_transpose(sl)));
    GFMat block = GFMat::zero(s.ell, v.ur.rows, total);
    for (size_t r = 0; r < v.ur.rows; ++r)
      for (size_t j = 0; j < v.dim; ++j)
        block.set(r, off + j, v.ur.get(r, j));
    ur_blocks = gf_vstack(ur_blocks, block);
    off += v.dim;
  }

  size_t ur_rank = gf_rank(ur_blocks);
  rep.image_relaxed_mod_ur =
      long(gf_rank(gf_vstack(img_relaxed, ur_blocks)) - ur_rank);
  rep.image_sel = long(gf_rank(img_sel));
  rep.orthogonal = gf_is_zero(orth);
  rep.dim_identity = (rep.dim_relaxed - rep.dim_strict == rep.half_local_sum);
  rep.holds = rep.orthogonal && (!rep.duality_declared || rep.dim_identity);
  return rep;
}

SelmerStructure generate_dual_pair(unsigned ell, const DualPairShape& shape,
                                   uint64_t seed) {
  if (ell != 2 && ell != 3 && ell != 5)
    throw Error("selmer: unsupported residue field");
  size_t n_half = 0;
  for (size_t d : shape.local_dims) {
    if (d % 2 != 0) throw Error("selmer: local dimensions must be even");
    n_half += d / 2;
  }
  for (size_t idx : shape.transverse)
    if (idx >= shape.local_dims.size())
      throw Error("selmer: transverse index out of range");
  const size_t g = n_half + shape.extra_kernel;

  std::mt19937_64 rng(seed);
  auto rand_unit = [&]() { return unsigned(rng() % ell); };

  // Maximal isotropic graph subspace: rows (u, u*M) with M + M^t = 0, in
  // coordinates splitting every place into its two hyperbolic halves.
  GFMat m = GFMat::zero(ell, n_half, n_half);
  for (size_t i = 0; i < n_half; ++i)
    for (size_t j = i; j < n_half; ++j) {
      if (i == j) {
        if (ell == 2) m.set(i, i, rand_unit());
        continue;
      }
      unsigned r = rand_unit();
      m.set(i, j, r);
      m.set(j, i, ell == 2 ? r : (ell - r) % ell);
    }

  // Coordinate bookkeeping: global half-coordinate k lives in place pl[k] at
  // in-place index sub[k]; a coin flip per k swaps its two hyperbolic legs,
  // moving the graph around while the unramified halves stay put.
  std::vector<size_t> pl, sub, offset(shape.local_dims.size(), 0);
  size_t acc = 0;
  for (size_t v = 0; v < shape.local_dims.size(); ++v) {
    offset[v] = acc;
    acc += shape.local_dims[v];
    for (size_t j = 0; j < shape.local_dims[v] / 2; ++j) {
      pl.push_back(v);
      sub.push_back(j);
    }
  }
  std::vector<bool> swapped(n_half);
  for (size_t k = 0; k < n_half; ++k) swapped[k] = (rng() % 2 != 0);

  GFMat phi_raw = GFMat::zero(ell, g, acc);
  for (size_t i = 0; i < n_half; ++i)
    for (size_t k = 0; k < n_half; ++k) {
      size_t half = shape.local_dims[pl[k]] / 2;
      size_t ucol = offset[pl[k]] + sub[k];
      size_t wcol = offset[pl[k]] + half + sub[k];
      if (swapped[k]) std::swap(ucol, wcol);
      unsigned uval = (i == k) ? 1 : 0;
      if (uval) phi_raw.set(i, ucol, (phi_raw.get(i, ucol) + uval) % ell);
      unsigned wval = m.get(i, k);
      if (wval) phi_raw.set(i, wcol, (phi_raw.get(i, wcol) + wval) % ell);
    }

  // Mix the global basis by a random change of coordinates.
  GFMat p;
  do {
    p = GFMat::zero(ell, g, g);
    for (size_t i = 0; i < g; ++i)
      for (size_t j = 0; j < g; ++j) p.set(i, j, rand_unit());
  } while (gf_rank(p) != g);
  GFMat phi = gf_mul(p, phi_raw);

  SelmerStructure s;
  s.ell = ell;
  s.global_dim = g;
  s.duality_declared = true;
  s.seeded = true;
  s.seed = seed;
  std::set<size_t> transverse(shape.transverse.begin(),
                              shape.transverse.end());
  for (size_t v = 0; v < shape.local_dims.size(); ++v) {
    size_t d = shape.local_dims[v], half = d / 2;
    LocalSpace loc;
    loc.place = "v" + std::to_string(v);
    loc.dim = d;
    loc.pairing = GFMat::zero(ell, d, d);
    for (size_t j = 0; j < half; ++j) {
      loc.pairing.set(j, half + j, 1);
      loc.pairing.set(half + j, j, 1);
    }
    loc.ur = GFMat::zero(ell, half, d);
    for (size_t j = 0; j < half; ++j) loc.ur.set(j, j, 1);
    GFMat second = GFMat::zero(ell, half, d);
    for (size_t j = 0; j < half; ++j) second.set(j, half + j, 1);
    loc.conditions["K"] = loc.ur;
    loc.conditions["L"] = transverse.count(v) ? second : loc.ur;
    loc.good_ur_tags.insert("K");
    if (!transverse.count(v)) loc.good_ur_tags.insert("L");
    s.places.push_back(std::move(loc));

    GFMat lmap = GFMat::zero(ell, g, d);
    for (size_t i = 0; i < g; ++i)
      for (size_t j = 0; j < d; ++j) lmap.set(i, j, phi.get(i, offset[v] + j));
    s.loc_maps.push_back(std::move(lmap));
  }
  validate_self_dual(s);
  return s;
}

std::pair<long, DropCertificate> dimension_drop_step(const SelmerStructure& s,
                                                     const IdealTag& a,
                                                     const std::string& place,
                                                     const std::string& tag) {
  const std::string t = tag.empty() ? s.base_tag : tag;
  size_t idx = place_index(s, place);
  std::set<std::string> in_a = ideal_set(s, a);
  if (in_a.count(place))
    throw Error("selmer: drop place already divides the ideal");
  if (gf_rank(s.places[idx].ur) != 1)
    throw Error("selmer: drop step needs unramified dimension 1 at " + place);

  DropCertificate cert;
  cert.place = place;
  GFMat strict_a = relaxed_strict(s, a, t).second;
  cert.dim_before = long(strict_a.rows);
  GFMat img = gf_row_basis(gf_mul(strict_a, s.loc_maps[idx]));
  cert.image_dim = long(img.rows);
  if (cert.image_dim == 0) {
    cert.status = "not-applicable";
    cert.dim_after = cert.dim_before;
    return {cert.dim_before, cert};
  }
  if (cert.image_dim > 1)
    throw Error("selmer: strict localization at " + place +
                " is not one-dimensional");
  if (!gf_rowspace_contains(s.places[idx].ur, img))
    throw Error("selmer: strict localization at " + place +
                " escapes the unramified subspace");

  IdealTag ap = a;
  ap.places.push_back(place);
  GFMat strict_ap = relaxed_strict(s, ap, t).second;
  cert.dim_after = long(strict_ap.rows);
  cert.status = "applied";
  cert.verified = (cert.dim_after == cert.dim_before - 1);
  if (!cert.verified)
    throw Error("selmer: drop step failed to shrink the strict group by one");
  return {cert.dim_after, cert};
}

PipelineResult relative_dim_pipeline(const SelmerStructure& s,
                                     const std::vector<std::string>& T,
                                     const std::vector<std::string>& T0,
                                     const std::string& tag_l) {
  validate_shapes(s);
  std::set<std::string> in_t(T.begin(), T.end());
  std::set<std::string> in_t0(T0.begin(), T0.end());
  if (in_t.size() != T.size())
    throw Error("selmer: repeated place in the drop set");
  for (const auto& id : T0) {
    size_t i = place_index(s, id);
    if (in_t.count(id))
      throw Error("selmer: place " + id + " cannot be in both sets");
    if (s.places[i].dim != 0)
      throw Error("selmer: auxiliary place " + id +
                  " must have local dimension 0");
  }
  for (size_t i = 0; i < s.places.size(); ++i) {
    const LocalSpace& v = s.places[i];
    const GFMat& cl = condition_of(v, tag_l);
    if (in_t.count(v.place)) {
      if (gf_intersection_dim(cl, v.ur) != 0)
        throw Error("selmer: condition at " + v.place +
                    " meets the unramified subspace");
    } else if (!in_t0.count(v.place)) {
      if (!gf_same_rowspace(cl, condition_of(v, s.base_tag)))
        throw Error("selmer: conditions for the two tags differ at " +
                    v.place + " outside the ramified set");
    }
  }

  PipelineResult res;
  res.r = long(selmer_kernel(s, s.base_tag).rows);
  IdealTag a;
  for (const auto& id : T) {
    auto [dim, cert] = dimension_drop_step(s, a, id, s.base_tag);
    if (cert.status != "applied")
      throw Error("selmer: localization of the strict group vanishes at " +
                  id);
    res.chain.push_back(cert);
    a.places.push_back(id);
  }
  res.t = long(T.size());

  // Relaxed-at-T localizations stay unramified at every drop place; this is
  // the containment that squeezes the relative kernel onto the strict group.
  GFMat relaxed = relaxed_strict(s, a, s.base_tag).first;
  for (const auto& id : T) {
    size_t i = place_index(s, id);
    GFMat img = gf_mul(relaxed, s.loc_maps[i]);
    if (!gf_rowspace_contains(s.places[i].ur, img))
      throw Error("selmer: relaxed localization at " + id +
                  " escapes the unramified subspace");
  }

  GFMat strict_t = relaxed_strict(s, a, s.base_tag).second;
  GFMat rel = selmer_kernel(s, tag_l);
  res.dim_relative = long(rel.rows);
  res.matches_strict = gf_same_rowspace(rel, strict_t);
  if (!res.matches_strict)
    throw Error("selmer: relative kernel does not match the strict group");
  if (res.dim_relative != res.r - res.t)
    throw Error("selmer: relative dimension disagrees with the drop chain");
  return res;
}

long brute_force_dim(const SelmerStructure& s, const std::string& tag,
                     const std::vector<LocalRule>& rules) {
  validate_shapes(s);
  if (rules.size() != s.places.size())
    throw Error("selmer: one rule per place required");
  double bits = double(s.global_dim) * std::log2(double(s.ell));
  if (bits > 20.0) throw Error("selmer: enumeration space too large");

  std::vector<GFMat> ann(s.places.size());
  for (size_t i = 0; i < s.places.size(); ++i)
    if (rules[i] == LocalRule::condition)
      ann[i] = gf_kernel(condition_of(s.places[i], tag));

  std::vector<unsigned> x(s.global_dim, 0);
  long count = 0;
  while (true) {
    bool ok = true;
    for (size_t i = 0; i < s.places.size() && ok; ++i) {
      if (rules[i] == LocalRule::dropped) continue;
      const GFMat& L = s.loc_maps[i];
      std::vector<unsigned> y(L.cols, 0);
      for (size_t r = 0; r < s.global_dim; ++r) {
        if (!x[r]) continue;
        for (size_t j = 0; j < L.cols; ++j)
          y[j] = (y[j] + x[r] * L.get(r, j)) % s.ell;
      }
      if (rules[i] == LocalRule::zero) {
        for (unsigned v : y)
          if (v) {
            ok = false;
            break;
          }
      } else {
        const GFMat& an = ann[i];
        for (size_t r = 0; r < an.rows && ok; ++r) {
          unsigned dot = 0;
          for (size_t j = 0; j < an.cols; ++j)
            dot = (dot + an.get(r, j) * y[j]) % s.ell;
          if (dot) ok = false;
        }
      }
    }
    if (ok) ++count;
    // Mixed-radix increment.
    size_t pos = 0;
    while (pos < s.global_dim) {
      x[pos] = (x[pos] + 1) % s.ell;
      if (x[pos] != 0) break;
      ++pos;
    }
    if (pos == s.global_dim) break;
  }

  long dim = 0;
  long pw = 1;
  while (pw < count) {
    pw *= long(s.ell);
    ++dim;
  }
  if (pw != count)
    throw Error("selmer: enumeration count is not a power of the field size");
  return dim;
}

RankBoundCheck check_rank_bounds(unsigned ell, long rank_base, long rank_ext,
                                 long sel_dim) {
  RankBoundCheck c;
  c.ell = ell;
  c.rank_base = rank_base;
  c.rank_ext = rank_ext;
  c.sel_dim = sel_dim;
  if (rank_base < 0 || rank_ext < 0 || sel_dim < 0) {
    c.consistent = false;
    c.detail = "negative input";
    return c;
  }
  if (rank_ext < rank_base) {
    c.consistent = false;
    c.detail = "rank cannot shrink under base change";
    return c;
  }
  long bound = rank_base + long(ell - 1) * sel_dim;
  if (rank_ext > bound) {
    c.consistent = false;
    std::ostringstream os;
    os << "rank " << rank_ext << " exceeds the Selmer-capped bound " << bound;
    c.detail = os.str();
    return c;
  }
  c.consistent = true;
  c.detail = "within bounds";
  return c;
}

namespace {

nlohmann::ordered_json mat_to_json(const GFMat& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (size_t i = 0; i < m.rows; ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (size_t c = 0; c < m.cols; ++c) row.push_back(m.get(i, c));
    data.push_back(std::move(row));
  }
  j["data"] = std::move(data);
  return j;
}

GFMat mat_from_json(unsigned ell, const nlohmann::ordered_json& j) {
  size_t rows = j.at("rows").get<size_t>();
  size_t cols = j.at("cols").get<size_t>();
  GFMat m = GFMat::zero(ell, rows, cols);
  const auto& data = j.at("data");
  if (data.size() != rows) throw Error("selmer: matrix row count mismatch");
  for (size_t i = 0; i < rows; ++i) {
    if (data[i].size() != cols)
      throw Error("selmer: matrix column count mismatch");
    for (size_t c = 0; c < cols; ++c)
      m.set(i, c, data[i][c].get<unsigned>() % ell);
  }
  return m;
}

}  // namespace

nlohmann::ordered_json structure_to_json(const SelmerStructure& s) {
  validate_shapes(s);
  nlohmann::ordered_json j;
  j["ell"] = s.ell;
  j["global_dim"] = s.global_dim;
  j["base_tag"] = s.base_tag;
  j["duality_declared"] = s.duality_declared;
  if (s.seeded) j["seed"] = s.seed;
  nlohmann::ordered_json places = nlohmann::ordered_json::array();
  for (size_t i = 0; i < s.places.size(); ++i) {
    const LocalSpace& v = s.places[i];
    nlohmann::ordered_json pj;
    pj["place"] = v.place;
    pj["dim"] = v.dim;
    pj["pairing"] = mat_to_json(v.pairing);
    pj["ur"] = mat_to_json(v.ur);
    nlohmann::ordered_json conds = nlohmann::ordered_json::object();
    for (const auto& [tag, c] : v.conditions) conds[tag] = mat_to_json(c);
    pj["conditions"] = std::move(conds);
    pj["good_ur_tags"] =
        std::vector<std::string>(v.good_ur_tags.begin(), v.good_ur_tags.end());
    pj["loc_map"] = mat_to_json(s.loc_maps[i]);
    places.push_back(std::move(pj));
  }
  j["places"] = std::move(places);
  return j;
}

SelmerStructure structure_from_json(const nlohmann::ordered_json& j) {
  SelmerStructure s;
  s.ell = j.at("ell").get<unsigned>();
  s.global_dim = j.at("global_dim").get<size_t>();
  s.base_tag = j.at("base_tag").get<std::string>();
  s.duality_declared = j.at("duality_declared").get<bool>();
  if (j.contains("seed")) {
    s.seeded = true;
    s.seed = j.at("seed").get<uint64_t>();
  }
  for (const auto& pj : j.at("places")) {
    LocalSpace v;
    v.place = pj.at("place").get<std::string>();
    v.dim = pj.at("dim").get<size_t>();
    v.pairing = mat_from_json(s.ell, pj.at("pairing"));
    v.ur = mat_from_json(s.ell, pj.at("ur"));
    for (const auto& [tag, c] : pj.at("conditions").items())
      v.conditions[tag] = mat_from_json(s.ell, c);
    for (const auto& t : pj.at("good_ur_tags"))
      v.good_ur_tags.insert(t.get<std::string>());
    s.places.push_back(std::move(v));
    s.loc_maps.push_back(mat_from_json(s.ell, pj.at("loc_map")));
  }
  validate_shapes(s);
  return s;
}

}  // namespace towerforge
