#include "unitforge/square_classes.hpp"

#include <algorithm>
#include <set>

namespace unitforge {

MultiquadDescriptor MultiquadDescriptor::from_generators(std::vector<Int> gens,
                                                         const FactorConfig& cfg) {
  std::set<Int> seen;
  for (const Int& g : gens) {
    if (g < 2) throw InvalidArgument("MultiquadDescriptor: generator < 2");
    if (!is_squarefree(g, cfg))
      throw InvalidArgument("MultiquadDescriptor: generator " + g.get_str() +
                            " not squarefree");
    if (!seen.insert(g).second)
      throw InvalidArgument("MultiquadDescriptor: repeated generator " + g.get_str());
  }
  MultiquadDescriptor d;
  d.generators = std::move(gens);
  return d;
}

MultiquadDescriptor MultiquadDescriptor::all() {
  MultiquadDescriptor d;
  d.all_squarefree = true;
  return d;
}

MultiquadDescriptor MultiquadDescriptor::family53_prefix(std::size_t m,
                                                         const FactorConfig& cfg) {
  std::vector<Int> gens;
  for (const Family53Entry& e : example53_family(m, cfg)) gens.push_back(e.field.D());
  return from_generators(std::move(gens), cfg);
}

MultiquadDescriptor MultiquadDescriptor::family54_prefix(const std::vector<Int>& primes,
                                                         const FactorConfig& cfg) {
  std::vector<Int> gens;
  for (const Family54Entry& e : example54_family(primes, cfg))
    gens.push_back(e.field.D());
  return from_generators(std::move(gens), cfg);
}

MultiquadDescriptor MultiquadDescriptor::prop65_prefix(std::size_t m,
                                                       const FactorConfig& cfg) {
  std::vector<Int> gens;
  for (const Int& n : prop65_admissible_n(m, Int(0), cfg)) {
    const Prop65Record rec = prop65_family(n, cfg);
    gens.push_back(rec.field.d1());
    gens.push_back(rec.field.d2());
  }
  return from_generators(std::move(gens), cfg);
}

bool is_square_in(const Rat& d, const MultiquadDescriptor& field, const FactorConfig& cfg) {
  if (d == 0) throw InvalidArgument("is_square_in: zero input");
  if (field.all_squarefree) return d > 0;
  const SquareClassVector target = SquareClassVector::from_rational(d, cfg);
  std::vector<SquareClassVector> basis;
  basis.reserve(field.generators.size());
  for (const Int& g : field.generators)
    basis.push_back(SquareClassVector::from_integer(g, cfg));
  return gf2_express(target, basis).has_value();
}

std::vector<Family53Entry> example53_family(std::size_t m, const FactorConfig& cfg) {
  if (m < 1) throw InvalidArgument("example53_family: m must be >= 1");
  std::vector<Family53Entry> out;
  Int running_product = 1;  // prod (4 n_l^2 - 1) over chosen l
  for (std::size_t k = 0; k < m; ++k) {
    Int n = running_product;  // n_0 = 1
    while (is_perfect_square(2 * n + 1)) n += running_product;

    const Int D_full = 4 * n * n - 1;
    const SquareFreeDecomp sf = squarefree_part(D_full, cfg);
    QuadField field(sf.s, cfg);
    QuadElem eps(field, Rat(2 * n), Rat(sf.r));
    const Int cls = 2 * (2 * n + 1);

    // Construction invariants, all exact.
    for (const Family53Entry& prev : out)
      if (gcd(prev.D_full, D_full) != 1)
        throw Error("example53_family: 4n^2-1 values not coprime");
    if (!eps.is_unit() || !eps.is_totally_positive())
      throw Error("example53_family: eps is not a totally positive unit");
    const QuadElem w = eps * lemma51_witness(eps).beta;
    if (!(w * w == eps * Rat(cls)))
      throw Error("example53_family: eps * 2(2n+1) is not a square");

    out.push_back({n, D_full, field, eps, cls});
    running_product *= D_full;
  }
  return out;
}

std::vector<Family54Entry> example54_family(const std::vector<Int>& primes,
                                            const FactorConfig& cfg) {
  if (primes.size() < 2 || primes.size() % 2 != 0)
    throw BadPrime("example54_family: need an even count (>= 2) of primes");
  std::set<Int> seen;
  for (const Int& q : primes) {
    if (mpz_probab_prime_p(q.get_mpz_t(), 40) == 0)
      throw BadPrime("example54_family: " + q.get_str() + " is not prime");
    if (q % 4 != 3)
      throw BadPrime("example54_family: " + q.get_str() + " is not 3 mod 4");
    if (!seen.insert(q).second)
      throw BadPrime("example54_family: repeated prime " + q.get_str());
  }

  std::vector<Family54Entry> out;
  std::vector<Int> compositum_gens;
  for (std::size_t i = 0; i + 1 < primes.size(); i += 2) {
    const Int D = primes[i] * primes[i + 1];
    QuadField field(D, cfg);
    const QuadElem eps = fundamental_unit(field);
    const Int dv = delta(field, cfg);
    if (dv != primes[i] && dv != primes[i + 1])
      throw Error("example54_family: delta outside {q_even, q_odd} for D = " + D.get_str());
    out.push_back({primes[i], primes[i + 1], field, eps, dv});
    compositum_gens.push_back(D);
  }

  // Every q-divisibility pattern forces delta_i and delta_i*delta_j outside
  // the compositum squares; re-check via the Kummer criterion.
  const MultiquadDescriptor comp = MultiquadDescriptor::from_generators(compositum_gens, cfg);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (is_square_in(Rat(out[i].delta_value), comp, cfg))
      throw Error("example54_family: delta became a square in the compositum");
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (is_square_in(Rat(out[i].delta_value * out[j].delta_value), comp, cfg))
        throw Error("example54_family: delta_i * delta_j became a square");
  }
  return out;
}

FamilyInput make_family_input(const BiquadField& field, const BiquadElem& alpha,
                              const FactorConfig& cfg) {
  const Cor63Result res = cor63_test(alpha, cfg);
  if (res.in_Q_square_class)
    throw InvalidArgument("make_family_input: alpha lies in K^{x2} Q^x");
  for (int i = 1; i <= 3; ++i)
    if (!res.norms_square[static_cast<std::size_t>(i - 1)])
      return {field, alpha, i};
  throw Error("make_family_input: unreachable");
}

namespace {

// Kummer non-squareness of N (in the quadratic field K') within
// K'(sqrt(g) : g in ext): no subset product c has N*c in K'^{x2}.
bool relnorm_stays_nonsquare(const QuadElem& N, const std::vector<Int>& ext) {
  const std::size_t k = ext.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    Int c = 1;
    for (std::size_t b = 0; b < k; ++b)
      if (mask & (std::size_t{1} << b)) c *= ext[b];
    if (quad_sqrt(N * Rat(c)).has_value()) return false;
  }
  return true;
}

// The witness argument needs K_l K_k to be quadratic over K_l' K_k, i.e. the
// remaining radical of K_l must stay outside K_l'(sqrt(d1_k), sqrt(d2_k)).
// The two non-chosen radicals are equivalent modulo that span.
bool joint_extension_is_quadratic(const FamilyInput& sel, const std::vector<Int>& ext,
                                  const FactorConfig& cfg) {
  int other = (sel.chosen_subfield == 1) ? 2 : 1;
  std::vector<Int> gens = ext;
  gens.push_back(sel.field.d(sel.chosen_subfield));
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return !is_square_in(Rat(sel.field.d(other)),
                       MultiquadDescriptor::from_generators(gens, cfg), cfg);
}

void validate_family_input(const FamilyInput& fi, const FactorConfig& cfg) {
  if (fi.chosen_subfield < 1 || fi.chosen_subfield > 3)
    throw InvalidArgument("FamilyInput: chosen subfield out of range");
  const Cor63Result res = cor63_test(fi.alpha, cfg);
  if (res.in_Q_square_class)
    throw InvalidArgument("FamilyInput: alpha lies in K^{x2} Q^x");
  if (quad_sqrt(fi.alpha.rel_norm(fi.chosen_subfield)).has_value())
    throw InvalidArgument("FamilyInput: relative norm at the chosen subfield is a square");
}

}  // namespace

ClassCertificate greedy_disjoint_select(const std::vector<FamilyInput>& families,
                                        std::size_t m, const FactorConfig& cfg) {
  if (m < 1) throw InvalidArgument("greedy_disjoint_select: m must be >= 1");
  for (const FamilyInput& fi : families) validate_family_input(fi, cfg);

  ClassCertificate cert;
  for (const FamilyInput& cand : families) {
    if (cert.units.size() == m) break;
    bool admissible = true;
    std::vector<PairWitness> new_witnesses;
    for (std::size_t l = 0; l < cert.units.size(); ++l) {
      const FamilyInput& sel = cert.units[l];
      const QuadElem N = sel.alpha.rel_norm(sel.chosen_subfield);
      const std::vector<Int> ext = {cand.field.d1(), cand.field.d2()};
      if (!relnorm_stays_nonsquare(N, ext) ||
          !joint_extension_is_quadratic(sel, ext, cfg)) {
        admissible = false;
        break;
      }
      PairWitness w;
      w.i = l;
      w.j = cert.units.size();
      w.kind = PairWitness::Kind::RelnormNonsquare;
      w.relnorm = N;
      w.ext_generators = ext;
      new_witnesses.push_back(std::move(w));
    }
    if (!admissible) continue;
    cert.units.push_back(cand);
    for (auto& w : new_witnesses) cert.witnesses.push_back(std::move(w));
  }
  if (cert.units.size() < m)
    throw InsufficientFamilies("greedy_disjoint_select: only " +
                               std::to_string(cert.units.size()) + " of " +
                               std::to_string(m) + " classes selectable");
  return cert;
}

VerifyReport verify_certificate(const ClassCertificate& cert, const FactorConfig& cfg) {
  VerifyReport rep;
  auto fail = [&](std::string msg) {
    rep.ok = false;
    rep.failures.push_back(std::move(msg));
  };

  for (std::size_t i = 0; i < cert.units.size(); ++i) {
    const FamilyInput& u = cert.units[i];
    const std::string tag = "unit " + std::to_string(i);
    if (!u.alpha.is_unit()) fail(tag + ": not a unit");
    if (!u.alpha.is_totally_positive()) fail(tag + ": not totally positive");
    try {
      if (cor63_test(u.alpha, cfg).in_Q_square_class)
        fail(tag + ": lies in K^{x2} Q^x");
    } catch (const Error& e) {
      fail(tag + ": " + e.what());
    }
    if (u.chosen_subfield < 1 || u.chosen_subfield > 3) {
      fail(tag + ": bad chosen subfield");
    } else if (quad_sqrt(u.alpha.rel_norm(u.chosen_subfield)).has_value()) {
      fail(tag + ": relative norm at chosen subfield is a square");
    }
    for (std::size_t j = i + 1; j < cert.units.size(); ++j)
      if (cert.units[i].field == cert.units[j].field)
        fail(tag + ": repeated field with unit " + std::to_string(j));
  }

  // Pair coverage: every pair needs a witness in at least one direction.
  std::set<std::pair<std::size_t, std::size_t>> covered;
  for (const PairWitness& w : cert.witnesses) {
    const std::string tag =
        "witness (" + std::to_string(w.i) + "," + std::to_string(w.j) + ")";
    if (w.i >= cert.units.size() || w.j >= cert.units.size() || w.i == w.j) {
      fail(tag + ": bad indices");
      continue;
    }
    covered.insert({std::min(w.i, w.j), std::max(w.i, w.j)});
    if (w.kind == PairWitness::Kind::RelnormNonsquare) {
      if (!w.relnorm) {
        fail(tag + ": missing relative norm");
        continue;
      }
      const FamilyInput& ui = cert.units[w.i];
      const QuadElem expected = ui.alpha.rel_norm(ui.chosen_subfield);
      if (!(expected == *w.relnorm)) fail(tag + ": stored relative norm mismatch");
      if (!relnorm_stays_nonsquare(*w.relnorm, w.ext_generators))
        fail(tag + ": relative norm became a square in the joint extension");
      const std::vector<Int> expected_ext = {cert.units[w.j].field.d1(),
                                             cert.units[w.j].field.d2()};
      if (w.ext_generators != expected_ext)
        fail(tag + ": extension generators do not match unit " + std::to_string(w.j));
      try {
        if (!joint_extension_is_quadratic(ui, w.ext_generators, cfg))
          fail(tag + ": joint extension degenerates (source field inside it)");
      } catch (const Error& e) {
        fail(tag + ": " + e.what());
      }
    } else {
      if (!w.target_class) {
        fail(tag + ": missing target class");
        continue;
      }
      try {
        if (is_square_in(*w.target_class,
                         MultiquadDescriptor::from_generators(w.ext_generators, cfg), cfg))
          fail(tag + ": target class is in the generator span");
      } catch (const Error& e) {
        fail(tag + ": " + e.what());
      }
    }
  }
  for (std::size_t i = 0; i < cert.units.size(); ++i)
    for (std::size_t j = i + 1; j < cert.units.size(); ++j)
      if (!covered.count({i, j}))
        fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
             ") has no witness");
  return rep;
}

std::vector<Int> prop65_admissible_n(std::size_t count, const Int& limit,
                                     const FactorConfig& cfg) {
  std::vector<Int> out;
  for (Int n = 1; out.size() < count; n += 12) {
    if (limit != 0 && n > limit) break;
    if (n > 1000000)
      throw FactorizationIncomplete("prop65_admissible_n: search cap reached");
    try {
      if (prop65_family(n, cfg).all_ok()) out.push_back(n);
    } catch (const NotSquareFree&) {
    }
  }
  return out;
}

ClassCertificate theorem72_certificate(std::size_t m, const FactorConfig& cfg) {
  if (m < 1) throw InvalidArgument("theorem72_certificate: m must be >= 1");
  std::vector<FamilyInput> pool;
  Int n = 1;
  while (true) {
    try {
      const Prop65Record rec = prop65_family(n, cfg);
      if (rec.all_ok()) pool.push_back(make_family_input(rec.field, rec.mu, cfg));
    } catch (const NotSquareFree&) {
    }
    n += 12;
    if (pool.size() >= m) {
      try {
        return greedy_disjoint_select(pool, m, cfg);
      } catch (const InsufficientFamilies&) {
        // extend the pool and retry
      }
    }
    if (n > 1000000)
      throw FactorizationIncomplete("theorem72_certificate: family search cap reached");
  }
}

Json certificate_to_json(const ClassCertificate& cert) {
  Json units = Json::array();
  for (const FamilyInput& u : cert.units) {
    Json coords = Json::array();
    for (int i = 0; i < 4; ++i) coords.push_back(u.alpha.c(i).get_str());
    units.push_back(Json{{"field",
                          Json{{"d1", int_to_json(u.field.d1())},
                               {"d2", int_to_json(u.field.d2())}}},
                         {"elem", Json{{"coords", coords}}},
                         {"chosen_subfield", u.chosen_subfield}});
  }
  Json witnesses = Json::array();
  for (const PairWitness& w : cert.witnesses) {
    Json data;
    if (w.kind == PairWitness::Kind::RelnormNonsquare) {
      Json gens = Json::array();
      for (const Int& g : w.ext_generators) gens.push_back(int_to_json(g));
      data = Json{{"relnorm", quad_elem_to_json(*w.relnorm)},
                  {"kummer_generators", gens}};
    } else {
      Json gens = Json::array();
      for (const Int& g : w.ext_generators) gens.push_back(int_to_json(g));
      data = Json{{"target_class", w.target_class->get_str()},
                  {"kummer_generators", gens}};
    }
    witnesses.push_back(
        Json{{"pair", Json::array({w.i, w.j})},
             {"kind", w.kind == PairWitness::Kind::RelnormNonsquare
                          ? "relnorm-nonsquare"
                          : "kummer"},
             {"data", data}});
  }
  return Json{{"units", units}, {"witnesses", witnesses}};
}

ClassCertificate certificate_from_json(const Json& j) {
  ClassCertificate cert;
  for (const Json& ju : j.at("units")) {
    BiquadField f(int_from_json(ju.at("field").at("d1")),
                  int_from_json(ju.at("field").at("d2")));
    const Json& coords = ju.at("elem").at("coords");
    if (!coords.is_array() || coords.size() != 4)
      throw ParseError("certificate unit: coords must have 4 entries");
    std::array<Rat, 4> c;
    for (int i = 0; i < 4; ++i)
      c[static_cast<std::size_t>(i)] =
          parse_rational(coords[static_cast<std::size_t>(i)].get<std::string>());
    cert.units.push_back({f, BiquadElem(f, c), ju.at("chosen_subfield").get<int>()});
  }
  for (const Json& jw : j.at("witnesses")) {
    PairWitness w;
    w.i = jw.at("pair").at(0).get<std::size_t>();
    w.j = jw.at("pair").at(1).get<std::size_t>();
    const std::string kind = jw.at("kind").get<std::string>();
    const Json& data = jw.at("data");
    for (const Json& g : data.at("kummer_generators"))
      w.ext_generators.push_back(int_from_json(g));
    if (kind == "relnorm-nonsquare") {
      w.kind = PairWitness::Kind::RelnormNonsquare;
      w.relnorm = quad_elem_from_json(data.at("relnorm"));
    } else if (kind == "kummer") {
      w.kind = PairWitness::Kind::KummerNonmember;
      w.target_class = parse_rational(data.at("target_class").get<std::string>());
    } else {
      throw ParseError("certificate witness: unknown kind '" + kind + "'");
    }
    cert.witnesses.push_back(std::move(w));
  }
  return cert;
}

}  // namespace unitforge
