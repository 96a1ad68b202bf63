#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "unitforge/form_parser.hpp"
#include "unitforge/serialize.hpp"
#include "unitforge/square_classes.hpp"

namespace uf = unitforge;
using uf::BiquadElem;
using uf::BiquadField;
using uf::GramLattice;
using uf::Int;
using uf::Json;
using uf::QuadElem;
using uf::QuadField;
using uf::Rat;
using uf::RationalBase;

namespace {

struct Ctx {
  std::string out_file;
  unsigned long seed = 414213562;
  unsigned threads = 1;
};

Ctx g_ctx;
int g_rc = 0;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

/// JSON result on stdout, one-line human summary on stderr.
int finish(const std::string& scenario, Json inputs, Json outputs, bool ok, double ms) {
  Json j{{"scenario", scenario},
         {"inputs", std::move(inputs)},
         {"outputs", std::move(outputs)},
         {"all_checks_passed", ok},
         {"elapsed_ms", ms}};
  const std::string dumped = j.dump(2);
  std::cout << dumped << std::endl;
  if (!g_ctx.out_file.empty()) {
    std::ofstream f(g_ctx.out_file);
    f << dumped << "\n";
  }
  std::cerr << scenario << ": " << (ok ? "all checks passed" : "CHECKS FAILED") << " ("
            << ms << " ms)" << std::endl;
  return ok ? 0 : 1;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}


Int big_int(const std::string& s) {
  try {
    return Int(s.c_str());
  } catch (const std::invalid_argument&) {
    throw uf::InvalidArgument("bad integer '" + s + "'");
  }
}

std::vector<Int> parse_int_list(const std::string& s) {
  std::vector<Int> out;
  for (const std::string& piece : split(s, ',')) out.push_back(big_int(piece));
  return out;
}

struct BaseFlags {
  std::string D;   // quadratic base when set
  std::string d1;  // biquadratic base when both set
  std::string d2;
};

struct LatticeFlags {
  std::string form;  // monomial syntax, or "In" identity shorthand
  std::string gram;  // JSON text or @file
  std::string diag;  // ';'-separated diagonal entries
};

/// Dispatches fn over the base field selected by the flags.
template <class Fn>
int with_base(const BaseFlags& bf, Fn&& fn) {
  if (!bf.d1.empty() || !bf.d2.empty()) {
    if (bf.d1.empty() || bf.d2.empty())
      throw uf::InvalidArgument("biquadratic base needs both --d1 and --d2");
    return fn(BiquadField(big_int(bf.d1), big_int(bf.d2)),
              static_cast<BiquadElem*>(nullptr));
  }
  if (!bf.D.empty()) {
    return fn(QuadField(big_int(bf.D)), static_cast<QuadElem*>(nullptr));
  }
  return fn(RationalBase{}, static_cast<Rat*>(nullptr));
}

template <class El>
GramLattice<El> load_lattice(const typename uf::ElementTraits<El>::Base& base,
                             const LatticeFlags& lf) {
  if (!lf.diag.empty()) {
    std::vector<El> d;
    for (const std::string& s : split(lf.diag, ';'))
      d.push_back(uf::parse_element<El>(s, base));
    return GramLattice<El>::diagonal(base, d);
  }
  if (!lf.form.empty()) {
    if (lf.form.size() >= 2 && lf.form[0] == 'I' &&
        lf.form.find_first_not_of("0123456789", 1) == std::string::npos)
      return GramLattice<El>::identity(base, std::stoul(lf.form.substr(1)));
    return uf::parse_gram_form<El>(lf.form, base, [&](const std::string& s) {
      return uf::parse_element<El>(s, base);
    });
  }
  if (!lf.gram.empty()) {
    std::string text = lf.gram;
    if (text[0] == '@') {
      std::ifstream f(text.substr(1));
      if (!f) throw uf::ParseError("cannot read " + text.substr(1));
      std::stringstream buf;
      buf << f.rdbuf();
      text = buf.str();
    }
    return uf::lattice_from_json<El>(Json::parse(text), base);
  }
  throw uf::InvalidArgument("no lattice given: use --form, --gram or --diag");
}

template <class El>
std::vector<El> parse_vector(const typename uf::ElementTraits<El>::Base& base,
                             const std::string& s) {
  std::vector<El> out;
  for (const std::string& piece : split(s, ';'))
    out.push_back(uf::parse_element<El>(piece, base));
  return out;
}

Json quad_out(const QuadElem& e) {
  return Json{{"str", uf::to_string(e)}, {"json", uf::quad_elem_to_json(e)}};
}

Json biquad_out(const BiquadElem& e) {
  return Json{{"str", uf::to_string(e)}, {"json", uf::biquad_elem_to_json(e)}};
}

// ---------------------------------------------------------------- commands

int cmd_fund_unit(const std::string& Dstr) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const QuadElem eps = uf::fundamental_unit(f);
  bool ok = eps.is_unit() && (eps - Rat(1)).sign() > 0;
  Json out{{"eps", quad_out(eps)},
           {"norm", Rat(eps.norm()).get_str()},
           {"trace", Rat(eps.trace()).get_str()},
           {"disc", uf::int_to_json(f.disc())}};
  if (eps.norm() == 1) out["delta"] = uf::int_to_json(uf::delta(f));
  return finish("fund-unit", Json{{"D", Dstr}}, out, ok, elapsed_ms(t0));
}

int cmd_delta(const std::string& Dstr) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const Int d = uf::delta(f);  // postconditions checked inside
  return finish("delta", Json{{"D", Dstr}},
                Json{{"delta", uf::int_to_json(d)}, {"disc", uf::int_to_json(f.disc())}},
                true, elapsed_ms(t0));
}

int cmd_pell_report(const std::string& Dstr) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const uf::PellReport r = uf::pell_report(f);
  const bool consistent = (r.tp_unit_exists == (r.norm_eps == 1)) &&
                          (r.tp_unit_exists == !r.neg_pell_solvable) &&
                          (!r.has_p3mod4_divisor || r.norm_eps == 1);
  Json out{{"tp_unit_exists", r.tp_unit_exists},
           {"norm_eps", r.norm_eps},
           {"neg_pell_solvable", r.neg_pell_solvable},
           {"has_p3mod4_divisor", r.has_p3mod4_divisor},
           {"equivalences_consistent", consistent}};
  return finish("pell-report", Json{{"D", Dstr}}, out, consistent, elapsed_ms(t0));
}

int cmd_sig_rank(const std::string& Dstr) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const uf::SignatureRank sr = uf::signature_rank(f);
  // brute cross-check: totally positive classes among {1, eps}
  const QuadElem eps = uf::fundamental_unit(f);
  const int tp_classes = 1 + (eps.is_totally_positive() ? 1 : 0);
  const bool ok = tp_classes == sr.quotient_size;
  Json out{{"rank", sr.rank},
           {"quotient_size", sr.quotient_size},
           {"tp_class_count_check", tp_classes}};
  return finish("sig-rank", Json{{"D", Dstr}}, out, ok, elapsed_ms(t0));
}

int cmd_lemma51(const std::string& Dstr, const std::string& elem) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const QuadElem e =
      elem.empty() ? uf::fundamental_unit(f) : uf::parse_quad_elem(elem, f);
  const uf::Lemma51Witness w = uf::lemma51_witness(e);  // verifies e*beta^2 = t
  Json out{{"e", quad_out(e)}, {"beta", quad_out(w.beta)}, {"t", w.t.get_str()}};
  return finish("lemma51", Json{{"D", Dstr}, {"elem", elem}}, out, true, elapsed_ms(t0));
}

int cmd_biquad_sqrt(const std::string& d1, const std::string& d2, const std::string& elem) {
  const auto t0 = std::chrono::steady_clock::now();
  BiquadField f(big_int(d1), big_int(d2));
  const BiquadElem e = uf::parse_biquad_elem(elem, f);
  const auto s = uf::biquad_sqrt(e);
  bool ok = true;
  Json out{{"present", s.has_value()}};
  if (s) {
    ok = (*s * *s == e);
    out["sqrt"] = biquad_out(*s);
    out["totally_positive"] = s->is_totally_positive();
    out["totally_negative"] = s->is_totally_negative();
  }
  return finish("biquad-sqrt", Json{{"d1", d1}, {"d2", d2}, {"elem", elem}}, out, ok,
                elapsed_ms(t0));
}

int cmd_cor63(const std::string& d1, const std::string& d2, const std::string& elem) {
  const auto t0 = std::chrono::steady_clock::now();
  BiquadField f(big_int(d1), big_int(d2));
  const BiquadElem alpha = uf::parse_biquad_elem(elem, f);
  const uf::Cor63Result r = uf::cor63_test(alpha);
  bool ok = true;
  Json out{{"norms_square", Json::array({r.norms_square[0], r.norms_square[1],
                                         r.norms_square[2]})},
           {"in_Q_square_class", r.in_Q_square_class}};
  if (r.decomposition) {
    Json dec = Json::array();
    BiquadElem prod = BiquadElem::from_rational(f, Rat(1));
    for (int i = 1; i <= 3; ++i) {
      const QuadElem& eps = (*r.decomposition)[static_cast<std::size_t>(i - 1)];
      dec.push_back(quad_out(eps));
      ok = ok && eps.is_totally_positive() && eps.is_unit();
      prod = prod * BiquadElem::from_subfield(f, i, eps);
    }
    ok = ok && (prod == alpha);
    out["decomposition"] = dec;
  }
  return finish("cor63", Json{{"d1", d1}, {"d2", d2}, {"elem", elem}}, out, ok,
                elapsed_ms(t0));
}

int cmd_prop65(const std::string& nstr) {
  const auto t0 = std::chrono::steady_clock::now();
  const uf::Prop65Record rec = uf::prop65_family(big_int(nstr));
  Json out{{"field", uf::base_to_json(rec.field)},
           {"mu", biquad_out(rec.mu)},
           {"relnorm1_is_one", rec.relnorm1_is_one},
           {"relnorm2_matches", rec.relnorm2_matches},
           {"relnorm3_matches", rec.relnorm3_matches},
           {"totally_positive", rec.totally_positive},
           {"unit", rec.unit},
           {"not_in_rational_square_class", rec.not_in_rational_square_class}};
  return finish("prop65", Json{{"n", nstr}}, out, rec.all_ok(), elapsed_ms(t0));
}

uf::MultiquadDescriptor kummer_field(const std::string& gens, bool all_squarefree,
                                     const std::string& family, std::size_t prefix) {
  if (all_squarefree) return uf::MultiquadDescriptor::all();
  if (family.empty()) return uf::MultiquadDescriptor::from_generators(parse_int_list(gens));
  if (family == "example53") return uf::MultiquadDescriptor::family53_prefix(prefix);
  if (family == "example54")
    return uf::MultiquadDescriptor::family54_prefix(parse_int_list(gens));
  if (family == "prop65") return uf::MultiquadDescriptor::prop65_prefix(prefix);
  throw uf::InvalidArgument("unknown family '" + family +
                            "' (use example53, example54 or prop65)");
}

int cmd_kummer(const std::string& target, const std::string& gens, bool all_squarefree,
               const std::string& family, std::size_t prefix) {
  const auto t0 = std::chrono::steady_clock::now();
  const Rat d = uf::parse_rational(target);
  uf::MultiquadDescriptor field = kummer_field(gens, all_squarefree, family, prefix);
  const bool member = uf::is_square_in(d, field);
  bool ok = true;
  Json out{{"is_square", member}};
  if (!all_squarefree && field.generators.size() <= 15) {
    // exhaustive subset cross-check
    bool brute = false;
    const Int target_sf = uf::squarefree_part(d.get_num() * d.get_den()).s;
    const std::size_t n = field.generators.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n) && !brute; ++mask) {
      Int prod = 1;
      for (std::size_t b = 0; b < n; ++b)
        if (mask & (std::size_t{1} << b)) prod *= field.generators[b];
      brute = uf::squarefree_part(prod).s == target_sf;
    }
    ok = (brute == member);
    out["brute_force_agrees"] = ok;
  }
  Json gens_out = Json::array();
  for (const Int& g : field.generators) gens_out.push_back(uf::int_to_json(g));
  out["materialized_generators"] = gens_out;
  return finish("kummer",
                Json{{"target", target}, {"gens", gens}, {"all_squarefree", all_squarefree},
                     {"family", family}, {"prefix", prefix}},
                out, ok, elapsed_ms(t0));
}

int cmd_family53(std::size_t m) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fam = uf::example53_family(m);  // all claims verified inside
  Json rows = Json::array();
  std::vector<Int> gens;
  for (const auto& e : fam) {
    rows.push_back(Json{{"n", uf::int_to_json(e.n)},
                        {"D_full", uf::int_to_json(e.D_full)},
                        {"field_D", uf::int_to_json(e.field.D())},
                        {"eps", quad_out(e.eps)},
                        {"square_class", uf::int_to_json(e.square_class)}});
    gens.push_back(e.field.D());
  }
  // the example's non-membership claims over the materialized compositum
  bool ok = true;
  const auto comp = uf::MultiquadDescriptor::from_generators(gens);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    ok = ok && !uf::is_square_in(Rat(fam[k].square_class), comp);
    for (std::size_t l = k + 1; l < fam.size(); ++l)
      ok = ok && !uf::is_square_in(Rat((2 * fam[k].n + 1) * (2 * fam[l].n + 1)), comp);
  }
  return finish("family53", Json{{"m", m}}, Json{{"entries", rows}, {"nonsquare_checks", ok}},
                ok, elapsed_ms(t0));
}

int cmd_family54(const std::string& primes) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fam = uf::example54_family(parse_int_list(primes));
  Json rows = Json::array();
  for (const auto& e : fam)
    rows.push_back(Json{{"q_even", uf::int_to_json(e.q_even)},
                        {"q_odd", uf::int_to_json(e.q_odd)},
                        {"eps", quad_out(e.eps)},
                        {"delta", uf::int_to_json(e.delta_value)}});
  return finish("family54", Json{{"primes", primes}}, Json{{"entries", rows}}, true,
                elapsed_ms(t0));
}

std::vector<uf::FamilyInput> families_from_n_list(const std::vector<Int>& ns) {
  std::vector<uf::FamilyInput> out;
  for (const Int& n : ns) {
    const uf::Prop65Record rec = uf::prop65_family(n);
    if (!rec.all_ok()) throw uf::Error("prop65 verification failed for n = " + n.get_str());
    out.push_back(uf::make_family_input(rec.field, rec.mu));
  }
  return out;
}

int cmd_greedy_select(std::size_t m, const std::string& n_list) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Int> ns = n_list.empty() ? uf::prop65_admissible_n(m + 3)
                                       : parse_int_list(n_list);
  const auto cert = uf::greedy_disjoint_select(families_from_n_list(ns), m);
  const auto rep = uf::verify_certificate(cert);
  Json out{{"certificate", uf::certificate_to_json(cert)},
           {"verified", rep.ok},
           {"failures", rep.failures}};
  return finish("greedy-select", Json{{"m", m}, {"n_list", n_list}}, out, rep.ok,
                elapsed_ms(t0));
}

int cmd_thm72(std::size_t m) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cert = uf::theorem72_certificate(m);
  // the exit gate: re-verification from the serialized JSON alone
  const Json serialized = uf::certificate_to_json(cert);
  const auto rep = uf::verify_certificate(uf::certificate_from_json(serialized));
  Json out{{"certificate", serialized},
           {"classes", cert.units.size()},
           {"verified_from_json", rep.ok},
           {"failures", rep.failures}};
  return finish("thm72-cert", Json{{"m", m}}, out, rep.ok && cert.units.size() == m,
                elapsed_ms(t0));
}

int cmd_lattice_eval(const BaseFlags& bf, const LatticeFlags& lf, const std::string& vec,
                     const std::string& with) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    const auto L = load_lattice<El>(base, lf);
    const auto v = parse_vector<El>(base, vec);
    const El q = L.evaluate(v);
    Json out{{"lattice", uf::lattice_to_json(L)},
             {"Q", uf::ElementTraits<El>::str(q)},
             {"integral", L.is_integral()},
             {"classical", L.is_classical()},
             {"positive_definite", L.is_positive_definite()}};
    if (!with.empty()) {
      const auto w = parse_vector<El>(base, with);
      out["B"] = uf::ElementTraits<El>::str(L.bilinear(v, w));
    }
    return finish("lattice-eval", Json{{"vector", vec}, {"with", with}}, out, true,
                  elapsed_ms(t0));
  });
}

int cmd_lattice_split(const BaseFlags& bf, const LatticeFlags& lf, const std::string& vec) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    using Traits = uf::ElementTraits<El>;
    const auto L = load_lattice<El>(base, lf);
    const auto v = parse_vector<El>(base, vec);
    const auto s = uf::split_unit(L, v);
    bool ok = s.new_gram.is_classical();
    Json comp = Json::array();
    for (const auto& w : s.complement_basis) {
      ok = ok && Traits::is_zero(L.bilinear(v, w));
      comp.push_back(uf::vector_to_json(w));
    }
    Json out{{"unit_vector", uf::vector_to_json(s.unit_vector)},
             {"complement_basis", comp},
             {"new_gram", uf::lattice_to_json(s.new_gram)},
             {"orthogonal", ok}};
    return finish("lattice-split", Json{{"vector", vec}}, out, ok, elapsed_ms(t0));
  });
}

int cmd_universal_2n(const BaseFlags& bf, const std::string& gens) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    const auto units = parse_vector<El>(base, gens);
    const auto L = uf::diagonal_universal_2n<El>(base, units);
    const bool ok = L.is_classical() && L.is_positive_definite();
    Json out{{"lattice", uf::lattice_to_json(L)},
             {"rank", L.rank()},
             {"classical", L.is_classical()},
             {"positive_definite", L.is_positive_definite()}};
    return finish("universal-2n", Json{{"gens", gens}}, out, ok, elapsed_ms(t0));
  });
}

int cmd_rank_bound(const BaseFlags& bf, const LatticeFlags& lf, const std::string& universal,
                   const std::string& units, std::uint64_t budget) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    using Traits = uf::ElementTraits<El>;
    std::optional<GramLattice<El>> L;
    std::vector<El> targets;
    if (!universal.empty()) {
      const auto gens = parse_vector<El>(base, universal);
      L = uf::diagonal_universal_2n<El>(base, gens);
      if (units.empty()) {
        // subset-product unit list, bitmask order
        for (std::size_t mask = 0; mask < (std::size_t{1} << gens.size()); ++mask) {
          El p = Traits::one(base);
          for (std::size_t b = 0; b < gens.size(); ++b)
            if (mask & (std::size_t{1} << b)) p = p * gens[b];
          targets.push_back(std::move(p));
        }
      }
    } else {
      L = load_lattice<El>(base, lf);
    }
    if (!units.empty()) targets = parse_vector<El>(base, units);
    const auto outcome = uf::rank_lower_bound_run(*L, targets, budget);
    Json out{{"completed", outcome.completed()},
             {"splits", outcome.splits},
             {"nodes", outcome.nodes_total}};
    if (outcome.failed_unit) {
      out["failed_unit"] = Traits::str(*outcome.failed_unit);
      out["evidence"] = outcome.evidence;
    }
    return finish("rank-bound", Json{{"units", units}, {"universal", universal}}, out,
                  true, elapsed_ms(t0));
  });
}

int cmd_represent(const BaseFlags& bf, const LatticeFlags& lf, const std::string& target,
                  bool exhaustive) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    const auto L = load_lattice<El>(base, lf);
    const El beta = uf::parse_element<El>(target, base);
    const auto res = uf::represent_search(L, beta, {exhaustive, 0});
    bool ok = true;
    Json out{{"representable", res.vec.has_value()},
             {"exhaustive", res.exhausted},
             {"nodes", res.nodes}};
    if (res.vec) {
      ok = (L.evaluate(*res.vec) == beta);
      out["vector"] = uf::vector_to_json(*res.vec);
    }
    return finish("represent", Json{{"target", target}, {"exhaustive", exhaustive}}, out,
                  ok, elapsed_ms(t0));
  });
}

int cmd_heights(const BaseFlags& bf, const std::string& elem) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    const El e = uf::parse_element<El>(elem, base);
    const uf::HeightReport r = uf::weil_height(e);
    Json out{{"degree", r.degree},
             {"weil", r.weil},
             {"weil_radius", r.weil_radius},
             {"house", r.house_value},
             {"house_radius", r.house_radius},
             {"height_leq_log_house", r.exact_inequality_ok}};
    return finish("heights", Json{{"elem", elem}}, out, r.exact_inequality_ok,
                  elapsed_ms(t0));
  });
}

int cmd_enumerate(const std::string& Dstr, const std::string& rstr, bool verify) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadField f{big_int(Dstr)};
  const Rat r = uf::parse_rational(rstr);
  const auto elems = uf::enumerate_tp_integers(f, r);
  Json list = Json::array();
  for (const auto& e : elems) list.push_back(uf::to_string(e));
  bool ok = true;
  if (verify) {
    // widened-grid completeness: the +-1-widened box finds nothing new
    std::size_t widened = 0;
    for (const QuadElem& g :
         uf::enumerate_integral_box(f, Rat(-1), r + 1, Rat(-1), r + 1)) {
      if (g.sign() <= 0 || g.conjugate_sign() <= 0) continue;
      if ((g - r).sign() >= 0 || (g.conjugate() - r).sign() >= 0) continue;
      ++widened;
    }
    ok = widened == elems.size();
  }
  return finish("enumerate", Json{{"D", Dstr}, {"r", rstr}},
                Json{{"count", elems.size()}, {"elements", list}}, ok, elapsed_ms(t0));
}

int cmd_profile(const std::string& fields, const std::string& rstr, const std::string& csv) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<QuadField> fs;
  for (const Int& d : parse_int_list(fields)) fs.emplace_back(d);
  const auto prof = uf::northcott_profile(fs, uf::parse_rational(rstr));
  Json rows = Json::array();
  std::ostringstream csv_text;
  csv_text << "D,count\n";
  for (const auto& row : prof.rows) {
    rows.push_back(Json{{"D", uf::int_to_json(row.D)}, {"count", row.count}});
    csv_text << row.D.get_str() << "," << row.count << "\n";
  }
  if (!csv.empty()) {
    std::ofstream f(csv);
    f << csv_text.str();
  }
  return finish("profile", Json{{"fields", fields}, {"r", rstr}},
                Json{{"rows", rows},
                     {"cumulative_distinct", prof.cumulative_distinct},
                     {"semantics", "quadratic-layer lower bound for compositum counts"}},
                true, elapsed_ms(t0));
}

template <class El>
bool max_house_strictly_decreasing(const uf::DescentTrace<El>& tr) {
  using Traits = uf::ElementTraits<El>;
  // exact check of the per-level max house while above threshold
  std::vector<El> maxima;
  for (const auto& level : tr.levels) {
    El mx = Traits::house_val(level.front());
    for (const El& b : level) {
      const El h = Traits::house_val(b);
      if (Traits::sign(h - mx) > 0) mx = h;
    }
    maxima.push_back(std::move(mx));
  }
  for (std::size_t i = 0; i + 1 < maxima.size(); ++i) {
    const bool above = Traits::sign(maxima[i] - Rat(tr.threshold)) >= 0;
    if (above && !(Traits::sign(maxima[i] - maxima[i + 1]) > 0)) return false;
  }
  return true;
}

int cmd_descent(const BaseFlags& bf, const LatticeFlags& lf, const std::string& alpha,
                std::size_t max_iter) {
  const auto t0 = std::chrono::steady_clock::now();
  return with_base(bf, [&](const auto& base, auto* tag) {
    using El = std::remove_pointer_t<decltype(tag)>;
    const auto L = load_lattice<El>(base, lf);
    const El a = uf::parse_element<El>(alpha, base);
    const auto tr = uf::descent_run(L, a, max_iter, g_ctx.threads);
    const bool ok = max_house_strictly_decreasing(tr);
    Json out{{"trace", uf::trace_to_json(tr)},
             {"iterations", tr.levels.size() - 1},
             {"terminal_count", tr.levels.back().size()},
             {"max_house_strictly_decreasing", ok}};
    return finish("descent", Json{{"alpha", alpha}, {"max_iter", max_iter}}, out, ok,
                  elapsed_ms(t0));
  });
}

// The pinned reference fixtures, replayed exactly.
int cmd_reproduce_paper() {
  const auto t0 = std::chrono::steady_clock::now();
  Json results = Json::array();
  bool all_ok = true;
  auto check = [&](const std::string& name, bool ok) {
    results.push_back(Json{{"fixture", name}, {"ok", ok}});
    all_ok = all_ok && ok;
    std::cerr << (ok ? "  ok    " : "  FAIL  ") << name << "\n";
  };

  // core-arith
  {
    const auto d = uf::squarefree_part(Int(18));
    check("squarefree_part(18) = (2,3)", d.s == 2 && d.r == 3);
    check("is_perfect_square(3) = false (2n+1 at n=1)", !uf::is_perfect_square(Int(3)));
  }
  // fundamental units and deltas of the Q(sqrt3, sqrt7) subfields
  QuadField q3{Int(3)}, q7{Int(7)}, q21{Int(21)};
  const QuadElem e1 = uf::fundamental_unit(q3);
  const QuadElem e2 = uf::fundamental_unit(q7);
  const QuadElem e3 = uf::fundamental_unit(q21);
  check("eps(3) = 2 + sqrt(3)", e1 == QuadElem(q3, Rat(2), Rat(1)));
  check("eps(7) = 8 + 3 sqrt(7)", e2 == QuadElem(q7, Rat(8), Rat(3)));
  check("eps(21) = (5 + sqrt(21))/2",
        e3 == QuadElem(q21, uf::make_rat(5, 2), uf::make_rat(1, 2)));
  check("delta(3) = 6", uf::delta(q3) == 6);
  check("delta(7) = 2", uf::delta(q7) == 2);
  check("delta(21) = 7", uf::delta(q21) == 7);
  check("norm(eps(3)) = 1", e1.norm() == 1);
  check("eps(21) is integral", e3.is_integer());
  check("eps(3) totally positive", e1.is_totally_positive());
  check("eps(3) is not a square in Q(sqrt(3))", !uf::quad_sqrt(e1).has_value());

  // square roots of unit products in Q(sqrt3, sqrt7)
  {
    BiquadField B(Int(3), Int(7));
    const BiquadElem E1 = BiquadElem::from_subfield(B, 1, e1);
    const BiquadElem E2 = BiquadElem::from_subfield(B, 2, e2);
    const BiquadElem E3 = BiquadElem::from_subfield(B, 3, e3);
    const auto s12 = uf::biquad_sqrt(E1 * E2);
    const auto s3 = uf::biquad_sqrt(E3);
    const auto s123 = uf::biquad_sqrt(E1 * E2 * E3);
    const BiquadElem w12(B, {uf::make_rat(3, 2), uf::make_rat(3, 2), uf::make_rat(1, 2),
                             uf::make_rat(1, 2)});
    const BiquadElem w3(B, {Rat(0), uf::make_rat(1, 2), uf::make_rat(1, 2), Rat(0)});
    const BiquadElem w123(B, {Rat(4), uf::make_rat(5, 2), uf::make_rat(3, 2), Rat(1)});
    auto matches = [](const std::optional<BiquadElem>& s, const BiquadElem& w) {
      return s && (*s == w || *s == -w);
    };
    check("sqrt(eps1 eps2) = (3 + 3 sqrt3 + sqrt7 + sqrt21)/2", matches(s12, w12));
    check("sqrt(eps3) = (sqrt3 + sqrt7)/2", matches(s3, w3));
    check("sqrt(eps1 eps2 eps3) = (8 + 5 sqrt3 + 3 sqrt7 + 2 sqrt21)/2",
          matches(s123, w123));
    auto neither = [](const std::optional<BiquadElem>& s) {
      return s && !s->is_totally_positive() && !s->is_totally_negative();
    };
    check("none of the three roots totally positive or negative",
          neither(s12) && neither(s3) && neither(s123));
    check("eps1, eps2 are not squares in Q(sqrt3, sqrt7)",
          !uf::biquad_sqrt(E1).has_value() && !uf::biquad_sqrt(E2).has_value());
  }

  // biquadratic family, n = 1
  {
    const auto rec = uf::prop65_family(Int(1));
    check("prop65 n=1: Norm_{K/K1}(mu) = 1 and the two norm formulas",
          rec.relnorm1_is_one && rec.relnorm2_matches && rec.relnorm3_matches);
    check("prop65 n=1: mu totally positive unit outside K^x2 Q^x",
          rec.totally_positive && rec.unit && rec.not_in_rational_square_class);
    check("prop65 n=1: Norm_{K/K2}(mu) = (5 + sqrt21)/2 = eps(21)",
          rec.mu.rel_norm(2) == e3);
  }

  // adaptation of the prime-pair family
  {
    const auto fam = uf::example54_family({Int(3), Int(7)});
    check("family54 (3,7): delta(Q(sqrt21)) = 7", fam.at(0).delta_value == 7);
  }

  // Maass: x^2 + y^2 + z^2 is universal over Q(sqrt5)
  {
    QuadField q5{Int(5)};
    const auto I3 = GramLattice<QuadElem>::identity(q5, 3);
    const QuadElem beta(q5, uf::make_rat(5, 2), uf::make_rat(1, 2));
    const auto v = uf::represent(I3, beta);
    check("I3 over Q(sqrt5) represents (5 + sqrt5)/2",
          v.has_value() && I3.evaluate(*v) == beta);
  }

  // PropDef equivalences in the p = 3 mod 4 case
  {
    const auto rep = uf::pell_report(q3);
    check("D=3: p | D with p = 3 mod 4 forces Norm(eps) = 1",
          rep.has_p3mod4_divisor && rep.norm_eps == 1 && rep.tp_unit_exists &&
              !rep.neg_pell_solvable);
  }

  return finish("reproduce-paper", Json::object(), Json{{"fixtures", results}}, all_ok,
                elapsed_ms(t0));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unitforge: exact unit, square-class and lattice computations in "
               "real quadratic and biquadratic fields"};
  app.require_subcommand(1);
  app.add_option("--out", g_ctx.out_file, "also write the JSON result to this file");
  app.add_option("--seed", g_ctx.seed, "seed for randomized verification paths");
  app.add_option("--threads", g_ctx.threads, "worker threads for descent levels");

  std::function<int()> run;

  // global flags may appear after the subcommand
  auto add_sub = [&app](const std::string& name, const std::string& desc) {
    CLI::App* sc = app.add_subcommand(name, desc);
    sc->fallthrough();
    return sc;
  };

  // quad-field commands
  std::string D, elem, d1, d2, nstr;
  auto* fund = add_sub("fund-unit", "fundamental unit and delta of Q(sqrt(D))");
  fund->add_option("--D", D)->required();
  fund->callback([&] { run = [&] { return cmd_fund_unit(D); }; });

  auto* del = add_sub("delta", "delta invariant of Q(sqrt(D))");
  del->add_option("--D", D)->required();
  del->callback([&] { run = [&] { return cmd_delta(D); }; });

  auto* pell = add_sub("pell-report", "the four Pell equivalences for D");
  pell->add_option("--D", D)->required();
  pell->callback([&] { run = [&] { return cmd_pell_report(D); }; });

  auto* sig = add_sub("sig-rank", "unit signature rank of Q(sqrt(D))");
  sig->add_option("--D", D)->required();
  sig->callback([&] { run = [&] { return cmd_sig_rank(D); }; });

  auto* lem = add_sub("lemma51", "beta with e*beta^2 = Tr(e+1)");
  lem->add_option("--D", D)->required();
  lem->add_option("--elem", elem, "element of norm 1 (default: fundamental unit)");
  lem->callback([&] { run = [&] { return cmd_lemma51(D, elem); }; });

  // biquad commands
  auto* bsq = add_sub("biquad-sqrt", "square root in Q(sqrt(d1), sqrt(d2))");
  bsq->add_option("--d1", d1)->required();
  bsq->add_option("--d2", d2)->required();
  bsq->add_option("--elem", elem)->required();
  bsq->callback([&] { run = [&] { return cmd_biquad_sqrt(d1, d2, elem); }; });

  auto* cor = add_sub("cor63", "square-class criterion for a unit");
  cor->add_option("--d1", d1)->required();
  cor->add_option("--d2", d2)->required();
  cor->add_option("--elem", elem)->required();
  cor->callback([&] { run = [&] { return cmd_cor63(d1, d2, elem); }; });

  auto* p65 = add_sub("prop65", "biquadratic unit family at n");
  p65->add_option("--n", nstr)->required();
  p65->callback([&] { run = [&] { return cmd_prop65(nstr); }; });

  // square classes
  std::string target, gens, primes, n_list, family;
  bool all_sf = false;
  std::size_t m = 1, prefix = 3;
  auto* kum = add_sub("kummer", "square membership in a multiquadratic field");
  kum->add_option("--target", target)->required();
  kum->add_option("--gens", gens, "comma-separated squarefree generators");
  kum->add_flag("--all-squarefree", all_sf, "ambient Q(sqrt(n) : n in N)");
  kum->add_option("--family", family, "named generator family: example53|example54|prop65");
  kum->add_option("--prefix", prefix, "materialized prefix length for a named family");
  kum->callback([&] { run = [&] { return cmd_kummer(target, gens, all_sf, family, prefix); }; });

  auto* f53 = add_sub("family53", "pairwise-coprime 4n^2-1 unit family");
  f53->add_option("--m", m)->required();
  f53->callback([&] { run = [&] { return cmd_family53(m); }; });

  auto* f54 = add_sub("family54", "prime-pair delta family");
  f54->add_option("--primes", primes, "even count of distinct primes = 3 mod 4")->required();
  f54->callback([&] { run = [&] { return cmd_family54(primes); }; });

  auto* greedy = add_sub("greedy-select", "greedy disjoint class selection");
  greedy->add_option("--m", m)->required();
  greedy->add_option("--n-list", n_list, "prop65 parameters (default: first admissible)");
  greedy->callback([&] { run = [&] { return cmd_greedy_select(m, n_list); }; });

  auto* t72 = add_sub("thm72-cert", "certified distinct classes over Q^(2)");
  t72->add_option("--m", m)->required();
  t72->callback([&] { run = [&] { return cmd_thm72(m); }; });

  // lattice commands
  BaseFlags bf;
  LatticeFlags lf;
  std::string vec, with, universal, units, alpha, rstr, fields, csv;
  bool exhaustive = true, verify = false;
  std::uint64_t budget = 0;
  std::size_t max_iter = 12;

  auto add_base = [&](CLI::App* sc) {
    sc->add_option("--D", bf.D, "quadratic base Q(sqrt(D))");
    sc->add_option("--d1", bf.d1, "biquadratic base, first generator");
    sc->add_option("--d2", bf.d2, "biquadratic base, second generator");
  };
  auto add_lattice = [&](CLI::App* sc) {
    sc->add_option("--form", lf.form, "quadratic form (monomial syntax), or In for identity");
    sc->add_option("--gram", lf.gram, "Gram matrix JSON (or @file)");
    sc->add_option("--diag", lf.diag, "';'-separated diagonal entries");
  };

  auto* lev = add_sub("lattice-eval", "evaluate Q(v) and predicates");
  add_base(lev);
  add_lattice(lev);
  lev->add_option("--vector", vec)->required();
  lev->add_option("--with", with, "second vector for B(v,w)");
  lev->callback([&] { run = [&] { return cmd_lattice_eval(bf, lf, vec, with); }; });

  auto* lsp = add_sub("lattice-split", "orthogonal splitting along a unit vector");
  add_base(lsp);
  add_lattice(lsp);
  lsp->add_option("--vector", vec)->required();
  lsp->callback([&] { run = [&] { return cmd_lattice_split(bf, lf, vec); }; });

  auto* u2n = add_sub("universal-2n", "diagonal subset-product lattice");
  add_base(u2n);
  u2n->add_option("--gens", universal, "';'-separated totally positive units")->required();
  u2n->callback([&] { run = [&] { return cmd_universal_2n(bf, universal); }; });

  auto* rb = add_sub("rank-bound", "rank lower bound by iterated splitting");
  add_base(rb);
  add_lattice(rb);
  rb->add_option("--universal", universal, "build the 2^n lattice from these units");
  rb->add_option("--units", units, "';'-separated target units (default: subset products)");
  rb->add_option("--budget", budget, "max search nodes per representation (0 = unlimited)");
  rb->callback([&] { run = [&] { return cmd_rank_bound(bf, lf, universal, units, budget); }; });

  auto* rep = add_sub("represent", "bounded-box representation search");
  add_base(rep);
  add_lattice(rep);
  rep->add_option("--target", target)->required();
  rep->add_flag("--exhaustive,!--no-exhaustive", exhaustive);
  rep->callback([&] { run = [&] { return cmd_represent(bf, lf, target, exhaustive); }; });

  auto* hgt = add_sub("heights", "house and Weil height of an integral element");
  add_base(hgt);
  hgt->add_option("--elem", elem)->required();
  hgt->callback([&] { run = [&] { return cmd_heights(bf, elem); }; });

  auto* enu = add_sub("enumerate", "totally positive integers with house < r");
  enu->add_option("--D", D)->required();
  enu->add_option("--r", rstr)->required();
  enu->add_flag("--verify", verify, "widened-grid completeness check");
  enu->callback([&] { run = [&] { return cmd_enumerate(D, rstr, verify); }; });

  auto* prof = add_sub("profile", "bounded-house counts across fields");
  prof->add_option("--fields", fields, "comma-separated D values")->required();
  prof->add_option("--r", rstr)->required();
  prof->add_option("--csv", csv, "also write a CSV table");
  prof->callback([&] { run = [&] { return cmd_profile(fields, rstr, csv); }; });

  auto* dsc = add_sub("descent", "bounded-house descent iteration");
  add_base(dsc);
  add_lattice(dsc);
  dsc->add_option("--alpha", alpha)->required();
  dsc->add_option("--max-iter", max_iter);
  dsc->callback([&] { run = [&] { return cmd_descent(bf, lf, alpha, max_iter); }; });

  auto* repro = add_sub("reproduce-paper", "replay every pinned fixture");
  repro->callback([&] { run = [&] { return cmd_reproduce_paper(); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    g_rc = run();
  } catch (const uf::ParseError& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const uf::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << std::endl;
    return 2;
  } catch (const uf::Error& e) {
    Json j{{"error", e.what()}, {"all_checks_passed", false}};
    std::cout << j.dump(2) << std::endl;
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return g_rc;
}
