#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <thread>

#include "unitforge/lattice.hpp"

namespace unitforge {

struct HeightReport {
  int degree;            // [Q(alpha) : Q], detected from coordinate degeneracy
  double weil;           // certified midpoint of h(alpha)
  double weil_radius;
  double house_value;    // certified midpoint of the house
  double house_radius;
  ExactReal house;
  bool exact_inequality_ok;  // h(alpha) <= log house(alpha), checked exact-side
};

/// Logarithmic Weil height of a nonzero algebraic integer in a supported
/// (totally real) field: average of log max(1, |conjugate|) over the minimal
/// field. Throws NotIntegral on non-integral input.
HeightReport weil_height(const Rat& e);
HeightReport weil_height(const QuadElem& e);
HeightReport weil_height(const BiquadElem& e);

/// The complete finite set of totally positive integers with house < r,
/// ordered by coordinates.
std::vector<QuadElem> enumerate_tp_integers(const QuadField& field, const Rat& r);

struct ProfileRow {
  Int D;
  std::size_t count;
};

struct NorthcottProfile {
  Rat r;
  std::vector<ProfileRow> rows;
  std::size_t cumulative_distinct;  // distinct elements across the quadratic layers
};

/// Per-field counts of totally positive integers below the house bound, plus
/// the deduplicated union count (a quadratic-layer lower bound for the
/// compositum).
NorthcottProfile northcott_profile(const std::vector<QuadField>& fields, const Rat& r);

template <class El>
struct DescentStepResult {
  std::vector<El> gamma;   // representation found for beta
  std::vector<El> shifted; // deduplicated { gamma_j + floor(house(gamma_j)) + 1 }
};

template <class El>
struct DescentTrace {
  std::vector<std::vector<El>> levels;  // B_0, B_1, ...
  std::string C_desc;                   // exact descriptor of the constant C
  Rat threshold;                        // (2C+1)^2, rational (C exact or certified upper bound)
  std::vector<double> max_house_per_level;
};

template <class El>
class MaxIterExceeded : public Error {
 public:
  MaxIterExceeded(std::string what, DescentTrace<El> t)
      : Error(std::move(what)), partial(std::move(t)) {}
  DescentTrace<El> partial;
};

namespace detail {

template <class El>
struct CoordLess {
  bool operator()(const El& a, const El& b) const;
};

template <>
struct CoordLess<Rat> {
  bool operator()(const Rat& a, const Rat& b) const { return a < b; }
};

template <>
struct CoordLess<QuadElem> {
  bool operator()(const QuadElem& a, const QuadElem& b) const {
    if (a.x() != b.x()) return a.x() < b.x();
    return a.y() < b.y();
  }
};

template <>
struct CoordLess<BiquadElem> {
  bool operator()(const BiquadElem& a, const BiquadElem& b) const {
    for (int i = 0; i < 4; ++i)
      if (a.c(i) != b.c(i)) return a.c(i) < b.c(i);
    return false;
  }
};

std::pair<double, double> log_interval(const RatInterval& iv);

}  // namespace detail

/// The shift rule of the descent: beta_j = gamma_j + floor(house(gamma_j)) + 1.
/// Each output is verified totally positive with
/// house(beta_j) <= 2*house(gamma_j) + 1, exactly. (Equality is attained for
/// positive rational integers, where house(beta) = 2*gamma + 1.)
template <class El>
std::vector<El> descent_shifts(const std::vector<El>& gamma) {
  using Traits = ElementTraits<El>;
  std::set<El, detail::CoordLess<El>> out;
  for (const El& g : gamma) {
    const El hg = Traits::house_val(g);
    const Int f = ExactReal(hg).floor();
    const El beta = g + Rat(f + 1);
    if (!Traits::is_totally_positive(beta))
      throw Error("descent_shifts: shifted element not totally positive");
    const El hb = Traits::house_val(beta);
    if (!(Traits::sign(hg + hg + Rat(1) - hb) >= 0))
      throw Error("descent_shifts: house bound 2*house(gamma)+1 violated");
    out.insert(beta);
  }
  return {out.begin(), out.end()};
}

/// One descent step: represent beta on L (exhaustively), then shift each
/// coordinate into a totally positive integer.
template <class El>
DescentStepResult<El> descent_step(const GramLattice<El>& L, const El& beta) {
  RepresentResult<El> res = represent_search(L, beta);
  if (!res.vec)
    throw RepresentationNotFound("descent_step: target " +
                                 ElementTraits<El>::str(beta) + " not represented");
  return {*res.vec, descent_shifts<El>(*res.vec)};
}

namespace detail {

/// min over diagonal entries and embeddings of sigma(a_i), as a field element
/// plus an exact rational positive lower bound.
template <class El>
std::pair<El, Rat> min_diag_embedding(const GramLattice<El>& L);

template <>
inline std::pair<Rat, Rat> min_diag_embedding<Rat>(const GramLattice<Rat>& L) {
  Rat m = L.at(0, 0);
  for (std::size_t i = 1; i < L.rank(); ++i) m = std::min(m, L.at(i, i));
  return {m, m};
}

template <>
inline std::pair<QuadElem, Rat> min_diag_embedding<QuadElem>(const GramLattice<QuadElem>& L) {
  // Candidates: a_i and their conjugates; the minimum canonical value among
  // them is the minimal embedding value.
  QuadElem m = L.at(0, 0);
  for (std::size_t i = 0; i < L.rank(); ++i)
    for (const QuadElem& c : {L.at(i, i), L.at(i, i).conjugate()})
      if ((c - m).sign() < 0) m = c;
  // positive rational lower bound by refinement
  for (unsigned prec = 32;; prec *= 2) {
    const Rat lo = ExactReal(m).interval(prec).lo;
    if (lo > 0) return {m, lo};
  }
}

template <>
inline std::pair<BiquadElem, Rat> min_diag_embedding<BiquadElem>(
    const GramLattice<BiquadElem>& L) {
  BiquadElem m = L.at(0, 0);
  for (std::size_t i = 0; i < L.rank(); ++i) {
    const BiquadElem& a = L.at(i, i);
    for (int s = 0; s <= 3; ++s) {
      const BiquadElem c = (s == 0) ? a : a.sigma(s);
      if ((c - m).sign() < 0) m = c;
    }
  }
  for (unsigned prec = 32;; prec *= 2) {
    const Rat lo = ExactReal(m).interval(prec).lo;
    if (lo > 0) return {m, lo};
  }
}

}  // namespace detail

/// Descent iteration of the Northcott argument: B_0 = {alpha}, each level the
/// deduplicated shifts of representations of the previous level; terminates
/// when every house is below (2C+1)^2 with C = max_i max_sigma sigma(a_i)^{-1/2}.
/// When C is irrational a certified rational upper bound replaces it (the
/// contraction bound only improves).
template <class El>
DescentTrace<El> descent_run(const GramLattice<El>& L, const El& alpha,
                             std::size_t max_iter, unsigned threads = 1) {
  using Traits = ElementTraits<El>;
  if (!L.is_diagonal()) throw NonDiagonal("descent_run: diagonal lattice required");
  if (!L.is_positive_definite())
    throw InvalidArgument("descent_run: lattice not positive definite");
  if (!L.is_integral()) throw InvalidArgument("descent_run: lattice not integral");
  if (!Traits::is_integral(alpha) || !Traits::is_totally_positive(alpha))
    throw InvalidArgument("descent_run: alpha must be a totally positive integer");

  DescentTrace<El> trace;
  const auto [m_elem, m_lo] = detail::min_diag_embedding(L);
  if (auto c_exact = rat_sqrt(Rat(1) / m_lo);
      c_exact && ExactReal(m_elem).as_rational() == std::optional<Rat>(m_lo)) {
    trace.C_desc = c_exact->get_str();
    trace.threshold = (2 * *c_exact + 1) * (2 * *c_exact + 1);
  } else {
    const Rat c_up = sqrt_enclosure(Rat(1) / m_lo, 64).hi;
    trace.C_desc = "1/sqrt(" + Traits::str(m_elem) + ") <= " + c_up.get_str();
    trace.threshold = (2 * c_up + 1) * (2 * c_up + 1);
  }

  auto below_threshold = [&](const El& b) {
    const El h = Traits::house_val(b);
    return Traits::sign(h - Rat(trace.threshold)) < 0;
  };
  auto record_level = [&](const std::vector<El>& level) {
    trace.levels.push_back(level);
    double mx = 0;
    for (const El& b : level)
      mx = std::max(mx, ExactReal(Traits::house_val(b)).approx().first);
    trace.max_house_per_level.push_back(mx);
  };

  std::vector<El> level{alpha};
  record_level(level);
  for (std::size_t iter = 0;; ++iter) {
    bool all_small = true;
    for (const El& b : level)
      if (!below_threshold(b)) {
        all_small = false;
        break;
      }
    if (all_small) return trace;
    if (iter >= max_iter)
      throw MaxIterExceeded<El>("descent_run: max_iter reached with houses above threshold",
                                trace);

    std::set<El, detail::CoordLess<El>> next;
    if (threads <= 1 || level.size() < 2 * threads) {
      for (const El& b : level) {
        const auto step = descent_step(L, b);
        next.insert(step.shifted.begin(), step.shifted.end());
      }
    } else {
      // Level elements are independent; shifts merge at the level boundary.
      std::vector<std::vector<El>> partial(threads);
      std::vector<std::exception_ptr> errors(threads);
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
          try {
            for (std::size_t i = t; i < level.size(); i += threads) {
              const auto step = descent_step(L, level[i]);
              partial[t].insert(partial[t].end(), step.shifted.begin(),
                                step.shifted.end());
            }
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (const auto& err : errors)
        if (err) std::rethrow_exception(err);
      for (const auto& part : partial) next.insert(part.begin(), part.end());
    }
    level.assign(next.begin(), next.end());
    std::sort(level.begin(), level.end(), [](const El& a, const El& b) {
      return ElementTraits<El>::str(a) < ElementTraits<El>::str(b);
    });
    record_level(level);
  }
}

}  // namespace unitforge
