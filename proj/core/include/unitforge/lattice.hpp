#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unitforge/exact_real.hpp"

namespace unitforge {

/// Base-ring tag for lattices over Z.
struct RationalBase {
  bool operator==(const RationalBase&) const { return true; }
};

template <class El>
struct ElementTraits;

template <>
struct ElementTraits<Rat> {
  using Base = RationalBase;
  static constexpr int num_embeddings = 1;
  static Rat zero(const Base&) { return Rat(0); }
  static Rat one(const Base&) { return Rat(1); }
  static Rat from_int(const Base&, const Int& n) { return Rat(n); }
  static bool is_zero(const Rat& q) { return q == 0; }
  static bool is_integral(const Rat& q) { return is_integer(q); }
  static bool is_unit(const Rat& q) { return q == 1 || q == -1; }
  static bool is_totally_positive(const Rat& q) { return q > 0; }
  static bool is_totally_nonneg(const Rat& q) { return q >= 0; }
  static int sign(const Rat& q) { return sgn(q); }
  static Rat inverse(const Rat& q) {
    if (q == 0) throw DivisionByZero("inverse of 0");
    return 1 / q;
  }
  static std::optional<Rat> exact_sqrt(const Rat& q) { return rat_sqrt(q); }
  static Rat house_val(const Rat& q) { return house_elem(q); }
  static std::string str(const Rat& q) { return q.get_str(); }

  /// Integers 0 <= g with g^2 <= u, largest first.
  static std::vector<Rat> square_bounded_candidates(const Base&, const Rat& u) {
    std::vector<Rat> out;
    if (u < 0) return out;
    for (Int g = floor_sqrt_rat(u); g >= 0; --g) out.emplace_back(g);
    return out;
  }

  /// A totally positive unit of Z is 1, which is no sum of two positive
  /// integers.
  static bool check_indecomposable_unit(const Base&, const Rat& eps) {
    return eps == 1;
  }
};

template <>
struct ElementTraits<QuadElem> {
  using Base = QuadField;
  static constexpr int num_embeddings = 2;
  static QuadElem zero(const Base& f) { return QuadElem::from_rational(f, Rat(0)); }
  static QuadElem one(const Base& f) { return QuadElem::from_rational(f, Rat(1)); }
  static QuadElem from_int(const Base& f, const Int& n) {
    return QuadElem::from_rational(f, Rat(n));
  }
  static bool is_zero(const QuadElem& e) { return e.is_zero(); }
  static bool is_integral(const QuadElem& e) { return e.is_integer(); }
  static bool is_unit(const QuadElem& e) { return e.is_unit(); }
  static bool is_totally_positive(const QuadElem& e) { return e.is_totally_positive(); }
  static bool is_totally_nonneg(const QuadElem& e) {
    return e.sign() >= 0 && e.conjugate_sign() >= 0;
  }
  static int sign(const QuadElem& e) { return e.sign(); }
  static QuadElem inverse(const QuadElem& e) { return e.inverse(); }
  static std::optional<QuadElem> exact_sqrt(const QuadElem& e) { return quad_sqrt(e); }
  static QuadElem house_val(const QuadElem& e) { return house_elem(e); }
  static std::string str(const QuadElem& e) { return to_string(e); }

  /// Integral g, canonically nonnegative, with g^2 <= u at both embeddings.
  /// Rational over-approximations bound the box; membership is exact.
  static std::vector<QuadElem> square_bounded_candidates(const Base& f,
                                                         const QuadElem& u) {
    std::vector<QuadElem> out;
    if (!is_totally_nonneg(u)) return out;
    const Rat b1 = Rat(floor_sqrt_rat(std::max(Rat(0), ExactReal(u).interval(32).hi)) + 1);
    const Rat b2 =
        Rat(floor_sqrt_rat(std::max(Rat(0), ExactReal(u.conjugate()).interval(32).hi)) + 1);
    for (QuadElem& g : enumerate_integral_box(f, -b1, b1, -b2, b2)) {
      if (g.sign() < 0) continue;  // g and -g have the same square
      const QuadElem w = u - g * g;
      if (w.sign() >= 0 && w.conjugate_sign() >= 0) out.push_back(std::move(g));
    }
    std::sort(out.begin(), out.end(), [](const QuadElem& a, const QuadElem& b) {
      return (a - b).sign() > 0;  // largest canonical value first
    });
    return out;
  }

  /// Desk-scale decomposition search: a totally positive unit eps is
  /// indecomposable iff no totally positive integer b with eps - b totally
  /// positive exists; the box (0, sigma(eps)) is finite and enumerated.
  static bool check_indecomposable_unit(const Base& f, const QuadElem& eps) {
    const Rat hi1 = ExactReal(eps).interval(32).hi;
    const Rat hi2 = ExactReal(eps.conjugate()).interval(32).hi;
    for (const QuadElem& b : enumerate_integral_box(f, Rat(0), hi1, Rat(0), hi2)) {
      if (!b.is_totally_positive()) continue;
      const QuadElem rest = eps - b;
      if (rest.is_totally_positive() && rest.is_integer()) return false;
    }
    return true;
  }
};

template <>
struct ElementTraits<BiquadElem> {
  using Base = BiquadField;
  static constexpr int num_embeddings = 4;
  static BiquadElem zero(const Base& f) { return BiquadElem::from_rational(f, Rat(0)); }
  static BiquadElem one(const Base& f) { return BiquadElem::from_rational(f, Rat(1)); }
  static BiquadElem from_int(const Base& f, const Int& n) {
    return BiquadElem::from_rational(f, Rat(n));
  }
  static bool is_zero(const BiquadElem& e) { return e.is_zero(); }
  static bool is_integral(const BiquadElem& e) { return e.is_integer(); }
  static bool is_unit(const BiquadElem& e) { return e.is_unit(); }
  static bool is_totally_positive(const BiquadElem& e) { return e.is_totally_positive(); }
  static bool is_totally_nonneg(const BiquadElem& e) {
    for (int s1 : {1, -1})
      for (int s2 : {1, -1})
        if (e.sign_at(s1, s2) < 0) return false;
    return true;
  }
  static int sign(const BiquadElem& e) { return e.sign(); }
  static BiquadElem inverse(const BiquadElem& e) { return e.inverse(); }
  static std::optional<BiquadElem> exact_sqrt(const BiquadElem& e) {
    return biquad_sqrt(e);
  }
  static BiquadElem house_val(const BiquadElem& e) { return house_elem(e); }
  static std::string str(const BiquadElem& e) { return to_string(e); }

  static std::vector<BiquadElem> square_bounded_candidates(const Base&,
                                                           const BiquadElem&) {
    throw UnsupportedBase(
        "representation search over biquadratic bases is out of scope; "
        "enumeration is restricted to quadratic layers");
  }
  static bool check_indecomposable_unit(const Base&, const BiquadElem&) {
    throw UnsupportedBase("indecomposability search over biquadratic bases");
  }
};

/// Free quadratic lattice given by a symmetric Gram matrix over Q, a real
/// quadratic field, or a biquadratic field. Q(v) = v^T G v, B(v,w) = v^T G w.
template <class El>
class GramLattice {
 public:
  using Traits = ElementTraits<El>;
  using Base = typename Traits::Base;

  GramLattice(Base base, std::vector<std::vector<El>> gram)
      : base_(std::move(base)), gram_(std::move(gram)) {
    const std::size_t n = gram_.size();
    for (const auto& row : gram_)
      if (row.size() != n) throw DimensionMismatch("GramLattice: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!(gram_[i][j] == gram_[j][i]))
          throw InvalidArgument("GramLattice: matrix not symmetric");
  }

  static GramLattice diagonal(const Base& base, const std::vector<El>& diag) {
    const std::size_t n = diag.size();
    std::vector<std::vector<El>> g(n, std::vector<El>(n, Traits::zero(base)));
    for (std::size_t i = 0; i < n; ++i) g[i][i] = diag[i];
    return GramLattice(base, std::move(g));
  }

  static GramLattice identity(const Base& base, std::size_t n) {
    return diagonal(base, std::vector<El>(n, Traits::one(base)));
  }

  std::size_t rank() const { return gram_.size(); }
  const Base& base() const { return base_; }
  const std::vector<std::vector<El>>& gram() const { return gram_; }
  const El& at(std::size_t i, std::size_t j) const { return gram_[i][j]; }

  El bilinear(const std::vector<El>& v, const std::vector<El>& w) const {
    if (v.size() != rank() || w.size() != rank())
      throw DimensionMismatch("bilinear: vector length != rank");
    El acc = Traits::zero(base_);
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j) acc = acc + v[i] * gram_[i][j] * w[j];
    return acc;
  }

  El evaluate(const std::vector<El>& v) const { return bilinear(v, v); }

  /// Q(Lambda) in O: integral diagonal, doubled off-diagonal integral.
  bool is_integral() const {
    for (std::size_t i = 0; i < rank(); ++i) {
      if (!Traits::is_integral(gram_[i][i])) return false;
      for (std::size_t j = i + 1; j < rank(); ++j)
        if (!Traits::is_integral(gram_[i][j] + gram_[i][j])) return false;
    }
    return true;
  }

  /// All bilinear values in O: every Gram entry integral.
  bool is_classical() const {
    for (const auto& row : gram_)
      for (const El& e : row)
        if (!Traits::is_integral(e)) return false;
    return true;
  }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rank(); ++i)
      for (std::size_t j = 0; j < rank(); ++j)
        if (i != j && !Traits::is_zero(gram_[i][j])) return false;
    return true;
  }

  /// Sylvester criterion with exact arithmetic: every leading principal
  /// minor totally positive.
  bool is_positive_definite() const {
    for (std::size_t k = 1; k <= rank(); ++k) {
      std::vector<std::vector<El>> m(k, std::vector<El>(k, Traits::zero(base_)));
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m[i][j] = gram_[i][j];
      El det = Traits::one(base_);
      bool flip = false;
      for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        while (piv < k && Traits::is_zero(m[piv][col])) ++piv;
        if (piv == k) return false;  // singular minor
        if (piv != col) {
          std::swap(m[piv], m[col]);
          flip = !flip;
        }
        det = det * m[col][col];
        const El inv_p = Traits::inverse(m[col][col]);
        for (std::size_t r = col + 1; r < k; ++r) {
          const El factor = m[r][col] * inv_p;
          for (std::size_t c = col; c < k; ++c)
            m[r][c] = m[r][c] - factor * m[col][c];
        }
      }
      if (flip) det = Traits::zero(base_) - det;
      if (!Traits::is_totally_positive(det)) return false;
    }
    return true;
  }

 private:
  Base base_;
  std::vector<std::vector<El>> gram_;
};

template <class El>
struct SplitResult {
  std::vector<El> unit_vector;
  std::vector<std::vector<El>> complement_basis;  // n-1 vectors of length n
  GramLattice<El> new_gram;
};

/// Orthogonal splitting along a vector of unit value: w_i = e_i - B(e_i,v) Q(v)^{-1} v
/// over a basis completion of v.
template <class El>
SplitResult<El> split_unit(const GramLattice<El>& L, const std::vector<El>& v) {
  using Traits = ElementTraits<El>;
  if (!L.is_classical()) throw NotClassical("split_unit: lattice is not classical");
  if (v.size() != L.rank()) throw DimensionMismatch("split_unit: vector length != rank");
  for (const El& c : v)
    if (!Traits::is_integral(c))
      throw InvalidArgument("split_unit: vector is not in the lattice");
  const El q = L.evaluate(v);
  if (!Traits::is_unit(q)) throw NotUnit("split_unit: Q(v) is not a unit");

  // Completion: drop a coordinate where v is itself a unit.
  std::size_t skip = L.rank();
  for (std::size_t j = 0; j < v.size(); ++j)
    if (Traits::is_unit(v[j])) {
      skip = j;
      break;
    }
  if (skip == L.rank())
    throw Error("split_unit: no unit coordinate available for a basis completion");

  const El qinv = Traits::inverse(q);
  std::vector<std::vector<El>> comp;
  for (std::size_t i = 0; i < L.rank(); ++i) {
    if (i == skip) continue;
    std::vector<El> e(L.rank(), Traits::zero(L.base()));
    e[i] = Traits::one(L.base());
    const El factor = L.bilinear(e, v) * qinv;
    for (std::size_t k = 0; k < L.rank(); ++k) e[k] = e[k] - factor * v[k];
    comp.push_back(std::move(e));
  }

  const std::size_t m = comp.size();
  std::vector<std::vector<El>> g(m, std::vector<El>(m, Traits::zero(L.base())));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      g[i][j] = L.bilinear(comp[i], comp[j]);
      g[j][i] = g[i][j];
    }
  return {v, std::move(comp), GramLattice<El>(L.base(), std::move(g))};
}

/// Diagonal lattice with entries prod_{j in I} e_j over all subsets I of the
/// n given totally positive units, indexed by bitmask.
template <class El>
GramLattice<El> diagonal_universal_2n(const typename ElementTraits<El>::Base& base,
                                      const std::vector<El>& units) {
  using Traits = ElementTraits<El>;
  if (units.size() > 20) throw InvalidArgument("diagonal_universal_2n: n too large");
  for (const El& e : units)
    if (!Traits::is_unit(e) || !Traits::is_totally_positive(e))
      throw NotTotallyPositiveUnit("diagonal_universal_2n: entry is not a totally positive unit");
  std::vector<El> diag;
  const std::size_t n = units.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    El prod = Traits::one(base);
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (std::size_t{1} << j)) prod = prod * units[j];
    diag.push_back(std::move(prod));
  }
  return GramLattice<El>::diagonal(base, diag);
}

struct RepresentOptions {
  bool exhaustive = true;
  std::uint64_t max_nodes = 0;  // 0 = unlimited
};

template <class El>
struct RepresentResult {
  std::optional<std::vector<El>> vec;
  bool exhausted;        // the box search ran to completion
  std::uint64_t nodes;   // candidate trials
};

namespace detail {

template <class El>
bool represent_rec(const GramLattice<El>& L, std::size_t idx, const El& rem,
                   std::vector<El>& acc, RepresentResult<El>& res,
                   const RepresentOptions& opt) {
  using Traits = ElementTraits<El>;
  const auto& base = L.base();
  if (opt.max_nodes && res.nodes > opt.max_nodes) {
    res.exhausted = false;
    return false;
  }
  if (Traits::is_zero(rem)) {
    for (std::size_t k = idx; k < L.rank(); ++k) acc[k] = Traits::zero(base);
    return true;
  }
  if (idx == L.rank()) return false;
  const El a = L.at(idx, idx);
  const El u = rem * Traits::inverse(a);
  if (idx + 1 == L.rank()) {
    ++res.nodes;
    // Last coordinate: solve g^2 = rem / a exactly.
    if (auto g = Traits::exact_sqrt(u)) {
      if (Traits::is_integral(*g)) {
        acc[idx] = Traits::sign(*g) < 0 ? Traits::zero(base) - *g : *g;
        return true;
      }
    }
    return false;
  }
  for (const El& g : Traits::square_bounded_candidates(base, u)) {
    ++res.nodes;
    if (opt.max_nodes && res.nodes > opt.max_nodes) {
      res.exhausted = false;
      return false;
    }
    acc[idx] = g;
    const El next = rem - a * g * g;
    if (represent_rec(L, idx + 1, next, acc, res, opt)) return true;
    if (!res.exhausted) return false;
  }
  return false;
}

}  // namespace detail

/// Bounded-box representation search over a positive definite diagonal
/// lattice. The per-embedding bound |sigma(g_i)| <= (sigma(beta)/sigma(a_i))^{1/2}
/// is forced by positive definiteness, so a completed search that finds
/// nothing is a proof of non-representation.
template <class El>
RepresentResult<El> represent_search(const GramLattice<El>& L, const El& beta,
                                     const RepresentOptions& opt = {}) {
  using Traits = ElementTraits<El>;
  if (!L.is_diagonal())
    throw NonDiagonal("represent: only diagonal Gram matrices are searchable");
  for (std::size_t i = 0; i < L.rank(); ++i)
    if (!Traits::is_totally_positive(L.at(i, i)))
      throw InvalidArgument("represent: diagonal entry not totally positive");
  if (!Traits::is_integral(beta))
    throw InvalidArgument("represent: target is not integral");
  if (!Traits::is_zero(beta) && !Traits::is_totally_positive(beta))
    throw InvalidArgument("represent: target is neither zero nor totally positive");

  RepresentResult<El> res{std::nullopt, true, 0};
  std::vector<El> acc(L.rank(), Traits::zero(L.base()));
  if (detail::represent_rec(L, 0, beta, acc, res, opt)) res.vec = acc;
  return res;
}

template <class El>
std::optional<std::vector<El>> represent(const GramLattice<El>& L, const El& beta,
                                         bool exhaustive = true) {
  RepresentOptions opt;
  opt.exhaustive = exhaustive;
  return represent_search(L, beta, opt).vec;
}

template <class El>
struct RankRunOutcome {
  enum class Kind { SplitsCompleted, RepresentationNotFound } kind;
  int splits;
  std::optional<El> failed_unit;
  std::string evidence;
  std::uint64_t nodes_total;

  bool completed() const { return kind == Kind::SplitsCompleted; }
};

/// Replays the rank-lower-bound induction: for each unit, search a
/// representation in the current orthogonal complement and split it off.
/// Unit indecomposability (asserted here at desk scale by bounded
/// decomposition search) forces any representing vector into the complement
/// when the units lie in pairwise distinct square classes, which the caller
/// certifies separately.
template <class El>
RankRunOutcome<El> rank_lower_bound_run(const GramLattice<El>& L,
                                        const std::vector<El>& units,
                                        std::uint64_t search_budget = 0) {
  using Traits = ElementTraits<El>;
  if (!L.is_classical()) throw NotClassical("rank_lower_bound_run: lattice not classical");
  if (!L.is_positive_definite())
    throw InvalidArgument("rank_lower_bound_run: lattice not positive definite");

  GramLattice<El> current = L;
  RankRunOutcome<El> out{RankRunOutcome<El>::Kind::SplitsCompleted, 0, std::nullopt,
                         "", 0};
  for (const El& eps : units) {
    if (!Traits::is_unit(eps) || !Traits::is_totally_positive(eps))
      throw NotTotallyPositiveUnit("rank_lower_bound_run: target is not a totally positive unit");
    if (!Traits::check_indecomposable_unit(L.base(), eps))
      throw Error("rank_lower_bound_run: unit decomposed into totally positive integers");

    if (current.rank() == 0) {
      out.kind = RankRunOutcome<El>::Kind::RepresentationNotFound;
      out.failed_unit = eps;
      out.evidence = "orthogonal complement has rank 0; exhaustive by emptiness";
      return out;
    }
    RepresentOptions opt;
    opt.max_nodes = search_budget;
    RepresentResult<El> res = represent_search(current, eps, opt);
    out.nodes_total += res.nodes;
    if (!res.vec) {
      if (!res.exhausted)
        throw BudgetExceeded("rank_lower_bound_run: node budget exhausted after " +
                             std::to_string(out.splits) + " splits");
      out.kind = RankRunOutcome<El>::Kind::RepresentationNotFound;
      out.failed_unit = eps;
      out.evidence = "exhaustive box search (" + std::to_string(res.nodes) +
                     " nodes) over per-embedding bounds sigma(gamma_i)^2 <= "
                     "sigma(beta)/sigma(a_i)";
      return out;
    }
    current = split_unit(current, *res.vec).new_gram;
    ++out.splits;
  }
  return out;
}

}  // namespace unitforge
