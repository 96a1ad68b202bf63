#include "unitforge/biquad_field.hpp"

#include <algorithm>

#include "unitforge/errors.hpp"

namespace unitforge {

BiquadField::BiquadField(Int d1, Int d2, const FactorConfig& cfg)
    : d1_(std::move(d1)), d2_(std::move(d2)) {
  if (d1_ < 2 || d2_ < 2)
    throw InvalidArgument("BiquadField: generators must be > 1");
  if (d1_ == d2_) throw InvalidArgument("BiquadField: d1 = d2");
  if (!is_squarefree(d1_, cfg))
    throw InvalidArgument("BiquadField: d1 = " + d1_.get_str() + " not squarefree");
  if (!is_squarefree(d2_, cfg))
    throw InvalidArgument("BiquadField: d2 = " + d2_.get_str() + " not squarefree");
  d3_ = squarefree_part(d1_ * d2_, cfg).s;
  if (d3_ == 1)
    throw InvalidArgument("BiquadField: d1*d2 is a square, the field is not biquadratic");
  // For squarefree d1 = ab, d2 = ac (a = gcd): d3 = bc and the g constants
  // are the pairwise gcds.
  g12_ = gcd(d1_, d2_);
  g13_ = gcd(d1_, d3_);
  g23_ = gcd(d2_, d3_);
  if (g12_ * g12_ * d3_ != d1_ * d2_ || g13_ * g13_ * d2_ != d1_ * d3_ ||
      g23_ * g23_ * d1_ != d2_ * d3_)
    throw Error("BiquadField: radical product constants inconsistent");
}

const Int& BiquadField::d(int i) const {
  switch (i) {
    case 1: return d1_;
    case 2: return d2_;
    case 3: return d3_;
    default: throw InvalidArgument("BiquadField: subfield index must be 1, 2 or 3");
  }
}

BiquadElem BiquadElem::from_subfield(const BiquadField& f, int i, const QuadElem& e) {
  if (e.field().D() != f.d(i))
    throw InvalidArgument("from_subfield: element lives in Q(sqrt(" +
                          e.field().D().get_str() + ")), not subfield " +
                          std::to_string(i));
  std::array<Rat, 4> c{e.x(), Rat(0), Rat(0), Rat(0)};
  c[static_cast<std::size_t>(i)] = e.y();
  return {f, c};
}

bool BiquadElem::is_zero() const {
  return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0;
}

void BiquadElem::check_same_field(const BiquadElem& o) const {
  if (field_ != o.field_) throw InvalidArgument("BiquadElem: mixed fields");
}

BiquadElem BiquadElem::operator+(const BiquadElem& o) const {
  check_same_field(o);
  return {field_, {c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]}};
}

BiquadElem BiquadElem::operator-(const BiquadElem& o) const {
  check_same_field(o);
  return {field_, {c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2], c_[3] - o.c_[3]}};
}

BiquadElem BiquadElem::operator-() const {
  return {field_, {-c_[0], -c_[1], -c_[2], -c_[3]}};
}

BiquadElem BiquadElem::operator*(const BiquadElem& o) const {
  check_same_field(o);
  const Rat D1 = Rat(field_.d1()), D2 = Rat(field_.d2()), D3 = Rat(field_.d3());
  const Rat G12 = Rat(field_.g12()), G13 = Rat(field_.g13()), G23 = Rat(field_.g23());
  const auto& x = c_;
  const auto& y = o.c_;
  return {field_,
          {x[0] * y[0] + D1 * x[1] * y[1] + D2 * x[2] * y[2] + D3 * x[3] * y[3],
           x[0] * y[1] + x[1] * y[0] + G23 * (x[2] * y[3] + x[3] * y[2]),
           x[0] * y[2] + x[2] * y[0] + G13 * (x[1] * y[3] + x[3] * y[1]),
           x[0] * y[3] + x[3] * y[0] + G12 * (x[1] * y[2] + x[2] * y[1])}};
}

BiquadElem BiquadElem::operator+(const Rat& q) const {
  return {field_, {c_[0] + q, c_[1], c_[2], c_[3]}};
}

BiquadElem BiquadElem::operator-(const Rat& q) const {
  return {field_, {c_[0] - q, c_[1], c_[2], c_[3]}};
}

BiquadElem BiquadElem::operator*(const Rat& q) const {
  return {field_, {c_[0] * q, c_[1] * q, c_[2] * q, c_[3] * q}};
}

BiquadElem BiquadElem::sigma(int i) const {
  std::array<Rat, 4> c = c_;
  switch (i) {
    case 1: c[2] = -c[2]; c[3] = -c[3]; break;
    case 2: c[1] = -c[1]; c[3] = -c[3]; break;
    case 3: c[1] = -c[1]; c[2] = -c[2]; break;
    default: throw InvalidArgument("sigma: index must be 1, 2 or 3");
  }
  return {field_, c};
}

QuadElem BiquadElem::rel_norm(int i) const {
  const BiquadElem p = *this * sigma(i);
  for (int k = 1; k <= 3; ++k) {
    if (k != i && p.c(k) != 0)
      throw CoercionFailure("rel_norm: coordinate " + std::to_string(k) +
                            " did not vanish");
  }
  return {field_.subfield(i), p.c(0), p.c(i)};
}

QuadElem BiquadElem::rel_trace(int i) const {
  const BiquadElem s = *this + sigma(i);
  for (int k = 1; k <= 3; ++k) {
    if (k != i && s.c(k) != 0)
      throw CoercionFailure("rel_trace: coordinate " + std::to_string(k) +
                            " did not vanish");
  }
  return {field_.subfield(i), s.c(0), s.c(i)};
}

Rat BiquadElem::full_norm() const { return rel_norm(1).norm(); }

BiquadElem BiquadElem::inverse() const {
  if (is_zero()) throw DivisionByZero("BiquadElem::inverse: zero element");
  const BiquadElem p = sigma(1) * sigma(2) * sigma(3);
  const Rat n = full_norm();
  const BiquadElem inv = p * (Rat(1) / n);
  if (!((*this * inv) == from_rational(field_, Rat(1))))
    throw Error("BiquadElem::inverse: verification failed");
  return inv;
}

RatInterval BiquadElem::embedding_interval(int s1, int s2, unsigned prec_bits) const {
  RatInterval acc = RatInterval::point(c_[0]);
  acc = acc + sqrt_enclosure(field_.d1(), prec_bits).scaled(c_[1] * s1);
  acc = acc + sqrt_enclosure(field_.d2(), prec_bits).scaled(c_[2] * s2);
  acc = acc + sqrt_enclosure(field_.d3(), prec_bits).scaled(c_[3] * s1 * s2);
  return acc;
}

int BiquadElem::sign_at(int s1, int s2) const {
  if (is_zero()) return 0;
  return sign_by_refinement(
      [&](unsigned prec) { return embedding_interval(s1, s2, prec); });
}

std::array<Rat, 4> BiquadElem::char_poly() const {
  // Regular representation: column j holds the coordinates of e * basis_j.
  std::array<std::array<Rat, 4>, 4> M;
  const std::array<BiquadElem, 4> basis = {
      from_rational(field_, Rat(1)),
      BiquadElem(field_, {Rat(0), Rat(1), Rat(0), Rat(0)}),
      BiquadElem(field_, {Rat(0), Rat(0), Rat(1), Rat(0)}),
      BiquadElem(field_, {Rat(0), Rat(0), Rat(0), Rat(1)})};
  for (int j = 0; j < 4; ++j) {
    const BiquadElem col = *this * basis[static_cast<std::size_t>(j)];
    for (int i = 0; i < 4; ++i)
      M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          col.c_[static_cast<std::size_t>(i)];
  }

  // Faddeev-LeVerrier.
  auto matmul = [](const auto& A, const auto& B) {
    std::array<std::array<Rat, 4>, 4> C{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Rat s(0);
        for (int k = 0; k < 4; ++k)
          s += A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] *
               B[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = s;
      }
    return C;
  };
  auto trace = [](const auto& A) -> Rat {
    return A[0][0] + A[1][1] + A[2][2] + A[3][3];
  };

  std::array<Rat, 4> c;
  auto Mk = M;
  c[0] = -trace(Mk);
  for (int k = 2; k <= 4; ++k) {
    auto shifted = Mk;
    for (int i = 0; i < 4; ++i)
      shifted[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] +=
          c[static_cast<std::size_t>(k - 2)];
    Mk = matmul(M, shifted);
    c[static_cast<std::size_t>(k - 1)] = -trace(Mk) / k;
  }
  return c;
}

bool BiquadElem::is_integer() const {
  for (const Rat& coef : char_poly())
    if (!unitforge::is_integer(coef)) return false;
  return true;
}

bool BiquadElem::is_unit() const {
  if (is_zero() || !is_integer()) return false;
  const Rat n = full_norm();
  if (abs(n.get_num()) != 1 || n.get_den() != 1) return false;
  return inverse().is_integer();
}

bool BiquadElem::is_totally_positive() const {
  if (is_zero()) return false;
  for (int s1 : {1, -1})
    for (int s2 : {1, -1})
      if (sign_at(s1, s2) < 0) return false;
  return true;
}

bool BiquadElem::is_totally_negative() const {
  return (-*this).is_totally_positive();
}

std::optional<BiquadElem> biquad_sqrt(const BiquadElem& e) {
  const BiquadField& F = e.field();
  if (e.is_zero()) return BiquadElem::from_rational(F, Rat(0));
  for (int i = 1; i <= 3; ++i) {
    const QuadElem Ni = e.rel_norm(i);
    const auto n0 = quad_sqrt(Ni);
    if (!n0) continue;
    const QuadElem tr = e.rel_trace(i);
    for (const QuadElem& n : {*n0, -*n0}) {
      // If s^2 = e then t = s + sigma_i(s) lies in K_i and
      // t^2 = Tr_i(e) + 2 n with n = s sigma_i(s) a root of N_i.
      const QuadElem t2 = tr + n * Rat(2);
      const auto t = quad_sqrt(t2);
      if (!t || t->is_zero()) continue;
      const BiquadElem num = e + BiquadElem::from_subfield(F, i, n);
      const BiquadElem cand = num / BiquadElem::from_subfield(F, i, *t);
      if (cand * cand == e) return cand;
    }
  }
  return std::nullopt;
}

bool prop61_identity_check(const BiquadElem& e) {
  if (e.is_zero()) throw InvalidArgument("prop61_identity_check: zero element");
  BiquadElem rhs = BiquadElem::from_rational(e.field(), Rat(1) / e.full_norm());
  for (int i = 1; i <= 3; ++i)
    rhs = rhs * BiquadElem::from_subfield(e.field(), i, e.rel_norm(i));
  return e * e == rhs;
}

std::string to_string(const BiquadElem& e) {
  std::string out;
  detail::append_signed_term(out, e.c(0), "");
  for (int i = 1; i <= 3; ++i)
    detail::append_signed_term(out, e.c(i), "sqrt(" + e.field().d(i).get_str() + ")");
  return out;
}

namespace {

// Whether some quadratic subfield has a totally positive non-square unit.
// A prime divisor p = 3 mod 4 of some d_i settles it without computing a
// fundamental unit; otherwise fall back to the Pell report.
bool some_subfield_has_tp_nonsquare_unit(const BiquadField& F, const FactorConfig& cfg) {
  for (int i = 1; i <= 3; ++i)
    for (const auto& [p, e] : factorize(F.d(i), cfg)) {
      (void)e;
      if (p % 4 == 3) return true;
    }
  for (int i = 1; i <= 3; ++i)
    if (pell_report(F.subfield(i), cfg).tp_unit_exists) return true;
  return false;
}

}  // namespace

Cor63Result cor63_test(const BiquadElem& alpha, const FactorConfig& cfg) {
  if (!alpha.is_unit()) throw InvalidArgument("cor63_test: alpha must be a unit");
  if (alpha.is_totally_negative())
    throw InvalidArgument("cor63_test: alpha must not be totally negative");
  if (!some_subfield_has_tp_nonsquare_unit(alpha.field(), cfg))
    throw PreconditionUnverifiable(
        "cor63_test: no quadratic subfield with a totally positive non-square unit");

  Cor63Result res{};
  std::array<std::optional<QuadElem>, 3> roots;
  for (int i = 1; i <= 3; ++i) {
    roots[static_cast<std::size_t>(i - 1)] = quad_sqrt(alpha.rel_norm(i));
    res.norms_square[static_cast<std::size_t>(i - 1)] =
        roots[static_cast<std::size_t>(i - 1)].has_value();
  }
  res.in_Q_square_class =
      res.norms_square[0] && res.norms_square[1] && res.norms_square[2];
  if (!res.in_Q_square_class) return res;

  // alpha = eps_1 eps_2 eps_3 with each eps_i a totally positive root of the
  // relative norm; the product identity is then checked exactly.
  std::array<QuadElem, 3> eps = {*roots[0], *roots[1], *roots[2]};
  for (auto& s : eps) {
    if (s.is_totally_positive()) continue;
    if ((-s).is_totally_positive()) {
      s = -s;
      continue;
    }
    throw Error("cor63_test: no totally positive choice of relative-norm root");
  }
  BiquadElem prod = BiquadElem::from_rational(alpha.field(), Rat(1));
  for (int i = 1; i <= 3; ++i)
    prod = prod * BiquadElem::from_subfield(alpha.field(), i,
                                            eps[static_cast<std::size_t>(i - 1)]);
  if (!(prod == alpha))
    throw Error("cor63_test: decomposition product mismatch");
  res.decomposition = eps;
  return res;
}

Prop65Record prop65_family(const Int& n, const FactorConfig& cfg) {
  if (n < 1 || n % 12 != 1)
    throw BadResidue("prop65_family: n = " + n.get_str() + " is not 1 mod 12");
  const Int d1 = n * (n + 1);
  const Int d2 = 3 * n * (3 * n + 4);
  const Int d3 = (3 * n + 3) * (3 * n + 4);
  if (!is_squarefree(d1, cfg))
    throw NotSquareFree("prop65_family: d1 = " + d1.get_str() + " is not squarefree");
  if (!is_squarefree(d2, cfg))
    throw NotSquareFree("prop65_family: d2 = " + d2.get_str() + " is not squarefree");
  if (!is_squarefree(d3, cfg))
    throw NotSquareFree("prop65_family: d3 = " + d3.get_str() + " is not squarefree");

  BiquadField F(d1, d2, cfg);
  if (F.d3() != d3) throw Error("prop65_family: derived d3 mismatch");

  const BiquadElem mu(F, {make_rat(3 * n + 4, 2), make_rat(3, 2), make_rat(1, 2),
                          make_rat(1, 2)});

  Prop65Record rec{n, F, mu, false, false, false, false, false, false};
  rec.relnorm1_is_one =
      mu.rel_norm(1) == QuadElem::from_rational(F.subfield(1), Rat(1));
  rec.relnorm2_matches =
      mu.rel_norm(2) == QuadElem(F.subfield(2), make_rat(3 * n + 2, 2), make_rat(1, 2));
  rec.relnorm3_matches =
      mu.rel_norm(3) == QuadElem(F.subfield(3), Rat(6 * n + 7), Rat(2));
  rec.totally_positive = mu.is_totally_positive();
  rec.unit = mu.is_unit();
  rec.not_in_rational_square_class = !cor63_test(mu, cfg).in_Q_square_class;
  return rec;
}

}  // namespace unitforge
