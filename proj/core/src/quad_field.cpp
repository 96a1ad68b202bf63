#include "unitforge/quad_field.hpp"

#include <algorithm>
#include <set>

#include "unitforge/errors.hpp"

namespace unitforge {

QuadField::QuadField(Int D, const FactorConfig& cfg) : D_(std::move(D)) {
  if (D_ < 2) throw InvalidArgument("QuadField: D must be >= 2");
  if (!is_squarefree(D_, cfg))
    throw InvalidArgument("QuadField: D = " + D_.get_str() + " is not squarefree");
  disc_ = (D_ % 4 == 1) ? D_ : 4 * D_;
}

void QuadElem::check_same_field(const QuadElem& o) const {
  if (field_ != o.field_)
    throw InvalidArgument("QuadElem: mixed fields Q(sqrt(" + field_.D().get_str() +
                          ")) and Q(sqrt(" + o.field_.D().get_str() + "))");
}

QuadElem QuadElem::operator+(const QuadElem& o) const {
  check_same_field(o);
  return {field_, x_ + o.x_, y_ + o.y_};
}

QuadElem QuadElem::operator-(const QuadElem& o) const {
  check_same_field(o);
  return {field_, x_ - o.x_, y_ - o.y_};
}

QuadElem QuadElem::operator*(const QuadElem& o) const {
  check_same_field(o);
  return {field_, x_ * o.x_ + Rat(field_.D()) * y_ * o.y_, x_ * o.y_ + y_ * o.x_};
}

QuadElem QuadElem::inverse() const {
  const Rat n = norm();
  if (n == 0) throw DivisionByZero("QuadElem::inverse: zero element");
  return {field_, x_ / n, -y_ / n};
}

QuadElem QuadElem::pow(unsigned long e) const {
  QuadElem acc = from_rational(field_, Rat(1));
  QuadElem base = *this;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

int QuadElem::sign() const {
  const int sx = sgn(x_);
  const int sy = sgn(y_);
  if (sy == 0) return sx;
  if (sx == 0) return sy;
  if (sx == sy) return sx;
  // Mixed signs: compare x^2 against D y^2. Equality would force x = y = 0
  // because D is not a square.
  const Rat c = x_ * x_ - Rat(field_.D()) * y_ * y_;
  if (sx > 0) return c > 0 ? 1 : -1;
  return c < 0 ? 1 : -1;
}

namespace {

// One convergent ladder for the quadratic irrational (P0 + sqrt(D)) / Q0,
// Q0 | D - P0^2. Elements h_k - k_k * conj(alpha) are tested for unit-ness;
// the walk stops when the (P, Q) state first repeats.
std::vector<QuadElem> ladder_units(const QuadField& field, const Int& P0, const Int& Q0) {
  const Int& D = field.D();
  const Int s = isqrt(D);
  Int P = P0, Q = Q0;
  Int h_prev = 1, h_prev2 = 0;  // h_{-1}, h_{-2}
  Int k_prev = 0, k_prev2 = 1;

  // conj(alpha) = (P0 - sqrt(D)) / Q0
  const Rat conj_x = make_rat(P0, Q0);
  const Rat conj_y = make_rat(-1, Q0);

  std::vector<QuadElem> units;
  std::set<std::pair<Int, Int>> seen;
  while (seen.insert({P, Q}).second) {
    Int a;
    mpz_fdiv_q(a.get_mpz_t(), Int(P + s).get_mpz_t(), Q.get_mpz_t());
    Int h = a * h_prev + h_prev2;
    Int k = a * k_prev + k_prev2;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;

    // theta = h - k * conj(alpha)
    QuadElem theta(field, Rat(h) - Rat(k) * conj_x, -Rat(k) * conj_y);
    if (theta.is_unit() && theta.sign() > 0 && (theta - Rat(1)).sign() > 0)
      units.push_back(theta);

    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  return units;
}

}  // namespace

std::vector<QuadElem> cf_ladder_units(const QuadField& field) {
  std::vector<QuadElem> units = ladder_units(field, 0, 1);  // sqrt(D)
  if (field.D() % 4 == 1) {
    // (1 + sqrt(D)) / 2 reaches the half-integer solutions of X^2 - DY^2 = +-4
    std::vector<QuadElem> half = ladder_units(field, 1, 2);
    units.insert(units.end(), half.begin(), half.end());
  }
  return units;
}

QuadElem fundamental_unit(const QuadField& field) {
  std::vector<QuadElem> units = cf_ladder_units(field);
  if (units.empty())
    throw Error("fundamental_unit: no unit on the CF ladders of D = " + field.D().get_str());
  const QuadElem* best = &units.front();
  for (const QuadElem& u : units)
    if ((u - *best).sign() < 0) best = &u;
  return *best;
}

Int delta(const QuadField& field, const FactorConfig& cfg) {
  const QuadElem eps = fundamental_unit(field);
  if (eps.norm() != 1)
    throw NormMinusOne("delta: Norm(eps) = -1 for D = " + field.D().get_str() +
                       ", delta is undefined");
  const Rat t = eps.trace() + 2;  // Tr(eps + 1)
  const Int d = squarefree_part(t.get_num(), cfg).s;  // t is a positive integer

  // PropDef postconditions, checked exactly.
  if (!quad_sqrt(eps * Rat(d)).has_value())
    throw Error("delta: delta*eps is not a square in K, D = " + field.D().get_str());
  if (!mpz_divisible_p(field.disc().get_mpz_t(), d.get_mpz_t()))
    throw Error("delta: delta does not divide the discriminant, D = " + field.D().get_str());
  if (d == 1 || d == field.disc())
    throw Error("delta: delta trivial for D = " + field.D().get_str());
  return d;
}

PellReport pell_report(const QuadField& field, const FactorConfig& cfg) {
  PellReport r{};
  const QuadElem eps = fundamental_unit(field);
  r.tp_unit_exists = eps.is_totally_positive();
  r.norm_eps = eps.norm() == 1 ? 1 : -1;

  // -1-Pell solvability read off the sqrt(D) ladder directly: the first
  // convergent with p^2 - D q^2 = +-1 decides it.
  r.neg_pell_solvable = false;
  {
    const Int& D = field.D();
    CFExpansion cf = cf_sqrt(D);
    Int h_prev = 1, h = cf.a0;
    Int k_prev = 0, k = 1;
    Int n = h * h - D * k * k;
    for (std::size_t i = 0; i + 1 < cf.period.size() && n != 1 && n != -1; ++i) {
      Int h_next = cf.period[i] * h + h_prev;
      Int k_next = cf.period[i] * k + k_prev;
      h_prev = h;
      h = h_next;
      k_prev = k;
      k = k_next;
      n = h * h - D * k * k;
    }
    r.neg_pell_solvable = (n == -1);
  }

  r.has_p3mod4_divisor = false;
  for (const auto& [p, e] : factorize(field.D(), cfg)) {
    (void)e;
    if (p % 4 == 3) {
      r.has_p3mod4_divisor = true;
      break;
    }
  }
  return r;
}

Lemma51Witness lemma51_witness(const QuadElem& e) {
  if (e.norm() != 1)
    throw InvalidArgument("lemma51_witness: element must have norm 1");
  QuadElem beta = e.conjugate() + Rat(1);
  if (beta.is_zero()) throw DegenerateBeta("lemma51_witness: e = -1 gives beta = 0");
  const Rat t = e.trace() + 2;
  const QuadElem lhs = e * beta * beta;
  if (!(lhs == QuadElem::from_rational(e.field(), t)))
    throw Error("lemma51_witness: identity e*beta^2 = Tr(e+1) failed");
  return {beta, t};
}

std::optional<QuadElem> quad_sqrt(const QuadElem& e) {
  const QuadField& F = e.field();
  const Rat& a = e.x();
  const Rat& b = e.y();
  if (b == 0) {
    if (auto u = rat_sqrt(a)) return QuadElem(F, *u, Rat(0));
    if (auto v = rat_sqrt(a / Rat(F.D()))) return QuadElem(F, Rat(0), *v);
    return std::nullopt;
  }
  // s = u + v sqrt(D), s^2 = e:  u^2 + D v^2 = a, 2uv = b.
  // Eliminating v: u^2 = (a +- sqrt(a^2 - D b^2)) / 2 = (a +- sqrt(norm)) / 2.
  const auto n = rat_sqrt(e.norm());
  if (!n) return std::nullopt;
  for (const Rat& root : {Rat(*n), Rat(-*n)}) {
    const Rat u2 = (a + root) / 2;
    if (auto u = rat_sqrt(u2)) {
      if (*u == 0) continue;
      const Rat v = b / (2 * *u);
      QuadElem s(F, *u, v);
      if (s * s == e) return s;
    }
  }
  return std::nullopt;
}

SignatureRank signature_rank(const QuadField& field) {
  const QuadElem eps = fundamental_unit(field);
  // sgn vectors over GF(2), coordinate 1 for a negative embedding value.
  // Generators of the unit group mod squares: -1 and eps.
  std::vector<std::array<bool, 2>> vecs;
  vecs.push_back({true, true});  // sgn(-1)
  vecs.push_back({eps.sign() < 0, eps.conjugate_sign() < 0});

  int rank = 0;
  std::array<std::optional<std::array<bool, 2>>, 2> pivots;
  for (auto v : vecs) {
    for (int c = 0; c < 2; ++c) {
      if (!v[c]) continue;
      if (pivots[c]) {
        v[0] = v[0] ^ (*pivots[c])[0];
        v[1] = v[1] ^ (*pivots[c])[1];
      } else {
        pivots[c] = v;
        ++rank;
        break;
      }
    }
  }
  return {rank, 1 << (2 - rank)};
}

std::string to_string(const QuadElem& e) {
  std::string out;
  detail::append_signed_term(out, e.x(), "");
  detail::append_signed_term(out, e.y(), "sqrt(" + e.field().D().get_str() + ")");
  return out;
}

namespace {

// Largest integer b with b * sqrt(D) <= H.
Int max_b_leq(const Rat& H, const Int& D) {
  const Rat t = H * H / Rat(D);
  if (H >= 0) return floor_sqrt_rat(t);
  const Int m = floor_sqrt_rat(t);
  if (Rat(m * m) == t) return -m;
  return -(m + 1);
}

}  // namespace

std::vector<QuadElem> enumerate_integral_box(const QuadField& field, const Rat& lo1,
                                             const Rat& hi1, const Rat& lo2,
                                             const Rat& hi2) {
  std::vector<QuadElem> out;
  if (lo1 > hi1 || lo2 > hi2) return out;
  const Int& D = field.D();
  const bool half_grid = (D % 4 == 1);  // O_K = Z[(1 + sqrt(D))/2]

  // Coordinates x = a/2, y = b/2 with a = b (mod 2); integer-only when
  // D != 1 (mod 4). a = sigma1 + sigma2 ranges over [lo1+lo2, hi1+hi2].
  const Int a_min = ceil_rat(lo1 + lo2);
  const Int a_max = floor_rat(hi1 + hi2);
  for (Int a = a_min; a <= a_max; ++a) {
    if (!half_grid && mpz_odd_p(a.get_mpz_t())) continue;
    // b*sqrt(D) = 2*sigma1 - a in [2lo1 - a, 2hi1 - a], and from sigma2:
    // b*sqrt(D) = a - 2*sigma2 in [a - 2hi2, a - 2lo2].
    const Rat L = std::max(Rat(2 * lo1 - Rat(a)), Rat(Rat(a) - 2 * hi2));
    const Rat H = std::min(Rat(2 * hi1 - Rat(a)), Rat(Rat(a) - 2 * lo2));
    if (L > H) continue;
    const Int b_max = max_b_leq(H, D);
    const Int b_min = -max_b_leq(-L, D);
    for (Int b = b_min; b <= b_max; ++b) {
      if (mpz_odd_p(a.get_mpz_t()) != mpz_odd_p(b.get_mpz_t())) continue;
      QuadElem g(field, make_rat(a, 2), make_rat(b, 2));
      // Exact membership check keeps the enumeration airtight.
      const QuadElem s1_lo = g - lo1, s1_hi = g - hi1;
      const QuadElem s2 = g.conjugate();
      if (s1_lo.sign() < 0 || s1_hi.sign() > 0) continue;
      if ((s2 - lo2).sign() < 0 || (s2 - hi2).sign() > 0) continue;
      out.push_back(g);
    }
  }
  return out;
}

}  // namespace unitforge
