#include "unitforge/exact_real.hpp"

#include "unitforge/errors.hpp"

namespace unitforge {

int ExactReal::sign() const {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rat>) return sgn(v);
        else return v.sign();
      },
      v_);
}

std::optional<Rat> ExactReal::as_rational() const {
  if (const Rat* q = std::get_if<Rat>(&v_)) return *q;
  if (const QuadElem* e = std::get_if<QuadElem>(&v_)) {
    if (e->is_rational()) return e->x();
    return std::nullopt;
  }
  const BiquadElem& b = std::get<BiquadElem>(v_);
  if (b.is_rational()) return b.c(0);
  return std::nullopt;
}

RatInterval ExactReal::interval(unsigned prec_bits) const {
  return std::visit(
      [&](const auto& v) -> RatInterval {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rat>) {
          return RatInterval::point(v);
        } else if constexpr (std::is_same_v<T, QuadElem>) {
          RatInterval acc = RatInterval::point(v.x());
          return acc + sqrt_enclosure(v.field().D(), prec_bits).scaled(v.y());
        } else {
          return v.embedding_interval(1, 1, prec_bits);
        }
      },
      v_);
}

Int ExactReal::floor() const {
  if (auto q = as_rational()) return floor_rat(*q);
  // Irrational algebraic value: never an integer, so the enclosing interval
  // eventually settles on one floor.
  for (unsigned prec = 32;; prec *= 2) {
    const RatInterval iv = interval(prec);
    const Int flo = floor_rat(iv.lo);
    if (flo == floor_rat(iv.hi)) return flo;
  }
}

std::pair<double, double> ExactReal::approx() const {
  return interval(96).to_double();
}

int ExactReal::cmp(const ExactReal& o) const {
  // Difference as an exact element, then an exact sign.
  const auto lift_minus = [](const auto& a, const auto& b) -> ExactReal {
    return ExactReal(a - b);
  };
  if (const Rat* a = std::get_if<Rat>(&v_)) {
    if (const Rat* b = std::get_if<Rat>(&o.v_)) return sgn(Rat(*a - *b));
    return -o.cmp(*this);
  }
  if (const QuadElem* a = std::get_if<QuadElem>(&v_)) {
    if (const Rat* b = std::get_if<Rat>(&o.v_))
      return (*a - QuadElem::from_rational(a->field(), *b)).sign();
    if (const QuadElem* b = std::get_if<QuadElem>(&o.v_))
      return lift_minus(*a, *b).sign();
    throw InvalidArgument("ExactReal::cmp: quadratic vs biquadratic comparison");
  }
  const BiquadElem& a = std::get<BiquadElem>(v_);
  if (const Rat* b = std::get_if<Rat>(&o.v_))
    return (a - BiquadElem::from_rational(a.field(), *b)).sign();
  if (const BiquadElem* b = std::get_if<BiquadElem>(&o.v_))
    return lift_minus(a, *b).sign();
  throw InvalidArgument("ExactReal::cmp: biquadratic vs quadratic comparison");
}

Rat house_elem(const Rat& q) { return abs(q); }

QuadElem house_elem(const QuadElem& e) {
  QuadElem a = e.sign() < 0 ? -e : e;
  QuadElem c = e.conjugate();
  if (c.sign() < 0) c = -c;
  return (a - c).sign() >= 0 ? a : c;
}

BiquadElem house_elem(const BiquadElem& e) {
  BiquadElem best = e.sign() < 0 ? -e : e;
  for (int i = 1; i <= 3; ++i) {
    BiquadElem c = e.sigma(i);
    if (c.sign() < 0) c = -c;
    if ((c - best).sign() > 0) best = c;
  }
  return best;
}

ExactReal house(const Rat& q) { return ExactReal(house_elem(q)); }
ExactReal house(const QuadElem& e) { return ExactReal(house_elem(e)); }
ExactReal house(const BiquadElem& e) { return ExactReal(house_elem(e)); }

}  // namespace unitforge
