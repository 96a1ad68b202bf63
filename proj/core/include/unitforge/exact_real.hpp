#pragma once

#include <variant>

#include "unitforge/biquad_field.hpp"
#include "unitforge/interval.hpp"
#include "unitforge/quad_field.hpp"

namespace unitforge {

/// An exact real algebraic value (the canonical embedding of a supported
/// field element) together with certified interval approximations. Exact
/// comparisons are never decided by floats alone.
class ExactReal {
 public:
  explicit ExactReal(Rat v) : v_(std::move(v)) {}
  explicit ExactReal(QuadElem v) : v_(std::move(v)) {}
  explicit ExactReal(BiquadElem v) : v_(std::move(v)) {}

  int sign() const;
  bool is_zero() const { return sign() == 0; }

  /// Exact value when rational (quad y = 0, biquad radical coords 0).
  std::optional<Rat> as_rational() const;

  RatInterval interval(unsigned prec_bits) const;

  /// Exact floor; interval refinement on irrational values (which are never
  /// integers, so the refinement terminates).
  Int floor() const;

  /// Certified (value, radius) pair in doubles.
  std::pair<double, double> approx() const;

  /// Sign of (*this - o); requires compatible fields (rational values are
  /// compatible with everything).
  int cmp(const ExactReal& o) const;
  int cmp(const Rat& o) const { return cmp(ExactReal(o)); }

  const std::variant<Rat, QuadElem, BiquadElem>& value() const { return v_; }

 private:
  std::variant<Rat, QuadElem, BiquadElem> v_;
};

/// house = max |conjugate|. The result is the field element whose canonical
/// value equals the house, wrapped as an ExactReal.
ExactReal house(const Rat& q);
ExactReal house(const QuadElem& e);
ExactReal house(const BiquadElem& e);

/// Same, but returning the witnessing field element.
Rat house_elem(const Rat& q);
QuadElem house_elem(const QuadElem& e);
BiquadElem house_elem(const BiquadElem& e);

}  // namespace unitforge
