#pragma once

#include <array>
#include <optional>

#include "unitforge/interval.hpp"
#include "unitforge/quad_field.hpp"

namespace unitforge {

/// Biquadratic field Q(sqrt(d1), sqrt(d2)) with Galois group (Z/2)^2.
/// d3 is the squarefree part of d1*d2; the g constants record the radical
/// products sqrt(di)*sqrt(dj) = gij*sqrt(dk).
class BiquadField {
 public:
  BiquadField(Int d1, Int d2, const FactorConfig& cfg = {});

  const Int& d(int i) const;  // i in {1,2,3}
  const Int& d1() const { return d1_; }
  const Int& d2() const { return d2_; }
  const Int& d3() const { return d3_; }
  const Int& g12() const { return g12_; }
  const Int& g13() const { return g13_; }
  const Int& g23() const { return g23_; }

  QuadField subfield(int i) const { return QuadField(d(i)); }

  bool operator==(const BiquadField& o) const {
    return d1_ == o.d1_ && d2_ == o.d2_;
  }
  bool operator!=(const BiquadField& o) const { return !(*this == o); }

 private:
  Int d1_, d2_, d3_;
  Int g12_, g13_, g23_;
};

/// Element over the basis (1, sqrt(d1), sqrt(d2), sqrt(d3)) with exact
/// rational coordinates. The four archimedean embeddings are the sign
/// choices (s1, s2) on sqrt(d1), sqrt(d2); the sqrt(d3) sign is s1*s2.
class BiquadElem {
 public:
  BiquadElem(BiquadField f, std::array<Rat, 4> coords)
      : field_(std::move(f)), c_(std::move(coords)) {}
  static BiquadElem from_rational(const BiquadField& f, const Rat& q) {
    return {f, {q, Rat(0), Rat(0), Rat(0)}};
  }
  /// Lift of x + y*sqrt(d_i) from the i-th quadratic subfield.
  static BiquadElem from_subfield(const BiquadField& f, int i, const QuadElem& e);

  const BiquadField& field() const { return field_; }
  const std::array<Rat, 4>& coords() const { return c_; }
  const Rat& c(int i) const { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const;
  bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }

  BiquadElem operator+(const BiquadElem& o) const;
  BiquadElem operator-(const BiquadElem& o) const;
  BiquadElem operator*(const BiquadElem& o) const;
  BiquadElem operator-() const;
  BiquadElem inverse() const;
  BiquadElem operator/(const BiquadElem& o) const { return *this * o.inverse(); }

  BiquadElem operator+(const Rat& q) const;
  BiquadElem operator-(const Rat& q) const;
  BiquadElem operator*(const Rat& q) const;

  bool operator==(const BiquadElem& o) const {
    return field_ == o.field_ && c_ == o.c_;
  }
  bool operator!=(const BiquadElem& o) const { return !(*this == o); }

  /// sigma_i fixes sqrt(d_i) and negates the other two radicals.
  BiquadElem sigma(int i) const;

  /// Norm to the i-th quadratic subfield: e * sigma_i(e), coerced into
  /// Q(sqrt(d_i)). A nonvanishing off-subfield coordinate throws
  /// CoercionFailure (it would be an arithmetic bug).
  QuadElem rel_norm(int i) const;

  /// Trace to the i-th quadratic subfield: e + sigma_i(e).
  QuadElem rel_trace(int i) const;

  /// Norm to Q.
  Rat full_norm() const;

  /// Certified interval for the embedding with signs (s1, s2) in {+-1}.
  RatInterval embedding_interval(int s1, int s2, unsigned prec_bits) const;

  /// Exact sign at an embedding: coordinatewise zero test, then interval
  /// refinement (terminates because embeddings are injective).
  int sign_at(int s1, int s2) const;
  int sign() const { return sign_at(1, 1); }

  /// Characteristic polynomial coefficients of the regular representation:
  /// x^4 + c[0] x^3 + c[1] x^2 + c[2] x + c[3].
  std::array<Rat, 4> char_poly() const;

  bool is_integer() const;
  bool is_unit() const;
  bool is_totally_positive() const;
  bool is_totally_negative() const;

 private:
  void check_same_field(const BiquadElem& o) const;

  BiquadField field_;
  std::array<Rat, 4> c_;
};

/// Square root within the field when it exists. Works through the three
/// relative norms: n = sqrt(N_i) in K_i, t = sqrt(Tr_i(e) + 2n), s = (e+n)/t.
/// Rotating over i and both signs of n covers every nonzero square.
std::optional<BiquadElem> biquad_sqrt(const BiquadElem& e);

/// mu^2 = Norm(mu)^{-1} * prod_i Norm_{K/K_i}(mu), checked exactly.
bool prop61_identity_check(const BiquadElem& e);

struct Cor63Result {
  std::array<bool, 3> norms_square;  // Norm_{K/K_i}(alpha) in K_i^{x2}
  bool in_Q_square_class;            // alpha in K^{x2} Q^x
  std::optional<std::array<QuadElem, 3>> decomposition;  // totally positive eps_i
};

/// The square-class criterion for a unit that is not totally negative.
/// Requires some quadratic subfield with a totally positive non-square unit.
Cor63Result cor63_test(const BiquadElem& alpha, const FactorConfig& cfg = {});

struct Prop65Record {
  Int n;
  BiquadField field;
  BiquadElem mu;
  bool relnorm1_is_one;
  bool relnorm2_matches;  // (3n+2+sqrt(d2))/2
  bool relnorm3_matches;  // 6n+7+2*sqrt(d3)
  bool totally_positive;
  bool unit;
  bool not_in_rational_square_class;

  bool all_ok() const {
    return relnorm1_is_one && relnorm2_matches && relnorm3_matches &&
           totally_positive && unit && not_in_rational_square_class;
  }
};

/// The unit family mu over Q(sqrt(n(n+1)), sqrt(3n(3n+4))) for n = 1 mod 12
/// with all three d's squarefree; every claim is verified by exact arithmetic.
Prop65Record prop65_family(const Int& n, const FactorConfig& cfg = {});

/// Canonical form "x0 + x1*sqrt(d1) + x2*sqrt(d2) + x3*sqrt(d3)".
std::string to_string(const BiquadElem& e);

}  // namespace unitforge
