#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unitforge/core_arith.hpp"
#include "unitforge/rational.hpp"

namespace unitforge {

/// Real quadratic field Q(sqrt(D)), D squarefree >= 2.
class QuadField {
 public:
  explicit QuadField(Int D, const FactorConfig& cfg = {});

  const Int& D() const { return D_; }
  const Int& disc() const { return disc_; }

  bool operator==(const QuadField& o) const { return D_ == o.D_; }
  bool operator!=(const QuadField& o) const { return !(*this == o); }

 private:
  Int D_;
  Int disc_;  // D when D = 1 mod 4, else 4D
};

/// Element x + y*sqrt(D) with exact rational coordinates.
class QuadElem {
 public:
  QuadElem(QuadField f, Rat x, Rat y)
      : field_(std::move(f)), x_(std::move(x)), y_(std::move(y)) {}
  static QuadElem from_rational(const QuadField& f, const Rat& q) {
    return {f, q, Rat(0)};
  }

  const QuadField& field() const { return field_; }
  const Rat& x() const { return x_; }
  const Rat& y() const { return y_; }

  bool is_zero() const { return x_ == 0 && y_ == 0; }
  bool is_rational() const { return y_ == 0; }

  QuadElem conjugate() const { return {field_, x_, -y_}; }
  Rat norm() const { return x_ * x_ - Rat(field_.D()) * y_ * y_; }
  Rat trace() const { return 2 * x_; }

  QuadElem operator+(const QuadElem& o) const;
  QuadElem operator-(const QuadElem& o) const;
  QuadElem operator*(const QuadElem& o) const;
  QuadElem operator-() const { return {field_, -x_, -y_}; }
  QuadElem inverse() const;
  QuadElem operator/(const QuadElem& o) const { return *this * o.inverse(); }

  QuadElem operator+(const Rat& q) const { return {field_, x_ + q, y_}; }
  QuadElem operator-(const Rat& q) const { return {field_, x_ - q, y_}; }
  QuadElem operator*(const Rat& q) const { return {field_, x_ * q, y_ * q}; }

  QuadElem pow(unsigned long e) const;

  bool operator==(const QuadElem& o) const {
    return field_ == o.field_ && x_ == o.x_ && y_ == o.y_;
  }
  bool operator!=(const QuadElem& o) const { return !(*this == o); }

  /// Sign of the canonical real value x + y*sqrt(D); exact, no floating point.
  int sign() const;
  /// Sign of the conjugate value x - y*sqrt(D).
  int conjugate_sign() const { return conjugate().sign(); }

  /// Integral over Z: trace and norm both integers.
  bool is_integer() const { return unitforge::is_integer(trace()) && unitforge::is_integer(norm()); }
  bool is_totally_positive() const { return sign() > 0 && conjugate_sign() > 0; }
  bool is_unit() const { return is_integer() && abs(norm().get_num()) == 1 && norm().get_den() == 1; }

 private:
  void check_same_field(const QuadElem& o) const;

  QuadField field_;
  Rat x_;
  Rat y_;
};

/// Fundamental unit eps_K > 1: {-1, eps_K} generates the unit group.
/// Found on the continued fraction ladders of sqrt(D) and, when D = 1 mod 4,
/// of (1 + sqrt(D))/2 (half-integer solutions of X^2 - D Y^2 = +-4).
QuadElem fundamental_unit(const QuadField& field);

/// All units > 1 encountered along the CF ladders up to the first period end
/// of each; the minimum is the fundamental unit. Exposed for minimality tests.
std::vector<QuadElem> cf_ladder_units(const QuadField& field);

/// delta_K: the squarefree part of Tr(eps_K + 1) when Norm(eps_K) = 1.
/// Postconditions (delta * eps a square in K, delta | disc, delta not in
/// {1, disc}) are verified before returning.
Int delta(const QuadField& field, const FactorConfig& cfg = {});

struct PellReport {
  bool tp_unit_exists;       // eps_K totally positive
  int norm_eps;              // Norm(eps_K), +1 or -1
  bool neg_pell_solvable;    // X^2 - D Y^2 = -1 solvable in Z^2
  bool has_p3mod4_divisor;   // some prime p = 3 mod 4 divides D
};

/// The four quantities are computed along independent routes.
PellReport pell_report(const QuadField& field, const FactorConfig& cfg = {});

struct Lemma51Witness {
  QuadElem beta;  // conjugate(e) + 1
  Rat t;          // trace(e + 1)
};

/// For norm-one e != -1: beta with e * beta^2 = Tr(e + 1), verified exactly.
Lemma51Witness lemma51_witness(const QuadElem& e);

/// Square root within the field when it exists.
std::optional<QuadElem> quad_sqrt(const QuadElem& e);

struct SignatureRank {
  int rank;           // GF(2) rank of the unit sign image in {+-1}^2
  int quotient_size;  // |O^{+,x} / O^{x2}| = 2^(2 - rank)
};

SignatureRank signature_rank(const QuadField& field);

/// Canonical form "x + y*sqrt(D)" with rationals as "p/q".
std::string to_string(const QuadElem& e);

/// Integral elements gamma with sigma1(gamma) in [lo1, hi1] and
/// sigma2(gamma) in [lo2, hi2]; membership verified exactly. This is the
/// quadratic-layer box enumerator behind representation search and
/// bounded-house enumeration.
std::vector<QuadElem> enumerate_integral_box(const QuadField& field, const Rat& lo1,
                                             const Rat& hi1, const Rat& lo2,
                                             const Rat& hi2);

}  // namespace unitforge
