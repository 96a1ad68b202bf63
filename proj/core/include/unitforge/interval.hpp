#pragma once

#include <functional>

#include "unitforge/rational.hpp"

namespace unitforge {

/// Closed rational interval [lo, hi] certified to contain an exact real.
struct RatInterval {
  Rat lo;
  Rat hi;

  RatInterval() : lo(0), hi(0) {}
  RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}
  static RatInterval point(const Rat& v) { return {v, v}; }

  RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
  RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
  RatInterval operator-() const { return {-hi, -lo}; }

  /// Scale by an exact rational.
  RatInterval scaled(const Rat& c) const {
    if (c >= 0) return {c * lo, c * hi};
    return {c * hi, c * lo};
  }

  RatInterval operator*(const RatInterval& o) const;

  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  Rat width() const { return hi - lo; }

  /// Certified double enclosure as (midpoint, radius).
  std::pair<double, double> to_double() const;
};

/// Encloses sqrt(d) for d >= 0 with width <= 2^{1-prec_bits}.
RatInterval sqrt_enclosure(const Int& d, unsigned prec_bits);

/// Encloses sqrt(q) for a rational q >= 0.
RatInterval sqrt_enclosure(const Rat& q, unsigned prec_bits);

/// Sign of a nonzero exact real given an interval generator of increasing
/// precision. The caller is responsible for the exact zero pretest; the
/// refinement loop terminates only on nonzero values.
int sign_by_refinement(const std::function<RatInterval(unsigned)>& at_precision);

}  // namespace unitforge
