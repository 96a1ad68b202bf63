#include "unitforge/interval.hpp"

#include <algorithm>
#include <cmath>

namespace unitforge {

RatInterval RatInterval::operator*(const RatInterval& o) const {
  const Rat a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
  return {std::min(std::min(a, b), std::min(c, d)),
          std::max(std::max(a, b), std::max(c, d))};
}

std::pair<double, double> RatInterval::to_double() const {
  const double l = lo.get_d();
  const double h = hi.get_d();
  // get_d truncates toward zero; pad by a few ulps to stay certified.
  double lpad = std::nextafter(std::nextafter(l, -HUGE_VAL), -HUGE_VAL);
  double hpad = std::nextafter(std::nextafter(h, HUGE_VAL), HUGE_VAL);
  const double mid = (lpad + hpad) / 2;
  const double rad = std::max(hpad - mid, mid - lpad);
  return {mid, rad};
}

RatInterval sqrt_enclosure(const Int& d, unsigned prec_bits) {
  if (d < 0) throw InvalidArgument("sqrt_enclosure: negative input");
  if (d == 0) return RatInterval::point(Rat(0));
  // s = isqrt(d * 4^k)  =>  s/2^k <= sqrt(d) < (s+1)/2^k
  Int scaled = d;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * prec_bits);
  const Int s = isqrt(scaled);
  Int two_k = 1;
  mpz_mul_2exp(two_k.get_mpz_t(), two_k.get_mpz_t(), prec_bits);
  return {make_rat(s, two_k), make_rat(s + 1, two_k)};
}

RatInterval sqrt_enclosure(const Rat& q, unsigned prec_bits) {
  if (q < 0) throw InvalidArgument("sqrt_enclosure: negative input");
  if (q == 0) return RatInterval::point(Rat(0));
  // sqrt(n/d) = sqrt(n*d)/d
  const Int nd = q.get_num() * q.get_den();
  RatInterval root = sqrt_enclosure(nd, prec_bits);
  return root.scaled(make_rat(1, q.get_den()));
}

int sign_by_refinement(const std::function<RatInterval(unsigned)>& at_precision) {
  for (unsigned prec = 32;; prec *= 2) {
    const RatInterval iv = at_precision(prec);
    if (iv.lo > 0) return 1;
    if (iv.hi < 0) return -1;
  }
}

}  // namespace unitforge
