#include "unitforge/northcott.hpp"

#include <cmath>

namespace unitforge {

namespace detail {

std::pair<double, double> log_interval(const RatInterval& iv) {
  if (iv.lo <= 0) throw InvalidArgument("log_interval: non-positive interval");
  double lo = iv.lo.get_d();
  double hi = iv.hi.get_d();
  for (int k = 0; k < 3; ++k) {
    lo = std::nextafter(lo, 0.0);  // positive values truncate toward zero
    hi = std::nextafter(hi, HUGE_VAL);
  }
  double l = std::log(lo);
  double h = std::log(hi);
  for (int k = 0; k < 4; ++k) {  // slack for the libm rounding of log itself
    l = std::nextafter(l, -HUGE_VAL);
    h = std::nextafter(h, HUGE_VAL);
  }
  const double mid = (l + h) / 2;
  return {mid, std::max(h - mid, mid - l)};
}

namespace {

struct LogSum {
  double lo = 0;
  double hi = 0;
  void add(const RatInterval& iv) {
    const auto [mid, rad] = log_interval(iv);
    lo += mid - rad;
    hi += mid + rad;
  }
};

}  // namespace

}  // namespace detail

HeightReport weil_height(const Rat& e) {
  if (e == 0) throw InvalidArgument("weil_height: zero element");
  if (!is_integer(e)) throw NotIntegral("weil_height: element is not integral");
  const Rat a = abs(e);
  ExactReal h(a);
  double w = 0, wr = 0;
  if (a > 1) {
    const auto [mid, rad] = detail::log_interval(RatInterval::point(a));
    w = mid;
    wr = rad;
  }
  const auto [hv, hr] = h.approx();
  return {1, w, wr, hv, hr, std::move(h), a >= 1};
}

namespace {

template <class El>
HeightReport height_from_conjugates(const std::vector<El>& conjugates,
                                    const El& house_witness, int degree) {
  // conjugates are the |alpha_i| as field elements (canonical value = the
  // absolute value); house_witness their maximum.
  detail::LogSum acc;
  bool exact_ok = true;
  const ExactReal house_er{house_witness};
  // h <= log(house) holds exactly when house >= 1 and every |alpha_i| <= house.
  exact_ok = exact_ok && house_er.cmp(Rat(1)) >= 0;
  for (const El& a : conjugates) {
    const ExactReal av{a};
    exact_ok = exact_ok && ExactReal(house_witness - a).sign() >= 0;
    if (av.cmp(Rat(1)) > 0) acc.add(av.interval(96));
  }
  const double lo = acc.lo / degree;
  const double hi = acc.hi / degree;
  const auto [hv, hr] = house_er.approx();
  return {degree,        (lo + hi) / 2, (hi - lo) / 2, hv, hr,
          ExactReal(house_witness), exact_ok};
}

}  // namespace

HeightReport weil_height(const QuadElem& e) {
  if (e.is_zero()) throw InvalidArgument("weil_height: zero element");
  if (!e.is_integer()) throw NotIntegral("weil_height: element is not integral");
  if (e.is_rational()) return weil_height(e.x());
  QuadElem a1 = e.sign() < 0 ? -e : e;
  QuadElem c = e.conjugate();
  QuadElem a2 = c.sign() < 0 ? -c : c;
  return height_from_conjugates<QuadElem>({a1, a2}, house_elem(e), 2);
}

HeightReport weil_height(const BiquadElem& e) {
  if (e.is_zero()) throw InvalidArgument("weil_height: zero element");
  if (!e.is_integer()) throw NotIntegral("weil_height: element is not integral");
  int nonzero_radicals = 0;
  int which = 0;
  for (int i = 1; i <= 3; ++i)
    if (e.c(i) != 0) {
      ++nonzero_radicals;
      which = i;
    }
  if (nonzero_radicals == 0) return weil_height(e.c(0));
  if (nonzero_radicals == 1)  // lies in one quadratic subfield
    return weil_height(QuadElem(e.field().subfield(which), e.c(0), e.c(which)));

  std::vector<BiquadElem> abs_conj;
  for (int i = 0; i <= 3; ++i) {
    BiquadElem c = (i == 0) ? e : e.sigma(i);
    abs_conj.push_back(c.sign() < 0 ? -c : c);
  }
  return height_from_conjugates<BiquadElem>(abs_conj, house_elem(e), 4);
}

std::vector<QuadElem> enumerate_tp_integers(const QuadField& field, const Rat& r) {
  std::vector<QuadElem> out;
  if (r <= 0) return out;
  for (const QuadElem& g : enumerate_integral_box(field, Rat(0), r, Rat(0), r)) {
    if (g.sign() <= 0 || g.conjugate_sign() <= 0) continue;
    if ((g - r).sign() >= 0 || (g.conjugate() - r).sign() >= 0) continue;
    out.push_back(g);
  }
  std::sort(out.begin(), out.end(), [](const QuadElem& a, const QuadElem& b) {
    return detail::CoordLess<QuadElem>{}(a, b);
  });
  return out;
}

NorthcottProfile northcott_profile(const std::vector<QuadField>& fields, const Rat& r) {
  NorthcottProfile prof;
  prof.r = r;
  std::set<std::string> distinct;
  for (const QuadField& f : fields) {
    const auto elems = enumerate_tp_integers(f, r);
    prof.rows.push_back({f.D(), elems.size()});
    for (const QuadElem& e : elems) {
      // Rationals are shared across every quadratic layer; irrational
      // elements of distinct fields never coincide.
      if (e.is_rational())
        distinct.insert("Q|" + e.x().get_str());
      else
        distinct.insert(f.D().get_str() + "|" + e.x().get_str() + "|" + e.y().get_str());
    }
  }
  prof.cumulative_distinct = distinct.size();
  return prof;
}

}  // namespace unitforge
