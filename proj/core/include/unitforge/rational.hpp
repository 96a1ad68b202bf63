#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "unitforge/errors.hpp"

namespace unitforge {

using Int = mpz_class;
using Rat = mpq_class;

/// mpq_class(p, q) does not canonicalize; this does.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw DivisionByZero("make_rat: zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int floor_rat(const Rat& q) {
  Int f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

inline Int ceil_rat(const Rat& q) {
  Int c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c;
}

/// Truncated integer square root of n >= 0.
inline Int isqrt(const Int& n) {
  if (n < 0) throw InvalidArgument("isqrt: negative input");
  Int r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

/// Largest m >= 0 with m^2 <= q; requires q >= 0.
inline Int floor_sqrt_rat(const Rat& q) {
  if (q < 0) throw InvalidArgument("floor_sqrt_rat: negative input");
  Int m = isqrt(floor_rat(q));
  while (Rat(m * m) > q) --m;
  while (Rat((m + 1) * (m + 1)) <= q) ++m;
  return m;
}

/// Exact square root of a rational when it exists.
inline std::optional<Rat> rat_sqrt(const Rat& q) {
  if (q < 0) return std::nullopt;
  const Int& num = q.get_num();
  const Int& den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
  return make_rat(isqrt(num), isqrt(den));
}

inline bool rat_is_square(const Rat& q) { return rat_sqrt(q).has_value(); }

inline std::string to_string(const Rat& q) { return q.get_str(); }

namespace detail {

/// Appends "+ |coef|*radical" / "- |coef|*radical" to a term list.
inline void append_signed_term(std::string& out, const Rat& coef,
                               const std::string& radical) {
  if (out.empty()) {
    out += (coef < 0 ? "-" : "");
  } else {
    out += (coef < 0 ? " - " : " + ");
  }
  out += Rat(abs(coef)).get_str();
  if (!radical.empty()) out += "*" + radical;
}

}  // namespace detail

}  // namespace unitforge
