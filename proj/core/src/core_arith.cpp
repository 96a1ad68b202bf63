#include "unitforge/core_arith.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace unitforge {

namespace {

bool is_probable_prime(const Int& n) {
  // 40 Miller-Rabin rounds after BPSW; exact for anything this library sees.
  return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

}  // namespace

std::vector<std::pair<Int, unsigned>> factorize(const Int& n, const FactorConfig& cfg) {
  if (n == 0) throw InvalidArgument("factorize: zero input");
  Int m = abs(n);
  std::vector<std::pair<Int, unsigned>> out;
  if (m == 1) return out;

  auto strip = [&](const Int& p) {
    unsigned e = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      m /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };

  strip(2);
  strip(3);
  // wheel over 6k +- 1
  for (Int p = 5; p <= cfg.trial_bound && p * p <= m; p += 4) {
    strip(p);
    p += 2;
    strip(p);
  }
  if (m > 1) {
    if (Int(cfg.trial_bound) * Int(cfg.trial_bound) >= m) {
      // residual below the bound squared with no divisor <= bound: prime
      out.emplace_back(m, 1);
    } else if (is_probable_prime(m)) {
      out.emplace_back(m, 1);
    } else if (is_perfect_square(m)) {
      Int root = isqrt(m);
      if (is_probable_prime(root)) {
        out.emplace_back(root, 2);
      } else {
        throw FactorizationIncomplete("factorize: residual cofactor " + m.get_str() +
                                      " is a square of a composite beyond the trial bound");
      }
    } else {
      throw FactorizationIncomplete("factorize: residual cofactor " + m.get_str() +
                                    " exceeds the trial bound and is not proven prime");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SquareFreeDecomp squarefree_part(const Int& n, const FactorConfig& cfg) {
  if (n == 0) throw InvalidArgument("squarefree_part: zero input");
  Int m = abs(n);
  Int s = 1;
  Int r = 1;

  // Factor what trial division reaches, then deal with the residual directly:
  // a residual with all prime factors above the bound contributes s *= m when
  // prime, r *= sqrt(m) when a perfect square, and is ambiguous otherwise.
  auto strip = [&](const Int& p) {
    unsigned e = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
      m /= p;
      ++e;
    }
    if (e == 0) return;
    if (e % 2 == 1) s *= p;
    Int half;
    mpz_pow_ui(half.get_mpz_t(), p.get_mpz_t(), e / 2);
    r *= half;
  };

  strip(2);
  strip(3);
  for (Int p = 5; p <= cfg.trial_bound && p * p <= m; p += 4) {
    strip(p);
    p += 2;
    strip(p);
  }
  if (m > 1) {
    if (Int(cfg.trial_bound) * Int(cfg.trial_bound) >= m || is_probable_prime(m)) {
      s *= m;
    } else if (is_perfect_square(m)) {
      r *= isqrt(m);
    } else {
      throw FactorizationIncomplete("squarefree_part: residual cofactor " + m.get_str() +
                                    " exceeds the trial bound and is not proven prime");
    }
  }
  if (n < 0) s = -s;
  return {s, r};
}

bool is_perfect_square(const Int& n) {
  if (n < 0) return false;
  return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

bool is_squarefree(const Int& n, const FactorConfig& cfg) {
  return squarefree_part(n, cfg).r == 1;
}

CFExpansion cf_sqrt(const Int& D) {
  if (D < 2) throw InvalidArgument("cf_sqrt: D must be >= 2");
  if (is_perfect_square(D)) throw InvalidArgument("cf_sqrt: D must not be a square");
  const Int a0 = isqrt(D);
  CFExpansion out;
  out.a0 = a0;
  // (P, Q) recurrence for (P + sqrt(D)) / Q; period closes at the first Q = 1.
  Int P = 0;
  Int Q = 1;
  Int a = a0;
  do {
    P = Q * a - P;
    Q = (D - P * P) / Q;
    a = (a0 + P) / Q;
    out.period.push_back(a);
  } while (Q != 1);
  return out;
}

SquareClassVector SquareClassVector::from_integer(const Int& n, const FactorConfig& cfg) {
  if (n == 0) throw InvalidArgument("SquareClassVector: zero input");
  SquareFreeDecomp d = squarefree_part(n, cfg);
  SquareClassVector v;
  v.sign_bit_ = d.s < 0;
  for (const auto& [p, e] : factorize(d.s, cfg)) {
    (void)e;  // d.s squarefree, so e == 1
    v.primes_.push_back(p);
  }
  std::sort(v.primes_.begin(), v.primes_.end());
  return v;
}

SquareClassVector SquareClassVector::from_rational(const Rat& q, const FactorConfig& cfg) {
  if (q == 0) throw InvalidArgument("SquareClassVector: zero input");
  return from_integer(q.get_num() * q.get_den(), cfg);
}

Int SquareClassVector::value() const {
  Int v = sign_bit_ ? -1 : 1;
  for (const Int& p : primes_) v *= p;
  return v;
}

SquareClassVector SquareClassVector::operator*(const SquareClassVector& o) const {
  SquareClassVector out;
  out.sign_bit_ = sign_bit_ ^ o.sign_bit_;
  std::set_symmetric_difference(primes_.begin(), primes_.end(), o.primes_.begin(),
                                o.primes_.end(), std::back_inserter(out.primes_));
  return out;
}

std::optional<std::vector<std::size_t>> gf2_express(
    const SquareClassVector& target, const std::vector<SquareClassVector>& basis) {
  // Column index per prime actually occurring; the sign bit is its own column.
  std::map<Int, std::size_t> col_of;
  auto touch = [&](const SquareClassVector& v) {
    for (const Int& p : v.primes())
      if (!col_of.count(p)) col_of.emplace(p, col_of.size());
  };
  touch(target);
  for (const auto& b : basis) touch(b);
  const std::size_t ncols = col_of.size() + 1;  // + sign column
  const std::size_t sign_col = ncols - 1;

  auto to_row = [&](const SquareClassVector& v) {
    std::vector<bool> row(ncols, false);
    for (const Int& p : v.primes()) row[col_of.at(p)] = true;
    row[sign_col] = v.sign_bit();
    return row;
  };

  // Gaussian elimination with combination tracking.
  std::vector<std::vector<bool>> rows;
  std::vector<std::vector<bool>> combo;  // combo[i][j]: row i uses basis j
  rows.reserve(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    rows.push_back(to_row(basis[j]));
    combo.emplace_back(basis.size(), false);
    combo.back()[j] = true;
  }
  std::vector<std::optional<std::size_t>> pivot_row(ncols);
  auto xor_into = [&](std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = a[k] ^ b[k];
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < ncols; ++c) {
      if (!rows[i][c]) continue;
      if (pivot_row[c]) {
        xor_into(rows[i], rows[*pivot_row[c]]);
        xor_into(combo[i], combo[*pivot_row[c]]);
      } else {
        pivot_row[c] = i;
        break;
      }
    }
  }

  std::vector<bool> t = to_row(target);
  std::vector<bool> sel(basis.size(), false);
  for (std::size_t c = 0; c < ncols; ++c) {
    if (!t[c]) continue;
    if (!pivot_row[c]) return std::nullopt;
    xor_into(t, rows[*pivot_row[c]]);
    xor_into(sel, combo[*pivot_row[c]]);
  }
  if (std::find(t.begin(), t.end(), true) != t.end()) return std::nullopt;

  std::vector<std::size_t> subset;
  for (std::size_t j = 0; j < basis.size(); ++j)
    if (sel[j]) subset.push_back(j);

  // Exact reconstruction check.
  SquareClassVector prod;
  for (std::size_t j : subset) prod = prod * basis[j];
  if (!(prod == target))
    throw Error("gf2_express: internal elimination inconsistency");
  return subset;
}

}  // namespace unitforge
