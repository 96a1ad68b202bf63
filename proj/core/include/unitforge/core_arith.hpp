#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "unitforge/rational.hpp"

namespace unitforge {

/// Trial-division bound used to factor the small integers this library meets.
/// Operations that cannot finish a factorization throw FactorizationIncomplete
/// instead of guessing.
struct FactorConfig {
  unsigned long trial_bound = 1'000'000;
};

/// n = s * r^2 with s squarefree, sign(s) = sign(n).
struct SquareFreeDecomp {
  Int s;
  Int r;
};

/// Prime factorization |n| = prod p^e (n != 0); the sign is not recorded.
std::vector<std::pair<Int, unsigned>> factorize(const Int& n,
                                                const FactorConfig& cfg = {});

SquareFreeDecomp squarefree_part(const Int& n, const FactorConfig& cfg = {});

bool is_perfect_square(const Int& n);

bool is_squarefree(const Int& n, const FactorConfig& cfg = {});

/// Minimal-period continued fraction of sqrt(D) for non-square D >= 2:
/// sqrt(D) = [a0; period repeating].
struct CFExpansion {
  Int a0;
  std::vector<Int> period;
};

CFExpansion cf_sqrt(const Int& D);

/// Squarefree integer +-(prod primes) as a GF(2) vector over its prime
/// support, with the sign tracked as its own coordinate.
class SquareClassVector {
 public:
  SquareClassVector() = default;

  /// Class of a nonzero integer: squarefree part, fully factored.
  static SquareClassVector from_integer(const Int& n, const FactorConfig& cfg = {});

  /// Class of a nonzero rational; num/den is equivalent to num*den mod squares.
  static SquareClassVector from_rational(const Rat& q, const FactorConfig& cfg = {});

  const std::vector<Int>& primes() const { return primes_; }
  bool sign_bit() const { return sign_bit_; }

  /// The squarefree integer this class represents.
  Int value() const;

  bool is_trivial() const { return primes_.empty() && !sign_bit_; }

  /// Symmetric difference of supports, xor of signs: product mod squares.
  SquareClassVector operator*(const SquareClassVector& o) const;

  bool operator==(const SquareClassVector& o) const = default;

 private:
  std::vector<Int> primes_;  // sorted, distinct
  bool sign_bit_ = false;    // true when the represented integer is negative
};

/// Solves target = prod(basis[i] for i in S) modulo squares over GF(2).
/// Returns the index set S, or nullopt when the target is not in the span.
/// A present result is re-verified by exact product reconstruction.
std::optional<std::vector<std::size_t>> gf2_express(
    const SquareClassVector& target, const std::vector<SquareClassVector>& basis);

}  // namespace unitforge
