#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "unitforge/biquad_field.hpp"
#include "unitforge/parse.hpp"

namespace unitforge {

/// A multiquadratic compositum Q(sqrt(g) : g in generators), or the full
/// Q(sqrt(n) : n in N) when all_squarefree is set.
struct MultiquadDescriptor {
  bool all_squarefree = false;
  std::vector<Int> generators;  // squarefree, pairwise distinct, >= 2

  static MultiquadDescriptor from_generators(std::vector<Int> gens,
                                             const FactorConfig& cfg = {});
  static MultiquadDescriptor all();

  // Named families, materialized to a prefix of the given length.
  static MultiquadDescriptor family53_prefix(std::size_t m, const FactorConfig& cfg = {});
  static MultiquadDescriptor family54_prefix(const std::vector<Int>& primes,
                                             const FactorConfig& cfg = {});
  static MultiquadDescriptor prop65_prefix(std::size_t m, const FactorConfig& cfg = {});
};

/// Kummer criterion: a nonzero rational is a square in the compositum iff its
/// square class lies in the GF(2) span of the generators' classes. For the
/// full multiquadratic field the criterion degenerates to positivity.
bool is_square_in(const Rat& d, const MultiquadDescriptor& field,
                  const FactorConfig& cfg = {});

struct Family53Entry {
  Int n;
  Int D_full;        // 4n^2 - 1
  QuadField field;   // Q(sqrt of the squarefree part)
  QuadElem eps;      // 2n + sqrt(4n^2 - 1), a totally positive unit
  Int square_class;  // 2(2n+1), the rational square class of eps
};

/// The recursive sequence n_0 = 1, n_k the smallest multiple of
/// prod_{l<k}(4 n_l^2 - 1) with 2 n_k + 1 not a square. Coprimality,
/// non-squareness and the square-class identity are all verified.
std::vector<Family53Entry> example53_family(std::size_t m, const FactorConfig& cfg = {});

struct Family54Entry {
  Int q_even;  // q_{2i}
  Int q_odd;   // q_{2i+1}
  QuadField field;
  QuadElem eps;
  Int delta_value;  // in {q_even, q_odd}
};

/// Fields Q(sqrt(q_{2i} q_{2i+1})) for distinct primes q = 3 mod 4; deltas
/// and their pairwise products stay non-square in the compositum.
std::vector<Family54Entry> example54_family(const std::vector<Int>& primes,
                                            const FactorConfig& cfg = {});

/// One admissible biquadratic family member for the greedy selection.
struct FamilyInput {
  BiquadField field;
  BiquadElem alpha;     // totally positive unit outside K^{x2} Q^x
  int chosen_subfield;  // index i' with Norm_{K/K_i'}(alpha) not a square in K_i'
};

/// Builds a FamilyInput, choosing the first subfield whose relative norm is
/// a non-square (exists whenever cor63 reports in_Q_square_class = false).
FamilyInput make_family_input(const BiquadField& field, const BiquadElem& alpha,
                              const FactorConfig& cfg = {});

struct PairWitness {
  enum class Kind { RelnormNonsquare, KummerNonmember };
  std::size_t i = 0;
  std::size_t j = 0;
  Kind kind = Kind::RelnormNonsquare;
  // RelnormNonsquare: relnorm over units[i]'s chosen subfield stays
  // non-square in (chosen subfield) * K_j, checked over all subset products
  // of ext_generators.
  std::optional<QuadElem> relnorm;
  std::vector<Int> ext_generators;
  // KummerNonmember: a rational class outside the span of ext_generators.
  std::optional<Rat> target_class;
};

struct ClassCertificate {
  std::vector<FamilyInput> units;
  std::vector<PairWitness> witnesses;
};

Json certificate_to_json(const ClassCertificate& cert);
ClassCertificate certificate_from_json(const Json& j);

struct VerifyReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Re-verifies a certificate from its own data alone: every unit is a
/// totally positive unit outside K^{x2} Q^x, and every pairwise witness
/// reconfirms under exact arithmetic.
VerifyReport verify_certificate(const ClassCertificate& cert,
                                const FactorConfig& cfg = {});

/// Greedy selection of m units whose pairwise products stay outside
/// (compositum)^{x2} Q^x, witnessed by relative-norm non-squareness in the
/// joint extension. Throws InsufficientFamilies when the pool is too small.
ClassCertificate greedy_disjoint_select(const std::vector<FamilyInput>& families,
                                        std::size_t m, const FactorConfig& cfg = {});

/// Admissible parameters for the biquadratic unit family: n = 1 mod 12 with
/// all three d's squarefree. Stops after `count` values or beyond `limit`
/// (0 = no limit).
std::vector<Int> prop65_admissible_n(std::size_t count, const Int& limit = 0,
                                     const FactorConfig& cfg = {});

/// Desk-scale constructive core of the no-universal-lattice theorem over the
/// full multiquadratic field: m certified distinct totally positive unit
/// square classes from the biquadratic family.
ClassCertificate theorem72_certificate(std::size_t m, const FactorConfig& cfg = {});

}  // namespace unitforge
