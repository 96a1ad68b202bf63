#pragma once

#include <cctype>
#include <functional>
#include <string>

#include "unitforge/lattice.hpp"

namespace unitforge {

namespace detail {

struct FormTerm {
  std::string coef;  // empty = 1; may be parenthesized
  int i = -1;        // first variable (0-based), -1 if none
  int j = -1;        // second variable
};

/// Splits a "sum of monomials" string into terms of the shape
/// [coef *] xI^2 | [coef *] xI*xJ; parentheses shield coefficient signs.
std::vector<std::pair<int, FormTerm>> split_form_terms(const std::string& input);

}  // namespace detail

/// Parses a quadratic form "x1^2 + 3*x1*x2 + (2 + 1*sqrt(3))*x2^2" into the
/// Gram matrix of the associated lattice: G_ii = b_ii, G_ij = b_ij / 2.
/// Coefficients are parsed by the supplied base-field parser; parenthesize
/// any coefficient containing '+' or '-'.
template <class El>
GramLattice<El> parse_gram_form(
    const std::string& form, const typename ElementTraits<El>::Base& base,
    const std::function<El(const std::string&)>& parse_coef) {
  using Traits = ElementTraits<El>;
  const auto terms = detail::split_form_terms(form);
  int rank = 0;
  for (const auto& [sign, t] : terms) {
    (void)sign;
    rank = std::max(rank, std::max(t.i, t.j) + 1);
  }
  if (rank == 0) throw ParseError("form has no variables");

  std::vector<std::vector<El>> b(static_cast<std::size_t>(rank),
                                 std::vector<El>(static_cast<std::size_t>(rank),
                                                 Traits::zero(base)));
  for (const auto& [sign, t] : terms) {
    El c = t.coef.empty() ? Traits::one(base) : parse_coef(t.coef);
    if (sign < 0) c = Traits::zero(base) - c;
    const auto i = static_cast<std::size_t>(std::min(t.i, t.j));
    const auto j = static_cast<std::size_t>(std::max(t.i, t.j));
    b[i][j] = b[i][j] + c;
  }
  std::vector<std::vector<El>> gram(static_cast<std::size_t>(rank),
                                    std::vector<El>(static_cast<std::size_t>(rank),
                                                    Traits::zero(base)));
  const Rat half = make_rat(1, 2);
  for (std::size_t i = 0; i < gram.size(); ++i)
    for (std::size_t j = i; j < gram.size(); ++j) {
      if (i == j) {
        gram[i][i] = b[i][i];
      } else {
        gram[i][j] = b[i][j] * half;
        gram[j][i] = gram[i][j];
      }
    }
  return GramLattice<El>(base, std::move(gram));
}

}  // namespace unitforge
