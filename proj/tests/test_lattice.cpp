#include "unitforge/lattice.hpp"

#include "test_util.hpp"
#include "unitforge/form_parser.hpp"
#include "unitforge/northcott.hpp"
#include "unitforge/parse.hpp"

namespace unitforge {
namespace {

const RationalBase QB{};

TEST(GramLattice, EvaluateAndBilinear) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  EXPECT_EQ(I4.evaluate({Rat(1), Rat(2), Rat(3), Rat(4)}), 30);
  EXPECT_EQ(I4.evaluate({Rat(0), Rat(0), Rat(0), Rat(0)}), 0);
  EXPECT_THROW(I4.evaluate({Rat(1)}), DimensionMismatch);

  QuadField q5{Int(5)};
  const auto L = GramLattice<QuadElem>::identity(q5, 3);
  const QuadElem phi(q5, make_rat(1, 2), make_rat(1, 2));
  const QuadElem val = L.evaluate({ElementTraits<QuadElem>::one(q5), phi,
                                   ElementTraits<QuadElem>::zero(q5)});
  EXPECT_EQ(val, QuadElem(q5, make_rat(5, 2), make_rat(1, 2)));  // 1 + phi^2
}

TEST(GramLattice, PolarizationIdentity) {
  auto rng = make_rng(41);
  std::vector<std::vector<Rat>> g = {{Rat(2), Rat(1), Rat(0)},
                                     {Rat(1), Rat(3), Rat(-1)},
                                     {Rat(0), Rat(-1), Rat(5)}};
  const GramLattice<Rat> L(QB, g);
  for (int i = 0; i < 40; ++i) {
    std::vector<Rat> v, w;
    for (int k = 0; k < 3; ++k) {
      v.push_back(random_rat(rng, 9, 3));
      w.push_back(random_rat(rng, 9, 3));
    }
    std::vector<Rat> sum;
    for (int k = 0; k < 3; ++k) sum.push_back(v[static_cast<std::size_t>(k)] +
                                              w[static_cast<std::size_t>(k)]);
    ASSERT_EQ(L.evaluate(sum),
              L.evaluate(v) + L.evaluate(w) + 2 * L.bilinear(v, w));
  }
}

TEST(GramLattice, IntegralClassicalPositiveDefinite) {
  // x^2 + xy + y^2: integral but not classical
  const GramLattice<Rat> hex(QB, {{Rat(1), make_rat(1, 2)}, {make_rat(1, 2), Rat(1)}});
  EXPECT_TRUE(hex.is_integral());
  EXPECT_FALSE(hex.is_classical());
  EXPECT_TRUE(hex.is_positive_definite());

  const auto I3 = GramLattice<Rat>::identity(QB, 3);
  EXPECT_TRUE(I3.is_integral());
  EXPECT_TRUE(I3.is_classical());
  EXPECT_TRUE(I3.is_positive_definite());

  const auto neg = GramLattice<Rat>::diagonal(QB, {Rat(1), Rat(-1)});
  EXPECT_FALSE(neg.is_positive_definite());

  // over Q(sqrt3): diag(1, eps) positive definite, diag(1, 1+sqrt3) not
  QuadField q3{Int(3)};
  const QuadElem eps(q3, Rat(2), Rat(1));
  EXPECT_TRUE(GramLattice<QuadElem>::diagonal(q3, {ElementTraits<QuadElem>::one(q3), eps})
                  .is_positive_definite());
  EXPECT_FALSE(GramLattice<QuadElem>::diagonal(q3, {ElementTraits<QuadElem>::one(q3),
                                                    QuadElem(q3, Rat(1), Rat(1))})
                   .is_positive_definite());
}

TEST(SplitUnit, IdentityAndDiagonalExamples) {
  const auto I3 = GramLattice<Rat>::identity(QB, 3);
  const auto s = split_unit(I3, {Rat(1), Rat(0), Rat(0)});
  EXPECT_EQ(s.new_gram.rank(), 2u);
  EXPECT_TRUE(s.new_gram.is_classical());
  for (const auto& w : s.complement_basis)
    EXPECT_EQ(I3.bilinear(s.unit_vector, w), 0);
  EXPECT_EQ(s.new_gram.at(0, 0), 1);
  EXPECT_EQ(s.new_gram.at(1, 1), 1);
  EXPECT_EQ(s.new_gram.at(0, 1), 0);

  QuadField q3{Int(3)};
  const QuadElem one = ElementTraits<QuadElem>::one(q3);
  const QuadElem eps(q3, Rat(2), Rat(1));
  const auto L = GramLattice<QuadElem>::diagonal(q3, {one, eps, eps * eps});
  const auto t = split_unit(L, {ElementTraits<QuadElem>::zero(q3), one,
                                ElementTraits<QuadElem>::zero(q3)});
  EXPECT_EQ(t.new_gram.rank(), 2u);
  EXPECT_EQ(t.new_gram.at(0, 0), one);
  EXPECT_EQ(t.new_gram.at(1, 1), eps * eps);

  const GramLattice<Rat> hex(QB, {{Rat(1), make_rat(1, 2)}, {make_rat(1, 2), Rat(1)}});
  EXPECT_THROW(split_unit(hex, {Rat(1), Rat(0)}), NotClassical);
  EXPECT_THROW(split_unit(I3, {Rat(1), Rat(1), Rat(0)}), NotUnit);
}

TEST(SplitUnit, DeterminantMultiplicativityOnGenericClassicalLattice) {
  // a non-diagonal classical lattice with a unit vector
  const GramLattice<Rat> L(QB, {{Rat(1), Rat(1), Rat(0)},
                                {Rat(1), Rat(3), Rat(1)},
                                {Rat(0), Rat(1), Rat(4)}});
  ASSERT_TRUE(L.is_classical());
  const std::vector<Rat> v = {Rat(1), Rat(0), Rat(0)};
  const auto s = split_unit(L, v);
  // det(L) = Q(v) * det(new_gram): 3x3 determinant by cofactor
  const Rat detL = Rat(1) * (Rat(3) * 4 - 1) - Rat(1) * (Rat(1) * 4 - 0);
  const Rat detC = s.new_gram.at(0, 0) * s.new_gram.at(1, 1) -
                   s.new_gram.at(0, 1) * s.new_gram.at(1, 0);
  EXPECT_EQ(detL, L.evaluate(v) * detC);
  EXPECT_TRUE(s.new_gram.is_classical());
}

TEST(DiagonalUniversal2n, SubsetProducts) {
  QuadField q3{Int(3)};
  const QuadElem one = ElementTraits<QuadElem>::one(q3);
  const QuadElem eps(q3, Rat(2), Rat(1));

  const auto L0 = diagonal_universal_2n<QuadElem>(q3, {});
  EXPECT_EQ(L0.rank(), 1u);
  EXPECT_EQ(L0.at(0, 0), one);

  const auto L1 = diagonal_universal_2n<QuadElem>(q3, {eps});
  EXPECT_EQ(L1.rank(), 2u);
  EXPECT_EQ(L1.at(1, 1), eps);

  const QuadElem eps3 = eps * eps * eps;
  const auto L2 = diagonal_universal_2n<QuadElem>(q3, {eps, eps3});
  EXPECT_EQ(L2.rank(), 4u);
  EXPECT_EQ(L2.at(0, 0), one);
  EXPECT_EQ(L2.at(1, 1), eps);
  EXPECT_EQ(L2.at(2, 2), eps3);
  EXPECT_EQ(L2.at(3, 3), eps * eps3);
  EXPECT_TRUE(L2.is_classical());
  EXPECT_TRUE(L2.is_positive_definite());

  EXPECT_THROW(diagonal_universal_2n<QuadElem>(q3, {QuadElem(q3, Rat(1), Rat(1))}),
               NotTotallyPositiveUnit);
}

TEST(Represent, FourSquaresAndObstruction) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  const auto v = represent(I4, Rat(30));
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(I4.evaluate(*v), 30);

  const auto I3 = GramLattice<Rat>::identity(QB, 3);
  const auto res = represent_search(I3, Rat(7));
  EXPECT_FALSE(res.vec.has_value());  // 7 = 8*0 + 7 is a three-square obstruction
  EXPECT_TRUE(res.exhausted);

  const auto z = represent(I3, Rat(0));
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ(I3.evaluate(*z), 0);
}

TEST(Represent, MaassSumOfThreeSquares) {
  QuadField q5{Int(5)};
  const auto I3 = GramLattice<QuadElem>::identity(q5, 3);
  const QuadElem beta(q5, make_rat(5, 2), make_rat(1, 2));
  const auto v = represent(I3, beta);
  ASSERT_TRUE(v.has_value());
  EXPECT_EQ(I3.evaluate(*v), beta);
}

// Independent nested-loop brute force over Z, rank <= 4.
bool brute_represent_Z(const std::vector<long>& diag, long beta) {
  const long n = static_cast<long>(diag.size());
  std::vector<long> x(static_cast<std::size_t>(n), 0);
  std::function<bool(long, long)> rec = [&](long idx, long rem) {
    if (idx == n) return rem == 0;
    const long a = diag[static_cast<std::size_t>(idx)];
    for (long g = 0; g * g * a <= rem; ++g)
      if (rec(idx + 1, rem - a * g * g)) return true;
    return false;
  };
  return rec(0, beta);
}

TEST(Represent, AgreesWithNestedLoopBruteForce) {
  auto rng = make_rng(42);
  std::uniform_int_distribution<long> beta_d(0, 50);
  std::uniform_int_distribution<long> coef_d(1, 5);
  std::uniform_int_distribution<int> rank_d(1, 4);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = rank_d(rng);
    std::vector<long> diag;
    std::vector<Rat> rdiag;
    for (int i = 0; i < n; ++i) {
      diag.push_back(coef_d(rng));
      rdiag.emplace_back(diag.back());
    }
    const long beta = beta_d(rng);
    const auto L = GramLattice<Rat>::diagonal(QB, rdiag);
    const auto res = represent_search(L, Rat(beta));
    ASSERT_TRUE(res.exhausted);
    ASSERT_EQ(res.vec.has_value(), brute_represent_Z(diag, beta))
        << "diag rank " << n << " beta " << beta;
    if (res.vec) ASSERT_EQ(L.evaluate(*res.vec), beta);
  }
}

// Independent oracle over a real quadratic ring: scan a wide (a, b) grid of
// half-integer coordinates directly, filtering every condition exactly.
std::vector<QuadElem> brute_quad_candidates(const QuadField& f, long box) {
  std::vector<QuadElem> out;
  const bool half = (f.D() % 4 == 1);
  for (long a = -2 * box; a <= 2 * box; ++a)
    for (long b = -2 * box; b <= 2 * box; ++b) {
      if ((a % 2 + 2) % 2 != (b % 2 + 2) % 2) continue;
      if (!half && (a % 2 != 0)) continue;
      out.emplace_back(f, make_rat(Int(a), Int(2)), make_rat(Int(b), Int(2)));
    }
  return out;
}

bool brute_represent_quad(const GramLattice<QuadElem>& L, const QuadElem& beta,
                          const std::vector<QuadElem>& grid, std::size_t idx,
                          const QuadElem& rem) {
  using Traits = ElementTraits<QuadElem>;
  if (Traits::is_zero(rem)) return true;
  if (idx == L.rank()) return false;
  for (const QuadElem& g : grid) {
    const QuadElem next = rem - L.at(idx, idx) * g * g;
    if (!Traits::is_totally_nonneg(next)) continue;
    if (brute_represent_quad(L, beta, grid, idx + 1, next)) return true;
  }
  return false;
}

TEST(Represent, AgreesWithDirectGridSearchOverQuadraticBase) {
  QuadField q5{Int(5)};
  const QuadElem one = ElementTraits<QuadElem>::one(q5);
  const QuadElem two = QuadElem::from_rational(q5, Rat(2));
  const auto grid = brute_quad_candidates(q5, 8);  // covers houses up to ~50
  auto rng = make_rng(43);
  const auto targets = enumerate_tp_integers(q5, Rat(50));
  std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
  for (const auto& L : {GramLattice<QuadElem>::diagonal(q5, {one, one}),
                        GramLattice<QuadElem>::diagonal(q5, {one, two})}) {
    for (int i = 0; i < 12; ++i) {
      const QuadElem beta = targets[pick(rng)];
      const auto res = represent_search(L, beta);
      ASSERT_TRUE(res.exhausted);
      const bool brute = brute_represent_quad(L, beta, grid, 0, beta);
      ASSERT_EQ(res.vec.has_value(), brute) << to_string(beta);
      if (res.vec) ASSERT_EQ(L.evaluate(*res.vec), beta);
    }
  }
}

TEST(Represent, ErrorsAndGuards) {
  const GramLattice<Rat> nd(QB, {{Rat(1), Rat(1)}, {Rat(1), Rat(3)}});
  EXPECT_THROW(represent(nd, Rat(5)), NonDiagonal);
  const auto I2 = GramLattice<Rat>::identity(QB, 2);
  EXPECT_THROW(represent(I2, make_rat(1, 2)), InvalidArgument);
  EXPECT_THROW(represent(I2, Rat(-3)), InvalidArgument);
}

TEST(RankLowerBound, CompletesOnSubsetProductLattices) {
  QuadField q3{Int(3)};
  const QuadElem eps(q3, Rat(2), Rat(1));
  for (int n = 0; n <= 3; ++n) {
    const std::vector<QuadElem> gens(static_cast<std::size_t>(n), eps);
    const auto L = diagonal_universal_2n<QuadElem>(q3, gens);
    std::vector<QuadElem> units;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      QuadElem p = ElementTraits<QuadElem>::one(q3);
      for (int b = 0; b < n; ++b)
        if (mask & (std::size_t{1} << b)) p = p * eps;
      units.push_back(p);
    }
    const auto out = rank_lower_bound_run(L, units);
    ASSERT_TRUE(out.completed()) << n;
    ASSERT_EQ(out.splits, 1 << n) << n;
  }
}

TEST(RankLowerBound, ExhaustiveNotFoundOnRankOne) {
  QuadField q3{Int(3)};
  const QuadElem one = ElementTraits<QuadElem>::one(q3);
  const QuadElem eps(q3, Rat(2), Rat(1));
  const auto I1 = GramLattice<QuadElem>::identity(q3, 1);
  const auto out = rank_lower_bound_run(I1, {one, eps});
  EXPECT_FALSE(out.completed());
  EXPECT_EQ(out.splits, 1);
  ASSERT_TRUE(out.failed_unit.has_value());
  EXPECT_EQ(*out.failed_unit, eps);

  const auto I3 = GramLattice<Rat>::identity(QB, 3);
  const auto ok = rank_lower_bound_run(I3, {Rat(1)});
  EXPECT_TRUE(ok.completed());
  EXPECT_EQ(ok.splits, 1);
}

TEST(RankLowerBound, Guards) {
  QuadField q3{Int(3)};
  const GramLattice<Rat> hex(QB, {{Rat(1), make_rat(1, 2)}, {make_rat(1, 2), Rat(1)}});
  EXPECT_THROW(rank_lower_bound_run(hex, {Rat(1)}), NotClassical);

  const auto I2 = GramLattice<QuadElem>::identity(q3, 2);
  EXPECT_THROW(rank_lower_bound_run(I2, {QuadElem(q3, Rat(1), Rat(1))}),
               NotTotallyPositiveUnit);
}

TEST(Represent, BudgetAbortsMarkNonExhaustive) {
  // An aborted search never claims exhaustiveness; rank_lower_bound_run turns
  // this state into BudgetExceeded rather than RepresentationNotFound.
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  RepresentOptions opt;
  opt.max_nodes = 3;
  const auto res = represent_search(I4, Rat(7919), opt);
  EXPECT_FALSE(res.exhausted);
  EXPECT_FALSE(res.vec.has_value());
}

TEST(FormParser, MonomialSyntax) {
  const auto L = parse_gram_form<Rat>("x1^2 + 3*x1*x2 + x2^2", QB,
                                      [](const std::string& s) { return Rat(s.c_str()); });
  EXPECT_EQ(L.rank(), 2u);
  EXPECT_EQ(L.at(0, 0), 1);
  EXPECT_EQ(L.at(0, 1), make_rat(3, 2));
  EXPECT_TRUE(L.is_integral());
  EXPECT_FALSE(L.is_classical());

  QuadField q3{Int(3)};
  const auto M = parse_gram_form<QuadElem>(
      "x1^2 + (2 + 1*sqrt(3))*x2^2", q3,
      [&](const std::string& s) { return parse_quad_elem(s, q3); });
  EXPECT_EQ(M.at(1, 1), QuadElem(q3, Rat(2), Rat(1)));

  EXPECT_THROW(parse_gram_form<Rat>("x1 + x2^2", QB,
                                    [](const std::string& s) { return Rat(s.c_str()); }),
               ParseError);
  EXPECT_THROW(parse_gram_form<Rat>("x1^3", QB,
                                    [](const std::string& s) { return Rat(s.c_str()); }),
               ParseError);
}

TEST(Indecomposability, TotallyPositiveUnitsPassTheDeskCheck) {
  QuadField q3{Int(3)};
  const QuadElem eps(q3, Rat(2), Rat(1));
  EXPECT_TRUE(ElementTraits<QuadElem>::check_indecomposable_unit(q3, eps));
  EXPECT_TRUE(ElementTraits<QuadElem>::check_indecomposable_unit(q3, eps * eps));
  EXPECT_TRUE(ElementTraits<Rat>::check_indecomposable_unit(QB, Rat(1)));
  // a decomposable totally positive integer is caught: 3 = 1 + 2
  EXPECT_FALSE(ElementTraits<QuadElem>::check_indecomposable_unit(
      q3, QuadElem::from_rational(q3, Rat(3))));
}

}  // namespace
}  // namespace unitforge
