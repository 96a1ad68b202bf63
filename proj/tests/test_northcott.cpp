#include "unitforge/northcott.hpp"

#include <cmath>

#include "test_util.hpp"

namespace unitforge {
namespace {

const RationalBase QB{};
QuadField Q2{Int(2)}, Q3{Int(3)}, Q5{Int(5)};

TEST(WeilHeight, PinnedValues) {
  const auto h1 = weil_height(QuadElem(Q3, Rat(2), Rat(1)));
  EXPECT_EQ(h1.degree, 2);
  EXPECT_NEAR(h1.weil, 0.65848, 1e-4);  // (1/2) log(2 + sqrt3)
  EXPECT_TRUE(h1.exact_inequality_ok);

  const auto h2 = weil_height(Rat(5));
  EXPECT_EQ(h2.degree, 1);
  EXPECT_NEAR(h2.weil, std::log(5.0), 1e-12);

  const auto h3 = weil_height(QuadElem(Q5, make_rat(1, 2), make_rat(1, 2)));
  EXPECT_EQ(h3.degree, 2);
  EXPECT_NEAR(h3.weil, 0.24061, 1e-4);  // (1/2) log(golden ratio)

  EXPECT_THROW(weil_height(QuadElem(Q5, make_rat(1, 2), make_rat(1, 3))), NotIntegral);
  EXPECT_THROW(weil_height(Rat(0)), InvalidArgument);
}

TEST(WeilHeight, DegreeDetectionInBiquadraticFields) {
  const BiquadField f(Int(3), Int(7));
  const auto h1 = weil_height(BiquadElem::from_rational(f, Rat(5)));
  EXPECT_EQ(h1.degree, 1);

  const auto h2 =
      weil_height(BiquadElem::from_subfield(f, 3, QuadElem(f.subfield(3), make_rat(5, 2),
                                                           make_rat(1, 2))));
  EXPECT_EQ(h2.degree, 2);
  EXPECT_NEAR(h2.weil, 0.5 * std::log((5 + std::sqrt(21.0)) / 2), 1e-9);

  const auto h4 = weil_height(BiquadElem(f, {Rat(1), Rat(1), Rat(1), Rat(0)}));
  EXPECT_EQ(h4.degree, 4);
  EXPECT_TRUE(h4.exact_inequality_ok);
}

TEST(WeilHeight, InequalityExactOn500RandomIntegralElements) {
  auto rng = make_rng(51);
  std::uniform_int_distribution<long> xd(-60, 60), dd(2, 60);
  int done = 0;
  while (done < 500) {
    const Int d = squarefree_part(Int(dd(rng))).s;
    if (d < 2) continue;
    QuadField f{d};
    QuadElem e(f, Rat(xd(rng)), Rat(xd(rng)));
    if (f.D() % 4 == 1 && (xd(rng) & 1)) {
      // mix in half-integer points of the ring
      e = QuadElem(f, e.x() + make_rat(1, 2), e.y() + make_rat(1, 2));
    }
    if (e.is_zero() || !e.is_integer()) continue;
    const auto h = weil_height(e);
    ASSERT_TRUE(h.exact_inequality_ok) << to_string(e);
    ASSERT_LE(h.weil - h.weil_radius,
              std::log(h.house_value + h.house_radius) + 1e-12);
    ++done;
  }
}

TEST(EnumerateTpIntegers, PinnedSets) {
  const auto s2 = enumerate_tp_integers(Q2, Rat(3));
  ASSERT_EQ(s2.size(), 2u);
  EXPECT_EQ(s2[0], QuadElem::from_rational(Q2, Rat(1)));
  EXPECT_EQ(s2[1], QuadElem::from_rational(Q2, Rat(2)));

  // D = 5, r = 2: the golden ratio fails total positivity, 2 has house 2
  const auto s5 = enumerate_tp_integers(Q5, Rat(2));
  ASSERT_EQ(s5.size(), 1u);
  EXPECT_EQ(s5[0], QuadElem::from_rational(Q5, Rat(1)));

  // no totally positive integer has house < 1 (norm bound)
  EXPECT_TRUE(enumerate_tp_integers(Q2, Rat(1)).empty());
  EXPECT_TRUE(enumerate_tp_integers(Q5, Rat(1)).empty());
}

TEST(EnumerateTpIntegers, WidenedGridCompletenessOracle) {
  auto rng = make_rng(52);
  std::uniform_int_distribution<long> dd(2, 40), rnum(1, 12), rden(1, 3);
  int done = 0;
  while (done < 50) {
    const Int d = squarefree_part(Int(dd(rng))).s;
    if (d < 2) continue;
    QuadField f{d};
    const Rat r = make_rat(Int(rnum(rng)), Int(rden(rng)));
    const auto got = enumerate_tp_integers(f, r);
    // widened box, same exact predicate
    std::vector<QuadElem> oracle;
    for (const QuadElem& g : enumerate_integral_box(f, Rat(-1), r + 1, Rat(-1), r + 1)) {
      if (g.sign() <= 0 || g.conjugate_sign() <= 0) continue;
      if ((g - r).sign() >= 0 || (g.conjugate() - r).sign() >= 0) continue;
      oracle.push_back(g);
    }
    ASSERT_EQ(got.size(), oracle.size()) << "D=" << d.get_str() << " r=" << r.get_str();
    for (const QuadElem& e : got) {
      ASSERT_TRUE(e.is_integer());
      ASSERT_TRUE(e.is_totally_positive());
      ASSERT_LT((house_elem(e) - r).sign(), 0);
    }
    ++done;
  }
}

TEST(NorthcottProfile, OracleRecountedRow) {
  // brute-force oracle recount fixes the expected values: D=5 contains both
  // conjugates (3 +- sqrt5)/2 below house 3
  const auto prof = northcott_profile({Q2, Q3, Q5}, Rat(3));
  ASSERT_EQ(prof.rows.size(), 3u);
  EXPECT_EQ(prof.rows[0].count, 2u);  // {1, 2}
  EXPECT_EQ(prof.rows[1].count, 2u);  // {1, 2}
  EXPECT_EQ(prof.rows[2].count, 4u);  // {1, 2, (3 +- sqrt5)/2}
  // cumulative dedupes the rationals shared by every layer
  EXPECT_EQ(prof.cumulative_distinct, 4u);

  const auto zero = northcott_profile({Q2, Q3}, Rat(1));
  EXPECT_EQ(zero.rows[0].count, 0u);
  EXPECT_EQ(zero.rows[1].count, 0u);
  EXPECT_EQ(zero.cumulative_distinct, 0u);
}

TEST(NorthcottProfile, MatchesDirectEnumeration) {
  const auto prof = northcott_profile({Q5}, Rat(20));
  EXPECT_EQ(prof.rows[0].count, enumerate_tp_integers(Q5, Rat(20)).size());
}

TEST(DescentShifts, ShiftRule) {
  // gamma = (1,2,3,4): beta_j = gamma_j + floor(gamma_j) + 1 = 2 gamma_j + 1
  const auto s = descent_shifts<Rat>({Rat(1), Rat(2), Rat(3), Rat(4)});
  EXPECT_EQ(s, (std::vector<Rat>{Rat(3), Rat(5), Rat(7), Rat(9)}));

  // gamma = (1,0,0,0): zero shifts to 1, the set deduplicates
  const auto t = descent_shifts<Rat>({Rat(1), Rat(0), Rat(0), Rat(0)});
  EXPECT_EQ(t, (std::vector<Rat>{Rat(1), Rat(3)}));

  // negative coordinates become totally positive
  const auto u = descent_shifts<Rat>({Rat(-5)});
  EXPECT_EQ(u, (std::vector<Rat>{Rat(1)}));
}

TEST(DescentStep, RepresentsThenShifts) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  const auto step = descent_step(I4, Rat(30));
  EXPECT_EQ(I4.evaluate(step.gamma), 30);
  for (const Rat& b : step.shifted) EXPECT_GT(b, 0);

  QuadField q5{Int(5)};
  const auto I3 = GramLattice<QuadElem>::identity(q5, 3);
  const QuadElem beta(q5, Rat(2), Rat(0));
  const auto qstep = descent_step(I3, beta + QuadElem(q5, make_rat(1, 2), make_rat(1, 2)));
  for (const QuadElem& b : qstep.shifted) {
    EXPECT_TRUE(b.is_totally_positive());
    EXPECT_TRUE(b.is_integer());
  }

  const auto I1 = GramLattice<Rat>::identity(QB, 1);
  EXPECT_THROW(descent_step(I1, Rat(7)), RepresentationNotFound);
}

TEST(DescentStep, HouseBoundAgainstSource) {
  // house(beta_j) <= (2C+1) house(beta)^{1/2} for C = 1 whenever house >= 1
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  auto rng = make_rng(53);
  std::uniform_int_distribution<long> ad(1, 2000);
  for (int i = 0; i < 40; ++i) {
    const Rat beta(ad(rng));
    const auto step = descent_step(I4, beta);
    for (const Rat& b : step.shifted)
      ASSERT_LE(b * b, Rat(9) * beta);  // (2C+1)^2 * house(beta)
  }
}

TEST(DescentRun, RationalBaseTerminatesBelowNine) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  const auto tr = descent_run(I4, Rat(10000), 8);
  EXPECT_EQ(tr.threshold, 9);
  EXPECT_EQ(tr.C_desc, "1");
  EXPECT_LE(tr.levels.size(), 9u);
  for (const Rat& b : tr.levels.back()) {
    EXPECT_GT(b, 0);
    EXPECT_LT(b, 9);
  }
  // immediate termination below threshold
  const auto tiny = descent_run(I4, Rat(5), 8);
  EXPECT_EQ(tiny.levels.size(), 1u);

  // per-level max house strictly decreases while above threshold
  for (std::size_t i = 0; i + 1 < tr.max_house_per_level.size(); ++i)
    if (tr.max_house_per_level[i] >= 9)
      EXPECT_GT(tr.max_house_per_level[i], tr.max_house_per_level[i + 1]);
}

TEST(DescentRun, QuadraticBase) {
  QuadField q5{Int(5)};
  const auto I3 = GramLattice<QuadElem>::identity(q5, 3);
  const QuadElem alpha(q5, Rat(20), Rat(3));  // 20 + 3 sqrt5, totally positive
  const auto tr = descent_run(I3, alpha, 10);
  EXPECT_EQ(tr.threshold, 9);
  for (const QuadElem& b : tr.levels.back())
    EXPECT_LT((house_elem(b) - Rat(9)).sign(), 0);
}

TEST(DescentRun, ThreadedRunMatchesSequential) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  const auto seq = descent_run(I4, Rat(9876), 8, 1);
  const auto par = descent_run(I4, Rat(9876), 8, 4);
  ASSERT_EQ(seq.levels.size(), par.levels.size());
  for (std::size_t i = 0; i < seq.levels.size(); ++i)
    ASSERT_EQ(seq.levels[i], par.levels[i]);
}

TEST(DescentRun, MaxIterCarriesPartialTrace) {
  const auto I4 = GramLattice<Rat>::identity(QB, 4);
  try {
    descent_run(I4, Rat(10000), 0);
    FAIL() << "expected MaxIterExceeded";
  } catch (const MaxIterExceeded<Rat>& e) {
    ASSERT_EQ(e.partial.levels.size(), 1u);
    EXPECT_EQ(e.partial.levels[0], (std::vector<Rat>{Rat(10000)}));
  }
}

TEST(DescentRun, Guards) {
  const GramLattice<Rat> nd(QB, {{Rat(1), Rat(1)}, {Rat(1), Rat(3)}});
  EXPECT_THROW(descent_run(nd, Rat(5), 5), NonDiagonal);
  const auto I2 = GramLattice<Rat>::identity(QB, 2);
  EXPECT_THROW(descent_run(I2, Rat(-3), 5), InvalidArgument);
  EXPECT_THROW(descent_run(I2, make_rat(1, 2), 5), InvalidArgument);
}

}  // namespace
}  // namespace unitforge
