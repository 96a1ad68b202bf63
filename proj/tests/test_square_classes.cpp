#include "unitforge/square_classes.hpp"

#include "test_util.hpp"

namespace unitforge {
namespace {

TEST(IsSquareIn, PinnedMemberships) {
  const auto f23 = MultiquadDescriptor::from_generators({Int(2), Int(3)});
  EXPECT_TRUE(is_square_in(Rat(6), f23));
  EXPECT_TRUE(is_square_in(Rat(24), f23));  // 24 ~ 6
  EXPECT_TRUE(is_square_in(make_rat(2, 3), f23));

  const auto f25 = MultiquadDescriptor::from_generators({Int(2), Int(5)});
  EXPECT_FALSE(is_square_in(Rat(6), f25));

  // prefix 1 of the 4n^2-1 family: only generator 3; 6 = 2*3 needs the prime 2
  const auto f3 = MultiquadDescriptor::from_generators({Int(3)});
  EXPECT_FALSE(is_square_in(Rat(6), f3));

  const auto all = MultiquadDescriptor::all();
  EXPECT_TRUE(is_square_in(Rat(6), all));
  EXPECT_TRUE(is_square_in(make_rat(35, 2), all));
  EXPECT_FALSE(is_square_in(Rat(-6), all));
  EXPECT_FALSE(is_square_in(Rat(-1), f23));

  EXPECT_THROW(is_square_in(Rat(0), f23), InvalidArgument);
  EXPECT_THROW(MultiquadDescriptor::from_generators({Int(8)}), InvalidArgument);
  EXPECT_THROW(MultiquadDescriptor::from_generators({Int(2), Int(2)}), InvalidArgument);
}

TEST(IsSquareIn, AgreesWithExhaustiveSubsetSearch) {
  auto rng = make_rng(31);
  std::uniform_int_distribution<int> count(1, 15);
  std::uniform_int_distribution<long> val(2, 300);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = count(rng);
    std::set<Int> gens;
    while (static_cast<int>(gens.size()) < n) {
      const Int g = squarefree_part(Int(val(rng))).s;
      if (g >= 2) gens.insert(g);
    }
    const std::vector<Int> glist(gens.begin(), gens.end());
    const auto field = MultiquadDescriptor::from_generators(glist);
    const Rat target = Rat(squarefree_part(Int(val(rng))).s);

    bool brute = false;
    const Int tsf = squarefree_part(target.get_num()).s;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n) && !brute; ++mask) {
      Int prod = 1;
      for (int b = 0; b < n; ++b)
        if (mask & (std::size_t{1} << b)) prod *= glist[static_cast<std::size_t>(b)];
      brute = squarefree_part(prod).s == tsf;
    }
    ASSERT_EQ(is_square_in(target, field), brute);
  }
}

TEST(MultiquadDescriptor, NamedFamilyPrefixes) {
  const auto f53 = MultiquadDescriptor::family53_prefix(2);
  EXPECT_EQ(f53.generators, (std::vector<Int>{Int(3), Int(35)}));
  // 6 = 2*3 needs the prime 2, absent from {3, 35}
  EXPECT_FALSE(is_square_in(Rat(6), f53));
  EXPECT_TRUE(is_square_in(Rat(105), f53));  // 3 * 35

  const auto f54 = MultiquadDescriptor::family54_prefix({Int(3), Int(7)});
  EXPECT_EQ(f54.generators, (std::vector<Int>{Int(21)}));

  const auto f65 = MultiquadDescriptor::prop65_prefix(2);
  EXPECT_EQ(f65.generators, (std::vector<Int>{Int(2), Int(21), Int(182), Int(1677)}));
  EXPECT_TRUE(is_square_in(Rat(42), f65));  // 2 * 21
}

TEST(Family53, FirstMembersAndClaims) {
  const auto fam = example53_family(2);
  ASSERT_EQ(fam.size(), 2u);
  EXPECT_EQ(fam[0].n, 1);
  EXPECT_EQ(fam[0].D_full, 3);
  EXPECT_EQ(fam[0].eps, QuadElem(fam[0].field, Rat(2), Rat(1)));
  EXPECT_EQ(fam[0].square_class, 6);  // agrees with delta of Q(sqrt3)

  EXPECT_EQ(fam[1].n, 3);  // smallest multiple of 3 with 2n+1 = 7 non-square
  EXPECT_EQ(fam[1].D_full, 35);
  EXPECT_EQ(fam[1].eps, QuadElem(fam[1].field, Rat(6), Rat(1)));
  EXPECT_EQ(fam[1].square_class, 14);

  EXPECT_EQ(gcd(fam[0].D_full, fam[1].D_full), 1);
}

TEST(Family53, NonSquaresInTheCompositum) {
  const auto fam = example53_family(3);
  std::vector<Int> gens;
  for (const auto& e : fam) gens.push_back(e.field.D());
  const auto comp = MultiquadDescriptor::from_generators(gens);
  for (std::size_t k = 0; k < fam.size(); ++k) {
    ASSERT_FALSE(is_square_in(Rat(2 * (2 * fam[k].n + 1)), comp));
    for (std::size_t l = k + 1; l < fam.size(); ++l)
      ASSERT_FALSE(is_square_in(Rat((2 * fam[k].n + 1) * (2 * fam[l].n + 1)), comp));
  }
}

TEST(Family54, DeltasLandOnAPrimeOfThePair) {
  const auto fam = example54_family({Int(3), Int(7)});
  ASSERT_EQ(fam.size(), 1u);
  EXPECT_EQ(fam[0].delta_value, 7);

  const auto fam2 = example54_family({Int(3), Int(7), Int(11), Int(19)});
  ASSERT_EQ(fam2.size(), 2u);
  EXPECT_TRUE(fam2[1].delta_value == 11 || fam2[1].delta_value == 19);

  EXPECT_THROW(example54_family({Int(3)}), BadPrime);
  EXPECT_THROW(example54_family({Int(3), Int(5)}), BadPrime);    // 5 = 1 mod 4
  EXPECT_THROW(example54_family({Int(3), Int(9)}), BadPrime);    // 9 not prime
  EXPECT_THROW(example54_family({Int(3), Int(3)}), BadPrime);
}

std::vector<FamilyInput> first_families(std::size_t k) {
  std::vector<FamilyInput> out;
  for (const Int& n : prop65_admissible_n(k)) {
    const auto rec = prop65_family(n);
    out.push_back(make_family_input(rec.field, rec.mu));
  }
  return out;
}

TEST(GreedySelect, CertificateForThreeOfFive) {
  const auto cert = greedy_disjoint_select(first_families(5), 3);
  EXPECT_EQ(cert.units.size(), 3u);
  EXPECT_EQ(cert.witnesses.size(), 3u);  // pairs (0,1), (0,2), (1,2)
  const auto rep = verify_certificate(cert);
  EXPECT_TRUE(rep.ok) << (rep.failures.empty() ? "" : rep.failures.front());
}

TEST(GreedySelect, TrivialAndInsufficient) {
  const auto cert = greedy_disjoint_select(first_families(1), 1);
  EXPECT_EQ(cert.units.size(), 1u);
  EXPECT_TRUE(cert.witnesses.empty());
  EXPECT_TRUE(verify_certificate(cert).ok);

  EXPECT_THROW(greedy_disjoint_select(first_families(5), 6), InsufficientFamilies);
}

TEST(Theorem72, SmallCertificates) {
  const auto c1 = theorem72_certificate(1);
  EXPECT_EQ(c1.units.size(), 1u);

  const auto c2 = theorem72_certificate(2);
  ASSERT_EQ(c2.units.size(), 2u);
  EXPECT_EQ(c2.units[0].field.d1(), 2);     // n = 1
  EXPECT_EQ(c2.units[1].field.d1(), 182);   // n = 13
  EXPECT_TRUE(verify_certificate(c2).ok);
}

TEST(Theorem72, TenAdmissibleParametersBelow500) {
  const auto ns = prop65_admissible_n(10, Int(500));
  ASSERT_EQ(ns.size(), 10u);
  EXPECT_EQ(ns.front(), 1);
  EXPECT_EQ(ns[1], 13);
}

TEST(Certificate, JsonRoundTripReverifies) {
  const auto cert = theorem72_certificate(3);
  const Json j = certificate_to_json(cert);
  const auto back = certificate_from_json(j);
  ASSERT_EQ(back.units.size(), cert.units.size());
  ASSERT_EQ(back.witnesses.size(), cert.witnesses.size());
  EXPECT_TRUE(verify_certificate(back).ok);
}

TEST(Certificate, TamperingIsDetected) {
  const auto cert = theorem72_certificate(2);
  Json j = certificate_to_json(cert);

  // swap a unit for one inside the rational square class: verification fails
  Json tampered = j;
  tampered["units"][0]["elem"]["coords"] = {"1", "0", "0", "0"};
  EXPECT_FALSE(verify_certificate(certificate_from_json(tampered)).ok);

  // drop a witness: pair coverage fails
  Json dropped = j;
  dropped["witnesses"] = Json::array();
  EXPECT_FALSE(verify_certificate(certificate_from_json(dropped)).ok);

  // claim a relative norm that is actually a square in the extension
  Json wrong = j;
  wrong["witnesses"][0]["data"]["relnorm"] = quad_elem_to_json(
      QuadElem::from_rational(QuadField(cert.units[0].field.d2()), Rat(4)));
  EXPECT_FALSE(verify_certificate(certificate_from_json(wrong)).ok);
}

TEST(Certificate, KummerWitnessKind) {
  // a hand-built certificate exercising the rational-class witness path
  ClassCertificate cert;
  const auto rec1 = prop65_family(Int(1));
  const auto rec13 = prop65_family(Int(13));
  cert.units.push_back(make_family_input(rec1.field, rec1.mu));
  cert.units.push_back(make_family_input(rec13.field, rec13.mu));
  PairWitness w;
  w.i = 0;
  w.j = 1;
  w.kind = PairWitness::Kind::KummerNonmember;
  w.target_class = Rat(7);  // delta of Q(sqrt21); outside span{182, 1677}
  w.ext_generators = {Int(182), Int(1677)};
  cert.witnesses.push_back(w);
  const Json j = certificate_to_json(cert);
  EXPECT_TRUE(verify_certificate(certificate_from_json(j)).ok);

  PairWitness bad = cert.witnesses[0];
  bad.target_class = Rat(182 * 1677);
  cert.witnesses[0] = bad;
  EXPECT_FALSE(verify_certificate(cert).ok);
}

}  // namespace
}  // namespace unitforge
