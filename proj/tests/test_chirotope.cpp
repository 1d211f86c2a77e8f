#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace om;

namespace {

Chirotope realize(const std::vector<std::vector<long long>>& rows) {
  return from_vectors(VectorConfig::from_integers(rows));
}

const std::vector<std::vector<long long>> kCubeCorner{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
const std::vector<std::vector<long long>> kThreeLines{{1, 0}, {0, 1}, {-1, 1}};

std::string body(const SignMap& m) {
  std::string s;
  for (auto v : m.values) s += v > 0 ? '+' : v < 0 ? '-' : '0';
  return s;
}

// Every string over {-,0,+} of the given length.
std::vector<std::string> all_bodies(std::size_t len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < len; ++i) {
    std::vector<std::string> next;
    for (const auto& s : out)
      for (char c : {'-', '0', '+'}) next.push_back(s + c);
    out = std::move(next);
  }
  return out;
}

}  // namespace

TEST(Evaluate, Examples) {
  SignMap m(3, 3);
  m.set({1, 2, 3}, 1);
  EXPECT_EQ(evaluate(m, {pos(2), pos(1), pos(3)}), -1);
  EXPECT_EQ(evaluate(m, {pos(1), pos(2), bar(2)}), 0);
  EXPECT_EQ(evaluate(m, {pos(1), bar(2), pos(3)}), -1);
  EXPECT_THROW(evaluate(m, {pos(1), pos(2)}), UsageError);
}

TEST(Evaluate, NegationFlipsValue) {
  std::mt19937_64 rng(21);
  const auto chi = realize(kCubeCorner);
  std::vector<int> alphabet{1, -1, 2, -2, 3, -3, 4, -4};
  oracle::tuples(alphabet, 3, [&](const std::vector<int>& t) {
    Simplex s;
    for (int v : t) s.push_back(se(v));
    EXPECT_EQ(chi(negate_simplex(s)), -chi(s));
    return true;
  });
}

TEST(Evaluate, MatchesIndependentEvaluator) {
  const auto chi = realize(kCubeCorner);
  oracle::Evaluator ev(chi.map());
  std::vector<int> alphabet{1, -1, 2, -2, 3, -3, 4, -4};
  oracle::tuples(alphabet, 3, [&](const std::vector<int>& t) {
    Simplex s;
    for (int v : t) s.push_back(se(v));
    EXPECT_EQ(chi(s), ev(t));
    return true;
  });
}

TEST(CheckChirotope, AllZeroViolatesC1AtElementOne) {
  auto rep = check_chirotope(SignMap(3, 2));
  EXPECT_TRUE(rep.violates("C1"));
  EXPECT_EQ(rep.violations.front().message, "C1 violated, witness element 1");
}

TEST(CheckChirotope, SingleBasisIsValid) {
  SignMap m(3, 3);
  m.set({1, 2, 3}, 1);
  EXPECT_TRUE(check_chirotope(m).ok());
}

TEST(CheckChirotope, DisjointBasesViolateC3) {
  SignMap m(4, 2);
  m.set({1, 2}, 1);
  m.set({3, 4}, 1);
  auto rep = check_chirotope(m);
  EXPECT_TRUE(rep.violates("C3"));
  EXPECT_FALSE(rep.violates("C1"));
}

TEST(CheckChirotope, FlippedSignViolatesC4) {
  // a single flipped value in a generic rank-3 configuration breaks the Grassmann-Pluecker signs
  const auto base = realize({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, 2, 3}}).map();
  ASSERT_TRUE(check_chirotope(base).ok());
  int rejected = 0;
  for (std::size_t i = 0; i < base.values.size(); ++i) {
    auto m = base;
    m.values[i] = static_cast<std::int8_t>(-m.values[i]);
    if (oracle::naive_is_chirotope(m)) continue;
    ++rejected;
    EXPECT_TRUE(check_chirotope(m).violates("C4")) << i;
  }
  EXPECT_GT(rejected, 0);
}

TEST(CheckChirotope, SizeGuard) {
  EXPECT_THROW(check_chirotope(SignMap(10, 2)), SizeGuardError);
  EXPECT_THROW(check_chirotope(SignMap(6, 6)), SizeGuardError);
  EXPECT_NO_THROW(check_chirotope(SignMap(10, 2), {true, true}));
}

TEST(CheckChirotope, ExhaustiveRank2OnFourAgreesWithNaiveOracle) {
  int accepted = 0;
  for (const auto& b : all_bodies(6)) {
    const auto m = oracle::to_map(4, 2, b);
    const bool fast = check_chirotope(m).ok();
    ASSERT_EQ(fast, oracle::naive_is_chirotope(m)) << b;
    accepted += fast;
  }
  EXPECT_GT(accepted, 0);
}

TEST(CheckChirotope, ExhaustiveSmallCasesAgreeWithNaiveOracle) {
  for (auto [n, r] : {std::pair{3, 2}, {4, 3}, {3, 1}, {4, 1}}) {
    for (const auto& b : all_bodies(binomial(n, r))) {
      const auto m = oracle::to_map(n, r, b);
      ASSERT_EQ(check_chirotope(m).ok(), oracle::naive_is_chirotope(m)) << n << " " << r << " " << b;
    }
  }
}

TEST(CheckChirotope, PerturbedRank3AgreesWithNaiveOracle) {
  std::mt19937_64 rng(22);
  int rejected = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto m = from_vectors(VectorConfig::from_integers(oracle::random_rows(rng, 5, 3, -2, 2))).map();
    if (trial % 3) {
      const std::size_t i = rng() % m.values.size();
      m.values[i] = static_cast<std::int8_t>((m.values[i] + 2) % 3 - 1);
    }
    const bool fast = check_chirotope(m).ok();
    ASSERT_EQ(fast, oracle::naive_is_chirotope(m)) << body(m);
    rejected += !fast;
  }
  EXPECT_GT(rejected, 0);
}

TEST(CheckChirotope, ExhaustiveFullRankHasExactlyTwo) {
  for (int r = 1; r <= 4; ++r) {
    std::vector<std::string> accepted;
    for (const auto& b : all_bodies(1))
      if (check_chirotope(oracle::to_map(r, r, b)).ok()) accepted.push_back(b);
    EXPECT_EQ(accepted, (std::vector<std::string>{"-", "+"})) << r;
  }
}

TEST(CheckChirotope, AcceptedSetClosedUnderNegationAndRelabeling) {
  std::set<std::string> accepted;
  for (const auto& b : all_bodies(6))
    if (check_chirotope(oracle::to_map(4, 2, b)).ok()) accepted.insert(b);
  std::vector<int> perm{1, 2, 3, 4};
  for (const auto& b : accepted) {
    auto m = oracle::to_map(4, 2, b);
    SignMap neg = m;
    for (auto& v : neg.values) v = static_cast<std::int8_t>(-v);
    EXPECT_TRUE(accepted.count(body(neg)));
    std::sort(perm.begin(), perm.end());
    do {
      // relabeled map: value on {p(i),p(j)} is the sign of [p(i),p(j)] normalized
      SignMap q(4, 2);
      for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
          const auto nf = normalize({pos(perm[i - 1]), pos(perm[j - 1])});
          q.set(nf->support, nf->sign * m.at({i, j}));
        }
      EXPECT_TRUE(accepted.count(body(q))) << b;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

TEST(FromVectors, IdentityIsPositive) {
  EXPECT_EQ(realize({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}).at({1, 2, 3}), 1);
}

TEST(FromVectors, ThreeLinesInThePlane) {
  const auto chi = realize(kThreeLines);
  const auto expect = oracle::det_signs(kThreeLines);
  EXPECT_EQ(chi.at({1, 2}), 1);
  EXPECT_EQ(chi.at({1, 3}), 1);
  EXPECT_EQ(chi.at({2, 3}), 1);
  for (const auto& [s, v] : expect) EXPECT_EQ(chi.at(s), v);
}

TEST(FromVectors, CubeCorner) {
  const auto chi = realize(kCubeCorner);
  EXPECT_EQ(chi.at({1, 2, 3}), 1);
  EXPECT_EQ(chi.at({1, 2, 4}), 1);
  EXPECT_EQ(chi.at({1, 3, 4}), -1);
  EXPECT_EQ(chi.at({2, 3, 4}), 1);
}

TEST(FromVectors, RationalEntries) {
  VectorConfig v;
  v.rows = {{Rational(1, 3), Rational(0)}, {Rational(-2, 7), Rational(5, 2)}};
  EXPECT_EQ(from_vectors(v).at({1, 2}), 1);
}

TEST(FromVectors, Errors) {
  EXPECT_THROW(realize({{1, 2}, {2, 4}, {-1, -2}}), RealizationError);
  EXPECT_THROW(realize({{1, 0}, {0, 0}, {0, 1}}), RealizationError);
  EXPECT_THROW(realize({{1, 0, 0}, {0, 1, 0}}), RealizationError);
  EXPECT_THROW(from_vectors(VectorConfig{}), RealizationError);
}

TEST(FromVectors, RandomConfigsMatchLeibnizAndPassCheck) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 4);
    const int n = r + static_cast<int>(rng() % (8 - r));
    const auto rows = oracle::random_rows(rng, n, r);
    const auto chi = realize(rows);
    for (const auto& [s, v] : oracle::det_signs(rows)) ASSERT_EQ(chi.at(s), v);
    EXPECT_TRUE(check_chirotope(chi.map()).ok());
  }
}

TEST(FromVectors, LargeEntriesStayExact) {
  // a nearly singular matrix whose determinant is 1
  const long long big = 1'000'000'007LL;
  const auto chi = realize({{big, big - 1}, {big + 1, big}});
  EXPECT_EQ(chi.at({1, 2}), 1);
}

TEST(Deletion, Examples) {
  auto res = deletion(realize(kCubeCorner), std::vector<int>{4});
  EXPECT_TRUE(res.report.ok());
  EXPECT_EQ(body(res.map), "+");
  EXPECT_EQ(res.map.ids, (std::vector<int>{1, 2, 3}));

  EXPECT_THROW(deletion(canonical_arrangement(2, 1), std::vector<int>{1}), DeletionError);

  auto r2 = deletion(realize(kThreeLines), std::vector<int>{2});
  EXPECT_TRUE(r2.report.ok());
  EXPECT_EQ(r2.map.ids, (std::vector<int>{1, 3}));
  EXPECT_EQ(r2.map.at({1, 2}), 1);
}

TEST(Deletion, KeepsOriginalLabelsThroughMinorsOfMinors) {
  auto chi = realize({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 2}});
  auto d1 = deletion(chi, std::vector<int>{2});
  ASSERT_TRUE(d1.report.ok()) << to_string(d1.report);
  auto d2 = deletion(Chirotope::unchecked(d1.map), std::vector<int>{d1.map.position_of(4)});
  EXPECT_EQ(d2.map.ids, (std::vector<int>{1, 3, 5}));
}

TEST(Deletion, BasesAreThoseAvoidingR) {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    const auto rows = oracle::random_rows(rng, 6, 3, -3, 3);
    const auto chi = realize(rows);
    const int e = 1 + static_cast<int>(rng() % 6);
    auto res = deletion(chi, std::vector<int>{e});
    std::set<std::vector<int>> expect, got;
    for (const auto& [s, v] : oracle::det_signs(rows))
      if (v != 0 && std::find(s.begin(), s.end(), e) == s.end()) expect.insert(s);
    for_each_subset(res.map.size(), 3, [&](std::span<const int> s) {
      std::vector<int> lbl;
      for (int p : s) lbl.push_back(res.map.label(p + 1));
      std::vector<int> one(s.begin(), s.end());
      for (int& p : one) ++p;
      if (res.map.at(one) != 0) got.insert(lbl);
    });
    EXPECT_EQ(got, expect);
  }
}

TEST(FindDeletable, Examples) {
  EXPECT_EQ(find_deletable(realize(kCubeCorner)), 1);
  EXPECT_THROW(find_deletable(canonical_arrangement(2, 1)), NoDeletableElement);
  EXPECT_EQ(find_deletable(realize({{1, 0}, {0, 1}, {-1, 1}, {1, 1}})), 1);
}

TEST(FindDeletable, SmallestVerifiedElement) {
  // elements 1 and 2 are coloops of this configuration: deleting them drops the rank
  const auto chi = realize({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 2}});
  EXPECT_EQ(find_deletable(chi), 3);
}

TEST(Contraction, Examples) {
  SignMap plus(3, 3);
  plus.set({1, 2, 3}, 1);
  const auto a = Chirotope::unchecked(plus);
  auto c = contraction(a, std::vector<int>{1});
  EXPECT_EQ(c.map().ids, (std::vector<int>{2, 3}));
  EXPECT_EQ(body(c.map()), "+");
  EXPECT_THROW(contraction(a, std::vector<int>{1, 2, 3}), ContractionError);
  EXPECT_THROW(contraction(a, std::vector<int>{4}), UsageError);
}

TEST(Contraction, CubeCornerMatchesProjection) {
  const auto chi = realize(kCubeCorner);
  const auto c = contraction(chi, std::vector<int>{4});
  EXPECT_EQ(c.map().ids, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(body(c.map()), "+-+");
  // determinants with row 4 fixed first
  for (const auto& s : oracle::lex_subsets(3, 2)) {
    const long long d = oracle::det({kCubeCorner[3], kCubeCorner[s[0] - 1], kCubeCorner[s[1] - 1]});
    EXPECT_EQ(c.at(s), oracle::sgn(d));
  }
  // projection onto w-perp in the basis b1=(1,-1,0), b2=(1,1,-2); det(w,b1,b2) = 6 > 0
  VectorConfig proj;
  for (int i = 0; i < 3; ++i) {
    const auto& v = kCubeCorner[i];
    const Rational x(v[0] - v[1], 2);
    const Rational y(v[0] + v[1] - 2 * v[2], 6);
    proj.rows.push_back({x, y});
  }
  EXPECT_EQ(from_vectors(proj).map().values, c.map().values);
}

TEST(Contraction, ValuesEqualPrefixedChirotope) {
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 40; ++trial) {
    const auto rows = oracle::random_rows(rng, 6, 4, -2, 2);
    const auto chi = realize(rows);
    std::vector<int> R{1 + static_cast<int>(rng() % 3), 4 + static_cast<int>(rng() % 3)};
    const auto c = contraction(chi, R);
    EXPECT_TRUE(check_chirotope(c.map()).ok());
    for_each_subset(c.size(), 2, [&](std::span<const int> s) {
      std::vector<int> t{R[0], R[1], c.map().label(s[0] + 1), c.map().label(s[1] + 1)};
      std::vector<int> one{s[0] + 1, s[1] + 1};
      EXPECT_EQ(c.at(one), chi.map().value_of(t));
    });
    // elements outside E/R complete R to no basis
    for (int e = 1; e <= 6; ++e) {
      if (e == R[0] || e == R[1] || c.map().position_of(e)) continue;
      for (int f = 1; f <= 6; ++f) {
        std::vector<int> t{R[0], R[1], e, f};
        EXPECT_EQ(chi.map().value_of(t), 0);
      }
    }
  }
}

TEST(Negate, Examples) {
  SignMap plus(3, 3);
  plus.set({1, 2, 3}, 1);
  const auto a = Chirotope::unchecked(plus);
  EXPECT_EQ(negate(a).at({1, 2, 3}), -1);
  EXPECT_EQ(negate(negate(a)), a);
  SignMap one(1, 1);
  one.set({1}, 1);
  EXPECT_EQ(negate(Chirotope::unchecked(one)).at({1}), -1);
  const auto chi = realize(kCubeCorner);
  EXPECT_TRUE(check_chirotope(negate(chi).map()).ok());
}

TEST(ClassifyFull, Examples) {
  SignMap m(3, 3);
  m.set({1, 2, 3}, 1);
  EXPECT_EQ(classify_full(Chirotope::unchecked(m)), FullClass::Plus);
  m.set({1, 2, 3}, -1);
  EXPECT_EQ(classify_full(Chirotope::unchecked(m)), FullClass::Minus);
  EXPECT_THROW(classify_full(realize(kCubeCorner)), UsageError);
  EXPECT_STREQ(to_string(FullClass::Plus), "PlusClass");
}

TEST(Chirotope, ValidatedThrowsWithReport) {
  try {
    Chirotope::validated(SignMap(3, 2));
    FAIL();
  } catch (const InvalidChirotope& e) {
    EXPECT_TRUE(e.report().violates("C1"));
  }
}
