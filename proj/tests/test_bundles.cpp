#include <random>

#include <gtest/gtest.h>

#include "rcwb/bundles.hpp"

using namespace rcwb;
using namespace rcwb::bundles;

namespace {

KClass make(long long coords, std::initializer_list<long long> bott, long long trivial) {
  KClass c;
  c.coords = coords;
  c.trivial = trivial;
  c.bott = CoordSet(bott);
  return c;
}

// Random class over `coords` factors: each index is a Bott coordinate with
// probability `density`.
KClass random_class(std::mt19937_64& rng, long long coords, double density, long long max_trivial) {
  KClass c;
  c.coords = coords;
  c.trivial = std::uniform_int_distribution<long long>(0, max_trivial)(rng);
  std::bernoulli_distribution pick(density);
  for (long long i = 1; i <= coords; ++i) {
    if (pick(rng)) c.bott.insert(BigInt(i));
  }
  return c;
}

}  // namespace

TEST(CoordSet, MergesAdjacentIntervals) {
  CoordSet s{1, 2, 3, 7, 5, 6};
  ASSERT_EQ(s.intervals().size(), 2u);
  EXPECT_EQ(s.size(), 6);
  EXPECT_TRUE(s.contains(BigInt(6)));
  EXPECT_FALSE(s.contains(BigInt(4)));
  s.insert(BigInt(4));
  EXPECT_EQ(s.intervals().size(), 1u);
  EXPECT_EQ(s, CoordSet::range(1, 7));
}

TEST(CoordSet, OverlapAndDifference) {
  const CoordSet a = CoordSet::range(1, 10);
  const CoordSet b{5, 6, 20};
  EXPECT_EQ(a.overlap(b), 2);
  EXPECT_EQ(a.difference_size(b), 8);
  EXPECT_EQ(b.difference_size(a), 1);
  EXPECT_FALSE(a.disjoint(b));
  EXPECT_TRUE(a.disjoint(CoordSet{11, 12}));
}

TEST(CoordSet, HugeRangesStaySymbolic) {
  const BigInt big = pow2(200);
  const CoordSet s = CoordSet::range(1, big);
  EXPECT_EQ(s.size(), big);
  EXPECT_EQ(s.shifted(big).min(), big + 1);
  EXPECT_THROW(s.enumerate(100), Error);
}

TEST(CoordSet, EnumerateMatchesMembership) {
  const CoordSet s{3, 4, 9};
  const auto xs = s.enumerate();
  ASSERT_EQ(xs.size(), 3u);
  EXPECT_EQ(xs[0], 3);
  EXPECT_EQ(xs[2], 9);
}

TEST(DirectSum, Examples) {
  EXPECT_EQ(direct_sum(make(3, {1}, 0), make(3, {}, 3)), make(3, {1}, 3));
  EXPECT_EQ(direct_sum(make(3, {1}, 0), make(3, {2}, 0)), make(3, {1, 2}, 0));
  try {
    direct_sum(make(3, {1}, 0), make(3, {1}, 0));
    FAIL() << "expected OverlappingBott";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OverlappingBott);
  }
  EXPECT_THROW(direct_sum(make(3, {}, 1), make(4, {}, 1)), Error);
}

TEST(MinDominating, Examples) {
  // p'_n summand at n = 2: Bott on 21 coordinates, trivial 11.
  KClass pp = KClass::full_bott(21, 11);
  EXPECT_EQ(min_dominating_trivial_rank(pp), 32 + 21);
  EXPECT_EQ(min_dominating_trivial_rank(make(3, {}, 5)), 5);
  EXPECT_EQ(min_dominating_trivial_rank(make(3, {1, 2, 3}, 0)), 6);
}

TEST(Compare, Examples) {
  const auto v = compare(KClass::full_bott(21, 11), KClass::trivial_class(21, 49));
  EXPECT_EQ(v.verdict, Verdict::No);
  EXPECT_EQ(v.reason, reason::kVilladsen);
  ASSERT_TRUE(v.obstruction.has_value());
  EXPECT_EQ(v.obstruction->required_rank, 53);
  EXPECT_EQ(v.obstruction->available_rank, 49);

  EXPECT_EQ(compare(make(3, {}, 3), make(3, {}, 3)).verdict, Verdict::Yes);
  const auto line = compare(make(2, {1}, 0), make(2, {2}, 2));
  EXPECT_EQ(line.verdict, Verdict::Yes);
  EXPECT_EQ(line.reason, reason::kEmbedding);
  EXPECT_EQ(min_dominating_trivial_rank(make(2, {1}, 0)), 2);
}

TEST(Compare, RankExcessAndUnknown) {
  const auto v = compare(make(4, {1, 2}, 3), make(4, {3}, 1));
  EXPECT_EQ(v.verdict, Verdict::No);
  EXPECT_EQ(v.reason, reason::kRankExcess);
  // rank 2 vs rank 3 with a Bott factor in f: neither rule applies.
  const auto u = compare(make(4, {1, 2}, 0), make(4, {3}, 2));
  EXPECT_EQ(u.verdict, Verdict::Unknown);
  EXPECT_EQ(u.reason, reason::kOutsideFragment);
  EXPECT_THROW(compare(make(2, {}, 0), make(3, {}, 0)), Error);
}

TEST(Pullback, Examples) {
  EXPECT_EQ(pullback_block(make(1, {1}, 0), 3, 1, 3), make(3, {3}, 0));
  for (int nu = 1; nu <= 4; ++nu) EXPECT_EQ(pullback_block(make(2, {}, 2), nu, 2, 4), make(8, {}, 2));
  EXPECT_EQ(pullback_block(make(3, {1, 3}, 1), 2, 3, 7), make(21, {4, 6}, 1));
  EXPECT_THROW(pullback_block(make(3, {1}, 0), 0, 3, 2), Error);
  EXPECT_THROW(pullback_block(make(3, {1}, 0), 3, 3, 2), Error);
  EXPECT_THROW(pullback_block(make(3, {1}, 0), 1, 2, 2), Error);
}

TEST(Pullback, AllBlocksMatchesBlockwiseSum) {
  const KClass c = make(3, {1, 3}, 2);
  KClass expected = KClass::trivial_class(12, 0);
  for (int nu = 1; nu <= 4; ++nu) expected = direct_sum(expected, pullback_block(c, nu, 3, 4));
  EXPECT_EQ(pullback_all_blocks(c, 4), expected);
  // Full and empty Bott sets stay closed form for astronomically many blocks.
  const BigInt blocks = pow2(100);
  const KClass full = pullback_all_blocks(KClass::full_bott(3, 1), blocks);
  EXPECT_EQ(full.bott.size(), 3 * blocks);
  EXPECT_EQ(full.trivial, blocks);
  EXPECT_EQ(pullback_all_blocks(make(3, {}, 2), blocks).rank(), 2 * blocks);
  EXPECT_THROW(pullback_all_blocks(c, blocks), Error);
}

TEST(PointEvaluation, Examples) {
  EXPECT_EQ(point_evaluation(KClass::full_bott(21, 11)), make(21, {}, 32));
  EXPECT_EQ(point_evaluation(make(2, {}, 4)), make(2, {}, 4));
  EXPECT_EQ(point_evaluation(make(1, {1}, 0)), make(1, {}, 1));
  EXPECT_EQ(point_evaluation(make(1, {1}, 0), BigInt(5)), make(5, {}, 1));
}

TEST(Validate, RejectsOutOfRangeBott) {
  EXPECT_THROW(make(2, {3}, 0).validate(), Error);
  EXPECT_THROW(make(2, {}, -1).validate(), Error);
  EXPECT_NO_THROW(make(2, {1, 2}, 0).validate());
}

// --- properties on random classes -------------------------------------------

TEST(BundleProperties, ReflexiveAndRankPreservingEvaluation) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const KClass c = random_class(rng, 1 + static_cast<long long>(rng() % 12), 0.5, 6);
    EXPECT_EQ(compare(c, c).verdict, Verdict::Yes);
    EXPECT_EQ(point_evaluation(c).rank(), c.rank());
  }
}

TEST(BundleProperties, YesAndNoNeverTogether) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 10000; ++i) {
    const long long coords = 1 + static_cast<long long>(rng() % 10);
    const double density = std::uniform_real_distribution<double>(0, 1)(rng);
    const KClass e = random_class(rng, coords, density, 8);
    const KClass f = random_class(rng, coords, rng() % 4 == 0 ? 0.0 : density, 16);
    EXPECT_FALSE(yes_rule(e, f) && no_rule(e, f));
    if (yes_rule(e, f)) {
      EXPECT_LE(e.rank(), f.rank());
    }
  }
}

TEST(BundleProperties, YesClosedUnderDisjointSums) {
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const long long coords = 12;
    const KClass e = random_class(rng, coords, 0.3, 4);
    const KClass f = random_class(rng, coords, 0.3, 12);
    const KClass e2 = random_class(rng, coords, 0.3, 4);
    const KClass f2 = random_class(rng, coords, 0.3, 12);
    if (!e.bott.disjoint(e2.bott) || !f.bott.disjoint(f2.bott)) continue;
    if (compare(e, f).verdict != Verdict::Yes || compare(e2, f2).verdict != Verdict::Yes) continue;
    EXPECT_EQ(compare(direct_sum(e, e2), direct_sum(f, f2)).verdict, Verdict::Yes);
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(BundleProperties, MinDominatingIsAdditive) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 2000; ++i) {
    const KClass e = random_class(rng, 10, 0.3, 5);
    const KClass e2 = random_class(rng, 10, 0.3, 5);
    if (!e.bott.disjoint(e2.bott)) continue;
    EXPECT_EQ(min_dominating_trivial_rank(direct_sum(e, e2)),
              min_dominating_trivial_rank(e) + min_dominating_trivial_rank(e2));
  }
}
