#include <random>

#include <gtest/gtest.h>

#include "rcwb/ah_system.hpp"
#include "rcwb/bundles.hpp"
#include "rcwb/traces.hpp"

using namespace rcwb;
using namespace rcwb::traces;
using ah::StageClassPair;
using bundles::KClass;

TEST(Traces, ExtremeTracesPerSummand) {
  const auto a = ah::DiagonalSystemSpec::paper_a();
  const auto b = ah::DiagonalSystemSpec::paper_b();
  const auto ta = extreme_traces(a, 3);
  ASSERT_EQ(ta.size(), 2u);
  EXPECT_EQ(ta[1].normalization, 512);
  const auto tb = extreme_traces(b, 3);
  ASSERT_EQ(tb.size(), 1u);
  EXPECT_EQ(tb[0].normalization, 1024);
}

TEST(Traces, CanonicalValues) {
  const auto a = ah::DiagonalSystemSpec::paper_a();
  const auto b = ah::DiagonalSystemSpec::paper_b();
  for (unsigned n = 0; n <= 12; ++n) {
    const auto row = sequences::seq_row(n);
    for (const auto& tau : extreme_traces(a, n)) EXPECT_EQ(d_tau(ah::canonical_p_prime(n), tau), 1) << n;
    for (const auto& tau : extreme_traces(b, n)) EXPECT_EQ(d_tau(ah::canonical_q(n), tau), Rational(1, 2)) << n;
    const auto p = ah::canonical_p(n);
    const auto taus = extreme_traces(a, n);
    EXPECT_EQ(d_tau(p, taus[0]), Rational(row.r - row.t, row.r));
    EXPECT_EQ(d_tau(p, taus[1]), Rational(row.t, row.r));
    EXPECT_LE(d_tau_max(p), 1);
  }
  const auto p2 = ah::canonical_p(2);
  EXPECT_EQ(d_tau_all(p2), (std::vector<Rational>{Rational(11, 16), Rational(5, 16)}));
  EXPECT_EQ(d_tau_min(p2), Rational(5, 16));
}

TEST(Traces, UnitAndTrivialClasses) {
  const auto a = ah::DiagonalSystemSpec::paper_a();
  EXPECT_EQ(d_tau_max(ah::unit_class(a, 4)), 1);
  EXPECT_EQ(d_tau_min(ah::unit_class(a, 4)), 1);
  const auto m = ah::trivial_classes(a, 2, 49);
  EXPECT_EQ(d_tau_max(m), Rational(49, 32));
  EXPECT_EQ(d_tau_min(m), Rational(49, 32));
}

TEST(Traces, RejectsWrongStage) {
  const auto a = ah::DiagonalSystemSpec::paper_a();
  EXPECT_THROW(d_tau(ah::canonical_p(2), extreme_traces(a, 3)[0]), Error);
  TraceFunctional bad{2, 5, 32};
  EXPECT_THROW(d_tau(ah::canonical_p(2), bad), Error);
}

TEST(TraceProperties, AdditiveFlipCovariantAndMonotone) {
  std::mt19937_64 rng(21);
  auto random_class = [&](long long coords, long long max_trivial) {
    KClass c = KClass::trivial_class(coords, std::uniform_int_distribution<long long>(0, max_trivial)(rng));
    for (long long i = 1; i <= coords; ++i) {
      if (rng() % 3 == 0) c.bott.insert(BigInt(i));
    }
    return c;
  };
  int monotone_cases = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const long long coords = 8;
    const KClass e0 = random_class(coords, 5);
    const KClass e1 = random_class(coords, 5);
    const KClass f0 = random_class(coords, 20);
    const KClass f1 = random_class(coords, 20);
    const StageClassPair e{0, 16, 2, {e0, e1}};
    const StageClassPair f{0, 16, 2, {f0, f1}};
    const std::vector<TraceFunctional> taus{{0, 0, 16}, {0, 1, 16}};
    if (e0.bott.disjoint(f0.bott) && e1.bott.disjoint(f1.bott)) {
      const StageClassPair sum{0, 16, 2, {bundles::direct_sum(e0, f0), bundles::direct_sum(e1, f1)}};
      for (const auto& tau : taus) EXPECT_EQ(d_tau(sum, tau), d_tau(e, tau) + d_tau(f, tau));
    }
    EXPECT_EQ(d_tau(ah::apply_flip(e), taus[0]), d_tau(e, taus[1]));
    EXPECT_EQ(d_tau(ah::apply_flip(e), taus[1]), d_tau(e, taus[0]));
    if (bundles::compare(e0, f0).verdict == bundles::Verdict::Yes &&
        bundles::compare(e1, f1).verdict == bundles::Verdict::Yes) {
      ++monotone_cases;
      for (const auto& tau : taus) EXPECT_LE(d_tau(e, tau), d_tau(f, tau));
    }
  }
  EXPECT_GT(monotone_cases, 100);
}
