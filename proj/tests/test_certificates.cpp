#include <functional>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "rcwb/certificate_verify.hpp"
#include "rcwb/certificates.hpp"

using namespace rcwb;
using namespace rcwb::certificates;

namespace {

// Oracle for (n, M) by integer arithmetic on the rank level. With rho = p/q
// and kappa_lb = a/b the stage condition k/r < a/b - p/q (k = 1 for A,
// 2 for B; rho doubled for B) reads k*b*q < r*(a*q - p*b); M is the least
// integer with M*q > (q + p)*r (A) or M*q > (q + 2p)*r (B).
std::pair<unsigned, BigInt> oracle_stage_and_level(Preset system, const Rational& rho, unsigned terms) {
  const auto kappa = sequences::kappa_interval(terms);
  const bool crossed = system == Preset::PaperB;
  const BigInt p = numerator(rho) * (crossed ? 2 : 1);
  const BigInt q = denominator(rho);
  const BigInt a = numerator(kappa.lower);
  const BigInt b = denominator(kappa.lower);
  const BigInt k = crossed ? 2 : 1;
  BigInt r = 1;
  for (unsigned n = 1;; ++n) {
    r <<= (n + 1);
    if (k * b * q < r * (a * q - p * b)) return {n, (q + p) * r / q + 1};
  }
}

Rational random_admissible_rho(std::mt19937_64& rng, const Rational& bound) {
  const long long q = std::uniform_int_distribution<long long>(1, 5000)(rng);
  const BigInt limit = floor(bound * q);  // p <= limit gives p/q <= bound
  BigInt p = BigInt(rng() % 1000000007ULL) % (limit + 1);
  Rational rho(p, q);
  if (rho >= bound) rho = Rational(p - 1, q);
  return rho;
}

std::vector<std::pair<std::string, RcCertificate>> single_field_mutations(const RcCertificate& cert) {
  std::vector<std::pair<std::string, RcCertificate>> out;
  auto add = [&](std::string name, const std::function<void(RcCertificate&)>& f) {
    RcCertificate c = cert;
    f(c);
    out.emplace_back(std::move(name), std::move(c));
  };
  for (int delta : {-1, 1}) {
    const std::string sign = delta > 0 ? "+1" : "-1";
    add("rho" + sign, [&](RcCertificate& c) { c.rho += delta; });
    add("kappa_lb" + sign, [&](RcCertificate& c) { c.kappa_lb += delta; });
    add("kappa_ub" + sign, [&](RcCertificate& c) { c.kappa_ub += delta; });
    if (static_cast<long long>(cert.terms) + delta >= 1) add("terms" + sign, [&](RcCertificate& c) { c.terms += delta; });
    if (static_cast<long long>(cert.n) + delta >= 0) add("n" + sign, [&](RcCertificate& c) { c.n += delta; });
    add("M" + sign, [&](RcCertificate& c) { c.M += delta; });
    for (std::size_t i = 0; i < cert.window.size(); ++i) {
      if (static_cast<long long>(cert.window[i]) + delta >= 0) {
        add("window[" + std::to_string(i) + "]" + sign, [&](RcCertificate& c) { c.window[i] += delta; });
      }
    }
  }
  add("monotone_tail", [](RcCertificate& c) { c.monotone_tail = !c.monotone_tail; });
  return out;
}

}  // namespace

TEST(Generator, PaperAHalf) {
  const auto cert = rc_lower_certificate(Preset::PaperA, Rational(1, 2));
  EXPECT_EQ(cert.n, 2u);
  EXPECT_EQ(cert.M, 49);
  EXPECT_EQ(cert.window, (std::vector<unsigned>{3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
  EXPECT_LT(Rational(3, 2), Rational(49, 32));
  EXPECT_LT(Rational(49, 32), 1 + cert.kappa_lb);
  EXPECT_TRUE(verify_certificate(cert).verified());
}

TEST(Generator, PaperBQuarter) {
  const auto cert = rc_lower_certificate(Preset::PaperB, Rational(1, 4));
  EXPECT_EQ(cert.n, 2u);
  EXPECT_EQ(cert.M, 49);
  EXPECT_LT(Rational(3, 4), Rational(49, 64));
  EXPECT_LT(Rational(49, 64), cert.kappa_lb / 2 + Rational(1, 2));
  EXPECT_TRUE(verify_certificate(cert).verified());
}

TEST(Generator, RhoTooLarge) {
  for (unsigned terms : {10U, 20U, 40U}) {
    try {
      rc_lower_certificate(Preset::PaperA, Rational(3, 5), terms);
      FAIL() << "expected RhoTooLarge";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::RhoTooLarge);
    }
  }
  EXPECT_THROW(rc_lower_certificate(Preset::PaperB, Rational(3, 10)), Error);
  EXPECT_THROW(rc_lower_certificate(Preset::PaperA, Rational(-1, 3)), Error);
  EXPECT_THROW(rc_lower_certificate(Preset::Custom, Rational(0)), Error);
}

TEST(Generator, ZeroRho) {
  const auto cert = rc_lower_certificate(Preset::PaperA, Rational(0));
  EXPECT_EQ(cert.n, 1u);
  EXPECT_EQ(cert.M, 5);
  EXPECT_TRUE(verify_certificate(cert).verified());
  EXPECT_TRUE(verify_certificate(rc_lower_certificate(Preset::PaperB, Rational(0))).verified());
}

TEST(Generator, MatchesIntegerOracle) {
  std::mt19937_64 rng(31);
  for (Preset system : {Preset::PaperA, Preset::PaperB}) {
    const Rational bound = certified_rho_bound(system, 40);
    for (int i = 0; i < 200; ++i) {
      const Rational rho = random_admissible_rho(rng, bound);
      const auto cert = rc_lower_certificate(system, rho);
      const auto [n, M] = oracle_stage_and_level(system, rho, 40);
      EXPECT_EQ(cert.n, n) << to_string(rho);
      EXPECT_EQ(cert.M, M) << to_string(rho);
    }
  }
}

TEST(Verifier, PaperAReplayUsesVilladsenAtEveryStage) {
  const auto report = verify_certificate(rc_lower_certificate(Preset::PaperA, Rational(1, 2)));
  ASSERT_TRUE(report.verified());
  std::set<unsigned> stages;
  for (const auto& s : report.steps) {
    if (s.step == "obstruction") {
      EXPECT_EQ(s.detail, bundles::reason::kVilladsen);
      stages.insert(*s.stage);
    }
  }
  EXPECT_EQ(stages, (std::set<unsigned>{3, 4, 5, 6, 7, 8, 9, 10, 11, 12}));
}

TEST(Verifier, RejectsTamperedLevels) {
  auto cert = rc_lower_certificate(Preset::PaperA, Rational(1, 2));
  cert.M = 52;
  EXPECT_FALSE(verify_certificate(cert).verified());
  cert.M = 99;
  EXPECT_FALSE(verify_certificate(cert).verified());
}

TEST(Verifier, RejectsWrongSystem) {
  auto cert = rc_lower_certificate(Preset::PaperA, Rational(1, 2));
  cert.system = Preset::PaperB;
  EXPECT_FALSE(verify_certificate(cert).verified());
  cert.system = Preset::Custom;
  EXPECT_FALSE(verify_certificate(cert).verified());
}

TEST(Verifier, RejectsBrokenWindows) {
  auto cert = rc_lower_certificate(Preset::PaperA, Rational(1, 3));
  cert.window.clear();
  EXPECT_FALSE(verify_certificate(cert).verified());
  cert = rc_lower_certificate(Preset::PaperA, Rational(1, 3));
  cert.window.push_back(100);
  EXPECT_FALSE(verify_certificate(cert).verified());
  cert = rc_lower_certificate(Preset::PaperA, Rational(1, 3));
  cert.n = 100000;
  EXPECT_FALSE(verify_certificate(cert).verified());
}

TEST(CertificateProperties, RandomAdmissibleRhoVerifies) {
  std::mt19937_64 rng(32);
  for (Preset system : {Preset::PaperA, Preset::PaperB}) {
    const Rational bound = certified_rho_bound(system, 40);
    for (int i = 0; i < 50; ++i) {
      const Rational rho = random_admissible_rho(rng, bound);
      EXPECT_TRUE(verify_certificate(rc_lower_certificate(system, rho)).verified()) << to_string(rho);
    }
  }
}

TEST(CertificateProperties, EverySingleFieldMutationIsDetected) {
  std::mt19937_64 rng(33);
  std::size_t trials = 0;
  for (Preset system : {Preset::PaperA, Preset::PaperB}) {
    const Rational bound = certified_rho_bound(system, 40);
    for (int i = 0; i < 10; ++i) {
      const auto cert = rc_lower_certificate(system, random_admissible_rho(rng, bound));
      for (const auto& [name, mutated] : single_field_mutations(cert)) {
        EXPECT_FALSE(verify_certificate(mutated).verified()) << name << " on rho=" << to_string(cert.rho);
        ++trials;
      }
    }
  }
  EXPECT_GT(trials, 400u);
}

TEST(CertificateProperties, SupremumBelowMeanDimensionBound) {
  for (Preset system : {Preset::PaperA, Preset::PaperB}) {
    const auto spec = system == Preset::PaperA ? ah::DiagonalSystemSpec::paper_a() : ah::DiagonalSystemSpec::paper_b();
    const Rational bound = certified_rho_bound(system, 20);
    const Rational near = bound - Rational(1, BigInt(1) << 40);
    EXPECT_TRUE(verify_certificate(rc_lower_certificate(system, near, 20)).verified());
    EXPECT_LE(bound, niu_upper_bound(spec, 20).upper);
  }
}

TEST(Bounds, NiuUpperBound) {
  const auto kappa = sequences::kappa_interval(40);
  const auto a = niu_upper_bound(ah::DiagonalSystemSpec::paper_a(), 40);
  EXPECT_TRUE(kappa.contains(a.upper));
  const auto b = niu_upper_bound(ah::DiagonalSystemSpec::paper_b(), 40);
  EXPECT_TRUE(kappa.contains(2 * b.upper));
  EXPECT_EQ(a.lower, 0);
}

TEST(Bounds, NiuCustomSystems) {
  // No coordinates at all: mean dimension zero.
  const auto flat = ah::DiagonalSystemSpec::custom({{0, 1, {0}}, {1, 2, {0}}, {2, 6, {0}}},
                                                   {{0, 0, 0, 2, 0}, {1, 0, 0, 3, 0}});
  EXPECT_EQ(niu_upper_bound(flat).upper, 0);
  // Ratios 2, 4/3: bound (4/3)/2.
  const auto shrinking = ah::DiagonalSystemSpec::custom({{0, 1, {1}}, {1, 3, {2}}}, {{0, 0, 0, 2, 1}});
  EXPECT_EQ(niu_upper_bound(shrinking).upper, Rational(2, 3));
  // Ratio grows from 0 to 2/2: no bound.
  const auto growing = ah::DiagonalSystemSpec::custom({{0, 1, {0}}, {1, 1, {1}}}, {{0, 0, 0, 1, 0}});
  try {
    niu_upper_bound(growing);
    FAIL() << "expected Divergent";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Divergent);
  }
}

TEST(Bounds, SqueezeAtSeveralTerms) {
  Rational previous_gap = 1;
  for (unsigned terms : {10U, 20U, 40U}) {
    const auto kappa = sequences::kappa_interval(terms);
    const auto a = rc_interval(Preset::PaperA, terms);
    const auto b = rc_interval(Preset::PaperB, terms);
    EXPECT_TRUE(kappa.contains(a.lower) && kappa.contains(a.upper));
    EXPECT_TRUE(kappa.contains(2 * b.lower) && kappa.contains(2 * b.upper));
    EXPECT_LE(a.lower, a.upper);
    EXPECT_LE(b.upper, a.upper / 2);
    EXPECT_LT(a.upper - a.lower, previous_gap);
    previous_gap = a.upper - a.lower;
    EXPECT_EQ(fixed_point_relation(b, 2), a);
  }
}

TEST(Bounds, CornerExamples) {
  const RcInterval rc{Rational(1, 4), Rational(1, 3), {}};
  EXPECT_EQ(corner_rc_interval(rc, 1, 1), rc);
  EXPECT_EQ(corner_rc_interval(RcInterval{0, 0, {}}, Rational(1, 2), 3), (RcInterval{0, 0, {}}));
  EXPECT_EQ(fixed_point_relation(rc, 3), (RcInterval{Rational(3, 4), 1, {}}));
  EXPECT_EQ(fixed_point_relation(rc, 1), rc);
  EXPECT_THROW(corner_rc_interval(rc, 0, 1), Error);
  EXPECT_THROW(corner_rc_interval(rc, 2, 1), Error);
  EXPECT_THROW(fixed_point_relation(rc, 0), Error);
  const auto b = rc_interval(Preset::PaperB);
  const auto k = sequences::kappa_interval(40);
  EXPECT_EQ(corner_rc_interval(b, Rational(1, 2), Rational(1, 2)), (RcInterval{k.lower, k.upper, {}}));
}
