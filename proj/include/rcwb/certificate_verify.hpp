#pragma once

// Independent replay of an RcCertificate. Only the sequence table, the
// connecting maps, the trace pairing and the bundle oracle are used; none of
// the generator's inequalities are called.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "rcwb/ah_system.hpp"
#include "rcwb/bundles.hpp"
#include "rcwb/certificates.hpp"
#include "rcwb/sequences.hpp"
#include "rcwb/traces.hpp"

namespace rcwb::certificates {

struct VerifyStep {
  std::string step;  // sanity | dtau-gap | obstruction | tail
  std::string check;
  std::optional<unsigned> stage;
  bool passed = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyStep> steps;

  bool verified() const {
    if (steps.empty()) return false;
    return std::all_of(steps.begin(), steps.end(), [](const VerifyStep& s) { return s.passed; });
  }

  std::vector<VerifyStep> failures() const {
    std::vector<VerifyStep> out;
    std::copy_if(steps.begin(), steps.end(), std::back_inserter(out), [](const VerifyStep& s) { return !s.passed; });
    return out;
  }
};

/// Stages beyond this are rejected before any table is built.
inline constexpr unsigned kMaxStage = 4096;

inline VerifyReport verify_certificate(const RcCertificate& cert) {
  VerifyReport report;
  auto record = [&](std::string step, std::string check, bool ok, std::string detail = {},
                    std::optional<unsigned> stage = std::nullopt) {
    report.steps.push_back({std::move(step), std::move(check), stage, ok, std::move(detail)});
    return ok;
  };

  // (i) sanity of the stored numbers.
  if (!record("sanity", "known-system", cert.system != Preset::Custom)) return report;
  if (!record("sanity", "terms-positive", cert.terms >= 1)) return report;
  const bool crossed = cert.system == Preset::PaperB;

  const auto kappa = sequences::kappa_interval(cert.terms);
  record("sanity", "kappa-lower-recomputed", kappa.lower == cert.kappa_lb, to_string(kappa.lower));
  record("sanity", "kappa-upper-recomputed", kappa.upper == cert.kappa_ub, to_string(kappa.upper));
  record("sanity", "kappa-ordered", cert.kappa_lb <= cert.kappa_ub);

  // All comparisons are carried out at the rank level of paper-A: for paper-B
  // every quantity of the form x/(2 r) + 1/2 is doubled.
  const Rational rho_rank = crossed ? Rational(2 * cert.rho) : cert.rho;
  record("sanity", "rho-nonnegative", cert.rho >= 0);
  record("sanity", "rho-below-kappa", rho_rank < cert.kappa_lb, "rank-level rho " + to_string(rho_rank));
  if (!record("sanity", "stage-positive", cert.n >= 1)) return report;
  if (!record("sanity", "M-nonnegative", cert.M >= 0)) return report;

  if (!record("sanity", "stage-in-range", cert.n <= kMaxStage)) return report;

  bool window_ok = record("sanity", "window-nonempty", !cert.window.empty());
  for (std::size_t k = 0; k < cert.window.size(); ++k) {
    window_ok &= record("sanity", "window-contiguous", cert.window[k] == cert.n + 1 + k, {}, cert.window[k]);
  }
  window_ok &= record("sanity", "window-in-range", cert.window.size() <= kMaxStage);

  const auto table = sequences::seq_table(window_ok ? cert.window.back() : cert.n);
  const BigInt& r_n = table.rows[cert.n].r;
  const Rational per_unit(cert.M, r_n);  // M / r(n)
  // Rank-level gap kappa_lb - rho_rank; for paper-B the stage condition
  // 1/r(n) < kappa_lb/2 - rho reads 2/r(n) < kappa_lb - 2 rho.
  const Rational gap = cert.kappa_lb - rho_rank;
  const Rational unit_step = crossed ? Rational(2, r_n) : Rational(1, r_n);
  record("sanity", "stage-resolves-gap", unit_step < gap);
  if (cert.n > 1) {
    const BigInt& r_prev = table.rows[cert.n - 1].r;
    const Rational prev_step = crossed ? Rational(2, r_prev) : Rational(1, r_prev);
    record("sanity", "stage-minimal", !(prev_step < gap));
  }
  record("sanity", "M-above-rho", per_unit > 1 + rho_rank, to_string(per_unit));
  record("sanity", "M-below-kappa", per_unit < 1 + cert.kappa_lb, to_string(per_unit));
  if (cert.M > 0) {
    // M - 1 must fail the lower inequality: (M-1)/r(n) <= 1 + rho_rank.
    record("sanity", "M-minimal", !(Rational(cert.M - 1, r_n) > 1 + rho_rank));
  }
  record("sanity", "monotone-tail-applied", cert.monotone_tail);
  if (!window_ok) return report;

  // (ii) + (iii): push the trivial projection of rank M through the
  // connecting maps and compare with p'_m (resp. q_m) at every window stage.
  const auto spec = crossed ? ah::DiagonalSystemSpec::paper_b() : ah::DiagonalSystemSpec::paper_a();
  ah::StageClassPair e = ah::trivial_classes(spec, cert.n, cert.M);
  const unsigned last = cert.window.back();
  for (unsigned m = cert.n + 1; m <= last; ++m) {
    e = ah::apply_connecting(e, spec);
    const auto& row = table.rows[m];
    const BigInt expected_rank = cert.M * (row.r / r_n);
    for (const auto& cls : e.classes) record("dtau-gap", "pushforward-rank", cls.rank() == expected_rank, cls.rank().str(), m);

    const ah::StageClassPair target = crossed ? ah::canonical_q(m) : ah::canonical_p_prime(m);
    for (const auto& tau : traces::extreme_traces(spec, m)) {
      const Rational lhs = traces::d_tau(e, tau);
      const Rational rhs = traces::d_tau(target, tau) + cert.rho;
      record("dtau-gap", "summand-" + std::to_string(tau.summand), lhs > rhs, to_string(lhs) + " > " + to_string(rhs), m);
    }
    for (std::size_t i = 0; i < target.classes.size(); ++i) {
      const auto verdict = bundles::compare(target.classes[i], e.classes[i]);
      const bool refuted = verdict.verdict == bundles::Verdict::No && verdict.reason == bundles::reason::kVilladsen;
      record("obstruction", "summand-" + std::to_string(i), refuted, verdict.reason, m);
    }

    // (iv) at the window stages: rank stays below r(m) + s(m).
    record("tail", "rank-below-obstruction", expected_rank < row.r + row.s, {}, m);
    record("tail", "kappa-below-u", cert.kappa_lb <= row.u, {}, m);
  }

  // (iv) beyond the window: M/r(n) < 1 + kappa_lb <= 1 + u(m) because
  // kappa_lb <= kappa and u decreases to kappa. Strict decrease is replayed
  // on the whole table, the bound kappa_lb <= kappa is the recomputed
  // enclosure above.
  record("tail", "u-strictly-decreasing", table.violations().empty());
  record("tail", "level-below-one-plus-kappa", per_unit < 1 + kappa.lower);
  return report;
}

}  // namespace rcwb::certificates
