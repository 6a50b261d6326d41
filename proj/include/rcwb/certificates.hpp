#pragma once

// Radius-of-comparison bounds for the two preset systems.
//
// Lower bounds come as replayable certificates: for rho below the certified
// kappa bound pick the least stage n >= 1 with 1/r(n) < bound - rho and the
// least integer M with
//   paper-A:  rho + 1   < M / r(n)    < kappa_lb + 1
//   paper-B:  rho + 1/2 < M / (2 r(n)) < kappa_lb / 2 + 1/2
// The trivial projection of rank M then beats p'_m (resp. q_m) on every
// trace at every later stage but cannot dominate it.
//
// Upper bounds use the mean-dimension estimate rc <= gamma / 2 with gamma at
// most the limit of max(dim / matrix size) along the system.
//
// The checks in certificate_verify.hpp deliberately share no inequality
// code with the generator below.

#include <string>
#include <vector>

#include "rcwb/ah_system.hpp"
#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"
#include "rcwb/sequences.hpp"

namespace rcwb::certificates {

using ah::Preset;

inline constexpr unsigned kDefaultTerms = 40;
inline constexpr unsigned kDefaultWindow = 10;

struct RcCertificate {
  Preset system = Preset::PaperA;
  Rational rho;
  Rational kappa_lb;
  Rational kappa_ub;
  unsigned terms = kDefaultTerms;
  unsigned n = 0;
  BigInt M;
  std::vector<unsigned> window;
  bool monotone_tail = true;

  bool operator==(const RcCertificate&) const = default;
};

struct RcInterval {
  Rational lower;
  Rational upper;
  std::vector<std::string> provenance;

  bool operator==(const RcInterval& other) const { return lower == other.lower && upper == other.upper; }
};

namespace detail {

inline void require_preset(Preset system) {
  if (system == Preset::Custom) throw Error(ErrorCode::InvalidArgument, "certificates exist only for paper-A and paper-B");
}

}  // namespace detail

/// Every rho below this value admits a certificate at `terms`.
inline Rational certified_rho_bound(Preset system, unsigned terms) {
  detail::require_preset(system);
  const auto kappa = sequences::kappa_interval(terms);
  return system == Preset::PaperA ? kappa.lower : kappa.lower / 2;
}

inline RcCertificate rc_lower_certificate(Preset system, const Rational& rho, unsigned terms = kDefaultTerms,
                                          unsigned window_length = kDefaultWindow) {
  detail::require_preset(system);
  if (rho < 0) throw Error(ErrorCode::InvalidArgument, "rho must be nonnegative");
  if (window_length == 0) throw Error(ErrorCode::InvalidArgument, "window must contain at least one stage");
  const auto kappa = sequences::kappa_interval(terms);
  const bool crossed = system == Preset::PaperB;
  const Rational bound = crossed ? kappa.lower / 2 : kappa.lower;
  if (rho >= bound) {
    throw Error(ErrorCode::RhoTooLarge, "rho = " + to_string(rho) + " is not below the certified bound " + to_string(bound));
  }

  const Rational slack = bound - rho;
  unsigned n = 1;
  BigInt r_n = sequences::r(1);
  while (Rational(1, r_n) >= slack) {
    ++n;
    r_n *= sequences::l(n);
  }

  const BigInt scale = crossed ? BigInt(2 * r_n) : r_n;
  const Rational base = crossed ? Rational(1, 2) : Rational(1);
  // Least integer strictly above (rho + base) * scale; the open interval up to
  // (bound + base) * scale is longer than 1 by the choice of n.
  const BigInt M = floor_plus_one((rho + base) * scale);
  if (!(Rational(M, scale) < bound + base)) throw std::logic_error("certificate generator: no admissible M");

  RcCertificate cert;
  cert.system = system;
  cert.rho = rho;
  cert.kappa_lb = kappa.lower;
  cert.kappa_ub = kappa.upper;
  cert.terms = terms;
  cert.n = n;
  cert.M = M;
  for (unsigned k = 1; k <= window_length; ++k) cert.window.push_back(n + k);
  cert.monotone_tail = true;
  return cert;
}

/// [0, gamma/2] with gamma bounded by max(2 coords / size) at the evaluation
/// stage (terms for the presets, the last stage for custom systems). The
/// ratio sequence must be non-increasing up to that stage, otherwise its
/// value there does not bound the limit.
inline RcInterval niu_upper_bound(const ah::DiagonalSystemSpec& spec, unsigned terms = kDefaultTerms) {
  const unsigned last = spec.last_stage().value_or(terms);
  Rational previous;
  Rational ratio;
  for (unsigned k = 0; k <= last; ++k) {
    const auto st = spec.stage(k);
    Rational worst = 0;
    for (const auto& coords : st.coords) {
      const Rational q(2 * coords, st.matrix_size);
      if (q > worst) worst = q;
    }
    if (k > 0 && worst > previous) {
      throw Error(ErrorCode::Divergent, "dimension/size ratio increases at stage " + std::to_string(k));
    }
    previous = worst;
    ratio = worst;
  }
  return {Rational(0), ratio / 2, {"niu-mean-dimension"}};
}

/// Certified enclosure: certificate supremum below, mean dimension above.
inline RcInterval rc_interval(Preset system, unsigned terms = kDefaultTerms) {
  detail::require_preset(system);
  const auto spec = system == Preset::PaperA ? ah::DiagonalSystemSpec::paper_a() : ah::DiagonalSystemSpec::paper_b();
  RcInterval upper = niu_upper_bound(spec, terms);
  return {certified_rho_bound(system, terms), upper.upper, {"certified-rho-supremum", "niu-mean-dimension"}};
}

/// rc(A)/eta <= rc(p M_k(A) p) <= rc(A)/lambda for 0 < lambda <= eta, where
/// lambda and eta are the inf and sup of the traces of p.
inline RcInterval corner_rc_interval(const RcInterval& rc, const Rational& lambda, const Rational& eta) {
  if (lambda <= 0 || lambda > eta) throw Error(ErrorCode::BadRange, "need 0 < lambda <= eta");
  RcInterval out{rc.lower / eta, rc.upper / lambda, rc.provenance};
  out.provenance.push_back("corner-bound");
  return out;
}

/// rc(A^alpha) from rc of the crossed product: the fixed point algebra is the
/// corner cut by (1/|G|) sum u_g, whose trace is 1/|G| everywhere.
inline RcInterval fixed_point_relation(const RcInterval& rc_crossed, const BigInt& group_order) {
  if (group_order < 1) throw Error(ErrorCode::InvalidArgument, "group order must be >= 1");
  const Rational trace_of_p(1, group_order);
  RcInterval out = corner_rc_interval(rc_crossed, trace_of_p, trace_of_p);
  out.provenance.push_back("fixed-point-corner");
  return out;
}

}  // namespace rcwb::certificates
