#pragma once

// Cuntz calculus in M_N(C). Between positive matrices a <~ b holds exactly
// when rank(a) <= rank(b), so the cut-down lemmas become rank inequalities
// that can be replayed on random samples. Ranks count eigenvalues above
// tol * max(1, ||a||); samples whose relevant eigenvalues come close to that
// threshold are redrawn instead of being judged.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "rcwb/error.hpp"

namespace rcwb::matrix {

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;

/// Operator norm of an arbitrary matrix.
inline double op_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

class HermitianSample {
 public:
  HermitianSample() = default;

  /// Checks self-adjointness to kHermitianTol relative, then diagonalizes
  /// the symmetrized matrix.
  explicit HermitianSample(const CMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimMismatch, "matrix is not square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol * scale) {
      throw Error(ErrorCode::InvalidArgument, "matrix is not Hermitian");
    }
    entries_ = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_);
    values_ = solver.eigenvalues();
    frame_ = solver.eigenvectors();
  }

  /// frame * diag(values) * frame^*; values are sorted ascending together
  /// with the columns of the frame.
  static HermitianSample from_spectrum(const RVector& values, const CMatrix& frame) {
    if (frame.rows() != frame.cols() || frame.cols() != values.size()) {
      throw Error(ErrorCode::DimMismatch, "spectrum and frame sizes differ");
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return values(x) < values(y); });
    HermitianSample out;
    out.values_.resize(values.size());
    out.frame_.resize(frame.rows(), frame.cols());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      out.values_(i) = values(order[static_cast<std::size_t>(i)]);
      out.frame_.col(i) = frame.col(order[static_cast<std::size_t>(i)]);
    }
    out.entries_ = out.frame_ * out.values_.cast<Complex>().asDiagonal() * out.frame_.adjoint();
    return out;
  }

  Eigen::Index dim() const { return entries_.rows(); }
  const CMatrix& entries() const { return entries_; }
  const RVector& values() const { return values_; }
  const CMatrix& frame() const { return frame_; }

  double norm() const {
    if (values_.size() == 0) return 0.0;
    return std::max(std::abs(values_(0)), std::abs(values_(values_.size() - 1)));
  }

  bool is_psd() const { return values_.size() == 0 || values_(0) >= -kHermitianTol * std::max(1.0, norm()); }

  /// Applies f to the spectrum, keeping the frame.
  HermitianSample apply(const std::function<double(double)>& f) const {
    RVector mapped = values_.unaryExpr(f);
    return from_spectrum(mapped, frame_);
  }

 private:
  CMatrix entries_;
  RVector values_;
  CMatrix frame_;
};

inline void require_psd(const HermitianSample& a, const char* who) {
  if (!a.is_psd()) throw Error(ErrorCode::NotPSD, std::string(who) + ": matrix is not positive semidefinite");
}

/// (a - eps)_+ by functional calculus.
inline HermitianSample cutdown(const HermitianSample& a, double eps) {
  if (eps < 0) throw Error(ErrorCode::InvalidArgument, "cutdown needs eps >= 0");
  require_psd(a, "cutdown");
  return a.apply([eps](double x) { return std::max(0.0, x - eps); });
}

inline double rank_threshold(const HermitianSample& a, double tol) { return tol * std::max(1.0, a.norm()); }

inline int numerical_rank(const HermitianSample& a, double tol) {
  const double thr = rank_threshold(a, tol);
  return static_cast<int>((a.values().array() > thr).count());
}

inline bool cuntz_leq(const HermitianSample& a, const HermitianSample& b, double tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "cuntz_leq on different dimensions");
  require_psd(a, "cuntz_leq");
  require_psd(b, "cuntz_leq");
  return numerical_rank(a, tol) <= numerical_rank(b, tol);
}

struct KrWitness {
  CMatrix w;
  double eps = 0.0;       // w b w^* is compared with (a - eps)_+
  double residual = 0.0;  // ||w b w^* - (a - eps)_+||
  double norm = 0.0;      // ||w||
  double bound = 0.0;     // ||a||^{1/2} delta^{-1/2}
};

/// Bounded witness for a <~ (b - delta)_+: w maps the eigenvectors of b with
/// eigenvalue above delta onto the range of a, scaled so that w b w^* = a on
/// the numerical support of a. Each weight is sqrt(mu / lambda) with
/// lambda > delta, hence ||w|| <= ||a||^{1/2} delta^{-1/2}.
inline KrWitness kr_witness(const HermitianSample& a, const HermitianSample& b, double delta, double tol) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "kr_witness on different dimensions");
  if (delta <= 0) throw Error(ErrorCode::InvalidArgument, "kr_witness needs delta > 0");
  require_psd(a, "kr_witness");
  require_psd(b, "kr_witness");

  const double thr_a = rank_threshold(a, tol);
  const HermitianSample b_cut = cutdown(b, delta);
  const double thr_b = rank_threshold(b_cut, tol);

  std::vector<Eigen::Index> a_support;
  std::vector<Eigen::Index> b_support;
  for (Eigen::Index i = a.dim() - 1; i >= 0; --i) {
    if (a.values()(i) > thr_a) a_support.push_back(i);
    if (b.values()(i) - delta > thr_b) b_support.push_back(i);
  }
  if (a_support.size() > b_support.size()) {
    throw Error(ErrorCode::RankDeficit, "rank(a) = " + std::to_string(a_support.size()) + " exceeds rank((b - delta)_+) = " +
                                            std::to_string(b_support.size()));
  }

  KrWitness out;
  out.w = CMatrix::Zero(a.dim(), a.dim());
  for (std::size_t k = 0; k < a_support.size(); ++k) {
    const double mu = a.values()(a_support[k]);
    const double lambda = b.values()(b_support[k]);
    out.w += std::sqrt(mu / lambda) * a.frame().col(a_support[k]) * b.frame().col(b_support[k]).adjoint();
  }
  const CMatrix image = out.w * b.entries() * out.w.adjoint();
  out.residual = op_norm(image - cutdown(a, out.eps).entries());
  out.norm = op_norm(out.w);
  out.bound = std::sqrt(a.norm() / delta);
  return out;
}

struct IntertwinerResult {
  CMatrix c;  // unaveraged solution
  CMatrix d;  // group average of c
  double unaveraged_error = 0.0;  // ||a - b c b||
  double averaged_error = 0.0;    // ||a - b d b||
  double invariance_defect = 0.0; // max_g ||u_g d u_g^* - d||
  bool monotone = false;          // averaged_error <= unaveraged_error + tol
};

namespace detail {

inline double invariance_defect(const CMatrix& m, std::span<const CMatrix> actions) {
  double worst = 0.0;
  for (const auto& u : actions) worst = std::max(worst, op_norm(u * m * u.adjoint() - m));
  return worst;
}

/// Orthogonal projection onto the numerical range of b, and the inverse of b there.
inline std::pair<CMatrix, CMatrix> support_and_pinv(const HermitianSample& b, double tol) {
  const double thr = rank_threshold(b, tol);
  CMatrix proj = CMatrix::Zero(b.dim(), b.dim());
  CMatrix pinv = CMatrix::Zero(b.dim(), b.dim());
  for (Eigen::Index i = 0; i < b.dim(); ++i) {
    if (b.values()(i) <= thr) continue;
    const auto v = b.frame().col(i);
    proj += v * v.adjoint();
    pinv += (1.0 / b.values()(i)) * v * v.adjoint();
  }
  return {proj, pinv};
}

}  // namespace detail

/// Averages a given solution c of a ~ b c b over the group. `actions` lists
/// the unitaries of every group element (identity included).
inline IntertwinerResult average_intertwiner(const HermitianSample& a, const HermitianSample& b, const CMatrix& c,
                                             std::span<const CMatrix> actions, double tol) {
  if (a.dim() != b.dim() || c.rows() != a.dim() || c.cols() != a.dim()) {
    throw Error(ErrorCode::DimMismatch, "average_intertwiner dimensions differ");
  }
  if (actions.empty()) throw Error(ErrorCode::InvalidArgument, "average_intertwiner needs at least one group element");
  require_psd(a, "average_intertwiner");
  require_psd(b, "average_intertwiner");
  for (const auto& u : actions) {
    if (u.rows() != a.dim() || u.cols() != a.dim()) throw Error(ErrorCode::DimMismatch, "unitary of wrong size");
  }
  if (detail::invariance_defect(a.entries(), actions) > tol * std::max(1.0, a.norm()) ||
      detail::invariance_defect(b.entries(), actions) > tol * std::max(1.0, b.norm())) {
    throw Error(ErrorCode::NotInvariant, "a and b must be fixed by every group element");
  }
  const auto [proj, pinv] = detail::support_and_pinv(b, tol);
  if (op_norm(a.entries() - proj * a.entries() * proj) > tol * std::max(1.0, a.norm())) {
    throw Error(ErrorCode::NotHereditary, "a is not supported on the range of b");
  }

  IntertwinerResult out;
  out.c = c;
  out.d = CMatrix::Zero(c.rows(), c.cols());
  for (const auto& u : actions) out.d += u * c * u.adjoint();
  out.d /= static_cast<double>(actions.size());
  out.unaveraged_error = op_norm(a.entries() - b.entries() * c * b.entries());
  out.averaged_error = op_norm(a.entries() - b.entries() * out.d * b.entries());
  out.invariance_defect = detail::invariance_defect(out.d, actions);
  out.monotone = out.averaged_error <= out.unaveraged_error + tol;
  return out;
}

/// Same, with c = b^+ a b^+ (exact on the support of b).
inline IntertwinerResult average_intertwiner(const HermitianSample& a, const HermitianSample& b,
                                             std::span<const CMatrix> actions, double tol) {
  require_psd(b, "average_intertwiner");
  const auto [proj, pinv] = detail::support_and_pinv(b, tol);
  return average_intertwiner(a, b, CMatrix(pinv * a.entries() * pinv), actions, tol);
}

// ---------------------------------------------------------------------------
// Random model.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of trial `index` in the stream started by `seed`.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) { return splitmix64(seed ^ splitmix64(index + 1)); }

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return m;
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal moved into Q.
inline CMatrix random_unitary(Eigen::Index dim, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(gaussian_matrix(dim, dim, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

/// Eigenvalues uniform on [0, 1]; with probability 1/2 those below a random
/// cut are set to zero so the sample has a genuine kernel. Nonzero
/// eigenvalues are kept at least `min_gap` away from zero.
inline RVector random_spectrum(Eigen::Index dim, Rng& rng, double min_gap) {
  RVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = uniform(rng, 0.0, 1.0);
  if (std::bernoulli_distribution(0.5)(rng)) {
    const double cut = uniform(rng, 0.0, 0.6);
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (v(i) < cut) v(i) = 0.0;
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (v(i) != 0.0 && v(i) < min_gap) v(i) = min_gap;
  }
  return v;
}

inline HermitianSample random_psd(Eigen::Index dim, Rng& rng, double min_gap) {
  return HermitianSample::from_spectrum(random_spectrum(dim, rng, min_gap), random_unitary(dim, rng));
}

/// Hermitian with operator norm exactly `norm`.
inline CMatrix random_hermitian(Eigen::Index dim, Rng& rng, double norm) {
  CMatrix g = gaussian_matrix(dim, dim, rng);
  CMatrix h = (g + g.adjoint()) / 2.0;
  const double current = HermitianSample(h).norm();
  return current > 0 ? CMatrix(h * (norm / current)) : CMatrix(h);
}

/// True when some eigenvalue of (x - eps)_+ would sit near the rank
/// threshold, i.e. lambda - eps in (0.1 thr, 10 thr).
inline bool near_threshold(const HermitianSample& x, double eps, double tol) {
  const double thr = tol * std::max(1.0, std::max(0.0, x.norm() - eps));
  for (Eigen::Index i = 0; i < x.dim(); ++i) {
    const double v = x.values()(i) - eps;
    if (v > 0.1 * thr && v < 10.0 * thr) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Lemma suite.

struct CheckCounter {
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  std::uint64_t failures = 0;
  std::vector<std::uint64_t> failing_seeds;

  void record(bool ok, std::uint64_t seed) {
    ++trials;
    if (ok) {
      ++passes;
    } else {
      ++failures;
      failing_seeds.push_back(seed);
    }
  }

  void merge(const CheckCounter& other) {
    trials += other.trials;
    passes += other.passes;
    failures += other.failures;
    failing_seeds.insert(failing_seeds.end(), other.failing_seeds.begin(), other.failing_seeds.end());
    std::sort(failing_seeds.begin(), failing_seeds.end());
  }
};

/// Empirical delta for "(a - eps)_+ <~ (b - delta)_+" given a <~ b: the
/// largest eigenvalue-derived delta that still works, averaged over trials.
/// Reported only; such existence statements cannot be refuted by sampling.
struct DeltaProbe {
  double eps = 0.0;
  std::uint64_t samples = 0;
  double mean_delta = 0.0;
  double min_delta = 0.0;
};

struct SuiteReport {
  std::map<std::string, CheckCounter> checks;
  std::vector<DeltaProbe> probes;

  std::uint64_t total_failures() const {
    std::uint64_t total = 0;
    for (const auto& [name, c] : checks) total += c.failures;
    return total;
  }

  void merge(const SuiteReport& other) {
    for (const auto& [name, c] : other.checks) checks[name].merge(c);
  }
};

namespace check {
inline constexpr const char* kComposition = "i-cutdown-composition";
inline constexpr const char* kPerturbation = "ii-perturbation";
inline constexpr const char* kShiftedPerturbation = "iii-shifted-perturbation";
inline constexpr const char* kFlip = "iv-flip-equivalence";
inline constexpr const char* kTwoSided = "v-two-sided-cutdown";
inline constexpr const char* kScalar = "vi-scalar-inequalities";
inline constexpr const char* kKrWitness = "kr-witness-norm";
inline constexpr const char* kIntertwiner = "average-intertwiner";
}  // namespace check

struct SuiteConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1000;
  Eigen::Index dim_max = 16;
  double tol = 1e-9;
  unsigned threads = 1;
};

/// Threads from RCWB_THREADS, defaulting to 1.
inline unsigned threads_from_env() {
  const char* value = std::getenv("RCWB_THREADS");
  if (value == nullptr) return 1;
  const long parsed = std::strtol(value, nullptr, 10);
  return parsed >= 1 ? static_cast<unsigned>(parsed) : 1;
}

namespace detail {

constexpr int kMaxRedraws = 64;

inline Eigen::Index draw_dim(Rng& rng, Eigen::Index dim_max) {
  return std::uniform_int_distribution<Eigen::Index>(2, dim_max)(rng);
}

inline bool check_composition(Rng& rng, Eigen::Index dim, double tol) {
  const HermitianSample a = random_psd(dim, rng, 10 * tol);
  const double e1 = uniform(rng, 0.0, 0.5);
  const double e2 = uniform(rng, 0.0, 0.5);
  const CMatrix lhs = cutdown(cutdown(a, e1), e2).entries();
  const CMatrix rhs = cutdown(a, e1 + e2).entries();
  return op_norm(lhs - rhs) <= 1e-10;
}

/// b = (a + h)_+ for a random Hermitian h, and eps with ||a - b|| = theta eps.
struct PerturbedPair {
  HermitianSample a;
  HermitianSample b;
  double eps = 0.0;
};

inline PerturbedPair perturbed_pair(Rng& rng, Eigen::Index dim, double tol) {
  PerturbedPair out;
  out.a = random_psd(dim, rng, 10 * tol);
  const CMatrix h = random_hermitian(dim, rng, uniform(rng, 0.0, 0.4));
  out.b = HermitianSample(CMatrix(out.a.entries() + h)).apply([](double x) { return std::max(0.0, x); });
  const double dist = op_norm(out.a.entries() - out.b.entries());
  const double theta = uniform(rng, 0.1, 0.9);
  out.eps = dist > 0 ? dist / theta : uniform(rng, 0.05, 0.5);
  return out;
}

inline bool check_perturbation(Rng& rng, Eigen::Index dim, double tol) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const PerturbedPair p = perturbed_pair(rng, dim, tol);
    if (near_threshold(p.a, p.eps, tol) || near_threshold(p.b, 0.0, tol)) continue;
    return cuntz_leq(cutdown(p.a, p.eps), p.b, tol);
  }
  return true;
}

inline bool check_shifted_perturbation(Rng& rng, Eigen::Index dim, double tol) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const PerturbedPair p = perturbed_pair(rng, dim, tol);
    const double lambda = uniform(rng, 0.01, 0.5);
    if (near_threshold(p.a, lambda + p.eps, tol) || near_threshold(p.b, lambda, tol)) continue;
    return cuntz_leq(cutdown(p.a, lambda + p.eps), cutdown(p.b, lambda), tol);
  }
  return true;
}

inline bool check_flip(Rng& rng, Eigen::Index dim, double tol) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    // c = U diag(sigma) V^* with a genuine kernel half of the time.
    const RVector sigma = random_spectrum(dim, rng, 10 * tol);
    const CMatrix c = random_unitary(dim, rng) * sigma.cast<Complex>().asDiagonal() * random_unitary(dim, rng).adjoint();
    const HermitianSample cstar_c(CMatrix(c.adjoint() * c));
    const HermitianSample c_cstar(CMatrix(c * c.adjoint()));
    const double lambda = uniform(rng, 0.0, 0.5);
    if (near_threshold(cstar_c, lambda, tol) || near_threshold(c_cstar, lambda, tol)) continue;
    const HermitianSample left = cutdown(cstar_c, lambda);
    const HermitianSample right = cutdown(c_cstar, lambda);
    return cuntz_leq(left, right, tol) && cuntz_leq(right, left, tol);
  }
  return true;
}

inline bool check_two_sided(Rng& rng, Eigen::Index dim, double tol) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    const HermitianSample a = random_psd(dim, rng, 10 * tol);
    const HermitianSample g = random_psd(dim, rng, 10 * tol);
    const double e1 = uniform(rng, 0.0, 0.5);
    const double e2 = uniform(rng, 0.0, 0.5);
    const CMatrix one_minus_g = CMatrix::Identity(dim, dim) - g.entries();
    CMatrix squeezed = one_minus_g * a.entries() * one_minus_g;
    squeezed = (squeezed + squeezed.adjoint()) / 2.0;
    const HermitianSample middle(squeezed);
    if (near_threshold(a, e1 + e2, tol) || near_threshold(middle, e1, tol) || near_threshold(g, e2 / 2, tol)) continue;
    const int lhs = numerical_rank(cutdown(a, e1 + e2), tol);
    const int rhs = numerical_rank(cutdown(middle, e1), tol) + numerical_rank(cutdown(g, e2 / 2), tol);
    return lhs <= rhs;
  }
  return true;
}

inline bool check_kr_witness(Rng& rng, Eigen::Index dim, double tol) {
  const HermitianSample b = random_psd(dim, rng, 10 * tol);
  const double delta = uniform(rng, 0.05, 0.5);
  const HermitianSample b_cut = cutdown(b, delta);
  const int room = numerical_rank(b_cut, tol);
  // a of rank at most `room`.
  RVector spec = random_spectrum(dim, rng, 10 * tol);
  std::sort(spec.data(), spec.data() + spec.size());
  for (Eigen::Index i = 0; i < dim - room; ++i) spec(i) = 0.0;
  const HermitianSample a = HermitianSample::from_spectrum(spec, random_unitary(dim, rng));
  const KrWitness w = kr_witness(a, b, delta, tol);
  return w.norm <= w.bound + 1e-8 && w.residual <= tol * std::max(1.0, a.norm());
}

/// Order-two unitary u = V diag(+-1) V^* together with invariant a, b and a
/// perturbed, non-invariant solution c of a = b c b.
inline bool check_intertwiner(Rng& rng, Eigen::Index dim, double tol) {
  const CMatrix v = random_unitary(dim, rng);
  RVector signs(dim);
  for (Eigen::Index i = 0; i < dim; ++i) signs(i) = std::bernoulli_distribution(0.5)(rng) ? 1.0 : -1.0;
  const CMatrix u = v * signs.cast<Complex>().asDiagonal() * v.adjoint();

  // Invariant elements are block diagonal in the eigenbasis of u.
  auto invariant_psd = [&](double min_gap) {
    CMatrix block = CMatrix::Zero(dim, dim);
    const RVector spec = random_spectrum(dim, rng, min_gap);
    const CMatrix w = random_unitary(dim, rng);
    const CMatrix x = w * spec.cast<Complex>().asDiagonal() * w.adjoint();
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (signs(i) == signs(j)) block(i, j) = x(i, j);
      }
    }
    CMatrix m = v * block * v.adjoint();
    return CMatrix((m + m.adjoint()) / 2.0);
  };

  const HermitianSample b(invariant_psd(0.05));
  const auto [proj, pinv] = support_and_pinv(b, tol);
  const HermitianSample a(CMatrix(proj * invariant_psd(10 * tol) * proj));
  const CMatrix exact = pinv * a.entries() * pinv;
  const CMatrix c = exact + gaussian_matrix(dim, dim, rng) * uniform(rng, 0.0, 0.1);
  const std::vector<CMatrix> group{CMatrix::Identity(dim, dim), u};
  const IntertwinerResult res = average_intertwiner(a, b, c, group, tol);
  // Round-off in u d u* - d scales with |d|, which is large when b is nearly singular.
  return res.averaged_error <= res.unaveraged_error + 1e-9 && res.invariance_defect <= 1e-9 * std::max(1.0, op_norm(res.d));
}

/// t, s on the grid {0, 0.01, ..., 0.99}: the sign of 2t - t^2 - s is decided
/// exactly in integers, the square-root side in floating point.
inline CheckCounter scalar_grid() {
  CheckCounter out;
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double s = i / 100.0;
      const double t = j / 100.0;
      const long exact = 200L * j - static_cast<long>(j) * j - 100L * i;  // 10^4 (2t - t^2 - s)
      const double root_side = t - 1.0 + std::sqrt(1.0 - s);
      bool equivalence = false;
      if (exact > 0) {
        equivalence = root_side > 0;
      } else if (exact < 0) {
        equivalence = root_side < 0;
      } else {
        equivalence = std::abs(root_side) <= 1e-12;
      }
      const bool half_bound = 1.0 - std::sqrt(1.0 - s) >= s / 2.0;
      out.record(equivalence && half_bound, static_cast<std::uint64_t>(i * 100 + j));
    }
  }
  return out;
}

inline std::vector<DeltaProbe> delta_probes(std::uint64_t seed, Eigen::Index dim_max, double tol) {
  std::vector<DeltaProbe> out;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    DeltaProbe probe;
    probe.eps = eps;
    probe.min_delta = 1.0;
    Rng rng(trial_seed(seed, static_cast<std::uint64_t>(eps * 1e6)));
    for (int k = 0; k < 64; ++k) {
      const Eigen::Index dim = draw_dim(rng, dim_max);
      const HermitianSample b = random_psd(dim, rng, 10 * tol);
      const int target = numerical_rank(cutdown(b, 0.0), tol);
      RVector spec = random_spectrum(dim, rng, 10 * tol);
      std::sort(spec.data(), spec.data() + spec.size());
      for (Eigen::Index i = 0; i < dim - target; ++i) spec(i) = 0.0;
      const HermitianSample a = HermitianSample::from_spectrum(spec, random_unitary(dim, rng));
      const int need = numerical_rank(cutdown(a, eps), tol);
      // Largest delta with rank((b - delta)_+) >= need: the need-th largest eigenvalue of b.
      const double delta = need == 0 ? b.norm() : b.values()(dim - need);
      probe.mean_delta += delta;
      probe.min_delta = std::min(probe.min_delta, delta);
      ++probe.samples;
    }
    probe.mean_delta /= static_cast<double>(probe.samples);
    out.push_back(probe);
  }
  return out;
}

inline SuiteReport run_trials(const SuiteConfig& config,
                              const std::vector<std::pair<std::string, bool (*)(Rng&, Eigen::Index, double)>>& checks) {
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (config.dim_max < 2) throw Error(ErrorCode::InvalidArgument, "dim_max must be >= 2");
  if (!(config.tol > 0)) throw Error(ErrorCode::InvalidArgument, "tol must be > 0");

  std::atomic<std::uint64_t> next{0};
  std::mutex merge_mutex;
  SuiteReport total;
  for (const auto& [name, fn] : checks) total.checks[name];

  auto worker = [&] {
    SuiteReport local;
    for (std::uint64_t i = next++; i < config.trials; i = next++) {
      const std::uint64_t seed = trial_seed(config.seed, i);
      for (std::size_t k = 0; k < checks.size(); ++k) {
        Rng rng(splitmix64(seed + k));
        const Eigen::Index dim = draw_dim(rng, config.dim_max);
        local.checks[checks[k].first].record(checks[k].second(rng, dim, config.tol), seed);
      }
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    total.merge(local);
  };

  const unsigned threads = std::max(1u, config.threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return total;
}

}  // namespace detail

/// Randomized replay of checks (i)-(v), the witness and averaging checks,
/// and the scalar grid (vi). Every trial draws from its own seed, so the
/// report does not depend on the thread count.
inline SuiteReport lemma_suite(const SuiteConfig& config) {
  SuiteReport report = detail::run_trials(config, {
                                                      {check::kComposition, &detail::check_composition},
                                                      {check::kPerturbation, &detail::check_perturbation},
                                                      {check::kShiftedPerturbation, &detail::check_shifted_perturbation},
                                                      {check::kFlip, &detail::check_flip},
                                                      {check::kTwoSided, &detail::check_two_sided},
                                                      {check::kKrWitness, &detail::check_kr_witness},
                                                      {check::kIntertwiner, &detail::check_intertwiner},
                                                  });
  report.checks[check::kScalar] = detail::scalar_grid();
  report.probes = detail::delta_probes(config.seed, config.dim_max, config.tol);
  return report;
}

inline CheckCounter kr_witness_trials(const SuiteConfig& config) {
  return detail::run_trials(config, {{check::kKrWitness, &detail::check_kr_witness}}).checks.at(check::kKrWitness);
}

inline CheckCounter intertwiner_trials(const SuiteConfig& config) {
  return detail::run_trials(config, {{check::kIntertwiner, &detail::check_intertwiner}}).checks.at(check::kIntertwiner);
}

}  // namespace rcwb::matrix
