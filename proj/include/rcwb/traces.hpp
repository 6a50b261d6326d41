#pragma once

// Extreme tracial states tr_size (x) ev_x on a homogeneous stage and the
// dimension function they induce on K-classes. Every class handled here has
// constant fiber rank on each summand, so the evaluation point drops out and
// d_tau(c) = rank of the summand class / normalization.

#include <cstddef>
#include <vector>

#include "rcwb/ah_system.hpp"
#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"

namespace rcwb::traces {

struct TraceFunctional {
  unsigned stage = 0;
  std::size_t summand = 0;
  BigInt normalization = 1;  // matrix size of the stage
};

/// One extreme trace per summand of stage n (the point is immaterial).
inline std::vector<TraceFunctional> extreme_traces(const ah::DiagonalSystemSpec& spec, unsigned n) {
  const auto st = spec.stage(n);
  std::vector<TraceFunctional> out;
  for (std::size_t i = 0; i < st.summand_count(); ++i) out.push_back({n, i, st.matrix_size});
  return out;
}

inline Rational d_tau(const ah::StageClassPair& c, const TraceFunctional& tau) {
  if (tau.stage != c.stage) throw Error(ErrorCode::StageMismatch, "trace and class live on different stages");
  if (tau.summand >= c.classes.size()) throw Error(ErrorCode::StageMismatch, "trace summand out of range");
  if (tau.normalization < 1) throw Error(ErrorCode::InvalidArgument, "trace normalization must be positive");
  return Rational(c.classes[tau.summand].rank(), tau.normalization);
}

inline std::vector<Rational> d_tau_all(const ah::StageClassPair& c) {
  std::vector<Rational> out;
  for (std::size_t i = 0; i < c.classes.size(); ++i) out.push_back(d_tau(c, {c.stage, i, c.matrix_size}));
  return out;
}

inline Rational d_tau_max(const ah::StageClassPair& c) {
  const auto values = d_tau_all(c);
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "class without summands");
  Rational best = values.front();
  for (const auto& v : values) best = v > best ? v : best;
  return best;
}

inline Rational d_tau_min(const ah::StageClassPair& c) {
  const auto values = d_tau_all(c);
  if (values.empty()) throw Error(ErrorCode::InvalidArgument, "class without summands");
  Rational best = values.front();
  for (const auto& v : values) best = v < best ? v : best;
  return best;
}

}  // namespace rcwb::traces
