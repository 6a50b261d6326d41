#pragma once

// Stage descriptors and K-class level connecting maps for diagonal AH
// systems. Two presets are built in:
//
//   paper-A  A_n = [C(X_n) + C(X_n)] (x) M_r(n),  X_n = (S^2)^s(n).
//            Summand 1 of the image of (f, g) is diag(f o P_1, ..., f o P_d, g(x_n)),
//            summand 2 is diag(g o P_1, ..., g o P_d, f(x_n)), with d = d(n+1).
//            The flip exchanges the two summands.
//   paper-B  B_n = C(X_n) (x) M_2r(n), image diag(f o P_1, ..., f o P_d, s f(x_n) s*).
//            Conjugation by s does not change a K-class, so its point
//            evaluation is modelled exactly like the paper-A one.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rcwb/bundles.hpp"
#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"
#include "rcwb/sequences.hpp"

namespace rcwb::ah {

using bundles::KClass;

enum class Preset { PaperA, PaperB, Custom };

inline std::string to_string(Preset p) {
  switch (p) {
    case Preset::PaperA: return "paper-A";
    case Preset::PaperB: return "paper-B";
    case Preset::Custom: return "custom";
  }
  return "custom";
}

struct StageDescriptor {
  unsigned n = 0;
  BigInt matrix_size;
  std::vector<BigInt> coords;  // one entry per summand

  std::size_t summand_count() const { return coords.size(); }
  bool operator==(const StageDescriptor&) const = default;
};

/// Multiplicities of one (target, source) block of the map stage n -> n+1.
struct MapEntry {
  unsigned stage = 0;  // source stage
  std::size_t target = 0;
  std::size_t source = 0;
  BigInt pullbacks = 0;
  BigInt point_evals = 0;
  bool operator==(const MapEntry&) const = default;
};

class DiagonalSystemSpec {
 public:
  static DiagonalSystemSpec paper_a() { return DiagonalSystemSpec(Preset::PaperA); }
  static DiagonalSystemSpec paper_b() { return DiagonalSystemSpec(Preset::PaperB); }

  /// Finite custom system; unitality is checked for every listed transition.
  static DiagonalSystemSpec custom(std::vector<StageDescriptor> stages, std::vector<MapEntry> maps) {
    DiagonalSystemSpec spec(Preset::Custom);
    if (stages.empty()) throw Error(ErrorCode::InvalidArgument, "custom system needs at least one stage");
    for (std::size_t i = 0; i < stages.size(); ++i) {
      if (stages[i].n != i) throw Error(ErrorCode::InvalidArgument, "custom stages must be numbered 0, 1, 2, ...");
      if (stages[i].summand_count() == 0 || stages[i].matrix_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "stage " + std::to_string(i) + " needs summands and matrix size >= 1");
      }
    }
    for (const auto& m : maps) {
      if (m.stage + 1 >= stages.size()) throw Error(ErrorCode::InvalidArgument, "map refers to an undefined stage");
      if (m.target >= stages[m.stage + 1].summand_count() || m.source >= stages[m.stage].summand_count()) {
        throw Error(ErrorCode::InvalidArgument, "map refers to an undefined summand");
      }
      if (m.pullbacks < 0 || m.point_evals < 0) throw Error(ErrorCode::InvalidArgument, "negative multiplicity");
    }
    spec.stages_ = std::move(stages);
    spec.maps_ = std::move(maps);
    for (unsigned n = 0; n + 1 < spec.stages_.size(); ++n) {
      spec.check_unital(n);
      const auto& from = spec.stages_[n];
      const auto& to = spec.stages_[n + 1];
      std::vector<BigInt> used(to.summand_count(), 0);
      for (const auto& m : spec.maps(n)) used[m.target] += m.pullbacks * from.coords[m.source];
      for (std::size_t i = 0; i < used.size(); ++i) {
        if (used[i] > to.coords[i]) {
          throw Error(ErrorCode::BadBlock, "pullbacks into stage " + std::to_string(n + 1) + " summand " + std::to_string(i) +
                                               " need " + used[i].str() + " coordinates");
        }
      }
    }
    return spec;
  }

  Preset preset() const { return preset_; }

  /// Highest defined stage; nullopt for the infinite presets.
  std::optional<unsigned> last_stage() const {
    if (preset_ != Preset::Custom) return std::nullopt;
    return static_cast<unsigned>(stages_.size() - 1);
  }

  bool defines_stage(unsigned n) const { return preset_ != Preset::Custom || n < stages_.size(); }

  StageDescriptor stage(unsigned n) const {
    switch (preset_) {
      case Preset::PaperA: {
        const auto row = sequences::seq_row(n);
        return {n, row.r, {row.s, row.s}};
      }
      case Preset::PaperB: {
        const auto row = sequences::seq_row(n);
        return {n, 2 * row.r, {row.s}};
      }
      case Preset::Custom:
        if (n >= stages_.size()) throw Error(ErrorCode::StageMismatch, "stage " + std::to_string(n) + " not defined");
        return stages_[n];
    }
    throw std::logic_error("unreachable");
  }

  /// Block multiplicities of the map stage n -> n+1.
  std::vector<MapEntry> maps(unsigned n) const {
    if (!defines_stage(n + 1)) throw Error(ErrorCode::StageMismatch, "stage " + std::to_string(n + 1) + " not defined");
    const BigInt blocks = sequences::d(n + 1);
    switch (preset_) {
      case Preset::PaperA:
        return {{n, 0, 0, blocks, 0}, {n, 0, 1, 0, 1}, {n, 1, 1, blocks, 0}, {n, 1, 0, 0, 1}};
      case Preset::PaperB:
        return {{n, 0, 0, blocks, 1}};
      case Preset::Custom: {
        std::vector<MapEntry> out;
        for (const auto& m : maps_) {
          if (m.stage == n) out.push_back(m);
        }
        return out;
      }
    }
    throw std::logic_error("unreachable");
  }

  /// sum over sources (pullbacks + point_evals) * size(n) == size(n+1)
  /// for every target summand of stage n+1.
  void check_unital(unsigned n) const {
    const StageDescriptor from = stage(n);
    const StageDescriptor to = stage(n + 1);
    std::vector<BigInt> filled(to.summand_count(), 0);
    for (const auto& m : maps(n)) filled.at(m.target) += (m.pullbacks + m.point_evals) * from.matrix_size;
    for (std::size_t i = 0; i < filled.size(); ++i) {
      if (filled[i] != to.matrix_size) {
        throw Error(ErrorCode::NotUnital, "stage " + std::to_string(n + 1) + " summand " + std::to_string(i) +
                                              " receives size " + filled[i].str() + ", expected " + to.matrix_size.str());
      }
    }
  }

  const std::vector<StageDescriptor>& custom_stages() const { return stages_; }
  const std::vector<MapEntry>& custom_maps() const { return maps_; }

 private:
  explicit DiagonalSystemSpec(Preset p) : preset_(p) {}

  Preset preset_;
  std::vector<StageDescriptor> stages_;
  std::vector<MapEntry> maps_;
};

/// One K-class per direct summand of a stage, living in M_amplification of it.
struct StageClassPair {
  unsigned stage = 0;
  BigInt matrix_size = 1;
  BigInt amplification = 1;
  std::vector<KClass> classes;

  bool operator==(const StageClassPair&) const = default;
};

inline StageClassPair apply_connecting(const StageClassPair& x, const DiagonalSystemSpec& spec) {
  const unsigned n = x.stage;
  if (!spec.defines_stage(n) || !spec.defines_stage(n + 1)) {
    throw Error(ErrorCode::StageMismatch, "system does not define stages " + std::to_string(n) + " -> " + std::to_string(n + 1));
  }
  const StageDescriptor from = spec.stage(n);
  const StageDescriptor to = spec.stage(n + 1);
  if (x.classes.size() != from.summand_count()) {
    throw Error(ErrorCode::StageMismatch, "class has " + std::to_string(x.classes.size()) + " summands, stage has " +
                                              std::to_string(from.summand_count()));
  }
  for (std::size_t j = 0; j < x.classes.size(); ++j) {
    if (x.classes[j].coords != from.coords[j]) throw Error(ErrorCode::StageMismatch, "class base does not match stage");
  }

  StageClassPair out;
  out.stage = n + 1;
  out.matrix_size = to.matrix_size;
  out.amplification = x.amplification;
  out.classes.reserve(to.summand_count());
  const auto entries = spec.maps(n);
  for (std::size_t i = 0; i < to.summand_count(); ++i) {
    KClass image = KClass::trivial_class(to.coords[i], 0);
    BigInt offset = 0;
    for (const auto& m : entries) {
      if (m.target != i || m.pullbacks == 0) continue;
      const KClass blocks = bundles::pullback_all_blocks(x.classes[m.source], m.pullbacks);
      image.trivial += blocks.trivial;
      for (const auto& iv : blocks.bott.intervals()) image.bott.append(iv.lo + offset, iv.hi + offset);
      offset += blocks.coords;
    }
    if (offset > to.coords[i]) throw Error(ErrorCode::BadBlock, "pullback blocks exceed the target base dimension");
    for (const auto& m : entries) {
      if (m.target != i || m.point_evals == 0) continue;
      image.trivial += m.point_evals * bundles::point_evaluation(x.classes[m.source], to.coords[i]).rank();
    }
    out.classes.push_back(std::move(image));
  }
  return out;
}

/// Exchange the two summands (the Z/2 action on paper-A stages).
inline StageClassPair apply_flip(const StageClassPair& x) {
  if (x.classes.size() != 2) throw Error(ErrorCode::NotTwoSummand, "flip needs exactly two summands");
  StageClassPair out = x;
  std::swap(out.classes[0], out.classes[1]);
  return out;
}

/// Trivial rank `rank` in every summand of stage n.
inline StageClassPair trivial_classes(const DiagonalSystemSpec& spec, unsigned n, const BigInt& rank) {
  const StageDescriptor st = spec.stage(n);
  StageClassPair out;
  out.stage = n;
  out.matrix_size = st.matrix_size;
  out.amplification = rank <= st.matrix_size ? BigInt(1) : BigInt((rank + st.matrix_size - 1) / st.matrix_size);
  for (const auto& c : st.coords) out.classes.push_back(KClass::trivial_class(c, rank));
  return out;
}

inline StageClassPair unit_class(const DiagonalSystemSpec& spec, unsigned n) {
  return trivial_classes(spec, n, spec.stage(n).matrix_size);
}

inline StageClassPair zero_class(const DiagonalSystemSpec& spec, unsigned n) { return trivial_classes(spec, n, 0); }

// Closed forms. With s = s(n), r = r(n), t = t(n):
//   p_n  = (c0 + c1, g)  c0 = Bott on every coordinate, c1 trivial r-s-t, g trivial t
//   p'_n = (f + h, f + h)  f = Bott on every coordinate, h trivial r-s
//   q_n  = y + z           y = Bott on every coordinate, z trivial r-s, inside M_2r(n)

inline StageClassPair canonical_p(unsigned n) {
  const auto row = sequences::seq_row(n);
  return {n, row.r, 2, {KClass::full_bott(row.s, row.r - row.s - row.t), KClass::trivial_class(row.s, row.t)}};
}

inline StageClassPair canonical_p_prime(unsigned n) {
  const auto row = sequences::seq_row(n);
  const KClass half = KClass::full_bott(row.s, row.r - row.s);
  return {n, row.r, 2, {half, half}};
}

inline StageClassPair canonical_q(unsigned n) {
  const auto row = sequences::seq_row(n);
  return {n, 2 * row.r, 1, {KClass::full_bott(row.s, row.r - row.s)}};
}

struct TrackCheck {
  std::string system;
  std::string track;
  unsigned stage = 0;
  bool passed = false;
};

struct TrackReport {
  std::vector<TrackCheck> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }
};

/// Iterates the connecting maps from (p, 0), (p, p) and p and compares with
/// the closed forms at every stage 0..n_max. On paper-A the flip image of p_n
/// is checked against (g, c0 + c1) as well.
inline TrackReport iterate_and_check(unsigned n_max) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "iterate_and_check needs n_max >= 1");
  const auto a = DiagonalSystemSpec::paper_a();
  const auto b = DiagonalSystemSpec::paper_b();
  const KClass bott = KClass::full_bott(1, 0);
  const KClass zero = KClass::trivial_class(1, 0);

  StageClassPair p{0, 1, 2, {bott, zero}};
  StageClassPair p_prime{0, 1, 2, {bott, bott}};
  StageClassPair q{0, 2, 1, {bott}};

  TrackReport report;
  for (unsigned n = 0;; ++n) {
    report.checks.push_back({"paper-A", "p", n, p == canonical_p(n)});
    report.checks.push_back({"paper-A", "p-prime", n, p_prime == canonical_p_prime(n)});
    const auto row = sequences::seq_row(n);
    const StageClassPair flipped_closed_form{
        n, row.r, 2, {KClass::trivial_class(row.s, row.t), KClass::full_bott(row.s, row.r - row.s - row.t)}};
    report.checks.push_back({"paper-A", "flip-p", n, apply_flip(p) == flipped_closed_form});
    report.checks.push_back({"paper-B", "q", n, q == canonical_q(n)});
    if (n == n_max) break;
    p = apply_connecting(p, a);
    p_prime = apply_connecting(p_prime, a);
    q = apply_connecting(q, b);
  }
  return report;
}

}  // namespace rcwb::ah
