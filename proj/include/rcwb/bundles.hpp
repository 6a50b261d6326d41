#pragma once

// K-classes of projections over (S^2)^k built from trivial summands and
// pulled-back tautological line bundles, with a three-valued comparison
// oracle for Murray-von Neumann subequivalence.
//
// Two certified rules only:
//   Yes  L embeds in a rank-2 trivial bundle (the Bott projection sits in
//        M_2), so leftover line bundles can each be placed in two trivial
//        dimensions; shared Bott coordinates are matched one to one.
//   No   rank excess, or the Villadsen obstruction: L^{x k} does not embed
//        in a trivial bundle of rank < 2k.
// Everything else is Unknown.

#include <optional>
#include <string>
#include <string_view>

#include "rcwb/coord_set.hpp"
#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"

namespace rcwb::bundles {

struct KClass {
  BigInt coords = 0;  // number of S^2 factors in the base
  BigInt trivial = 0;
  CoordSet bott;      // each index carries one pullback of L

  static KClass trivial_class(BigInt coords, BigInt rank) {
    KClass c;
    c.coords = std::move(coords);
    c.trivial = std::move(rank);
    return c;
  }

  /// One Bott factor on every coordinate plus a trivial part.
  static KClass full_bott(BigInt coords, BigInt trivial_rank) {
    KClass c;
    c.bott = CoordSet::range(1, coords);
    c.coords = std::move(coords);
    c.trivial = std::move(trivial_rank);
    return c;
  }

  BigInt rank() const { return trivial + bott.size(); }

  void validate() const {
    if (coords < 0 || trivial < 0) throw Error(ErrorCode::InvalidArgument, "negative coords or trivial rank");
    if (!bott.empty() && (bott.min() < 1 || bott.max() > coords)) {
      throw Error(ErrorCode::InvalidArgument, "Bott coordinate outside 1..coords");
    }
  }

  bool operator==(const KClass&) const = default;
};

inline KClass direct_sum(const KClass& a, const KClass& b) {
  if (a.coords != b.coords) throw Error(ErrorCode::DimensionMismatch, "direct_sum over different base spaces");
  if (!a.bott.disjoint(b.bott)) throw Error(ErrorCode::OverlappingBott, "summands share a Bott coordinate");
  KClass out;
  out.coords = a.coords;
  out.trivial = a.trivial + b.trivial;
  out.bott = a.bott.united(b.bott);
  return out;
}

/// Least m with c embedding in the trivial class of rank m.
inline BigInt min_dominating_trivial_rank(const KClass& c) { return c.trivial + 2 * c.bott.size(); }

enum class Verdict { Yes, No, Unknown };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    case Verdict::Unknown: return "Unknown";
  }
  return "Unknown";
}

namespace reason {
inline constexpr std::string_view kEmbedding = "componentwise-embedding";
inline constexpr std::string_view kRankExcess = "rank-excess";
inline constexpr std::string_view kVilladsen = "villadsen-obstruction";
inline constexpr std::string_view kOutsideFragment = "outside-certified-fragment";
}  // namespace reason

/// Which subequivalence the oracle decides. For projections in a stably
/// finite algebra Cuntz and Murray-von Neumann subequivalence agree.
inline constexpr std::string_view kComparisonRelation = "murray-von-neumann";

struct Obstruction {
  BigInt required_rank;   // least rank f would need
  BigInt available_rank;  // rank f actually has
};

struct CompareVerdict {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::optional<Obstruction> obstruction;
};

/// e <= f by matching shared Bott coordinates, putting each unmatched line
/// bundle of e into two trivial dimensions of f, and trivial into trivial.
inline bool yes_rule(const KClass& e, const KClass& f) {
  return f.trivial - e.trivial >= 2 * e.bott.difference_size(f.bott);
}

inline bool rank_excess_rule(const KClass& e, const KClass& f) { return e.rank() > f.rank(); }

inline bool villadsen_rule(const KClass& e, const KClass& f) {
  return f.bott.empty() && f.rank() < min_dominating_trivial_rank(e);
}

inline bool no_rule(const KClass& e, const KClass& f) { return rank_excess_rule(e, f) || villadsen_rule(e, f); }

inline CompareVerdict compare(const KClass& e, const KClass& f) {
  if (e.coords != f.coords) throw Error(ErrorCode::DimensionMismatch, "compare over different base spaces");
  const bool yes = yes_rule(e, f);
  const bool no = no_rule(e, f);
  if (yes && no) throw std::logic_error("comparison oracle: Yes and No rules fired together");
  CompareVerdict out;
  if (yes) {
    out.verdict = Verdict::Yes;
    out.reason = reason::kEmbedding;
  } else if (rank_excess_rule(e, f)) {
    out.verdict = Verdict::No;
    out.reason = reason::kRankExcess;
    out.obstruction = Obstruction{e.rank(), f.rank()};
  } else if (villadsen_rule(e, f)) {
    out.verdict = Verdict::No;
    out.reason = reason::kVilladsen;
    out.obstruction = Obstruction{min_dominating_trivial_rank(e), f.rank()};
  } else {
    out.verdict = Verdict::Unknown;
    out.reason = reason::kOutsideFragment;
  }
  return out;
}

/// Pullback along the block-th coordinate projection (S^2)^(s*d) -> (S^2)^s.
/// Block nu occupies coordinates (nu-1)*s+1 .. nu*s of the target.
inline KClass pullback_block(const KClass& c, const BigInt& block, const BigInt& block_size, const BigInt& total_blocks) {
  if (block < 1 || block > total_blocks) throw Error(ErrorCode::BadBlock, "block index outside 1..total_blocks");
  if (c.coords != block_size) throw Error(ErrorCode::BadBlock, "class coords differ from block size");
  KClass out;
  out.coords = block_size * total_blocks;
  out.trivial = c.trivial;
  out.bott = c.bott.shifted((block - 1) * block_size);
  return out;
}

/// Direct sum of pullback_block(c, nu, c.coords, blocks) over nu = 1..blocks.
/// Empty and full Bott sets are handled in closed form; anything else is
/// expanded block by block and refused past `max_intervals`.
inline KClass pullback_all_blocks(const KClass& c, const BigInt& blocks, std::size_t max_intervals = 1u << 20) {
  if (blocks < 0) throw Error(ErrorCode::BadBlock, "negative block count");
  KClass out;
  out.coords = c.coords * blocks;
  out.trivial = c.trivial * blocks;
  if (c.bott.empty() || blocks == 0) return out;
  if (c.bott.intervals().size() == 1 && c.bott.min() == 1 && c.bott.max() == c.coords) {
    out.bott = CoordSet::range(1, out.coords);
    return out;
  }
  if (BigInt(c.bott.intervals().size()) * blocks > max_intervals) {
    throw Error(ErrorCode::TooLarge, "pullback would create too many coordinate intervals");
  }
  for (BigInt nu = 0; nu < blocks; ++nu) {
    const BigInt offset = nu * c.coords;
    for (const auto& iv : c.bott.intervals()) out.bott.append(iv.lo + offset, iv.hi + offset);
  }
  return out;
}

/// Evaluation at a point: a constant class of the same rank. The result lives
/// over `target_coords` factors (defaults to the source base).
inline KClass point_evaluation(const KClass& c, std::optional<BigInt> target_coords = std::nullopt) {
  return KClass::trivial_class(target_coords ? *target_coords : c.coords, c.rank());
}

}  // namespace rcwb::bundles
