#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"

namespace rcwb::bundles {

/// Finite set of positive coordinate indices stored as sorted, disjoint,
/// non-adjacent closed intervals. The canonical classes of the construction
/// carry one Bott factor per coordinate of (S^2)^s(n), and s(n) outgrows any
/// machine word, so sets are never expanded element by element.
class CoordSet {
 public:
  struct Interval {
    BigInt lo;
    BigInt hi;
    bool operator==(const Interval&) const = default;
  };

  CoordSet() = default;

  CoordSet(std::initializer_list<long long> indices) {
    for (long long i : indices) insert(BigInt(i));
  }

  static CoordSet range(const BigInt& lo, const BigInt& hi) {
    CoordSet out;
    if (lo <= hi) out.insert(lo, hi);
    return out;
  }

  bool empty() const { return intervals_.empty(); }
  const std::vector<Interval>& intervals() const { return intervals_; }

  BigInt size() const {
    BigInt total = 0;
    for (const auto& iv : intervals_) total += iv.hi - iv.lo + 1;
    return total;
  }

  BigInt min() const { return intervals_.front().lo; }
  BigInt max() const { return intervals_.back().hi; }

  bool contains(const BigInt& x) const {
    for (const auto& iv : intervals_) {
      if (x < iv.lo) return false;
      if (x <= iv.hi) return true;
    }
    return false;
  }

  void insert(const BigInt& x) { insert(x, x); }

  void insert(const BigInt& lo, const BigInt& hi) {
    if (lo < 1 || hi < lo) throw Error(ErrorCode::InvalidArgument, "coordinate interval must satisfy 1 <= lo <= hi");
    std::vector<Interval> merged;
    merged.reserve(intervals_.size() + 1);
    Interval pending{lo, hi};
    bool placed = false;
    for (auto& iv : intervals_) {
      if (iv.hi + 1 < pending.lo) {
        merged.push_back(std::move(iv));
      } else if (pending.hi + 1 < iv.lo) {
        if (!placed) {
          merged.push_back(pending);
          placed = true;
        }
        merged.push_back(std::move(iv));
      } else {
        if (iv.lo < pending.lo) pending.lo = iv.lo;
        if (iv.hi > pending.hi) pending.hi = iv.hi;
      }
    }
    if (!placed) merged.push_back(pending);
    intervals_ = std::move(merged);
  }

  /// Appends an interval lying strictly above every stored index (fast path
  /// for building block-shifted sets in increasing order).
  void append(const BigInt& lo, const BigInt& hi) {
    if (!intervals_.empty() && lo <= intervals_.back().hi) {
      insert(lo, hi);
      return;
    }
    if (!intervals_.empty() && intervals_.back().hi + 1 == lo) {
      intervals_.back().hi = hi;
      return;
    }
    if (lo < 1 || hi < lo) throw Error(ErrorCode::InvalidArgument, "coordinate interval must satisfy 1 <= lo <= hi");
    intervals_.push_back({lo, hi});
  }

  /// Size of the intersection.
  BigInt overlap(const CoordSet& other) const {
    BigInt total = 0;
    std::size_t i = 0;
    std::size_t j = 0;
    const auto& a = intervals_;
    const auto& b = other.intervals_;
    while (i < a.size() && j < b.size()) {
      const BigInt& lo = a[i].lo < b[j].lo ? b[j].lo : a[i].lo;
      const BigInt& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
      if (lo <= hi) total += hi - lo + 1;
      if (a[i].hi < b[j].hi) {
        ++i;
      } else {
        ++j;
      }
    }
    return total;
  }

  bool disjoint(const CoordSet& other) const { return overlap(other) == 0; }

  /// |this \ other|
  BigInt difference_size(const CoordSet& other) const { return size() - overlap(other); }

  CoordSet united(const CoordSet& other) const {
    CoordSet out = *this;
    for (const auto& iv : other.intervals_) out.insert(iv.lo, iv.hi);
    return out;
  }

  CoordSet shifted(const BigInt& offset) const {
    CoordSet out;
    out.intervals_.reserve(intervals_.size());
    for (const auto& iv : intervals_) out.intervals_.push_back({iv.lo + offset, iv.hi + offset});
    if (!out.empty() && out.intervals_.front().lo < 1) {
      throw Error(ErrorCode::InvalidArgument, "shift moves coordinates below 1");
    }
    return out;
  }

  /// Explicit indices; refuses sets larger than `limit`.
  std::vector<BigInt> enumerate(std::size_t limit = 1u << 20) const {
    if (size() > limit) throw Error(ErrorCode::TooLarge, "coordinate set has more than " + std::to_string(limit) + " entries");
    std::vector<BigInt> out;
    for (const auto& iv : intervals_) {
      for (BigInt x = iv.lo; x <= iv.hi; ++x) out.push_back(x);
    }
    return out;
  }

  bool operator==(const CoordSet&) const = default;

 private:
  std::vector<Interval> intervals_;
};

}  // namespace rcwb::bundles
