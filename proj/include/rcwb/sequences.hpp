#pragma once

// Integer and rational sequences of the two-sphere diagonal construction:
//
//   d(n) = 2^(n+1) - 1        l(n) = 2^(n+1)
//   r(0) = 1, r(n) = r(n-1) l(n)
//   s(0) = 1, s(n) = s(n-1) d(n)
//   t(0) = 0, t(n) = d(n) t(n-1) + (r(n-1) - t(n-1))
//   u(n) = s(n) / r(n)
//
// and certified enclosures of kappa = lim u(n) = prod_{k>=1} (1 - 2^-(k+1)).

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "rcwb/error.hpp"
#include "rcwb/numeric.hpp"

namespace rcwb::sequences {

struct SeqRow {
  unsigned n = 0;
  BigInt d;
  BigInt l;
  BigInt r;
  BigInt s;
  BigInt t;
  Rational u;

  bool operator==(const SeqRow&) const = default;
};

struct SeqTable {
  std::vector<SeqRow> rows;

  const SeqRow& at(unsigned n) const {
    if (n >= rows.size()) throw Error(ErrorCode::InvalidArgument, "row " + std::to_string(n) + " not in table");
    return rows[n];
  }

  /// Empty when every row satisfies the closed forms, the recursions,
  /// 0 <= t < r, lowest terms for u, and strict decrease of u.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const SeqRow& row = rows[i];
      const std::string tag = "n=" + std::to_string(row.n) + ": ";
      if (row.n != i) out.push_back(tag + "index out of order");
      if (row.d != pow2(row.n + 1) - 1) out.push_back(tag + "d(n) != 2^(n+1)-1");
      if (row.l != pow2(row.n + 1)) out.push_back(tag + "l(n) != 2^(n+1)");
      if (row.t < 0 || row.t >= row.r) out.push_back(tag + "t(n) outside [0, r(n))");
      if (row.u != Rational(row.s, row.r)) out.push_back(tag + "u(n) != s(n)/r(n)");
      if (boost::multiprecision::gcd(numerator(row.u), denominator(row.u)) != 1) {
        out.push_back(tag + "u(n) not in lowest terms");
      }
      if (i == 0) {
        if (row.r != 1 || row.s != 1 || row.t != 0) out.push_back(tag + "bad base case");
        continue;
      }
      const SeqRow& prev = rows[i - 1];
      if (row.r != prev.r * row.l) out.push_back(tag + "r recursion");
      if (row.s != prev.s * row.d) out.push_back(tag + "s recursion");
      if (row.t != row.d * prev.t + (prev.r - prev.t)) out.push_back(tag + "t recursion");
      if (!(row.u < prev.u)) out.push_back(tag + "u not strictly decreasing");
    }
    return out;
  }
};

inline SeqTable seq_table(unsigned n_max) {
  SeqTable table;
  table.rows.reserve(n_max + 1);
  SeqRow row{0, 1, 2, 1, 1, 0, Rational(1)};
  table.rows.push_back(row);
  for (unsigned n = 1; n <= n_max; ++n) {
    SeqRow next;
    next.n = n;
    next.d = pow2(n + 1) - 1;
    next.l = pow2(n + 1);
    next.r = row.r * next.l;
    next.s = row.s * next.d;
    next.t = next.d * row.t + (row.r - row.t);
    next.u = Rational(next.s, next.r);
    table.rows.push_back(next);
    row = std::move(next);
  }
  return table;
}

/// Single row; O(n) recomputation, no caching.
inline SeqRow seq_row(unsigned n) { return seq_table(n).rows.back(); }

inline BigInt d(unsigned n) { return pow2(n + 1) - 1; }
inline BigInt l(unsigned n) { return pow2(n + 1); }
inline BigInt r(unsigned n) { return seq_row(n).r; }
inline BigInt s(unsigned n) { return seq_row(n).s; }
inline BigInt t(unsigned n) { return seq_row(n).t; }
inline Rational u(unsigned n) { return seq_row(n).u; }

struct KappaInterval {
  Rational lower;
  Rational upper;
  unsigned terms = 0;

  Rational width() const { return upper - lower; }
  bool contains(const Rational& x) const { return lower <= x && x <= upper; }
  bool nested_in(const KappaInterval& outer) const {
    return outer.lower <= lower && upper <= outer.upper;
  }
  bool operator==(const KappaInterval&) const = default;
};

/// [u(N) (1 - 2^-(N+1)), u(N)] with N = terms. The lower end uses
/// prod_{k>N} (1 - 2^-(k+1)) >= 1 - sum_{k>N} 2^-(k+1) = 1 - 2^-(N+1).
inline KappaInterval kappa_interval(unsigned terms) {
  if (terms < 1) throw Error(ErrorCode::InvalidArgument, "kappa_interval needs terms >= 1");
  Rational partial = 1;
  for (unsigned k = 1; k <= terms; ++k) partial *= Rational(1) - Rational(1, pow2(k + 1));
  KappaInterval out;
  out.terms = terms;
  out.upper = partial;
  out.lower = partial * (Rational(1) - Rational(1, pow2(terms + 1)));
  return out;
}

struct IdentityCheck {
  unsigned n = 0;
  std::string name;
  BigInt lhs;
  BigInt rhs;
  bool passed = false;
};

struct IdentityReport {
  std::vector<IdentityCheck> checks;

  bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }
};

/// For n < n_max:
///   d(n+1) [r(n) - s(n) - t(n)] + t(n)           == r(n+1) - s(n+1) - t(n+1)
///   s(n) + [r(n) - s(n) - t(n)] + d(n+1) t(n)    == t(n+1)
/// These are the rank counts of the two summands of the image of p_n.
inline IdentityReport rank_recursion_identities(unsigned n_max) {
  const SeqTable table = seq_table(n_max);
  IdentityReport report;
  for (unsigned n = 0; n < n_max; ++n) {
    const SeqRow& cur = table.rows[n];
    const SeqRow& next = table.rows[n + 1];
    const BigInt free_rank = cur.r - cur.s - cur.t;

    IdentityCheck first{n, "first-summand-trivial-rank", next.d * free_rank + cur.t,
                        next.r - next.s - next.t, false};
    first.passed = first.lhs == first.rhs;
    report.checks.push_back(first);

    IdentityCheck second{n, "second-summand-rank", cur.s + free_rank + next.d * cur.t, next.t, false};
    second.passed = second.lhs == second.rhs;
    report.checks.push_back(second);
  }
  return report;
}

inline void write_csv(std::ostream& out, const SeqTable& table) {
  out << "n,d,l,r,s,t,u_num,u_den\n";
  for (const auto& row : table.rows) {
    out << row.n << ',' << row.d << ',' << row.l << ',' << row.r << ',' << row.s << ',' << row.t << ','
        << numerator(row.u) << ',' << denominator(row.u) << '\n';
  }
}

}  // namespace rcwb::sequences
