#pragma once

#include <bit>
#include <cstdint>
#include <utility>
#include <vector>

#include "sfmin/instance.hpp"

namespace sfmin {

// Deliberately naive reference implementations. They are the ground-truth
// half of the test suite and share nothing with the solver or the term
// machinery beyond instance evaluation, so keep them free of any include
// besides instance.hpp.

struct OracleReport {
  Value minimum = 0;
  std::vector<std::uint64_t> minimizers;  // subset bitmasks over [0, n)
  std::int64_t evaluations = 0;
};

// Exhaustive minimum over all 2^n subsets.
inline OracleReport brute_min(const Instance& inst) {
  if (inst.n > 20) throw InstanceError("brute_min supports at most 20 nodes");
  OracleReport report;
  std::vector<char> in_set(inst.n, 0);
  const std::uint64_t limit = std::uint64_t{1} << inst.n;
  for (std::uint64_t mask = 0; mask < limit; ++mask) {
    for (int i = 0; i < inst.n; ++i) in_set[i] = (mask >> i) & 1;
    Value v = evaluate(inst, in_set);
    ++report.evaluations;
    if (mask == 0 || v < report.minimum) {
      report.minimum = v;
      report.minimizers.clear();
    }
    if (v == report.minimum) report.minimizers.push_back(mask);
  }
  return report;
}

inline std::vector<NodeId> mask_to_nodes(std::uint64_t mask) {
  std::vector<NodeId> nodes;
  for (int i = 0; mask >> i; ++i)
    if (mask >> i & 1) nodes.push_back(i);
  return nodes;
}

// f^Delta for a term, recomputed here from the raw payload: identity for
// pairwise/cardinality, Iwata rounding for the other kinds.
inline Value oracle_rounded_value(const Term& term, std::uint64_t subset, Value two_delta) {
  Value raw = term_value_mask(term, subset);
  if (term.kind == TermKind::kPairwise || term.kind == TermKind::kCardinality ||
      two_delta == 1) {
    return raw;
  }
  const Value delta = two_delta / 2;
  const Value size = std::popcount(subset);
  const Value m = term.arity();
  return delta * (raw / delta) + delta * size * (m - size);
}

// Exchange capacity by full enumeration: min f^Delta(S) - phi(S) over sets S
// with i in S and j outside. `phi` is indexed like term.members.
inline Value naive_exchange_capacity(const Term& term, const std::vector<Value>& phi,
                                     Value two_delta, int i, int j) {
  const int m = term.arity();
  Value best = 0;
  bool first = true;
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << m); ++subset) {
    if (!(subset >> i & 1) || (subset >> j & 1)) continue;
    Value v = oracle_rounded_value(term, subset, two_delta);
    for (int t = 0; t < m; ++t)
      if (subset >> t & 1) v -= phi[t];
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

namespace detail {

// The two-branch residual arc rule for cardinality terms, evaluated from
// scratch (fresh sort, fresh prefix sums) with no shared state.
inline std::vector<std::pair<int, int>> cardinality_rule_arcs(
    const Term& term, const std::vector<Value>& phi, Value two_delta) {
  const int m = term.arity();
  const auto& g = term.cardinality().g;
  std::vector<Value> sorted = phi;
  std::sort(sorted.begin(), sorted.end(), std::greater<Value>());
  std::vector<Value> gbar(m + 1, 0);
  Value prefix = 0;
  gbar[0] = g[0];
  for (int k = 1; k <= m; ++k) {
    prefix += sorted[k - 1];
    gbar[k] = g[k] - prefix;
  }
  auto left_pos = [&](int t) {  // L: first 1-based sorted position of phi[t]
    int count = 0;
    for (Value v : sorted)
      if (v > phi[t]) ++count;
    return count + 1;
  };
  auto right_pos = [&](int t) {  // R: last 1-based sorted position of phi[t]
    int count = 0;
    for (Value v : sorted)
      if (v >= phi[t]) ++count;
    return count;
  };
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (phi[i] < phi[j]) {
        arcs.emplace_back(i, j);
        continue;
      }
      bool ok = true;
      for (int k = left_pos(i); k <= right_pos(j) - 1; ++k)
        if (4 * gbar[k] < 3 * two_delta) {
          ok = false;
          break;
        }
      if (ok) arcs.emplace_back(i, j);
    }
  return arcs;
}

}  // namespace detail

// Residual arc set of one term: the threshold rule for pairwise terms, the
// two-branch interval rule for cardinality terms, and positive rounded
// exchange capacity for the rest.
inline std::vector<std::pair<int, int>> naive_arc_set(const Term& term,
                                                      const std::vector<Value>& phi,
                                                      Value two_delta) {
  if (term.kind == TermKind::kCardinality)
    return detail::cardinality_rule_arcs(term, phi, two_delta);
  const int m = term.arity();
  const Value ceil_delta = (two_delta + 1) / 2;
  std::vector<std::pair<int, int>> arcs;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && naive_exchange_capacity(term, phi, two_delta, i, j) >= ceil_delta)
        arcs.emplace_back(i, j);
  return arcs;
}

// O(rows*cols) leftmost row minima; the SMAWK comparator.
template <typename EntryFn>
std::vector<int> naive_row_minima(int rows, int cols, EntryFn entry) {
  std::vector<int> result(rows > 0 ? rows : 0, 0);
  for (int r = 0; r < rows; ++r) {
    int best = 0;
    for (int c = 1; c < cols; ++c)
      if (entry(r, c) < entry(r, best)) best = c;
    result[r] = best;
  }
  return result;
}

}  // namespace sfmin
