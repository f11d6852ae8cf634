#pragma once

// Shared helpers for the unit and acceptance suites: random Monge matrices,
// random reachable term-flow states, and arc-set closure over get_neighbors.

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "sfmin/generator.hpp"
#include "sfmin/oracle.hpp"
#include "sfmin/terms.hpp"

namespace sfmin::testing {

// Monge by construction: row term + column term minus a cumulative sum of
// non-negative increments. Small ranges keep ties frequent, which is what
// exercises the leftmost-minimum rule.
struct MongeMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Value> cells;

  Value at(int r, int c) const { return cells[static_cast<size_t>(r) * cols + c]; }
};

inline MongeMatrix random_monge(SplitMix64& rng, int rows, int cols, Value range) {
  MongeMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.cells.assign(static_cast<size_t>(rows) * cols, 0);
  std::vector<Value> row_term(rows), col_term(cols);
  for (auto& v : row_term) v = rng.range(0, range);
  for (auto& v : col_term) v = rng.range(0, range);
  std::vector<Value> cumulative(static_cast<size_t>(rows) * cols, 0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      Value inc = rng.below(3) == 0 ? rng.range(0, range) : 0;
      Value up = r > 0 ? cumulative[static_cast<size_t>(r - 1) * cols + c] : 0;
      Value left = c > 0 ? cumulative[static_cast<size_t>(r) * cols + c - 1] : 0;
      Value diag = (r > 0 && c > 0) ? cumulative[static_cast<size_t>(r - 1) * cols + c - 1] : 0;
      cumulative[static_cast<size_t>(r) * cols + c] = up + left - diag + inc;
      m.cells[static_cast<size_t>(r) * cols + c] =
          row_term[r] + col_term[c] - cumulative[static_cast<size_t>(r) * cols + c];
    }
  return m;
}

inline std::vector<Value> random_concave(SplitMix64& rng, int m, Value budget) {
  return sfmin::detail::random_concave(rng, m, budget);
}

inline std::vector<Value> term_flows(const TermState& state) {
  std::vector<Value> flows(state.arity());
  for (int t = 0; t < state.arity(); ++t) flows[t] = state.flow(t);
  return flows;
}

// All arcs of the term at the current state, one fresh-flag get_neighbors
// call per source member.
inline std::set<std::pair<int, int>> arc_closure(TermState& state, const Phase& phase) {
  std::set<std::pair<int, int>> arcs;
  std::vector<int> out;
  for (int i = 0; i < state.arity(); ++i) {
    state.reset_reached();
    out.clear();
    state.get_neighbors(i, phase, out);
    for (int j : out) arcs.emplace(i, j);
  }
  return arcs;
}

inline std::set<std::pair<int, int>> to_set(const std::vector<std::pair<int, int>>& arcs) {
  return {arcs.begin(), arcs.end()};
}

// Walk the state through `steps` random pushes along currently-present arcs
// (per the independent arc rule), which keeps it feasible and reachable.
inline void random_pushes(const Term& term, TermState& state, const Phase& phase,
                          int steps, SplitMix64& rng) {
  for (int s = 0; s < steps; ++s) {
    const auto arcs = naive_arc_set(term, term_flows(state), phase.two_delta);
    if (arcs.empty()) return;
    const auto [i, j] = arcs[rng.below(arcs.size())];
    state.send_flow(i, j, phase);
  }
}

inline bool arcs_transitive(const std::set<std::pair<int, int>>& arcs) {
  for (const auto& [i, j] : arcs)
    for (const auto& [j2, k] : arcs) {
      if (j2 != j || k == i) continue;
      if (!arcs.count({i, k})) return false;
    }
  return true;
}

}  // namespace sfmin::testing
