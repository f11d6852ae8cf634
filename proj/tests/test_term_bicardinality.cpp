#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace sfmin;
using sfmin::testing::arc_closure;
using sfmin::testing::term_flows;

namespace {

struct Fixture {
  Term term;
  BicardinalityTermState state;
  Fixture(std::vector<NodeId> qp, std::vector<NodeId> qs, std::vector<Value> grid)
      : term(make_bicardinality(std::move(qp), std::move(qs), std::move(grid))),
        state(term) {}
};

// g(k',k'') = k'*(2-k'') on 2x2 sides; members 0,1 | 2,3.
Fixture hochbaum_fixture() {
  std::vector<Value> grid(9);
  for (int kp = 0; kp <= 2; ++kp)
    for (int ks = 0; ks <= 2; ++ks) grid[kp * 3 + ks] = Value(kp) * (2 - ks);
  return Fixture({0, 1}, {2, 3}, std::move(grid));
}

// brute-force gbar: min residual over all subsets of the given shape
Value shape_min(const BicardinalityTermState& state, int kp, int ks, const Phase& phase) {
  const int m = state.arity();
  Value best = 0;
  bool first = true;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    int cp = 0, cs = 0;
    for (int t = 0; t < m; ++t)
      if (mask >> t & 1) (state.side_of(t) == 0 ? cp : cs) += 1;
    if (cp != kp || cs != ks) continue;
    const Value v = state.residual_value(mask, phase);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

Fixture random_fixture(SplitMix64& rng) {
  const int mp = 1 + static_cast<int>(rng.below(3));
  const int ms = 1 + static_cast<int>(rng.below(3));
  std::vector<NodeId> qp(mp), qs(ms);
  for (int i = 0; i < mp; ++i) qp[i] = i;
  for (int i = 0; i < ms; ++i) qs[i] = mp + i;
  std::vector<Value> grid(static_cast<size_t>(mp + 1) * (ms + 1));
  const auto spine = testing::random_concave(rng, mp + ms, 10);
  const Value lam = rng.range(0, 2), mu = rng.range(0, 2);
  for (int kp = 0; kp <= mp; ++kp)
    for (int ks = 0; ks <= ms; ++ks)
      grid[static_cast<size_t>(kp) * (ms + 1) + ks] =
          spine[kp + ks] + lam * kp * (ms - ks) + mu * ks * (mp - kp);
  return Fixture(qp, qs, std::move(grid));
}

}  // namespace

TEST_CASE("rounded grid values follow the scaling formula") {
  Fixture f({0}, {1, 2}, {0, 0, 0, 5, 3, 0});
  SECTION("integral Delta") {
    const Phase phase{8};  // Delta = 4
    // raw value 5 at shape (1,0): 4*floor(5/4) + 4*1*(3-1) = 12
    REQUIRE(f.state.rounded_g(1, 0, phase) == 12);
  }
  SECTION("final phase is the identity") {
    const Phase phase{1};
    REQUIRE(f.state.rounded_g(1, 0, phase) == 5);
    REQUIRE(f.state.rounded_g(1, 1, phase) == 3);
  }
  SECTION("both corners stay zero") {
    for (Value two_delta : {1, 2, 4, 16}) {
      REQUIRE(f.state.rounded_g(0, 0, Phase{two_delta}) == 0);
      REQUIRE(f.state.rounded_g(1, 2, Phase{two_delta}) == 0);
    }
  }
}

TEST_CASE("prepare_bfs caches on the product grid") {
  Fixture f = hochbaum_fixture();
  const Phase phase{1};
  f.state.prepare_bfs(phase);
  REQUIRE(f.state.row_min_col() == std::vector<int>{0, 2, 2});
  REQUIRE(f.state.col_min_row() == std::vector<int>{0, 0, 0});
  REQUIRE(f.state.cross_bound()[1] == 2);
  REQUIRE(f.state.cross_bound()[2] == 2);
}

TEST_CASE("prepare_bfs on the zero grid pins every bound to zero") {
  Fixture f({0, 1}, {2, 3}, std::vector<Value>(9, 0));
  const Phase phase{1};
  f.state.prepare_bfs(phase);
  REQUIRE(f.state.row_min_col() == std::vector<int>{0, 0, 0});
  for (int a = 1; a <= 2; ++a) {
    REQUIRE(f.state.cross_bound()[a] == 0);
    REQUIRE(f.state.cross_bound_reverse()[a] == 0);
  }
  REQUIRE(arc_closure(f.state, phase).empty());
}

TEST_CASE("prepare_bfs minima match naive scans on random states") {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    Fixture f = random_fixture(rng);
    const Phase phase{Value{1} << rng.below(4)};
    testing::random_pushes(f.term, f.state, phase, static_cast<int>(rng.below(8)), rng);
    f.state.prepare_bfs(phase);
    const int mp = static_cast<int>(f.term.bicardinality().qprime.size());
    const int ms = static_cast<int>(f.term.bicardinality().qsecond.size());
    const auto naive_rows = naive_row_minima(
        mp + 1, ms + 1, [&](int r, int c) { return f.state.gbar(r, c, phase); });
    const auto naive_cols = naive_row_minima(
        ms + 1, mp + 1, [&](int r, int c) { return f.state.gbar(c, r, phase); });
    REQUIRE(f.state.row_min_col() == naive_rows);
    REQUIRE(f.state.col_min_row() == naive_cols);

    // gbar itself is the shape-minimum of the residual
    for (int kp = 0; kp <= mp; ++kp)
      for (int ks = 0; ks <= ms; ++ks)
        REQUIRE(f.state.gbar(kp, ks, phase) == shape_min(f.state, kp, ks, phase));
  }
}

TEST_CASE("cross arcs from the product grid reach the whole opposite side") {
  Fixture f = hochbaum_fixture();
  const Phase phase{1};
  for (int i = 0; i < 2; ++i) {
    f.state.reset_reached();
    std::vector<int> out;
    f.state.get_neighbors(i, phase, out);
    // K(1,2) has minimum 1 > 0, so both Q'' members are reachable; the
    // within-Q' arc is blocked by the zero row minimum.
    REQUIRE(std::set<int>(out.begin(), out.end()) == std::set<int>{2, 3});
  }
}

TEST_CASE("bicardinality arc sets match the exchange-capacity oracle") {
  SplitMix64 rng(515);
  for (int trial = 0; trial < 120; ++trial) {
    Fixture f = random_fixture(rng);
    const Phase phase{Value{1} << rng.below(4)};
    testing::random_pushes(f.term, f.state, phase, static_cast<int>(rng.below(8)), rng);
    const auto flows = term_flows(f.state);
    const auto expect = testing::to_set(naive_arc_set(f.term, flows, phase.two_delta));
    REQUIRE(arc_closure(f.state, phase) == expect);
    REQUIRE(testing::arcs_transitive(expect));
  }
}

TEST_CASE("adjust_flow lands in the rounded base polyhedron") {
  SECTION("first phase from zero on the product grid") {
    Fixture f = hochbaum_fixture();
    const Phase phase{16};  // Delta = 8 >= U = 4
    std::vector<Value> deltas;
    f.state.adjust_flow(phase, deltas);
    REQUIRE(deltas.size() == 4);
    const std::uint64_t full = 15;
    REQUIRE(f.state.residual_value(0, phase) == 0);
    REQUIRE(f.state.residual_value(full, phase) == 0);
    for (std::uint64_t mask = 0; mask <= full; ++mask)
      REQUIRE(f.state.residual_value(mask, phase) >= 0);
    for (int t = 0; t < 4; ++t) REQUIRE(f.state.flow(t) % phase.ceil_delta() == 0);
  }
  SECTION("final phase lands in B(g) exactly") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
      Fixture f = random_fixture(rng);
      const Phase prev{2};
      std::vector<Value> deltas;
      f.state.adjust_flow(prev, deltas);
      testing::random_pushes(f.term, f.state, prev, static_cast<int>(rng.below(5)), rng);
      deltas.clear();
      const Phase final_phase{1};
      f.state.adjust_flow(final_phase, deltas);
      const int m = f.state.arity();
      const std::uint64_t full = (std::uint64_t{1} << m) - 1;
      REQUIRE(f.state.residual_value(full, final_phase) == 0);
      for (std::uint64_t mask = 0; mask <= full; ++mask)
        REQUIRE(f.state.residual_value(mask, final_phase) >= 0);
    }
  }
  SECTION("empty side is rejected at construction") {
    REQUIRE_THROWS_AS(make_bicardinality({}, {0, 1}, std::vector<Value>(3, 0)),
                      InstanceError);
  }
}

TEST_CASE("send_flow keeps prefix sums consistent with recomputation") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    Fixture f = random_fixture(rng);
    const Phase phase{Value{1} << rng.below(3)};
    for (int step = 0; step < 12; ++step) {
      const auto arcs = naive_arc_set(f.term, term_flows(f.state), phase.two_delta);
      if (arcs.empty()) break;
      const auto [i, j] = arcs[rng.below(arcs.size())];
      f.state.send_flow(i, j, phase);
      const int mp = static_cast<int>(f.term.bicardinality().qprime.size());
      const int ms = static_cast<int>(f.term.bicardinality().qsecond.size());
      for (int kp = 0; kp <= mp; ++kp)
        for (int ks = 0; ks <= ms; ++ks) {
          const Value g = f.state.gbar(kp, ks, phase);
          REQUIRE(g == shape_min(f.state, kp, ks, phase));
          REQUIRE(g >= 0);
        }
    }
  }
}

TEST_CASE("bicardinality alpha bound is 5m^2") {
  Fixture f = hochbaum_fixture();
  REQUIRE(f.state.alpha_bound() == 80);
}
