#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace sfmin;
using sfmin::testing::arc_closure;
using sfmin::testing::term_flows;

namespace {

struct Fixture {
  Term term;
  CardinalityTermState state;
  Fixture(std::vector<NodeId> members, std::vector<Value> g)
      : term(make_cardinality(std::move(members), std::move(g))), state(term) {}
};

}  // namespace

TEST_CASE("cardinality structures at the zero state") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  REQUIRE(f.state.supernode_count() == 1);
  REQUIRE(f.state.supernode(0).left == 1);
  REQUIRE(f.state.supernode(0).right == 3);
  REQUIRE(f.state.gbar() == std::vector<Value>{0, 2, 2, 0});
}

TEST_CASE("cardinality push from the uniform state updates gbar by case 3") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  const Phase phase{2};
  f.state.send_flow(0, 1, phase);
  REQUIRE(f.state.flow(0) == 1);
  REQUIRE(f.state.flow(1) == -1);
  REQUIRE(f.state.gbar() == std::vector<Value>{0, 1, 1, 0});
  REQUIRE(f.state.gbar() == f.state.gbar_from_scratch());
  // sorted runs: (1), (0), (-1)
  REQUIRE(f.state.supernode_count() == 3);
  REQUIRE(f.state.supernode(0).z == 1);
  REQUIRE(f.state.supernode(1).z == 0);
  REQUIRE(f.state.supernode(2).z == -1);
}

TEST_CASE("cardinality swap case leaves gbar untouched") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  const Phase phase{2};
  f.state.send_flow(0, 1, phase);  // z = (1,-1,0)
  f.state.send_flow(1, 2, phase);  // z_i=-1 equals z_j-1: swap
  REQUIRE(f.state.gbar() == std::vector<Value>{0, 1, 1, 0});
  REQUIRE(term_flows(f.state) == std::vector<Value>{1, 0, -1});
  REQUIRE(f.state.gbar() == f.state.gbar_from_scratch());
}

TEST_CASE("cardinality wide-gap push increases gbar by case 1") {
  Fixture f({0, 1}, {0, 4, 0});
  const Phase phase{2};
  f.state.send_flow(0, 1, phase);
  f.state.send_flow(0, 1, phase);  // z = (2,-2), gbar = (0,2,0)
  REQUIRE(f.state.gbar() == std::vector<Value>{0, 2, 0});
  f.state.send_flow(1, 0, phase);  // z_i=-2 <= z_j-2: gbar rises on [R(j), L(i)-1]
  REQUIRE(f.state.gbar() == std::vector<Value>{0, 3, 0});
  REQUIRE(f.state.gbar() == f.state.gbar_from_scratch());
}

TEST_CASE("cardinality neighbors from the uniform state reach everyone") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  const Phase phase{2};  // 3*Delta/2 = 1.5, min gbar over [1,2] is 2
  for (int i = 0; i < 3; ++i) {
    f.state.reset_reached();
    std::vector<int> out;
    f.state.get_neighbors(i, phase, out);
    REQUIRE(out.size() == 2);
  }
}

TEST_CASE("cardinality neighbors after one push follow the interval rule") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  const Phase phase{2};
  f.state.send_flow(0, 1, phase);  // z = (1,-1,0), gbar = (0,1,1,0)

  // from z=1: both targets have smaller z and min gbar 1 < 1.5
  f.state.reset_reached();
  std::vector<int> out;
  f.state.get_neighbors(0, phase, out);
  REQUIRE(out.empty());

  // from z=-1: both others have strictly larger z
  f.state.reset_reached();
  out.clear();
  f.state.get_neighbors(1, phase, out);
  REQUIRE(std::set<int>(out.begin(), out.end()) == std::set<int>{0, 2});
}

TEST_CASE("final-phase threshold reduces to strict positivity") {
  Fixture f({0, 1, 2}, {0, 2, 2, 0});
  const Phase final_phase{1};
  f.state.send_flow(0, 1, final_phase);  // gbar = (0,1,1,0), all interior positive
  const auto arcs = arc_closure(f.state, final_phase);
  // every pair except those blocked by a zero interval; gbar > 0 on [1,2]
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) REQUIRE(arcs.count({i, j}) == 1);
  // and it coincides with positive exchange capacity
  const auto flows = term_flows(f.state);
  for (const auto& [i, j] : arcs)
    REQUIRE(naive_exchange_capacity(f.term, flows, 1, i, j) >= 1);
}

TEST_CASE("cardinality arcs match the naive rule on random reachable states") {
  SplitMix64 rng(909);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 2 + static_cast<int>(rng.below(5));
    std::vector<NodeId> members(m);
    for (int i = 0; i < m; ++i) members[i] = i;
    Fixture f(members, testing::random_concave(rng, m, 12));
    const Phase phase{Value{1} << rng.below(4)};
    testing::random_pushes(f.term, f.state, phase, static_cast<int>(rng.below(10)), rng);

    const auto flows = term_flows(f.state);
    const auto expect = testing::to_set(naive_arc_set(f.term, flows, phase.two_delta));
    REQUIRE(arc_closure(f.state, phase) == expect);
    REQUIRE(testing::arcs_transitive(expect));
    REQUIRE(f.state.gbar() == f.state.gbar_from_scratch());

    // at the final phase the rule equals thresholded exchange capacity
    if (phase.two_delta == 1) {
      std::set<std::pair<int, int>> cap_arcs;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j && naive_exchange_capacity(f.term, flows, 1, i, j) >= 1)
            cap_arcs.emplace(i, j);
      REQUIRE(expect == cap_arcs);
    }
  }
}

TEST_CASE("cardinality incremental gbar survives long augment sequences") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 3 + static_cast<int>(rng.below(6));
    std::vector<NodeId> members(m);
    for (int i = 0; i < m; ++i) members[i] = i;
    Fixture f(members, testing::random_concave(rng, m, 20));
    const Phase phase{Value{1} << rng.below(4)};
    for (int step = 0; step < 30; ++step) {
      const auto arcs = naive_arc_set(f.term, term_flows(f.state), phase.two_delta);
      if (arcs.empty()) break;
      const auto [i, j] = arcs[rng.below(arcs.size())];
      f.state.send_flow(i, j, phase);
      REQUIRE(f.state.gbar() == f.state.gbar_from_scratch());
      for (Value v : f.state.gbar()) REQUIRE(v >= 0);
    }
  }
}

TEST_CASE("cardinality alpha bound is 3(m-1)") {
  Fixture f({0, 1, 2, 3}, {0, 3, 4, 3, 0});
  REQUIRE(f.state.alpha_bound() == 9);
}
