#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace sfmin;
using sfmin::testing::arc_closure;
using sfmin::testing::term_flows;

namespace {

struct Fixture {
  Term term;
  PairwiseTermState state;
  Fixture(Value a, Value b) : term(make_pairwise(0, 1, a, b)), state(term) {}
};

}  // namespace

TEST_CASE("pairwise adjust_flow is the identity") {
  Fixture f(3, 2);
  const Phase phase{4};
  std::vector<Value> deltas;
  f.state.adjust_flow(phase, deltas);
  REQUIRE(deltas == std::vector<Value>{0, 0});
  REQUIRE(f.state.flow(0) == 0);

  // also after pushes
  f.state.send_flow(0, 1, phase);
  deltas.clear();
  f.state.adjust_flow(Phase{2}, deltas);
  REQUIRE(deltas == std::vector<Value>{0, 0});
  REQUIRE(f.state.flow(0) == 2);
}

TEST_CASE("pairwise arc rule at ceil(Delta)=2") {
  Fixture f(3, 2);
  const Phase phase{4};
  auto arcs = arc_closure(f.state, phase);
  REQUIRE(arcs == std::set<std::pair<int, int>>{{0, 1}, {1, 0}});
}

TEST_CASE("pairwise arc rule with saturated forward direction") {
  Fixture f(3, 2);
  const Phase phase{2};  // ceil(Delta) = 1
  // three legal unit pushes drive phi to its upper bound
  for (int k = 0; k < 3; ++k) f.state.send_flow(0, 1, phase);
  REQUIRE(f.state.flow(0) == 3);
  auto arcs = arc_closure(f.state, phase);
  REQUIRE(arcs == std::set<std::pair<int, int>>{{1, 0}});
}

TEST_CASE("pairwise zero capacities give no arcs") {
  Fixture f(0, 0);
  for (Value two_delta : {1, 2, 8}) {
    auto arcs = arc_closure(f.state, Phase{two_delta});
    REQUIRE(arcs.empty());
  }
}

TEST_CASE("pairwise send_flow stays within the base polyhedron box") {
  Fixture f(3, 2);
  const Phase phase{4};
  f.state.send_flow(0, 1, phase);
  REQUIRE(f.state.flow(0) == 2);
  REQUIRE(f.state.flow(1) == -2);
  f.state.send_flow(1, 0, phase);
  REQUIRE(f.state.flow(0) == 0);

  Fixture g(1, 1);
  const Phase unit{2};
  g.state.send_flow(0, 1, unit);
  REQUIRE(g.state.flow(0) == 1);
  g.state.send_flow(1, 0, unit);
  REQUIRE(g.state.flow(0) == 0);
}

TEST_CASE("pairwise residuals and arcs match the naive oracle") {
  SplitMix64 rng(404);
  for (int trial = 0; trial < 50; ++trial) {
    Fixture f(rng.range(0, 9), rng.range(0, 9));
    const Phase phase{Value{1} << rng.below(4)};
    testing::random_pushes(f.term, f.state, phase, static_cast<int>(rng.below(6)), rng);
    const auto flows = term_flows(f.state);

    // closed-form exchange capacities
    REQUIRE(naive_exchange_capacity(f.term, flows, phase.two_delta, 0, 1) ==
            f.term.pairwise().a - flows[0]);
    REQUIRE(naive_exchange_capacity(f.term, flows, phase.two_delta, 1, 0) ==
            f.term.pairwise().b + flows[0]);

    const auto expect = testing::to_set(naive_arc_set(f.term, flows, phase.two_delta));
    REQUIRE(arc_closure(f.state, phase) == expect);
    for (std::uint64_t mask = 0; mask < 4; ++mask) {
      Value expect_res = term_value_mask(f.term, mask);
      for (int t = 0; t < 2; ++t)
        if (mask >> t & 1) expect_res -= flows[t];
      REQUIRE(f.state.residual_value(mask, phase) == expect_res);
    }
  }
}

TEST_CASE("pairwise alpha bound is 2") {
  Fixture f(5, 0);
  REQUIRE(f.state.alpha_bound() == 2);
}
