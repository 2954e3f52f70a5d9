#include "doctest.h"
#include "pingpong/abstract_pingpong.hpp"

using namespace pingpong;

namespace {

const WordOracle& f2() {
  static WordOracle oracle(parse_presentation("gens: a b\n"));
  return oracle;
}

// Both-indices-2 toy: S = {0, 1}, h and k swap the two points.
AbstractPingPongInstance index_two_instance() {
  AbstractPingPongInstance inst;
  inst.set_size = 2;
  inst.element_names = {"1", "h", "k"};
  inst.action = {{0, 1}, {1, 0}, {1, 0}};
  inst.h_elements = {0, 1};
  inst.k_elements = {0, 2};
  inst.g0_elements = {0};
  inst.s_h = {0};
  inst.s_k = {1};
  return inst;
}

}  // namespace

TEST_CASE("left-multiplication window instance verifies") {
  CayleyBall ball = CayleyBall::build(f2(), 6);
  AbstractPingPongInstance inst =
      make_left_multiplication_instance(ball, Word::parse("a", 2), Word::parse("b", 2), 2);
  PingPongReport rep = abstract_ping_pong_check(inst, 3);
  CHECK(rep.outcome == PingPongOutcome::Verified);
  CHECK(rep.index_h > 2);
  CHECK(rep.index_k > 2);
  CHECK(rep.products_checked > 0);
}

TEST_CASE("index guard fires when both witnessed indices are 2") {
  PingPongReport rep = abstract_ping_pong_check(index_two_instance(), 5);
  CHECK(rep.outcome == PingPongOutcome::IndexGuard);
  CHECK(rep.index_h == 2);
  CHECK(rep.index_k == 2);
}

TEST_CASE("index guard is never verified") {
  for (int maxsyll : {1, 3, 7}) {
    PingPongReport rep = abstract_ping_pong_check(index_two_instance(), maxsyll);
    CHECK(rep.outcome != PingPongOutcome::Verified);
  }
}

TEST_CASE("degenerate instance with K = G0 verifies vacuously") {
  // K\G0 empty: the only odd products are single H-syllables, each of
  // which pushes S_H into S_K.
  AbstractPingPongInstance inst;
  inst.set_size = 3;
  inst.element_names = {"1", "h"};
  inst.action = {{0, 1, 2}, {2, 1, 0}};  // h swaps the outer points
  inst.h_elements = {0, 1};
  inst.k_elements = {0};
  inst.g0_elements = {0};
  inst.s_h = {0};
  inst.s_k = {2};
  for (int maxsyll : {1, 4, 9}) {
    PingPongReport rep = abstract_ping_pong_check(inst, maxsyll);
    CHECK(rep.outcome == PingPongOutcome::Verified);
  }
}

TEST_CASE("mapping violations are reported as hypothesis failures") {
  AbstractPingPongInstance inst = index_two_instance();
  inst.h_elements = {0, 1, 2};  // three h-cosets now, no guard
  inst.element_names.push_back("h2");
  inst.action.push_back({0, 1});  // fixes S_H pointwise: maps S_H outside S_K
  inst.h_elements = {0, 1, 3};
  PingPongReport rep = abstract_ping_pong_check(inst, 3);
  CHECK(rep.outcome == PingPongOutcome::HypothesesFail);
}

TEST_CASE("disjointness and arity validation") {
  AbstractPingPongInstance inst = index_two_instance();
  inst.s_k = {0};
  CHECK(abstract_ping_pong_check(inst, 2).outcome == PingPongOutcome::HypothesesFail);

  AbstractPingPongInstance bad = index_two_instance();
  bad.action[1] = {5, 0};
  CHECK_THROWS_AS(abstract_ping_pong_check(bad, 2), InstanceError);
}
