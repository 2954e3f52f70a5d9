#include "doctest.h"
#include "pingpong/residual.hpp"

using namespace pingpong;

TEST_CASE("permutation parsing and composition") {
  Perm p = parse_cycles("(1 2 3)(4 5)", 5);
  CHECK(p == Perm{1, 2, 0, 4, 3});
  CHECK(cycles_str(p) == "(1 2 3)(4 5)");
  CHECK(perm_order(p) == 6);
  CHECK(compose(p, inverse_perm(p)) == identity_perm(5));
  CHECK_THROWS_AS(parse_cycles("(1 9)", 5), ParseError);
  CHECK_THROWS_AS(parse_cycles("(1 1)", 5), ParseError);
}

TEST_CASE("shortest kernel element: three-cycles on four points") {
  FiniteQuotientSpec spec;
  spec.rank = 2;
  spec.degree = 4;
  spec.images = {parse_cycles("(1 2 3)", 4), parse_cycles("(1 2 4)", 4)};
  DepthReport rep = shortest_kernel_element(spec);
  CHECK(rep.depth == 3);
  CHECK(rep.witness.str() == "aaa");
  CHECK(rep.verified);
}

TEST_CASE("shortest kernel element: cyclic image") {
  for (int d : {2, 3, 5, 7}) {
    FiniteQuotientSpec spec;
    spec.rank = 1;
    spec.degree = d;
    Perm cycle(d);
    for (int i = 0; i < d; ++i) cycle[i] = (i + 1) % d;
    spec.images = {cycle};
    DepthReport rep = shortest_kernel_element(spec);
    CHECK(rep.depth == d);
  }
}

TEST_CASE("shortest kernel element: identity images degenerate to depth 1") {
  FiniteQuotientSpec spec;
  spec.rank = 2;
  spec.degree = 3;
  spec.images = {identity_perm(3), identity_perm(3)};
  DepthReport rep = shortest_kernel_element(spec);
  CHECK(rep.depth == 1);
  CHECK(rep.witness.str() == "a");
}

TEST_CASE("depth is invariant under relabeling the points") {
  FiniteQuotientSpec spec;
  spec.rank = 2;
  spec.degree = 5;
  spec.images = {parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(1 3 5 2 4)", 5)};
  DepthReport base = shortest_kernel_element(spec);

  // conjugate both images by a fixed permutation
  Perm c = parse_cycles("(1 5)(2 4)", 5);
  FiniteQuotientSpec conj = spec;
  for (Perm& img : conj.images) img = compose(compose(inverse_perm(c), img), c);
  CHECK(shortest_kernel_element(conj).depth == base.depth);
}

TEST_CASE("find_deep_quotient reaches depth 4 and verifies it") {
  DeepQuotientResult res = find_deep_quotient(2, 4);
  REQUIRE(res.found);
  CHECK(res.report.depth >= 4);
  CHECK(res.report.verified);
  CHECK(verify_depth(res.spec, 4));
  // determinism of the seeded search
  DeepQuotientResult again = find_deep_quotient(2, 4);
  CHECK(again.found);
  CHECK(again.spec.images == res.spec.images);
  CHECK(again.candidates_tried == res.candidates_tried);
}

TEST_CASE("find_deep_quotient: n = 1 is immediate") {
  DeepQuotientResult res = find_deep_quotient(2, 1);
  REQUIRE(res.found);
  CHECK(res.report.depth >= 1);
}

TEST_CASE("find_deep_quotient exhausts unreachable depths") {
  QuotientSearchBudget tiny;
  tiny.max_degree = 2;
  tiny.tries_per_degree = 4;
  DeepQuotientResult res = find_deep_quotient(2, 30, tiny);
  CHECK(!res.found);
}

TEST_CASE("corollary instance wires image orders into powers") {
  WordOracle oracle(parse_presentation("gens: a b\n"));
  CayleyBall ball = CayleyBall::build(oracle, 6);
  FiniteQuotientSpec spec;
  spec.rank = 2;
  spec.degree = 5;
  spec.images = {parse_cycles("(1 2 3 4 5)", 5), parse_cycles("(1 2 3 4 5)", 5)};
  PingPongInstance inst = corollary_instance(spec, oracle, ball, Word::parse("a", 2),
                                             Word::parse("b", 2), false);
  CHECK(inst.H1.spec().generators[0].str() == "aaaaa");
  CHECK(inst.K1.spec().generators[0].str() == "bbbbb");
  // shortest nontrivial H1 element has length exactly s * |h|
  CHECK(inst.H1.folded_graph()->shortest_nontrivial(10)->size() == 5);
}
