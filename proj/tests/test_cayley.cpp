#include <random>

#include "doctest.h"
#include "pingpong/cayley_ball.hpp"
#include "pingpong/json_io.hpp"

using namespace pingpong;

namespace {

const WordOracle& f2() {
  static WordOracle oracle(parse_presentation("gens: a b\n"));
  return oracle;
}
const WordOracle& z1() {
  static WordOracle oracle(parse_presentation("gens: a\n"));
  return oracle;
}
const WordOracle& z2() {
  static WordOracle oracle(parse_presentation("gens: a b\nrel: abAB\n"));
  return oracle;
}
const WordOracle& genus2() {
  static WordOracle oracle(parse_presentation("gens: a b c d\nrel: abABcdCD\n"));
  return oracle;
}

}  // namespace

TEST_CASE("ball sizes: free rank 2") {
  CayleyBall ball = CayleyBall::build(f2(), 2);
  CHECK(ball.vertex_count() == 17);  // 1 + 4 + 12
  CHECK(ball.sphere_size(0) == 1);
  CHECK(ball.sphere_size(1) == 4);
  CHECK(ball.sphere_size(2) == 12);
}

TEST_CASE("ball sizes: rank-1 line") {
  CayleyBall ball = CayleyBall::build(z1(), 3);
  CHECK(ball.vertex_count() == 7);
}

TEST_CASE("ball sizes: free-abelian diamond") {
  CayleyBall ball = CayleyBall::build(z2(), 3);
  CHECK(ball.vertex_count() == 25);  // 2*3*(3+1)+1
}

TEST_CASE("canonical words are geodesic per BFS layer") {
  CayleyBall ball = CayleyBall::build(genus2(), 3);
  for (int v = 0; v < ball.vertex_count(); ++v) {
    CHECK(static_cast<int>(ball.word(v).size()) == ball.depth(v));
    CHECK(ball.word(v).is_reduced());
  }
  // genus-2 ball of radius 3 is still a tree (girth 8)
  CHECK(ball.vertex_count() == 1 + 8 + 8 * 7 + 8 * 7 * 7);
}

TEST_CASE("genus-2 vertex identification agrees across strategies") {
  BallBuildOptions plain;
  plain.bucketed = false;
  CayleyBall a = CayleyBall::build(genus2(), 2);
  CayleyBall b = CayleyBall::build(genus2(), 2, plain);
  CHECK(a.vertex_count() == b.vertex_count());
  for (int v = 0; v < a.vertex_count(); ++v) CHECK(a.word(v) == b.word(v));
}

TEST_CASE("genus-2 sphere four sees the first relations") {
  CayleyBall ball = CayleyBall::build(genus2(), 4);
  // abAB = dcDC in the group, so sphere 4 is smaller than the tree count
  CHECK(ball.sphere_size(4) < 8 * 7 * 7 * 7);
  auto u = ball.vertex_of(Word::parse("abAB", 4));
  auto v = ball.vertex_of(Word::parse("dcDC", 4));
  REQUIRE(u);
  REQUIRE(v);
  CHECK(*u == *v);
}

TEST_CASE("edge symmetry under letter inversion") {
  CayleyBall ball = CayleyBall::build(genus2(), 3);
  for (int v = 0; v < ball.vertex_count(); ++v) {
    for (int lr = 0; lr < 2 * ball.alphabet(); ++lr) {
      Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      int t = ball.step(v, l);
      if (t != -1) CHECK(ball.step(t, l.inverse()) == v);
    }
  }
}

TEST_CASE("distances are symmetric and satisfy the triangle inequality") {
  CayleyBall ball = CayleyBall::build(z2(), 5);
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 200; ++i) {
    int u = static_cast<int>(rng() % ball.vertex_count());
    int v = static_cast<int>(rng() % ball.vertex_count());
    int w = static_cast<int>(rng() % ball.vertex_count());
    auto duv = ball.distance(u, v);
    auto dvu = ball.distance(v, u);
    if (duv && dvu) CHECK(*duv == *dvu);
    auto duw = ball.distance(u, w);
    auto dvw = ball.distance(v, w);
    if (duv && duw && dvw) CHECK(*duw <= *duv + *dvw);
  }
}

TEST_CASE("geodesics: unique in trees, staircases in the grid") {
  CayleyBall tree = CayleyBall::build(f2(), 6);
  auto u = tree.vertex_of(Word::parse("ab", 2));
  REQUIRE(u);
  auto geos = geodesics_between(tree, 0, *u);
  REQUIRE(geos.paths.size() == 1);
  CHECK(geos.paths[0].label().str() == "ab");

  CayleyBall grid = CayleyBall::build(z2(), 6);
  auto v = grid.vertex_of(Word::parse("ab", 2));
  REQUIRE(v);
  auto geos2 = geodesics_between(grid, 0, *v);
  CHECK(geos2.paths.size() == 2);  // "ab" and "ba"

  auto self = geodesics_between(grid, 5, 5);
  CHECK(self.paths.size() == 1);
  CHECK(self.paths[0].length() == 0);
}

TEST_CASE("free-group geodesics are always unique") {
  CayleyBall tree = CayleyBall::build(f2(), 6);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    int u = static_cast<int>(rng() % tree.vertex_count());
    int v = static_cast<int>(rng() % tree.vertex_count());
    auto d = tree.distance(u, v);
    if (!d) continue;
    if (tree.depth(u) + *d > tree.radius() || tree.depth(v) + *d > tree.radius()) continue;
    CHECK(geodesics_between(tree, u, v).paths.size() == 1);
  }
}

TEST_CASE("delta: trees are 0-thin") {
  CayleyBall ball = CayleyBall::build(f2(), 5);
  DeltaReport rep = estimate_delta(ball);
  CHECK(rep.delta_hat == 0);
  CHECK(rep.triangles_measured > 0);
}

TEST_CASE("delta: the grid control grows from radius 4 to 6") {
  CayleyBall b4 = CayleyBall::build(z2(), 4);
  CayleyBall b5 = CayleyBall::build(z2(), 5);
  CayleyBall b6 = CayleyBall::build(z2(), 6);
  DeltaReport r4 = estimate_delta(b4);
  DeltaReport r5 = estimate_delta(b5);
  DeltaReport r6 = estimate_delta(b6);
  CHECK(r6.delta_hat >= 2);
  CHECK(r4.delta_hat < r6.delta_hat);
  // monotone in the window radius
  CHECK(r4.delta_hat <= r5.delta_hat);
  CHECK(r5.delta_hat <= r6.delta_hat);
}

TEST_CASE("delta: sampled mode never exceeds the exhaustive value") {
  CayleyBall ball = CayleyBall::build(z2(), 5);
  DeltaReport full = estimate_delta(ball);
  DeltaMode mode;
  mode.exhaustive = false;
  mode.sample_count = 500;
  mode.seed = 31337;
  DeltaReport sampled = estimate_delta(ball, mode);
  CHECK(sampled.delta_hat <= full.delta_hat);
  CHECK(sampled.sampled);
  CHECK(sampled.seed == 31337);
}

TEST_CASE("delta: genus-2 window value is recorded") {
  CayleyBall ball = CayleyBall::build(genus2(), 3);
  DeltaReport rep = estimate_delta(ball);
  CHECK(rep.delta_hat == 0);  // radius-3 window is still a tree
  DeltaMode mode;
  mode.exhaustive = false;
  mode.sample_count = 1000;
  mode.seed = 7;
  CHECK(estimate_delta(ball, mode).delta_hat <= rep.delta_hat);
}

TEST_CASE("local quasigeodesic checks") {
  CayleyBall tree = CayleyBall::build(f2(), 6);

  auto geodesic = PathInBall::trace(tree, 0, Word::parse("abab", 2));
  REQUIRE(geodesic);
  // geodesics pass every admissible parameter set
  CHECK(check_local_quasigeodesic(tree, *geodesic, {Fraction(1), Fraction(0), {}}).pass);
  CHECK(check_local_quasigeodesic(tree, *geodesic, {Fraction(1, 3), Fraction(2), Fraction(3)}).pass);

  // backtracking fails (1, 1/2, infinity) with the full path as witness
  auto back = PathInBall::trace(tree, 0, Word::parse("aA", 2));
  REQUIRE(back);
  auto qc = check_local_quasigeodesic(tree, *back, {Fraction(1), Fraction(1, 2), {}});
  CHECK(!qc.pass);
  CHECK(qc.witness_to - qc.witness_from == 2);

  // the staircase is geodesic in the grid
  CayleyBall grid = CayleyBall::build(z2(), 6);
  auto stair = PathInBall::trace(grid, 0, Word::parse("ababab", 2));
  REQUIRE(stair);
  CHECK(check_local_quasigeodesic(grid, *stair, {Fraction(1), Fraction(0), {}}).pass);
}

TEST_CASE("staircase on genus-2 checked against exhaustive distance") {
  CayleyBall ball = CayleyBall::build(genus2(), 6);
  Word stair = Word::parse("ababab", 4);
  auto path = PathInBall::trace(ball, 0, stair);
  REQUIRE(path);
  auto qc = check_local_quasigeodesic(ball, *path, {Fraction(1), Fraction(0), {}});
  auto end = ball.vertex_of(stair);
  REQUIRE(end);
  // cross-check the verdict: the path is a (1,0)-quasigeodesic iff every
  // subpath endpoint pair realizes its length as the exact distance
  bool geodesic_everywhere = true;
  for (std::size_t i = 0; i <= path->length(); ++i) {
    for (std::size_t j = i; j <= path->length(); ++j) {
      auto d = ball.distance(path->vertices[i], path->vertices[j]);
      REQUIRE(d);
      if (*d != static_cast<int>(j - i)) geodesic_everywhere = false;
    }
  }
  CHECK(qc.pass == geodesic_everywhere);
  CHECK(qc.pass);  // no relation shortens an (ab)^n word at this scale
}

TEST_CASE("ball json export is stable and structured") {
  CayleyBall ball = CayleyBall::build(f2(), 2);
  Json j = ball_to_json(ball);
  CHECK(j["vertex_count"] == 17);
  CHECK(j["sphere_sizes"].size() == 3);
  CHECK(dump_deterministic(j) == dump_deterministic(ball_to_json(ball)));
}

TEST_CASE("vertex budget raises a window error") {
  BallBuildOptions opts;
  opts.max_vertices = 10;
  CHECK_THROWS_AS(CayleyBall::build(f2(), 4, opts), WindowError);
}
