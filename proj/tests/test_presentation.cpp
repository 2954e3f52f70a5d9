#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pingpong/cayley_ball.hpp"
#include "pingpong/presentation.hpp"

using namespace pingpong;

namespace {

Presentation pres(const std::string& text) { return parse_presentation(text); }

}  // namespace

TEST_CASE("parse free and named subgroups") {
  Presentation p = pres("gens: a b\nsub: H = ab, ba\n");
  CHECK(p.alphabet == 2);
  CHECK(p.kind == OracleKind::FreeGroup);
  CHECK(p.subgroups.at("H").size() == 2);
}

TEST_CASE("parse genus-2 as Dehn presentation") {
  Presentation p = pres("gens: a b c d\nrel: abABcdCD\n");
  CHECK(p.kind == OracleKind::DehnC16);
  CHECK(p.relators.size() == 1);
}

TEST_CASE("parse free-abelian control") {
  Presentation p = pres("gens: a b\nrel: abAB\n");
  CHECK(p.kind == OracleKind::FreeAbelianControl);
}

TEST_CASE("parse errors name the line") {
  try {
    pres("gens: a b\nrel: xy\n");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(pres("rel: ab\n"), ParseError);
  CHECK_THROWS_AS(pres("gens: a b\nrel: aA\n"), ParseError);  // empty after reduction
}

TEST_CASE("length-1 relator is rejected as unsupported") {
  CHECK_THROWS_AS(pres("gens: a\nrel: a\n"), UnsupportedPresentation);
}

TEST_CASE("non small cancellation presentations are rejected") {
  // abab is a proper power; occurrence-level pieces reach ratio >= 1/2
  CHECK_THROWS_AS(pres("gens: a b\nrel: abab\n"), UnsupportedPresentation);
  // three-generator commutator is not free-abelian (pair coverage fails)
  CHECK_THROWS_AS(pres("gens: a b c\nrel: abAB\n"), UnsupportedPresentation);
}

TEST_CASE("piece enumeration") {
  Word genus2 = Word::parse("abABcdCD", 4);
  PieceReport rep = check_metric_small_cancellation({genus2});
  CHECK(rep.pass);
  CHECK(rep.max_ratio == Fraction(1, 8));
  CHECK(rep.witness.size() == 1);

  Word sq = Word::parse("abab", 2);
  PieceReport rep2 = check_metric_small_cancellation({sq});
  CHECK(!rep2.pass);
  CHECK(rep2.max_ratio >= Fraction(1, 2));

  PieceReport rep3 = check_metric_small_cancellation({});
  CHECK(rep3.pass);
  CHECK(rep3.max_ratio == Fraction(0));
}

TEST_CASE("dehn reduction on the genus-2 presentation") {
  WordOracle oracle(pres("gens: a b c d\nrel: abABcdCD\n"));
  CHECK(oracle.reduce(Word::parse("abABcdCD", 4)).empty());
  CHECK(oracle.is_trivial(Word::parse("abABcdCD", 4)));
  // a >half prefix is replaced by the inverse complement
  CHECK(oracle.reduce(Word::parse("abABc", 4)).str() == "dcD");
  CHECK(!oracle.is_trivial(Word::parse("ab", 4)));
}

TEST_CASE("dehn reduce never lengthens and is a fixed point") {
  WordOracle oracle(pres("gens: a b c d\nrel: abABcdCD\n"));
  std::mt19937_64 rng(777);
  for (int i = 0; i < 300; ++i) {
    std::vector<Letter> ls;
    int len = static_cast<int>(rng() % 13);
    for (int j = 0; j < len; ++j)
      ls.emplace_back(static_cast<unsigned>(rng() % 4), rng() % 2 == 0);
    Word u{std::move(ls)};
    Word r = oracle.reduce(u);
    CHECK(r.size() <= u.size());
    CHECK(oracle.reduce(r) == r);
  }
}

TEST_CASE("free group oracle is free reduction") {
  WordOracle oracle(pres("gens: a b\n"));
  CHECK(oracle.reduce(Word::parse("abAB", 2)).str() == "abAB");
  CHECK(oracle.is_trivial(Word::parse("abBA", 2)));
}

TEST_CASE("free-abelian oracle uses exponent normal form") {
  WordOracle oracle(pres("gens: a b\nrel: abAB\n"));
  CHECK(oracle.is_trivial(Word::parse("abAB", 2)));
  CHECK(oracle.reduce(Word::parse("baBA", 2)).empty());
  CHECK(oracle.reduce(Word::parse("bab", 2)).str() == "abb");
  CHECK(!oracle.is_trivial(Word::parse("ab", 2)));
}

TEST_CASE("dehn oracle agrees with the ball-walk oracle exhaustively to length 8") {
  // Cross-oracle agreement on the genus-2 presentation: a word is
  // Dehn-trivial iff it walks to a closed path at the identity. The walk
  // needs radius |w|/2 + 1 = 5 for |w| <= 8.
  WordOracle oracle(pres("gens: a b c d\nrel: abABcdCD\n"));
  CayleyBall ball = CayleyBall::build(oracle, 5);

  std::int64_t closed = 0, checked = 0;
  std::vector<Letter> stack;
  // depth-first over freely reduced words of length 1..8
  std::function<void()> dfs = [&]() {
    if (!stack.empty()) {
      Word u{std::vector<Letter>(stack.begin(), stack.end())};
      bool walk_trivial = ball.walk_is_trivial(u);
      bool dehn_trivial = oracle.is_trivial(u);
      ++checked;
      if (walk_trivial) ++closed;
      REQUIRE(walk_trivial == dehn_trivial);
    }
    if (stack.size() >= 8) return;
    for (int lr = 0; lr < 8; ++lr) {
      Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      if (!stack.empty() && stack.back() == l.inverse()) continue;
      stack.push_back(l);
      dfs();
      stack.pop_back();
    }
  };
  dfs();
  // the only trivial reduced words of length <= 8 are the 16 relator circle reads
  CHECK(closed == 16);
  CHECK(checked > 7'000'000);
}

TEST_CASE("triviality respects multiplication against ball distance") {
  WordOracle oracle(pres("gens: a b c d\nrel: abABcdCD\n"));
  CayleyBall ball = CayleyBall::build(oracle, 4);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    std::vector<Letter> lu, lv;
    for (int j = 0; j < 3; ++j) {
      lu.emplace_back(static_cast<unsigned>(rng() % 4), rng() % 2 == 0);
      lv.emplace_back(static_cast<unsigned>(rng() % 4), rng() % 2 == 0);
    }
    Word u{std::move(lu)}, v{std::move(lv)};
    auto vu = ball.vertex_of(oracle.reduce(u.inverse()));
    auto vv = ball.vertex_of(oracle.reduce(v));
    REQUIRE(vu);
    REQUIRE(vv);
    CHECK(oracle.is_trivial(u.concat(v)) == (*vu == *vv));
  }
}

TEST_CASE("presentation hash is stable") {
  Presentation p1 = pres("gens: a b\n");
  Presentation p2 = pres("gens: a b\n# comment\n");
  CHECK(p1.hash() == p2.hash());
  Presentation p3 = pres("gens: a b\nrel: abAB\n");
  CHECK(p1.hash() != p3.hash());
}
