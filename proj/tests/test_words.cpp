#include <random>

#include "doctest.h"
#include "pingpong/words.hpp"

using namespace pingpong;

namespace {

Word w(const std::string& s, int alphabet = 2) { return Word::parse(s, alphabet); }

Word random_word(std::mt19937_64& rng, int alphabet, int maxlen) {
  std::vector<Letter> ls;
  int len = static_cast<int>(rng() % (maxlen + 1));
  for (int i = 0; i < len; ++i) {
    ls.emplace_back(static_cast<unsigned>(rng() % alphabet), rng() % 2 == 0);
  }
  return Word(std::move(ls));
}

}  // namespace

TEST_CASE("word parsing and text round trip") {
  CHECK(w("abAB").str() == "abAB");
  CHECK(w("").empty());
  CHECK(w("a B a").str() == "aBa");  // whitespace ignored
  CHECK_THROWS_AS(Word::parse("c", 2), ParseError);
  CHECK_THROWS_AS(Word::parse("a!", 2), ParseError);
}

TEST_CASE("free reduction") {
  CHECK(free_reduce(w("aAb")).str() == "b");
  CHECK(free_reduce(w("")).str() == "");
  CHECK(free_reduce(w("abBa")).str() == "aa");
  CHECK(free_reduce(w("abBA")).str() == "");
}

TEST_CASE("invert") {
  CHECK(invert(w("ab")).str() == "BA");
  CHECK(invert(w("")).str() == "");
  CHECK(invert(w("aa")).str() == "AA");
}

TEST_CASE("cyclic reduction") {
  auto [core1, conj1] = cyclically_reduce(w("abA"));
  CHECK(core1.str() == "b");
  CHECK(conj1.str() == "a");
  auto [core2, conj2] = cyclically_reduce(w("ab"));
  CHECK(core2.str() == "ab");
  CHECK(conj2.str() == "");
  auto [core3, conj3] = cyclically_reduce(w("abBA"));
  CHECK(core3.str() == "");
  CHECK(conj3.str() == "");
}

TEST_CASE("reduction properties on random words") {
  std::mt19937_64 rng(12345);
  for (int i = 0; i < 500; ++i) {
    Word u = random_word(rng, 3, 12);
    Word v = random_word(rng, 3, 12);
    Word ru = free_reduce(u);
    // idempotent and length-nonincreasing
    CHECK(free_reduce(ru) == ru);
    CHECK(ru.size() <= u.size());
    // subadditivity
    CHECK(free_reduce(u.concat(v)).size() <= free_reduce(u).size() + free_reduce(v).size());
    // involution and cancellation against the inverse
    CHECK(invert(invert(u)) == u);
    CHECK(free_reduce(u.concat(invert(u))).empty());
    // cyclic reduction reassembles to the same element
    auto [core, conj] = cyclically_reduce(u);
    Word back = free_reduce(conj.concat(core).concat(invert(conj)));
    CHECK(back == ru);
    CHECK(core.is_reduced());
    if (core.size() >= 2) CHECK(core[0] != core[core.size() - 1].inverse());
  }
}

TEST_CASE("powers via cyclic reduction") {
  CHECK(power(w("abA"), 3).str() == "abbbA");
  CHECK(power(w("ab"), -2).str() == "BABA");
  CHECK(power(w("a"), 0).str() == "");
}

TEST_CASE("shortlex order") {
  CHECK(shortlex_less(w("b"), w("aa")));
  CHECK(shortlex_less(w("a"), w("A")));
  CHECK(shortlex_less(w("A"), w("b")));
  CHECK(!shortlex_less(w("ab"), w("ab")));
}
