#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pingpong/certifier.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

using Perm = std::vector<int>;  // images of 0..d-1; always a bijection

Perm identity_perm(int degree);
Perm compose(const Perm& first, const Perm& second);  // apply first, then second
Perm inverse_perm(const Perm& p);
int perm_order(const Perm& p);
// Cycle notation with 1-based points, e.g. "(1 2 3)(4 5)".
Perm parse_cycles(const std::string& text, int degree);
std::string cycles_str(const Perm& p);

// A homomorphism from the free group of the given rank to a permutation
// group, one image per generator. Its kernel is a finite-index subgroup.
struct FiniteQuotientSpec {
  int rank = 0;
  int degree = 0;
  std::vector<Perm> images;
};

Perm image_of_word(const FiniteQuotientSpec& spec, const Word& w);

struct DepthReport {
  int depth = 0;   // length of the shortest nonempty reduced kernel word
  Word witness;
  bool verified = false;  // exhaustive re-check of all shorter reduced words
};

// BFS over (permutation, last letter) states; exact, with a shortlex-least
// witness. Throws WindowError if no kernel element exists within maxlen.
DepthReport shortest_kernel_element(const FiniteQuotientSpec& spec, int maxlen = 64);

// Exhaustively confirms that no nonempty reduced word shorter than n maps
// to the identity.
bool verify_depth(const FiniteQuotientSpec& spec, int n);

struct QuotientSearchBudget {
  int max_degree = 10;
  int tries_per_degree = 400;
  std::uint64_t seed = 1;
};

struct DeepQuotientResult {
  bool found = false;
  FiniteQuotientSpec spec;
  DepthReport report;
  std::int64_t candidates_tried = 0;
  std::uint64_t seed = 0;
};

// Searches permutation images of increasing degree (systematic candidates
// first, then seeded random ones) for a quotient whose kernel contains no
// nontrivial element shorter than n.
DeepQuotientResult find_deep_quotient(int rank, int n, QuotientSearchBudget budget = {});

// Wraps the kernel intersections H n ker = <h^s> and K n ker = <k^t> (s, t
// the orders of the images) into a certification instance. whole_k builds
// the malnormal one-sided variant with K entering whole.
PingPongInstance corollary_instance(const FiniteQuotientSpec& spec, const WordOracle& oracle,
                                    const CayleyBall& ball, const Word& h, const Word& k,
                                    bool whole_k);

}  // namespace pingpong
