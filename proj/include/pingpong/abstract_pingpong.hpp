#pragma once

#include <string>
#include <vector>

#include "pingpong/cayley_ball.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

// A finite set S with a partial action of named group elements, plus the
// element lists and the designated disjoint subsets the ping-pong setup
// needs. Actions are partial so a Cayley-ball window can act on itself.
struct AbstractPingPongInstance {
  int set_size = 0;
  std::vector<std::string> element_names;
  std::vector<std::vector<int>> action;  // element x point -> point | -1 undefined
  std::vector<int> h_elements;           // indices into element_names (include identity)
  std::vector<int> k_elements;
  std::vector<int> g0_elements;          // listed intersection, subset of both
  std::vector<int> s_h, s_k;             // disjoint nonempty subsets of S
};

enum class PingPongOutcome { HypothesesFail, IndexGuard, Verified };

struct PingPongReport {
  PingPongOutcome outcome = PingPongOutcome::Verified;
  std::string reason;
  int maxsyll = 0;
  int index_h = 0;  // cosets of G0 witnessed among the listed elements
  int index_k = 0;
  std::int64_t products_checked = 0;
};

// Checks disjointness and nonemptiness of S_H and S_K, the two mapping
// conditions (K \ G0 maps S_K into S_H, H \ G0 maps S_H into S_K), and the
// witnessed coset indices. When both indices equal 2 the conclusion is not
// claimed (the lemma has counterexamples there); otherwise every
// alternating product of at most maxsyll syllables with odd syllable count
// must visibly move some point of S_H.
PingPongReport abstract_ping_pong_check(const AbstractPingPongInstance& inst, int maxsyll);

// The window instance: ball vertices acted on by left multiplication by
// short powers of h and k. S_H collects reduced words starting with a
// k-side letter and vice versa, matching the mapping-condition orientation.
AbstractPingPongInstance make_left_multiplication_instance(const CayleyBall& ball,
                                                           const Word& h, const Word& k,
                                                           int max_power);

}  // namespace pingpong
