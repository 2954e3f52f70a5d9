#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pingpong/cayley_ball.hpp"
#include "pingpong/presentation.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

struct SubgroupSpec {
  std::string name;
  std::vector<Word> generators;
};

// Folded subgroup graph (core of the cover) over a free ambient group.
// Membership of a reduced word = the trace from the base returns to it.
class FoldedGraph {
 public:
  static FoldedGraph from_generators(const std::vector<Word>& gens, int alphabet);
  static FoldedGraph intersection(const FoldedGraph& a, const FoldedGraph& b);

  int alphabet() const { return alphabet_; }
  int state_count() const { return static_cast<int>(next_.size()); }
  bool accepts(const Word& w) const;  // free-reduces first

  // Shortest nonempty reduced word labeling a closed path at the base, up
  // to maxlen; the girth seen from the base.
  std::optional<Word> shortest_nontrivial(int maxlen) const;
  // All nonempty reduced closed-path labels at the base with length <= maxlen.
  std::vector<Word> elements_up_to(int maxlen) const;

 private:
  void add_loop(const Word& w);
  void fold();
  int alphabet_ = 0;
  std::vector<std::vector<int>> next_;  // state x letter-rank -> state | -1
};

enum class Membership { Yes, No, Unknown };

// Subgroup membership: exact folded-graph mode over free ambient groups, or
// a ball-bounded mode that answers only inside its window.
class MembershipOracle {
 public:
  static MembershipOracle folded(SubgroupSpec spec, const WordOracle& oracle);
  static MembershipOracle from_folded(SubgroupSpec spec, FoldedGraph graph);
  // Window elements reachable from 1 by generator multiplications inside
  // the ball. Exact within the window for subgroups whose elements are
  // reachable without leaving it (verified by the cross-checks in tests).
  static MembershipOracle window(SubgroupSpec spec, const CayleyBall& ball);
  // Explicit window element set (used for intersections in bounded mode).
  static MembershipOracle window_set(SubgroupSpec spec, const CayleyBall& ball,
                                     std::vector<int> elements);

  const SubgroupSpec& spec() const { return spec_; }
  bool is_exact() const { return folded_ != nullptr; }
  const FoldedGraph* folded_graph() const { return folded_.get(); }

  Membership contains(const Word& w) const;

  // Subgroup elements inside the given ball, as sorted vertex ids.
  std::vector<int> window_elements(const CayleyBall& ball) const;

 private:
  SubgroupSpec spec_;
  std::shared_ptr<const FoldedGraph> folded_;
  const CayleyBall* ball_ = nullptr;   // bounded mode
  std::vector<int> elements_;          // bounded mode, sorted
};

// Exact intersection for folded mode; window-set intersection otherwise.
MembershipOracle intersect_subgroups(const MembershipOracle& a, const MembershipOracle& b,
                                     const CayleyBall& ball);

struct MuReport {
  int mu_hat = 0;
  int window_radius = 0;
  std::int64_t pairs_measured = 0;
  std::int64_t pairs_skipped = 0;  // inadmissible or unconfirmable measurements
};

// Quasiconvexity estimate: max distance from a geodesic vertex to the
// subgroup, over pairs of subgroup elements whose geodesics provably stay
// in the window of radius effective_radius (default: the whole ball).
MuReport estimate_mu(const MembershipOracle& sub, const CayleyBall& ball,
                     int effective_radius = -1);

enum class CosetSide { LeftOnly, RightOnly, Both };

// Shortest element of G0 h G0 (or the one-sided coset) representable in
// the window; ties broken shortlex. Minimality is certified against the
// enumerated window elements of G0.
Word shortest_double_coset_rep(const Word& h, const MembershipOracle& g0,
                               const CayleyBall& ball, CosetSide side = CosetSide::Both);

// The ball of the relative Cayley graph: vertices are right cosets Hg,
// an edge (Hg, x) ends at Hgx; a path from H*1 is closed iff its label
// lies in H. Vertex 0 is H*1.
class RelativeBall {
 public:
  static RelativeBall build(const MembershipOracle& sub, int radius, int alphabet);

  int radius() const { return radius_; }
  int vertex_count() const { return static_cast<int>(reps_.size()); }
  const Word& rep(int v) const { return reps_[v]; }
  int depth(int v) const { return static_cast<int>(reps_[v].size()); }
  int step(int v, Letter l) const { return edges_[v][l.rank()]; }
  std::optional<int> walk(int from, const Word& w) const;
  int vertices_within(int r) const;  // closed ball vertex count

 private:
  int radius_ = 0;
  std::vector<Word> reps_;
  std::vector<std::vector<int>> edges_;
  std::vector<int> sphere_start_;
};

struct RelativeBallConstants {
  int m = 0;  // vertices of the (mu + 2 delta)-ball around H*1
  int M = 0;  // m^2 + 1
};

RelativeBallConstants relative_ball_constants(const RelativeBall& rel, int mu, int delta);

struct MalnormalReport {
  bool violation = false;
  Word conjugator;     // g with g not in H and g h g^-1 in H
  Word witness;        // the h
  int window_radius = 0;
  std::int64_t pairs_skipped = 0;  // bounded-mode membership unknowns
};

// Window search for g not in H with a nontrivial h in H conjugated back
// into H. A clean verdict is only as strong as the window.
MalnormalReport check_malnormal(const MembershipOracle& sub, const CayleyBall& ball);

}  // namespace pingpong
