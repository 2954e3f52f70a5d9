#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "pingpong/presentation.hpp"
#include "pingpong/rational.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

struct BallBuildOptions {
  std::size_t max_vertices = 2'000'000;  // resource budget
  bool bucketed = true;   // bucket candidates by abelianization before pairwise tests
  bool complete_boundary = true;  // also resolve edges between radius-R vertices
};

// The radius-R ball of the Cayley graph. Vertex 0 is the identity; the
// canonical word of a vertex is its shortlex-least geodesic label, so
// |word(v)| equals the BFS depth of v. Edges carry signed letters; a target
// of -1 means the neighbor lies outside the ball.
class CayleyBall {
 public:
  static CayleyBall build(const WordOracle& oracle, int radius, BallBuildOptions opts = {});

  const WordOracle& oracle() const { return *oracle_; }
  int radius() const { return radius_; }
  int alphabet() const { return alphabet_; }
  int vertex_count() const { return static_cast<int>(words_.size()); }
  const Word& word(int v) const { return words_[v]; }
  int depth(int v) const { return static_cast<int>(words_[v].size()); }
  int sphere_size(int k) const;

  int step(int v, Letter l) const { return edges_[v][l.rank()]; }  // -1 = outside
  // Neighbor targets indexed by Letter::rank; -1 entries point outside.
  std::span<const int> neighbors(int v) const { return edges_[v]; }
  // Walks a word edge by edge; nullopt once the walk leaves the ball.
  std::optional<int> walk(int from, const Word& w) const;
  std::optional<int> vertex_of(const Word& w) const { return walk(0, w); }

  // Truncated BFS distances from u, up to `horizon` steps; -1 = not reached.
  std::vector<int> bfs_from(int u, int horizon) const;

  // Exact Cayley distance, confirmed via the containment guard
  // d(1,x) + d(x,y) <= R from either end; nullopt when unconfirmable.
  std::optional<int> distance(int u, int v) const;

  // Distance from x to a nonempty set of vertices (sorted ids). `exact` is
  // true when no unreached in-ball target or out-of-ball detour could beat
  // the value; if set_extends_outside, the set may continue beyond the ball.
  struct SetDistance {
    int value = 0;
    bool exact = false;
  };
  SetDistance distance_to_set(int x, const std::vector<int>& targets,
                              bool set_extends_outside) const;

  // Decides triviality of w by walking it with early exit; requires
  // radius >= |w|/2 + 1, so closing walks never leave the known region.
  bool walk_is_trivial(const Word& w) const;

 private:
  const WordOracle* oracle_ = nullptr;
  int radius_ = 0;
  int alphabet_ = 0;
  std::vector<Word> words_;
  std::vector<std::vector<int>> edges_;
  std::vector<int> sphere_start_;  // sphere_start_[k] = first vertex of depth k
};

// A path inside the ball, given by a start vertex and its letter sequence.
struct PathInBall {
  int start = 0;
  std::vector<Letter> letters;
  std::vector<int> vertices;  // size letters.size() + 1

  std::size_t length() const { return letters.size(); }
  Word label() const { return Word(letters); }
  // nullopt when the walk leaves the ball.
  static std::optional<PathInBall> trace(const CayleyBall& ball, int start, const Word& w);
};

struct GeodesicEnumeration {
  std::vector<PathInBall> paths;
  bool truncated = false;
};

// All geodesics from u to v (up to cap). Throws WindowError when the
// containment guard cannot confirm that every geodesic stays in the ball.
GeodesicEnumeration geodesics_between(const CayleyBall& ball, int u, int v,
                                      std::size_t cap = 4096);

struct DeltaMode {
  bool exhaustive = true;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
};

struct DeltaReport {
  int delta_hat = 0;
  std::int64_t triangles_measured = 0;
  std::int64_t triangles_skipped = 0;  // unconfirmable distance measurements
  bool sampled = false;
  std::uint64_t seed = 0;
};

// Max over admissible geodesic triangles in the window of the thinness of
// each side against the union of the other two. Closed neighborhoods.
DeltaReport estimate_delta(const CayleyBall& ball, DeltaMode mode = {});

// lambda in (0,1], epsilon >= 0; L absent means the global condition.
struct QuasiParams {
  Fraction lambda{1};
  Fraction epsilon{0};
  std::optional<Fraction> L;  // nullopt = infinity
};

struct QuasiCheck {
  bool pass = true;
  std::size_t witness_from = 0;  // violating subpath [from, to) in letters
  std::size_t witness_to = 0;
};

// Checks d(endpoints) >= lambda * |p'| - epsilon for every subpath p' with
// |p'| < L (every subpath when L is absent). The paper-style strict form
// would reject genuine geodesics at (1, 0), so the non-strict form its
// proofs actually establish is used. Throws WindowError if some required
// distance cannot be confirmed exact.
QuasiCheck check_local_quasigeodesic(const CayleyBall& ball, const PathInBall& p,
                                     const QuasiParams& q);

}  // namespace pingpong
