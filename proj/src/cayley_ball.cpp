#include "pingpong/cayley_ball.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <random>
#include <set>
#include <sstream>

namespace pingpong {

namespace {

std::string ab_key(const std::vector<std::int64_t>& v, int parity) {
  std::ostringstream os;
  os << parity;
  for (auto x : v) os << ':' << x;
  return os.str();
}

}  // namespace

CayleyBall CayleyBall::build(const WordOracle& oracle, int radius, BallBuildOptions opts) {
  CayleyBall ball;
  ball.oracle_ = &oracle;
  ball.radius_ = radius;
  ball.alphabet_ = oracle.alphabet();
  const int deg = 2 * ball.alphabet_;

  ball.words_.push_back(Word());
  ball.edges_.push_back(std::vector<int>(deg, -1));
  ball.sphere_start_ = {0, 1};

  const bool keyed = oracle.kind() != OracleKind::DehnC16;
  std::unordered_map<std::string, int> index;  // canonical reduced word -> id
  // For DehnC16: abelianization buckets per layer, verified pairwise.
  std::unordered_map<std::string, std::vector<int>> buckets;

  auto reduced_key = [&](const Word& w) { return oracle.reduce(w).str(); };
  auto bucket_key = [&](const Word& w) {
    return ab_key(oracle.abelianization(w), static_cast<int>(w.size()) % 2);
  };

  if (keyed) {
    index[""] = 0;
  } else {
    buckets[bucket_key(Word())].push_back(0);
  }

  auto find_existing = [&](const Word& w) -> int {
    if (keyed) {
      auto it = index.find(reduced_key(w));
      return it == index.end() ? -1 : it->second;
    }
    // A candidate of length n can only name a vertex of depth n-1 or n.
    const int min_depth = static_cast<int>(w.size()) - 1;
    auto it = buckets.find(bucket_key(w));
    if (it == buckets.end()) return -1;
    if (opts.bucketed) {
      for (int v : it->second) {
        if (ball.depth(v) < min_depth) continue;
        if (oracle.equal(w, ball.words_[v])) return v;
      }
      return -1;
    }
    // Cross-check strategy: plain pairwise scan, no bucket shortcut.
    for (std::size_t v = 0; v < ball.words_.size(); ++v) {
      if (ball.depth(static_cast<int>(v)) < min_depth) continue;
      if (oracle.equal(w, ball.words_[v])) return static_cast<int>(v);
    }
    return -1;
  };
  auto register_vertex = [&](const Word& w, int id) {
    if (keyed) {
      index[reduced_key(w)] = id;
    } else {
      buckets[bucket_key(w)].push_back(id);
    }
  };

  int layer_begin = 0, layer_end = 1;
  for (int layer = 0; layer < radius; ++layer) {
    for (int v = layer_begin; v < layer_end; ++v) {
      for (int lr = 0; lr < deg; ++lr) {
        if (ball.edges_[v][lr] != -1) continue;
        Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
        Word cand = ball.words_[v].concat(Word({l}));
        int target = find_existing(cand);
        if (target == -1) {
          if (ball.words_.size() >= opts.max_vertices)
            throw WindowError("ball vertex budget exceeded at radius " +
                              std::to_string(layer));
          target = static_cast<int>(ball.words_.size());
          ball.words_.push_back(free_reduce(cand));
          ball.edges_.push_back(std::vector<int>(deg, -1));
          register_vertex(cand, target);
        }
        ball.edges_[v][lr] = target;
        ball.edges_[target][Letter(l.gen, !l.inv).rank()] = v;
      }
    }
    layer_begin = layer_end;
    layer_end = static_cast<int>(ball.words_.size());
    ball.sphere_start_.push_back(layer_end);
  }

  if (opts.complete_boundary && radius > 0) {
    // Resolve edges between two radius-R vertices so that in-ball walks are
    // exact: a remaining -1 then genuinely means depth R+1.
    for (int v = layer_begin; v < layer_end; ++v) {
      for (int lr = 0; lr < deg; ++lr) {
        if (ball.edges_[v][lr] != -1) continue;
        Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
        Word cand = ball.words_[v].concat(Word({l}));
        int target = find_existing(cand);
        if (target != -1 && ball.depth(target) == radius) {
          ball.edges_[v][lr] = target;
          ball.edges_[target][Letter(l.gen, !l.inv).rank()] = v;
        }
      }
    }
  }
  return ball;
}

int CayleyBall::sphere_size(int k) const {
  if (k < 0 || k + 1 >= static_cast<int>(sphere_start_.size())) return 0;
  return sphere_start_[k + 1] - sphere_start_[k];
}

std::optional<int> CayleyBall::walk(int from, const Word& w) const {
  int cur = from;
  for (Letter l : w) {
    cur = step(cur, l);
    if (cur == -1) return std::nullopt;
  }
  return cur;
}

std::vector<int> CayleyBall::bfs_from(int u, int horizon) const {
  std::vector<int> dist(words_.size(), -1);
  dist[u] = 0;
  std::deque<int> queue{u};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (dist[v] >= horizon) continue;
    for (int t : edges_[v]) {
      if (t != -1 && dist[t] == -1) {
        dist[t] = dist[v] + 1;
        queue.push_back(t);
      }
    }
  }
  return dist;
}

std::optional<int> CayleyBall::distance(int u, int v) const {
  for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
    int horizon = radius_ - depth(a);
    if (horizon < 0) continue;
    auto dist = bfs_from(a, horizon);
    if (dist[b] != -1) return dist[b];  // depth(a) + d <= R confirms exactness
  }
  return std::nullopt;
}

CayleyBall::SetDistance CayleyBall::distance_to_set(int x, const std::vector<int>& targets,
                                                    bool set_extends_outside) const {
  SetDistance out;
  const int dx = depth(x);
  const int horizon = radius_ - dx;
  std::vector<char> is_target(words_.size(), 0);
  for (int t : targets) is_target[t] = 1;

  int found = -1;
  std::vector<int> dist(words_.size(), -1);
  dist[x] = 0;
  std::deque<int> queue{x};
  if (is_target[x]) found = 0;
  while (found != 0 && !queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (dist[v] >= horizon || (found != -1 && dist[v] >= found)) continue;
    for (int t : edges_[v]) {
      if (t == -1 || dist[t] != -1) continue;
      dist[t] = dist[v] + 1;
      if (is_target[t] && (found == -1 || dist[t] < found)) found = dist[t];
      queue.push_back(t);
    }
  }

  // Lower bound on the distance to anything the search did not reach:
  // in-ball unreached targets are beyond the horizon; out-of-ball routes
  // must climb to depth R+1 and back down. Reached targets carry exact
  // distances (they lie within the guard horizon) and cannot beat `found`.
  int bound = horizon + 1;
  for (int t : targets) {
    if (dist[t] != -1) continue;
    bound = std::min(bound, 2 * (radius_ + 1) - dx - depth(t));
  }
  if (set_extends_outside) bound = std::min(bound, radius_ + 1 - dx);

  if (found == -1) {
    out.value = bound;
    out.exact = false;
    return out;
  }
  out.value = found;
  out.exact = found <= bound;
  return out;
}

bool CayleyBall::walk_is_trivial(const Word& w) const {
  const int n = static_cast<int>(w.size());
  if (2 * (radius_ - 1) < n)
    throw WindowError("walk_is_trivial: radius " + std::to_string(radius_) +
                      " too small for a word of length " + std::to_string(n));
  int cur = 0;
  for (int i = 0; i < n; ++i) {
    int remaining = n - i;
    if (depth(cur) > remaining) return false;  // cannot close any more
    cur = step(cur, w[i]);
    if (cur == -1)
      throw WindowError("walk_is_trivial: walk left the ball unexpectedly");
  }
  return cur == 0;
}

std::optional<PathInBall> PathInBall::trace(const CayleyBall& ball, int start, const Word& w) {
  PathInBall p;
  p.start = start;
  p.vertices.push_back(start);
  int cur = start;
  for (Letter l : w) {
    cur = ball.step(cur, l);
    if (cur == -1) return std::nullopt;
    p.letters.push_back(l);
    p.vertices.push_back(cur);
  }
  return p;
}

GeodesicEnumeration geodesics_between(const CayleyBall& ball, int u, int v, std::size_t cap) {
  auto d = ball.distance(u, v);
  if (!d) throw WindowError("geodesics_between: radius too small to bound geodesics");
  if (ball.depth(u) + *d > ball.radius() || ball.depth(v) + *d > ball.radius())
    throw WindowError("geodesics_between: radius too small to contain all geodesics");

  GeodesicEnumeration out;
  if (u == v) {
    PathInBall p;
    p.start = u;
    p.vertices.push_back(u);
    out.paths.push_back(std::move(p));
    return out;
  }

  auto dist_v = ball.bfs_from(v, *d);
  // Descend the geodesic DAG from u toward v.
  PathInBall cur;
  cur.start = u;
  cur.vertices.push_back(u);
  const int deg = 2 * ball.alphabet();

  struct Frame {
    int vertex;
    int next_rank;
  };
  std::vector<Frame> stack{{u, 0}};
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.vertex == v) {
      if (out.paths.size() >= cap) {
        out.truncated = true;
        return out;
      }
      out.paths.push_back(cur);
      stack.pop_back();
      if (!cur.letters.empty()) {
        cur.letters.pop_back();
        cur.vertices.pop_back();
      }
      continue;
    }
    bool advanced = false;
    while (f.next_rank < deg) {
      int lr = f.next_rank++;
      Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      int t = ball.step(f.vertex, l);
      if (t == -1 || dist_v[t] == -1) continue;
      if (dist_v[t] != dist_v[f.vertex] - 1) continue;
      cur.letters.push_back(l);
      cur.vertices.push_back(t);
      stack.push_back({t, 0});
      advanced = true;
      break;
    }
    if (!advanced && !stack.empty() && stack.back().vertex == f.vertex &&
        stack.back().next_rank >= deg) {
      stack.pop_back();
      if (!cur.letters.empty()) {
        cur.letters.pop_back();
        cur.vertices.pop_back();
      }
    }
  }
  return out;
}

namespace {

// Exhaustive thinness measurement over admissible triangles, with geodesic
// enumerations cached per endpoint pair and a single early-stopping BFS per
// triangle point.
struct TriangleScanner {
  const CayleyBall& ball;
  std::int64_t measured = 0;
  std::int64_t skipped = 0;
  int delta_hat = 0;

  std::unordered_map<std::uint64_t, GeodesicEnumeration> geo_cache;
  std::vector<int> dist_scratch;   // -2 = untouched this round
  std::vector<int> touched;

  explicit TriangleScanner(const CayleyBall& b)
      : ball(b), dist_scratch(b.vertex_count(), -2) {}

  const GeodesicEnumeration& geodesics(int u, int v) {
    std::uint64_t key = (static_cast<std::uint64_t>(std::min(u, v)) << 32) |
                        static_cast<std::uint32_t>(std::max(u, v));
    auto it = geo_cache.find(key);
    if (it != geo_cache.end()) return it->second;
    auto g = geodesics_between(ball, std::min(u, v), std::max(u, v));
    return geo_cache.emplace(key, std::move(g)).first->second;
  }

  // BFS from x until every target geodesic has been hit or the horizon is
  // exhausted; returns per-geodesic min distance with an exactness flag.
  // A geodesic's value is exact when its hit beats the unreached bound.
  struct SideDistances {
    std::vector<int> value;
    bool exact = true;
  };
  SideDistances side_distances(int x, const std::vector<const PathInBall*>& geos) {
    const int dx = ball.depth(x);
    const int horizon = ball.radius() - dx;
    for (int t : touched) dist_scratch[t] = -2;
    touched.clear();

    dist_scratch[x] = 0;
    touched.push_back(x);
    std::deque<int> queue{x};
    // Expand fully up to horizon or until all geodesic minima are settled.
    std::vector<int> best(geos.size(), -1);
    auto update = [&](int v, int d) {
      for (std::size_t gi = 0; gi < geos.size(); ++gi) {
        if (best[gi] != -1) continue;
        for (int y : geos[gi]->vertices) {
          if (y == v) {
            best[gi] = d;
            break;
          }
        }
      }
    };
    update(x, 0);
    auto all_settled = [&] {
      for (int b : best)
        if (b == -1) return false;
      return true;
    };
    while (!queue.empty() && !all_settled()) {
      int v = queue.front();
      queue.pop_front();
      if (dist_scratch[v] >= horizon) continue;
      for (int t : ball.neighbors(v)) {
        if (t == -1 || dist_scratch[t] != -2) continue;
        dist_scratch[t] = dist_scratch[v] + 1;
        touched.push_back(t);
        update(t, dist_scratch[t]);
        queue.push_back(t);
      }
    }

    SideDistances out;
    out.value.resize(geos.size());
    for (std::size_t gi = 0; gi < geos.size(); ++gi) {
      if (best[gi] == -1) {
        out.exact = false;
        out.value[gi] = horizon + 1;
        continue;
      }
      // Unreached vertices of this geodesic cannot beat the found value if
      // it is within both the horizon and the out-of-ball detour bound.
      int bound = horizon + 1;
      for (int y : geos[gi]->vertices) {
        if (dist_scratch[y] < 0)
          bound = std::min(bound, 2 * (ball.radius() + 1) - dx - ball.depth(y));
      }
      out.value[gi] = best[gi];
      if (best[gi] > bound) out.exact = false;
    }
    return out;
  }

  // Thinness contribution of one triangle on vertices (a, b, c); false if
  // some needed distance cannot be confirmed exact.
  bool measure(int a, int b, int c) {
    std::array<std::pair<int, int>, 3> sides{{{a, b}, {b, c}, {c, a}}};
    std::array<const GeodesicEnumeration*, 3> geos;
    for (int i = 0; i < 3; ++i) {
      geos[i] = &geodesics(sides[i].first, sides[i].second);
      if (geos[i]->truncated) return false;
    }
    int tri_max = 0;
    for (int i = 0; i < 3; ++i) {
      int j = (i + 1) % 3, k = (i + 2) % 3;
      std::vector<const PathInBall*> other;
      for (const PathInBall& g : geos[j]->paths) other.push_back(&g);
      std::size_t j_count = other.size();
      for (const PathInBall& g : geos[k]->paths) other.push_back(&g);
      for (const PathInBall& g : geos[i]->paths) {
        for (int x : g.vertices) {
          auto sd = side_distances(x, other);
          if (!sd.exact) return false;
          // max over choices of the other two geodesics of
          // min(d(x, g_j), d(x, g_k)) = min over the two sides of the
          // worst geodesic on that side.
          int worst_j = 0, worst_k = 0;
          for (std::size_t gi = 0; gi < j_count; ++gi)
            worst_j = std::max(worst_j, sd.value[gi]);
          for (std::size_t gi = j_count; gi < other.size(); ++gi)
            worst_k = std::max(worst_k, sd.value[gi]);
          tri_max = std::max(tri_max, std::min(worst_j, worst_k));
        }
      }
    }
    delta_hat = std::max(delta_hat, tri_max);
    ++measured;
    return true;
  }
};

}  // namespace

DeltaReport estimate_delta(const CayleyBall& ball, DeltaMode mode) {
  if (ball.radius() < 2) throw WindowError("estimate_delta: radius must be >= 2");
  const int R = ball.radius();
  const int n = ball.vertex_count();

  // Admissible pairs: both side guards hold, so geodesics stay in the ball.
  auto pair_partners = [&](int u) {
    std::vector<std::pair<int, int>> out;  // (v, d)
    int horizon = R - ball.depth(u);
    if (horizon <= 0) return out;
    auto dist = ball.bfs_from(u, horizon);
    for (int v = 0; v < n; ++v) {
      if (v == u || dist[v] <= 0) continue;
      if (ball.depth(v) + dist[v] <= R) out.push_back({v, dist[v]});
    }
    return out;
  };

  TriangleScanner scan{ball};

  if (mode.exhaustive) {
    std::vector<std::vector<int>> partner(n);
    for (int u = 0; u < n; ++u) {
      for (auto [v, d] : pair_partners(u)) {
        (void)d;
        if (v > u) partner[u].push_back(v);
      }
    }
    std::vector<std::set<int>> partner_set(n);
    for (int u = 0; u < n; ++u) partner_set[u] = {partner[u].begin(), partner[u].end()};
    for (int u = 0; u < n; ++u) {
      for (std::size_t i = 0; i < partner[u].size(); ++i) {
        int v = partner[u][i];
        for (std::size_t j = i + 1; j < partner[u].size(); ++j) {
          int w = partner[u][j];
          if (!partner_set[v].count(w)) continue;
          if (!scan.measure(u, v, w)) ++scan.skipped;
        }
      }
    }
    if (scan.measured == 0)
      throw WindowError("estimate_delta: no admissible triangle in window");
    return {scan.delta_hat, scan.measured, scan.skipped, false, 0};
  }

  std::mt19937_64 rng(mode.seed);
  auto draw = [&](int bound) { return static_cast<int>(rng() % static_cast<std::uint64_t>(bound)); };
  std::size_t tries = 0, max_tries = mode.sample_count * 200 + 1000;
  while (scan.measured < static_cast<std::int64_t>(mode.sample_count) && tries < max_tries) {
    ++tries;
    int a = draw(n), b = draw(n), c = draw(n);
    if (a == b || b == c || a == c) continue;
    auto ok_pair = [&](int u, int v) {
      auto d = ball.distance(u, v);
      return d && ball.depth(u) + *d <= R && ball.depth(v) + *d <= R;
    };
    if (!ok_pair(a, b) || !ok_pair(b, c) || !ok_pair(a, c)) continue;
    if (!scan.measure(a, b, c)) ++scan.skipped;
  }
  if (scan.measured == 0)
    throw WindowError("estimate_delta: no admissible triangle sampled");
  return {scan.delta_hat, scan.measured, scan.skipped, true, mode.seed};
}

QuasiCheck check_local_quasigeodesic(const CayleyBall& ball, const PathInBall& p,
                                     const QuasiParams& q) {
  QuasiCheck out;
  const std::size_t n = p.length();
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i; j <= n; ++j) {
      Fraction len(static_cast<std::int64_t>(j - i));
      if (q.L && !(len < *q.L)) continue;  // only subpaths shorter than L
      Fraction required = q.lambda * len - q.epsilon;
      if (required <= Fraction(0)) continue;  // trivially satisfied
      auto d = ball.distance(p.vertices[i], p.vertices[j]);
      if (!d) throw WindowError("check_local_quasigeodesic: radius guard failure");
      if (Fraction(*d) < required) {
        out.pass = false;
        out.witness_from = i;
        out.witness_to = j;
        return out;
      }
    }
  }
  return out;
}

}  // namespace pingpong
