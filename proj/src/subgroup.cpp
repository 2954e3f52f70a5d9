#include "pingpong/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

namespace pingpong {

// ---------------------------------------------------------------- folding

FoldedGraph FoldedGraph::from_generators(const std::vector<Word>& gens, int alphabet) {
  FoldedGraph g;
  g.alphabet_ = alphabet;
  g.next_.push_back(std::vector<int>(2 * alphabet, -1));
  for (const Word& w : gens) g.add_loop(free_reduce(w));
  g.fold();
  return g;
}

void FoldedGraph::add_loop(const Word& w) {
  if (w.empty()) return;
  int cur = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    int target;
    if (i + 1 == w.size()) {
      target = 0;
    } else {
      target = state_count();
      next_.push_back(std::vector<int>(2 * alphabet_, -1));
    }
    Letter l = w[i];
    next_[cur][l.rank()] = target;
    next_[target][l.inverse().rank()] = cur;
    cur = target;
  }
}

void FoldedGraph::fold() {
  // Union-find merge of targets reached by equal letters from one state.
  std::vector<int> parent(state_count());
  for (int i = 0; i < state_count(); ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < state_count(); ++s) {
      if (find(s) != s) continue;
      for (int lr = 0; lr < 2 * alphabet_; ++lr) {
        // Collect all targets for letter lr among states merged into s.
        int canonical_target = -1;
        for (int t = 0; t < state_count(); ++t) {
          if (find(t) != s || next_[t][lr] == -1) continue;
          int tt = find(next_[t][lr]);
          if (canonical_target == -1) {
            canonical_target = tt;
          } else if (tt != canonical_target) {
            parent[tt] = canonical_target;
            changed = true;
          }
        }
      }
    }
  }

  // Rebuild a deterministic table over representatives reachable from base.
  std::map<int, int> remap;
  std::vector<int> order;
  std::deque<int> queue{find(0)};
  remap[find(0)] = 0;
  order.push_back(find(0));
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int lr = 0; lr < 2 * alphabet_; ++lr) {
      // Any member of the class may carry the edge.
      int target = -1;
      for (int t = 0; t < state_count(); ++t) {
        if (find(t) == s && next_[t][lr] != -1) {
          target = find(next_[t][lr]);
          break;
        }
      }
      if (target != -1 && !remap.count(target)) {
        remap[target] = static_cast<int>(order.size());
        order.push_back(target);
        queue.push_back(target);
      }
    }
  }
  std::vector<std::vector<int>> folded(order.size(), std::vector<int>(2 * alphabet_, -1));
  for (std::size_t i = 0; i < order.size(); ++i) {
    int s = order[i];
    for (int lr = 0; lr < 2 * alphabet_; ++lr) {
      for (int t = 0; t < state_count(); ++t) {
        if (find(t) == s && next_[t][lr] != -1) {
          folded[i][lr] = remap.at(find(next_[t][lr]));
          break;
        }
      }
    }
  }
  next_ = std::move(folded);
}

bool FoldedGraph::accepts(const Word& w) const {
  Word r = free_reduce(w);
  int cur = 0;
  for (Letter l : r) {
    cur = next_[cur][l.rank()];
    if (cur == -1) return false;
  }
  return cur == 0;
}

FoldedGraph FoldedGraph::intersection(const FoldedGraph& a, const FoldedGraph& b) {
  FoldedGraph g;
  g.alphabet_ = a.alphabet_;
  std::map<std::pair<int, int>, int> remap;
  std::deque<std::pair<int, int>> queue{{0, 0}};
  remap[{0, 0}] = 0;
  g.next_.push_back(std::vector<int>(2 * g.alphabet_, -1));
  while (!queue.empty()) {
    auto [sa, sb] = queue.front();
    queue.pop_front();
    int from = remap.at({sa, sb});
    for (int lr = 0; lr < 2 * g.alphabet_; ++lr) {
      int ta = a.next_[sa][lr], tb = b.next_[sb][lr];
      if (ta == -1 || tb == -1) continue;
      auto key = std::make_pair(ta, tb);
      auto it = remap.find(key);
      int to;
      if (it == remap.end()) {
        to = g.state_count();
        remap[key] = to;
        g.next_.push_back(std::vector<int>(2 * g.alphabet_, -1));
        queue.push_back(key);
      } else {
        to = it->second;
      }
      g.next_[from][lr] = to;
    }
  }
  return g;
}

std::optional<Word> FoldedGraph::shortest_nontrivial(int maxlen) const {
  // BFS over (state, last letter rank) avoiding immediate backtracking;
  // letters explored in rank order, so the witness is shortlex-least.
  struct Node {
    int state;
    int last;  // -1 at the root
  };
  std::map<std::pair<int, int>, std::pair<std::pair<int, int>, Letter>> parent;
  std::deque<std::pair<Node, int>> queue{{{0, -1}, 0}};
  std::set<std::pair<int, int>> seen{{0, -1}};
  while (!queue.empty()) {
    auto [node, len] = queue.front();
    queue.pop_front();
    if (len >= maxlen) continue;
    for (int lr = 0; lr < 2 * alphabet_; ++lr) {
      if (node.last != -1) {
        Letter prev(static_cast<unsigned>(node.last / 2), node.last % 2 == 1);
        if (prev.inverse().rank() == lr) continue;
      }
      int t = next_[node.state][lr];
      if (t == -1) continue;
      Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      std::pair<int, int> key{t, lr};
      if (seen.count(key)) continue;
      seen.insert(key);
      parent[key] = {{node.state, node.last}, l};
      if (t == 0) {
        std::vector<Letter> letters;
        std::pair<int, int> cur = key;
        while (parent.count(cur)) {
          letters.push_back(parent.at(cur).second);
          cur = parent.at(cur).first;
        }
        std::reverse(letters.begin(), letters.end());
        return Word(std::move(letters));
      }
      queue.push_back({{t, lr}, len + 1});
    }
  }
  return std::nullopt;
}

std::vector<Word> FoldedGraph::elements_up_to(int maxlen) const {
  std::vector<Word> out;
  std::vector<Letter> stack;
  std::function<void(int, int)> dfs = [&](int state, int last) {
    if (static_cast<int>(stack.size()) > 0 && state == 0) out.emplace_back(stack);
    if (static_cast<int>(stack.size()) >= maxlen) return;
    for (int lr = 0; lr < 2 * alphabet_; ++lr) {
      if (last != -1) {
        Letter prev(static_cast<unsigned>(last / 2), last % 2 == 1);
        if (prev.inverse().rank() == lr) continue;
      }
      int t = next_[state][lr];
      if (t == -1) continue;
      stack.emplace_back(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      dfs(t, lr);
      stack.pop_back();
    }
  };
  dfs(0, -1);
  std::sort(out.begin(), out.end(), shortlex_less);
  return out;
}

// ------------------------------------------------------------- membership

MembershipOracle MembershipOracle::folded(SubgroupSpec spec, const WordOracle& oracle) {
  for (const Word& g : spec.generators) {
    if (oracle.is_trivial(g))
      throw InstanceError("subgroup " + spec.name + ": generator '" + g.str() +
                          "' is trivial in the ambient group");
  }
  auto graph = FoldedGraph::from_generators(spec.generators, oracle.alphabet());
  return from_folded(std::move(spec), std::move(graph));
}

MembershipOracle MembershipOracle::from_folded(SubgroupSpec spec, FoldedGraph graph) {
  MembershipOracle m;
  m.folded_ = std::make_shared<FoldedGraph>(std::move(graph));
  m.spec_ = std::move(spec);
  return m;
}

MembershipOracle MembershipOracle::window(SubgroupSpec spec, const CayleyBall& ball) {
  for (const Word& g : spec.generators) {
    if (ball.oracle().is_trivial(g))
      throw InstanceError("subgroup " + spec.name + ": generator '" + g.str() +
                          "' is trivial in the ambient group");
  }
  // Reachability over right multiplication by generators and inverses.
  std::set<int> seen{0};
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const Word& g : spec.generators) {
      for (const Word& step : {g, g.inverse()}) {
        auto t = ball.walk(v, step);
        if (t && !seen.count(*t)) {
          seen.insert(*t);
          queue.push_back(*t);
        }
      }
    }
  }
  MembershipOracle m;
  m.spec_ = std::move(spec);
  m.ball_ = &ball;
  m.elements_.assign(seen.begin(), seen.end());
  return m;
}

MembershipOracle MembershipOracle::window_set(SubgroupSpec spec, const CayleyBall& ball,
                                              std::vector<int> elements) {
  MembershipOracle m;
  m.spec_ = std::move(spec);
  m.ball_ = &ball;
  std::sort(elements.begin(), elements.end());
  m.elements_ = std::move(elements);
  return m;
}

Membership MembershipOracle::contains(const Word& w) const {
  if (folded_) return folded_->accepts(w) ? Membership::Yes : Membership::No;
  Word r = ball_->oracle().reduce(w);
  auto v = ball_->vertex_of(r);
  if (!v) return Membership::Unknown;
  return std::binary_search(elements_.begin(), elements_.end(), *v) ? Membership::Yes
                                                                    : Membership::No;
}

std::vector<int> MembershipOracle::window_elements(const CayleyBall& ball) const {
  if (!folded_) {
    if (ball_ != &ball)
      throw InstanceError("window membership oracle queried against a different ball");
    return elements_;
  }
  std::vector<int> out;
  for (int v = 0; v < ball.vertex_count(); ++v) {
    if (folded_->accepts(ball.word(v))) out.push_back(v);
  }
  return out;
}

MembershipOracle intersect_subgroups(const MembershipOracle& a, const MembershipOracle& b,
                                     const CayleyBall& ball) {
  SubgroupSpec spec;
  spec.name = a.spec().name + "&" + b.spec().name;
  if (a.is_exact() && b.is_exact()) {
    auto inter = FoldedGraph::intersection(*a.folded_graph(), *b.folded_graph());
    return MembershipOracle::from_folded(std::move(spec), std::move(inter));
  }
  auto ea = a.window_elements(ball);
  auto eb = b.window_elements(ball);
  std::vector<int> inter;
  std::set_intersection(ea.begin(), ea.end(), eb.begin(), eb.end(), std::back_inserter(inter));
  return MembershipOracle::window_set(std::move(spec), ball, std::move(inter));
}

// ------------------------------------------------------------ estimates

MuReport estimate_mu(const MembershipOracle& sub, const CayleyBall& ball,
                     int effective_radius) {
  const int reff = effective_radius < 0 ? ball.radius() : effective_radius;
  auto elements = sub.window_elements(ball);
  if (elements.size() < 2)
    throw WindowError("estimate_mu: fewer than two subgroup elements in window");

  MuReport rep;
  rep.window_radius = reff;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = i + 1; j < elements.size(); ++j) {
      int u = elements[i], v = elements[j];
      if (ball.depth(u) > reff || ball.depth(v) > reff) continue;
      auto d = ball.distance(u, v);
      if (!d || ball.depth(u) + *d > reff || ball.depth(v) + *d > reff) {
        ++rep.pairs_skipped;
        continue;
      }
      bool pair_ok = true;
      int pair_max = 0;
      auto geos = geodesics_between(ball, u, v);
      if (geos.truncated) {
        ++rep.pairs_skipped;
        continue;
      }
      for (const PathInBall& g : geos.paths) {
        for (int x : g.vertices) {
          auto sd = ball.distance_to_set(x, elements, /*set_extends_outside=*/true);
          if (!sd.exact) {
            pair_ok = false;
            break;
          }
          pair_max = std::max(pair_max, sd.value);
        }
        if (!pair_ok) break;
      }
      if (!pair_ok) {
        ++rep.pairs_skipped;
        continue;
      }
      ++rep.pairs_measured;
      rep.mu_hat = std::max(rep.mu_hat, pair_max);
    }
  }
  if (rep.pairs_measured == 0)
    throw WindowError("estimate_mu: no admissible subgroup pair in window");
  return rep;
}

Word shortest_double_coset_rep(const Word& h, const MembershipOracle& g0,
                               const CayleyBall& ball, CosetSide side) {
  auto hv = ball.vertex_of(ball.oracle().reduce(h));
  if (!hv) throw WindowError("shortest_double_coset_rep: h does not fit in the window");

  auto g0_elems = g0.window_elements(ball);
  std::vector<int> lefts = side == CosetSide::RightOnly ? std::vector<int>{0} : g0_elems;
  std::vector<int> rights = side == CosetSide::LeftOnly ? std::vector<int>{0} : g0_elems;

  int best = *hv;
  const Word h_red = ball.word(*hv);
  for (int l : lefts) {
    if (ball.depth(l) > ball.depth(best) + static_cast<int>(h_red.size()) + ball.radius())
      continue;
    for (int r : rights) {
      Word prod = ball.word(l).concat(h_red).concat(ball.word(r));
      Word red = ball.oracle().reduce(prod);
      if (static_cast<int>(red.size()) > ball.radius()) continue;  // not placeable
      auto v = ball.vertex_of(red);
      if (!v) continue;
      if (ball.depth(*v) < ball.depth(best) ||
          (ball.depth(*v) == ball.depth(best) && shortlex_less(ball.word(*v), ball.word(best))))
        best = *v;
    }
  }
  return ball.word(best);
}

// ------------------------------------------------------------ relative ball

RelativeBall RelativeBall::build(const MembershipOracle& sub, int radius, int alphabet) {
  RelativeBall rel;
  rel.radius_ = radius;
  rel.reps_.push_back(Word());
  rel.edges_.push_back(std::vector<int>(2 * alphabet, -1));
  rel.sphere_start_ = {0, 1};

  auto same_coset = [&](const Word& g1, const Word& g2) {
    // Hg1 = Hg2 iff g1 g2^-1 lies in H.
    Membership m = sub.contains(g1.concat(g2.inverse()));
    if (m == Membership::Unknown)
      throw WindowError("relative ball: membership radius insufficient for radius " +
                        std::to_string(radius));
    return m == Membership::Yes;
  };

  int layer_begin = 0, layer_end = 1;
  for (int layer = 0; layer < radius; ++layer) {
    for (int v = layer_begin; v < layer_end; ++v) {
      for (int lr = 0; lr < 2 * alphabet; ++lr) {
        if (rel.edges_[v][lr] != -1) continue;
        Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
        Word cand = rel.reps_[v].concat(Word({l}));
        int target = -1;
        for (int u = 0; u < rel.vertex_count(); ++u) {
          // Only the two top layers can match (coset distance changes by <= 1).
          if (static_cast<int>(rel.reps_[u].size()) < layer) continue;
          if (same_coset(cand, rel.reps_[u])) {
            target = u;
            break;
          }
        }
        if (target == -1) {
          target = rel.vertex_count();
          rel.reps_.push_back(free_reduce(cand));
          rel.edges_.push_back(std::vector<int>(2 * alphabet, -1));
        }
        rel.edges_[v][lr] = target;
        if (rel.edges_[target][l.inverse().rank()] == -1)
          rel.edges_[target][l.inverse().rank()] = v;
      }
    }
    layer_begin = layer_end;
    layer_end = rel.vertex_count();
    rel.sphere_start_.push_back(layer_end);
  }

  // Resolve edges between two boundary cosets.
  for (int v = layer_begin; v < layer_end; ++v) {
    for (int lr = 0; lr < 2 * alphabet; ++lr) {
      if (rel.edges_[v][lr] != -1) continue;
      Letter l(static_cast<unsigned>(lr / 2), lr % 2 == 1);
      Word cand = rel.reps_[v].concat(Word({l}));
      for (int u = layer_begin; u < layer_end; ++u) {
        if (same_coset(cand, rel.reps_[u])) {
          rel.edges_[v][lr] = u;
          if (rel.edges_[u][l.inverse().rank()] == -1) rel.edges_[u][l.inverse().rank()] = v;
          break;
        }
      }
    }
  }
  return rel;
}

std::optional<int> RelativeBall::walk(int from, const Word& w) const {
  int cur = from;
  for (Letter l : w) {
    cur = step(cur, l);
    if (cur == -1) return std::nullopt;
  }
  return cur;
}

int RelativeBall::vertices_within(int r) const {
  if (r >= radius_) {
    if (r > radius_) throw WindowError("relative ball radius shortfall");
    return vertex_count();
  }
  return sphere_start_[r + 1];
}

RelativeBallConstants relative_ball_constants(const RelativeBall& rel, int mu, int delta) {
  int need = mu + 2 * delta;
  if (need > rel.radius())
    throw WindowError("relative ball of radius " + std::to_string(rel.radius()) +
                      " too small for mu + 2 delta = " + std::to_string(need));
  RelativeBallConstants c;
  c.m = rel.vertices_within(need);
  c.M = c.m * c.m + 1;
  return c;
}

// ------------------------------------------------------------ malnormality

MalnormalReport check_malnormal(const MembershipOracle& sub, const CayleyBall& ball) {
  MalnormalReport rep;
  rep.window_radius = ball.radius();
  auto elements = sub.window_elements(ball);

  for (int g = 1; g < ball.vertex_count(); ++g) {
    if (std::binary_search(elements.begin(), elements.end(), g)) continue;
    const Word gw = ball.word(g);
    for (int h : elements) {
      if (h == 0) continue;
      Word conj = gw.concat(ball.word(h)).concat(gw.inverse());
      Membership m = sub.contains(conj);
      if (m == Membership::Unknown) {
        ++rep.pairs_skipped;
        continue;
      }
      if (m == Membership::Yes) {
        rep.violation = true;
        rep.conjugator = gw;
        rep.witness = ball.word(h);
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace pingpong
