#include "pingpong/abstract_pingpong.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "pingpong/subgroup.hpp"

namespace pingpong {

namespace {

bool in_sorted(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

// e ~ e' when some listed g0 satisfies action(e') = action(g0) o action(e)
// wherever both sides are defined (with at least one comparable point).
bool same_coset(const AbstractPingPongInstance& inst, int e, int e2) {
  for (int g0 : inst.g0_elements) {
    bool comparable = false, ok = true;
    for (int s = 0; s < inst.set_size && ok; ++s) {
      int via = inst.action[e][s];
      int lhs = via == -1 ? -1 : inst.action[g0][via];
      int rhs = inst.action[e2][s];
      if (lhs == -1 || rhs == -1) continue;
      comparable = true;
      if (lhs != rhs) ok = false;
    }
    if (ok && comparable) return true;
  }
  return false;
}

int witnessed_index(const AbstractPingPongInstance& inst, const std::vector<int>& elements) {
  std::vector<int> reps;
  for (int e : elements) {
    bool matched = false;
    for (int r : reps) {
      if (same_coset(inst, r, e)) {
        matched = true;
        break;
      }
    }
    if (!matched) reps.push_back(e);
  }
  return static_cast<int>(reps.size());
}

}  // namespace

PingPongReport abstract_ping_pong_check(const AbstractPingPongInstance& inst, int maxsyll) {
  PingPongReport rep;
  rep.maxsyll = maxsyll;

  for (const auto& row : inst.action) {
    if (static_cast<int>(row.size()) != inst.set_size)
      throw InstanceError("abstract ping-pong: action row of wrong arity");
    for (int t : row) {
      if (t < -1 || t >= inst.set_size)
        throw InstanceError("abstract ping-pong: element acts outside S");
    }
  }

  auto fail = [&](const std::string& why) {
    rep.outcome = PingPongOutcome::HypothesesFail;
    rep.reason = why;
    return rep;
  };

  std::vector<int> sh = inst.s_h, sk = inst.s_k;
  std::sort(sh.begin(), sh.end());
  std::sort(sk.begin(), sk.end());
  if (sh.empty() || sk.empty()) return fail("S_H and S_K must be nonempty");
  for (int x : sh) {
    if (in_sorted(sk, x)) return fail("S_H and S_K are not disjoint");
  }

  std::vector<int> g0 = inst.g0_elements;
  std::sort(g0.begin(), g0.end());
  auto outside_g0 = [&](const std::vector<int>& elems) {
    std::vector<int> out;
    for (int e : elems) {
      if (!in_sorted(g0, e)) out.push_back(e);
    }
    return out;
  };
  std::vector<int> h_act = outside_g0(inst.h_elements);
  std::vector<int> k_act = outside_g0(inst.k_elements);

  // Mapping conditions over the defined part of the action.
  for (int k : k_act) {
    for (int s : sk) {
      int t = inst.action[k][s];
      if (t == -1) continue;
      if (!in_sorted(sh, t))
        return fail("element '" + inst.element_names[k] + "' maps a point of S_K outside S_H");
    }
  }
  for (int h : h_act) {
    for (int s : sh) {
      int t = inst.action[h][s];
      if (t == -1) continue;
      if (!in_sorted(sk, t))
        return fail("element '" + inst.element_names[h] + "' maps a point of S_H outside S_K");
    }
  }

  rep.index_h = witnessed_index(inst, inst.h_elements);
  rep.index_k = witnessed_index(inst, inst.k_elements);
  if (rep.index_h == 2 && rep.index_k == 2) {
    rep.outcome = PingPongOutcome::IndexGuard;
    rep.reason = "both witnessed indices equal 2; the lemma has counterexamples there";
    return rep;
  }

  // The consequence: every alternating product with an odd number of
  // syllables moves some point of S_H. When the partial action clips every
  // S_H evaluation of a product, a moved point of S_K is accepted instead
  // (a moved point anywhere certifies the product is not the identity).
  std::vector<int> seq;
  bool ok = true;
  std::string why;
  auto moved_witness = [&](const std::vector<int>& domain) {
    for (int s : domain) {
      int cur = s;
      for (auto it = seq.rbegin(); it != seq.rend() && cur != -1; ++it)
        cur = inst.action[*it][cur];
      if (cur != -1 && cur != s) return true;
    }
    return false;
  };
  std::function<void(bool)> verify_products = [&](bool last_was_h) {
    if (!ok) return;
    if (seq.size() % 2 == 1) {
      ++rep.products_checked;
      if (!moved_witness(sh) && !moved_witness(sk)) {
        ok = false;
        why = "an odd alternating product has no moved witness in the window";
        return;
      }
    }
    if (static_cast<int>(seq.size()) >= maxsyll) return;
    const std::vector<int>& next = last_was_h ? k_act : h_act;
    for (int e : next) {
      seq.push_back(e);
      verify_products(!last_was_h);
      seq.pop_back();
      if (!ok) return;
    }
  };
  for (bool start_h : {true, false}) {
    const std::vector<int>& first = start_h ? h_act : k_act;
    for (int e : first) {
      if (!ok) break;
      seq.assign(1, e);
      verify_products(start_h);
      seq.clear();
    }
    if (!ok) break;
  }
  if (!ok) return fail(why);

  rep.outcome = PingPongOutcome::Verified;
  rep.reason = "all odd alternating products up to " + std::to_string(maxsyll) +
               " syllables move a point of S_H";
  return rep;
}

AbstractPingPongInstance make_left_multiplication_instance(const CayleyBall& ball,
                                                           const Word& h, const Word& k,
                                                           int max_power) {
  AbstractPingPongInstance inst;
  inst.set_size = ball.vertex_count();

  auto add_element = [&](const Word& w) {
    inst.element_names.push_back(w.empty() ? "1" : w.str());
    std::vector<int> row(static_cast<std::size_t>(ball.vertex_count()), -1);
    for (int v = 0; v < ball.vertex_count(); ++v) {
      Word prod = free_reduce(w.concat(ball.word(v)));
      auto t = ball.vertex_of(prod);
      row[v] = t ? *t : -1;
    }
    inst.action.push_back(std::move(row));
    return static_cast<int>(inst.action.size()) - 1;
  };

  int id = add_element(Word());
  inst.g0_elements = {id};
  inst.h_elements = {id};
  inst.k_elements = {id};
  for (int p = 1; p <= max_power; ++p) {
    inst.h_elements.push_back(add_element(power(h, p)));
    inst.h_elements.push_back(add_element(power(h, -p)));
    inst.k_elements.push_back(add_element(power(k, p)));
    inst.k_elements.push_back(add_element(power(k, -p)));
  }

  // Left multiplication by h-powers prepends h-letters, so the image set
  // S_K holds words starting with h's leading generator and the domain S_H
  // holds those starting with k's.
  unsigned h_gen = free_reduce(h)[0].gen;
  unsigned k_gen = free_reduce(k)[0].gen;
  for (int v = 1; v < ball.vertex_count(); ++v) {
    unsigned first = ball.word(v)[0].gen;
    if (first == k_gen) inst.s_h.push_back(v);
    if (first == h_gen) inst.s_k.push_back(v);
  }
  return inst;
}

}  // namespace pingpong
