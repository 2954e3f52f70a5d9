#include "pingpong/presentation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pingpong {

std::string to_string(OracleKind k) {
  switch (k) {
    case OracleKind::FreeGroup: return "free";
    case OracleKind::DehnC16: return "dehn-c16";
    case OracleKind::FreeAbelianControl: return "free-abelian-control";
  }
  return "?";
}

std::string Presentation::canonical_text() const {
  std::ostringstream os;
  os << "gens:" << alphabet;
  for (const Word& r : relators) os << ";rel:" << r.str();
  return os.str();
}

std::string Presentation::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (char c : canonical_text()) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

namespace {

std::vector<Word> cyclic_shifts(const Word& w) {
  std::vector<Word> out;
  std::size_t n = w.size();
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Letter> ls;
    ls.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ls.push_back(w[(s + i) % n]);
    out.emplace_back(std::move(ls));
  }
  return out;
}

std::string key_of(const Word& w) {
  std::string k;
  k.reserve(w.size());
  for (Letter l : w) k.push_back(static_cast<char>(l.rank()));
  return k;
}

// True iff r is a commutator x y x^-1 y^-1 of two distinct generators, up
// to rotation and inversion; reports the generator pair.
bool is_commutator_relator(const Word& r, std::pair<int, int>* pair_out) {
  if (r.size() != 4) return false;
  for (const Word& s : cyclic_shifts(r)) {
    for (const Word& c : {s, s.inverse()}) {
      Letter x = c[0], y = c[1];
      if (x.gen == y.gen) continue;
      if (c[2] == x.inverse() && c[3] == y.inverse()) {
        *pair_out = {std::min<int>(x.gen, y.gen), std::max<int>(x.gen, y.gen)};
        return true;
      }
    }
  }
  return false;
}

bool is_free_abelian(const Presentation& p) {
  if (p.relators.empty()) return false;
  std::set<std::pair<int, int>> pairs;
  for (const Word& r : p.relators) {
    std::pair<int, int> pr;
    if (!is_commutator_relator(r, &pr)) return false;
    if (!pairs.insert(pr).second) return false;  // duplicate pair
  }
  // Every unordered generator pair must appear exactly once.
  std::size_t need = static_cast<std::size_t>(p.alphabet) * (p.alphabet - 1) / 2;
  return pairs.size() == need;
}

}  // namespace

PieceReport check_metric_small_cancellation(const std::vector<Word>& relators,
                                            const Fraction& bound) {
  PieceReport rep;
  // Occurrence = (relator circle, start, length), read forward on the
  // doubled word. Reading an interval backward yields the inverse word, so
  // pieces are classed by {w, w^-1}; the mirror of an occurrence is the
  // same edge set and must not be double counted, which this keying gives
  // for free since each interval is enumerated once.
  std::map<std::string, std::vector<std::pair<int, int>>> classes;
  for (std::size_t ri = 0; ri < relators.size(); ++ri) {
    const Word& r = relators[ri];
    std::size_t n = r.size();
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t len = 1; len <= n; ++len) {
        std::vector<Letter> ls;
        ls.reserve(len);
        for (std::size_t i = 0; i < len; ++i) ls.push_back(r[(s + i) % n]);
        Word f(std::move(ls));
        Word g = f.inverse();
        std::string kf = key_of(f), kg = key_of(g);
        classes[std::min(kf, kg)].push_back({static_cast<int>(ri), static_cast<int>(s)});
      }
    }
  }
  for (auto& [key, occs] : classes) {
    if (occs.size() < 2) continue;
    std::size_t len = key.size();
    for (auto [ri, s] : occs) {
      Fraction ratio(static_cast<std::int64_t>(len),
                     static_cast<std::int64_t>(relators[ri].size()));
      if (ratio > rep.max_ratio ||
          (ratio == rep.max_ratio && len > rep.witness.size())) {
        rep.max_ratio = ratio;
        std::vector<Letter> ls;
        for (std::size_t i = 0; i < len; ++i)
          ls.push_back(relators[ri][(s + i) % relators[ri].size()]);
        rep.witness = Word(std::move(ls));
      }
    }
  }
  rep.pass = rep.max_ratio < bound;
  return rep;
}

Presentation parse_presentation(std::string_view text) {
  Presentation p;
  bool saw_gens = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    auto fail = [&](const std::string& msg) {
      throw ParseError("line " + std::to_string(lineno) + ": " + msg);
    };
    if (line.rfind("gens:", 0) == 0) {
      if (saw_gens) fail("duplicate gens: line");
      saw_gens = true;
      std::istringstream ls(line.substr(5));
      std::string tok;
      while (ls >> tok) {
        if (tok.size() != 1 || tok[0] < 'a' || tok[0] > 'z')
          fail("generator must be a single lowercase letter, got '" + tok + "'");
        int idx = tok[0] - 'a';
        if (idx != p.alphabet) fail("generators must be listed in order a b c ...");
        p.generator_names.push_back(tok);
        ++p.alphabet;
      }
      if (p.alphabet == 0) fail("empty generator list");
    } else if (line.rfind("rel:", 0) == 0) {
      if (!saw_gens) fail("rel: before gens:");
      Word w;
      try {
        w = Word::parse(line.substr(4), p.alphabet);
      } catch (const ParseError& e) {
        fail(e.what());
      }
      auto [core, conj] = cyclically_reduce(w);
      (void)conj;
      if (core.empty()) fail("empty relator");
      p.relators.push_back(core);
    } else if (line.rfind("sub:", 0) == 0) {
      if (!saw_gens) fail("sub: before gens:");
      std::string rest = line.substr(4);
      auto eq = rest.find('=');
      if (eq == std::string::npos) fail("sub: line needs '='");
      std::string name = strip(rest.substr(0, eq));
      if (name.empty()) fail("empty subgroup name");
      std::vector<Word> gens;
      std::string words = rest.substr(eq + 1);
      std::istringstream ws(words);
      std::string wtok;
      while (std::getline(ws, wtok, ',')) {
        wtok = strip(wtok);
        if (wtok.empty()) fail("empty word in subgroup generator list");
        try {
          gens.push_back(Word::parse(wtok, p.alphabet));
        } catch (const ParseError& e) {
          fail(e.what());
        }
      }
      if (gens.empty()) fail("subgroup with no generators");
      p.subgroups[name] = std::move(gens);
    } else {
      fail("unrecognized line '" + line + "'");
    }
  }
  if (!saw_gens) throw ParseError("missing gens: line");

  if (p.relators.empty()) {
    p.kind = OracleKind::FreeGroup;
  } else if (is_free_abelian(p)) {
    p.kind = OracleKind::FreeAbelianControl;
  } else {
    for (const Word& r : p.relators) {
      if (r.size() < 2)
        throw UnsupportedPresentation(
            "unsupported presentation: relator '" + r.str() +
            "' of length < 2 (identifies a generator with the identity)");
    }
    PieceReport rep = check_metric_small_cancellation(p.relators);
    if (!rep.pass)
      throw UnsupportedPresentation(
          "unsupported presentation: not metric C'(1/6), witness piece '" +
          rep.witness.str() + "' of ratio " + rep.max_ratio.str());
    p.kind = OracleKind::DehnC16;
  }
  return p;
}

WordOracle::WordOracle(Presentation p) : pres_(std::move(p)) {
  if (pres_.kind == OracleKind::DehnC16) {
    for (const Word& r : pres_.relators) {
      for (const Word& v : {r, r.inverse()}) {
        for (Word& s : cyclic_shifts(v)) shifts_.push_back(std::move(s));
      }
    }
    shifts_by_first_.assign(2 * static_cast<std::size_t>(pres_.alphabet), {});
    for (std::size_t i = 0; i < shifts_.size(); ++i)
      shifts_by_first_[shifts_[i][0].rank()].push_back(static_cast<int>(i));
  }
}

Word WordOracle::dehn_reduce_once(const Word& w, bool* changed) const {
  // Leftmost, then longest match of a strictly-more-than-half piece of a
  // relator circle; replaced by the inverse complement.
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (int si : shifts_by_first_[w[i].rank()]) {
      const Word& shift = shifts_[si];
      std::size_t n = shift.size();
      std::size_t maxt = std::min(w.size() - i, n);
      for (std::size_t t = maxt; 2 * t > n; --t) {
        bool match = true;
        for (std::size_t j = 1; j < t; ++j) {
          if (!(w[i + j] == shift[j])) {
            match = false;
            break;
          }
        }
        if (!match) continue;
        // shift = prefix * suffix and prefix = suffix^-1 in the group.
        Word suffix = shift.subword(t, n - t);
        Word repl = suffix.inverse();
        std::vector<Letter> out;
        out.reserve(w.size() - t + repl.size());
        for (std::size_t j = 0; j < i; ++j) out.push_back(w[j]);
        for (Letter l : repl) out.push_back(l);
        for (std::size_t j = i + t; j < w.size(); ++j) out.push_back(w[j]);
        *changed = true;
        return Word(std::move(out));
      }
    }
  }
  *changed = false;
  return w;
}

Word WordOracle::reduce(const Word& w) const {
  switch (pres_.kind) {
    case OracleKind::FreeGroup:
      return free_reduce(w);
    case OracleKind::FreeAbelianControl: {
      auto ab = abelianization(w);
      std::vector<Letter> out;
      for (std::size_t g = 0; g < ab.size(); ++g) {
        std::int64_t e = ab[g];
        for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i)
          out.emplace_back(static_cast<unsigned>(g), e < 0);
      }
      return Word(std::move(out));
    }
    case OracleKind::DehnC16: {
      Word cur = free_reduce(w);
      bool changed = true;
      while (changed) {
        cur = dehn_reduce_once(cur, &changed);
        if (changed) cur = free_reduce(cur);
      }
      return cur;
    }
  }
  return w;
}

std::vector<std::int64_t> WordOracle::abelianization(const Word& w) const {
  std::vector<std::int64_t> v(static_cast<std::size_t>(pres_.alphabet), 0);
  for (Letter l : w) v[l.gen] += l.inv ? -1 : 1;
  return v;
}

}  // namespace pingpong
