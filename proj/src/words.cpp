#include "pingpong/words.hpp"

#include <algorithm>
#include <cctype>

namespace pingpong {

Word Word::parse(std::string_view text, int alphabet_size) {
  std::vector<Letter> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    int gen;
    bool inv;
    if (c >= 'a' && c <= 'z') {
      gen = c - 'a';
      inv = false;
    } else if (c >= 'A' && c <= 'Z') {
      gen = c - 'A';
      inv = true;
    } else {
      throw ParseError(std::string("invalid character '") + c + "' in word");
    }
    if (gen >= alphabet_size) {
      throw ParseError(std::string("letter '") + c + "' outside declared alphabet");
    }
    letters.emplace_back(static_cast<unsigned>(gen), inv);
  }
  return Word(std::move(letters));
}

std::string Word::str() const {
  std::string out;
  out.reserve(letters_.size());
  for (Letter l : letters_) {
    if (l.gen >= 26) throw std::logic_error("text form supports at most 26 generators");
    out.push_back(static_cast<char>((l.inv ? 'A' : 'a') + l.gen));
  }
  return out;
}

Word Word::concat(const Word& rhs) const {
  std::vector<Letter> out;
  out.reserve(letters_.size() + rhs.letters_.size());
  out.insert(out.end(), letters_.begin(), letters_.end());
  out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
  return Word(std::move(out));
}

Word Word::inverse() const {
  std::vector<Letter> out;
  out.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) out.push_back(it->inverse());
  return Word(std::move(out));
}

Word Word::subword(std::size_t from, std::size_t len) const {
  std::vector<Letter> out(letters_.begin() + from, letters_.begin() + from + len);
  return Word(std::move(out));
}

bool Word::is_reduced() const {
  for (std::size_t i = 0; i + 1 < letters_.size(); ++i) {
    if (letters_[i] == letters_[i + 1].inverse()) return false;
  }
  return true;
}

Word free_reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter l : w) {
    if (!stack.empty() && stack.back() == l.inverse()) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

Word invert(const Word& w) { return w.inverse(); }

std::pair<Word, Word> cyclically_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  std::vector<Letter> conj;
  while (hi - lo >= 2 && r[lo] == r[hi - 1].inverse()) {
    conj.push_back(r[lo]);
    ++lo;
    --hi;
  }
  std::vector<Letter> core(r.begin() + lo, r.begin() + hi);
  return {Word(std::move(core)), Word(std::move(conj))};
}

Word concat(const Word& a, const Word& b) { return a.concat(b); }

Word power(const Word& w, std::int64_t n) {
  if (n == 0) return Word();
  auto [core, conj] = cyclically_reduce(w);
  Word base = n > 0 ? core : core.inverse();
  std::int64_t reps = n > 0 ? n : -n;
  std::vector<Letter> out(conj.begin(), conj.end());
  for (std::int64_t i = 0; i < reps; ++i) out.insert(out.end(), base.begin(), base.end());
  Word ci = conj.inverse();
  out.insert(out.end(), ci.begin(), ci.end());
  return free_reduce(Word(std::move(out)));
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].rank() != b[i].rank()) return a[i].rank() < b[i].rank();
  }
  return false;
}

}  // namespace pingpong
