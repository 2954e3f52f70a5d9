#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pingpong {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a computation cannot be certified exact on the current
// finite window (ball too small, membership radius exceeded, budget hit).
struct WindowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an input violates a construction contract (invalid subgroup
// data, instance invariants, parameter domains).
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A signed generator letter. Text form maps generator i to 'a'+i and its
// inverse to 'A'+i, so "abAB" is a * b * a^-1 * b^-1.
struct Letter {
  std::uint8_t gen = 0;
  bool inv = false;

  Letter() = default;
  Letter(unsigned g, bool i) : gen(static_cast<std::uint8_t>(g)), inv(i) {}

  Letter inverse() const { return Letter(gen, !inv); }
  // Total order used for shortlex everywhere: a < A < b < B < ...
  int rank() const { return 2 * static_cast<int>(gen) + (inv ? 1 : 0); }

  friend bool operator==(Letter a, Letter b) { return a.gen == b.gen && a.inv == b.inv; }
  friend bool operator!=(Letter a, Letter b) { return !(a == b); }
  friend bool operator<(Letter a, Letter b) { return a.rank() < b.rank(); }
};

// A word over signed generators. Immutable value; the empty word is the
// identity. |w| = number of letters.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

  // Parses the text form (lowercase = generator, uppercase = inverse,
  // whitespace ignored). Letters outside the declared alphabet are errors.
  static Word parse(std::string_view text, int alphabet_size);

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::span<const Letter> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  std::string str() const;

  Word concat(const Word& rhs) const;
  Word inverse() const;
  Word subword(std::size_t from, std::size_t len) const;

  bool is_reduced() const;

  friend bool operator==(const Word& a, const Word& b) { return a.letters_ == b.letters_; }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  std::vector<Letter> letters_;
};

// Iterated cancellation of adjacent inverse pairs; idempotent.
Word free_reduce(const Word& w);

// Reversed word with all signs flipped; an involution.
Word invert(const Word& w);

// Returns (core, conjugator) with core cyclically reduced and
// w = conjugator * core * conjugator^-1 after free reduction.
std::pair<Word, Word> cyclically_reduce(const Word& w);

Word concat(const Word& a, const Word& b);
Word power(const Word& w, std::int64_t n);

// Length first, then lexicographic by Letter::rank.
bool shortlex_less(const Word& a, const Word& b);

}  // namespace pingpong
