#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pingpong/rational.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

struct UnsupportedPresentation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The three presentation classes for which the word problem is solved
// exactly here: free groups (free reduction), metric C'(1/6) small
// cancellation presentations (Dehn's algorithm), and free-abelian
// presentations kept as a non-hyperbolic negative control.
enum class OracleKind { FreeGroup, DehnC16, FreeAbelianControl };

std::string to_string(OracleKind k);

struct Presentation {
  int alphabet = 0;
  std::vector<std::string> generator_names;       // single chars 'a'..'z'
  std::vector<Word> relators;                     // cyclically reduced, nonempty
  OracleKind kind = OracleKind::FreeGroup;
  std::map<std::string, std::vector<Word>> subgroups;  // named "sub:" lines

  // FNV-1a over a canonical serialization; stable across runs.
  std::string hash() const;
  std::string canonical_text() const;
};

struct PieceReport {
  bool pass = true;
  Fraction max_ratio{0};   // max |piece| / |relator| over all piece occurrences
  Word witness;            // a longest piece when one exists
};

// Enumerates pieces: words with at least two distinct occurrences as
// edge-paths on the relator circles (cyclic relators, read in either
// direction). Passes iff the max ratio is strictly below `bound`.
PieceReport check_metric_small_cancellation(const std::vector<Word>& relators,
                                            const Fraction& bound = Fraction(1, 6));

// Parses the presentation file format:
//   gens: a b c
//   rel: abAB
//   sub: H = ab, ba
// '#' starts a comment. Selects the oracle kind and rejects presentations
// outside the three supported classes.
Presentation parse_presentation(std::string_view text);

// Exact triviality decision procedure for the three supported kinds.
class WordOracle {
 public:
  explicit WordOracle(Presentation p);

  const Presentation& presentation() const { return pres_; }
  OracleKind kind() const { return pres_.kind; }
  int alphabet() const { return pres_.alphabet; }

  // FreeGroup: free reduction. DehnC16: replace any subword longer than
  // half of a relator circle by the shorter complement until stable; the
  // result is empty iff the word is trivial. FreeAbelianControl: sorted
  // exponent normal form. Never increases length.
  Word reduce(const Word& w) const;
  bool is_trivial(const Word& w) const { return reduce(w).empty(); }
  bool equal(const Word& u, const Word& v) const { return is_trivial(u.concat(v.inverse())); }

  // Exponent-sum vector; a homomorphism invariant used for bucketing.
  std::vector<std::int64_t> abelianization(const Word& w) const;

 private:
  Word dehn_reduce_once(const Word& w, bool* changed) const;

  Presentation pres_;
  std::vector<Word> shifts_;  // all cyclic shifts of relators and inverses
  std::vector<std::vector<int>> shifts_by_first_;  // shift ids per leading letter rank
};

}  // namespace pingpong
