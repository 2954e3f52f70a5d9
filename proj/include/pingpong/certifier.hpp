#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pingpong/cayley_ball.hpp"
#include "pingpong/presentation.hpp"
#include "pingpong/rational.hpp"
#include "pingpong/subgroup.hpp"
#include "pingpong/words.hpp"

namespace pingpong {

// Two-sided: both factors are power-restricted subgroups (CLI certify-t1).
// One-sided: H must be malnormal and only H1 is restricted (CLI certify-t2).
enum class CertMode { TwoSided, OneSidedMalnormal };

struct LgeStrategy {
  bool supplied = false;  // false = window-empirical search
  Fraction L{1};
  Fraction lambda{1};
  Fraction epsilon{0};
};

struct CertifyConfig {
  bool oracle_enabled = true;
  int oracle_maxlen = 12;
  std::int64_t oracle_budget = 2'000'000;
  LgeStrategy lge;
  std::uint64_t seed = 1;
  int path_sweep_budget = 200;   // assembled syllable paths verified
  int pool_width = 6;            // syllable choices per subgroup in the sweep
};

struct PingPongInstance {
  const WordOracle* oracle = nullptr;
  const CayleyBall* ball = nullptr;
  CertMode mode = CertMode::TwoSided;
  MembershipOracle H, K, H1, K1, G0;

  // Validates on the window: H1 <= H and K1 <= K by generator membership,
  // and H1 n K1 = H n K = G0 as window element sets. Throws InstanceError.
  static PingPongInstance make(const WordOracle& oracle, const CayleyBall& ball,
                               SubgroupSpec h, SubgroupSpec k, SubgroupSpec h1,
                               SubgroupSpec k1, CertMode mode);
};

// Number of group elements strictly shorter than `bound` (window-exact).
int count_short_elements(const CayleyBall& ball, int bound);

struct LocalToGlobal {
  Fraction L{1};
  Fraction lambda{1};
  Fraction epsilon{0};
  std::string provenance;
};

// The local-to-global quasigeodesic constants: either echoes supplied
// literature values, or fits the tightest (lambda0, epsilon) over the
// window's reduced paths together with the smallest local window L for
// which the fit stays within epsilon0. Throws WindowError when the window
// admits no consistent constants.
LocalToGlobal local_to_global(const LgeStrategy& strategy, Fraction lambda0,
                              Fraction epsilon0, const CayleyBall& ball);

Fraction compute_C(const Fraction& L, const Fraction& lambda, const Fraction& epsilon);

struct ShortElementReport {
  bool holds = true;
  Word witness;
};

// Do all subgroup elements strictly shorter than C lie in G0?
ShortElementReport short_element_condition(const MembershipOracle& sub, const Fraction& C,
                                           const MembershipOracle& g0, const CayleyBall& ball);

struct SyllablePath {
  PathInBall path;
  std::vector<std::size_t> boundaries;  // letter offset after each factor
  std::vector<char> types;              // 'H' or 'K' per factor
  std::vector<Word> factors;
};

// Concatenates alternating factors into a based path. Factors must be
// geodesic words outside G0, with H-factors coset-minimized (one-sided at
// the ends, double-sided inside).
SyllablePath assemble_syllable_path(const PingPongInstance& inst,
                                    const std::vector<Word>& factors);

struct OverlapReport {
  int adjacent_max = 0;        // max subpath of an H-syllable in the
                               // delta-neighborhood of the adjacent K-syllable
  std::int64_t adjacent_bound = 0;  // 4 * mu * A
  int cross_max = 0;           // max subpath of an H-syllable in the
                               // 2 delta-neighborhood of the next H-syllable
  int cross_bound = 0;         // M (one-sided mode only)
  bool adjacent_violation = false;
  bool cross_violation = false;
  int junctions = 0;
};

OverlapReport measure_overlaps(const PingPongInstance& inst, const SyllablePath& sp,
                               int delta_hat, int mu_hat, int A,
                               std::optional<int> M = std::nullopt);

enum class Verdict { Certified, Inconclusive, Refuted };

std::string to_string(Verdict v);

struct GateRecord {
  std::string name;
  bool pass = true;
  std::string detail;
};

enum class OracleOutcome { Consistent, Counterexample, Partial };

struct OracleCheckResult {
  OracleOutcome outcome = OracleOutcome::Consistent;
  int maxlen = 0;          // requested
  int reached_len = 0;     // achieved (== maxlen unless Partial)
  std::int64_t products = 0;
  Word witness;            // trivial word of positive syllable length
  std::vector<Word> witness_factors;
};

// Independent brute-force validation: enumerates alternating normal-form
// products of window syllables up to total letter length maxlen; flags a
// trivial product of positive syllable length, or two genuinely distinct
// normal forms naming the same group element.
OracleCheckResult oracle_free_product_check(const PingPongInstance& inst, int maxlen,
                                            std::int64_t budget = 2'000'000);

struct JoinReport {
  int mu_hat = 0;
  int window_radius = 0;
};

// Window quasiconvexity of <H1, K1>, measured with a join membership
// oracle built from both generator sets.
JoinReport estimate_join_quasiconvexity(const PingPongInstance& inst, const CayleyBall& ball);

struct Certificate {
  CertMode mode = CertMode::TwoSided;
  std::string presentation_hash;
  std::string oracle_kind;
  int window_radius = 0;
  std::string H, K, H1, K1;  // generator lists, comma-separated text

  int delta_hat = 0;
  int mu_hat = 0;
  int mu1_hat = -1;  // -1 = not measured
  int A = 0;
  Fraction lambda0{1, 3};
  Fraction epsilon0{0};
  LocalToGlobal lge;
  Fraction C{0};
  int m_rel = 0;  // one-sided mode
  int M = 0;      // one-sided mode

  std::vector<GateRecord> gates;

  int paths_checked = 0;
  OverlapReport overlaps;

  bool oracle_enabled = true;
  std::optional<OracleCheckResult> oracle;

  std::optional<JoinReport> join;
  std::vector<std::string> notes;

  Verdict verdict = Verdict::Inconclusive;
  std::string verdict_reason;
  std::uint64_t seed = 0;
};

Certificate certify(const PingPongInstance& inst, const CertifyConfig& config = {});

struct SchottkyResult {
  bool found = false;
  int m = 0, n = 0;
  std::optional<Certificate> certificate;
  std::string note;
  std::vector<std::string> attempts;  // per-pair outcome log
};

// Searches powers (m, n) up to maxpow for the first pair whose two-sided
// certificate comes back CERTIFIED, with H = <h>, K = <k>, H1 = <h^m>,
// K1 = <k^n>. Requires trivial window intersection of <h> and <k>.
SchottkyResult schottky_power_search(const WordOracle& oracle, const CayleyBall& ball,
                                     const Word& h, const Word& k, int maxpow,
                                     const CertifyConfig& config = {});

}  // namespace pingpong
