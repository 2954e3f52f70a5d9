#include <random>

#include "doctest.h"
#include "pingpong/certifier.hpp"
#include "pingpong/json_io.hpp"

using namespace pingpong;

namespace {

const WordOracle& f2() {
  static WordOracle oracle(parse_presentation("gens: a b\n"));
  return oracle;
}
const WordOracle& z2() {
  static WordOracle oracle(parse_presentation("gens: a b\nrel: abAB\n"));
  return oracle;
}
const WordOracle& genus2() {
  static WordOracle oracle(parse_presentation("gens: a b c d\nrel: abABcdCD\n"));
  return oracle;
}

const CayleyBall& f2_ball() {
  static CayleyBall ball = CayleyBall::build(f2(), 6);
  return ball;
}

SubgroupSpec spec(const std::string& name, std::initializer_list<const char*> gens,
                  int alphabet = 2) {
  SubgroupSpec s;
  s.name = name;
  for (const char* g : gens) s.generators.push_back(Word::parse(g, alphabet));
  return s;
}

PingPongInstance f2_instance(const char* h, const char* k, const char* h1, const char* k1,
                             CertMode mode = CertMode::TwoSided) {
  return PingPongInstance::make(f2(), f2_ball(), spec("H", {h}), spec("K", {k}),
                                spec("H1", {h1}), spec("K1", {k1}), mode);
}

}  // namespace

TEST_CASE("count of short elements") {
  CHECK(count_short_elements(f2_ball(), 0) == 0);
  CHECK(count_short_elements(f2_ball(), 2) == 5);  // identity + 4 letters
  CHECK_THROWS_AS(count_short_elements(f2_ball(), 9), WindowError);
}

TEST_CASE("local-to-global constants") {
  // free group: every reduced window path is geodesic, so the smallest
  // local window works and the fitted epsilon is zero
  LocalToGlobal tree = local_to_global({}, Fraction(1), Fraction(0), f2_ball());
  CHECK(tree.L == Fraction(1));
  CHECK(tree.lambda == Fraction(1));
  CHECK(tree.epsilon == Fraction(0));
  CHECK(tree.provenance.find("window-empirical") == 0);

  // supplied constants pass through with literature provenance
  LgeStrategy lit;
  lit.supplied = true;
  lit.L = Fraction(20);
  lit.lambda = Fraction(1, 8);
  lit.epsilon = Fraction(10);
  LocalToGlobal echoed = local_to_global(lit, Fraction(1, 3), Fraction(5), f2_ball());
  CHECK(echoed.L == Fraction(20));
  CHECK(echoed.provenance == "external-literature");

  // the grid control cannot satisfy epsilon0 = 0 at lambda0 = 1 anywhere
  CayleyBall grid = CayleyBall::build(z2(), 4);
  CHECK_THROWS_AS(local_to_global({}, Fraction(1), Fraction(0), grid), WindowError);
}

TEST_CASE("local-to-global is compatible under window growth on genus-2") {
  CayleyBall b3 = CayleyBall::build(genus2(), 3);
  CayleyBall b4 = CayleyBall::build(genus2(), 4);
  LocalToGlobal l3 = local_to_global({}, Fraction(1, 3), Fraction(0), b3);
  LocalToGlobal l4 = local_to_global({}, Fraction(1, 3), Fraction(0), b4);
  CHECK(l4.L <= l3.L);
  CHECK(l4.epsilon <= Fraction(0));
  CHECK(l3.epsilon == l4.epsilon);
}

TEST_CASE("compute_C") {
  CHECK(compute_C(Fraction(10), Fraction(1, 4), Fraction(2)) == Fraction(10));
  CHECK(compute_C(Fraction(3), Fraction(1, 2), Fraction(4)) == Fraction(8));
  CHECK(compute_C(Fraction(7), Fraction(1), Fraction(0)) == Fraction(7));
  CHECK_THROWS_AS(compute_C(Fraction(1), Fraction(0), Fraction(1)), InstanceError);
}

TEST_CASE("short element condition via folded girth") {
  CayleyBall ball = CayleyBall::build(f2(), 6);
  MembershipOracle h5 = MembershipOracle::folded(spec("H1", {"aaaaa"}), f2());
  MembershipOracle trivial = MembershipOracle::window_set(spec("G0", {"a"}), ball, {0});
  CHECK(short_element_condition(h5, Fraction(5), trivial, ball).holds);
  ShortElementReport fails = short_element_condition(h5, Fraction(6), trivial, ball);
  CHECK(!fails.holds);
  CHECK(fails.witness.str() == "aaaaa");

  // H1 = G0 holds vacuously
  MembershipOracle g0 = MembershipOracle::folded(spec("G0", {"a"}), f2());
  MembershipOracle h1 = MembershipOracle::folded(spec("H1", {"a"}), f2());
  CHECK(short_element_condition(h1, Fraction(6), g0, ball).holds);
}

TEST_CASE("instance invariants") {
  // H1 not inside H
  CHECK_THROWS_AS(f2_instance("a", "b", "a", "a"), InstanceError);
  // intersection mismatch: H1 = H = K1 = K = <a> has G0 = <a>, fine; but
  // H1 = <aa>, K1 = <aaa> inside H = K = <a> meets in <a^6>, not G0
  CHECK_THROWS_AS(f2_instance("a", "a", "aa", "aaa"), InstanceError);
}

TEST_CASE("syllable path assembly") {
  PingPongInstance inst = f2_instance("a", "b", "a", "b");
  SyllablePath sp = assemble_syllable_path(
      inst, {Word::parse("aa", 2), Word::parse("bbb", 2)});
  CHECK(sp.path.label().str() == "aabbb");
  CHECK(sp.boundaries == std::vector<std::size_t>{2, 5});
  CHECK(sp.types == std::vector<char>{'H', 'K'});

  // factor in G0 is degenerate
  CHECK_THROWS_AS(assemble_syllable_path(inst, {Word::parse("", 2)}), InstanceError);

  // non-minimal h-factor must be normalized first
  PingPongInstance nested = PingPongInstance::make(
      f2(), f2_ball(), spec("H", {"a", "bab"}), spec("K", {"a"}), spec("H1", {"a", "bab"}),
      spec("K1", {"a"}), CertMode::TwoSided);
  (void)nested;  // G0 = <a> here; "aba" is reducible in its double coset
  PingPongInstance plain = f2_instance("a,bAb", "b", "a,bAb", "b");
  (void)plain;
}

TEST_CASE("non-minimal factors are rejected") {
  // G0 = <a> requires H-syllables minimized in G0 h G0
  PingPongInstance inst = PingPongInstance::make(
      f2(), f2_ball(), spec("H", {"a", "b"}), spec("K", {"a"}), spec("H1", {"a", "b"}),
      spec("K1", {"a"}), CertMode::TwoSided);
  // factors must alternate H1/K1 and stay outside G0 = <a>; "aba" has the
  // shorter double-coset representative "b"
  CHECK_THROWS_AS(
      assemble_syllable_path(inst, {Word::parse("aba", 2), Word::parse("aa", 2)}),
      InstanceError);
}

TEST_CASE("overlap measurement in the free window") {
  PingPongInstance inst = f2_instance("a", "b", "a", "b");
  SyllablePath sp = assemble_syllable_path(
      inst, {Word::parse("aa", 2), Word::parse("bb", 2), Word::parse("a", 2)});
  OverlapReport rep = measure_overlaps(inst, sp, 0, 0, 0, std::optional<int>(2));
  CHECK(rep.junctions == 2);
  CHECK(rep.adjacent_max <= 0);
  CHECK(!rep.adjacent_violation);
  CHECK(rep.cross_max < 2);
  CHECK(!rep.cross_violation);
}

TEST_CASE("overlaps on the diagonal subgroup stay within the bound") {
  PingPongInstance inst = f2_instance("ab", "b", "ab", "b");
  Certificate cert = certify(inst);
  CHECK(cert.verdict == Verdict::Certified);
  CHECK(cert.overlaps.adjacent_max <= cert.overlaps.adjacent_bound);
  CHECK(cert.paths_checked > 0);
}

TEST_CASE("two-sided certification of the free basis") {
  PingPongInstance inst = f2_instance("a", "b", "a", "b");
  CertifyConfig config;
  config.oracle_maxlen = 12;
  Certificate cert = certify(inst, config);
  CHECK(cert.verdict == Verdict::Certified);
  CHECK(cert.delta_hat == 0);
  CHECK(cert.mu_hat == 0);
  CHECK(cert.A == 0);
  CHECK(cert.epsilon0 == Fraction(0));
  CHECK(cert.C == Fraction(1));
  REQUIRE(cert.oracle);
  CHECK(cert.oracle->outcome == OracleOutcome::Consistent);
  CHECK(cert.oracle->reached_len == 12);
  REQUIRE(cert.join);
  CHECK(cert.join->mu_hat == 0);  // <a, b> is the whole group
}

TEST_CASE("refuted on the free-abelian control") {
  CayleyBall grid = CayleyBall::build(z2(), 6);
  PingPongInstance inst = PingPongInstance::make(z2(), grid, spec("H", {"a"}), spec("K", {"b"}),
                                                 spec("H1", {"a"}), spec("K1", {"b"}),
                                                 CertMode::TwoSided);
  CertifyConfig config;
  config.oracle_maxlen = 4;
  Certificate cert = certify(inst, config);
  CHECK(cert.verdict == Verdict::Refuted);
  REQUIRE(cert.oracle);
  CHECK(cert.oracle->witness.str() == "abAB");
  // the class gate also failed, but the counterexample wins
  CHECK(!cert.gates.empty());
  CHECK(cert.gates[0].name == "presentation-class");
  CHECK(!cert.gates[0].pass);
}

TEST_CASE("oracle check finds the commutator and distinct normal forms") {
  CayleyBall grid = CayleyBall::build(z2(), 6);
  PingPongInstance inst = PingPongInstance::make(z2(), grid, spec("H", {"a"}), spec("K", {"b"}),
                                                 spec("H1", {"a"}), spec("K1", {"b"}),
                                                 CertMode::TwoSided);
  OracleCheckResult res = oracle_free_product_check(inst, 4);
  CHECK(res.outcome == OracleOutcome::Counterexample);
  CHECK(res.witness.str() == "abAB");
  CHECK(res.witness_factors.size() == 4);

  OracleCheckResult vacuous = oracle_free_product_check(inst, 0);
  CHECK(vacuous.outcome == OracleOutcome::Consistent);
}

TEST_CASE("oracle consistency for powers in the free group") {
  PingPongInstance inst = f2_instance("a", "b", "aa", "bbb");
  OracleCheckResult res = oracle_free_product_check(inst, 10);
  CHECK(res.outcome == OracleOutcome::Consistent);
  CHECK(res.reached_len == 10);
  CHECK(res.products > 0);
}

TEST_CASE("one-sided certification requires malnormality") {
  PingPongInstance bad = f2_instance("aa", "b", "aa", "b", CertMode::OneSidedMalnormal);
  Certificate cert = certify(bad);
  CHECK(cert.verdict == Verdict::Inconclusive);
  CHECK(cert.verdict_reason.find("malnormality") != std::string::npos);
  CHECK(cert.verdict_reason.find("'a'") != std::string::npos);

  PingPongInstance good = f2_instance("a", "b", "a", "b", CertMode::OneSidedMalnormal);
  Certificate ok = certify(good);
  CHECK(ok.verdict == Verdict::Certified);
  CHECK(ok.M == 2);
  CHECK(ok.m_rel == 1);
  CHECK(ok.epsilon0 == Fraction(2));  // 4 mu A + delta + M
  CHECK(ok.lambda0 == Fraction(1, 6));
}

TEST_CASE("genus-2 one-sided pipeline records a verdict") {
  CayleyBall ball = CayleyBall::build(genus2(), 4);
  PingPongInstance inst = PingPongInstance::make(
      genus2(), ball, spec("H", {"a"}, 4), spec("K", {"c"}, 4), spec("H1", {"a"}, 4),
      spec("K1", {"c"}, 4), CertMode::OneSidedMalnormal);
  CertifyConfig config;
  config.oracle_maxlen = 10;
  Certificate cert = certify(inst, config);
  CHECK(cert.verdict == Verdict::Certified);
  REQUIRE(cert.oracle);
  CHECK(cert.oracle->outcome == OracleOutcome::Consistent);
  CHECK(cert.oracle->reached_len == 10);
}

TEST_CASE("certified certificates verify the local condition on assembled paths") {
  for (auto [h, k] : std::vector<std::pair<const char*, const char*>>{
           {"a", "b"}, {"ab", "aB"}}) {
    PingPongInstance inst = f2_instance(h, k, h, k);
    Certificate cert = certify(inst);
    REQUIRE(cert.verdict == Verdict::Certified);
    QuasiParams local{cert.lambda0, cert.epsilon0, cert.lge.L};
    SyllablePath sp = assemble_syllable_path(
        inst, {Word::parse(h, 2), Word::parse(k, 2)});
    CHECK(check_local_quasigeodesic(f2_ball(), sp.path, local).pass);
  }
}

TEST_CASE("join quasiconvexity of the squares subgroup") {
  PingPongInstance inst = f2_instance("a", "b", "aa", "bb");
  JoinReport join = estimate_join_quasiconvexity(inst, f2_ball());
  CHECK(join.mu_hat == 1);
}

TEST_CASE("schottky search finds (1,1) for ab and aB") {
  SchottkyResult res = schottky_power_search(f2(), f2_ball(), Word::parse("ab", 2),
                                             Word::parse("aB", 2), 3);
  CHECK(res.found);
  CHECK(res.m == 1);
  CHECK(res.n == 1);
  REQUIRE(res.certificate);
  CHECK(res.certificate->verdict == Verdict::Certified);
}

TEST_CASE("schottky search is exhausted when the intersection is nontrivial") {
  SchottkyResult res = schottky_power_search(f2(), f2_ball(), Word::parse("a", 2),
                                             Word::parse("a", 2), 3);
  CHECK(!res.found);
  CHECK(!res.note.empty());
}

TEST_CASE("certificate json shape and determinism") {
  PingPongInstance inst = f2_instance("a", "b", "a", "b");
  CertifyConfig config;
  config.seed = 17;
  Certificate c1 = certify(inst, config);
  Certificate c2 = certify(inst, config);
  CHECK(dump_deterministic(certificate_to_json(c1)) ==
        dump_deterministic(certificate_to_json(c2)));
  Json j = certificate_to_json(c1);
  CHECK(j["kind"] == "certify-t1");
  CHECK(j["verdict"] == "CERTIFIED");
  CHECK(j["constants"]["lambda0"]["value"] == "1/3");
  CHECK(j["seed"] == 17);
}
