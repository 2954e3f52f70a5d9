// Batch command-line front end: every pipeline writes a JSON result
// document (byte-stable across identical invocations) plus a short summary
// on stdout. Exit codes: 0 certified/success, 2 inconclusive/exhausted,
// 3 refuted/violation, 1 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pingpong/abstract_pingpong.hpp"
#include "pingpong/certifier.hpp"
#include "pingpong/json_io.hpp"
#include "pingpong/residual.hpp"

using namespace pingpong;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitRefuted = 3;

Presentation load_presentation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open presentation file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_presentation(ss.str());
}

// A subgroup argument is either a name defined by a sub: line or a
// comma-separated list of words.
SubgroupSpec subgroup_arg(const Presentation& pres, const std::string& name,
                          const std::string& arg) {
  SubgroupSpec spec;
  spec.name = name;
  auto it = pres.subgroups.find(arg);
  if (it != pres.subgroups.end()) {
    spec.generators = it->second;
    return spec;
  }
  std::istringstream ss(arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) spec.generators.push_back(Word::parse(tok, pres.alphabet));
  }
  if (spec.generators.empty()) throw ParseError("empty subgroup argument '" + arg + "'");
  return spec;
}

Fraction parse_fraction(const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return Fraction(std::stoll(text));
  return Fraction(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
}

void emit(const Json& j, const std::string& out_path) {
  std::string doc = dump_deterministic(j);
  if (out_path.empty()) {
    std::cout << doc;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ParseError("cannot write output file '" + out_path + "'");
    out << doc;
    std::cout << "result written to " << out_path << "\n";
  }
}

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Certified: return kExitOk;
    case Verdict::Inconclusive: return kExitInconclusive;
    case Verdict::Refuted: return kExitRefuted;
  }
  return kExitUsage;
}

struct CommonArgs {
  std::string pres_path;
  int radius = 6;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--pres", args.pres_path, "presentation file")->required();
  cmd->add_option("--radius", args.radius, "Cayley ball window radius");
  cmd->add_option("--out", args.out_path, "write the JSON result to this path");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"window certification of free-product subgroup structure in "
               "negatively curved groups"};
  app.require_subcommand(1);

  // ball
  auto* cmd_ball = app.add_subcommand("ball", "build and export a Cayley ball");
  CommonArgs ball_args;
  add_common(cmd_ball, ball_args);

  // delta
  auto* cmd_delta = app.add_subcommand("delta", "estimate the hyperbolicity constant");
  CommonArgs delta_args;
  add_common(cmd_delta, delta_args);
  std::uint64_t delta_samples = 0, delta_seed = 1;
  cmd_delta->add_option("--sampled", delta_samples, "sample this many triangles instead of all");
  cmd_delta->add_option("--seed", delta_seed, "sampling seed");

  // mu
  auto* cmd_mu = app.add_subcommand("mu", "estimate subgroup quasiconvexity");
  CommonArgs mu_args;
  add_common(cmd_mu, mu_args);
  std::string mu_sub;
  cmd_mu->add_option("--sub", mu_sub, "subgroup (name or comma-separated words)")->required();

  // malnormal
  auto* cmd_mal = app.add_subcommand("malnormal", "window malnormality check");
  CommonArgs mal_args;
  add_common(cmd_mal, mal_args);
  std::string mal_sub;
  cmd_mal->add_option("--sub", mal_sub, "subgroup (name or comma-separated words)")->required();

  // relball
  auto* cmd_rel = app.add_subcommand("relball", "build a relative Cayley graph ball");
  CommonArgs rel_args;
  add_common(cmd_rel, rel_args);
  std::string rel_sub;
  int rel_radius = 2;
  cmd_rel->add_option("--sub", rel_sub, "subgroup (name or comma-separated words)")->required();
  cmd_rel->add_option("--rel-radius", rel_radius, "relative ball radius");

  // certify-t1 / certify-t2
  struct CertArgs {
    CommonArgs common;
    std::string H, K, H1, K1;
    int maxlen = 12;
    std::uint64_t seed = 1;
    std::int64_t budget = 2'000'000;
    bool no_oracle = false;
    std::string supplied_lge;
  };
  auto add_cert = [&](CLI::App* cmd, CertArgs& args, bool two_sided) {
    add_common(cmd, args.common);
    cmd->add_option("--H", args.H, "subgroup H")->required();
    cmd->add_option("--K", args.K, "subgroup K")->required();
    cmd->add_option("--H1", args.H1, "subgroup H1 (default: H)");
    if (two_sided) cmd->add_option("--K1", args.K1, "subgroup K1 (default: K)");
    cmd->add_option("--maxlen", args.maxlen, "oracle cross-check length");
    cmd->add_option("--seed", args.seed, "seed recorded in the certificate");
    cmd->add_option("--budget", args.budget, "oracle product budget");
    cmd->add_flag("--no-oracle", args.no_oracle, "skip the brute-force cross-check");
    cmd->add_option("--supplied-lge", args.supplied_lge,
                    "literature constants L,LAMBDA,EPS instead of the window-empirical search");
  };
  auto* cmd_t1 = app.add_subcommand("certify-t1", "two-sided free-product certificate");
  CertArgs t1_args;
  add_cert(cmd_t1, t1_args, true);
  auto* cmd_t2 = app.add_subcommand("certify-t2", "malnormal one-sided free-product certificate");
  CertArgs t2_args;
  add_cert(cmd_t2, t2_args, false);

  // oracle
  auto* cmd_oracle = app.add_subcommand("oracle", "brute-force free-product cross-check only");
  CertArgs oracle_args;
  add_cert(cmd_oracle, oracle_args, true);

  // pingpong-abstract
  auto* cmd_abs = app.add_subcommand("pingpong-abstract",
                                     "abstract ping-pong hypotheses on the window action");
  CommonArgs abs_args;
  add_common(cmd_abs, abs_args);
  std::string abs_h = "a", abs_k = "b";
  int abs_maxsyll = 3, abs_elems = 2;
  cmd_abs->add_option("--H", abs_h, "generator word of H");
  cmd_abs->add_option("--K", abs_k, "generator word of K");
  cmd_abs->add_option("--maxsyll", abs_maxsyll, "verify products up to this syllable count");
  cmd_abs->add_option("--elems", abs_elems, "list powers up to this exponent");

  // schottky
  auto* cmd_sch = app.add_subcommand("schottky", "search powers (m, n) for a certified pair");
  CommonArgs sch_args;
  add_common(cmd_sch, sch_args);
  std::string sch_h, sch_k;
  int sch_maxpow = 4, sch_maxlen = 12;
  std::uint64_t sch_seed = 1;
  cmd_sch->add_option("--h", sch_h, "base word h")->required();
  cmd_sch->add_option("--k", sch_k, "base word k")->required();
  cmd_sch->add_option("--maxpow", sch_maxpow, "largest power tried");
  cmd_sch->add_option("--maxlen", sch_maxlen, "oracle cross-check length");
  cmd_sch->add_option("--seed", sch_seed, "seed recorded in certificates");

  // deep-quotient
  auto* cmd_dq = app.add_subcommand("deep-quotient",
                                    "find a finite quotient with no short kernel words");
  int dq_rank = 2, dq_n = 4, dq_max_degree = 10, dq_tries = 400;
  std::uint64_t dq_seed = 1;
  std::string dq_out;
  cmd_dq->add_option("--rank", dq_rank, "free group rank");
  cmd_dq->add_option("--n", dq_n, "required depth")->required();
  cmd_dq->add_option("--max-degree", dq_max_degree, "largest permutation degree tried");
  cmd_dq->add_option("--budget", dq_tries, "random candidates per degree");
  cmd_dq->add_option("--seed", dq_seed, "search seed");
  cmd_dq->add_option("--out", dq_out, "write the JSON result to this path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_ball->parsed()) {
      Presentation pres = load_presentation(ball_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, ball_args.radius);
      emit(ball_to_json(ball), ball_args.out_path);
      std::cout << "ball: radius " << ball.radius() << ", " << ball.vertex_count()
                << " vertices\n";
      return kExitOk;
    }
    if (cmd_delta->parsed()) {
      Presentation pres = load_presentation(delta_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, delta_args.radius);
      DeltaMode mode;
      if (delta_samples > 0) {
        mode.exhaustive = false;
        mode.sample_count = delta_samples;
        mode.seed = delta_seed;
      }
      DeltaReport rep = estimate_delta(ball, mode);
      emit(delta_to_json(rep, pres.hash(), ball.radius()), delta_args.out_path);
      std::cout << "delta_hat = " << rep.delta_hat << " (window radius " << ball.radius()
                << ")\n";
      return kExitOk;
    }
    if (cmd_mu->parsed()) {
      Presentation pres = load_presentation(mu_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, mu_args.radius);
      SubgroupSpec spec = subgroup_arg(pres, "H", mu_sub);
      MembershipOracle sub = oracle.kind() == OracleKind::FreeGroup
                                 ? MembershipOracle::folded(spec, oracle)
                                 : MembershipOracle::window(spec, ball);
      MuReport rep = estimate_mu(sub, ball);
      emit(mu_to_json(rep, mu_sub), mu_args.out_path);
      std::cout << "mu_hat = " << rep.mu_hat << " (window radius " << rep.window_radius
                << ")\n";
      return kExitOk;
    }
    if (cmd_mal->parsed()) {
      Presentation pres = load_presentation(mal_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, mal_args.radius);
      SubgroupSpec spec = subgroup_arg(pres, "H", mal_sub);
      MembershipOracle sub = oracle.kind() == OracleKind::FreeGroup
                                 ? MembershipOracle::folded(spec, oracle)
                                 : MembershipOracle::window(spec, ball);
      MalnormalReport rep = check_malnormal(sub, ball);
      emit(malnormal_to_json(rep, mal_sub), mal_args.out_path);
      if (rep.violation) {
        std::cout << "violation: g = '" << rep.conjugator.str() << "', witness '"
                  << rep.witness.str() << "'\n";
        return kExitRefuted;
      }
      std::cout << "no violation in window radius " << rep.window_radius << "\n";
      return kExitOk;
    }
    if (cmd_rel->parsed()) {
      Presentation pres = load_presentation(rel_args.pres_path);
      WordOracle oracle(pres);
      int ambient_radius = std::max(rel_args.radius, 2 * rel_radius + 1);
      CayleyBall ball = CayleyBall::build(oracle, ambient_radius);
      SubgroupSpec spec = subgroup_arg(pres, "H", rel_sub);
      MembershipOracle sub = oracle.kind() == OracleKind::FreeGroup
                                 ? MembershipOracle::folded(spec, oracle)
                                 : MembershipOracle::window(spec, ball);
      RelativeBall rel = RelativeBall::build(sub, rel_radius, oracle.alphabet());
      emit(relative_ball_to_json(rel, rel_sub), rel_args.out_path);
      std::cout << "relative ball: radius " << rel.radius() << ", " << rel.vertex_count()
                << " cosets\n";
      return kExitOk;
    }

    auto run_cert = [&](const CertArgs& args, CertMode mode, bool oracle_only) {
      Presentation pres = load_presentation(args.common.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, args.common.radius);
      SubgroupSpec H = subgroup_arg(pres, "H", args.H);
      SubgroupSpec K = subgroup_arg(pres, "K", args.K);
      SubgroupSpec H1 = args.H1.empty() ? SubgroupSpec{"H1", H.generators}
                                        : subgroup_arg(pres, "H1", args.H1);
      SubgroupSpec K1 = (mode == CertMode::OneSidedMalnormal || args.K1.empty())
                            ? SubgroupSpec{"K1", K.generators}
                            : subgroup_arg(pres, "K1", args.K1);
      PingPongInstance inst = PingPongInstance::make(oracle, ball, H, K, H1, K1, mode);
      if (oracle_only) {
        OracleCheckResult res = oracle_free_product_check(inst, args.maxlen, args.budget);
        emit(oracle_result_to_json(res), args.common.out_path);
        switch (res.outcome) {
          case OracleOutcome::Consistent:
            std::cout << "consistent to length " << res.reached_len << "\n";
            return kExitOk;
          case OracleOutcome::Partial:
            std::cout << "partial: reached length " << res.reached_len << " of "
                      << res.maxlen << "\n";
            return kExitInconclusive;
          case OracleOutcome::Counterexample:
            std::cout << "counterexample '" << res.witness.str() << "'\n";
            return kExitRefuted;
        }
        return kExitUsage;
      }
      CertifyConfig config;
      config.oracle_enabled = !args.no_oracle;
      config.oracle_maxlen = args.maxlen;
      config.oracle_budget = args.budget;
      config.seed = args.seed;
      if (!args.supplied_lge.empty()) {
        std::istringstream ss(args.supplied_lge);
        std::string tok;
        std::vector<Fraction> parts;
        while (std::getline(ss, tok, ',')) parts.push_back(parse_fraction(tok));
        if (parts.size() != 3)
          throw ParseError("--supplied-lge expects L,LAMBDA,EPS");
        config.lge.supplied = true;
        config.lge.L = parts[0];
        config.lge.lambda = parts[1];
        config.lge.epsilon = parts[2];
      }
      Certificate cert = certify(inst, config);
      emit(certificate_to_json(cert), args.common.out_path);
      std::cout << "verdict: " << to_string(cert.verdict);
      if (cert.verdict != Verdict::Certified) std::cout << " (" << cert.verdict_reason << ")";
      std::cout << "\n";
      return verdict_exit(cert.verdict);
    };

    if (cmd_t1->parsed()) return run_cert(t1_args, CertMode::TwoSided, false);
    if (cmd_t2->parsed()) return run_cert(t2_args, CertMode::OneSidedMalnormal, false);
    if (cmd_oracle->parsed()) return run_cert(oracle_args, CertMode::TwoSided, true);

    if (cmd_abs->parsed()) {
      Presentation pres = load_presentation(abs_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, abs_args.radius);
      Word h = Word::parse(abs_h, pres.alphabet);
      Word k = Word::parse(abs_k, pres.alphabet);
      AbstractPingPongInstance inst = make_left_multiplication_instance(ball, h, k, abs_elems);
      PingPongReport rep = abstract_ping_pong_check(inst, abs_maxsyll);
      Json j;
      j["set_size"] = inst.set_size;
      j["index_h"] = rep.index_h;
      j["index_k"] = rep.index_k;
      j["maxsyll"] = rep.maxsyll;
      j["products_checked"] = rep.products_checked;
      j["outcome"] = rep.outcome == PingPongOutcome::Verified
                         ? "verified"
                         : rep.outcome == PingPongOutcome::IndexGuard ? "index-guard"
                                                                      : "hypotheses-fail";
      j["reason"] = rep.reason;
      emit(j, abs_args.out_path);
      std::cout << j["outcome"].get<std::string>() << ": " << rep.reason << "\n";
      if (rep.outcome == PingPongOutcome::Verified) return kExitOk;
      if (rep.outcome == PingPongOutcome::IndexGuard) return kExitInconclusive;
      return kExitRefuted;
    }

    if (cmd_sch->parsed()) {
      Presentation pres = load_presentation(sch_args.pres_path);
      WordOracle oracle(pres);
      CayleyBall ball = CayleyBall::build(oracle, sch_args.radius);
      Word h = Word::parse(sch_h, pres.alphabet);
      Word k = Word::parse(sch_k, pres.alphabet);
      CertifyConfig config;
      config.oracle_maxlen = sch_maxlen;
      config.seed = sch_seed;
      SchottkyResult res = schottky_power_search(oracle, ball, h, k, sch_maxpow, config);
      emit(schottky_to_json(res), sch_args.out_path);
      if (res.found) {
        std::cout << "found (m, n) = (" << res.m << ", " << res.n << ")\n";
        return kExitOk;
      }
      std::cout << "exhausted" << (res.note.empty() ? "" : ": " + res.note) << "\n";
      return kExitInconclusive;
    }

    if (cmd_dq->parsed()) {
      QuotientSearchBudget budget;
      budget.max_degree = dq_max_degree;
      budget.tries_per_degree = dq_tries;
      budget.seed = dq_seed;
      DeepQuotientResult res = find_deep_quotient(dq_rank, dq_n, budget);
      Json j;
      j["found"] = res.found;
      j["rank"] = dq_rank;
      j["required_depth"] = dq_n;
      j["candidates_tried"] = res.candidates_tried;
      j["seed"] = res.seed;
      if (res.found) {
        j["degree"] = res.spec.degree;
        Json images = Json::array();
        for (const Perm& p : res.spec.images) images.push_back(cycles_str(p));
        j["images"] = images;
        j["depth"] = res.report.depth;
        j["witness"] = res.report.witness.str();
        j["verified"] = res.report.verified;
      }
      emit(j, dq_out);
      if (res.found) {
        std::cout << "found: degree " << res.spec.degree << ", depth " << res.report.depth
                  << "\n";
        return kExitOk;
      }
      std::cout << "exhausted\n";
      return kExitInconclusive;
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedPresentation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const WindowError& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return kExitInconclusive;
  }
  return kExitUsage;
}
