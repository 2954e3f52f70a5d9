#include "pingpong/json_io.hpp"

namespace pingpong {

std::string dump_deterministic(const Json& j) { return j.dump(2) + "\n"; }

Json ball_to_json(const CayleyBall& ball) {
  Json j;
  j["format_version"] = 1;
  j["presentation_hash"] = ball.oracle().presentation().hash();
  j["oracle_kind"] = to_string(ball.oracle().kind());
  j["radius"] = ball.radius();
  j["vertex_count"] = ball.vertex_count();
  Json spheres = Json::array();
  for (int k = 0; k <= ball.radius(); ++k) spheres.push_back(ball.sphere_size(k));
  j["sphere_sizes"] = spheres;
  Json vertices = Json::array();
  for (int v = 0; v < ball.vertex_count(); ++v) vertices.push_back(ball.word(v).str());
  j["vertices"] = vertices;
  Json edges = Json::array();
  for (int v = 0; v < ball.vertex_count(); ++v) {
    Json row = Json::array();
    for (int t : ball.neighbors(v)) row.push_back(t);
    edges.push_back(row);
  }
  j["adjacency"] = edges;
  return j;
}

Json relative_ball_to_json(const RelativeBall& rel, const std::string& subgroup_name) {
  Json j;
  j["format_version"] = 1;
  j["subgroup"] = subgroup_name;
  j["radius"] = rel.radius();
  j["vertex_count"] = rel.vertex_count();
  Json counts = Json::array();
  for (int r = 0; r <= rel.radius(); ++r) counts.push_back(rel.vertices_within(r));
  j["vertices_within_radius"] = counts;
  Json reps = Json::array();
  for (int v = 0; v < rel.vertex_count(); ++v) reps.push_back(rel.rep(v).str());
  j["coset_representatives"] = reps;
  return j;
}

Json delta_to_json(const DeltaReport& rep, const std::string& presentation_hash, int radius) {
  Json j;
  j["presentation_hash"] = presentation_hash;
  j["window_radius"] = radius;
  j["delta_hat"] = rep.delta_hat;
  j["provenance"] = "window-empirical";
  j["triangles_measured"] = rep.triangles_measured;
  j["triangles_skipped"] = rep.triangles_skipped;
  j["mode"] = rep.sampled ? "sampled" : "exhaustive";
  if (rep.sampled) j["seed"] = rep.seed;
  return j;
}

Json mu_to_json(const MuReport& rep, const std::string& subgroup_name) {
  Json j;
  j["subgroup"] = subgroup_name;
  j["mu_hat"] = rep.mu_hat;
  j["provenance"] = "window-empirical";
  j["window_radius"] = rep.window_radius;
  j["pairs_measured"] = rep.pairs_measured;
  j["pairs_skipped"] = rep.pairs_skipped;
  return j;
}

Json malnormal_to_json(const MalnormalReport& rep, const std::string& subgroup_name) {
  Json j;
  j["subgroup"] = subgroup_name;
  j["verdict"] = rep.violation ? "violation" : "no-violation";
  j["window_radius"] = rep.window_radius;
  if (rep.violation) {
    j["conjugator"] = rep.conjugator.str();
    j["witness"] = rep.witness.str();
  }
  j["pairs_skipped"] = rep.pairs_skipped;
  return j;
}

Json oracle_result_to_json(const OracleCheckResult& res) {
  Json j;
  switch (res.outcome) {
    case OracleOutcome::Consistent: j["outcome"] = "consistent"; break;
    case OracleOutcome::Counterexample: j["outcome"] = "counterexample"; break;
    case OracleOutcome::Partial: j["outcome"] = "partial"; break;
  }
  j["maxlen"] = res.maxlen;
  j["reached_len"] = res.reached_len;
  j["products"] = res.products;
  if (res.outcome == OracleOutcome::Counterexample) {
    j["witness"] = res.witness.str();
    Json fac = Json::array();
    for (const Word& f : res.witness_factors) fac.push_back(f.str());
    j["witness_factors"] = fac;
  }
  return j;
}

Json certificate_to_json(const Certificate& cert) {
  Json j;
  j["schema_version"] = 1;
  j["kind"] = cert.mode == CertMode::TwoSided ? "certify-t1" : "certify-t2";
  j["presentation_hash"] = cert.presentation_hash;
  j["oracle_kind"] = cert.oracle_kind;
  j["window_radius"] = cert.window_radius;
  Json sub;
  sub["H"] = cert.H;
  sub["K"] = cert.K;
  sub["H1"] = cert.H1;
  sub["K1"] = cert.K1;
  j["subgroups"] = sub;

  Json constants;
  constants["delta_hat"] = {{"value", cert.delta_hat}, {"provenance", "window-empirical"}};
  constants["mu_hat"] = {{"value", cert.mu_hat}, {"provenance", "window-empirical"}};
  if (cert.mu1_hat >= 0)
    constants["mu1_hat"] = {{"value", cert.mu1_hat}, {"provenance", "window-empirical"}};
  constants["A"] = {{"value", cert.A}, {"provenance", "paper-formula"}};
  constants["lambda0"] = {{"value", cert.lambda0.str()}, {"provenance", "paper-formula"}};
  constants["epsilon0"] = {{"value", cert.epsilon0.str()}, {"provenance", "paper-formula"}};
  constants["local_to_global"] = {{"L", cert.lge.L.str()},
                                  {"lambda", cert.lge.lambda.str()},
                                  {"epsilon", cert.lge.epsilon.str()},
                                  {"provenance", cert.lge.provenance}};
  constants["C"] = {{"value", cert.C.str()}, {"provenance", "paper-formula"}};
  if (cert.mode == CertMode::OneSidedMalnormal) {
    constants["m_rel"] = {{"value", cert.m_rel}, {"provenance", "window-empirical"}};
    constants["M"] = {{"value", cert.M}, {"provenance", "paper-formula"}};
  }
  j["constants"] = constants;

  Json gates = Json::array();
  for (const GateRecord& g : cert.gates) {
    Json gj;
    gj["name"] = g.name;
    gj["outcome"] = g.pass ? "pass" : "fail";
    gj["detail"] = g.detail;
    gates.push_back(gj);
  }
  j["gates"] = gates;

  Json sweep;
  sweep["paths_checked"] = cert.paths_checked;
  sweep["adjacent_overlap_max"] = cert.overlaps.adjacent_max;
  sweep["adjacent_overlap_bound"] = cert.overlaps.adjacent_bound;
  if (cert.mode == CertMode::OneSidedMalnormal) {
    sweep["cross_overlap_max"] = cert.overlaps.cross_max;
    sweep["cross_overlap_bound"] = cert.overlaps.cross_bound;
  }
  sweep["junctions"] = cert.overlaps.junctions;
  j["path_sweep"] = sweep;

  j["oracle_enabled"] = cert.oracle_enabled;
  if (cert.oracle) j["oracle"] = oracle_result_to_json(*cert.oracle);

  if (cert.join) {
    j["join_quasiconvexity"] = {{"mu_hat", cert.join->mu_hat},
                                {"window_radius", cert.join->window_radius},
                                {"provenance", "window-empirical"}};
  } else {
    j["join_quasiconvexity"] = nullptr;
  }

  j["verdict"] = to_string(cert.verdict);
  j["verdict_reason"] = cert.verdict_reason;
  j["seed"] = cert.seed;
  Json notes = Json::array();
  for (const std::string& n : cert.notes) notes.push_back(n);
  j["notes"] = notes;
  return j;
}

Json schottky_to_json(const SchottkyResult& res) {
  Json j;
  j["found"] = res.found;
  if (res.found) {
    j["m"] = res.m;
    j["n"] = res.n;
    j["certificate"] = certificate_to_json(*res.certificate);
  }
  if (!res.note.empty()) j["note"] = res.note;
  Json attempts = Json::array();
  for (const std::string& a : res.attempts) attempts.push_back(a);
  j["attempts"] = attempts;
  return j;
}

}  // namespace pingpong
