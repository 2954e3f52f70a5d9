#pragma once

#include <string>

#include "json.hpp"
#include "pingpong/cayley_ball.hpp"
#include "pingpong/certifier.hpp"
#include "pingpong/subgroup.hpp"

namespace pingpong {

// All emitted documents use insertion-ordered JSON with fixed field order,
// so identical runs are byte-identical. Schemas are documented in
// docs/formats.md and docs/certificate-schema.md.
using Json = nlohmann::ordered_json;

Json ball_to_json(const CayleyBall& ball);
Json relative_ball_to_json(const RelativeBall& rel, const std::string& subgroup_name);
Json delta_to_json(const DeltaReport& rep, const std::string& presentation_hash, int radius);
Json mu_to_json(const MuReport& rep, const std::string& subgroup_name);
Json malnormal_to_json(const MalnormalReport& rep, const std::string& subgroup_name);
Json certificate_to_json(const Certificate& cert);
Json oracle_result_to_json(const OracleCheckResult& res);
Json schottky_to_json(const SchottkyResult& res);

std::string dump_deterministic(const Json& j);

}  // namespace pingpong
