#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "poscone/commutant.hpp"
#include "poscone/constructions.hpp"
#include "poscone/ideals.hpp"
#include "poscone/norms.hpp"
#include "poscone/operator.hpp"
#include "poscone/sampler.hpp"
#include "poscone/spectral.hpp"

namespace poscone {

// Matrix interchange:
//   {"dim": n, "q": 2.0, "format": "dense", "entries": [[...], ...]}
//   {"dim": n, "q": 2.0, "format": "coo", "triplets": [[i, j, v], ...]}
// Readers reject NaN/Inf values, negative entries, and shape mismatches
// with a ParseError.

nlohmann::json operator_to_json(const TruncatedPositiveOperator& T);
TruncatedPositiveOperator operator_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const GeneralVector& x);
GeneralVector vector_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const NormCertificate& c);
nlohmann::json ideal_report_to_json(const IdealReport& r);
nlohmann::json perron_to_json(const PerronPair& p);
nlohmann::json local_radius_to_json(const LocalRadiusEstimate& e);
nlohmann::json feasibility_to_json(const FeasibilityResult& r);

nlohmann::json constraint_to_json(const CommutantConstraint& c);
CommutantConstraint constraint_from_json(const nlohmann::json& j);

nlohmann::json recipe_to_json(const ConstructionRecipe& r);
ConstructionRecipe recipe_from_json(const nlohmann::json& j);

nlohmann::json collapse_report_to_json(const TheoremCollapseReport& r);

nlohmann::json ensemble_spec_to_json(const EnsembleSpec& s);
EnsembleSpec ensemble_spec_from_json(const nlohmann::json& j);

nlohmann::json typicality_to_json(const TypicalityReport& r);
std::string typicality_to_csv(const TypicalityReport& r);

TruncatedPositiveOperator read_operator_file(const std::string& path);
nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace poscone
