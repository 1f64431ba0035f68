#pragma once

#include <json.hpp>

#include "hamfactor/classifier.hpp"
#include "hamfactor/dsolver.hpp"
#include "hamfactor/integrability.hpp"
#include "hamfactor/jordan.hpp"
#include "hamfactor/matrix.hpp"

namespace hamfactor {

using Json = nlohmann::json;

// All rationals travel as decimal strings "p" or "p/q"; floats never appear
// in machine output.

Json matrix_json(const RatMatrix& m);
RatMatrix matrix_from_json(const Json& j);

Json linform_json(const LinForm& f);
Json param_matrix_json(const ParamMatrix& m);

Json spec_json(const JordanSpec& spec);
/// Strict: unknown fields anywhere are a ParseError; constraint violations
/// surface as ValidationError from validate().
JordanSpec spec_from_json(const Json& j);
JordanSpec spec_from_json_text(const std::string& text);

Json family_json(const DFamily& fam);

Json structure_json(const StructureClass& sc);
Json conserved_json(const ConservedReport& rep);

Json transcript_json(const Transcript& tr);
Json system_json(const IntegrableSystem& sys);
IntegrableSystem system_from_json(const Json& j);

Json assignment_json(const Assignment& asg);
Assignment assignment_from_json(const Json& j);

} // namespace hamfactor
