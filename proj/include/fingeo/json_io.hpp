#pragma once

#include <json.hpp>

#include "fingeo/geometry.hpp"
#include "fingeo/linset.hpp"
#include "fingeo/schubert.hpp"

namespace fingeo {

/// All reports use insertion-ordered JSON so that identical runs produce
/// byte-identical files.
using json = nlohmann::ordered_json;

json field_to_json(const FieldTower& tw);
/// Field description: {"p":2,"e":1,"t":4,"modulus":"auto"|[coeffs],
/// "sub_modulus":...}; {"q":4,...} with q a prime power is also accepted.
TowerPtr tower_from_json(const json& j);

json element_to_json(const FieldTower& tw, code_t code);
code_t element_from_json(const FieldTower& tw, const json& j);

/// Matrix as {"field":..., "level":"q"|"q^t", "rows":[[element,...],...]}.
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json subspace_to_json(const SubspaceBasis& s);

/// PluckerVector with its (n, k) table parameters recorded.
json plucker_to_json(const PluckerVector& v);
PluckerVector plucker_from_json(const json& j);

json spread_to_json(const BlockDecomposition& bd, const std::vector<SpreadElement>& spread);

/// Linear set spec: {"q":..,"r":..,"t":..,"vars":[{"name","degree",
/// "constraints":["trace_zero"]?}],"coords":["x","x^q",...],"field":{...}?}.
LinearSetSpec spec_from_json(const json& j);
json spec_to_json(const LinearSetSpec& spec);

json linset_report_to_json(const LinearSetReport& rep);
json codim_report_to_json(const CodimReport& rep);

std::string spec_schema_text();
std::string report_schema_text();

} // namespace fingeo
