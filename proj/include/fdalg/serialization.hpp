#pragma once

// JSON forms of the library types. Complex matrices are written as
// {"shape": [rows, cols], "data": [[re, im], ...]} in row-major order.

#include "json.hpp"

#include "fdalg/algebra_core.hpp"
#include "fdalg/dimension_engine.hpp"
#include "fdalg/free_product.hpp"
#include "fdalg/matrix_numeric.hpp"

namespace fdalg {

using nlohmann::json;

json matrix_to_json(const CMatrix& m);
/// Throws ShapeError when shape and data disagree.
CMatrix matrix_from_json(const json& j);

void to_json(json& j, const BlockStructure& b);
void to_json(json& j, const MultiplicityMatrix& m);
void to_json(json& j, const EmbeddedAlgebra& e);
void to_json(json& j, const SubalgebraClass& c);
void to_json(json& j, const DimReport& r);
void to_json(json& j, const ClassAudit& a);
void to_json(json& j, const Thm41Report& r);
void to_json(json& j, const DensityStats& s);
void to_json(json& j, const FactorRcp& r);
void to_json(json& j, const RcpReport& r);
void to_json(json& j, const RcpBalance& b);
void to_json(json& j, const StageRecord& s);
void to_json(json& j, const StagedBuild& b);
void to_json(json& j, const FreeElement& x);

/// Reads [{"coefficient": [re, im], "word": [{"side": 1|2, "value": matrix}, ...]}, ...].
FreeElement free_element_from_json(const json& j);

}  // namespace fdalg
