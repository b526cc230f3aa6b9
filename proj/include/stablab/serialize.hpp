#pragma once

// JSON forms of the domain types.
//   GridFunction       [numbers]
//   GridSet            [0/1]
//   DistanceResult     {value, threshold, s, p, ambient}
//   CzDecomposition    {lambda, cubes: [{level, index}], dilation_factor}
//   LinearOperatorSpec {kind, n, signs?, sign?, restriction?, restriction_side?}
//   StabilityReport    flat object of all fields
//   DualResult         {c_star, c_lower, residuals, iterations, status, ...}

#include "json.hpp"
#include "stablab/cz.hpp"
#include "stablab/distance.hpp"
#include "stablab/dual_search.hpp"
#include "stablab/grid.hpp"
#include "stablab/operators.hpp"
#include "stablab/stability.hpp"

namespace stablab {

using Json = nlohmann::json;

Json to_json(const GridFunction& f);
GridFunction grid_function_from_json(const Json& j);

Json to_json(const GridSet& set);
GridSet grid_set_from_json(const Json& j);

Json to_json(Exponent p);
Exponent exponent_from_json(const Json& j);

Json to_json(const DistanceResult& r);

Json to_json(const CzDecomposition& d);
// g, h and omega are rebuilt from the stored cubes and the original f.
CzDecomposition cz_from_json(const Json& j, const GridFunction& f);

Json to_json(const LinearOperatorSpec& op);
LinearOperatorSpec operator_from_json(const Json& j);

Json to_json(const StabilityReport& r);
Json to_json(const Redecomposition& r);
Json to_json(const DualResult& r);

}  // namespace stablab
