#pragma once

// JSON forms of the library's values.
//   Matrix:   {"rows":m,"cols":n,"entries":[[re,im],...]}  (row-major)
//   Subspace: {"ambient_dim":n,"basis":<Matrix>}
//   Problem:  {"A":<Matrix>,"T":<Subspace>,"S":<Subspace>}
//   Result:   {"G":<Matrix>,"residuals":{"gag":..,"range_gap":..,"null_gap":..}}
// Doubles are written in shortest round-trip form, so values survive a
// write/read cycle bit for bit.

#include <nlohmann/json.hpp>

#include "oil/instance_gen.hpp"
#include "oil/outer_inverse.hpp"
#include "oil/perturbation.hpp"

namespace oil::io {

using json = nlohmann::json;

json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json to_json(const Subspace& s);
/// Re-orthonormalizes the basis; throws if its rank differs from its column count.
Subspace subspace_from_json(const json& j, const ToleranceProfile& tol = {});

OuterInverseProblem problem_from_json(const json& j, const ToleranceProfile& tol = {});
json to_json(const OuterInverseProblem& p);
json to_json(const OuterInverseResult& r);

json to_json(const ToleranceProfile& t);
ToleranceProfile tolerance_from_json(const json& j);

json to_json(const GenConfig& c);
GenConfig gen_config_from_json(const json& j);

json to_json(const HypothesisStatus& h);
json to_json(const PerturbationScenario& sc);

}  // namespace oil::io
