// config_io.hpp — Flat JSON (de)serialization of parameter sets. Keys are
// exactly the LambdaParams field names. Partially specified sets are
// completed with the documented derivations (see resolve_params).

#pragma once

#include <map>
#include <string>

#include "eitcool/params.hpp"

namespace eitcool {

// Builds a parameter set from explicitly given fields, deriving dependent
// defaults for the rest:
//   - gamma given, splits absent          -> gamma_g = gamma_r = gamma/2
//   - gamma and one split given           -> other split = gamma - split
//   - both splits given, gamma absent     -> gamma = gamma_g + gamma_r
//   - eta given, projections absent       -> eta_g = eta, eta_r = 0
//   - projections given, eta absent       -> eta = |eta_g - eta_r|
//   - eta and eta_g given, eta_r absent   -> eta_r = eta_g - eta (and mirrored)
// Unknown keys raise InvalidParameter. Consistency of fully explicit sets is
// the job of validate(), not of this function.
LambdaParams resolve_params(const std::map<std::string, double>& given);

// Flat JSON object with exactly the field names as keys.
LambdaParams params_from_json(const std::string& text);
LambdaParams params_from_json_file(const std::string& path);
std::string params_to_json(const LambdaParams& p);

}  // namespace eitcool
