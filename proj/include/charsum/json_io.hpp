#pragma once

#include <json.hpp>

#include "charsum/cyclotomic.hpp"
#include "charsum/evaluator.hpp"
#include "charsum/sweep.hpp"

namespace charsum::json_io {

using nlohmann::json;

/// {"ring_exponent": r, "coeffs": [...]} with the full 2^(r-1) coefficients.
json to_json(const cyclotomic::CycInt& value);
cyclotomic::CycInt cycint_from_json(const json& j);

/// case, magnitude_halves, x0, lambda_parity, h, scale_log2, value, approx
/// (plus inner_case for Reduced results).
json to_json(const evaluator::ClosedForm& form);

json to_json(const sweep::InstanceParams& params);
json to_json(const sweep::RunReport& report);

}  // namespace charsum::json_io
