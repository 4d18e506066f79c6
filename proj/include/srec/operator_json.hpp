#pragma once

#include <string>

#include <json.hpp>

#include "srec/operator_spec.hpp"

namespace srec {

// Operator grammar: JSON object with a "kind" discriminator
// ("dense"|"diagonal"|"shift"|"direct_sum"|"scaled"|"power"|"polynomial").
// Complex scalars are two-element arrays [re, im].

nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j, const std::string& where);

nlohmann::json operator_to_json(const OperatorSpec& op);
// Throws invalid_input with a field path on malformed input.
OperatorSpec operator_from_json(const nlohmann::json& j,
                                const std::string& where = "operator");

}  // namespace srec
