#pragma once

#include <string>

#include "json.hpp"
#include "nearopt/linear_program.hpp"

namespace nearopt {

/// {variables:[{name,lower,upper}], constraints:[{name,terms:{var:coef},sense,rhs}],
///  objective:{terms,constant}}. Infinite bounds are written as null.
nlohmann::json lp_to_json(const LinearProgram& lp);

/// Inverse of lp_to_json. Terms naming an undeclared variable raise UnknownVariable;
/// structural problems raise ParseError.
LinearProgram lp_from_json(const nlohmann::json& doc);

}  // namespace nearopt
