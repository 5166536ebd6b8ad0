#include "nearopt/lp_json.hpp"

#include <cmath>

#include "nearopt/error.hpp"

namespace nearopt {
namespace {

using nlohmann::json;

json bound_to_json(double value) {
    if (std::isinf(value)) return nullptr;
    return value;
}

double bound_from_json(const json& value, double when_null) {
    if (value.is_null()) return when_null;
    if (!value.is_number()) throw Error(ErrorCode::ParseError, "bound must be a number or null");
    return value.get<double>();
}

json terms_to_json(const LinearProgram& lp, const LinearExpr& expr) {
    json terms = json::object();
    for (const auto& [var, coef] : expr.terms()) terms[lp.variable(var).name] = coef;
    return terms;
}

LinearExpr expr_from_json(const std::unordered_map<std::string, std::size_t>& index, const json& terms,
                          double constant, const std::string& context) {
    if (!terms.is_object()) throw Error(ErrorCode::ParseError, context + ": terms must be an object");
    LinearExpr expr(constant);
    for (const auto& [name, coef] : terms.items()) {
        auto it = index.find(name);
        if (it == index.end()) {
            throw Error(ErrorCode::UnknownVariable, context + " references unknown variable '" + name + "'");
        }
        if (!coef.is_number()) throw Error(ErrorCode::ParseError, context + ": coefficient must be numeric");
        expr.add(VariableId{it->second}, coef.get<double>());
    }
    return expr;
}

Sense sense_from_string(const std::string& text) {
    if (text == ">=") return Sense::GreaterEqual;
    if (text == "<=") return Sense::LessEqual;
    if (text == "=" || text == "==") return Sense::Equal;
    throw Error(ErrorCode::ParseError, "unknown constraint sense '" + text + "'");
}

}  // namespace

json lp_to_json(const LinearProgram& lp) {
    json doc;
    doc["variables"] = json::array();
    for (const Variable& v : lp.variables()) {
        doc["variables"].push_back({{"name", v.name}, {"lower", bound_to_json(v.lower)}, {"upper", bound_to_json(v.upper)}});
    }
    doc["constraints"] = json::array();
    for (const Constraint& c : lp.constraints()) {
        json row{{"name", c.name}, {"terms", terms_to_json(lp, c.expr)}, {"sense", std::string(to_string(c.sense))}, {"rhs", c.rhs}};
        if (c.expr.constant() != 0.0) row["constant"] = c.expr.constant();
        doc["constraints"].push_back(std::move(row));
    }
    doc["objective"] = {{"terms", terms_to_json(lp, lp.objective())}, {"constant", lp.objective().constant()}};
    return doc;
}

LinearProgram lp_from_json(const json& doc) {
    try {
        std::vector<Variable> variables;
        std::unordered_map<std::string, std::size_t> index;
        for (const json& v : doc.at("variables")) {
            Variable var{v.at("name").get<std::string>(), bound_from_json(v.value("lower", json(0.0)), -kInf),
                         bound_from_json(v.value("upper", json(nullptr)), kInf)};
            index.emplace(var.name, variables.size());
            variables.push_back(std::move(var));
        }
        std::vector<Constraint> constraints;
        for (const json& c : doc.value("constraints", json::array())) {
            const std::string name = c.at("name").get<std::string>();
            constraints.push_back(Constraint{
                expr_from_json(index, c.at("terms"), c.value("constant", 0.0), "constraint '" + name + "'"),
                sense_from_string(c.at("sense").get<std::string>()), c.at("rhs").get<double>(), name});
        }
        const json& obj = doc.at("objective");
        LinearExpr objective = expr_from_json(index, obj.at("terms"), obj.value("constant", 0.0), "objective");
        return build_lp(std::move(variables), std::move(constraints), std::move(objective));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

}  // namespace nearopt
