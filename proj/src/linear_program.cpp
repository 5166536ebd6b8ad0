#include "nearopt/linear_program.hpp"

#include <algorithm>
#include <cmath>

#include "nearopt/error.hpp"

namespace nearopt {

LinearExpr::LinearExpr(std::initializer_list<std::pair<VariableId, double>> terms, double constant)
    : constant_(constant) {
    for (const auto& [var, coef] : terms) add(var, coef);
}

LinearExpr& LinearExpr::add(VariableId var, double coef) {
    if (coef == 0.0) return *this;
    auto [it, inserted] = terms_.try_emplace(var, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0.0) terms_.erase(it);
    }
    return *this;
}

LinearExpr& LinearExpr::operator+=(const LinearExpr& other) {
    for (const auto& [var, coef] : other.terms_) add(var, coef);
    constant_ += other.constant_;
    return *this;
}

LinearExpr& LinearExpr::operator*=(double factor) {
    if (factor == 0.0) {
        terms_.clear();
    } else {
        for (auto& [var, coef] : terms_) coef *= factor;
    }
    constant_ *= factor;
    return *this;
}

double LinearExpr::coefficient(VariableId var) const {
    auto it = terms_.find(var);
    return it == terms_.end() ? 0.0 : it->second;
}

LinearExpr operator+(LinearExpr lhs, const LinearExpr& rhs) {
    lhs += rhs;
    return lhs;
}

LinearExpr operator*(double factor, LinearExpr expr) {
    expr *= factor;
    return expr;
}

double evaluate(const LinearExpr& expr, const Point& point) {
    double value = expr.constant();
    for (const auto& [var, coef] : expr.terms()) {
        if (var.index >= point.size() || std::isnan(point[var.index])) {
            throw Error(ErrorCode::MissingVariable,
                        "point has no value for variable #" + std::to_string(var.index));
        }
        value += coef * point[var.index];
    }
    return value;
}

std::string_view to_string(Sense sense) noexcept {
    switch (sense) {
        case Sense::GreaterEqual: return ">=";
        case Sense::LessEqual: return "<=";
        case Sense::Equal: return "=";
    }
    return "?";
}

std::string_view to_string(SolveStatus status) noexcept {
    switch (status) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
    }
    return "?";
}

std::optional<VariableId> LinearProgram::find_variable(std::string_view name) const {
    auto it = variable_index_.find(std::string(name));
    if (it == variable_index_.end()) return std::nullopt;
    return VariableId{it->second};
}

VariableId LinearProgram::variable_id(std::string_view name) const {
    if (auto id = find_variable(name)) return *id;
    throw Error(ErrorCode::UnknownVariable, "no variable named '" + std::string(name) + "'");
}

std::optional<std::size_t> LinearProgram::find_constraint(std::string_view name) const {
    auto it = constraint_index_.find(std::string(name));
    if (it == constraint_index_.end()) return std::nullopt;
    return it->second;
}

void LinearProgram::validate_expr(const LinearExpr& expr, std::string_view context) const {
    for (const auto& [var, coef] : expr.terms()) {
        if (var.index >= variables_.size()) {
            throw Error(ErrorCode::UnknownVariable, std::string(context) + " references variable #" +
                                                        std::to_string(var.index) + " of " +
                                                        std::to_string(variables_.size()));
        }
        if (!std::isfinite(coef)) {
            throw Error(ErrorCode::InvalidBound, std::string(context) + " has a non-finite coefficient");
        }
    }
    if (!std::isfinite(expr.constant())) {
        throw Error(ErrorCode::InvalidBound, std::string(context) + " has a non-finite constant");
    }
}

void LinearProgram::index_names() {
    variable_index_.clear();
    constraint_index_.clear();
    variable_index_.reserve(variables_.size());
    constraint_index_.reserve(constraints_.size());
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        if (!variable_index_.emplace(variables_[i].name, i).second) {
            throw Error(ErrorCode::DuplicateName, "variable '" + variables_[i].name + "'");
        }
    }
    for (std::size_t i = 0; i < constraints_.size(); ++i) {
        if (!constraint_index_.emplace(constraints_[i].name, i).second) {
            throw Error(ErrorCode::DuplicateName, "constraint '" + constraints_[i].name + "'");
        }
    }
}

LinearProgram build_lp(std::vector<Variable> variables, std::vector<Constraint> constraints,
                       LinearExpr objective) {
    if (variables.empty()) {
        throw Error(ErrorCode::InvalidConfig, "a linear program needs at least one variable");
    }
    for (const auto& v : variables) {
        if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper || v.lower == kInf ||
            v.upper == -kInf) {
            throw Error(ErrorCode::InvalidBound, "variable '" + v.name + "' has bounds [" +
                                                     std::to_string(v.lower) + ", " +
                                                     std::to_string(v.upper) + "]");
        }
    }
    LinearProgram lp;
    lp.variables_ = std::move(variables);
    lp.constraints_ = std::move(constraints);
    lp.objective_ = std::move(objective);
    lp.index_names();
    for (const auto& c : lp.constraints_) {
        lp.validate_expr(c.expr, "constraint '" + c.name + "'");
        if (!std::isfinite(c.rhs)) {
            throw Error(ErrorCode::InvalidBound, "constraint '" + c.name + "' has a non-finite rhs");
        }
    }
    lp.validate_expr(lp.objective_, "objective");
    return lp;
}

LinearProgram LinearProgram::with_constraint(Constraint constraint) const {
    auto constraints = constraints_;
    constraints.push_back(std::move(constraint));
    return build_lp(variables_, std::move(constraints), objective_);
}

LinearProgram LinearProgram::without_constraint(std::string_view name) const {
    auto index = find_constraint(name);
    if (!index) {
        throw Error(ErrorCode::InvalidConfig, "no constraint named '" + std::string(name) + "'");
    }
    auto constraints = constraints_;
    constraints.erase(constraints.begin() + static_cast<std::ptrdiff_t>(*index));
    return build_lp(variables_, std::move(constraints), objective_);
}

LinearProgram LinearProgram::with_objective(LinearExpr objective) const {
    validate_expr(objective, "objective");
    LinearProgram copy = *this;
    copy.objective_ = std::move(objective);
    return copy;
}

double LinearProgram::min_residual(const Point& point) const {
    double worst = kInf;
    for (std::size_t j = 0; j < variables_.size(); ++j) {
        if (j >= point.size() || std::isnan(point[j])) {
            throw Error(ErrorCode::MissingVariable, "point has no value for '" + variables_[j].name + "'");
        }
        worst = std::min(worst, point[j] - variables_[j].lower);
        worst = std::min(worst, variables_[j].upper - point[j]);
    }
    for (const auto& c : constraints_) {
        const double lhs = evaluate(c.expr, point);
        switch (c.sense) {
            case Sense::GreaterEqual: worst = std::min(worst, lhs - c.rhs); break;
            case Sense::LessEqual: worst = std::min(worst, c.rhs - lhs); break;
            case Sense::Equal: worst = std::min(worst, -std::abs(lhs - c.rhs)); break;
        }
    }
    return worst;
}

VariableId LpBuilder::add_variable(std::string name, double lower, double upper) {
    variables_.push_back(Variable{std::move(name), lower, upper});
    return VariableId{variables_.size() - 1};
}

void LpBuilder::add_constraint(LinearExpr expr, Sense sense, double rhs, std::string name) {
    constraints_.push_back(Constraint{std::move(expr), sense, rhs, std::move(name)});
}

LinearProgram LpBuilder::build() && {
    return build_lp(std::move(variables_), std::move(constraints_), std::move(objective_));
}

NormalizedProgram normalize_to_geq(const LinearProgram& lp) {
    NormalizedProgram out;
    std::vector<Constraint> rows;
    rows.reserve(lp.num_constraints());
    const auto& source = lp.constraints();
    for (std::size_t i = 0; i < source.size(); ++i) {
        const Constraint& c = source[i];
        LinearExpr body = c.expr;
        const double rhs = c.rhs - body.constant();
        body.add_constant(-body.constant());
        switch (c.sense) {
            case Sense::GreaterEqual:
                rows.push_back({body, Sense::GreaterEqual, rhs, c.name});
                out.origin.push_back({i, 1.0});
                break;
            case Sense::LessEqual:
                rows.push_back({-1.0 * body, Sense::GreaterEqual, -rhs, c.name});
                out.origin.push_back({i, -1.0});
                break;
            case Sense::Equal:
                rows.push_back({body, Sense::GreaterEqual, rhs, c.name});
                out.origin.push_back({i, 1.0});
                rows.push_back({-1.0 * body, Sense::GreaterEqual, -rhs, c.name + "#le"});
                out.origin.push_back({i, -1.0});
                break;
        }
    }
    out.program = build_lp(lp.variables(), std::move(rows), lp.objective());
    return out;
}

}  // namespace nearopt
