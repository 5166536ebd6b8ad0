#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nearopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Dense index of a variable inside one LinearProgram.
struct VariableId {
    std::size_t index = 0;

    friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

/// A point in variable space, indexed by VariableId::index. NaN marks a missing value.
using Point = std::vector<double>;

/// Sparse affine expression  sum(coef * x) + constant.
class LinearExpr {
public:
    LinearExpr() = default;
    explicit LinearExpr(double constant) : constant_(constant) {}
    LinearExpr(std::initializer_list<std::pair<VariableId, double>> terms, double constant = 0.0);

    /// Accumulates coef onto var; entries that cancel to exactly zero are dropped.
    LinearExpr& add(VariableId var, double coef);
    LinearExpr& add_constant(double value) {
        constant_ += value;
        return *this;
    }

    LinearExpr& operator+=(const LinearExpr& other);
    LinearExpr& operator*=(double factor);

    [[nodiscard]] const std::map<VariableId, double>& terms() const noexcept { return terms_; }
    [[nodiscard]] double constant() const noexcept { return constant_; }
    [[nodiscard]] double coefficient(VariableId var) const;

    friend bool operator==(const LinearExpr&, const LinearExpr&) = default;

private:
    std::map<VariableId, double> terms_;
    double constant_ = 0.0;
};

LinearExpr operator+(LinearExpr lhs, const LinearExpr& rhs);
LinearExpr operator*(double factor, LinearExpr expr);

/// Sum of coef * value + constant. Throws MissingVariable if the point lacks a referenced variable.
double evaluate(const LinearExpr& expr, const Point& point);

enum class Sense { GreaterEqual, LessEqual, Equal };

std::string_view to_string(Sense sense) noexcept;

/// expr(x) <sense> rhs. The expression constant is folded into the rhs on normalization.
struct Constraint {
    LinearExpr expr;
    Sense sense = Sense::GreaterEqual;
    double rhs = 0.0;
    std::string name;

    friend bool operator==(const Constraint&, const Constraint&) = default;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;

    friend bool operator==(const Variable&, const Variable&) = default;
};

/// Immutable minimisation problem  min f(x)  s.t. constraints, lower <= x <= upper.
class LinearProgram {
public:
    [[nodiscard]] std::size_t num_variables() const noexcept { return variables_.size(); }
    [[nodiscard]] std::size_t num_constraints() const noexcept { return constraints_.size(); }
    [[nodiscard]] const std::vector<Variable>& variables() const noexcept { return variables_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const LinearExpr& objective() const noexcept { return objective_; }

    [[nodiscard]] const Variable& variable(VariableId id) const { return variables_.at(id.index); }
    [[nodiscard]] std::optional<VariableId> find_variable(std::string_view name) const;
    [[nodiscard]] VariableId variable_id(std::string_view name) const;
    [[nodiscard]] std::optional<std::size_t> find_constraint(std::string_view name) const;

    /// Copies with one extra constraint appended (validated like build_lp).
    [[nodiscard]] LinearProgram with_constraint(Constraint constraint) const;
    /// Copies with the named constraint removed; InvalidConfig if no such constraint.
    [[nodiscard]] LinearProgram without_constraint(std::string_view name) const;
    [[nodiscard]] LinearProgram with_objective(LinearExpr objective) const;

    /// Smallest violation margin across constraints and bounds (negative means infeasible).
    [[nodiscard]] double min_residual(const Point& point) const;

    friend bool operator==(const LinearProgram& a, const LinearProgram& b) {
        return a.variables_ == b.variables_ && a.constraints_ == b.constraints_ &&
               a.objective_ == b.objective_;
    }

private:
    friend class LpBuilder;
    friend LinearProgram build_lp(std::vector<Variable>, std::vector<Constraint>, LinearExpr);

    void validate_expr(const LinearExpr& expr, std::string_view context) const;
    void index_names();

    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    LinearExpr objective_;
    std::unordered_map<std::string, std::size_t> variable_index_;
    std::unordered_map<std::string, std::size_t> constraint_index_;
};

/// Validates names, bounds and references. Errors: DuplicateName, UnknownVariable, InvalidBound.
LinearProgram build_lp(std::vector<Variable> variables, std::vector<Constraint> constraints,
                       LinearExpr objective);

/// Incremental construction used by model compilers; build() runs the same validation as build_lp.
class LpBuilder {
public:
    VariableId add_variable(std::string name, double lower = 0.0, double upper = kInf);
    void add_constraint(LinearExpr expr, Sense sense, double rhs, std::string name);
    void set_objective(LinearExpr objective) { objective_ = std::move(objective); }
    LinearExpr& objective() noexcept { return objective_; }
    [[nodiscard]] std::size_t num_variables() const noexcept { return variables_.size(); }

    [[nodiscard]] LinearProgram build() &&;

private:
    std::vector<Variable> variables_;
    std::vector<Constraint> constraints_;
    LinearExpr objective_;
};

/// A program containing only >= rows, together with where each row came from.
struct NormalizedProgram {
    struct RowOrigin {
        std::size_t constraint = 0;  // index into the source program
        double sign = 1.0;           // +1 kept, -1 negated
    };
    LinearProgram program;
    std::vector<RowOrigin> origin;
};

/// <= rows are negated, = rows become a pair of >= rows, constants move to the rhs.
NormalizedProgram normalize_to_geq(const LinearProgram& lp);

enum class SolveStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(SolveStatus status) noexcept;

struct Solution {
    SolveStatus status = SolveStatus::Infeasible;
    Point primal;
    double objective_value = 0.0;
    /// d(objective)/d(rhs) per constraint name; filled when Optimal.
    std::map<std::string, double> dual;
    /// Lagrangian dual bound at the returned multipliers; equals objective_value at optimality.
    double dual_objective = 0.0;
    std::size_t iterations = 0;
};

}  // namespace nearopt
