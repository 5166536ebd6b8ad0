#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nearopt/epsilon_space.hpp"
#include "nearopt/linear_program.hpp"
#include "nearopt/simplex.hpp"

namespace nearopt {

/// Nonnegative weights d selecting the sum d'x that a threshold condition bounds.
class Direction {
public:
    /// Zero weights are dropped. Throws InvalidDirection on negative or non-finite
    /// weights, or when no weight is positive.
    Direction(std::map<VariableId, double> weights, std::string label);

    [[nodiscard]] const std::map<VariableId, double>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] double weight(VariableId var) const;
    [[nodiscard]] LinearExpr expr() const;
    [[nodiscard]] double dot(const Point& point) const { return evaluate(expr(), point); }

    [[nodiscard]] Direction scaled(double factor, std::string label) const;
    /// Weight-wise sum of two directions.
    [[nodiscard]] Direction plus(const Direction& other, std::string label) const;

private:
    std::map<VariableId, double> weights_;
    std::string label_;
};

/// phi(x) := d'x >= threshold.
struct ThresholdCondition {
    Direction direction;
    double threshold = 0.0;

    [[nodiscard]] bool holds(const Point& point, double feasibility_tol = 1e-7) const {
        return direction.dot(point) >= threshold - feasibility_tol;
    }
};

enum class RowStatus { Found, EpsilonSpaceInfeasible, UnboundedDirection, NumericalFailure };

std::string_view to_string(RowStatus status) noexcept;

struct NecessaryConditionResult {
    double epsilon = 0.0;
    std::string direction_label;
    double c_star = 0.0;  // NaN unless Found
    Point minimizer;
    RowStatus status = RowStatus::Found;
    std::string message;
};

/// Solves  min d'x  over the epsilon space. The returned c* defines the single
/// non-implied necessary condition d'x >= c* of the family.
/// Errors: UnknownVariable, UnboundedDirection, EpsilonSpaceInfeasible, NumericalFailure.
NecessaryConditionResult compute_nonimplied(const EpsilonSpace& space, const Direction& direction,
                                            const SolverOptions& options = {});

/// True iff the condition holds on the whole epsilon space, i.e. threshold <= c* + tol.
bool is_necessary(const EpsilonSpace& space, const ThresholdCondition& condition,
                  const SolverOptions& options = {});

/// True iff the truth region of a is strictly inside that of b. Directions must be
/// positive multiples of each other (IncomparableDirections otherwise); thresholds
/// are compared after dividing by each direction's total weight.
bool implies(const ThresholdCondition& a, const ThresholdCondition& b);

/// Suboptimality grid used when none is supplied.
std::vector<double> default_epsilon_grid();

struct SweepOptions {
    SolverOptions solver;
    std::size_t threads = 0;  // 0 uses the hardware concurrency
};

struct SweepTable {
    std::vector<NecessaryConditionResult> rows;  // sorted by direction label, then epsilon
    std::vector<double> epsilon_grid;
    std::vector<Direction> directions;

    [[nodiscard]] std::vector<const NecessaryConditionResult*> rows_for(std::string_view label) const;
    [[nodiscard]] std::size_t failed_rows() const;
};

/// One row per (epsilon, direction); every budget reuses solution.objective_value.
/// Per-row failures are recorded in the row, not thrown. Throws NegativeEpsilon /
/// InvalidGrid for bad grids, InvalidDirection for an empty direction list,
/// DuplicateLabel for repeated labels, and the build_epsilon_space errors.
SweepTable sweep(const LinearProgram& lp, const Solution& solution, const std::vector<double>& epsilon_grid,
                 const std::vector<Direction>& directions, const SweepOptions& options = {});

/// CSV with header  direction,epsilon,c_star,status  and 9 significant digits.
void write_sweep_csv(std::ostream& out, const SweepTable& table);

}  // namespace nearopt
