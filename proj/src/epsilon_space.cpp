#include "nearopt/epsilon_space.hpp"

#include <cmath>
#include <string>

#include "nearopt/error.hpp"

namespace nearopt {

EpsilonSpace build_epsilon_space(const LinearProgram& lp, const Solution& solution, double epsilon,
                                 double feasibility_tol) {
    if (std::isnan(epsilon) || epsilon < 0.0) {
        throw Error(ErrorCode::NegativeEpsilon, "epsilon must be >= 0, got " + std::to_string(epsilon));
    }
    if (solution.status != SolveStatus::Optimal || solution.primal.size() != lp.num_variables()) {
        throw Error(ErrorCode::NotOptimal, "the supplied solution is not an optimal solution of this program");
    }
    if (solution.objective_value < -feasibility_tol) {
        throw Error(ErrorCode::NegativeOptimum,
                    "relative budgets need a nonnegative optimum, got " + std::to_string(solution.objective_value));
    }

    EpsilonSpace space;
    space.base_ = lp;
    space.epsilon_ = epsilon;
    space.optimal_value_ = solution.objective_value;
    space.budget_ = (1.0 + epsilon) * solution.objective_value;
    space.augmented_ = lp.with_constraint(
        Constraint{lp.objective(), Sense::LessEqual, space.budget_, std::string(kBudgetConstraintName)});
    return space;
}

bool EpsilonSpace::contains(const Point& point, double feasibility_tol) const {
    return augmented_.min_residual(point) >= -feasibility_tol;
}

}  // namespace nearopt
