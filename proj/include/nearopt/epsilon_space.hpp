#pragma once

#include <string_view>

#include "nearopt/linear_program.hpp"

namespace nearopt {

/// Reserved name of the budget row added to the base program.
inline constexpr std::string_view kBudgetConstraintName = "eps_budget";

/// The near-optimal region  {x feasible | f(x) <= (1 + epsilon) * f*}.
class EpsilonSpace {
public:
    [[nodiscard]] const LinearProgram& base() const noexcept { return base_; }
    [[nodiscard]] const LinearProgram& augmented() const noexcept { return augmented_; }
    [[nodiscard]] double epsilon() const noexcept { return epsilon_; }
    [[nodiscard]] double optimal_value() const noexcept { return optimal_value_; }
    [[nodiscard]] double budget() const noexcept { return budget_; }
    [[nodiscard]] std::string_view budget_constraint_name() const noexcept { return kBudgetConstraintName; }

    /// Membership within feasibility_tol on every base row, bound and the budget.
    /// Throws MissingVariable when the point does not cover every variable.
    [[nodiscard]] bool contains(const Point& point, double feasibility_tol = 1e-7) const;

private:
    friend EpsilonSpace build_epsilon_space(const LinearProgram&, const Solution&, double, double);

    LinearProgram base_;
    LinearProgram augmented_;
    double epsilon_ = 0.0;
    double optimal_value_ = 0.0;
    double budget_ = 0.0;
};

/// Appends  objective(x) <= (1 + epsilon) * solution.objective_value  to lp.
/// Errors: NegativeEpsilon, NotOptimal, NegativeOptimum (f* < -feasibility_tol),
/// DuplicateName if lp already has a row called eps_budget.
EpsilonSpace build_epsilon_space(const LinearProgram& lp, const Solution& solution, double epsilon,
                                 double feasibility_tol = 1e-7);

}  // namespace nearopt
