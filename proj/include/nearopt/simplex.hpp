#pragma once

#include <cstddef>

#include "nearopt/linear_program.hpp"

namespace nearopt {

/// Numerical settings for the revised simplex solver.
struct SolverOptions {
    double feasibility_tol = 1e-7;  // primal residual / phase-1 infeasibility
    double pivot_tol = 1e-9;        // smallest admissible pivot magnitude
    double optimality_tol = 1e-7;   // reduced-cost threshold for pricing
    double dual_tol = 1e-6;         // accepted primal/dual objective gap
    std::size_t bland_after = 50;   // consecutive degenerate pivots before Bland's rule
    std::size_t refactor_interval = 64;
    std::size_t max_iterations = 0;  // 0 selects a size-based limit
};

/// Two-phase bounded revised simplex with Dantzig pricing and a Bland fallback.
///
/// Rows are normalized to >= form; <= rows are negated and = rows split into
/// two >= rows. Variables are shifted onto their finite bound, reflected when
/// only the upper bound is finite, and split into positive parts when free.
/// Throws NumericalFailure if the basis becomes singular or the iteration
/// limit is exhausted.
Solution solve(const LinearProgram& lp, const SolverOptions& options = {});

}  // namespace nearopt
