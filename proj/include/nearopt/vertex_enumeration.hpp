#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nearopt/linear_program.hpp"

namespace nearopt {

inline constexpr std::size_t kMaxEnumerationVariables = 12;
inline constexpr std::size_t kMaxEnumerationHyperplanes = 24;

/// Brute-force list of basic feasible solutions: every n-subset of constraint
/// and bound hyperplanes is intersected, singular systems are skipped and the
/// feasible intersection points are returned (deduplicated, in discovery order).
/// Throws TooLarge when n > 12 or the hyperplane count exceeds 24.
std::vector<Point> enumerate_vertices(const LinearProgram& lp, double feasibility_tol = 1e-7);

struct VertexMinimum {
    double objective = 0.0;
    Point argmin;
};

/// Minimum of the objective over enumerate_vertices; nullopt when no vertex is feasible.
/// Only meaningful for programs whose optimum is attained at a vertex.
std::optional<VertexMinimum> vertex_minimum(const LinearProgram& lp, double feasibility_tol = 1e-7);

}  // namespace nearopt
