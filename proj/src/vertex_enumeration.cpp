#include "nearopt/vertex_enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nearopt/error.hpp"

namespace nearopt {
namespace {

struct Hyperplane {
    std::vector<double> normal;
    double offset = 0.0;  // normal . x >= offset
};

constexpr double kSingularPivot = 1e-10;

// Gaussian elimination with partial pivoting on row-scaled copies; nullopt when singular.
std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        double scale = 0.0;
        for (double v : a[i]) scale = std::max(scale, std::abs(v));
        if (scale == 0.0) return std::nullopt;
        for (double& v : a[i]) v /= scale;
        b[i] /= scale;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < kSingularPivot) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
            b[r] -= factor * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
        x[i] = acc / a[i][i];
    }
    return x;
}

bool feasible(const std::vector<Hyperplane>& planes, const std::vector<double>& x, double tol) {
    for (const auto& h : planes) {
        const double lhs = std::inner_product(h.normal.begin(), h.normal.end(), x.begin(), 0.0);
        if (lhs < h.offset - tol * std::max(1.0, std::abs(h.offset))) return false;
    }
    return true;
}

}  // namespace

std::vector<Point> enumerate_vertices(const LinearProgram& lp, double feasibility_tol) {
    const std::size_t n = lp.num_variables();
    if (n > kMaxEnumerationVariables) {
        throw Error(ErrorCode::TooLarge, std::to_string(n) + " variables exceed the enumeration limit of " +
                                             std::to_string(kMaxEnumerationVariables));
    }

    std::vector<Hyperplane> planes;
    for (const Constraint& c : lp.constraints()) {
        Hyperplane h{std::vector<double>(n, 0.0), c.rhs - c.expr.constant()};
        for (const auto& [var, coef] : c.expr.terms()) h.normal[var.index] = coef;
        if (c.sense == Sense::LessEqual || c.sense == Sense::Equal) {
            Hyperplane neg = h;
            for (double& v : neg.normal) v = -v;
            neg.offset = -neg.offset;
            planes.push_back(std::move(neg));
        }
        if (c.sense == Sense::GreaterEqual || c.sense == Sense::Equal) planes.push_back(std::move(h));
    }
    for (std::size_t j = 0; j < n; ++j) {
        const Variable& v = lp.variables()[j];
        if (std::isfinite(v.lower)) {
            Hyperplane h{std::vector<double>(n, 0.0), v.lower};
            h.normal[j] = 1.0;
            planes.push_back(std::move(h));
        }
        if (std::isfinite(v.upper)) {
            Hyperplane h{std::vector<double>(n, 0.0), -v.upper};
            h.normal[j] = -1.0;
            planes.push_back(std::move(h));
        }
    }
    if (planes.size() > kMaxEnumerationHyperplanes) {
        throw Error(ErrorCode::TooLarge, std::to_string(planes.size()) +
                                             " hyperplanes exceed the enumeration limit of " +
                                             std::to_string(kMaxEnumerationHyperplanes));
    }

    std::vector<Point> vertices;
    if (planes.size() < n) return vertices;

    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
        std::vector<std::vector<double>> a;
        std::vector<double> b;
        a.reserve(n);
        for (std::size_t idx : pick) {
            a.push_back(planes[idx].normal);
            b.push_back(planes[idx].offset);
        }
        if (auto x = solve_square(std::move(a), std::move(b)); x && feasible(planes, *x, feasibility_tol)) {
            const bool seen = std::any_of(vertices.begin(), vertices.end(), [&](const Point& v) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (std::abs(v[j] - (*x)[j]) > 1e-9 * std::max(1.0, std::abs(v[j]))) return false;
                }
                return true;
            });
            if (!seen) vertices.push_back(std::move(*x));
        }

        // Next n-combination of the hyperplane indices in lexicographic order.
        std::size_t i = n;
        while (i > 0 && pick[i - 1] == planes.size() - n + (i - 1)) --i;
        if (i == 0) break;
        ++pick[i - 1];
        for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
    }
    return vertices;
}

std::optional<VertexMinimum> vertex_minimum(const LinearProgram& lp, double feasibility_tol) {
    std::optional<VertexMinimum> best;
    for (auto& v : enumerate_vertices(lp, feasibility_tol)) {
        const double value = evaluate(lp.objective(), v);
        if (!best || value < best->objective) best = VertexMinimum{value, std::move(v)};
    }
    return best;
}

}  // namespace nearopt
