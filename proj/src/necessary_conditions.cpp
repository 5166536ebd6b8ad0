#include "nearopt/necessary_conditions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <thread>

#include "nearopt/error.hpp"

namespace nearopt {

Direction::Direction(std::map<VariableId, double> weights, std::string label) : label_(std::move(label)) {
    for (const auto& [var, w] : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(ErrorCode::InvalidDirection,
                        "direction '" + label_ + "' has weight " + std::to_string(w) + " on variable #" +
                            std::to_string(var.index));
        }
        if (w > 0.0) weights_.emplace(var, w);
    }
    if (weights_.empty()) {
        throw Error(ErrorCode::InvalidDirection, "direction '" + label_ + "' has no positive weight");
    }
}

double Direction::weight(VariableId var) const {
    auto it = weights_.find(var);
    return it == weights_.end() ? 0.0 : it->second;
}

LinearExpr Direction::expr() const {
    LinearExpr e;
    for (const auto& [var, w] : weights_) e.add(var, w);
    return e;
}

Direction Direction::scaled(double factor, std::string label) const {
    auto weights = weights_;
    for (auto& [var, w] : weights) w *= factor;
    return Direction(std::move(weights), std::move(label));
}

Direction Direction::plus(const Direction& other, std::string label) const {
    auto weights = weights_;
    for (const auto& [var, w] : other.weights_) weights[var] += w;
    return Direction(std::move(weights), std::move(label));
}

std::string_view to_string(RowStatus status) noexcept {
    switch (status) {
        case RowStatus::Found: return "found";
        case RowStatus::EpsilonSpaceInfeasible: return "eps_infeasible";
        case RowStatus::UnboundedDirection: return "unbounded";
        case RowStatus::NumericalFailure: return "numerical_failure";
    }
    return "?";
}

NecessaryConditionResult compute_nonimplied(const EpsilonSpace& space, const Direction& direction,
                                            const SolverOptions& options) {
    const LinearProgram& augmented = space.augmented();
    for (const auto& [var, w] : direction.weights()) {
        if (var.index >= augmented.num_variables()) {
            throw Error(ErrorCode::UnknownVariable, "direction '" + direction.label() + "' weights variable #" +
                                                        std::to_string(var.index));
        }
    }
    const Solution sol = solve(augmented.with_objective(direction.expr()), options);
    switch (sol.status) {
        case SolveStatus::Infeasible:
            throw Error(ErrorCode::EpsilonSpaceInfeasible,
                        "epsilon space at epsilon=" + std::to_string(space.epsilon()) + " has no feasible point");
        case SolveStatus::Unbounded:
            throw Error(ErrorCode::UnboundedDirection,
                        "direction '" + direction.label() + "' is unbounded below over the epsilon space");
        case SolveStatus::Optimal: break;
    }
    NecessaryConditionResult result;
    result.epsilon = space.epsilon();
    result.direction_label = direction.label();
    result.c_star = sol.objective_value;
    result.minimizer = sol.primal;
    result.status = RowStatus::Found;
    return result;
}

bool is_necessary(const EpsilonSpace& space, const ThresholdCondition& condition, const SolverOptions& options) {
    const auto result = compute_nonimplied(space, condition.direction, options);
    return condition.threshold <= result.c_star + options.feasibility_tol;
}

bool implies(const ThresholdCondition& a, const ThresholdCondition& b) {
    const auto& wa = a.direction.weights();
    const auto& wb = b.direction.weights();
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (const auto& [var, w] : wa) sum_a += w;
    for (const auto& [var, w] : wb) sum_b += w;
    const double ratio = sum_a / sum_b;

    bool proportional = wa.size() == wb.size();
    for (auto ia = wa.begin(), ib = wb.begin(); proportional && ia != wa.end(); ++ia, ++ib) {
        const double expected = ratio * ib->second;
        proportional = ia->first == ib->first &&
                       std::abs(ia->second - expected) <= 1e-9 * std::max(ia->second, expected);
    }
    if (!proportional) {
        throw Error(ErrorCode::IncomparableDirections, "directions '" + a.direction.label() + "' and '" +
                                                           b.direction.label() + "' are not proportional");
    }
    const double ta = a.threshold / sum_a;
    const double tb = b.threshold / sum_b;
    return ta - tb > 1e-12 * std::max({1.0, std::abs(ta), std::abs(tb)});
}

std::vector<double> default_epsilon_grid() { return {0.0, 0.01, 0.025, 0.05, 0.10, 0.15, 0.20}; }

std::vector<const NecessaryConditionResult*> SweepTable::rows_for(std::string_view label) const {
    std::vector<const NecessaryConditionResult*> out;
    for (const auto& row : rows) {
        if (row.direction_label == label) out.push_back(&row);
    }
    return out;
}

std::size_t SweepTable::failed_rows() const {
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return r.status != RowStatus::Found; }));
}

SweepTable sweep(const LinearProgram& lp, const Solution& solution, const std::vector<double>& epsilon_grid,
                 const std::vector<Direction>& directions, const SweepOptions& options) {
    if (epsilon_grid.empty()) throw Error(ErrorCode::InvalidGrid, "the epsilon grid is empty");
    for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
        if (std::isnan(epsilon_grid[i]) || epsilon_grid[i] < 0.0) {
            throw Error(ErrorCode::NegativeEpsilon, "grid value " + std::to_string(epsilon_grid[i]) + " is negative");
        }
        if (i > 0 && !(epsilon_grid[i] > epsilon_grid[i - 1])) {
            throw Error(ErrorCode::InvalidGrid, "the epsilon grid must be strictly increasing");
        }
    }
    if (directions.empty()) throw Error(ErrorCode::InvalidDirection, "at least one direction is required");
    std::set<std::string> labels;
    for (const auto& d : directions) {
        if (!labels.insert(d.label()).second) throw Error(ErrorCode::DuplicateLabel, "direction '" + d.label() + "'");
    }

    std::vector<EpsilonSpace> spaces;
    spaces.reserve(epsilon_grid.size());
    for (double eps : epsilon_grid) {
        spaces.push_back(build_epsilon_space(lp, solution, eps, options.solver.feasibility_tol));
    }

    std::vector<std::size_t> order(directions.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return directions[a].label() < directions[b].label(); });

    SweepTable table;
    table.epsilon_grid = epsilon_grid;
    table.directions = directions;
    table.rows.resize(directions.size() * epsilon_grid.size());

    auto evaluate_row = [&](std::size_t row) {
        const Direction& d = directions[order[row / epsilon_grid.size()]];
        const EpsilonSpace& space = spaces[row % epsilon_grid.size()];
        NecessaryConditionResult& out = table.rows[row];
        try {
            out = compute_nonimplied(space, d, options.solver);
        } catch (const Error& e) {
            out = NecessaryConditionResult{};
            out.epsilon = space.epsilon();
            out.direction_label = d.label();
            out.c_star = std::numeric_limits<double>::quiet_NaN();
            out.message = e.what();
            switch (e.code()) {
                case ErrorCode::EpsilonSpaceInfeasible: out.status = RowStatus::EpsilonSpaceInfeasible; break;
                case ErrorCode::UnboundedDirection: out.status = RowStatus::UnboundedDirection; break;
                default: out.status = RowStatus::NumericalFailure; break;
            }
        }
    };

    std::size_t workers = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, table.rows.size());
    if (workers <= 1) {
        for (std::size_t row = 0; row < table.rows.size(); ++row) evaluate_row(row);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t row = next++; row < table.rows.size(); row = next++) evaluate_row(row);
            });
        }
    }
    return table;
}

void write_sweep_csv(std::ostream& out, const SweepTable& table) {
    out << "direction,epsilon,c_star,status\n";
    char eps[32];
    char value[32];
    for (const auto& row : table.rows) {
        std::snprintf(eps, sizeof eps, "%.9g", row.epsilon);
        std::snprintf(value, sizeof value, "%.9g", row.c_star);
        out << row.direction_label << ',' << eps << ',' << value << ',' << to_string(row.status) << '\n';
    }
}

}  // namespace nearopt
