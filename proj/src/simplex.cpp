#include "nearopt/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "nearopt/error.hpp"

namespace nearopt {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

enum class ColumnState { Basic, AtLower, AtUpper };

// Standard-form column of the internal problem  A x' - s (+ a) = b,  0 <= x' <= u.
struct Column {
    std::vector<int> rows;
    std::vector<double> values;
    double upper = kInf;
    double cost = 0.0;
};

// How a user variable maps onto standard-form columns: x = offset + sign * x'_k (+ x'_k2 for splits).
struct VariableMap {
    double offset = 0.0;
    int column = -1;
    double sign = 1.0;
    int negative_column = -1;  // free variables only
};

struct Eta {
    int pivot_row = 0;
    double pivot = 1.0;
    std::vector<int> rows;
    std::vector<double> values;  // column entries excluding pivot_row
};

class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const SolverOptions& options)
        : lp_(lp), options_(options) {
        normalized_ = normalize_to_geq(lp);
        build_standard_form();
    }

    Solution run();

private:
    void build_standard_form();
    void refactor();
    Vector ftran(const Column& column) const;
    Vector ftran(Vector v) const;
    Vector btran(Vector v) const;
    void recompute_basic_values();
    Vector basic_costs() const;
    double reduced_cost(int j, const Vector& y) const;
    int price(const Vector& y, bool bland) const;
    enum class StepResult { Optimal, Pivoted, Unbounded };
    StepResult iterate(bool bland);
    StepResult optimize();
    void drive_out_artificials();
    double phase_objective() const;
    Solution extract(SolveStatus status);

    const LinearProgram& lp_;
    SolverOptions options_;
    NormalizedProgram normalized_;

    int rows_ = 0;
    std::vector<Column> columns_;
    std::vector<double> rhs_;
    std::vector<VariableMap> variable_map_;
    double objective_offset_ = 0.0;
    int first_slack_ = 0;
    int first_artificial_ = 0;

    std::vector<int> basis_;  // column index per basis position
    std::vector<ColumnState> state_;
    std::vector<double> value_;
    std::vector<double> phase_cost_;

    // transpose() on SparseLU is non-const.
    mutable Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
    std::vector<Eta> etas_;
    std::size_t iterations_ = 0;
    std::size_t degenerate_run_ = 0;
    std::size_t iteration_limit_ = 0;
};

void RevisedSimplex::build_standard_form() {
    const LinearProgram& geq = normalized_.program;
    rows_ = static_cast<int>(geq.num_constraints());
    rhs_.assign(static_cast<std::size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) rhs_[static_cast<std::size_t>(i)] = geq.constraints()[static_cast<std::size_t>(i)].rhs;

    objective_offset_ = lp_.objective().constant();
    variable_map_.resize(geq.num_variables());
    for (std::size_t j = 0; j < geq.num_variables(); ++j) {
        const Variable& v = geq.variables()[j];
        VariableMap& map = variable_map_[j];
        const double cost = lp_.objective().coefficient(VariableId{j});
        auto add_column = [&](double sign, double upper) {
            Column col;
            col.upper = upper;
            col.cost = sign * cost;
            columns_.push_back(std::move(col));
            return static_cast<int>(columns_.size() - 1);
        };
        if (std::isfinite(v.lower)) {
            map.offset = v.lower;
            map.sign = 1.0;
            map.column = add_column(1.0, v.upper - v.lower);
        } else if (std::isfinite(v.upper)) {
            map.offset = v.upper;
            map.sign = -1.0;
            map.column = add_column(-1.0, kInf);
        } else {
            map.offset = 0.0;
            map.sign = 1.0;
            map.column = add_column(1.0, kInf);
            map.negative_column = add_column(-1.0, kInf);
        }
        objective_offset_ += cost * map.offset;
    }

    for (int i = 0; i < rows_; ++i) {
        const Constraint& row = geq.constraints()[static_cast<std::size_t>(i)];
        for (const auto& [var, coef] : row.expr.terms()) {
            const VariableMap& map = variable_map_[var.index];
            rhs_[static_cast<std::size_t>(i)] -= coef * map.offset;
            Column& col = columns_[static_cast<std::size_t>(map.column)];
            col.rows.push_back(i);
            col.values.push_back(map.sign * coef);
            if (map.negative_column >= 0) {
                Column& neg = columns_[static_cast<std::size_t>(map.negative_column)];
                neg.rows.push_back(i);
                neg.values.push_back(-coef);
            }
        }
    }

    first_slack_ = static_cast<int>(columns_.size());
    for (int i = 0; i < rows_; ++i) {
        Column col;
        col.rows = {i};
        col.values = {-1.0};
        columns_.push_back(std::move(col));
    }

    // Start from every structural column at its lower bound (zero); rows whose
    // residual is not absorbed by a nonnegative slack receive an artificial.
    first_artificial_ = static_cast<int>(columns_.size());
    basis_.assign(static_cast<std::size_t>(rows_), -1);
    for (int i = 0; i < rows_; ++i) {
        if (rhs_[static_cast<std::size_t>(i)] <= 0.0) {
            basis_[static_cast<std::size_t>(i)] = first_slack_ + i;
        } else {
            Column col;
            col.rows = {i};
            col.values = {1.0};
            columns_.push_back(std::move(col));
            basis_[static_cast<std::size_t>(i)] = static_cast<int>(columns_.size() - 1);
        }
    }

    state_.assign(columns_.size(), ColumnState::AtLower);
    value_.assign(columns_.size(), 0.0);
    for (int col : basis_) state_[static_cast<std::size_t>(col)] = ColumnState::Basic;

    const std::size_t limit_scale = columns_.size() + static_cast<std::size_t>(rows_);
    iteration_limit_ = options_.max_iterations != 0 ? options_.max_iterations : 50 * limit_scale + 10000;
}

void RevisedSimplex::refactor() {
    etas_.clear();
    if (rows_ == 0) return;
    std::vector<Eigen::Triplet<double>> triplets;
    for (int pos = 0; pos < rows_; ++pos) {
        const Column& col = columns_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)])];
        for (std::size_t k = 0; k < col.rows.size(); ++k) triplets.emplace_back(col.rows[k], pos, col.values[k]);
    }
    SparseMatrix basis_matrix(rows_, rows_);
    basis_matrix.setFromTriplets(triplets.begin(), triplets.end());
    basis_matrix.makeCompressed();
    lu_.analyzePattern(basis_matrix);
    lu_.factorize(basis_matrix);
    if (lu_.info() != Eigen::Success) {
        throw Error(ErrorCode::NumericalFailure, "basis factorization failed: " + lu_.lastErrorMessage());
    }
}

Vector RevisedSimplex::ftran(const Column& column) const {
    Vector v = Vector::Zero(rows_);
    for (std::size_t k = 0; k < column.rows.size(); ++k) v[column.rows[k]] = column.values[k];
    return ftran(std::move(v));
}

Vector RevisedSimplex::ftran(Vector v) const {
    if (rows_ == 0) return v;
    Vector w = lu_.solve(v);
    for (const Eta& eta : etas_) {
        const double pivot_value = w[eta.pivot_row] / eta.pivot;
        w[eta.pivot_row] = pivot_value;
        if (pivot_value == 0.0) continue;
        for (std::size_t k = 0; k < eta.rows.size(); ++k) w[eta.rows[k]] -= eta.values[k] * pivot_value;
    }
    return w;
}

Vector RevisedSimplex::btran(Vector v) const {
    if (rows_ == 0) return v;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double acc = v[it->pivot_row];
        for (std::size_t k = 0; k < it->rows.size(); ++k) acc -= it->values[k] * v[it->rows[k]];
        v[it->pivot_row] = acc / it->pivot;
    }
    return lu_.transpose().solve(v);
}

void RevisedSimplex::recompute_basic_values() {
    Vector residual(rows_);
    for (int i = 0; i < rows_; ++i) residual[i] = rhs_[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < columns_.size(); ++j) {
        if (state_[j] == ColumnState::Basic || value_[j] == 0.0) continue;
        const Column& col = columns_[j];
        for (std::size_t k = 0; k < col.rows.size(); ++k) residual[col.rows[k]] -= col.values[k] * value_[j];
    }
    const Vector xb = ftran(std::move(residual));
    for (int pos = 0; pos < rows_; ++pos) value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)])] = xb[pos];
}

Vector RevisedSimplex::basic_costs() const {
    Vector cb(rows_);
    for (int pos = 0; pos < rows_; ++pos) cb[pos] = phase_cost_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)])];
    return cb;
}

double RevisedSimplex::reduced_cost(int j, const Vector& y) const {
    const Column& col = columns_[static_cast<std::size_t>(j)];
    double d = phase_cost_[static_cast<std::size_t>(j)];
    for (std::size_t k = 0; k < col.rows.size(); ++k) d -= y[col.rows[k]] * col.values[k];
    return d;
}

int RevisedSimplex::price(const Vector& y, bool bland) const {
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < static_cast<int>(columns_.size()); ++j) {
        const auto state = state_[static_cast<std::size_t>(j)];
        if (state == ColumnState::Basic || columns_[static_cast<std::size_t>(j)].upper == 0.0) continue;
        const double d = reduced_cost(j, y);
        double score = 0.0;
        if (state == ColumnState::AtLower && d < -options_.optimality_tol) score = -d;
        if (state == ColumnState::AtUpper && d > options_.optimality_tol) score = d;
        if (score <= 0.0) continue;
        if (bland) return j;
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return best;
}

RevisedSimplex::StepResult RevisedSimplex::iterate(bool bland) {
    const Vector y = btran(basic_costs());
    const int entering = price(y, bland);
    if (entering < 0) return StepResult::Optimal;

    const auto entering_index = static_cast<std::size_t>(entering);
    const double direction = state_[entering_index] == ColumnState::AtLower ? 1.0 : -1.0;
    const Vector alpha = ftran(columns_[entering_index]);

    // Ratio test over basic variables: x_B(theta) = x_B - direction * theta * alpha.
    int leave_pos = -1;
    double theta = kInf;
    double leave_pivot = 0.0;
    bool leave_to_upper = false;
    constexpr double kTieTol = 1e-12;
    for (int pos = 0; pos < rows_; ++pos) {
        const double a = alpha[pos];
        if (std::abs(a) <= options_.pivot_tol) continue;
        const auto col = static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)]);
        const double rate = -direction * a;
        double ratio;
        bool to_upper;
        if (rate < 0.0) {
            ratio = std::max(value_[col], 0.0) / -rate;
            to_upper = false;
        } else {
            const double upper = columns_[col].upper;
            if (!std::isfinite(upper)) continue;
            ratio = std::max(upper - value_[col], 0.0) / rate;
            to_upper = true;
        }
        bool take = false;
        if (leave_pos < 0 || ratio < theta - kTieTol) {
            take = true;
        } else if (ratio <= theta + kTieTol) {
            const int current = basis_[static_cast<std::size_t>(leave_pos)];
            take = bland ? basis_[static_cast<std::size_t>(pos)] < current : std::abs(a) > std::abs(leave_pivot);
        }
        if (take) {
            leave_pos = pos;
            theta = std::min(theta, ratio);
            leave_pivot = a;
            leave_to_upper = to_upper;
        }
    }

    const double entering_upper = columns_[entering_index].upper;
    if (std::isfinite(entering_upper) && entering_upper <= theta) {
        // Bound flip: the entering column reaches its opposite bound first.
        theta = entering_upper;
        for (int pos = 0; pos < rows_; ++pos) {
            value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)])] -= direction * theta * alpha[pos];
        }
        value_[entering_index] = direction > 0 ? entering_upper : 0.0;
        state_[entering_index] = direction > 0 ? ColumnState::AtUpper : ColumnState::AtLower;
        degenerate_run_ = 0;
        return StepResult::Pivoted;
    }
    if (leave_pos < 0) return StepResult::Unbounded;

    for (int pos = 0; pos < rows_; ++pos) {
        value_[static_cast<std::size_t>(basis_[static_cast<std::size_t>(pos)])] -= direction * theta * alpha[pos];
    }
    const auto leaving = static_cast<std::size_t>(basis_[static_cast<std::size_t>(leave_pos)]);
    value_[entering_index] += direction * theta;
    value_[leaving] = leave_to_upper ? columns_[leaving].upper : 0.0;
    state_[leaving] = leave_to_upper ? ColumnState::AtUpper : ColumnState::AtLower;
    state_[entering_index] = ColumnState::Basic;
    basis_[static_cast<std::size_t>(leave_pos)] = entering;

    degenerate_run_ = theta <= options_.pivot_tol ? degenerate_run_ + 1 : 0;

    Eta eta;
    eta.pivot_row = leave_pos;
    eta.pivot = leave_pivot;
    for (int pos = 0; pos < rows_; ++pos) {
        if (pos != leave_pos && alpha[pos] != 0.0) {
            eta.rows.push_back(pos);
            eta.values.push_back(alpha[pos]);
        }
    }
    etas_.push_back(std::move(eta));
    if (etas_.size() >= options_.refactor_interval) {
        refactor();
        recompute_basic_values();
    }
    return StepResult::Pivoted;
}

RevisedSimplex::StepResult RevisedSimplex::optimize() {
    degenerate_run_ = 0;
    while (true) {
        if (++iterations_ > iteration_limit_) {
            throw Error(ErrorCode::NumericalFailure,
                        "simplex iteration limit (" + std::to_string(iteration_limit_) + ") exhausted");
        }
        const bool bland = degenerate_run_ >= options_.bland_after;
        const StepResult result = iterate(bland);
        if (result != StepResult::Pivoted) {
            // Confirm against a fresh factorization before trusting the verdict.
            if (!etas_.empty()) {
                refactor();
                recompute_basic_values();
                continue;
            }
            return result;
        }
    }
}

double RevisedSimplex::phase_objective() const {
    double total = 0.0;
    for (std::size_t j = 0; j < columns_.size(); ++j) total += phase_cost_[j] * value_[j];
    return total;
}

void RevisedSimplex::drive_out_artificials() {
    for (int pos = 0; pos < rows_; ++pos) {
        const int col = basis_[static_cast<std::size_t>(pos)];
        if (col < first_artificial_) continue;
        Vector unit = Vector::Zero(rows_);
        unit[pos] = 1.0;
        const Vector rho = btran(std::move(unit));
        int replacement = -1;
        double best = 1e-7;
        for (int j = 0; j < first_artificial_; ++j) {
            if (state_[static_cast<std::size_t>(j)] == ColumnState::Basic) continue;
            const Column& c = columns_[static_cast<std::size_t>(j)];
            double entry = 0.0;
            for (std::size_t k = 0; k < c.rows.size(); ++k) entry += rho[c.rows[k]] * c.values[k];
            if (std::abs(entry) > best) {
                best = std::abs(entry);
                replacement = j;
            }
        }
        if (replacement < 0) continue;  // redundant row; the artificial stays basic at zero
        state_[static_cast<std::size_t>(col)] = ColumnState::AtLower;
        value_[static_cast<std::size_t>(col)] = 0.0;
        state_[static_cast<std::size_t>(replacement)] = ColumnState::Basic;
        basis_[static_cast<std::size_t>(pos)] = replacement;
        refactor();
        recompute_basic_values();
    }
}

Solution RevisedSimplex::extract(SolveStatus status) {
    Solution sol;
    sol.status = status;
    sol.iterations = iterations_;
    if (status != SolveStatus::Optimal) return sol;

    sol.primal.assign(lp_.num_variables(), 0.0);
    for (std::size_t j = 0; j < variable_map_.size(); ++j) {
        const VariableMap& map = variable_map_[j];
        double x = map.offset + map.sign * value_[static_cast<std::size_t>(map.column)];
        if (map.negative_column >= 0) x -= value_[static_cast<std::size_t>(map.negative_column)];
        sol.primal[j] = x;
    }
    sol.objective_value = evaluate(lp_.objective(), sol.primal);

    const Vector y = btran(basic_costs());
    double dual_objective = objective_offset_;
    for (int i = 0; i < rows_; ++i) dual_objective += rhs_[static_cast<std::size_t>(i)] * y[i];
    for (int j = 0; j < first_slack_; ++j) {
        if (state_[static_cast<std::size_t>(j)] != ColumnState::AtUpper) continue;
        dual_objective += reduced_cost(j, y) * columns_[static_cast<std::size_t>(j)].upper;
    }
    sol.dual_objective = dual_objective;

    for (const Constraint& c : lp_.constraints()) sol.dual[c.name] = 0.0;
    for (int i = 0; i < rows_; ++i) {
        const auto& origin = normalized_.origin[static_cast<std::size_t>(i)];
        sol.dual[lp_.constraints()[origin.constraint].name] += origin.sign * y[i];
    }
    return sol;
}

Solution RevisedSimplex::run() {
    refactor();
    recompute_basic_values();

    phase_cost_.assign(columns_.size(), 0.0);
    const bool needs_phase_one = first_artificial_ < static_cast<int>(columns_.size());
    if (needs_phase_one) {
        for (std::size_t j = static_cast<std::size_t>(first_artificial_); j < columns_.size(); ++j) phase_cost_[j] = 1.0;
        if (optimize() != StepResult::Optimal) {
            throw Error(ErrorCode::NumericalFailure, "phase one reported an unbounded ray");
        }
        if (phase_objective() > options_.feasibility_tol) return extract(SolveStatus::Infeasible);
        for (std::size_t j = static_cast<std::size_t>(first_artificial_); j < columns_.size(); ++j) {
            columns_[j].upper = 0.0;
        }
        drive_out_artificials();
    }

    std::fill(phase_cost_.begin(), phase_cost_.end(), 0.0);
    for (int j = 0; j < first_slack_; ++j) phase_cost_[static_cast<std::size_t>(j)] = columns_[static_cast<std::size_t>(j)].cost;
    const StepResult result = optimize();
    if (result == StepResult::Unbounded) return extract(SolveStatus::Unbounded);
    refactor();
    recompute_basic_values();
    return extract(SolveStatus::Optimal);
}

}  // namespace

Solution solve(const LinearProgram& lp, const SolverOptions& options) {
    RevisedSimplex simplex(lp, options);
    return simplex.run();
}

}  // namespace nearopt
