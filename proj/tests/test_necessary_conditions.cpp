#include <random>
#include <sstream>

#include "doctest.h"
#include "nearopt/error.hpp"
#include "nearopt/necessary_conditions.hpp"
#include "nearopt/vertex_enumeration.hpp"
#include "support/random_lp.hpp"

using namespace nearopt;

namespace {

const VariableId x1{0}, x2{1};

LinearProgram covering_lp() {
    return build_lp({{"x1", 0.0, kInf}, {"x2", 0.0, kInf}},
                    {{LinearExpr{{x1, 1.0}, {x2, 1.0}}, Sense::GreaterEqual, 2.0, "cover"}},
                    LinearExpr{{x1, 2.0}, {x2, 1.0}});
}

Direction e2() { return Direction({{x2, 1.0}}, "e2"); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an nearopt::Error");
    return ErrorCode::IoError;
}

// Random nonnegative direction over the first n variables with a nonempty support.
Direction random_direction(std::mt19937_64& rng, std::size_t n, const std::string& label) {
    std::uniform_int_distribution<int> weight(0, 3);
    std::map<VariableId, double> w;
    for (std::size_t j = 0; j < n; ++j) w[VariableId{j}] = weight(rng);
    w[VariableId{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)}] += 1.0;
    return Direction(std::move(w), label);
}

}  // namespace

TEST_CASE("hand-derived minima over the covering program") {
    const auto lp = covering_lp();
    const auto sol = solve(lp);

    const auto half = compute_nonimplied(build_epsilon_space(lp, sol, 0.5), e2());
    CHECK(half.status == RowStatus::Found);
    CHECK(half.c_star == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(half.minimizer[0] == doctest::Approx(1.0));
    CHECK(half.minimizer[1] == doctest::Approx(1.0));

    const auto zero = compute_nonimplied(build_epsilon_space(lp, sol, 0.0), e2());
    CHECK(zero.c_star == doctest::Approx(2.0).epsilon(1e-9));

    const Direction both({{x1, 1.0}, {x2, 1.0}}, "sum");
    for (double eps : {0.0, 0.1, 0.5, 2.0}) {
        CHECK(compute_nonimplied(build_epsilon_space(lp, sol, eps), both).c_star == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("is_necessary follows the c* characterization") {
    const auto lp = covering_lp();
    const auto space = build_epsilon_space(lp, solve(lp), 0.5);
    CHECK(is_necessary(space, {e2(), 0.5}));
    CHECK(is_necessary(space, {e2(), 1.0}));
    CHECK_FALSE(is_necessary(space, {e2(), 1.5}));
    const auto witness = compute_nonimplied(space, e2()).minimizer;
    CHECK_FALSE(ThresholdCondition{e2(), 1.5}.holds(witness));
}

TEST_CASE("implication within one family") {
    const Direction d({{x1, 1.0}, {x2, 2.0}}, "d");
    CHECK(implies({d, 1.0}, {d, 0.5}));
    CHECK_FALSE(implies({d, 0.5}, {d, 1.0}));
    CHECK_FALSE(implies({d, 1.0}, {d, 1.0}));
    // 2d'x >= 2 is the same half-space as d'x >= 1.
    const auto doubled = d.scaled(2.0, "2d");
    CHECK_FALSE(implies({doubled, 2.0}, {d, 1.0}));
    CHECK_FALSE(implies({d, 1.0}, {doubled, 2.0}));
    CHECK(implies({doubled, 2.5}, {d, 1.0}));
    CHECK(code_of([] { implies({Direction({{x1, 1.0}}, "a"), 1.0}, {Direction({{x2, 1.0}}, "b"), 0.0}); }) ==
          ErrorCode::IncomparableDirections);
    CHECK(code_of([&] { implies({d, 1.0}, {Direction({{x1, 1.0}, {x2, 3.0}}, "c"), 0.0}); }) ==
          ErrorCode::IncomparableDirections);
}

TEST_CASE("direction validation") {
    CHECK(code_of([] { Direction({}, "empty"); }) == ErrorCode::InvalidDirection);
    CHECK(code_of([] { Direction({{x1, 0.0}}, "zero"); }) == ErrorCode::InvalidDirection);
    CHECK(code_of([] { Direction({{x1, -1.0}}, "neg"); }) == ErrorCode::InvalidDirection);
    CHECK(Direction({{x1, 0.0}, {x2, 2.0}}, "d").weights().size() == 1);

    const auto lp = covering_lp();
    const auto space = build_epsilon_space(lp, solve(lp), 0.1);
    CHECK(code_of([&] { compute_nonimplied(space, Direction({{VariableId{5}, 1.0}}, "far")); }) ==
          ErrorCode::UnknownVariable);
}

TEST_CASE("unbounded directions and infeasible spaces are reported") {
    // x2 is free and only bounded above by x1, so min x2 over the space diverges.
    const auto lp = build_lp({{"x1", 0.0, kInf}, {"x2", -kInf, kInf}},
                             {{LinearExpr{{x1, 1.0}, {x2, -1.0}}, Sense::GreaterEqual, 0.0, "cap"}},
                             LinearExpr{{x1, 1.0}});
    const auto sol = solve(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    const auto space = build_epsilon_space(lp, sol, 0.1);
    CHECK(code_of([&] { compute_nonimplied(space, e2()); }) == ErrorCode::UnboundedDirection);

    // A forged optimum below the true one leaves no point under the budget.
    const auto cover = covering_lp();
    Solution forged = solve(cover);
    forged.objective_value = 1.0;
    CHECK(code_of([&] { compute_nonimplied(build_epsilon_space(cover, forged, 0.1), e2()); }) ==
          ErrorCode::EpsilonSpaceInfeasible);
}

TEST_CASE("sweep reproduces the hand-derived column and records failures") {
    const auto lp = covering_lp();
    const auto sol = solve(lp);
    const auto table = sweep(lp, sol, {0.0, 0.5}, {e2()});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0].c_star == doctest::Approx(2.0));
    CHECK(table.rows[1].c_star == doctest::Approx(1.0));

    // At eps = 0 with a unique optimum the minimizer is x* itself.
    const auto support = sweep(lp, sol, {0.0}, {e2()});
    CHECK(support.rows[0].c_star <= e2().dot(sol.primal) + 1e-7);
    CHECK(support.rows[0].c_star == doctest::Approx(e2().dot(sol.primal)));

    CHECK(code_of([&] { sweep(lp, sol, {0.0}, {}); }) == ErrorCode::InvalidDirection);
    CHECK(code_of([&] { sweep(lp, sol, {0.1, 0.1}, {e2()}); }) == ErrorCode::InvalidGrid);
    CHECK(code_of([&] { sweep(lp, sol, {-0.1, 0.1}, {e2()}); }) == ErrorCode::NegativeEpsilon);
    CHECK(code_of([&] { sweep(lp, sol, {0.1}, {e2(), e2()}); }) == ErrorCode::DuplicateLabel);

    const auto free_lp = build_lp({{"x1", 0.0, kInf}, {"x2", -kInf, kInf}},
                                  {{LinearExpr{{x1, 1.0}, {x2, -1.0}}, Sense::GreaterEqual, 0.0, "cap"}},
                                  LinearExpr{{x1, 1.0}});
    const auto mixed = sweep(free_lp, solve(free_lp), {0.0, 0.1}, {e2(), Direction({{x1, 1.0}}, "e1")});
    REQUIRE(mixed.rows.size() == 4);
    CHECK(mixed.rows[0].direction_label == "e1");
    CHECK(mixed.rows[0].status == RowStatus::Found);
    CHECK(mixed.rows[2].status == RowStatus::UnboundedDirection);
    CHECK(mixed.failed_rows() == 2);
}

TEST_CASE("sweep rows are ordered by label then epsilon regardless of threading") {
    std::mt19937_64 rng(8);
    const auto lp = testing::random_cost_lp(rng);
    const auto sol = solve(lp);
    const std::vector<Direction> dirs{Direction({{x2, 1.0}}, "zeta"), Direction({{x1, 1.0}}, "alpha"),
                                      Direction({{x1, 1.0}, {x2, 1.0}}, "mid")};
    SweepOptions serial;
    serial.threads = 1;
    SweepOptions parallel;
    parallel.threads = 4;
    const auto a = sweep(lp, sol, default_epsilon_grid(), dirs, serial);
    const auto b = sweep(lp, sol, default_epsilon_grid(), dirs, parallel);
    std::ostringstream ca, cb;
    write_sweep_csv(ca, a);
    write_sweep_csv(cb, b);
    CHECK(ca.str() == cb.str());
    CHECK(a.rows.front().direction_label == "alpha");
    CHECK(a.rows.back().direction_label == "zeta");
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        if (a.rows[i].direction_label == a.rows[i - 1].direction_label) CHECK(a.rows[i].epsilon > a.rows[i - 1].epsilon);
    }
}

TEST_CASE("CSV export format") {
    const auto lp = covering_lp();
    const auto table = sweep(lp, solve(lp), {0.0, 0.025}, {Direction({{x1, 1.0 / 3.0}, {x2, 1.0 / 3.0}}, "third")});
    std::ostringstream out;
    write_sweep_csv(out, table);
    CHECK(out.str() == "direction,epsilon,c_star,status\nthird,0,0.666666667,found\nthird,0.025,0.666666667,found\n");
}

TEST_CASE("necessary-condition properties on random programs") {
    std::mt19937_64 rng(4242);
    const std::vector<double> grid{0.0, 0.1, 0.2};
    for (int trial = 0; trial < 25; ++trial) {
        CAPTURE(trial);
        const auto lp = testing::random_cost_lp(rng);
        const auto sol = solve(lp);
        REQUIRE(sol.status == SolveStatus::Optimal);
        const auto d = random_direction(rng, lp.num_variables(), "d");
        double previous = kInf;
        for (double eps : grid) {
            const auto space = build_epsilon_space(lp, sol, eps);
            const auto r = compute_nonimplied(space, d);
            REQUIRE(r.status == RowStatus::Found);
            CHECK(space.contains(r.minimizer));
            CHECK(d.dot(r.minimizer) == doctest::Approx(r.c_star));
            // Every vertex of the space satisfies d'x >= c*.
            for (const auto& v : enumerate_vertices(space.augmented())) CHECK(d.dot(v) >= r.c_star - 1e-6);
            // Raising the threshold breaks necessity, witnessed by the minimizer.
            CHECK_FALSE(ThresholdCondition{d, r.c_star + 1e-3}.holds(r.minimizer));
            CHECK(r.c_star <= previous + 1e-6);
            CHECK(r.c_star <= d.dot(sol.primal) + 1e-6);
            previous = r.c_star;

            // No other necessary condition of the family implies the computed one.
            const ThresholdCondition best{d, r.c_star};
            for (double gap : {1e-3, 0.5, 3.0}) {
                const ThresholdCondition looser{d, r.c_star - gap};
                CHECK(is_necessary(space, looser));
                CHECK(implies(best, looser));
                CHECK_FALSE(implies(looser, best));
            }

            // Scaling a direction scales c*.
            const auto scaled = compute_nonimplied(space, d.scaled(2.5, "d*2.5"));
            CHECK(std::abs(scaled.c_star - 2.5 * r.c_star) <= 1e-7 * std::max(1.0, std::abs(r.c_star)));
        }
    }
}

TEST_CASE("superadditivity over disjoint supports") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 25; ++trial) {
        const auto lp = testing::random_cost_lp(rng);
        const auto sol = solve(lp);
        const std::size_t n = lp.num_variables();
        std::map<VariableId, double> left, right;
        for (std::size_t j = 0; j < n; ++j) (j % 2 == 0 ? left : right)[VariableId{j}] = 1.0 + static_cast<double>(j % 3);
        const Direction d1(left, "d1"), d2(right, "d2");
        const auto sum = d1.plus(d2, "d1+d2");
        for (double eps : {0.0, 0.1, 0.2}) {
            const auto space = build_epsilon_space(lp, sol, eps);
            CHECK(compute_nonimplied(space, sum).c_star >=
                  compute_nonimplied(space, d1).c_star + compute_nonimplied(space, d2).c_star - 1e-6);
        }
    }
}
