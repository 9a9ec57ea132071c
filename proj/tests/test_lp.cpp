#include <vector>

#include "doctest.h"
#include "menumech/lp.hpp"

using namespace menumech;

TEST_CASE("simple maximization vertex") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {-1.0, -1.0};
    lp.add_row({1.0, 1.0}, Relation::le, 1.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(-1.0));
    CHECK(sol.x[0] + sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("lower bounded variable") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.add_row({1.0}, Relation::ge, 3.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(3.0));
    CHECK(sol.x[0] == doctest::Approx(3.0));
}

TEST_CASE("infeasible system") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {0.0};
    lp.add_row({1.0}, Relation::le, -1.0);  // x <= -1 with x >= 0
    CHECK(solve_lp(lp).status == LpStatus::infeasible);
}

TEST_CASE("unbounded objective") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {-1.0};
    lp.add_row({1.0}, Relation::ge, 0.0);
    CHECK(solve_lp(lp).status == LpStatus::unbounded);
}

TEST_CASE("equality constraints") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1.0, 2.0};
    lp.add_row({1.0, 1.0}, Relation::eq, 4.0);
    lp.add_row({1.0, 0.0}, Relation::le, 3.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    // push weight onto the cheap variable: x = (3, 1)
    CHECK(sol.value == doctest::Approx(5.0));
    CHECK(sol.x[0] == doctest::Approx(3.0));
    CHECK(sol.x[1] == doctest::Approx(1.0));
}

TEST_CASE("free variables can go negative") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.free_vars = {true};
    lp.add_row({1.0}, Relation::ge, -3.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(-3.0));
    CHECK(sol.x[0] == doctest::Approx(-3.0));
}

TEST_CASE("degenerate rows do not cycle") {
    LinearProgram lp;
    lp.num_vars = 3;
    lp.objective = {-0.75, 150.0, -0.02};
    lp.add_row({0.25, -60.0, -0.04}, Relation::le, 0.0);
    lp.add_row({0.5, -90.0, -0.02}, Relation::le, 0.0);
    lp.add_row({0.0, 0.0, 1.0}, Relation::le, 1.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(sol.value == doctest::Approx(-0.05).epsilon(1e-6));
}

TEST_CASE("solution satisfies all constraints") {
    LinearProgram lp;
    lp.num_vars = 4;
    lp.objective = {3.0, -2.0, 1.0, -1.0};
    lp.add_row({1.0, 1.0, 1.0, 1.0}, Relation::le, 10.0);
    lp.add_row({1.0, -1.0, 2.0, 0.0}, Relation::ge, 2.0);
    lp.add_row({0.0, 1.0, 0.0, 3.0}, Relation::eq, 6.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    double r1 = sol.x[0] + sol.x[1] + sol.x[2] + sol.x[3];
    double r2 = sol.x[0] - sol.x[1] + 2.0 * sol.x[2];
    double r3 = sol.x[1] + 3.0 * sol.x[3];
    CHECK(r1 <= 10.0 + 1e-8);
    CHECK(r2 >= 2.0 - 1e-8);
    CHECK(r3 == doctest::Approx(6.0).epsilon(1e-8));
    for (double x : sol.x) CHECK(x >= -1e-9);
}
