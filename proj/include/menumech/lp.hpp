#pragma once

#include <vector>

namespace menumech {

enum class Relation { le, ge, eq };

// Dense LP in minimization form. Variables are nonnegative unless listed in
// free_vars (those are split internally).
struct LinearProgram {
    int num_vars{0};
    std::vector<double> objective;

    struct Row {
        std::vector<double> coeffs;
        Relation rel{Relation::le};
        double rhs{0.0};
    };
    std::vector<Row> rows;
    std::vector<bool> free_vars;  // optional; empty means all nonnegative

    int add_row(std::vector<double> coeffs, Relation rel, double rhs) {
        rows.push_back(Row{std::move(coeffs), rel, rhs});
        return static_cast<int>(rows.size()) - 1;
    }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status{LpStatus::infeasible};
    double value{0.0};
    std::vector<double> x;
};

// Two-phase dense simplex with Bland's rule.
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace menumech
