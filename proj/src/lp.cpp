#include "menumech/lp.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "menumech/errors.hpp"

namespace menumech {

namespace {

constexpr double kEps = 1e-9;
constexpr int kMaxIters = 200000;

struct Tableau {
    int m{0}, n{0};                       // rows, columns (excluding rhs)
    std::vector<std::vector<double>> a;   // m x n
    std::vector<double> b;                // m
    std::vector<int> basis;               // m, column index basic in each row

    void pivot(int row, int col) {
        double piv = a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
        auto& prow = a[static_cast<std::size_t>(row)];
        for (double& x : prow) x /= piv;
        b[static_cast<std::size_t>(row)] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            double f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)];
            if (f == 0.0) continue;
            auto& irow = a[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) irow[static_cast<std::size_t>(j)] -= f * prow[static_cast<std::size_t>(j)];
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(row)];
        }
        basis[static_cast<std::size_t>(row)] = col;
    }
};

// Minimize c over the tableau with Bland's rule. allowed[j] = false bans a
// column from entering. Returns false when unbounded.
bool simplex(Tableau& t, const std::vector<double>& c, const std::vector<bool>& allowed,
             int& iters) {
    while (true) {
        if (++iters > kMaxIters) throw lp_failure("simplex iteration guard exceeded");
        // Reduced costs: r_j = c_j - sum_i c_B(i) * a(i, j).
        int enter = -1;
        for (int j = 0; j < t.n; ++j) {
            if (!allowed[static_cast<std::size_t>(j)]) continue;
            double r = c[static_cast<std::size_t>(j)];
            for (int i = 0; i < t.m; ++i) {
                double cb = c[static_cast<std::size_t>(t.basis[static_cast<std::size_t>(i)])];
                if (cb != 0.0) r -= cb * t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            if (r < -kEps) { enter = j; break; }  // Bland: first eligible index
        }
        if (enter < 0) return true;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < t.m; ++i) {
            double aij = t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
            if (aij > kEps) {
                double ratio = t.b[static_cast<std::size_t>(i)] / aij;
                if (ratio < best_ratio - kEps ||
                    (ratio < best_ratio + kEps && leave >= 0 &&
                     t.basis[static_cast<std::size_t>(i)] < t.basis[static_cast<std::size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) return false;  // unbounded
        t.pivot(leave, enter);
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    if (lp.num_vars <= 0) throw std::invalid_argument("LP has no variables");
    if (static_cast<int>(lp.objective.size()) != lp.num_vars)
        throw std::invalid_argument("objective length mismatch");
    for (const auto& row : lp.rows)
        if (static_cast<int>(row.coeffs.size()) != lp.num_vars)
            throw std::invalid_argument("constraint length mismatch");

    std::vector<bool> is_free(static_cast<std::size_t>(lp.num_vars), false);
    if (!lp.free_vars.empty()) {
        if (static_cast<int>(lp.free_vars.size()) != lp.num_vars)
            throw std::invalid_argument("free_vars length mismatch");
        is_free = lp.free_vars;
    }

    // Split free variables x = x+ - x-.
    std::vector<int> neg_col(static_cast<std::size_t>(lp.num_vars), -1);
    int n_struct = lp.num_vars;
    for (int j = 0; j < lp.num_vars; ++j)
        if (is_free[static_cast<std::size_t>(j)]) neg_col[static_cast<std::size_t>(j)] = n_struct++;

    const int m = static_cast<int>(lp.rows.size());
    int n_slack = 0;
    for (const auto& row : lp.rows)
        if (row.rel != Relation::eq) ++n_slack;

    // Columns: structural | slack/surplus | artificial (one per row).
    const int art0 = n_struct + n_slack;
    const int n_total = art0 + m;

    Tableau t;
    t.m = m;
    t.n = n_total;
    t.a.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n_total), 0.0));
    t.b.assign(static_cast<std::size_t>(m), 0.0);
    t.basis.assign(static_cast<std::size_t>(m), -1);

    int slack_idx = n_struct;
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[static_cast<std::size_t>(i)];
        double sign = row.rhs < 0.0 ? -1.0 : 1.0;
        Relation rel = row.rel;
        if (sign < 0.0 && rel == Relation::le) rel = Relation::ge;
        else if (sign < 0.0 && rel == Relation::ge) rel = Relation::le;

        for (int j = 0; j < lp.num_vars; ++j) {
            double cj = sign * row.coeffs[static_cast<std::size_t>(j)];
            t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = cj;
            if (neg_col[static_cast<std::size_t>(j)] >= 0)
                t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(neg_col[static_cast<std::size_t>(j)])] = -cj;
        }
        t.b[static_cast<std::size_t>(i)] = sign * row.rhs;

        if (row.rel != Relation::eq) {
            double s = (rel == Relation::le) ? 1.0 : -1.0;
            t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(slack_idx)] = s;
            if (rel == Relation::le) t.basis[static_cast<std::size_t>(i)] = slack_idx;
            ++slack_idx;
        }
        if (t.basis[static_cast<std::size_t>(i)] < 0) {
            t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(art0 + i)] = 1.0;
            t.basis[static_cast<std::size_t>(i)] = art0 + i;
        }
    }

    int iters = 0;
    std::vector<bool> allowed(static_cast<std::size_t>(n_total), true);

    // Phase 1: drive artificials to zero.
    bool any_art = false;
    for (int i = 0; i < m; ++i)
        if (t.basis[static_cast<std::size_t>(i)] >= art0) any_art = true;
    if (any_art) {
        std::vector<double> c1(static_cast<std::size_t>(n_total), 0.0);
        for (int j = art0; j < n_total; ++j) c1[static_cast<std::size_t>(j)] = 1.0;
        if (!simplex(t, c1, allowed, iters)) throw lp_failure("phase 1 unbounded");
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (t.basis[static_cast<std::size_t>(i)] >= art0) infeas += t.b[static_cast<std::size_t>(i)];
        if (infeas > 1e-7) return LpSolution{LpStatus::infeasible, 0.0, {}};
        // Pivot lingering (degenerate) artificials out of the basis.
        for (int i = 0; i < m; ++i) {
            if (t.basis[static_cast<std::size_t>(i)] < art0) continue;
            for (int j = 0; j < art0; ++j) {
                if (std::abs(t.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > kEps) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
    }
    for (int j = art0; j < n_total; ++j) allowed[static_cast<std::size_t>(j)] = false;

    // Phase 2.
    std::vector<double> c2(static_cast<std::size_t>(n_total), 0.0);
    for (int j = 0; j < lp.num_vars; ++j) {
        c2[static_cast<std::size_t>(j)] = lp.objective[static_cast<std::size_t>(j)];
        if (neg_col[static_cast<std::size_t>(j)] >= 0)
            c2[static_cast<std::size_t>(neg_col[static_cast<std::size_t>(j)])] =
                -lp.objective[static_cast<std::size_t>(j)];
    }
    if (!simplex(t, c2, allowed, iters)) return LpSolution{LpStatus::unbounded, 0.0, {}};

    std::vector<double> full(static_cast<std::size_t>(n_total), 0.0);
    for (int i = 0; i < m; ++i) {
        int bj = t.basis[static_cast<std::size_t>(i)];
        if (bj >= 0 && bj < n_total) full[static_cast<std::size_t>(bj)] = t.b[static_cast<std::size_t>(i)];
    }
    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.x.assign(static_cast<std::size_t>(lp.num_vars), 0.0);
    for (int j = 0; j < lp.num_vars; ++j) {
        double x = full[static_cast<std::size_t>(j)];
        if (neg_col[static_cast<std::size_t>(j)] >= 0)
            x -= full[static_cast<std::size_t>(neg_col[static_cast<std::size_t>(j)])];
        sol.x[static_cast<std::size_t>(j)] = x;
        sol.value += lp.objective[static_cast<std::size_t>(j)] * x;
    }
    return sol;
}

}  // namespace menumech
