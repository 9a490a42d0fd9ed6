#pragma once

// Test-only exact LP oracle: dense two-phase tableau simplex with Bland's
// rule. Shares no code with the production interior point solver.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace oracle {

struct DenseLp {
    // minimize c'x  s.t.  A x = b,  lo <= x <= hi  (hi may be +inf)
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    std::vector<double> c;
    std::vector<double> lo;
    std::vector<double> hi;

    int add_var(double cost, double lower, double upper)
    {
        c.push_back(cost);
        lo.push_back(lower);
        hi.push_back(upper);
        for (auto& row : A) row.push_back(0.0);
        return static_cast<int>(c.size()) - 1;
    }
    int add_row(double rhs)
    {
        A.emplace_back(c.size(), 0.0);
        b.push_back(rhs);
        return static_cast<int>(b.size()) - 1;
    }
};

struct DenseResult {
    double objective;
    std::vector<double> x;
};

inline std::optional<DenseResult> solve_dense(const DenseLp& lp)
{
    constexpr double eps = 1e-10;
    const int n0 = static_cast<int>(lp.c.size());

    // Rows: original equalities plus x_j + t_j = hi_j - lo_j for finite hi.
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (std::size_t i = 0; i < lp.A.size(); ++i) {
        double r = lp.b[i];
        for (int j = 0; j < n0; ++j) r -= lp.A[i][j] * lp.lo[j];
        rows.push_back(lp.A[i]);
        rhs.push_back(r);
    }
    std::vector<int> ub_cols;
    for (int j = 0; j < n0; ++j)
        if (std::isfinite(lp.hi[j])) ub_cols.push_back(j);
    const int n_slack = static_cast<int>(ub_cols.size());
    const int n1 = n0 + n_slack;
    for (auto& row : rows) row.resize(n1, 0.0);
    for (int k = 0; k < n_slack; ++k) {
        std::vector<double> row(n1, 0.0);
        row[ub_cols[k]] = 1.0;
        row[n0 + k] = 1.0;
        rows.push_back(row);
        rhs.push_back(lp.hi[ub_cols[k]] - lp.lo[ub_cols[k]]);
    }
    const int m = static_cast<int>(rows.size());
    const int n = n1 + m;  // plus artificials

    // Tableau with m constraint rows and one objective row, last column RHS.
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(n + 1, 0.0));
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        const double sign = rhs[i] < 0 ? -1.0 : 1.0;
        for (int j = 0; j < n1; ++j) t[i][j] = sign * rows[i][j];
        t[i][n1 + i] = 1.0;
        t[i][n] = sign * rhs[i];
        basis[i] = n1 + i;
    }

    auto pivot = [&](int pr, int pc) {
        const double pv = t[pr][pc];
        for (double& v : t[pr]) v /= pv;
        for (int i = 0; i <= m; ++i) {
            if (i == pr) continue;
            const double f = t[i][pc];
            if (f == 0.0) continue;
            for (int j = 0; j <= n; ++j) t[i][j] -= f * t[pr][j];
        }
        basis[pr] = pc;
    };

    auto run = [&](int allowed_cols) -> bool {
        for (int guard = 0; guard < 100000; ++guard) {
            int pc = -1;
            for (int j = 0; j < allowed_cols; ++j) {
                if (t[m][j] < -eps) {
                    pc = j;
                    break;
                }
            }
            if (pc < 0) return true;
            int pr = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (t[i][pc] > eps) {
                    const double ratio = t[i][n] / t[i][pc];
                    if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis[i] < basis[pr])) {
                        best = ratio;
                        pr = i;
                    }
                }
            }
            if (pr < 0) return false;  // unbounded
            pivot(pr, pc);
        }
        return false;
    };

    // Phase 1: minimize the sum of artificials.
    for (int j = 0; j <= n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += t[i][j];
        t[m][j] = (j >= n1 && j < n) ? 0.0 : -s;
    }
    if (!run(n)) return std::nullopt;
    if (-t[m][n] > 1e-7) return std::nullopt;  // infeasible

    // Drive remaining artificials out of the basis.
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n1) {
            for (int j = 0; j < n1; ++j) {
                if (std::abs(t[i][j]) > 1e-9) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    // Phase 2.
    std::vector<double> cost(n1, 0.0);
    for (int j = 0; j < n0; ++j) cost[j] = lp.c[j];
    for (int j = 0; j <= n; ++j) t[m][j] = (j < n1) ? cost[j] : 0.0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n1 && cost[basis[i]] != 0.0) {
            const double f = cost[basis[i]];
            for (int j = 0; j <= n; ++j) t[m][j] -= f * t[i][j];
        }
    }
    if (!run(n1)) return std::nullopt;

    DenseResult res;
    res.x.assign(n0, 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n0) res.x[basis[i]] = t[i][n];
    res.objective = 0.0;
    for (int j = 0; j < n0; ++j) {
        res.x[j] += lp.lo[j];
        res.objective += lp.c[j] * res.x[j];
    }
    return res;
}

}  // namespace oracle
