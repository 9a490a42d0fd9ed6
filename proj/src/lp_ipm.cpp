#include "mgdeploy/lp.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace mgdeploy::lp {

int Problem::add_column(double cost, double lower, double upper)
{
    if (!std::isfinite(lower)) throw std::invalid_argument("lp: lower bounds must be finite");
    if (upper < lower) throw std::invalid_argument("lp: upper bound below lower bound");
    cost_.push_back(cost);
    lower_.push_back(lower);
    upper_.push_back(upper);
    return num_cols() - 1;
}

int Problem::add_row(double rhs)
{
    rhs_.push_back(rhs);
    return num_rows() - 1;
}

void Problem::add_entry(int row, int col, double value)
{
    if (row < 0 || row >= num_rows() || col < 0 || col >= num_cols())
        throw std::out_of_range("lp: entry index out of range");
    if (value != 0.0) entries_.push_back({row, col, value});
}

void Problem::set_bounds(int col, double lower, double upper)
{
    if (!std::isfinite(lower)) throw std::invalid_argument("lp: lower bounds must be finite");
    if (upper < lower) throw std::invalid_argument("lp: upper bound below lower bound");
    lower_[col] = lower;
    upper_[col] = upper;
}

double Problem::max_row_residual(const std::vector<double>& x) const
{
    std::vector<double> r(rhs_);
    for (const auto& e : entries_) r[e.row] -= e.value * x[e.col];
    double worst = 0.0;
    for (double v : r) worst = std::max(worst, std::abs(v));
    return worst;
}

std::string to_string(Status s)
{
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::iteration_limit: return "iteration_limit";
        case Status::numerical_error: return "numerical_error";
    }
    return "unknown";
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vec = Eigen::VectorXd;

// Reduced problem after removing fixed columns and empty rows, with lower
// bounds shifted to zero.
struct Reduced {
    int m = 0;
    int n = 0;
    SpMat A;  // m x n
    Vec b;
    Vec c;
    Vec u;  // +inf when unbounded above
    std::vector<int> col_map;  // reduced column -> original column
    double objective_offset = 0.0;
    bool infeasible = false;
};

Reduced presolve(const Problem& p)
{
    Reduced r;
    const int n0 = p.num_cols();
    const int m0 = p.num_rows();

    std::vector<int> new_col(n0, -1);
    for (int j = 0; j < n0; ++j) {
        const double lo = p.lower(j);
        const double up = p.upper(j);
        const bool fixed = (up - lo) <= 1e-14 * std::max(1.0, std::abs(lo));
        r.objective_offset += p.cost(j) * lo;
        if (!fixed) {
            new_col[j] = static_cast<int>(r.col_map.size());
            r.col_map.push_back(j);
        }
    }
    r.n = static_cast<int>(r.col_map.size());

    std::vector<double> rhs(m0);
    for (int i = 0; i < m0; ++i) rhs[i] = p.rhs(i);
    std::vector<int> row_count(m0, 0);
    for (const auto& e : p.entries()) {
        rhs[e.row] -= e.value * p.lower(e.col);
        if (new_col[e.col] >= 0) ++row_count[e.row];
    }

    double bscale = 1.0;
    for (int i = 0; i < m0; ++i) bscale = std::max(bscale, std::abs(p.rhs(i)));

    std::vector<int> new_row(m0, -1);
    int m = 0;
    for (int i = 0; i < m0; ++i) {
        if (row_count[i] > 0) {
            new_row[i] = m++;
        } else if (std::abs(rhs[i]) > 1e-9 * bscale) {
            r.infeasible = true;
        }
    }
    r.m = m;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(p.entries().size());
    for (const auto& e : p.entries()) {
        if (new_col[e.col] >= 0 && new_row[e.row] >= 0)
            trips.emplace_back(new_row[e.row], new_col[e.col], e.value);
    }
    r.A.resize(m, r.n);
    r.A.setFromTriplets(trips.begin(), trips.end());
    r.A.makeCompressed();

    r.b.resize(m);
    for (int i = 0; i < m0; ++i)
        if (new_row[i] >= 0) r.b[new_row[i]] = rhs[i];
    r.c.resize(r.n);
    r.u.resize(r.n);
    for (int k = 0; k < r.n; ++k) {
        const int j = r.col_map[k];
        r.c[k] = p.cost(j);
        r.u[k] = p.upper(j) - p.lower(j);
    }
    return r;
}

// Normal-equation matrix A D A' with a fixed sparsity pattern; each column
// of A contributes d_j a_j a_j' at precomputed value slots.
class NormalMatrix {
public:
    explicit NormalMatrix(const SpMat& A) : A_(A)
    {
        const int m = static_cast<int>(A.rows());
        std::vector<Eigen::Triplet<double>> trips;
        for (int i = 0; i < m; ++i) trips.emplace_back(i, i, 1.0);
        for (int j = 0; j < A.outerSize(); ++j) {
            for (SpMat::InnerIterator a(A, j); a; ++a) {
                for (SpMat::InnerIterator b(A, j); b; ++b) {
                    if (b.row() >= a.row()) trips.emplace_back(b.row(), a.row(), 1.0);
                }
            }
        }
        M_.resize(m, m);
        M_.setFromTriplets(trips.begin(), trips.end());
        M_.makeCompressed();

        diag_slot_.resize(m);
        for (int i = 0; i < m; ++i) diag_slot_[i] = slot(i, i);
        for (int j = 0; j < A.outerSize(); ++j) {
            for (SpMat::InnerIterator a(A, j); a; ++a) {
                for (SpMat::InnerIterator b(A, j); b; ++b) {
                    if (b.row() >= a.row()) {
                        pair_slot_.push_back(slot(static_cast<int>(b.row()), static_cast<int>(a.row())));
                        pair_value_.push_back(a.value() * b.value());
                        pair_col_.push_back(j);
                    }
                }
            }
        }
    }

    const SpMat& assemble(const Vec& d, double regularization)
    {
        double* values = M_.valuePtr();
        std::fill(values, values + M_.nonZeros(), 0.0);
        for (std::size_t k = 0; k < pair_slot_.size(); ++k)
            values[pair_slot_[k]] += d[pair_col_[k]] * pair_value_[k];
        for (int s : diag_slot_) values[s] += regularization;
        return M_;
    }

    double max_diagonal() const
    {
        double worst = 0.0;
        for (int s : diag_slot_) worst = std::max(worst, M_.valuePtr()[s]);
        return worst;
    }

private:
    int slot(int row, int col) const
    {
        const int* begin = M_.innerIndexPtr() + M_.outerIndexPtr()[col];
        const int* end = M_.innerIndexPtr() + M_.outerIndexPtr()[col + 1];
        const int* it = std::lower_bound(begin, end, row);
        return static_cast<int>(it - M_.innerIndexPtr());
    }

    const SpMat& A_;
    SpMat M_;
    std::vector<int> diag_slot_;
    std::vector<int> pair_slot_;
    std::vector<int> pair_col_;
    std::vector<double> pair_value_;
};

constexpr double kAcceptableMerit = 1e-8;

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

double max_step(const Vec& v, const Vec& dv, const std::vector<char>& mask)
{
    double alpha = 1.0;
    for (Eigen::Index k = 0; k < v.size(); ++k) {
        if (!mask.empty() && !mask[k]) continue;
        if (dv[k] < 0.0) alpha = std::min(alpha, -v[k] / dv[k]);
    }
    return alpha;
}

}  // namespace

Solution solve(const Problem& problem, const Options& options)
{
    Solution out;
    out.x.assign(problem.num_cols(), 0.0);
    for (int j = 0; j < problem.num_cols(); ++j) out.x[j] = problem.lower(j);

    Reduced r = presolve(problem);
    if (r.infeasible) {
        out.status = Status::infeasible;
        return out;
    }
    const int n = r.n;
    const int m = r.m;

    auto finish = [&](const Vec& x, Status status) {
        for (int k = 0; k < n; ++k) out.x[r.col_map[k]] += x[k];
        out.objective = r.objective_offset + (n > 0 ? r.c.dot(x) : 0.0);
        out.status = status;
        return out;
    };

    if (n == 0) {
        out.objective = r.objective_offset;
        out.status = Status::optimal;
        return out;
    }

    std::vector<char> bounded(n, 0);
    int num_bounded = 0;
    for (int k = 0; k < n; ++k) {
        if (std::isfinite(r.u[k])) {
            bounded[k] = 1;
            ++num_bounded;
        }
    }
    const double complementarity_count = static_cast<double>(n + num_bounded);

    Vec x(n), z(n), w = Vec::Zero(n), s = Vec::Zero(n), y = Vec::Zero(m);
    for (int k = 0; k < n; ++k) {
        if (bounded[k]) {
            x[k] = 0.5 * r.u[k];
            w[k] = 0.5 * r.u[k];
            s[k] = 1.0;
        } else {
            x[k] = 1.0;
        }
        z[k] = 1.0;
    }

    const double bnorm = 1.0 + inf_norm(r.b);
    const double cnorm = 1.0 + inf_norm(r.c);
    const SpMat At = r.A.transpose();

    NormalMatrix normal(r.A);
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
    bool analyzed = false;

    Vec d(n), rhat(n), rp(m), rd(n), ru(n), rxz(n), rws(n);
    Vec dx(n), dy(m), dz(n), dw(n), ds(n);
    double regularization = 1e-12;
    // Best iterate seen, for runs that stall just short of the tolerance.
    Vec best_x = x;
    double best_merit = std::numeric_limits<double>::infinity();
    double best_pinf = best_merit, best_dinf = best_merit;
    auto fallback = [&](Status status) {
        out.primal_infeasibility = best_pinf;
        out.dual_infeasibility = best_dinf;
        if (best_merit <= kAcceptableMerit) status = Status::optimal;
        return finish(best_x, status);
    };

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        out.iterations = iter;
        rp = r.b - r.A * x;
        rd = r.c - At * y - z + s;
        for (int k = 0; k < n; ++k) ru[k] = bounded[k] ? r.u[k] - x[k] - w[k] : 0.0;

        const double pobj = r.c.dot(x);
        double dobj = r.b.dot(y);
        for (int k = 0; k < n; ++k)
            if (bounded[k]) dobj -= r.u[k] * s[k];

        const double pinf = std::max(inf_norm(rp), inf_norm(ru)) / bnorm;
        const double dinf = inf_norm(rd) / cnorm;
        const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
        out.primal_infeasibility = pinf;
        out.dual_infeasibility = dinf;
        out.dual_objective = r.objective_offset + dobj;

        const double merit = std::max({pinf, dinf, gap});
        if (!std::isfinite(merit)) return fallback(Status::numerical_error);
        if (merit < best_merit) {
            best_merit = merit;
            best_pinf = pinf;
            best_dinf = dinf;
            best_x = x;
        }
        if (pinf <= options.tolerance && dinf <= options.tolerance && gap <= options.tolerance)
            return finish(x, Status::optimal);
        if (inf_norm(x) > 1e14 || inf_norm(y) > 1e14) return fallback(Status::infeasible);

        const double mu = (x.dot(z) + w.dot(s)) / complementarity_count;

        for (int k = 0; k < n; ++k) {
            double inv = z[k] / x[k];
            if (bounded[k]) inv += s[k] / w[k];
            d[k] = 1.0 / inv;
        }

        const SpMat& M = normal.assemble(d, regularization);
        if (!analyzed) {
            ldlt.analyzePattern(M);
            analyzed = true;
        }
        ldlt.factorize(M);
        int retries = 0;
        while (ldlt.info() != Eigen::Success && retries < 8) {
            regularization = std::max(regularization * 100.0, 1e-10 * normal.max_diagonal());
            ldlt.factorize(normal.assemble(d, regularization));
            ++retries;
        }
        if (ldlt.info() != Eigen::Success) return fallback(Status::numerical_error);

        auto newton = [&](const Vec& rxz_in, const Vec& rws_in) {
            for (int k = 0; k < n; ++k) {
                rhat[k] = rd[k] - rxz_in[k] / x[k];
                if (bounded[k]) rhat[k] += (rws_in[k] - s[k] * ru[k]) / w[k];
            }
            const Vec rhs = rp + r.A * d.cwiseProduct(rhat);
            dy = ldlt.solve(rhs);
            dx = d.cwiseProduct(At * dy - rhat);
            for (int k = 0; k < n; ++k) {
                dz[k] = (rxz_in[k] - z[k] * dx[k]) / x[k];
                if (bounded[k]) {
                    dw[k] = ru[k] - dx[k];
                    ds[k] = (rws_in[k] - s[k] * dw[k]) / w[k];
                } else {
                    dw[k] = 0.0;
                    ds[k] = 0.0;
                }
            }
        };

        // Predictor.
        rxz = -x.cwiseProduct(z);
        rws = -w.cwiseProduct(s);
        newton(rxz, rws);
        double ap = std::min(max_step(x, dx, {}), max_step(w, dw, bounded));
        double ad = std::min(max_step(z, dz, {}), max_step(s, ds, bounded));
        const double mu_aff = ((x + ap * dx).dot(z + ad * dz) + (w + ap * dw).dot(s + ad * ds)) /
                              complementarity_count;
        const double sigma = std::pow(mu_aff / mu, 3.0);

        // Corrector.
        const Vec dx_aff = dx, dz_aff = dz, dw_aff = dw, ds_aff = ds;
        for (int k = 0; k < n; ++k) {
            rxz[k] = sigma * mu - x[k] * z[k] - dx_aff[k] * dz_aff[k];
            rws[k] = bounded[k] ? sigma * mu - w[k] * s[k] - dw_aff[k] * ds_aff[k] : 0.0;
        }
        newton(rxz, rws);

        const double eta = std::max(0.9, 1.0 - 10.0 * mu);
        ap = std::min(1.0, eta * std::min(max_step(x, dx, {}), max_step(w, dw, bounded)));
        ad = std::min(1.0, eta * std::min(max_step(z, dz, {}), max_step(s, ds, bounded)));

        x += ap * dx;
        w += ap * dw;
        y += ad * dy;
        z += ad * dz;
        s += ad * ds;
        for (int k = 0; k < n; ++k) {
            x[k] = std::max(x[k], 1e-300);
            z[k] = std::max(z[k], 1e-300);
            if (bounded[k]) {
                w[k] = std::max(w[k], 1e-300);
                s[k] = std::max(s[k], 1e-300);
            }
        }
    }
    return fallback(Status::iteration_limit);
}

}  // namespace mgdeploy::lp
