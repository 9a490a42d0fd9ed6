#pragma once

#include <limits>
#include <string>
#include <vector>

namespace mgdeploy::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Linear program in equality form:
//   minimize  c'x   subject to  A x = b,  lower <= x <= upper.
// Lower bounds must be finite. Columns with lower == upper are treated as
// constants and removed before the solve.
class Problem {
public:
    int add_column(double cost, double lower, double upper);
    int add_row(double rhs);
    void add_entry(int row, int col, double value);

    void set_bounds(int col, double lower, double upper);
    void set_cost(int col, double cost) { cost_[col] = cost; }

    int num_rows() const { return static_cast<int>(rhs_.size()); }
    int num_cols() const { return static_cast<int>(cost_.size()); }

    double cost(int col) const { return cost_[col]; }
    double lower(int col) const { return lower_[col]; }
    double upper(int col) const { return upper_[col]; }
    double rhs(int row) const { return rhs_[row]; }

    struct Entry {
        int row;
        int col;
        double value;
    };
    const std::vector<Entry>& entries() const { return entries_; }

    // Largest absolute residual of A x = b.
    double max_row_residual(const std::vector<double>& x) const;

private:
    std::vector<double> cost_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> rhs_;
    std::vector<Entry> entries_;
};

enum class Status { optimal, infeasible, iteration_limit, numerical_error };

std::string to_string(Status s);

struct Options {
    double tolerance = 1e-10;
    int max_iterations = 200;
};

struct Solution {
    Status status = Status::numerical_error;
    std::vector<double> x;
    double objective = 0.0;
    double dual_objective = 0.0;
    double primal_infeasibility = 0.0;
    double dual_infeasibility = 0.0;
    int iterations = 0;
};

// Primal-dual interior point method (Mehrotra predictor-corrector) on the
// normal equations, factorized with a sparse LDL'.
Solution solve(const Problem& problem, const Options& options = {});

}  // namespace mgdeploy::lp
