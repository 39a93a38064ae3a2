#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace solarsched::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Equality-form linear program:
//   minimise cost . x  subject to  A x = rhs,  lower <= x <= upper.
// Rows are dense; the scheduler's programs have a few hundred columns.
struct Program {
    std::vector<double> cost;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    std::vector<std::string> row_names;

    std::size_t num_vars() const { return cost.size(); }
    std::size_t num_rows() const { return rows.size(); }

    // Appends a column and returns its index.
    std::size_t add_variable(double cost, double lower, double upper);
    // Appends an equality row over the given (column, coefficient) pairs.
    void add_row(const std::vector<std::pair<std::size_t, double>>& terms, double rhs, std::string name);
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    double pivot_tol = 1e-11;
    std::size_t max_iterations = 50000;
};

struct Solution {
    Status status = Status::infeasible;
    std::vector<double> x;
    double objective = 0.0;
    std::size_t iterations = 0;
    // Rows still carrying phase-one infeasibility when status is infeasible.
    std::vector<std::size_t> violated_rows;
};

// Bounded-variable primal simplex, two phases, dense tableau. Dantzig pricing
// with a switch to Bland's rule after a run of degenerate pivots. Basic values
// are recomputed from the original rows before returning.
Solution solve(const Program& program, const Options& options = {});

}  // namespace solarsched::lp
