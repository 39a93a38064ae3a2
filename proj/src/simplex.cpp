#include "solarsched/simplex.hpp"

#include <algorithm>
#include <cmath>

#include "solarsched/error.hpp"

namespace solarsched::lp {

std::size_t Program::add_variable(double c, double lo, double hi) {
    if (lo > hi) throw Error("variable lower bound exceeds upper bound");
    cost.push_back(c);
    lower.push_back(lo);
    upper.push_back(hi);
    for (auto& row : rows) row.push_back(0.0);
    return cost.size() - 1;
}

void Program::add_row(const std::vector<std::pair<std::size_t, double>>& terms, double b, std::string name) {
    std::vector<double> row(num_vars(), 0.0);
    for (const auto& [col, coef] : terms) {
        if (col >= row.size()) throw Error("row references unknown column");
        row[col] += coef;
    }
    rows.push_back(std::move(row));
    rhs.push_back(b);
    row_names.push_back(std::move(name));
}

namespace {

// Dense tableau state for the bounded-variable method. Columns [0, n) are the
// structural variables, [n, n+m) one artificial per row.
class Tableau {
public:
    Tableau(const Program& p, const Options& opt) : p_(p), opt_(opt), m_(p.num_rows()), n_(p.num_vars()) {
        const std::size_t total = n_ + m_;
        lower_.assign(total, 0.0);
        upper_.assign(total, kInfinity);
        std::copy(p.lower.begin(), p.lower.end(), lower_.begin());
        std::copy(p.upper.begin(), p.upper.end(), upper_.begin());
        x_.assign(total, 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
            if (std::isfinite(lower_[j])) x_[j] = lower_[j];
            else if (std::isfinite(upper_[j])) x_[j] = upper_[j];
        }
        sign_.assign(m_, 1.0);
        t_.assign(m_, std::vector<double>(total, 0.0));
        basis_.resize(m_);
        is_basic_.assign(total, false);
        for (std::size_t i = 0; i < m_; ++i) {
            double r = p.rhs[i];
            for (std::size_t j = 0; j < n_; ++j) r -= p.rows[i][j] * x_[j];
            sign_[i] = r >= 0.0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < n_; ++j) t_[i][j] = sign_[i] * p.rows[i][j];
            t_[i][n_ + i] = 1.0;
            basis_[i] = n_ + i;
            is_basic_[n_ + i] = true;
            x_[n_ + i] = std::abs(r);
        }
    }

    // Runs simplex iterations for the given cost vector (length n+m).
    Status optimise(const std::vector<double>& cost, std::size_t& iterations) {
        std::size_t degenerate_run = 0;
        std::vector<double> reduced(cost.size());
        while (true) {
            if (iterations >= opt_.max_iterations) return Status::iteration_limit;
            const bool bland = degenerate_run > 50;

            for (std::size_t j = 0; j < cost.size(); ++j) {
                if (is_basic_[j]) {
                    reduced[j] = 0.0;
                    continue;
                }
                double d = cost[j];
                for (std::size_t i = 0; i < m_; ++i) {
                    const double cb = cost[basis_[i]];
                    if (cb != 0.0) d -= cb * t_[i][j];
                }
                reduced[j] = d;
            }

            std::size_t entering = cost.size();
            double direction = 0.0;
            double best = 0.0;
            for (std::size_t j = 0; j < cost.size(); ++j) {
                if (is_basic_[j] || lower_[j] == upper_[j]) continue;
                const double d = reduced[j];
                const bool can_increase = x_[j] < upper_[j];
                const bool can_decrease = x_[j] > lower_[j];
                double dir = 0.0;
                if (d < -opt_.optimality_tol && can_increase) dir = 1.0;
                else if (d > opt_.optimality_tol && can_decrease) dir = -1.0;
                if (dir == 0.0) continue;
                if (bland) {
                    entering = j;
                    direction = dir;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    entering = j;
                    direction = dir;
                }
            }
            if (entering == cost.size()) return Status::optimal;

            // Ratio test.
            double step = upper_[entering] - lower_[entering];  // bound flip
            std::size_t leave_row = m_;
            double leave_alpha = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double alpha = direction * t_[i][entering];
                if (std::abs(alpha) <= opt_.pivot_tol) continue;
                const std::size_t b = basis_[i];
                double limit = kInfinity;
                if (alpha > 0.0 && std::isfinite(lower_[b])) limit = std::max(0.0, x_[b] - lower_[b]) / alpha;
                else if (alpha < 0.0 && std::isfinite(upper_[b])) limit = std::max(0.0, upper_[b] - x_[b]) / -alpha;
                if (!std::isfinite(limit)) continue;
                bool take = false;
                if (limit < step - 1e-12) {
                    take = true;
                } else if (limit <= step + 1e-12 && leave_row < m_) {
                    // Near-tie: prefer the larger pivot, then the lower basis index.
                    if (std::abs(alpha) > std::abs(leave_alpha) * (1.0 + 1e-9)) take = true;
                    else if (std::abs(alpha) >= std::abs(leave_alpha) * (1.0 - 1e-9) && b < basis_[leave_row])
                        take = true;
                }
                if (take) {
                    step = std::min(step, limit);
                    leave_row = i;
                    leave_alpha = alpha;
                }
            }
            if (!std::isfinite(step)) return Status::unbounded;

            ++iterations;
            degenerate_run = step <= opt_.feasibility_tol ? degenerate_run + 1 : 0;

            for (std::size_t i = 0; i < m_; ++i) {
                const double a = t_[i][entering];
                if (a != 0.0) x_[basis_[i]] -= direction * a * step;
            }
            x_[entering] += direction * step;

            if (leave_row == m_) {
                // Bound flip: snap to the opposite bound exactly.
                x_[entering] = direction > 0.0 ? upper_[entering] : lower_[entering];
                continue;
            }
            const std::size_t leaving = basis_[leave_row];
            x_[leaving] = leave_alpha > 0.0 ? lower_[leaving] : upper_[leaving];
            pivot(leave_row, entering);
        }
    }

    void pivot(std::size_t r, std::size_t j) {
        auto& prow = t_[r];
        const double piv = prow[j];
        for (auto& v : prow) v /= piv;
        prow[j] = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = t_[i][j];
            if (f == 0.0) continue;
            auto& row = t_[i];
            for (std::size_t k = 0; k < row.size(); ++k) {
                if (prow[k] != 0.0) row[k] -= f * prow[k];
            }
            row[j] = 0.0;
        }
        is_basic_[basis_[r]] = false;
        basis_[r] = j;
        is_basic_[j] = true;
    }

    double artificial_infeasibility() const {
        double s = 0.0;
        for (std::size_t i = 0; i < m_; ++i) s += x_[n_ + i];
        return s;
    }

    std::vector<std::size_t> violated_rows(double tol) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < m_; ++i) {
            if (x_[n_ + i] > tol) out.push_back(i);
        }
        return out;
    }

    // Drives zero-valued artificials out of the basis where a structural
    // column can replace them, then pins every artificial at zero.
    void end_phase_one() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < n_) continue;
            std::size_t best = n_;
            double best_abs = 1e-9;
            for (std::size_t j = 0; j < n_; ++j) {
                if (is_basic_[j]) continue;
                if (std::abs(t_[r][j]) > best_abs) {
                    best_abs = std::abs(t_[r][j]);
                    best = j;
                }
            }
            if (best < n_) pivot(r, best);
        }
        for (std::size_t i = 0; i < m_; ++i) {
            lower_[n_ + i] = 0.0;
            upper_[n_ + i] = 0.0;
            if (!is_basic_[n_ + i]) x_[n_ + i] = 0.0;
        }
    }

    // Recomputes basic values from the original rows by Gaussian elimination.
    void refresh_basic_values() {
        if (m_ == 0) return;
        std::vector<std::vector<double>> a(m_, std::vector<double>(m_ + 1, 0.0));
        for (std::size_t i = 0; i < m_; ++i) {
            double r = p_.rhs[i];
            for (std::size_t j = 0; j < n_; ++j) {
                if (!is_basic_[j]) r -= p_.rows[i][j] * x_[j];
            }
            for (std::size_t k = 0; k < m_; ++k) {
                const std::size_t b = basis_[k];
                a[i][k] = b < n_ ? p_.rows[i][b] : (b - n_ == i ? sign_[i] : 0.0);
            }
            a[i][m_] = r;
        }
        for (std::size_t c = 0; c < m_; ++c) {
            std::size_t piv = c;
            for (std::size_t i = c + 1; i < m_; ++i) {
                if (std::abs(a[i][c]) > std::abs(a[piv][c])) piv = i;
            }
            if (std::abs(a[piv][c]) < 1e-14) return;  // singular: keep tableau values
            std::swap(a[piv], a[c]);
            for (std::size_t i = 0; i < m_; ++i) {
                if (i == c || a[i][c] == 0.0) continue;
                const double f = a[i][c] / a[c][c];
                for (std::size_t k = c; k <= m_; ++k) a[i][k] -= f * a[c][k];
            }
        }
        for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] = a[k][m_] / a[k][k];
    }

    std::vector<double> structural() const {
        std::vector<double> out(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        for (std::size_t j = 0; j < n_; ++j) {
            // Snap values within tolerance of a bound onto it.
            if (std::abs(out[j] - lower_[j]) <= 1e-10) out[j] = lower_[j];
            if (std::abs(out[j] - upper_[j]) <= 1e-10) out[j] = upper_[j];
        }
        return out;
    }

    std::size_t total() const { return n_ + m_; }
    std::size_t n() const { return n_; }

private:
    const Program& p_;
    const Options& opt_;
    std::size_t m_;
    std::size_t n_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> x_;
    std::vector<double> sign_;
    std::vector<std::vector<double>> t_;
    std::vector<std::size_t> basis_;
    std::vector<bool> is_basic_;
};

}  // namespace

Solution solve(const Program& program, const Options& options) {
    const std::size_t n = program.num_vars();
    if (program.lower.size() != n || program.upper.size() != n || program.rhs.size() != program.num_rows())
        throw Error("inconsistent linear program dimensions");
    for (const auto& row : program.rows) {
        if (row.size() != n) throw Error("linear program row has wrong length");
    }

    Solution sol;
    Tableau tab(program, options);

    std::vector<double> phase_one(tab.total(), 0.0);
    std::fill(phase_one.begin() + static_cast<std::ptrdiff_t>(n), phase_one.end(), 1.0);
    Status st = tab.optimise(phase_one, sol.iterations);
    if (st == Status::iteration_limit) {
        sol.status = st;
        return sol;
    }
    if (tab.artificial_infeasibility() > 1e-7) {
        sol.status = Status::infeasible;
        sol.violated_rows = tab.violated_rows(1e-9);
        return sol;
    }
    tab.end_phase_one();

    std::vector<double> phase_two(tab.total(), 0.0);
    std::copy(program.cost.begin(), program.cost.end(), phase_two.begin());
    st = tab.optimise(phase_two, sol.iterations);
    sol.status = st;
    if (st != Status::optimal) return sol;

    tab.refresh_basic_values();
    sol.x = tab.structural();
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += program.cost[j] * sol.x[j];
    return sol;
}

}  // namespace solarsched::lp
