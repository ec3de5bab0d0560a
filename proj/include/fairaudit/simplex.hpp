#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "fairaudit/common.hpp"

// Dense two-phase tableau simplex. Built for small, well-scaled audit LPs
// (tens of variables); optimality within 1e-8, Bland's rule after a run of
// degenerate pivots so cycling cannot stall the solve silently.

namespace fairaudit {

enum class LpStatus { Optimal, Infeasible, Unbounded, Failure };

enum class Sense { Le, Eq, Ge };

struct LinearConstraint {
    std::vector<double> coeff;
    Sense sense = Sense::Le;
    double rhs = 0.0;
};

struct LinearProgram {
    // maximize c.x  subject to  constraints, lower <= x <= upper.
    // Lower bounds must be finite (shift the variable if not); an upper bound
    // of +inf means unbounded above.
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<double> lower;  // defaults to 0 when empty
    std::vector<double> upper;  // defaults to +inf when empty

    int num_vars() const { return static_cast<int>(objective.size()); }
};

struct LpSolution {
    LpStatus status = LpStatus::Failure;
    double value = 0.0;
    std::vector<double> x;
    // Duals of the internal "Ax <= b, x >= 0" form the problem was reduced
    // to, paired with that form's rhs. Strong duality: dual_objective() equals
    // value on every Optimal result.
    std::vector<double> le_duals;
    std::vector<double> le_rhs;
    double objective_shift = 0.0;  // constant from shifting lower bounds

    double dual_objective() const {
        double total = objective_shift;
        for (std::size_t k = 0; k < le_duals.size(); ++k) total += le_duals[k] * le_rhs[k];
        return total;
    }
};

namespace detail {

// Core: maximize c.x subject to A x <= b, x >= 0 (b of any sign).
class SimplexTableau {
  public:
    SimplexTableau(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                   const std::vector<double>& c)
        : m_(static_cast<int>(b.size())), n_(static_cast<int>(c.size())) {
        row_negated_.assign(m_, false);
        basis_.assign(m_, -1);
        num_art_ = 0;
        for (int i = 0; i < m_; ++i)
            if (b[i] < 0) {
                row_negated_[i] = true;
                ++num_art_;
            }
        cols_ = n_ + m_ + num_art_ + 1;
        t_.assign(m_ + 1, std::vector<double>(cols_, 0.0));
        int art = n_ + m_;
        for (int i = 0; i < m_; ++i) {
            double sign = row_negated_[i] ? -1.0 : 1.0;
            for (int j = 0; j < n_; ++j) t_[i][j] = sign * a[i][j];
            t_[i][n_ + i] = sign;  // slack
            t_[i][cols_ - 1] = sign * b[i];
            if (row_negated_[i]) {
                t_[i][art] = 1.0;
                basis_[i] = art++;
            } else {
                basis_[i] = n_ + i;
            }
        }
        c_ = c;
    }

    LpStatus solve() {
        if (num_art_ > 0) {
            // Phase 1: minimize the sum of artificials. Artificial columns are
            // excluded from entering, so they can only leave the basis.
            auto& obj = t_[m_];
            std::fill(obj.begin(), obj.end(), 0.0);
            for (int i = 0; i < m_; ++i)
                if (basis_[i] >= n_ + m_)
                    for (int j = 0; j < cols_; ++j) obj[j] -= t_[i][j];
            LpStatus st = run(n_ + m_);
            if (st == LpStatus::Failure || st == LpStatus::Unbounded) return LpStatus::Failure;
            if (t_[m_][cols_ - 1] < -1e-7) return LpStatus::Infeasible;
            purge_artificials();
        }
        // Phase 2: minimize -c.x, i.e. maximize c.x.
        auto& obj = t_[m_];
        std::fill(obj.begin(), obj.end(), 0.0);
        for (int j = 0; j < n_; ++j) obj[j] = -c_[j];
        for (int i = 0; i < m_; ++i) {
            double f = obj[basis_[i]];
            if (f == 0.0) continue;
            for (int j = 0; j < cols_; ++j) obj[j] -= f * t_[i][j];
        }
        return run(n_ + m_);
    }

    double objective_value() const { return t_[m_][cols_ - 1]; }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < n_) x[basis_[i]] = t_[i][cols_ - 1];
        return x;
    }

    // Dual value of constraint row k, for the max form (y >= 0). Negating a
    // row flips both the slack column and the rhs, so the stored reduced cost
    // of the slack is the dual in either case.
    std::vector<double> duals() const {
        std::vector<double> y(m_, 0.0);
        for (int k = 0; k < m_; ++k) y[k] = t_[m_][n_ + k];
        return y;
    }

  private:
    static constexpr double kPivotEps = 1e-9;

    LpStatus run(int usable_cols) {
        const int pivot_budget = 200 * (m_ + n_) + 5000;
        const int bland_after = 5 * (m_ + n_);
        int degenerate_streak = 0;
        double last_obj = t_[m_][cols_ - 1];
        for (int iter = 0; iter < pivot_budget; ++iter) {
            bool bland = degenerate_streak > bland_after;
            int col = -1;
            double best = -1e-9;
            for (int j = 0; j < usable_cols; ++j) {
                double r = t_[m_][j];
                if (r < best) {
                    best = r;
                    col = j;
                    if (bland) break;
                }
            }
            if (col < 0) return LpStatus::Optimal;
            int row = -1;
            double best_ratio = 0.0;
            for (int i = 0; i < m_; ++i) {
                double a = t_[i][col];
                if (a <= kPivotEps) continue;
                double ratio = t_[i][cols_ - 1] / a;
                if (row < 0 || ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && basis_[i] < basis_[row])) {
                    row = i;
                    best_ratio = ratio;
                }
            }
            if (row < 0) return LpStatus::Unbounded;
            pivot(row, col);
            double obj = t_[m_][cols_ - 1];
            degenerate_streak = (obj > last_obj + 1e-12) ? 0 : degenerate_streak + 1;
            last_obj = obj;
        }
        return LpStatus::Failure;  // stalled; never report a wrong status
    }

    void pivot(int row, int col) {
        double inv = 1.0 / t_[row][col];
        for (int j = 0; j < cols_; ++j) t_[row][j] *= inv;
        t_[row][col] = 1.0;
        for (int i = 0; i <= m_; ++i) {
            if (i == row) continue;
            double f = t_[i][col];
            if (std::abs(f) < 1e-13) continue;
            for (int j = 0; j < cols_; ++j) t_[i][j] -= f * t_[row][j];
            t_[i][col] = 0.0;
        }
        basis_[row] = col;
    }

    void purge_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < n_ + m_) continue;
            int col = -1;
            for (int j = 0; j < n_ + m_; ++j)
                if (std::abs(t_[i][j]) > 1e-7) {
                    col = j;
                    break;
                }
            if (col >= 0) pivot(i, col);
            // else: redundant row; the artificial stays basic at value 0 and
            // phase 2 never lets it move (its column is past usable_cols).
        }
    }

    int m_, n_, cols_, num_art_;
    std::vector<std::vector<double>> t_;
    std::vector<int> basis_;
    std::vector<bool> row_negated_;
    std::vector<double> c_;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp) {
    const int n = lp.num_vars();
    std::vector<double> lower = lp.lower.empty() ? std::vector<double>(n, 0.0) : lp.lower;
    std::vector<double> upper = lp.upper.empty() ? std::vector<double>(n, kInf) : lp.upper;
    require_dims(static_cast<int>(lower.size()) == n && static_cast<int>(upper.size()) == n,
                 "bound vector size mismatch");
    for (double lo : lower) require(std::isfinite(lo), "lower bounds must be finite");

    // Reduce to max c.x', A x' <= b, x' >= 0 with x = x' + lower.
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    auto add_row = [&](const std::vector<double>& coeff, double rhs, double sign) {
        std::vector<double> row(n, 0.0);
        double shift = 0.0;
        for (int j = 0; j < n; ++j) {
            row[j] = sign * coeff[j];
            shift += sign * coeff[j] * lower[j];
        }
        a.push_back(std::move(row));
        b.push_back(sign * rhs - shift);
    };
    for (const auto& con : lp.constraints) {
        require_dims(static_cast<int>(con.coeff.size()) == n, "constraint width mismatch");
        if (con.sense == Sense::Le || con.sense == Sense::Eq) add_row(con.coeff, con.rhs, 1.0);
        if (con.sense == Sense::Ge || con.sense == Sense::Eq) add_row(con.coeff, con.rhs, -1.0);
    }
    for (int j = 0; j < n; ++j) {
        if (!std::isfinite(upper[j])) continue;
        std::vector<double> row(n, 0.0);
        row[j] = 1.0;
        a.push_back(std::move(row));
        b.push_back(upper[j] - lower[j]);
    }

    detail::SimplexTableau tab(a, b, lp.objective);
    LpSolution sol;
    sol.status = tab.solve();
    if (sol.status != LpStatus::Optimal) return sol;

    double const_term = 0.0;
    for (int j = 0; j < n; ++j) const_term += lp.objective[j] * lower[j];
    sol.value = tab.objective_value() + const_term;
    sol.x = tab.primal();
    for (int j = 0; j < n; ++j) sol.x[j] += lower[j];
    sol.le_duals = tab.duals();
    sol.le_rhs = b;
    sol.objective_shift = const_term;
    return sol;
}

}  // namespace fairaudit
