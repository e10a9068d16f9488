#pragma once

// Dense two-phase primal simplex over double or Rational. Sized for the
// desk-scale programs this library builds (a few thousand constraints at
// most). All structural variables are free reals; they are split into
// nonnegative parts internally. Bland's rule throughout, so exact-mode
// solves terminate and every run is deterministic.

#include "freelip/numeric.hpp"

#include <utility>
#include <vector>

namespace freelip {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpSense { Maximize, Minimize };
enum class Rel { LessEq, GreaterEq, Equal };

template <class T>
class LinearProgram {
public:
    LinearProgram(int num_vars, LpSense sense) : num_vars_(num_vars), sense_(sense), objective_(num_vars, T(0)) {}

    int num_vars() const { return num_vars_; }
    LpSense sense() const { return sense_; }

    void set_objective_coeff(int var, T c) { objective_.at(var) = std::move(c); }
    const std::vector<T>& objective() const { return objective_; }

    int add_row(std::vector<T> coeffs, Rel rel, T rhs) {
        if (static_cast<int>(coeffs.size()) != num_vars_) throw std::invalid_argument("row width mismatch");
        rows_.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
        return static_cast<int>(rows_.size()) - 1;
    }

    int add_row(const std::vector<std::pair<int, T>>& terms, Rel rel, T rhs) {
        std::vector<T> coeffs(num_vars_, T(0));
        for (const auto& [var, c] : terms) coeffs.at(var) += c;
        return add_row(std::move(coeffs), rel, std::move(rhs));
    }

    struct Row {
        std::vector<T> coeffs;
        Rel rel;
        T rhs;
    };
    const std::vector<Row>& rows() const { return rows_; }

private:
    int num_vars_;
    LpSense sense_;
    std::vector<T> objective_;
    std::vector<Row> rows_;
};

// duals are reported against the rows as written: for a maximization,
// LessEq rows carry duals >= 0 and GreaterEq rows duals <= 0 (reversed for
// minimization), and sum_i dual_i * rhs_i equals the optimal objective.
template <class T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    T objective{};
    std::vector<T> x;
    std::vector<T> dual;
};

template <class T>
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram<T>& lp) : lp_(lp) {}

    LpSolution<T> solve() {
        build_tableau();
        // Phase 1: minimize the artificial sum.
        std::vector<T> phase1_cost(total_cols_, T(0));
        for (int i = 0; i < m_; ++i) phase1_cost[art_col(i)] = T(1);
        rebuild_reduced(phase1_cost);
        run_pivots();
        T infeas(0);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] >= art_col(0)) infeas += rhs_[i];
        if (infeas > feasibility_eps()) return LpSolution<T>{LpStatus::Infeasible, T(0), {}, {}};
        evict_basic_artificials();

        // Phase 2: the real objective (canonical form is minimization).
        rebuild_reduced(phase2_cost_);
        const bool bounded = run_pivots();
        if (!bounded) return LpSolution<T>{LpStatus::Unbounded, T(0), {}, {}};
        return extract_solution();
    }

private:
    const LinearProgram<T>& lp_;

    int n_ = 0;           // structural variables
    int m_ = 0;           // rows
    int split_cols_ = 0;  // 2n
    int num_slacks_ = 0;
    int total_cols_ = 0;
    std::vector<std::vector<T>> tab_;  // m x total_cols
    std::vector<T> rhs_;               // m, kept >= 0
    std::vector<T> reduced_;           // total_cols
    std::vector<int> basis_;           // m
    std::vector<T> phase2_cost_;
    std::vector<T> row_sign_;  // +1, or -1 when the canonical row was negated

    int art_col(int i) const { return split_cols_ + num_slacks_ + i; }

    static T eps() {
        if constexpr (is_exact_v<T>) return T(0);
        else return T(1e-9);
    }
    static T feasibility_eps() {
        if constexpr (is_exact_v<T>) return T(0);
        else return T(1e-7);
    }

    void build_tableau() {
        n_ = lp_.num_vars();
        m_ = static_cast<int>(lp_.rows().size());
        split_cols_ = 2 * n_;
        num_slacks_ = 0;
        for (const auto& row : lp_.rows())
            if (row.rel != Rel::Equal) ++num_slacks_;
        total_cols_ = split_cols_ + num_slacks_ + m_;

        tab_.assign(m_, std::vector<T>(total_cols_, T(0)));
        rhs_.assign(m_, T(0));
        basis_.assign(m_, 0);
        row_sign_.assign(m_, T(1));

        int slack_idx = 0;
        for (int i = 0; i < m_; ++i) {
            const auto& row = lp_.rows()[i];
            T sign = row.rhs < T(0) ? T(-1) : T(1);
            row_sign_[i] = sign;
            for (int j = 0; j < n_; ++j) {
                tab_[i][2 * j] = sign * row.coeffs[j];
                tab_[i][2 * j + 1] = -sign * row.coeffs[j];
            }
            if (row.rel != Rel::Equal) {
                const T slack_sign = row.rel == Rel::LessEq ? T(1) : T(-1);
                tab_[i][split_cols_ + slack_idx] = sign * slack_sign;
                ++slack_idx;
            }
            tab_[i][art_col(i)] = T(1);
            rhs_[i] = sign * row.rhs;
            basis_[i] = art_col(i);
        }

        // Canonical minimization objective on the split columns.
        phase2_cost_.assign(total_cols_, T(0));
        const T flip = lp_.sense() == LpSense::Maximize ? T(-1) : T(1);
        for (int j = 0; j < n_; ++j) {
            phase2_cost_[2 * j] = flip * lp_.objective()[j];
            phase2_cost_[2 * j + 1] = -flip * lp_.objective()[j];
        }
    }

    void rebuild_reduced(const std::vector<T>& cost) {
        reduced_ = cost;
        for (int i = 0; i < m_; ++i) {
            const T& cb = cost[basis_[i]];
            if (cb == T(0)) continue;
            for (int j = 0; j < total_cols_; ++j)
                if (tab_[i][j] != T(0)) reduced_[j] -= cb * tab_[i][j];
        }
    }

    void pivot(int row, int col) {
        const T piv = tab_[row][col];
        for (int j = 0; j < total_cols_; ++j) tab_[row][j] /= piv;
        rhs_[row] /= piv;
        for (int i = 0; i < m_; ++i) {
            if (i == row || tab_[i][col] == T(0)) continue;
            const T factor = tab_[i][col];
            for (int j = 0; j < total_cols_; ++j)
                if (tab_[row][j] != T(0)) tab_[i][j] -= factor * tab_[row][j];
            rhs_[i] -= factor * rhs_[row];
            tab_[i][col] = T(0);
            if constexpr (!is_exact_v<T>) {
                if (rhs_[i] < T(0) && rhs_[i] > -feasibility_eps()) rhs_[i] = T(0);
            }
        }
        if (reduced_[col] != T(0)) {
            const T factor = reduced_[col];
            for (int j = 0; j < total_cols_; ++j)
                if (tab_[row][j] != T(0)) reduced_[j] -= factor * tab_[row][j];
            reduced_[col] = T(0);
        }
        basis_[row] = col;
    }

    // Bland: entering column is the lowest-index eligible one; leaving row is
    // the ratio-test minimum tie-broken by lowest basis index. Artificials
    // never re-enter. Returns false when an entering column is unbounded.
    bool run_pivots() {
        const int enter_limit = art_col(0);
        long guard = 2000L + 50L * static_cast<long>(m_ + total_cols_) * (is_exact_v<T> ? 1 : 4);
        while (guard-- > 0) {
            int col = -1;
            for (int j = 0; j < enter_limit; ++j)
                if (reduced_[j] < -eps()) {
                    col = j;
                    break;
                }
            if (col < 0) return true;
            int row = -1;
            for (int i = 0; i < m_; ++i) {
                if (tab_[i][col] <= eps()) continue;
                if (row < 0) {
                    row = i;
                    continue;
                }
                const T lhs = rhs_[i] * tab_[row][col];
                const T rhs_cmp = rhs_[row] * tab_[i][col];
                if (lhs < rhs_cmp || (lhs == rhs_cmp && basis_[i] < basis_[row])) row = i;
            }
            if (row < 0) return false;
            pivot(row, col);
        }
        throw std::runtime_error("simplex pivot limit exceeded");
    }

    // A basic artificial after phase 1 sits at value zero. Degenerate-pivot
    // it out on any nonzero structural/slack entry; a row with none is
    // redundant and stays inert (its non-artificial entries are all zero, so
    // later pivots never touch it).
    void evict_basic_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (basis_[i] < art_col(0)) continue;
            int col = -1;
            for (int j = 0; j < split_cols_ + num_slacks_; ++j)
                if (abs_value(tab_[i][j]) > eps()) {
                    col = j;
                    break;
                }
            if (col >= 0) pivot(i, col);
        }
    }

    LpSolution<T> extract_solution() {
        LpSolution<T> sol;
        sol.status = LpStatus::Optimal;
        sol.x.assign(n_, T(0));
        std::vector<T> split_vals(split_cols_, T(0));
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < split_cols_) split_vals[basis_[i]] = rhs_[i];
        for (int j = 0; j < n_; ++j) sol.x[j] = split_vals[2 * j] - split_vals[2 * j + 1];

        sol.objective = T(0);
        for (int j = 0; j < n_; ++j) sol.objective += lp_.objective()[j] * sol.x[j];

        const T sense_flip = lp_.sense() == LpSense::Maximize ? T(-1) : T(1);
        sol.dual.assign(m_, T(0));
        for (int i = 0; i < m_; ++i) {
            // Reduced cost of an artificial equals minus the canonical dual.
            const T y_canonical = -reduced_[art_col(i)];
            sol.dual[i] = sense_flip * row_sign_[i] * y_canonical;
        }
        return sol;
    }
};

template <class T>
LpSolution<T> solve(const LinearProgram<T>& lp) {
    return SimplexSolver<T>(lp).solve();
}

} // namespace freelip
