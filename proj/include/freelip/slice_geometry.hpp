#pragma once

// Slices of the unit ball of base-normalized Lipschitz functions, cut by a
// norm-one finitely supported functional: S = {f in ball : <mu, f> >= 1 - alpha}.
// The diameter in the Lipschitz norm decomposes exactly over ordered point
// pairs, each contributing one linear program.

#include "freelip/free_norm.hpp"

#include <optional>
#include <vector>

namespace freelip {

struct EmptySliceError : std::runtime_error {
    EmptySliceError() : std::runtime_error("slice is empty (functional norm below 1 - alpha)") {}
};

struct NotNormalizedError : std::runtime_error {
    explicit NotNormalizedError(const std::string& detail)
        : std::runtime_error("slicing functional is not norm one: " + detail) {}
};

struct AlphaTooSmallError : std::invalid_argument {
    AlphaTooSmallError() : std::invalid_argument("alpha must exceed 2*eps") {}
};

template <class T>
struct SliceSpec {
    FreeElement<T> mu;   // slicing functional, intended norm one
    T alpha{};           // slice depth, in (0, 2]
    bool closed = true;  // the computation always uses the closed slice; the
                         // boundary flag reports when that distinction bites
};

template <class T>
struct SliceDiameterResult {
    T diameter{};
    std::pair<int, int> witness_pair{-1, -1};
    // true when the diameter is attained only at functions with the slice
    // constraint tight, i.e. the open-slice supremum may be smaller
    bool boundary_only = false;
};

namespace detail {

// Rows: 1-Lipschitz constraints for f then for g, then the two slice rows.
// Variables: f-values then g-values, base eliminated from both.
template <class T>
LinearProgram<T> slice_pair_program(const FiniteMetricSpace<T>& space, const FreeElement<T>& mu, const T& alpha,
                                    int u, int v) {
    const int n = space.size();
    const int base = space.base();
    auto fvar = [&](int p) { return p < base ? p : p - 1; };
    auto gvar = [&](int p) { return (n - 1) + fvar(p); };

    LinearProgram<T> lp(2 * (n - 1), LpSense::Maximize);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            std::vector<std::pair<int, T>> frow, grow;
            if (a != base) {
                frow.emplace_back(fvar(a), T(1));
                grow.emplace_back(gvar(a), T(1));
            }
            if (b != base) {
                frow.emplace_back(fvar(b), T(-1));
                grow.emplace_back(gvar(b), T(-1));
            }
            lp.add_row(frow, Rel::LessEq, space.d(a, b));
            lp.add_row(grow, Rel::LessEq, space.d(a, b));
        }
    std::vector<std::pair<int, T>> fslice, gslice;
    for (const auto& [idx, coeff] : mu.terms()) {
        fslice.emplace_back(fvar(idx), coeff);
        gslice.emplace_back(gvar(idx), coeff);
    }
    lp.add_row(fslice, Rel::GreaterEq, T(1) - alpha);
    lp.add_row(gslice, Rel::GreaterEq, T(1) - alpha);

    const T inv = T(1) / space.d(u, v);
    if (u != base) {
        lp.set_objective_coeff(fvar(u), inv);
        lp.set_objective_coeff(gvar(u), -inv);
    }
    if (v != base) {
        lp.set_objective_coeff(fvar(v), -inv);
        lp.set_objective_coeff(gvar(v), inv);
    }
    return lp;
}

template <class T>
SliceDiameterResult<T> slice_diameter_unchecked(const FiniteMetricSpace<T>& space, const FreeElement<T>& mu,
                                                const T& alpha, const T& tol) {
    const int n = space.size();
    SliceDiameterResult<T> result;
    bool first = true;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            auto sol = solve(slice_pair_program(space, mu, alpha, u, v));
            if (sol.status == LpStatus::Infeasible) throw EmptySliceError();
            if (sol.status != LpStatus::Optimal) throw std::logic_error("slice diameter program unbounded");
            if (first || sol.objective > result.diameter) {
                result.diameter = sol.objective;
                result.witness_pair = {u, v};
                first = false;
            }
        }

    // Secondary program on the attaining pair: maximize the total slice slack
    // subject to staying on the optimal face. Zero slack means the diameter
    // is reached only with both functions on the slice boundary.
    auto lp = slice_pair_program(space, mu, alpha, result.witness_pair.first, result.witness_pair.second);
    std::vector<T> face_row = lp.objective();
    LinearProgram<T> face(lp.num_vars(), LpSense::Maximize);
    for (const auto& row : lp.rows()) {
        std::vector<T> coeffs = row.coeffs;
        face.add_row(std::move(coeffs), row.rel, row.rhs);
    }
    face.add_row(std::move(face_row), Rel::GreaterEq, result.diameter - tol);
    const int base = space.base();
    auto fvar = [&](int p) { return p < base ? p : p - 1; };
    for (const auto& [idx, coeff] : mu.terms()) {
        face.set_objective_coeff(fvar(idx), coeff);
        face.set_objective_coeff((n - 1) + fvar(idx), coeff);
    }
    auto slack_sol = solve(face);
    if (slack_sol.status == LpStatus::Optimal) {
        const T max_total_pairing = slack_sol.objective;
        result.boundary_only = leq(max_total_pairing, T(2) * (T(1) - alpha), tol);
    }
    return result;
}

} // namespace detail

template <class T>
SliceDiameterResult<T> slice_diameter(const FiniteMetricSpace<T>& space, const SliceSpec<T>& spec,
                                      const T& tol = default_tolerance<T>()) {
    if (!(spec.alpha > T(0)) || spec.alpha > T(2)) throw std::invalid_argument("alpha must lie in (0, 2]");
    if (spec.mu.zero()) throw ZeroElementError();
    const T norm = free_norm(spec.mu, space, tol).value;
    if (!approx_eq(norm, T(1), tol)) {
        if constexpr (is_exact_v<T>)
            throw NotNormalizedError("norm is " + fraction_string(norm));
        else
            throw NotNormalizedError("norm is " + std::to_string(to_double(norm)));
    }
    return detail::slice_diameter_unchecked(space, spec.mu, spec.alpha, tol);
}

template <class T>
struct ReduceSlicerResult {
    MoleculeCombination<T> combination;
    T alpha_reduced{};
    // max over the reduced slice of (1 - alpha) - <mu, f>; containment of the
    // reduced slice in the original one means this is never above zero
    T containment_violation{};
};

// Replace an arbitrary norm-one slicing functional by a molecule combination
// cutting a slice of depth alpha - 2*eps contained in the original slice. On
// a finite space the functional is already finitely supported, so the
// combination represents mu itself (normalized by its computed norm).
template <class T>
ReduceSlicerResult<T> reduce_slicer(const FiniteMetricSpace<T>& space, const FreeElement<T>& mu, const T& alpha,
                                    const T& eps, const T& tol = default_tolerance<T>()) {
    if (!(eps > T(0))) throw std::invalid_argument("eps must be positive");
    if (!(alpha > T(2) * eps)) throw AlphaTooSmallError();
    if (mu.zero()) throw ZeroElementError();

    const T norm = free_norm(mu, space, tol).value;
    if (!approx_eq(norm, T(1), tol)) {
        if constexpr (is_exact_v<T>)
            throw NotNormalizedError("norm is " + fraction_string(norm));
        else
            throw NotNormalizedError("norm is " + std::to_string(to_double(norm)));
    }

    FreeElement<T> unit = mu.scaled(T(1) / norm);
    auto decomposition = free_element_as_combination(unit, space, tol);
    if (!decomposition.combination) throw std::logic_error("normalized element failed to decompose");

    ReduceSlicerResult<T> result{std::move(*decomposition.combination), alpha - T(2) * eps, T(0)};

    // Containment certificate: maximize the original constraint's violation
    // over the reduced slice; must stay nonpositive (within tol).
    const int n = space.size();
    const int base = space.base();
    auto var = [&](int p) { return p < base ? p : p - 1; };
    LinearProgram<T> lp(n - 1, LpSense::Maximize);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            std::vector<std::pair<int, T>> row;
            if (a != base) row.emplace_back(var(a), T(1));
            if (b != base) row.emplace_back(var(b), T(-1));
            lp.add_row(row, Rel::LessEq, space.d(a, b));
        }
    FreeElement<T> reduced_mu = result.combination.expand(space);
    std::vector<std::pair<int, T>> slice_row;
    for (const auto& [idx, coeff] : reduced_mu.terms()) slice_row.emplace_back(var(idx), coeff);
    lp.add_row(slice_row, Rel::GreaterEq, T(1) - result.alpha_reduced);
    for (const auto& [idx, coeff] : mu.terms()) lp.set_objective_coeff(var(idx), -coeff);
    auto sol = solve(lp);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("containment program failed");
    result.containment_violation = sol.objective + (T(1) - alpha);
    if (!leq(result.containment_violation, T(0), tol))
        throw std::logic_error("reduced slice escaped the original slice");
    return result;
}

template <class T>
struct ScanEntry {
    std::vector<MoleculePair> pairs;
    std::vector<T> weights;
    T alpha{};
    T diameter{};
};

template <class T>
struct ScanReport {
    int n_pairs_max = 0;
    std::vector<T> alpha_grid;
    long candidates_considered = 0;  // pair sets enumerated
    long candidates_normable = 0;    // pair sets passing the norm-one criterion
    std::vector<ScanEntry<T>> entries;
    std::optional<ScanEntry<T>> best;  // argmin diameter, first in scan order
    bool stopped_early = false;
};

template <class T>
std::vector<T> default_alpha_grid_as() {
    std::vector<T> grid;
    for (int k = 1; k <= 10; ++k) grid.push_back(T(1) / T(1 << k));
    return grid;
}

// Deterministic sweep over molecule-combination slicers: all pair sets of
// size up to n_pairs_max (uniform weights, norm-one sets only) against every
// alpha in the grid. Reports every measured diameter and the argmin. With
// stop_below set, the sweep ends at the first diameter under the threshold.
template <class T>
ScanReport<T> wstar_bdp_scan(const FiniteMetricSpace<T>& space, int n_pairs_max, std::vector<T> alpha_grid,
                             std::optional<T> stop_below = std::nullopt,
                             const T& tol = default_tolerance<T>()) {
    if (n_pairs_max < 1) throw std::invalid_argument("n_pairs_max must be at least 1");
    for (const T& a : alpha_grid)
        if (!(a > T(0)) || a > T(2)) throw std::invalid_argument("alpha grid values must lie in (0, 2]");

    ScanReport<T> report;
    report.n_pairs_max = n_pairs_max;
    report.alpha_grid = alpha_grid;

    std::vector<MoleculePair> all_pairs;
    for (int x = 0; x < space.size(); ++x)
        for (int y = 0; y < space.size(); ++y)
            if (x != y) all_pairs.push_back({x, y});
    const int total = static_cast<int>(all_pairs.size());

    std::vector<int> choice;
    auto evaluate_set = [&](const std::vector<int>& idxs) -> bool {
        ++report.candidates_considered;
        std::vector<MoleculePair> pairs;
        pairs.reserve(idxs.size());
        for (int i : idxs) pairs.push_back(all_pairs[i]);
        auto comb = norm_one_weights(pairs, space, tol);
        if (!comb) return false;
        ++report.candidates_normable;
        FreeElement<T> mu = comb->expand(space);
        for (const T& alpha : alpha_grid) {
            auto res = detail::slice_diameter_unchecked(space, mu, alpha, tol);
            ScanEntry<T> entry{pairs, comb->weights(), alpha, res.diameter};
            report.entries.push_back(entry);
            if (!report.best || res.diameter < report.best->diameter) report.best = entry;
            if (stop_below && res.diameter < *stop_below) {
                report.stopped_early = true;
                return true;
            }
        }
        return false;
    };

    // subsets in (size, lexicographic) order
    for (int size = 1; size <= n_pairs_max && !report.stopped_early; ++size) {
        choice.assign(size, 0);
        for (int i = 0; i < size; ++i) choice[i] = i;
        if (size > total) break;
        for (;;) {
            if (evaluate_set(choice)) break;
            int pos = size - 1;
            while (pos >= 0 && choice[pos] == total - size + pos) --pos;
            if (pos < 0) break;
            ++choice[pos];
            for (int q = pos + 1; q < size; ++q) choice[q] = choice[q - 1] + 1;
        }
    }
    return report;
}

} // namespace freelip
