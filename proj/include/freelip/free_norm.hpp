#pragma once

// The free-space norm of a finitely supported element, computed two ways at
// once from one linear program: the value is the maximum pairing against the
// 1-Lipschitz unit ball, and the row duals form a minimum-cost transport
// plan between the element's positive and negative parts (the base point
// absorbs any imbalance). Both witnesses are returned.

#include "freelip/graph_potentials.hpp"
#include "freelip/lipschitz.hpp"
#include "freelip/metric_core.hpp"
#include "freelip/simplex.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace freelip {

struct ZeroElementError : std::invalid_argument {
    ZeroElementError() : std::invalid_argument("the zero element has no norm witnesses") {}
};

template <class T>
struct NormResult {
    T value{};
    LipschitzFunction<T> dual_witness;
    std::map<std::pair<int, int>, T> primal_witness;  // (from, to) -> mass
};

namespace detail {

// LP over f-values with the base eliminated: one row per ordered point pair.
// Returns the program plus the row -> pair index map.
template <class T>
LinearProgram<T> lipschitz_ball_program(const FiniteMetricSpace<T>& space,
                                        std::vector<std::pair<int, int>>* row_pairs) {
    const int n = space.size();
    const int base = space.base();
    auto var = [&](int p) { return p < base ? p : p - 1; };
    LinearProgram<T> lp(n - 1, LpSense::Maximize);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            std::vector<std::pair<int, T>> terms;
            if (u != base) terms.emplace_back(var(u), T(1));
            if (v != base) terms.emplace_back(var(v), T(-1));
            lp.add_row(terms, Rel::LessEq, space.d(u, v));
            if (row_pairs) row_pairs->emplace_back(u, v);
        }
    return lp;
}

template <class T>
std::vector<T> full_values(const FiniteMetricSpace<T>& space, const std::vector<T>& reduced) {
    std::vector<T> values(space.size(), T(0));
    int vi = 0;
    for (int p = 0; p < space.size(); ++p) {
        if (p == space.base()) continue;
        values[p] = reduced[vi++];
    }
    return values;
}

// Reroute plan mass that passes through points outside the allowed support.
// At an optimal plan the collapsed cost is unchanged (triangle equality on
// the optimal routes), so the total stays the norm.
template <class T>
void collapse_plan_through(std::map<std::pair<int, int>, T>& plan, const std::set<int>& allowed) {
    for (;;) {
        int hub = -1;
        for (const auto& [key, mass] : plan) {
            if (mass <= T(0)) continue;
            if (!allowed.count(key.second)) {
                hub = key.second;
                break;
            }
            if (!allowed.count(key.first)) {
                hub = key.first;
                break;
            }
        }
        if (hub < 0) return;
        auto in_it = plan.end(), out_it = plan.end();
        for (auto it = plan.begin(); it != plan.end(); ++it) {
            if (it->second <= T(0)) continue;
            if (it->first.second == hub && in_it == plan.end()) in_it = it;
            if (it->first.first == hub && out_it == plan.end()) out_it = it;
        }
        if (in_it == plan.end() || out_it == plan.end())
            throw std::logic_error("transport plan has unbalanced flow outside the support");
        const int from = in_it->first.first;
        const int to = out_it->first.second;
        const T moved = std::min(in_it->second, out_it->second);
        in_it->second -= moved;
        out_it->second -= moved;
        if (in_it->second == T(0)) plan.erase(in_it);
        if (out_it->second == T(0)) plan.erase(out_it);
        if (from != to) plan[{from, to}] += moved;
    }
}

} // namespace detail

template <class T>
NormResult<T> free_norm(const FreeElement<T>& mu, const FiniteMetricSpace<T>& space,
                        const T& tol = default_tolerance<T>()) {
    if (mu.zero()) throw ZeroElementError();
    const int base = space.base();
    auto var = [&](int p) { return p < base ? p : p - 1; };

    std::vector<std::pair<int, int>> row_pairs;
    auto lp = detail::lipschitz_ball_program(space, &row_pairs);
    for (const auto& [idx, coeff] : mu.terms()) lp.set_objective_coeff(var(idx), coeff);

    auto sol = solve(lp);
    if (sol.status != LpStatus::Optimal) throw std::logic_error("free norm program must have an optimum");

    NormResult<T> result;
    result.value = sol.objective;
    result.dual_witness = lip_norm(detail::full_values(space, sol.x), space);
    for (std::size_t i = 0; i < row_pairs.size(); ++i) {
        T mass = sol.dual[i];
        if constexpr (is_exact_v<T>) {
            if (mass <= T(0)) continue;
        } else {
            if (mass <= tol) continue;
        }
        result.primal_witness.emplace(row_pairs[i], std::move(mass));
    }
    return result;
}

// Whether some positive weights make the molecule combination over `pairs`
// land on the unit sphere. Criterion: every weight cycle of the pair system
// is nonnegative, checked through the path closure. When true, every choice
// of positive weights works.
template <class T>
bool norm_one_cyclic_check(const std::vector<MoleculePair>& pairs, const FiniteMetricSpace<T>& space,
                           const T& tol = default_tolerance<T>()) {
    auto ds = difference_system_from_pairs(space, pairs);
    return path_closure(ds, tol).feasible();
}

// Uniform weights over a norm-one pair system: the unique argmax of the
// smallest weight under the simplex constraint. nullopt when no weights can
// reach norm one.
template <class T>
std::optional<MoleculeCombination<T>> norm_one_weights(const std::vector<MoleculePair>& pairs,
                                                       const FiniteMetricSpace<T>& space,
                                                       const T& tol = default_tolerance<T>()) {
    if (!norm_one_cyclic_check(pairs, space, tol)) return std::nullopt;
    return MoleculeCombination<T>::uniform(pairs, space);
}

template <class T>
T combination_norm(const MoleculeCombination<T>& comb, const FiniteMetricSpace<T>& space,
                   const T& tol = default_tolerance<T>()) {
    FreeElement<T> mu = comb.expand(space);
    if (mu.zero()) return T(0);
    return free_norm(mu, space, tol).value;
}

template <class T>
struct DecompositionResult {
    std::optional<MoleculeCombination<T>> combination;  // present iff the norm is 1
    T norm{};
};

// Express a norm-one element as a convex molecule combination supported on
// supp(mu) plus the base, read off the optimal transport plan: mass y on
// (u, v) becomes weight y * d(u, v) on the molecule of (u, v).
template <class T>
DecompositionResult<T> free_element_as_combination(const FreeElement<T>& mu, const FiniteMetricSpace<T>& space,
                                                   const T& tol = default_tolerance<T>()) {
    if (mu.zero()) throw ZeroElementError();
    auto norm = free_norm(mu, space, tol);
    DecompositionResult<T> out;
    out.norm = norm.value;
    if (!approx_eq(norm.value, T(1), tol)) return out;

    std::set<int> allowed{space.base()};
    for (const auto& [idx, coeff] : mu.terms()) allowed.insert(idx);
    auto plan = norm.primal_witness;
    detail::collapse_plan_through(plan, allowed);

    std::vector<MoleculePair> pairs;
    std::vector<T> weights;
    for (const auto& [key, mass] : plan) {
        if (mass <= T(0)) continue;
        pairs.push_back({key.first, key.second});
        weights.push_back(mass * space.d(key.first, key.second));
    }
    // transport cost equals the norm, so the weights sum to 1
    out.combination = MoleculeCombination<T>::make(std::move(pairs), std::move(weights), space,
                                                   is_exact_v<T> ? T(0) : T(100) * tol);
    return out;
}

} // namespace freelip
