#pragma once

// Certificates that the free space over a finite pointed metric space has a
// nonrough norm, built from a finite pair system. Three conditions are
// verified in order: (b) the pair system reaches norm one, (a) every index
// pair lies on a cheap distinct-vertex cycle, (c) every point of the space
// is pinched between two support points both metrically and for every
// near-optimal Lipschitz function. A successful certificate carries the
// quantitative slice-diameter consequence and is re-checked against the
// measured diameter of the induced slice.

#include "freelip/slice_geometry.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace freelip {

struct LpInfeasibleError : std::logic_error {
    LpInfeasibleError() : std::logic_error("pinch program infeasible; inconsistent with a norm-one pair system") {}
};

template <class T>
struct CycleWitness {
    int j = 0, k = 0;
    std::vector<int> cycle;
    T total{};
};

template <class T>
struct PinchWitness {
    int x = 0, s = 0, t = 0;
    T lp_min{};
};

template <class T>
struct NonroughCertificate {
    T eps{};
    T alpha{};
    std::vector<MoleculePair> pairs;
    std::vector<CycleWitness<T>> witnesses_a;  // one per unordered index pair
    std::vector<PinchWitness<T>> witnesses_c;  // one per point of the space
    T derived_bound{};
    // slice soundness echo
    std::vector<T> weights;
    T slice_alpha{};
    T slice_diameter{};
};

// 8 D^2 eps / (c (c + eps)) + eps (1 + 2 D)
template <class T>
T nonrough_diameter_bound(const FiniteMetricSpace<T>& space, const T& eps) {
    const T& c = space.min_distance();
    const T& D = space.diameter();
    return T(8) * D * D * eps / (c * (c + eps)) + eps * (T(1) + T(2) * D);
}

template <class T>
struct ConditionAResult {
    bool ok = false;
    std::vector<CycleWitness<T>> witnesses;
    std::optional<std::pair<int, int>> failing;
    T failing_total{};
};

// For every j != k, some cycle of pairwise distinct indices through both
// must have weight total strictly under eps.
template <class T>
ConditionAResult<T> check_condition_a(const FiniteMetricSpace<T>& space, const std::vector<MoleculePair>& pairs,
                                      const T& eps, int n_exact = kDefaultDistinctLimit,
                                      const T& tol = default_tolerance<T>()) {
    auto ds = difference_system_from_pairs(space, pairs);
    ConditionAResult<T> result;
    result.ok = true;
    for (int j = 0; j < ds.n; ++j)
        for (int k = j + 1; k < ds.n; ++k) {
            auto r = min_cycle_through(ds, j, k, true, n_exact, tol);
            if (certifiably_less(r.total.value, eps, tol)) {
                result.witnesses.push_back({j, k, r.cycle, r.total.value});
            } else {
                result.ok = false;
                result.failing = {j, k};
                result.failing_total = r.total.value;
                result.witnesses.clear();
                return result;
            }
        }
    return result;
}

template <class T>
bool check_condition_b(const FiniteMetricSpace<T>& space, const std::vector<MoleculePair>& pairs,
                       const T& tol = default_tolerance<T>()) {
    return norm_one_cyclic_check(pairs, space, tol);
}

namespace detail {

template <class T>
std::vector<int> support_points(const std::vector<MoleculePair>& pairs) {
    std::set<int> pts;
    for (const auto& p : pairs) {
        pts.insert(p.x);
        pts.insert(p.y);
    }
    return std::vector<int>(pts.begin(), pts.end());
}

// min f(t) - f(s) over the 1-Lipschitz ball intersected with
// f(x_i) - f(y_i) >= (1 - alpha) d(x_i, y_i); the program is built once and
// re-aimed per (s, t).
template <class T>
LinearProgram<T> pinch_program(const FiniteMetricSpace<T>& space, const std::vector<MoleculePair>& pairs,
                               const T& alpha) {
    const int n = space.size();
    const int base = space.base();
    auto var = [&](int p) { return p < base ? p : p - 1; };
    LinearProgram<T> lp(n - 1, LpSense::Minimize);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            std::vector<std::pair<int, T>> row;
            if (u != base) row.emplace_back(var(u), T(1));
            if (v != base) row.emplace_back(var(v), T(-1));
            lp.add_row(row, Rel::LessEq, space.d(u, v));
        }
    for (const auto& p : pairs) {
        std::vector<std::pair<int, T>> row;
        if (p.x != base) row.emplace_back(var(p.x), T(1));
        if (p.y != base) row.emplace_back(var(p.y), T(-1));
        lp.add_row(row, Rel::GreaterEq, (T(1) - alpha) * space.d(p.x, p.y));
    }
    return lp;
}

} // namespace detail

template <class T>
struct ConditionCResult {
    bool ok = false;
    std::vector<PinchWitness<T>> witnesses;
    std::optional<int> failing_x;
    // for the failing point: the best (s, t) margin seen, never above zero
    T failing_margin{};
};

// For each x in M, find s != t in the pair support with
// d(x,s) + d(x,t) < d(s,t) + eps, such that every 1-Lipschitz f that nearly
// aligns with all pairs has f(t) - f(s) > d(s,t) - eps. The function clause
// is decided by minimizing f(t) - f(s) by LP over the closed surrogate
// class, which is sufficient (possibly conservative) for the open one.
// Candidates (s, t) go in lexicographic order; the first pass wins.
template <class T>
ConditionCResult<T> check_condition_c(const FiniteMetricSpace<T>& space, const std::vector<MoleculePair>& pairs,
                                      const T& alpha, const T& eps, const T& tol = default_tolerance<T>()) {
    if (!(alpha > T(0)) || !(eps > T(0))) throw std::invalid_argument("alpha and eps must be positive");
    const auto support = detail::support_points<T>(pairs);
    auto lp = detail::pinch_program(space, pairs, alpha);
    const int base = space.base();
    auto var = [&](int p) { return p < base ? p : p - 1; };

    ConditionCResult<T> result;
    result.ok = true;
    for (int x = 0; x < space.size(); ++x) {
        bool found = false;
        bool have_margin = false;
        T best_margin{};
        for (int s : support) {
            for (int t : support) {
                if (s == t) continue;
                const T metric_margin = space.d(s, t) + eps - (space.d(x, s) + space.d(x, t));
                if (!certifiably_less(space.d(x, s) + space.d(x, t), space.d(s, t) + eps, tol)) {
                    if (!have_margin || metric_margin > best_margin) {
                        best_margin = metric_margin;
                        have_margin = true;
                    }
                    continue;
                }
                LinearProgram<T> prog = lp;  // shared rows, fresh objective per (s, t)
                if (t != base) prog.set_objective_coeff(var(t), T(1));
                if (s != base) prog.set_objective_coeff(var(s), T(-1));
                auto sol = solve(prog);
                if (sol.status == LpStatus::Infeasible) throw LpInfeasibleError();
                if (sol.status != LpStatus::Optimal) throw std::logic_error("pinch program unbounded");
                const T lp_margin = sol.objective - (space.d(s, t) - eps);
                if (certifiably_less(space.d(s, t) - eps, sol.objective, tol)) {
                    result.witnesses.push_back({x, s, t, sol.objective});
                    found = true;
                    break;
                }
                const T margin = std::min(metric_margin, lp_margin);
                if (!have_margin || margin > best_margin) {
                    best_margin = margin;
                    have_margin = true;
                }
            }
            if (found) break;
        }
        if (!found) {
            result.ok = false;
            result.failing_x = x;
            result.failing_margin = have_margin ? best_margin : T(0);
            result.witnesses.clear();
            return result;
        }
    }
    return result;
}

// Alpha-independent screen for condition (c): a point with no metrically
// feasible (s, t) can never be pinched, whatever alpha is.
template <class T>
std::optional<int> condition_c_uncoverable_point(const FiniteMetricSpace<T>& space,
                                                 const std::vector<MoleculePair>& pairs, const T& eps,
                                                 const T& tol = default_tolerance<T>()) {
    const auto support = detail::support_points<T>(pairs);
    for (int x = 0; x < space.size(); ++x) {
        bool any = false;
        for (int s : support) {
            for (int t : support) {
                if (s == t) continue;
                if (certifiably_less(space.d(x, s) + space.d(x, t), space.d(s, t) + eps, tol)) {
                    any = true;
                    break;
                }
            }
            if (any) break;
        }
        if (!any) return x;
    }
    return std::nullopt;
}

enum class CertifyFailureKind { ConditionB, ConditionA, ConditionC, SliceSoundness };

template <class T>
struct CertifyFailure {
    CertifyFailureKind kind = CertifyFailureKind::ConditionB;
    std::optional<std::vector<int>> negative_cycle;   // (b)
    std::optional<std::pair<int, int>> failing_pair;  // (a)
    T failing_total{};                                // (a)
    std::optional<int> failing_x;                     // (c)
    T failing_margin{};                               // (c)
    T slice_diameter{};                               // soundness
    T bound{};                                        // soundness
};

template <class T>
struct CertifyOutcome {
    std::optional<NonroughCertificate<T>> certificate;
    std::optional<CertifyFailure<T>> failure;
    bool ok() const { return certificate.has_value(); }
};

struct CertifyOptions {
    int n_exact = kDefaultDistinctLimit;
    bool check_slice = true;
};

template <class T>
CertifyOutcome<T> certify(const FiniteMetricSpace<T>& space, const std::vector<MoleculePair>& pairs, const T& alpha,
                          const T& eps, const CertifyOptions& opts = {}, const T& tol = default_tolerance<T>()) {
    if (pairs.empty()) throw std::invalid_argument("certify needs at least one pair");
    if (!(alpha > T(0)) || !(eps > T(0))) throw std::invalid_argument("alpha and eps must be positive");
    {
        std::set<MoleculePair> seen;
        for (const auto& p : pairs)
            if (!seen.insert(p).second) throw std::invalid_argument("duplicate ordered pair");
    }

    CertifyOutcome<T> outcome;
    auto ds = difference_system_from_pairs(space, pairs);

    if (!path_closure(ds, tol).feasible()) {
        CertifyFailure<T> f;
        f.kind = CertifyFailureKind::ConditionB;
        f.negative_cycle = find_negative_cycle(ds, tol);
        outcome.failure = std::move(f);
        return outcome;
    }

    auto a = check_condition_a(space, pairs, eps, opts.n_exact, tol);
    if (!a.ok) {
        CertifyFailure<T> f;
        f.kind = CertifyFailureKind::ConditionA;
        f.failing_pair = a.failing;
        f.failing_total = a.failing_total;
        outcome.failure = std::move(f);
        return outcome;
    }

    auto c = check_condition_c(space, pairs, alpha, eps, tol);
    if (!c.ok) {
        CertifyFailure<T> f;
        f.kind = CertifyFailureKind::ConditionC;
        f.failing_x = c.failing_x;
        f.failing_margin = c.failing_margin;
        outcome.failure = std::move(f);
        return outcome;
    }

    NonroughCertificate<T> cert;
    cert.eps = eps;
    cert.alpha = alpha;
    cert.pairs = pairs;
    cert.witnesses_a = std::move(a.witnesses);
    cert.witnesses_c = std::move(c.witnesses);
    cert.derived_bound = nonrough_diameter_bound(space, eps);

    auto comb = norm_one_weights(pairs, space, tol);
    if (!comb) throw std::logic_error("norm-one weights vanished after condition (b) held");
    cert.weights = comb->weights();
    const int n = comb->count();
    T min_weight = cert.weights[0];
    for (const T& w : cert.weights) min_weight = std::min(min_weight, w);
    cert.slice_alpha = alpha * min_weight / T(n);

    if (opts.check_slice) {
        FreeElement<T> mu = comb->expand(space);
        auto slice = detail::slice_diameter_unchecked(space, mu, cert.slice_alpha, tol);
        cert.slice_diameter = slice.diameter;
        if (!leq(slice.diameter, cert.derived_bound, tol)) {
            CertifyFailure<T> f;
            f.kind = CertifyFailureKind::SliceSoundness;
            f.slice_diameter = slice.diameter;
            f.bound = cert.derived_bound;
            outcome.failure = std::move(f);
            return outcome;
        }
    }

    outcome.certificate = std::move(cert);
    return outcome;
}

template <class T>
struct SearchNearMisses {
    // (b): least negative cycle total seen, with its pair set
    std::optional<std::pair<std::vector<MoleculePair>, T>> condition_b;
    // (a): smallest overshoot (cycle total minus eps) with set and index pair
    std::optional<std::tuple<std::vector<MoleculePair>, std::pair<int, int>, T>> condition_a;
    // (c): margin closest to zero with set and failing point
    std::optional<std::tuple<std::vector<MoleculePair>, int, T>> condition_c;
};

template <class T>
struct SearchOutcome {
    std::optional<NonroughCertificate<T>> certificate;
    long sets_considered = 0;
    long sets_norm_one = 0;
    long certify_calls = 0;
    SearchNearMisses<T> near_misses;
    std::vector<T> alpha_grid;
};

struct SearchOptions {
    int n_exact = kDefaultDistinctLimit;
    bool check_slice = true;
};

// Deterministic sweep over pair sets (by size, then lexicographic over the
// ordered-pair enumeration) and the descending alpha grid eps/2 .. eps/2^10.
// Returns the first certificate in that order, else near-miss statistics.
// The pinch LP relaxes as alpha shrinks, so a set failing (c) at the
// smallest alpha fails at every alpha; that screen keeps exhaustion cheap.
template <class T>
SearchOutcome<T> search_certificate(const FiniteMetricSpace<T>& space, const T& eps, int n_max,
                                    const SearchOptions& opts = {}, const T& tol = default_tolerance<T>()) {
    if (!(eps > T(0))) throw std::invalid_argument("eps must be positive");
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");

    SearchOutcome<T> outcome;
    for (int k = 1; k <= 10; ++k) outcome.alpha_grid.push_back(eps / T(1 << k));

    std::vector<MoleculePair> all_pairs;
    for (int x = 0; x < space.size(); ++x)
        for (int y = 0; y < space.size(); ++y)
            if (x != y) all_pairs.push_back({x, y});
    const int total = static_cast<int>(all_pairs.size());

    auto try_set = [&](const std::vector<int>& idxs) -> bool {
        ++outcome.sets_considered;
        std::vector<MoleculePair> pairs;
        pairs.reserve(idxs.size());
        for (int i : idxs) pairs.push_back(all_pairs[i]);

        auto ds = difference_system_from_pairs(space, pairs);
        if (!path_closure(ds, tol).feasible()) {
            if (auto cycle = find_negative_cycle(ds, tol)) {
                const T totalw = cycle_total(ds, *cycle);
                if (!outcome.near_misses.condition_b || totalw > outcome.near_misses.condition_b->second)
                    outcome.near_misses.condition_b = {pairs, totalw};
            }
            return false;
        }
        ++outcome.sets_norm_one;

        auto a = check_condition_a(space, pairs, eps, opts.n_exact, tol);
        if (!a.ok) {
            const T overshoot = a.failing_total - eps;
            if (!outcome.near_misses.condition_a || overshoot < std::get<2>(*outcome.near_misses.condition_a))
                outcome.near_misses.condition_a = {pairs, *a.failing, overshoot};
            return false;
        }

        if (auto ux = condition_c_uncoverable_point(space, pairs, eps, tol)) {
            // best metric margin for the uncovered point, LP-free
            const auto support = detail::support_points<T>(pairs);
            bool have = false;
            T margin{};
            for (int s : support)
                for (int t : support) {
                    if (s == t) continue;
                    const T m = space.d(s, t) + eps - (space.d(*ux, s) + space.d(*ux, t));
                    if (!have || m > margin) {
                        margin = m;
                        have = true;
                    }
                }
            if (!outcome.near_misses.condition_c || margin > std::get<2>(*outcome.near_misses.condition_c))
                outcome.near_misses.condition_c = {pairs, *ux, margin};
            return false;
        }

        // (c) relaxes as alpha shrinks: failing at the smallest grid alpha
        // means failing at every grid alpha.
        {
            auto screen = check_condition_c(space, pairs, outcome.alpha_grid.back(), eps, tol);
            if (!screen.ok) {
                if (!outcome.near_misses.condition_c ||
                    screen.failing_margin > std::get<2>(*outcome.near_misses.condition_c))
                    outcome.near_misses.condition_c = {pairs, *screen.failing_x, screen.failing_margin};
                return false;
            }
        }

        CertifyOptions copts;
        copts.n_exact = opts.n_exact;
        copts.check_slice = opts.check_slice;
        for (const T& alpha : outcome.alpha_grid) {
            ++outcome.certify_calls;
            auto attempt = certify(space, pairs, alpha, eps, copts, tol);
            if (attempt.ok()) {
                outcome.certificate = std::move(attempt.certificate);
                return true;
            }
            if (attempt.failure && attempt.failure->kind == CertifyFailureKind::ConditionC) {
                if (!outcome.near_misses.condition_c ||
                    attempt.failure->failing_margin > std::get<2>(*outcome.near_misses.condition_c))
                    outcome.near_misses.condition_c = {pairs, *attempt.failure->failing_x,
                                                       attempt.failure->failing_margin};
            }
        }
        return false;
    };

    std::vector<int> choice;
    for (int size = 1; size <= std::min(n_max, total); ++size) {
        choice.resize(size);
        for (int i = 0; i < size; ++i) choice[i] = i;
        for (;;) {
            if (try_set(choice)) return outcome;
            int pos = size - 1;
            while (pos >= 0 && choice[pos] == total - size + pos) --pos;
            if (pos < 0) break;
            ++choice[pos];
            for (int q = pos + 1; q < size; ++q) choice[q] = choice[q - 1] + 1;
        }
    }
    return outcome;
}

} // namespace freelip
