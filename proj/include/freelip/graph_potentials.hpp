#pragma once

// Difference-constraint systems over a finite index set: weights w[r][s]
// bound feasible potentials via p[r] <= p[s] + w[r][s]. Feasibility is
// equivalent to every weight cycle having nonnegative total, and the
// all-pairs path-infimum closure carries the quantitative gap information
// used by the certifier.

#include "freelip/metric_core.hpp"
#include "freelip/numeric.hpp"

#include <optional>
#include <vector>

namespace freelip {

struct InvalidPairError : std::invalid_argument {
    int index;
    explicit InvalidPairError(int idx)
        : std::invalid_argument("pair " + std::to_string(idx) + " has equal endpoints"), index(idx) {}
};

struct InfeasibleSystemError : std::logic_error {
    InfeasibleSystemError() : std::logic_error("difference system has a negative cycle") {}
};

struct SizeLimitError : std::invalid_argument {
    explicit SizeLimitError(int n, int limit)
        : std::invalid_argument("distinct-cycle search needs n <= " + std::to_string(limit) + ", got " +
                                std::to_string(n)) {}
};

template <class T>
struct DifferenceSystem {
    int n = 0;
    std::vector<std::vector<T>> w;  // w[r][s], zero diagonal

    static DifferenceSystem from_matrix(std::vector<std::vector<T>> weights) {
        DifferenceSystem ds;
        ds.n = static_cast<int>(weights.size());
        for (int i = 0; i < ds.n; ++i) {
            if (static_cast<int>(weights[i].size()) != ds.n) throw std::invalid_argument("weight matrix not square");
            if (weights[i][i] != T(0)) throw std::invalid_argument("weight diagonal must be zero");
        }
        ds.w = std::move(weights);
        return ds;
    }
};

// w[i][j] = d(x_i, y_j) - d(x_i, y_i): the cost of re-targeting pair i onto
// the tail of pair j. Zero diagonal by construction.
template <class T>
DifferenceSystem<T> difference_system_from_pairs(const FiniteMetricSpace<T>& space,
                                                 const std::vector<MoleculePair>& pairs) {
    const int n = static_cast<int>(pairs.size());
    for (int i = 0; i < n; ++i)
        if (pairs[i].x == pairs[i].y) throw InvalidPairError(i);
    DifferenceSystem<T> ds;
    ds.n = n;
    ds.w.assign(n, std::vector<T>(n, T(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ds.w[i][j] = space.d(pairs[i].x, pairs[j].y) - space.d(pairs[i].x, pairs[i].y);
    return ds;
}

// All-pairs path infima of a DifferenceSystem. When feasible the diagonal is
// zero, entries obey the triangle law, and each entry is at most the direct
// weight. A negative cycle drives every infimum to -infinity here (the
// weight graph is complete), recorded by the marker and feasible = false.
template <class T>
class PathClosure {
public:
    bool feasible() const { return feasible_; }
    int size() const { return n_; }

    Extended<T> at(int r, int s) const {
        if (!feasible_) return Extended<T>::minus_infinity();
        return Extended<T>::finite(values_[r][s]);
    }

    // Only valid when feasible.
    const T& value(int r, int s) const { return values_[r][s]; }
    const std::vector<std::vector<T>>& values() const { return values_; }

    template <class U>
    friend PathClosure<U> path_closure(const DifferenceSystem<U>& ds, const U& tol);

private:
    int n_ = 0;
    bool feasible_ = false;
    std::vector<std::vector<T>> values_;
};

template <class T>
PathClosure<T> path_closure(const DifferenceSystem<T>& ds, const T& tol = default_tolerance<T>()) {
    PathClosure<T> pc;
    pc.n_ = ds.n;
    pc.values_ = ds.w;
    auto& d = pc.values_;
    for (int k = 0; k < ds.n; ++k)
        for (int i = 0; i < ds.n; ++i)
            for (int j = 0; j < ds.n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    pc.feasible_ = true;
    for (int t = 0; t < ds.n; ++t)
        if (d[t][t] < -tol) pc.feasible_ = false;
    if (pc.feasible_) {
        // float roundoff can leave the diagonal a hair under zero
        for (int t = 0; t < ds.n; ++t)
            if (d[t][t] != T(0)) d[t][t] = T(0);
    }
    return pc;
}

template <class T>
struct PotentialVector {
    std::vector<T> values;
};

template <class T>
struct PotentialsResult {
    bool feasible = false;
    std::optional<PotentialVector<T>> witness;
};

// Feasibility of p[r] <= p[s] + w[r][s], with a witness taken from the first
// closure column. The witness is re-checked against every inequality before
// being returned.
template <class T>
PotentialsResult<T> potentials_exist(const DifferenceSystem<T>& ds, const T& tol = default_tolerance<T>()) {
    auto pc = path_closure(ds, tol);
    if (!pc.feasible()) return {};
    PotentialVector<T> witness;
    witness.values.reserve(ds.n);
    for (int r = 0; r < ds.n; ++r) witness.values.push_back(pc.value(r, 0));
    for (int r = 0; r < ds.n; ++r)
        for (int s = 0; s < ds.n; ++s)
            if (!leq(witness.values[r], witness.values[s] + ds.w[r][s], tol))
                throw std::logic_error("potential witness failed verification");
    return {true, std::move(witness)};
}

// Width of the feasible range of p[j] - p[k] across all potential vectors:
// closure[j][k] + closure[k][j], always >= 0 on feasible systems.
template <class T>
T pair_gap(const PathClosure<T>& pc, int j, int k) {
    if (!pc.feasible()) throw InfeasibleSystemError();
    if (j == k) throw std::invalid_argument("pair_gap needs distinct indices");
    return pc.value(j, k) + pc.value(k, j);
}

template <class T>
struct CycleSearchResult {
    Extended<T> total;
    std::vector<int> cycle;  // vertex order, distinct mode only
};

inline constexpr int kDefaultDistinctLimit = 14;

// Minimum weight of a cycle through both j and k. With repeats allowed this
// is the closure round trip (possibly -infinity). In distinct mode the cycle
// must visit pairwise different vertices; solved exactly by subset DP and
// gated by n_exact. Distinct-mode minima are never below the relaxed value.
template <class T>
CycleSearchResult<T> min_cycle_through(const DifferenceSystem<T>& ds, int j, int k, bool distinct,
                                       int n_exact = kDefaultDistinctLimit,
                                       const T& tol = default_tolerance<T>()) {
    if (j == k) throw std::invalid_argument("min_cycle_through needs distinct indices");
    if (!distinct) {
        auto pc = path_closure(ds, tol);
        if (!pc.feasible()) return {Extended<T>::minus_infinity(), {}};
        return {Extended<T>::finite(pair_gap(pc, j, k)), {}};
    }
    if (ds.n > n_exact) throw SizeLimitError(ds.n, n_exact);

    const int n = ds.n;
    std::vector<int> others;
    others.reserve(n - 1);
    int k_idx = -1;
    for (int v = 0; v < n; ++v)
        if (v != j) {
            if (v == k) k_idx = static_cast<int>(others.size());
            others.push_back(v);
        }
    const int m = static_cast<int>(others.size());
    const std::size_t masks = std::size_t{1} << m;

    // dp[mask][v]: cheapest path j -> others[v] whose interior is exactly mask
    std::vector<std::vector<T>> dp(masks, std::vector<T>(m, T(0)));
    std::vector<std::vector<int>> parent(masks, std::vector<int>(m, -1));
    for (int v = 0; v < m; ++v) dp[std::size_t{1} << v][v] = ds.w[j][others[v]];

    for (std::size_t mask = 1; mask < masks; ++mask) {
        for (int v = 0; v < m; ++v) {
            if (!(mask & (std::size_t{1} << v))) continue;
            const std::size_t prev = mask ^ (std::size_t{1} << v);
            if (prev == 0) continue;
            bool first = true;
            for (int u = 0; u < m; ++u) {
                if (!(prev & (std::size_t{1} << u))) continue;
                const T cand = dp[prev][u] + ds.w[others[u]][others[v]];
                if (first || cand < dp[mask][v]) {
                    dp[mask][v] = cand;
                    parent[mask][v] = u;
                    first = false;
                }
            }
        }
    }

    bool found = false;
    T best{};
    std::size_t best_mask = 0;
    int best_v = -1;
    for (std::size_t mask = 1; mask < masks; ++mask) {
        if (!(mask & (std::size_t{1} << k_idx))) continue;
        for (int v = 0; v < m; ++v) {
            if (!(mask & (std::size_t{1} << v))) continue;
            const T cand = dp[mask][v] + ds.w[others[v]][j];
            if (!found || cand < best) {
                best = cand;
                best_mask = mask;
                best_v = v;
                found = true;
            }
        }
    }

    CycleSearchResult<T> result;
    result.total = Extended<T>::finite(best);
    std::vector<int> rev;
    std::size_t mask = best_mask;
    int v = best_v;
    while (v != -1) {
        rev.push_back(others[v]);
        const int u = parent[mask][v];
        mask ^= std::size_t{1} << v;
        v = u;
    }
    result.cycle.push_back(j);
    result.cycle.insert(result.cycle.end(), rev.rbegin(), rev.rend());
    return result;
}

// Total weight of a closed vertex sequence (the closing edge is implied).
template <class T>
T cycle_total(const DifferenceSystem<T>& ds, const std::vector<int>& cycle) {
    T total(0);
    const int m = static_cast<int>(cycle.size());
    for (int t = 0; t < m; ++t) total += ds.w[cycle[t]][cycle[(t + 1) % m]];
    return total;
}

// Bellman-Ford negative-cycle witness, used for failure reports. Returns the
// vertex sequence of one negative cycle, or nullopt on feasible systems.
template <class T>
std::optional<std::vector<int>> find_negative_cycle(const DifferenceSystem<T>& ds,
                                                    const T& tol = default_tolerance<T>()) {
    const int n = ds.n;
    std::vector<T> dist(n, T(0));
    std::vector<int> parent(n, -1);
    int touched = -1;
    for (int round = 0; round < n; ++round) {
        touched = -1;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (u == v) continue;
                if (dist[u] + ds.w[u][v] < dist[v] - (round + 1 == n ? tol : T(0))) {
                    dist[v] = dist[u] + ds.w[u][v];
                    parent[v] = u;
                    touched = v;
                }
            }
        if (touched < 0) return std::nullopt;
    }
    // follow parents with repeat detection; the first revisited vertex closes
    // a cycle in the relaxation graph
    std::vector<int> seen(n, -1);
    std::vector<int> path;
    int u = touched;
    while (u >= 0 && seen[u] < 0) {
        seen[u] = static_cast<int>(path.size());
        path.push_back(u);
        u = parent[u];
    }
    if (u >= 0) {
        std::vector<int> cycle(path.begin() + seen[u], path.end());
        std::reverse(cycle.begin(), cycle.end());
        if (cycle_total(ds, cycle) < T(0)) return cycle;
    }
    // exact fallback: a negative closed walk decomposes into simple cycles,
    // so some simple cycle is negative; scan them by subset DP
    if (n <= kDefaultDistinctLimit) {
        for (int j = 0; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                auto r = min_cycle_through(ds, j, k, true);
                if (r.total.is_finite() && r.total.value < T(0)) return r.cycle;
            }
    }
    return std::nullopt;
}

} // namespace freelip
