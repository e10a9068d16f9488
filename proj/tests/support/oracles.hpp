#pragma once

// Independent oracles the test suites check the library against. These stay
// deliberately naive: exhaustive enumeration, dynamic programming over path
// lengths, augmenting-path min-cost flow, and grid search with coordinate
// ascent. None of them share code with the simplex or closure paths they
// certify.

#include "freelip/graph_potentials.hpp"
#include "freelip/lipschitz.hpp"
#include "freelip/metric_core.hpp"
#include "freelip/simplex.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

namespace testsupport {

// Visit every simple cycle (length >= 2) as a vertex sequence; canonical
// form starts at the smallest vertex.
inline void for_each_simple_cycle(int n, const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<int> cycle;
    std::vector<char> used(n, 0);
    // enumerate by smallest element, then all orderings of the rest
    std::vector<int> rest;
    std::function<void(int)> permute = [&](int start) {
        if (!rest.empty()) {
            cycle.assign(1, start);
            cycle.insert(cycle.end(), rest.begin(), rest.end());
            visit(cycle);
        }
        for (int next = start + 1; next < n; ++next) {
            if (used[next]) continue;
            used[next] = 1;
            rest.push_back(next);
            permute(start);
            rest.pop_back();
            used[next] = 0;
        }
    };
    for (int start = 0; start < n; ++start) {
        std::fill(used.begin(), used.end(), 0);
        used[start] = 1;
        rest.clear();
        permute(start);
    }
}

template <class T>
std::optional<T> min_simple_cycle_total(const freelip::DifferenceSystem<T>& ds) {
    std::optional<T> best;
    for_each_simple_cycle(ds.n, [&](const std::vector<int>& cycle) {
        const T total = freelip::cycle_total(ds, cycle);
        if (!best || total < *best) best = total;
    });
    return best;
}

// Min cycle total over simple cycles containing both j and k.
template <class T>
std::optional<T> min_simple_cycle_through(const freelip::DifferenceSystem<T>& ds, int j, int k) {
    std::optional<T> best;
    for_each_simple_cycle(ds.n, [&](const std::vector<int>& cycle) {
        bool has_j = false, has_k = false;
        for (int v : cycle) {
            has_j |= v == j;
            has_k |= v == k;
        }
        if (!has_j || !has_k) return;
        const T total = freelip::cycle_total(ds, cycle);
        if (!best || total < *best) best = total;
    });
    return best;
}

// All-pairs minimum over walks of at most max_edges steps, straight dynamic
// programming over path length.
template <class T>
std::vector<std::vector<T>> brute_force_path_infima(const freelip::DifferenceSystem<T>& ds, int max_edges) {
    const int n = ds.n;
    std::vector<std::vector<T>> best = ds.w;  // one step
    std::vector<std::vector<T>> reach = ds.w;
    for (int len = 2; len <= max_edges; ++len) {
        std::vector<std::vector<T>> next(n, std::vector<T>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                T m = reach[i][0] + ds.w[0][j];
                for (int k = 1; k < n; ++k) m = std::min(m, reach[i][k] + ds.w[k][j]);
                next[i][j] = m;
                best[i][j] = std::min(best[i][j], m);
            }
        reach = std::move(next);
    }
    for (int t = 0; t < n; ++t) best[t][t] = std::min(best[t][t], T(0));  // the empty walk
    return best;
}

// Minimum-cost transport of the element's positive part onto its negative
// part with the base absorbing the imbalance. Successive shortest augmenting
// paths on the residual network, Bellman-Ford distances.
template <class T>
T transport_norm(const freelip::FreeElement<T>& mu, const freelip::FiniteMetricSpace<T>& space) {
    const int n = space.size();
    std::vector<T> balance(n, T(0));
    T sum(0);
    for (const auto& [idx, coeff] : mu.terms()) {
        balance[idx] = coeff;
        sum += coeff;
    }
    balance[space.base()] = -sum;

    std::vector<int> supply, demand;
    for (int p = 0; p < n; ++p) {
        if (balance[p] > T(0)) supply.push_back(p);
        if (balance[p] < T(0)) demand.push_back(p);
    }
    if (supply.empty()) return T(0);

    const int S = static_cast<int>(supply.size());
    const int D = static_cast<int>(demand.size());
    const int nodes = S + D + 2;
    const int src = S + D, snk = S + D + 1;
    std::vector<std::vector<T>> cap(nodes, std::vector<T>(nodes, T(0)));
    std::vector<std::vector<T>> cost(nodes, std::vector<T>(nodes, T(0)));
    T big(0);
    for (int i = 0; i < S; ++i) big += balance[supply[i]];
    for (int i = 0; i < S; ++i) cap[src][i] = balance[supply[i]];
    for (int j = 0; j < D; ++j) cap[S + j][snk] = -balance[demand[j]];
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < D; ++j) {
            cap[i][S + j] = big;
            cost[i][S + j] = space.d(supply[i], demand[j]);
            cost[S + j][i] = -cost[i][S + j];
        }

    T total_cost(0);
    for (;;) {
        // Bellman-Ford from src on the residual graph
        std::vector<std::optional<T>> dist(nodes);
        std::vector<int> parent(nodes, -1);
        dist[src] = T(0);
        for (int round = 0; round < nodes; ++round) {
            bool changed = false;
            for (int u = 0; u < nodes; ++u) {
                if (!dist[u]) continue;
                for (int v = 0; v < nodes; ++v) {
                    if (cap[u][v] <= T(0)) continue;
                    const T cand = *dist[u] + cost[u][v];
                    if (!dist[v] || cand < *dist[v]) {
                        dist[v] = cand;
                        parent[v] = u;
                        changed = true;
                    }
                }
            }
            if (!changed) break;
        }
        if (!dist[snk]) break;
        T bottleneck = cap[parent[snk]][snk];
        for (int v = snk; v != src; v = parent[v]) bottleneck = std::min(bottleneck, cap[parent[v]][v]);
        for (int v = snk; v != src; v = parent[v]) {
            cap[parent[v]][v] -= bottleneck;
            cap[v][parent[v]] += bottleneck;
            total_cost += bottleneck * cost[parent[v]][v];
        }
    }
    return total_cost;
}

// One vertex of the polytope of 1-Lipschitz extensions of f from the subset,
// picked by maximizing a linear objective over raw (untranslated) values.
template <class T>
std::vector<T> sample_lipschitz_extension(const freelip::FiniteMetricSpace<T>& space,
                                          const std::vector<int>& subset, const std::vector<T>& values,
                                          const std::vector<T>& objective) {
    const int n = space.size();
    freelip::LinearProgram<T> lp(n, freelip::LpSense::Maximize);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            lp.add_row({{u, T(1)}, {v, T(-1)}}, freelip::Rel::LessEq, space.d(u, v));
        }
    for (std::size_t i = 0; i < subset.size(); ++i) {
        std::vector<std::pair<int, T>> pin{{subset[i], T(1)}};
        lp.add_row(pin, freelip::Rel::Equal, values[i]);
    }
    for (int p = 0; p < n; ++p) lp.set_objective_coeff(p, objective[p]);
    auto sol = freelip::solve(lp);
    if (sol.status != freelip::LpStatus::Optimal) throw std::logic_error("extension sampler LP failed");
    return sol.x;
}

// Exhaustive maximum of the pairing over all vertices of the ball
// {f : f(base) = 0, |f(u) - f(v)| <= d(u,v)}. Every vertex comes from a
// spanning tree of tight constraints with a sign per edge; trees are decoded
// from Pruefer sequences. Exact in rational arithmetic. Intended for n <= 7.
template <class T>
T max_pairing_over_ball_vertices(const freelip::FreeElement<T>& mu, const freelip::FiniteMetricSpace<T>& space) {
    const int n = space.size();
    auto evaluate_tree = [&](const std::vector<std::pair<int, int>>& edges, std::optional<T>& best) {
        std::vector<std::vector<int>> adj(n);
        for (int e = 0; e < n - 1; ++e) {
            adj[edges[e].first].push_back(e);
            adj[edges[e].second].push_back(e);
        }
        for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
            std::vector<T> f(n, T(0));
            std::vector<char> done(n, 0);
            std::vector<int> stack{space.base()};
            done[space.base()] = 1;
            while (!stack.empty()) {
                const int u = stack.back();
                stack.pop_back();
                for (int e : adj[u]) {
                    const int v = edges[e].first == u ? edges[e].second : edges[e].first;
                    if (done[v]) continue;
                    const T step = space.d(edges[e].first, edges[e].second);
                    f[v] = f[u] + ((mask >> e) & 1 ? step : T(-step));
                    done[v] = 1;
                    stack.push_back(v);
                }
            }
            bool feasible = true;
            for (int u = 0; u < n && feasible; ++u)
                for (int v = u + 1; v < n && feasible; ++v)
                    if (freelip::abs_value(f[u] - f[v]) > space.d(u, v)) feasible = false;
            if (!feasible) continue;
            T value(0);
            for (const auto& [idx, coeff] : mu.terms()) value += coeff * f[idx];
            if (!best || value > *best) best = value;
        }
    };

    std::optional<T> best;
    if (n == 2) {
        evaluate_tree({{0, 1}}, best);
        return *best;
    }
    std::vector<int> pruefer(n - 2, 0);
    for (;;) {
        // decode
        std::vector<int> degree(n, 1);
        for (int v : pruefer) ++degree[v];
        std::vector<std::pair<int, int>> edges;
        std::vector<char> used(n, 0);
        std::vector<int> seq = pruefer;
        for (int round = 0; round < n - 2; ++round) {
            int leaf = -1;
            for (int v = 0; v < n; ++v)
                if (degree[v] == 1 && !used[v]) {
                    leaf = v;
                    break;
                }
            edges.emplace_back(leaf, seq[round]);
            used[leaf] = 1;
            --degree[seq[round]];
        }
        int a = -1, b = -1;
        for (int v = 0; v < n; ++v)
            if (!used[v] && degree[v] == 1) (a < 0 ? a : b) = v;
        edges.emplace_back(a, b);
        evaluate_tree(edges, best);

        int pos = n - 3;
        while (pos >= 0 && pruefer[pos] == n - 1) pruefer[pos--] = 0;
        if (pos < 0) break;
        ++pruefer[pos];
    }
    return *best;
}

// Coarse grid seeding refined by ray ascent along +-indicator directions
// (the edge directions of difference-constraint polytopes). Lower-bounds the
// LP maximum; tight on small instances.
inline double grid_local_search_pairing(const freelip::FreeElement<double>& mu,
                                        const freelip::FiniteMetricSpace<double>& space, int seeds,
                                        std::uint64_t seed) {
    const int n = space.size();
    const int base = space.base();
    std::vector<int> free_points;
    for (int p = 0; p < n; ++p)
        if (p != base) free_points.push_back(p);
    const int k = static_cast<int>(free_points.size());
    std::mt19937_64 gen(seed);

    auto feasible = [&](const std::vector<double>& f) {
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v)
                if (std::abs(f[u] - f[v]) > space.d(u, v) + 1e-12) return false;
        return true;
    };
    auto objective = [&](const std::vector<double>& f) {
        double total = 0;
        for (const auto& [idx, coeff] : mu.terms()) total += coeff * f[idx];
        return total;
    };

    // directions in {-1,0,1}^k
    std::vector<std::vector<int>> directions;
    std::vector<int> dir(k, -1);
    for (;;) {
        if (std::any_of(dir.begin(), dir.end(), [](int d) { return d != 0; })) directions.push_back(dir);
        int pos = k - 1;
        while (pos >= 0 && dir[pos] == 1) dir[pos--] = -1;
        if (pos < 0) break;
        ++dir[pos];
    }

    auto ascend = [&](std::vector<double> f) {
        for (int round = 0; round < 500; ++round) {
            double best_gain = 1e-12;
            std::vector<double> best_f;
            for (const auto& d : directions) {
                double dirobj = 0;
                for (int i = 0; i < k; ++i) {
                    const double c = mu.coefficient(free_points[i]);
                    dirobj += c * d[i];
                }
                if (dirobj <= 1e-14) continue;
                // max step along d
                double t = 1e30;
                auto coord = [&](int p) {
                    if (p == base) return 0;
                    for (int i = 0; i < k; ++i)
                        if (free_points[i] == p) return d[i];
                    return 0;
                };
                for (int u = 0; u < n; ++u)
                    for (int v = 0; v < n; ++v) {
                        if (u == v) continue;
                        const int a = coord(u) - coord(v);
                        if (a <= 0) continue;
                        const double slack = space.d(u, v) - (f[u] - f[v]);
                        t = std::min(t, slack / a);
                    }
                if (t <= 1e-12) continue;
                const double gain = dirobj * t;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_f = f;
                    for (int i = 0; i < k; ++i) best_f[free_points[i]] += t * d[i];
                }
            }
            if (best_f.empty()) break;
            f = std::move(best_f);
        }
        return objective(f);
    };

    double best = -1e300;
    std::vector<double> zero(n, 0.0);
    best = std::max(best, ascend(zero));
    std::vector<double> radial(n, 0.0), negradial(n, 0.0);
    for (int p = 0; p < n; ++p) {
        radial[p] = space.d(base, p);
        negradial[p] = -radial[p];
    }
    best = std::max(best, ascend(radial));
    best = std::max(best, ascend(negradial));
    for (int s = 0; s < seeds; ++s) {
        std::vector<double> f(n, 0.0);
        for (int p = 0; p < n; ++p) {
            if (p == base) continue;
            const double u01 = static_cast<double>(gen() >> 11) * 0x1.0p-53;
            f[p] = (2 * u01 - 1) * space.d(base, p);
        }
        if (!feasible(f)) continue;
        best = std::max(best, ascend(f));
    }
    return best;
}

} // namespace testsupport
