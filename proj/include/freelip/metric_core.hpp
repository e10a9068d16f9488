#pragma once

// Finite pointed metric spaces and the finitely supported elements of the
// free Banach space over them. All values are immutable after construction.

#include "freelip/numeric.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace freelip {

struct MetricError : std::runtime_error {
    enum class Kind {
        NotSquare,
        NonFinite,
        AsymmetricMatrix,
        NegativeDistance,
        ZeroOffDiagonal,
        NonzeroDiagonal,
        TriangleViolation,
        TooFewPoints,
        BadBaseIndex,
    };
    Kind kind;
    int i = -1, j = -1, k = -1;

    MetricError(Kind kind_, std::string msg, int i_ = -1, int j_ = -1, int k_ = -1)
        : std::runtime_error(std::move(msg)), kind(kind_), i(i_), j(j_), k(k_) {}
};

// A finite metric space with a designated base point. Construction goes
// through validate_metric, which checks symmetry, positivity off the
// diagonal, and the full triangle inequality, and caches the two derived
// constants: min_distance (least off-diagonal entry) and diameter.
template <class T>
class FiniteMetricSpace {
public:
    FiniteMetricSpace() = default;

    int size() const { return static_cast<int>(dist_.size()); }
    int base() const { return base_; }
    const T& d(int i, int j) const { return dist_[i][j]; }
    const std::vector<std::vector<T>>& matrix() const { return dist_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_[i]; }

    const T& min_distance() const { return min_distance_; }  // c
    const T& diameter() const { return diameter_; }          // D

    int index_of(const std::string& label) const {
        for (int i = 0; i < size(); ++i)
            if (labels_[i] == label) return i;
        throw std::invalid_argument("unknown point label '" + label + "'");
    }

    template <class U>
    friend FiniteMetricSpace<U> validate_metric(std::vector<std::vector<U>> matrix, int base,
                                                std::vector<std::string> labels);

private:
    std::vector<std::vector<T>> dist_;
    std::vector<std::string> labels_;
    int base_ = 0;
    T min_distance_{};
    T diameter_{};
};

template <class T>
FiniteMetricSpace<T> validate_metric(std::vector<std::vector<T>> matrix, int base = 0,
                                     std::vector<std::string> labels = {}) {
    using E = MetricError;
    const int n = static_cast<int>(matrix.size());
    if (n < 2) throw E(E::Kind::TooFewPoints, "metric space needs at least 2 points");
    for (int i = 0; i < n; ++i)
        if (static_cast<int>(matrix[i].size()) != n)
            throw E(E::Kind::NotSquare, "distance matrix is not square at row " + std::to_string(i), i);
    if (base < 0 || base >= n)
        throw E(E::Kind::BadBaseIndex, "base index " + std::to_string(base) + " out of range", base);

    if constexpr (!is_exact_v<T>) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!std::isfinite(matrix[i][j]))
                    throw E(E::Kind::NonFinite, "non-finite distance at (" + std::to_string(i) + "," +
                                                    std::to_string(j) + ")", i, j);
    }
    for (int i = 0; i < n; ++i) {
        if (matrix[i][i] != T(0))
            throw E(E::Kind::NonzeroDiagonal, "nonzero diagonal at " + std::to_string(i), i);
        for (int j = i + 1; j < n; ++j) {
            if (matrix[i][j] != matrix[j][i])
                throw E(E::Kind::AsymmetricMatrix, "dist(" + std::to_string(i) + "," + std::to_string(j) +
                                                       ") != dist(" + std::to_string(j) + "," + std::to_string(i) + ")",
                        i, j);
            if (matrix[i][j] < T(0))
                throw E(E::Kind::NegativeDistance, "negative distance at (" + std::to_string(i) + "," +
                                                       std::to_string(j) + ")", i, j);
            if (matrix[i][j] == T(0))
                throw E(E::Kind::ZeroOffDiagonal, "zero distance between distinct points " + std::to_string(i) +
                                                      "," + std::to_string(j), i, j);
        }
    }
    // Exhaustive O(n^3) triangle check; n stays desk-scale.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (matrix[i][k] > matrix[i][j] + matrix[j][k])
                    throw E(E::Kind::TriangleViolation, "triangle violated: d(" + std::to_string(i) + "," +
                                                            std::to_string(k) + ") > d(" + std::to_string(i) + "," +
                                                            std::to_string(j) + ") + d(" + std::to_string(j) + "," +
                                                            std::to_string(k) + ")", i, j, k);

    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    } else if (static_cast<int>(labels.size()) != n) {
        throw E(E::Kind::NotSquare, "label count does not match matrix size");
    }

    FiniteMetricSpace<T> space;
    space.dist_ = std::move(matrix);
    space.labels_ = std::move(labels);
    space.base_ = base;
    space.min_distance_ = space.dist_[0][1];
    space.diameter_ = space.dist_[0][1];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            space.min_distance_ = std::min(space.min_distance_, space.dist_[i][j]);
            space.diameter_ = std::max(space.diameter_, space.dist_[i][j]);
        }
    return space;
}

// Finitely supported element sum c_i * delta_{x_i}; the base point never
// appears in the support and zero coefficients are never stored.
template <class T>
class FreeElement {
public:
    FreeElement() = default;

    static FreeElement from_terms(std::map<int, T> terms, const FiniteMetricSpace<T>& space) {
        FreeElement e;
        for (auto& [idx, coeff] : terms) {
            if (idx < 0 || idx >= space.size()) throw std::invalid_argument("support index out of range");
            if (idx == space.base()) throw std::invalid_argument("support must exclude the base point");
            if (coeff != T(0)) e.terms_.emplace(idx, coeff);
        }
        return e;
    }

    const std::map<int, T>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }

    void add(int idx, const T& coeff) {
        auto it = terms_.find(idx);
        if (it == terms_.end()) {
            if (coeff != T(0)) terms_.emplace(idx, coeff);
        } else {
            it->second += coeff;
            if (it->second == T(0)) terms_.erase(it);
        }
    }

    T coefficient(int idx) const {
        auto it = terms_.find(idx);
        return it == terms_.end() ? T(0) : it->second;
    }

    FreeElement scaled(const T& factor) const {
        FreeElement e;
        if (factor == T(0)) return e;
        for (auto& [idx, coeff] : terms_) e.terms_.emplace(idx, coeff * factor);
        return e;
    }

private:
    std::map<int, T> terms_;
};

struct MoleculePair {
    int x = 0;
    int y = 0;
    friend bool operator==(const MoleculePair&, const MoleculePair&) = default;
    friend auto operator<=>(const MoleculePair&, const MoleculePair&) = default;
};

// Convex combination sum lambda_i * (delta_{x_i} - delta_{y_i}) / d(x_i, y_i).
// Weights are positive and sum to 1 (exactly in rational mode, within tol
// otherwise); ordered pairs are distinct and never degenerate.
template <class T>
class MoleculeCombination {
public:
    MoleculeCombination() = default;

    static MoleculeCombination make(std::vector<MoleculePair> pairs, std::vector<T> weights,
                                    const FiniteMetricSpace<T>& space,
                                    const T& tol = default_tolerance<T>()) {
        if (pairs.size() != weights.size()) throw std::invalid_argument("pairs/weights size mismatch");
        if (pairs.empty()) throw std::invalid_argument("empty molecule combination");
        std::set<MoleculePair> seen;
        T total(0);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto& p = pairs[i];
            if (p.x < 0 || p.x >= space.size() || p.y < 0 || p.y >= space.size())
                throw std::invalid_argument("pair index out of range");
            if (p.x == p.y) throw std::invalid_argument("degenerate pair at position " + std::to_string(i));
            if (!seen.insert(p).second) throw std::invalid_argument("duplicate ordered pair");
            if (!(weights[i] > T(0))) throw std::invalid_argument("weights must be positive");
            total += weights[i];
        }
        if (!approx_eq(total, T(1), tol)) throw std::invalid_argument("weights must sum to 1");
        MoleculeCombination c;
        c.pairs_ = std::move(pairs);
        c.weights_ = std::move(weights);
        return c;
    }

    static MoleculeCombination uniform(std::vector<MoleculePair> pairs, const FiniteMetricSpace<T>& space) {
        std::vector<T> weights(pairs.size(), T(1) / T(static_cast<int>(pairs.size())));
        return make(std::move(pairs), std::move(weights), space);
    }

    const std::vector<MoleculePair>& pairs() const { return pairs_; }
    const std::vector<T>& weights() const { return weights_; }
    int count() const { return static_cast<int>(pairs_.size()); }

    // Coefficient expansion as a FreeElement; the base point drops out.
    FreeElement<T> expand(const FiniteMetricSpace<T>& space) const {
        FreeElement<T> e;
        for (std::size_t i = 0; i < pairs_.size(); ++i) {
            const T scale = weights_[i] / space.d(pairs_[i].x, pairs_[i].y);
            if (pairs_[i].x != space.base()) e.add(pairs_[i].x, scale);
            if (pairs_[i].y != space.base()) e.add(pairs_[i].y, -scale);
        }
        return e;
    }

private:
    std::vector<MoleculePair> pairs_;
    std::vector<T> weights_;
};

} // namespace freelip
