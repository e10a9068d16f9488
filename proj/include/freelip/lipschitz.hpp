#pragma once

// Real Lipschitz functions on a finite pointed metric space, normalized to
// vanish at the base point, plus the inf/sup convolution extensions from a
// subset (largest and smallest 1-Lipschitz extensions).

#include "freelip/metric_core.hpp"

#include <set>
#include <vector>

namespace freelip {

struct NotLipschitzOnSubsetError : std::invalid_argument {
    int i, j;
    NotLipschitzOnSubsetError(int i_, int j_)
        : std::invalid_argument("values are not 1-Lipschitz on the subset at indices " + std::to_string(i_) + "," +
                                std::to_string(j_)),
          i(i_), j(j_) {}
};

template <class T>
class LipschitzFunction {
public:
    LipschitzFunction() = default;

    const std::vector<T>& values() const { return values_; }
    const T& value(int i) const { return values_[i]; }
    const T& lip_const() const { return lip_; }
    int size() const { return static_cast<int>(values_.size()); }

    template <class U>
    friend LipschitzFunction<U> lip_norm(std::vector<U> values, const FiniteMetricSpace<U>& space);

private:
    std::vector<T> values_;
    T lip_{};
};

// Normalize raw values to vanish at the base and compute the least Lipschitz
// constant, the max of |f(u)-f(v)| / d(u,v) over all pairs.
template <class T>
LipschitzFunction<T> lip_norm(std::vector<T> values, const FiniteMetricSpace<T>& space) {
    if (static_cast<int>(values.size()) != space.size())
        throw std::invalid_argument("value count does not match the space");
    if constexpr (!is_exact_v<T>) {
        for (const T& v : values)
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite function value");
    }
    const T shift = values[space.base()];
    for (T& v : values) v -= shift;
    T lip(0);
    for (int u = 0; u < space.size(); ++u)
        for (int v = u + 1; v < space.size(); ++v) {
            const T ratio = abs_value(values[u] - values[v]) / space.d(u, v);
            if (ratio > lip) lip = ratio;
        }
    LipschitzFunction<T> f;
    f.values_ = std::move(values);
    f.lip_ = std::move(lip);
    return f;
}

// Subtract the base value. On an already normalized function this is the
// identity; adding a constant to the input never changes the output.
template <class T>
LipschitzFunction<T> translate_to_base(const std::vector<T>& values, const FiniteMetricSpace<T>& space) {
    return lip_norm(values, space);
}

template <class T>
LipschitzFunction<T> translate_to_base(const LipschitzFunction<T>& f, const FiniteMetricSpace<T>& space) {
    (void)space;
    return f;
}

template <class T>
T pairing(const FreeElement<T>& mu, const LipschitzFunction<T>& f) {
    T total(0);
    for (const auto& [idx, coeff] : mu.terms()) total += coeff * f.value(idx);
    return total;
}

// Pairing in difference form: translation-invariant because each molecule's
// coefficients sum to zero.
template <class T>
T pairing(const MoleculeCombination<T>& comb, const std::vector<T>& values, const FiniteMetricSpace<T>& space) {
    T total(0);
    for (int i = 0; i < comb.count(); ++i) {
        const auto& p = comb.pairs()[i];
        total += comb.weights()[i] * (values[p.x] - values[p.y]) / space.d(p.x, p.y);
    }
    return total;
}

template <class T>
T pairing(const MoleculeCombination<T>& comb, const LipschitzFunction<T>& f, const FiniteMetricSpace<T>& space) {
    return pairing(comb, f.values(), space);
}

namespace detail {
template <class T>
void check_subset_function(const FiniteMetricSpace<T>& space, const std::vector<int>& subset,
                           const std::vector<T>& values, const T& tol) {
    if (subset.empty()) throw std::invalid_argument("empty subset");
    if (subset.size() != values.size()) throw std::invalid_argument("subset/value size mismatch");
    std::set<int> seen;
    for (int idx : subset) {
        if (idx < 0 || idx >= space.size()) throw std::invalid_argument("subset index out of range");
        if (!seen.insert(idx).second) throw std::invalid_argument("duplicate point in subset");
    }
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            if (!leq(abs_value(values[a] - values[b]), space.d(subset[a], subset[b]), tol))
                throw NotLipschitzOnSubsetError(subset[a], subset[b]);
}
} // namespace detail

// Largest 1-Lipschitz extension: h(x) = min over subset z of f(z) + d(z, x).
// Restricts to f on the subset before base translation.
template <class T>
std::vector<T> inf_extension_values(const FiniteMetricSpace<T>& space, const std::vector<int>& subset,
                                    const std::vector<T>& values, const T& tol = default_tolerance<T>()) {
    detail::check_subset_function(space, subset, values, tol);
    std::vector<T> out(space.size());
    for (int x = 0; x < space.size(); ++x) {
        T best = values[0] + space.d(subset[0], x);
        for (std::size_t z = 1; z < subset.size(); ++z) {
            const T cand = values[z] + space.d(subset[z], x);
            if (cand < best) best = cand;
        }
        out[x] = best;
    }
    return out;
}

// Smallest 1-Lipschitz extension: h(x) = max over subset z of f(z) - d(z, x).
template <class T>
std::vector<T> sup_extension_values(const FiniteMetricSpace<T>& space, const std::vector<int>& subset,
                                    const std::vector<T>& values, const T& tol = default_tolerance<T>()) {
    detail::check_subset_function(space, subset, values, tol);
    std::vector<T> out(space.size());
    for (int x = 0; x < space.size(); ++x) {
        T best = values[0] - space.d(subset[0], x);
        for (std::size_t z = 1; z < subset.size(); ++z) {
            const T cand = values[z] - space.d(subset[z], x);
            if (cand > best) best = cand;
        }
        out[x] = best;
    }
    return out;
}

template <class T>
LipschitzFunction<T> inf_extension(const FiniteMetricSpace<T>& space, const std::vector<int>& subset,
                                   const std::vector<T>& values, const T& tol = default_tolerance<T>()) {
    return translate_to_base(inf_extension_values(space, subset, values, tol), space);
}

template <class T>
LipschitzFunction<T> sup_extension(const FiniteMetricSpace<T>& space, const std::vector<int>& subset,
                                   const std::vector<T>& values, const T& tol = default_tolerance<T>()) {
    return translate_to_base(sup_extension_values(space, subset, values, tol), space);
}

} // namespace freelip
