#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "freelip/lipschitz.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace freelip;
using testsupport::Rng;

namespace {

template <class T>
FiniteMetricSpace<T> line3() {
    return validate_metric<T>({{T(0), T(1), T(2)}, {T(1), T(0), T(1)}, {T(2), T(1), T(0)}}, 0);
}

} // namespace

TEST_CASE("extensions on the unit line") {
    auto m = line3<Rational>();
    std::vector<int> subset{0, 1};
    std::vector<Rational> f{Rational(0), Rational(1)};

    auto h1 = inf_extension_values(m, subset, f);
    auto h2 = sup_extension_values(m, subset, f);
    CHECK(h1[2] == Rational(2));  // min(0 + 2, 1 + 1)
    CHECK(h2[2] == Rational(0));  // max(0 - 2, 1 - 1)
    CHECK(h1[0] == Rational(0));
    CHECK(h1[1] == Rational(1));
    CHECK(h2[0] == Rational(0));
    CHECK(h2[1] == Rational(1));
}

TEST_CASE("extending from the whole space is the identity") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = testsupport::random_space<Rational>(rng, rng.uniform_int(2, 6));
        std::vector<int> all(m.size());
        for (int i = 0; i < m.size(); ++i) all[i] = i;
        auto f = testsupport::random_one_lipschitz_values(rng, m, all);
        CHECK(inf_extension_values(m, all, f) == f);
        CHECK(sup_extension_values(m, all, f) == f);
    }
}

TEST_CASE("non-Lipschitz subset data is rejected with indices") {
    auto m = line3<Rational>();
    try {
        inf_extension_values<Rational>(m, {0, 1}, {Rational(0), Rational(5)});
        FAIL("expected NotLipschitzOnSubsetError");
    } catch (const NotLipschitzOnSubsetError& e) {
        CHECK(e.i == 0);
        CHECK(e.j == 1);
    }
    CHECK_THROWS(inf_extension_values<Rational>(m, {0, 0}, {Rational(0), Rational(0)}));
    CHECK_THROWS(inf_extension_values<Rational>(m, {}, {}));
}

TEST_CASE("sandwich: extensions restrict to f, are 1-Lipschitz, and bound every extension") {
    Rng rng(3333);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = trial % 2 ? testsupport::random_space<Rational>(rng, rng.uniform_int(3, 7))
                           : testsupport::random_path_metric<Rational>(rng, rng.uniform_int(3, 7));
        // random nonempty subset
        std::vector<int> subset;
        for (int p = 0; p < m.size(); ++p)
            if (rng.coin()) subset.push_back(p);
        if (subset.empty()) subset.push_back(rng.uniform_int(0, m.size() - 1));
        auto f = testsupport::random_one_lipschitz_values(rng, m, subset);

        auto h1 = inf_extension_values(m, subset, f);
        auto h2 = sup_extension_values(m, subset, f);

        for (std::size_t i = 0; i < subset.size(); ++i) {
            CHECK(h1[subset[i]] == f[i]);
            CHECK(h2[subset[i]] == f[i]);
        }
        for (int u = 0; u < m.size(); ++u) {
            CHECK(h2[u] <= h1[u]);
            for (int v = u + 1; v < m.size(); ++v) {
                CHECK(abs_value(h1[u] - h1[v]) <= m.d(u, v));
                CHECK(abs_value(h2[u] - h2[v]) <= m.d(u, v));
            }
        }

        // sampled vertices of the extension polytope stay inside the sandwich
        for (int sample = 0; sample < 3; ++sample) {
            std::vector<Rational> objective(m.size());
            for (auto& c : objective) c = rng.grid<Rational>(-2, 2, 4);
            auto g = testsupport::sample_lipschitz_extension(m, subset, f, objective);
            for (int u = 0; u < m.size(); ++u) {
                CHECK(h2[u] <= g[u]);
                CHECK(g[u] <= h1[u]);
            }
        }
    }
}

TEST_CASE("translated extensions satisfy the function-type invariant") {
    Rng rng(505);
    for (int trial = 0; trial < 20; ++trial) {
        auto m = testsupport::random_space<Rational>(rng, rng.uniform_int(3, 6));
        std::vector<int> subset{0};
        for (int p = 1; p < m.size(); ++p)
            if (rng.coin()) subset.push_back(p);
        auto f = testsupport::random_one_lipschitz_values(rng, m, subset);
        auto h1 = inf_extension(m, subset, f);
        auto h2 = sup_extension(m, subset, f);
        CHECK(h1.value(m.base()) == Rational(0));
        CHECK(h2.value(m.base()) == Rational(0));
        CHECK(h1.lip_const() <= Rational(1));
        CHECK(h2.lip_const() <= Rational(1));
        // translation only shifts: differences agree with the raw extension
        auto raw = inf_extension_values(m, subset, f);
        for (int u = 0; u < m.size(); ++u)
            for (int v = 0; v < m.size(); ++v) CHECK(h1.value(u) - h1.value(v) == raw[u] - raw[v]);
    }
}

TEST_CASE("base translation: identity on normalized functions, constant-blind") {
    auto m = line3<Rational>();
    auto f = lip_norm<Rational>({Rational(0), Rational(1), Rational(1)}, m);
    auto g = translate_to_base(f, m);
    CHECK(g.values() == f.values());

    auto shifted = translate_to_base<Rational>({Rational(5), Rational(6), Rational(6)}, m);
    CHECK(shifted.values() == f.values());
    CHECK(shifted.lip_const() == f.lip_const());
}

TEST_CASE("molecule pairings are translation invariant") {
    Rng rng(8888);
    for (int trial = 0; trial < 100; ++trial) {
        auto m = testsupport::random_space<Rational>(rng, rng.uniform_int(2, 6));
        auto pairs = testsupport::random_pairs(rng, m, 1);
        auto comb = MoleculeCombination<Rational>::make(pairs, {Rational(1)}, m);

        std::vector<Rational> raw(m.size());
        for (auto& v : raw) v = rng.grid<Rational>(-2, 2, 8);
        const Rational shift = rng.grid<Rational>(-2, 2, 8);
        std::vector<Rational> shifted = raw;
        for (auto& v : shifted) v += shift;

        CHECK(pairing(comb, raw, m) == pairing(comb, shifted, m));
        CHECK(pairing(comb, translate_to_base(raw, m), m) == pairing(comb, raw, m));
    }
}
