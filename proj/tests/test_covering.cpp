#include <doctest.h>

#include <cmath>
#include <random>

#include "covlab/covering.hpp"
#include "covlab/errors.hpp"
#include "covlab/subgroup.hpp"
#include "groups.hpp"
#include "oracles.hpp"

using namespace covlab;

namespace {

SubsetOfG subset(const FiniteGroup& g, std::vector<Elem> xs) { return SubsetOfG::of(g, xs); }

std::set<Elem> as_set(const SubsetOfG& a) {
    auto v = a.elements();
    return {v.begin(), v.end()};
}

/// {0000} and the six weight-2 vectors of Z_2^4.
SubsetOfG even_weight_two(const FiniteGroup& g) {
    std::vector<Elem> xs{g.identity()};
    for (Elem x = 0; x < g.order(); ++x) {
        auto c = g.coords(x);
        if (std::count(c.begin(), c.end(), 1u) == 2) xs.push_back(x);
    }
    return subset(g, xs);
}

SubsetOfG random_subset(const FiniteGroup& g, std::mt19937_64& rng, std::size_t min_size = 1) {
    Bitset b(g.order());
    std::size_t k = min_size + rng() % (g.order() - min_size + 1);
    while (b.count() < k) b.set(rng() % g.order());
    return {g, b};
}

}  // namespace

TEST_CASE("difference_set examples") {
    auto z6 = FiniteGroup::cyclic(6);
    CHECK(difference_set(subset(z6, {1, 2})).elements() == std::vector<Elem>{0, 1, 5});
    CHECK(difference_set(subset(z6, {4})).elements() == std::vector<Elem>{0});

    auto g = FiniteGroup::power(2, 4);
    std::vector<Elem> weight_one;
    for (Elem x = 0; x < 16; ++x)
        if (std::popcount(x) == 1) weight_one.push_back(x);
    CHECK(difference_set(subset(g, weight_one)) == even_weight_two(g));
    CHECK(difference_set(subset(g, weight_one)).size() == 7);

    CHECK_THROWS_AS(difference_set(SubsetOfG(z6, Bitset(6))), Error);
}

TEST_CASE("difference sets contain e, are inverse closed, and match the oracle") {
    std::mt19937_64 rng(3);
    for (const auto& g : testing::small_corpus()) {
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_subset(g, rng);
            auto d = difference_set(a);
            CHECK(d.contains(g.identity()));
            for (Elem x : d.elements()) CHECK(d.contains(g.invert(x)));
            CHECK(d.size() <= a.size() * a.size() - a.size() + 1);
            CHECK(as_set(d) == oracle::difference_set(g, as_set(a)));
        }
    }
}

TEST_CASE("cov_exact examples") {
    auto z6 = FiniteGroup::cyclic(6);
    auto r = cov_exact(subset(z6, {0, 3}));
    CHECK(r.value == 3);
    CHECK(r.proven_optimal);
    CHECK(r.witness.size() == 3);
    CHECK(is_cover(subset(z6, {0, 3}), r.witness));

    for (const auto& g : testing::small_corpus()) {
        Bitset all(g.order());
        all.set_all();
        CHECK(cov_exact({g, all}).value == 1);
        CHECK(cov_exact(subset(g, {g.identity()})).value == g.order());
    }

    auto g = FiniteGroup::power(2, 4);
    auto d = even_weight_two(g);
    auto exact = cov_exact(d);
    CHECK(exact.value == 4);
    CHECK(exact.value == oracle::min_cover_naive(g, as_set(d)));
    CHECK(is_cover(d, exact.witness));

    CHECK_THROWS_AS(cov_exact(SubsetOfG(z6, Bitset(6))), Error);
}

TEST_CASE("cov_greedy examples") {
    auto z6 = FiniteGroup::cyclic(6);
    auto r = cov_greedy(subset(z6, {0, 1}));
    CHECK(r.value == 3);
    CHECK(r.witness == std::vector<Elem>{0, 2, 4});
    Bitset all(6);
    all.set_all();
    CHECK(cov_greedy({z6, all}).value == 1);

    auto g = FiniteGroup::power(2, 4);
    auto greedy = cov_greedy(even_weight_two(g));
    CHECK(greedy.value >= 4);
    CHECK(greedy.value <= 5);
    CHECK(is_cover(even_weight_two(g), greedy.witness));
}

TEST_CASE("cov_bounds examples") {
    auto z6 = FiniteGroup::cyclic(6);
    auto b = cov_bounds(subset(z6, {0, 3}));
    CHECK(b.lower == 3);
    CHECK(b.upper == 3);
    auto g = FiniteGroup::power(2, 4);
    auto eb = cov_bounds(even_weight_two(g));
    CHECK(eb.lower == 4);
    CHECK(eb.upper >= 4);
    Bitset all(16);
    all.set_all();
    auto ab = cov_bounds({g, all});
    CHECK(ab.lower == 1);
    CHECK(ab.upper == 1);
}

TEST_CASE("subgroups cover with exactly their index") {
    for (const auto& g : testing::small_corpus()) {
        CAPTURE(g.name());
        for (const auto& h : all_subgroups(g)) {
            SubsetOfG a(g, h.members());
            auto r = cov_exact(a);
            CHECK(r.value == g.order() / h.order());
            CHECK(r.proven_optimal);
            CHECK(cov_exact(a, {.reduce_to_subgroup = false}).value == g.order() / h.order());
        }
    }
}

TEST_CASE("exact search agrees with the naive oracle on groups of order <= 16") {
    std::mt19937_64 rng(17);
    for (const auto& g : testing::small_corpus()) {
        if (g.order() > 16 || g.order() < 2) continue;
        CAPTURE(g.name());
        for (int trial = 0; trial < 40; ++trial) {
            auto a = random_subset(g, rng, 2);
            const std::size_t naive = oracle::min_cover_naive(g, as_set(a));
            for (bool reduce : {true, false}) {
                auto r = cov_exact(a, {.reduce_to_subgroup = reduce});
                CHECK(r.value == naive);
                CHECK(r.proven_optimal);
                CHECK(is_cover(a, r.witness));
                CHECK(r.witness.size() == r.value);
            }
            auto right = cov_exact(a, {.side = CoverSide::right});
            CHECK(right.value == oracle::min_cover_naive(g, as_set(a), true));
            CHECK(is_cover(a, right.witness, CoverSide::right));
        }
    }
}

TEST_CASE("bounds sandwich, monotonicity and translation invariance") {
    std::mt19937_64 rng(23);
    for (const auto& g : testing::small_corpus()) {
        CAPTURE(g.name());
        for (int trial = 0; trial < 15; ++trial) {
            auto a = random_subset(g, rng);
            auto exact = cov_exact(a).value;
            auto greedy = cov_greedy(a);
            auto b = cov_bounds(a);
            CHECK((g.order() + a.size() - 1) / a.size() <= b.lower);
            CHECK(b.lower <= exact);
            CHECK(exact <= greedy.value);
            CHECK(b.upper == greedy.value);
            CHECK(static_cast<double>(greedy.value) <= exact * (1 + std::log(static_cast<double>(g.order()))));
            CHECK(is_cover(a, greedy.witness));

            Elem t = static_cast<Elem>(rng() % g.order());
            CHECK(cov_exact(left_translate(a, t)).value == exact);

            // Drop one element: a subset never covers with fewer translates.
            if (a.size() > 1) {
                Bitset smaller = a.members();
                smaller.reset(a.elements()[rng() % a.size()]);
                CHECK(cov_exact({g, smaller}).value >= exact);
            }
        }
    }
}

TEST_CASE("left and right covers match the oracle on every subset of S_3") {
    auto s3 = testing::symmetric_group(3);
    for (std::uint32_t mask = 1; mask < 64; ++mask) {
        std::vector<Elem> xs;
        for (Elem x = 0; x < 6; ++x)
            if (mask >> x & 1) xs.push_back(x);
        auto a = subset(s3, xs);
        auto l = cov_exact(a).value;
        auto r = cov_exact(a, {.side = CoverSide::right}).value;
        CHECK(l == oracle::min_cover_naive(s3, as_set(a)));
        CHECK(r == oracle::min_cover_naive(s3, as_set(a), true));
    }
}

TEST_CASE("canonical witness is the lexicographically least minimum cover") {
    std::mt19937_64 rng(5);
    for (const auto& g : {FiniteGroup::cyclic(12), testing::symmetric_group(3), FiniteGroup::power(2, 3)}) {
        for (int trial = 0; trial < 20; ++trial) {
            auto a = random_subset(g, rng);
            auto r = cov_exact(a, {.canonical = true});
            REQUIRE(r.canonical);
            CHECK(is_cover(a, r.witness));
            // Oracle: first cover of the optimal size in lexicographic order.
            std::vector<Elem> best;
            std::vector<Elem> idx(r.value);
            for (std::size_t i = 0; i < r.value; ++i) idx[i] = static_cast<Elem>(i);
            while (true) {
                if (is_cover(a, idx)) {
                    best = idx;
                    break;
                }
                std::size_t i = r.value;
                while (i > 0 && idx[i - 1] == g.order() - r.value + i - 1) --i;
                REQUIRE(i > 0);
                ++idx[i - 1];
                for (std::size_t j = i; j < r.value; ++j) idx[j] = idx[j - 1] + 1;
            }
            CHECK(r.witness == best);
            // Same value and witness on every call.
            auto again = cov_exact(a, {.canonical = true});
            CHECK(again.witness == r.witness);
        }
    }
}

TEST_CASE("budget exhaustion is flagged, not thrown") {
    // Z_2^6 with a random 7-set is not solvable within 5 nodes.
    auto g = FiniteGroup::power(2, 6);
    std::mt19937_64 rng(99);
    Bitset b(64);
    while (b.count() < 7) b.set(rng() % 64);
    auto r = cov_exact({g, b}, {.node_budget = 5, .local_search_moves = 0});
    CHECK(is_cover({g, b}, r.witness));
    CHECK(r.lower_bound <= r.value);
    if (!r.proven_optimal) CHECK(r.nodes_explored <= 6);
}
