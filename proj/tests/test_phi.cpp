#include <doctest.h>

#include "covlab/constructions.hpp"
#include "covlab/errors.hpp"
#include "covlab/phi.hpp"
#include "groups.hpp"
#include "oracles.hpp"

using namespace covlab;

namespace {

PartitionCandidate cells(const FiniteGroup& g, std::vector<std::vector<Elem>> cs) { return {g, std::move(cs)}; }

/// max over all n-cell partitions of the min naive cover number of the
/// cells' difference sets.
std::size_t phi_oracle(const FiniteGroup& g, std::size_t n) {
    std::size_t best = 0;
    for (const auto& p : oracle::all_partitions(g.order(), n)) {
        std::size_t worst = g.order();
        for (const auto& c : p) {
            auto d = oracle::difference_set(g, std::set<Elem>(c.begin(), c.end()));
            worst = std::min(worst, oracle::min_cover_naive(g, d));
        }
        best = std::max(best, worst);
    }
    return best;
}

std::uint64_t stirling2(std::uint64_t n, std::uint64_t k) {
    if (n == 0 && k == 0) return 1;
    if (n == 0 || k == 0) return 0;
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
}

}  // namespace

TEST_CASE("min_cell_cov examples") {
    auto z3 = FiniteGroup::cyclic(3);
    CHECK(min_cell_cov(cells(z3, {{0}, {1, 2}})) == 1);
    CHECK(min_cell_cov(cells(z3, {{0, 1, 2}})) == 1);
    auto z4 = FiniteGroup::cyclic(4);
    CHECK(min_cell_cov(cells(z4, {{0, 1}, {2, 3}})) == 2);
    CHECK(min_cell_cov(cells(z4, {{0}, {1}, {2}, {3}})) == 4);
}

TEST_CASE("invalid partitions are rejected with the offending element") {
    auto z4 = FiniteGroup::cyclic(4);
    auto expect = [](const PartitionCandidate& p, const std::string& needle) {
        try {
            min_cell_cov(p);
            FAIL("partition accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InvalidPartition);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect(cells(z4, {{0, 1}, {2}}), "element 3");
    expect(cells(z4, {{0, 1}, {1, 2, 3}}), "element 1");
    expect(cells(z4, {{0, 1, 2, 3}, {}}), "empty");
    expect(cells(z4, {{0, 1, 2, 3, 9}}), "element 9");
}

TEST_CASE("phi_exhaustive examples") {
    auto z3 = phi_exhaustive(FiniteGroup::cyclic(3), 2);
    CHECK(z3.phi_value == 1);
    CHECK(z3.complete);
    auto z4 = phi_exhaustive(FiniteGroup::cyclic(4), 2);
    CHECK(z4.phi_value == 2);
    CHECK(z4.argmax.cells == std::vector<std::vector<Elem>>{{0, 1}, {2, 3}});
    CHECK_FALSE(z4.exceeds_n);
    for (const auto& g : testing::small_corpus())
        if (g.order() <= 12) CHECK(phi_exhaustive(g, 1).phi_value == 1);
    CHECK_THROWS_AS(phi_exhaustive(FiniteGroup::cyclic(3), 4), Error);
}

TEST_CASE("phi_exhaustive matches the partition oracle") {
    std::vector<FiniteGroup> groups{FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::cyclic(5),
                                    FiniteGroup::cyclic(6), testing::klein(), testing::symmetric_group(3),
                                    FiniteGroup::cyclic(7)};
    for (const auto& g : groups) {
        for (std::size_t n = 1; n <= 3 && n <= g.order(); ++n) {
            CAPTURE(g.name());
            CAPTURE(n);
            const std::size_t expect = phi_oracle(g, n);
            auto pruned = phi_exhaustive(g, n);
            auto full = phi_exhaustive(g, n, {.prune = false});
            CHECK(pruned.phi_value == expect);
            CHECK(full.phi_value == expect);
            CHECK(full.partitions_examined == stirling2(g.order(), n));
            CHECK(full.partitions_examined == oracle::all_partitions(g.order(), n).size());
            CHECK(pruned.partitions_examined <= full.partitions_examined);
            CHECK(min_cell_cov(pruned.argmax) == pruned.phi_value);
            CHECK(pruned.argmax.cells == full.argmax.cells);
        }
    }
}

TEST_CASE("phi_exhaustive is independent of the thread count") {
    auto g = FiniteGroup::cyclic(8);
    auto one = phi_report_to_json(phi_exhaustive(g, 3, {.threads = 1})).dump();
    auto four = phi_report_to_json(phi_exhaustive(g, 3, {.threads = 4})).dump();
    auto eight = phi_report_to_json(phi_exhaustive(g, 3, {.threads = 8})).dump();
    CHECK(one == four);
    CHECK(one == eight);
}

TEST_CASE("budget exhaustion returns the best so far") {
    auto r = phi_exhaustive(FiniteGroup::cyclic(9), 3, {.budget = 50});
    CHECK_FALSE(r.complete);
    CHECK(r.phi_value <= phi_exhaustive(FiniteGroup::cyclic(9), 3).phi_value);
}

TEST_CASE("random search") {
    auto z4 = FiniteGroup::cyclic(4);
    for (std::uint64_t seed : {1u, 2u, 3u, 77u}) CHECK(phi_random_search(z4, 2, 50, seed).phi_value == 2);
    auto zero = phi_random_search(z4, 2, 0, 5);
    CHECK(zero.partitions_examined == 1);
    CHECK(min_cell_cov(zero.argmax) == zero.phi_value);

    auto g = FiniteGroup::cyclic(9);
    auto a = phi_report_to_json(phi_random_search(g, 3, 300, 42));
    auto b = phi_report_to_json(phi_random_search(g, 3, 300, 42));
    CHECK(a == b);
    CHECK(a["mode"] == "randomized");
    CHECK(a["phi_value"].get<std::size_t>() <= phi_exhaustive(g, 3).phi_value);
    for (const auto& grp : {FiniteGroup::cyclic(6), testing::symmetric_group(3), FiniteGroup::power(2, 3)})
        for (std::size_t n = 1; n <= 3; ++n)
            CHECK(phi_random_search(grp, n, 200, 9).phi_value <= phi_exhaustive(grp, n).phi_value);
}

TEST_CASE("support cells of Z_2^m all have difference-set cover number at least 2") {
    for (std::size_t m = 4; m <= 8; ++m) {
        auto part = support_partition(FiniteGroup::power(2, m));
        for (const auto& cell : part.cells) CHECK(cov_exact(difference_set(cell)).value >= 2);
    }
}
