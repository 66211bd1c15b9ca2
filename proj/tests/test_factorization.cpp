#include <doctest.h>

#include <map>
#include <random>

#include "covlab/chain.hpp"
#include "covlab/errors.hpp"
#include "covlab/factorization.hpp"
#include "groups.hpp"

using namespace covlab;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::IoFailure;
}

Chain z8_chain() { return Chain::from_tower(FiniteGroup::cyclic(8), {{}, {4}, {2}, {1}}); }

SparseElement sparse(const OrdinalSum& s, std::initializer_list<Ordinal> support) {
    SparseElement x;
    for (auto p : support) x = s.op(x, s.unit(p, 1));
    return x;
}

/// Maximal towers of every corpus group built from its subgroup lattice.
std::vector<Chain> corpus_towers() {
    std::vector<Chain> out;
    for (auto g : testing::small_corpus()) {
        if (g.order() == 1) continue;
        auto subs = all_subgroups(g);
        std::vector<Subgroup> tower{subs.front()};
        for (const auto& h : subs)
            if (tower.back().is_subset_of(h) && !(tower.back() == h)) tower.push_back(h);
        if (tower.back() == whole_group(g)) out.push_back(Chain::from_subgroups(tower));
    }
    return out;
}

SparseElement random_bounded(const OrdinalSum& s, const Region& r, std::mt19937_64& rng) {
    SparseElement x;
    const auto& h = s.coordinate();
    for (auto p : r.positions) {
        Elem v = static_cast<Elem>(rng() % h.order());
        if (v != h.identity()) x.entries.emplace_back(p, v);
    }
    return x;
}

}  // namespace

TEST_CASE("factorize on the Z_8 tower") {
    auto c = z8_chain();
    auto f = factorize(Element{Elem{7}}, c);
    REQUIRE(f.length() == 3);
    CHECK(f.factors[0].ordinal == Ordinal{0, 0});
    CHECK(std::get<Elem>(f.factors[0].rep) == 4);
    CHECK(f.factors[1].ordinal == Ordinal{0, 1});
    CHECK(std::get<Elem>(f.factors[1].rep) == 2);
    CHECK(f.factors[2].ordinal == Ordinal{0, 2});
    CHECK(std::get<Elem>(f.factors[2].rep) == 1);
    CHECK(chi(Element{Elem{7}}, c) == ChiLabel{0, 1, 2});
    CHECK(factorize(Element{Elem{0}}, c).length() == 0);
    CHECK(chi(Element{Elem{0}}, c).empty());
    CHECK(factorization_to_json(f, c.group()).dump() ==
          R"([{"ordinal":[0,0],"rep":4},{"ordinal":[0,1],"rep":2},{"ordinal":[0,2],"rep":1}])");
}

TEST_CASE("factorize on an ordinal sum") {
    OrdinalSum s(FiniteGroup::cyclic(2), 2);
    auto c = Chain::over_sum(s);
    auto g = sparse(s, {{0, 3}, {1, 1}});
    auto f = factorize(g, c);
    REQUIRE(f.length() == 2);
    CHECK(f.factors[0].ordinal == Ordinal{0, 3});
    CHECK(std::get<SparseElement>(f.factors[0].rep) == s.unit({0, 3}, 1));
    CHECK(f.factors[1].ordinal == Ordinal{1, 1});
    CHECK(f.max() == Ordinal{1, 1});
    CHECK(chi(g, c) == ChiLabel{3, 1});
}

TEST_CASE("round trip and decreasing gammas on every corpus tower") {
    for (const auto& c : corpus_towers()) {
        const auto& g = c.group().finite();
        CAPTURE(g.name());
        for (Elem x = 0; x < g.order(); ++x) {
            auto f = factorize(Element{x}, c);
            CHECK(std::get<Elem>(multiply_out(f, c.group())) == x);
            auto gam = f.gammas();
            for (std::size_t i = 1; i < gam.size(); ++i) CHECK(gam[i] < gam[i - 1]);
            for (const auto& factor : f.factors) {
                auto reps = c.reps(factor.ordinal);
                CHECK(std::find(reps.begin(), reps.end(), factor.rep) != reps.end());
            }
        }
    }
}

TEST_CASE("products of one optional rep per stratum hit each element once") {
    for (const auto& c : corpus_towers()) {
        const auto& g = c.group().finite();
        if (g.order() > 64) continue;
        CAPTURE(g.name());
        std::map<Elem, int> hits;
        // Accumulate x_{a_s} ... x_{a_1} with a_s < ... < a_1, i.e. multiply
        // on the right by strata in increasing label order.
        std::vector<Elem> partial{g.identity()};
        for (auto label : c.labels()) {
            std::vector<Elem> next = partial;
            for (Elem p : partial)
                for (const auto& x : c.reps(label)) next.push_back(g.op(p, std::get<Elem>(x)));
            partial = std::move(next);
        }
        for (Elem p : partial) ++hits[p];
        CHECK(hits.size() == g.order());
        for (auto [x, n] : hits) CHECK(n == 1);
    }
}

TEST_CASE("sampled round trip on ordinal sums") {
    std::mt19937_64 rng(11);
    for (auto order : {2u, 3u}) {
        OrdinalSum s(FiniteGroup::cyclic(order), 3);
        auto c = Chain::over_sum(s);
        auto region = Region::block_prefix(s, 12);
        for (int i = 0; i < 10000; ++i) {
            auto x = random_bounded(s, region, rng);
            auto f = factorize(x, c);
            CHECK(std::get<SparseElement>(multiply_out(f, c.group())) == x);
            CHECK(f.length() == x.entries.size());
        }
    }
}

TEST_CASE("cells partition bounded regions") {
    OrdinalSum s(FiniteGroup::cyclic(2), 2);
    auto c = Chain::over_sum(s);
    Region below_omega;
    for (std::uint32_t n = 0; n < 6; ++n) below_omega.positions.emplace_back(0, n);
    auto cell0 = enumerate_cell({0}, c, below_omega);
    REQUIRE(cell0.size() == 1);
    CHECK(std::get<SparseElement>(cell0[0]) == s.unit({0, 0}, 1));
    auto empty_cell = enumerate_cell({}, c, below_omega);
    REQUIRE(empty_cell.size() == 1);
    CHECK(std::get<SparseElement>(empty_cell[0]).is_identity());
    CHECK(kind_of([&] { enumerate_cell({1}, c, std::nullopt); }) == ErrorKind::UnboundedEnumeration);

    for (auto order : {2u, 3u}) {
        OrdinalSum t(FiniteGroup::cyclic(order), 2);
        auto ct = Chain::over_sum(t);
        auto region = Region::block_prefix(t, order == 2 ? 5 : 3);
        std::map<ChiLabel, std::set<SparseElement>> by_chi;
        for (const auto& x : enumerate_region(ct, region)) by_chi[chi(x, ct)].insert(std::get<SparseElement>(x));
        std::uint64_t total = 0;
        for (const auto& [label, members] : by_chi) {
            auto cell = enumerate_cell(label, ct, region);
            std::set<SparseElement> got;
            for (const auto& x : cell) got.insert(std::get<SparseElement>(x));
            CHECK(got.size() == cell.size());
            CHECK(got == members);
            CHECK(cell_size(label, ct, region) == members.size());
            total += members.size();
        }
        CHECK(total == enumerate_region(ct, region).size());
    }

    auto z8 = z8_chain();
    std::set<Elem> seen;
    for (Elem x = 0; x < 8; ++x)
        for (const auto& y : enumerate_cell(chi(Element{x}, z8), z8)) seen.insert(std::get<Elem>(y));
    CHECK(seen.size() == 8);
}

TEST_CASE("separation witness examples") {
    OrdinalSum s(FiniteGroup::cyclic(2), 2);
    auto c = Chain::over_sum(s);
    std::vector<Element> k{sparse(s, {{0, 3}, {0, 5}})};
    auto h = separation_witness(k, {3, 1}, c);
    CHECK(std::get<SparseElement>(h) == s.unit({0, 6}, 1));

    auto h0 = separation_witness({}, {0, 1}, c);
    CHECK(std::get<SparseElement>(h0) == s.unit({0, 2}, 1));

    OrdinalSum short_sum(FiniteGroup::cyclic(2), 1, Ordinal{0, 7});
    auto cs = Chain::over_sum(short_sum);
    std::vector<Element> ks{sparse(short_sum, {{0, 3}, {0, 5}})};
    CHECK(std::get<SparseElement>(separation_witness(ks, {3, 1}, cs)) == short_sum.unit({0, 6}, 1));
    CHECK(kind_of([&] { separation_witness(ks, {3, 1, 6}, cs); }) == ErrorKind::NoSuitableLabel);
}

TEST_CASE("verify_separation") {
    OrdinalSum s(FiniteGroup::cyclic(2), 2);
    auto c = Chain::over_sum(s);
    auto region = Region::block_prefix(s, 5);
    std::vector<Element> k{sparse(s, {{0, 3}, {0, 4}})};
    ChiLabel label{3, 1};
    auto h = separation_witness(k, label, c);
    auto report = verify_separation(k, label, h, c, region);
    CHECK(report.pass);
    CHECK(report.cell_size > 0);

    // Negative control: h = k x x2^-1 lies in K H_s H_s^-1.
    label = {1};
    auto cell = enumerate_cell(label, c, region);
    REQUIRE(cell.size() >= 2);
    const Group& g = c.group();
    Element bad = g.op(g.op(k[0], cell[0]), g.invert(cell[1]));
    auto fail = verify_separation(k, label, bad, c, region);
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.x.has_value());
    CHECK(g.op(*fail.k, *fail.x) == g.op(bad, *fail.x2));

    // K = {e}, s = (): disjoint iff h != e.
    std::vector<Element> ke{g.identity()};
    CHECK(verify_separation(ke, {}, s.unit({0, 2}, 1), c, region).pass);
    CHECK_FALSE(verify_separation(ke, {}, g.identity(), c, region).pass);
}

TEST_CASE("separation holds on random instances") {
    std::mt19937_64 rng(2024);
    for (auto order : {2u, 3u}) {
        OrdinalSum s(FiniteGroup::cyclic(order), 3);
        auto c = Chain::over_sum(s);
        auto region = Region::block_prefix(s, order == 2 ? 4 : 3);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<Element> k;
            for (int i = 0, n = 1 + static_cast<int>(rng() % 3); i < n; ++i) k.emplace_back(random_bounded(s, region, rng));
            ChiLabel label = chi(random_bounded(s, region, rng), c);
            Element h;
            try {
                h = separation_witness(k, label, c);
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::NoSuitableLabel);
                continue;
            }
            // h may sit outside the region; extend the region by its position.
            Region r = region;
            r.positions.push_back(std::get<SparseElement>(h).top());
            CHECK(verify_separation(k, label, h, c, r).pass);
        }
    }
}
