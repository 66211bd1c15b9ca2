#include <doctest.h>

#include <numeric>
#include <random>

#include "covlab/constructions.hpp"
#include "covlab/errors.hpp"
#include "groups.hpp"
#include "oracles.hpp"

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

/// Bit string read left to right as coordinates 0, 1, ...
Elem word(const FiniteGroup& g, const std::string& bits) {
    std::vector<Elem> c;
    for (char ch : bits) c.push_back(static_cast<Elem>(ch - '0'));
    return g.from_coords(c);
}

std::vector<std::uint32_t> offsets(const SupportProfile& p) {
    std::vector<std::uint32_t> out;
    for (auto a : p.support) out.push_back(a.n);
    return out;
}

}  // namespace

TEST_CASE("support examples") {
    auto z2_4 = FiniteGroup::power(2, 4);
    Group g = z2_4;
    auto p = support(g, Element{word(z2_4, "0110")});
    CHECK(offsets(p) == std::vector<std::uint32_t>{1, 2});
    CHECK(p.size() == 2);
    CHECK(support(g, Element{z2_4.identity()}).size() == 0);
    auto z3_2 = FiniteGroup::power(3, 2);
    CHECK(support(z3_2, Element{z3_2.from_coords(std::vector<Elem>{1, 2})}).size() == 2);
    CHECK(kind_of([] { support(testing::klein(), Element{Elem{1}}); }) == ErrorKind::NotProductBacked);

    OrdinalSum s(FiniteGroup::cyclic(2), 2);
    auto x = s.op(s.unit({0, 2}, 1), s.unit({1, 0}, 1));
    auto sp = support(s, x);
    CHECK(sp.support == std::vector<Ordinal>{{0, 2}, {1, 0}});
}

TEST_CASE("support partition cell sizes") {
    auto z2_4 = FiniteGroup::power(2, 4);
    auto part = support_partition(z2_4);
    REQUIRE(part.cells.size() == 5);
    std::vector<std::size_t> sizes;
    for (const auto& c : part.cells) sizes.push_back(c.size());
    CHECK(sizes == std::vector<std::size_t>{1, 4, 6, 4, 1});
    CHECK(part.cells[0].elements() == std::vector<Elem>{z2_4.identity()});
    CHECK(support_cell_size(FiniteGroup::power(3, 2), 1) == 4);
    CHECK(support_partition(FiniteGroup::power(3, 2)).cells[1].size() == 4);
    CHECK(kind_of([] { support_partition(testing::klein()); }) == ErrorKind::NotProductBacked);

    auto mixed = FiniteGroup::product({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4)});
    auto mp = support_partition(mixed);
    std::size_t total = 0;
    for (std::size_t n = 0; n < mp.cells.size(); ++n) {
        CHECK(mp.cells[n].size() == support_cell_size(mixed, n));
        total += mp.cells[n].size();
    }
    CHECK(total == mixed.order());

    OrdinalSum s(FiniteGroup::cyclic(2), 1);
    Region r;
    for (std::uint32_t i = 0; i < 9; ++i) r.positions.emplace_back(0, i);
    for (std::size_t n = 0; n <= 9; ++n) CHECK(enumerate_support_cell(s, n, r).size() == oracle::binomial(9, n));
}

TEST_CASE("difference sets of A_n stay within support 2n") {
    for (auto [p, m] : {std::pair{2, 6}, std::pair{3, 4}}) {
        auto g = FiniteGroup::power(p, m);
        auto part = support_partition(g);
        for (std::size_t n = 0; n < part.cells.size(); ++n) {
            std::size_t worst = 0;
            for (Elem x : difference_set(part.cells[n]).elements()) worst = std::max(worst, support_size(g, x));
            CHECK(worst <= part.difference_support_bound(n));
        }
    }
}

TEST_CASE("support witness examples") {
    auto z2_8 = FiniteGroup::power(2, 8);
    std::vector<Element> k{Element{word(z2_8, "11000000")}};
    auto h = support_witness(z2_8, k, 1);
    CHECK(std::get<Elem>(h) == word(z2_8, "00111000"));
    auto report = verify_support_witness(z2_8, k, 1, h);
    CHECK(report.pass);
    CHECK(report.checked == support_cell_size(z2_8, 1));

    auto h0 = support_witness(z2_8, {}, 0);
    CHECK(std::get<Elem>(h0) == word(z2_8, "10000000"));
    CHECK(verify_support_witness(z2_8, std::vector<Element>{Element{Elem{0}}}, 0, h0).pass);

    auto z2_4 = FiniteGroup::power(2, 4);
    std::vector<Element> k4{Element{word(z2_4, "1100")}};
    try {
        support_witness(z2_4, k4, 1);
        FAIL("expected InsufficientFactors");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InsufficientFactors);
        CHECK(std::string(e.what()).find("at least 5") != std::string::npos);
    }
}

TEST_CASE("verify_support_witness negative controls") {
    auto z2_8 = FiniteGroup::power(2, 8);
    Group g = z2_8;
    Element kk{word(z2_8, "11010000")};
    std::vector<Element> k{kk};
    auto fail = verify_support_witness(g, k, 1, kk);
    CHECK_FALSE(fail.pass);
    REQUIRE(fail.b.has_value());
    CHECK(g.op(g.op(*fail.k, *fail.a), g.invert(*fail.b)) == kk);

    // In Z_3^2, A_2 A_2^-1 is the whole group, so any h fails once e is in K.
    auto z3_2 = FiniteGroup::power(3, 2);
    CHECK(difference_set(support_partition(z3_2).cells[2]).size() == 9);
    std::vector<Element> ke{Element{z3_2.identity()}};
    for (Elem h = 0; h < z3_2.order(); ++h) CHECK_FALSE(verify_support_witness(z3_2, ke, 2, Element{h}).pass);
}

TEST_CASE("support witnesses pass on random instances") {
    std::mt19937_64 rng(41);
    auto z2_10 = FiniteGroup::power(2, 10);
    int ran = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng() % 3;
        const std::size_t used_max = 10 - (2 * n + 1);
        std::vector<std::uint32_t> positions(10);
        std::iota(positions.begin(), positions.end(), 0u);
        std::shuffle(positions.begin(), positions.end(), rng);
        positions.resize(1 + rng() % used_max);
        std::vector<Element> k;
        for (std::size_t i = 0, sz = rng() % 9; i < sz; ++i) {
            std::vector<Elem> c(10, 0);
            for (auto p : positions) c[p] = static_cast<Elem>(rng() % 2);
            k.emplace_back(z2_10.from_coords(c));
        }
        auto h = support_witness(z2_10, k, n);
        CHECK(support_size(z2_10, std::get<Elem>(h)) == 2 * n + 1);
        CHECK(verify_support_witness(z2_10, k, n, h).pass);
        ++ran;
    }
    CHECK(ran == 200);
}

TEST_CASE("support witness on ordinal sums") {
    OrdinalSum s(FiniteGroup::cyclic(3), 2);
    std::vector<Element> k{s.op(s.unit({0, 0}, 1), s.unit({0, 2}, 2))};
    auto h = support_witness(s, k, 1);
    CHECK(std::get<SparseElement>(h) == s.op(s.op(s.unit({0, 1}, 1), s.unit({0, 3}, 1)), s.unit({0, 4}, 1)));
    Region r = Region::block_prefix(s, 6);
    CHECK(verify_support_witness(s, k, 1, h, r).pass);
    CHECK(kind_of([&] { verify_support_witness(s, k, 1, h); }) == ErrorKind::UnboundedEnumeration);

    OrdinalSum tiny(FiniteGroup::cyclic(2), 1, Ordinal{0, 4});
    std::vector<Element> kt{tiny.unit({0, 1}, 1)};
    CHECK(kind_of([&] { support_witness(tiny, kt, 2); }) == ErrorKind::InsufficientFactors);
}

TEST_CASE("invariant factors of small abelian groups") {
    CHECK(abelian_invariant_factors(testing::as_table(FiniteGroup::cyclic(6))).factors ==
          std::vector<std::size_t>{6});
    CHECK(abelian_invariant_factors(
              testing::as_table(FiniteGroup::product({FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)})))
              .factors == std::vector<std::size_t>{2, 4});
    CHECK(abelian_invariant_factors(testing::klein()).factors == std::vector<std::size_t>{2, 2});
    CHECK(abelian_invariant_factors(FiniteGroup()).factors.empty());
    CHECK(abelian_invariant_factors(FiniteGroup::product({FiniteGroup::cyclic(4), FiniteGroup::cyclic(6)})).factors ==
          std::vector<std::size_t>{2, 12});

    try {
        abelian_invariant_factors(testing::symmetric_group(3));
        FAIL("expected NotAbelian");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotAbelian);
    }
    auto pair = noncommuting_pair(testing::quaternion());
    REQUIRE(pair.has_value());
    auto q = testing::quaternion();
    CHECK(q.op(pair->first, pair->second) != q.op(pair->second, pair->first));
}

TEST_CASE("invariant-factor relabeling is an isomorphism") {
    std::vector<FiniteGroup> groups{
        testing::as_table(FiniteGroup::product({FiniteGroup::cyclic(2), FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)})),
        testing::as_table(FiniteGroup::product({FiniteGroup::cyclic(3), FiniteGroup::cyclic(9)})),
        testing::as_table(FiniteGroup::product({FiniteGroup::cyclic(4), FiniteGroup::cyclic(4), FiniteGroup::cyclic(2)})),
        testing::as_table(FiniteGroup::product({FiniteGroup::cyclic(6), FiniteGroup::cyclic(10)})),
        testing::as_table(FiniteGroup::cyclic(64)),
        FiniteGroup::power(2, 6),
    };
    for (const auto& g : groups) {
        CAPTURE(g.name());
        auto inv = abelian_invariant_factors(g);
        for (std::size_t i = 1; i < inv.factors.size(); ++i) CHECK(inv.factors[i] % inv.factors[i - 1] == 0);
        REQUIRE(inv.product.order() == g.order());
        for (Elem x = 0; x < g.order(); ++x) {
            CHECK(inv.from_product[inv.to_product[x]] == x);
            for (Elem y = 0; y < g.order(); ++y)
                if (inv.to_product[g.op(x, y)] != inv.product.op(inv.to_product[x], inv.to_product[y]))
                    FAIL("relabeling is not a homomorphism");
        }
        CHECK(oracle::order_census(g) == oracle::order_census(inv.product));
    }
}

TEST_CASE("order census distinguishes the abelian groups of order 8") {
    auto z8 = oracle::order_census(FiniteGroup::cyclic(8));
    auto z2z4 = oracle::order_census(FiniteGroup::product({FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)}));
    auto z2_3 = oracle::order_census(FiniteGroup::power(2, 3));
    CHECK(z8 != z2z4);
    CHECK(z2z4 != z2_3);
    CHECK(abelian_invariant_factors(testing::as_table(FiniteGroup::cyclic(8))).factors == std::vector<std::size_t>{8});
    CHECK(abelian_invariant_factors(testing::as_table(FiniteGroup::power(2, 3))).factors ==
          std::vector<std::size_t>{2, 2, 2});
}
