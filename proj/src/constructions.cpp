#include "covlab/constructions.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

void require_product(const FiniteGroup& g) {
    if (g.kind() == GroupKind::cayley)
        throw Error(ErrorKind::NotProductBacked, g.name() + " is a Cayley table; it has no coordinates");
}

// Factor groups of a product-backed finite group (a cyclic group is its own
// single factor).
std::vector<FiniteGroup> coordinate_groups(const FiniteGroup& g) {
    require_product(g);
    if (g.kind() == GroupKind::product) return g.factors();
    return {g};
}

Elem coordinate(const FiniteGroup& g, Elem x, std::size_t i) { return g.kind() == GroupKind::product ? g.coord(x, i) : x; }

Elem smallest_nonidentity(const FiniteGroup& h) { return h.identity() == 0 ? 1 : 0; }

std::string needed_factors(std::size_t used, std::size_t n, std::size_t have) {
    return "a witness for n=" + std::to_string(n) + " needs at least " + std::to_string(used + 2 * n + 1) +
           " factors (" + std::to_string(2 * n + 1) + " outside the " + std::to_string(used) +
           " used by K); only " + std::to_string(have) + " are free";
}

// Finite abelian group given by an operation on indices 0..n-1.
struct AbelianView {
    std::size_t n;
    Elem zero;
    std::function<Elem(Elem, Elem)> op;

    std::size_t order_of(Elem x) const {
        std::size_t k = 1;
        for (Elem y = x; y != zero; y = op(y, x)) ++k;
        return k;
    }
};

struct CyclicPiece {
    Elem generator;
    std::size_t order;
};

// Pieces in decreasing order; each order divides the previous one.
std::vector<CyclicPiece> decompose(const AbelianView& v) {
    if (v.n == 1) return {};
    Elem g = v.zero;
    std::size_t best = 1;
    for (Elem x = 0; x < v.n; ++x) {
        std::size_t k = v.order_of(x);
        if (k > best) {
            best = k;
            g = x;
        }
    }
    std::vector<Elem> cyclic{v.zero};
    for (Elem y = g; y != v.zero; y = v.op(y, g)) cyclic.push_back(y);

    std::vector<Elem> coset_of(v.n, kNone);
    std::vector<Elem> reps;
    for (Elem x = 0; x < v.n; ++x) {
        if (coset_of[x] != kNone) continue;
        for (Elem c : cyclic) coset_of[v.op(x, c)] = static_cast<Elem>(reps.size());
        reps.push_back(x);
    }
    AbelianView quotient{reps.size(), coset_of[v.zero],
                         [&](Elem a, Elem b) { return coset_of[v.op(reps[a], reps[b])]; }};
    std::vector<CyclicPiece> out{{g, best}};
    for (const auto& piece : decompose(quotient)) {
        // Because g has maximal order, every coset of order m in the quotient
        // holds an element of order m; take the smallest.
        Elem lift = kNone;
        for (Elem c : cyclic) {
            Elem y = v.op(reps[piece.generator], c);
            if (y < lift && v.order_of(y) == piece.order) lift = y;
        }
        if (lift == kNone) throw Error(ErrorKind::NotAbelian, "no lift of matching order; the group is not abelian");
        out.push_back({lift, piece.order});
    }
    return out;
}

}  // namespace

std::size_t coordinate_count(const FiniteGroup& g) { return coordinate_groups(g).size(); }

std::size_t support_size(const FiniteGroup& g, Elem x) {
    if (g.kind() != GroupKind::product) return x == g.identity() ? 0 : 1;
    std::size_t s = 0;
    const auto& fs = g.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) s += g.coord(x, i) != fs[i].identity();
    return s;
}

SupportProfile support(const Group& g, const Element& x) {
    g.check(x);
    SupportProfile p;
    if (!g.is_finite_backend()) {
        for (const auto& [pos, v] : std::get<SparseElement>(x).entries) p.support.push_back(pos);
        return p;
    }
    const auto& fg = g.finite();
    const auto fs = coordinate_groups(fg);
    const Elem e = std::get<Elem>(x);
    for (std::size_t i = 0; i < fs.size(); ++i)
        if (coordinate(fg, e, i) != fs[i].identity()) p.support.emplace_back(0, static_cast<std::uint32_t>(i));
    return p;
}

std::size_t SupportPartition::difference_support_bound(std::size_t n) const noexcept {
    return std::min(2 * n, cells.size() - 1);
}

SupportPartition support_partition(const FiniteGroup& g) {
    const std::size_t c = coordinate_count(g);
    std::vector<Bitset> bits(c + 1, Bitset(g.order()));
    for (Elem x = 0; x < g.order(); ++x) bits[support_size(g, x)].set(x);
    SupportPartition p{g, {}};
    for (auto& b : bits) p.cells.emplace_back(g, std::move(b));
    return p;
}

std::uint64_t support_cell_size(const FiniteGroup& g, std::size_t n) {
    // e[j] after processing factors 0..i = number of ways to pick j of them.
    std::vector<std::uint64_t> e(n + 1, 0);
    e[0] = 1;
    for (const auto& h : coordinate_groups(g))
        for (std::size_t j = n; j > 0; --j) e[j] += e[j - 1] * (h.order() - 1);
    return e[n];
}

std::vector<SparseElement> enumerate_support_cell(const OrdinalSum& g, std::size_t n, const Region& region) {
    std::vector<Ordinal> pos = region.positions;
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    for (auto p : pos)
        if (!g.valid_position(p))
            throw Error(ErrorKind::ConfigInvalid, "region position " + p.to_string() + " outside " + g.name());
    const auto& h = g.coordinate();
    std::vector<Elem> values;
    for (Elem c = 0; c < h.order(); ++c)
        if (c != h.identity()) values.push_back(c);

    std::vector<SparseElement> out;
    if (n > pos.size() || (n > 0 && values.empty())) return out;
    std::vector<std::size_t> chosen(n);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = i;
    while (true) {
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            SparseElement x;
            for (std::size_t i = 0; i < n; ++i) x.entries.emplace_back(pos[chosen[i]], values[idx[i]]);
            out.push_back(std::move(x));
            std::size_t i = n;
            while (i > 0 && ++idx[i - 1] == values.size()) idx[--i] = 0;
            if (i == 0) break;
        }
        std::size_t i = n;
        while (i > 0 && chosen[i - 1] == pos.size() - n + i - 1) --i;
        if (i == 0) break;
        ++chosen[i - 1];
        for (std::size_t j = i; j < n; ++j) chosen[j] = chosen[j - 1] + 1;
    }
    return out;
}

Element support_witness(const Group& g, std::span<const Element> k, std::size_t n) {
    std::set<Ordinal> used;
    for (const auto& x : k)
        for (auto p : support(g, x).support) used.insert(p);
    const std::size_t need = 2 * n + 1;

    if (g.is_finite_backend()) {
        const auto& fg = g.finite();
        const auto fs = coordinate_groups(fg);
        std::vector<Elem> c;
        for (const auto& h : fs) c.push_back(h.identity());
        std::size_t placed = 0;
        for (std::size_t i = 0; i < fs.size() && placed < need; ++i) {
            if (used.contains(Ordinal{0, static_cast<std::uint32_t>(i)}) || fs[i].order() < 2) continue;
            c[i] = smallest_nonidentity(fs[i]);
            ++placed;
        }
        if (placed < need) {
            std::size_t have = 0;
            for (std::size_t i = 0; i < fs.size(); ++i)
                have += fs[i].order() > 1 && !used.contains(Ordinal{0, static_cast<std::uint32_t>(i)});
            throw Error(ErrorKind::InsufficientFactors, needed_factors(used.size(), n, have));
        }
        if (fg.kind() != GroupKind::product) return Element{c[0]};
        return Element{fg.from_coords(c)};
    }

    const auto& sum = g.ordinal_sum();
    const Elem v = smallest_nonidentity(sum.coordinate());
    if (sum.coordinate().order() < 2)
        throw Error(ErrorKind::InsufficientFactors, "the coordinate group is trivial");
    SparseElement h;
    for (Ordinal p{0, 0}; h.entries.size() < need && sum.valid_position(p);) {
        if (!used.contains(p)) h.entries.emplace_back(p, v);
        // Step to the next position: within the block, or to the next block
        // once a finite bound is reached.
        p = p.successor();
        if (!sum.valid_position(p) && p.q + 1 < sum.blocks()) p = Ordinal::omega_times(p.q + 1);
    }
    if (h.entries.size() < need) {
        const std::size_t have = sum.is_finite() ? sum.bound().n - used.size() : h.entries.size();
        throw Error(ErrorKind::InsufficientFactors, needed_factors(used.size(), n, have));
    }
    return Element{std::move(h)};
}

WitnessReport verify_support_witness(const Group& g, std::span<const Element> k, std::size_t n, const Element& h,
                                     const std::optional<Region>& region) {
    g.check(h);
    for (const auto& x : k) g.check(x);
    std::vector<Element> cell;
    if (g.is_finite_backend()) {
        const auto& fg = g.finite();
        require_product(fg);
        for (Elem x = 0; x < fg.order(); ++x)
            if (support_size(fg, x) == n) cell.emplace_back(x);
    } else {
        const auto& sum = g.ordinal_sum();
        Region r;
        if (region) r = *region;
        else if (sum.is_finite()) r = Region::all_positions(sum);
        else throw Error(ErrorKind::UnboundedEnumeration, "A_n in " + sum.name() + " needs a bounded region");
        for (auto& x : enumerate_support_cell(sum, n, r)) cell.emplace_back(std::move(x));
    }
    auto size_of = [&](const Element& x) { return support(g, x).size(); };

    WitnessReport report;
    const Element h_inv = g.invert(h);
    for (const auto& kk : k) {
        const Element left = g.op(h_inv, kk);
        for (const auto& a : cell) {
            ++report.checked;
            Element b = g.op(left, a);
            if (size_of(b) == n) {
                report.pass = false;
                report.k = kk;
                report.a = a;
                report.b = std::move(b);
                return report;
            }
        }
    }
    return report;
}

std::optional<std::pair<Elem, Elem>> noncommuting_pair(const FiniteGroup& g) {
    if (g.is_abelian()) return std::nullopt;
    for (Elem a = 0; a < g.order(); ++a)
        for (Elem b = a + 1; b < g.order(); ++b)
            if (g.op(a, b) != g.op(b, a)) return std::pair{a, b};
    return std::nullopt;
}

InvariantFactors abelian_invariant_factors(const FiniteGroup& g) {
    if (auto pair = noncommuting_pair(g))
        throw Error(ErrorKind::NotAbelian, g.name() + " is not abelian: " + std::to_string(pair->first) + "*" +
                                               std::to_string(pair->second) + " != " + std::to_string(pair->second) +
                                               "*" + std::to_string(pair->first));
    AbelianView view{g.order(), g.identity(), [&](Elem a, Elem b) { return g.op(a, b); }};
    auto pieces = decompose(view);
    std::reverse(pieces.begin(), pieces.end());

    InvariantFactors out;
    std::vector<FiniteGroup> cyclics;
    for (const auto& p : pieces) {
        out.factors.push_back(p.order);
        cyclics.push_back(FiniteGroup::cyclic(p.order));
    }
    out.product = cyclics.empty() ? FiniteGroup() : FiniteGroup::product(std::move(cyclics));
    out.from_product.resize(out.product.order());
    out.to_product.assign(g.order(), kNone);
    for (Elem p = 0; p < out.product.order(); ++p) {
        Elem acc = g.identity();
        for (std::size_t i = 0; i < pieces.size(); ++i)
            acc = g.op(acc, g.pow(pieces[i].generator, out.product.coord(p, i)));
        out.from_product[p] = acc;
        if (out.to_product[acc] != kNone)
            throw Error(ErrorKind::NotAbelian, "cyclic factors do not form a direct decomposition");
        out.to_product[acc] = p;
    }
    return out;
}

}  // namespace covlab
