#include "covlab/factorization.hpp"

#include <algorithm>
#include <unordered_map>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

bool is_identity(const Group& g, const Element& x) {
    if (g.is_finite_backend()) return std::get<Elem>(x) == g.finite().identity();
    return std::get<SparseElement>(x).is_identity();
}

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept {
        if (auto* x = std::get_if<Elem>(&e)) return std::hash<Elem>{}(*x);
        return SparseElementHash{}(std::get<SparseElement>(e));
    }
};

const OrdinalSum& sum_of(const Chain& chain) { return chain.group().ordinal_sum(); }

Region resolve_region(const Chain& chain, const std::optional<Region>& region) {
    const auto& sum = sum_of(chain);
    if (region) {
        Region r = *region;
        std::sort(r.positions.begin(), r.positions.end());
        r.positions.erase(std::unique(r.positions.begin(), r.positions.end()), r.positions.end());
        for (auto p : r.positions)
            if (!sum.valid_position(p))
                throw Error(ErrorKind::ConfigInvalid, "region position " + p.to_string() + " outside " + sum.name());
        return r;
    }
    if (sum.is_finite()) return Region::all_positions(sum);
    throw Error(ErrorKind::UnboundedEnumeration, "enumerating " + sum.name() + " needs a bounded region");
}

}  // namespace

std::optional<Ordinal> Factorization::max() const {
    if (factors.empty()) return std::nullopt;
    return factors.back().ordinal;
}

std::vector<Ordinal> Factorization::gammas() const {
    std::vector<Ordinal> out;
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) out.push_back(it->ordinal);
    return out;
}

Factorization factorize(const Element& g, const Chain& chain) {
    const Group& grp = chain.group();
    grp.check(g);
    Factorization f;
    Element cur = g;
    // Each peel lands strictly lower in the chain, and ordinals are well
    // ordered, so this terminates; the cap only guards against a broken chain.
    std::size_t guard = grp.is_finite_backend() ? grp.finite().order() : std::get<SparseElement>(g).entries.size() + 1;
    while (!is_identity(grp, cur)) {
        if (guard-- == 0) throw Error(ErrorKind::ChainDoesNotCover, "factorization did not terminate");
        StratumLocation loc = chain.stratum_of(cur);
        Element x = chain.coset_rep(cur, loc.predecessor);
        f.factors.push_back({loc.predecessor, x});
        cur = grp.op(cur, grp.invert(x));
    }
    std::reverse(f.factors.begin(), f.factors.end());
    return f;
}

Element multiply_out(const Factorization& f, const Group& g) {
    Element acc = g.identity();
    for (const auto& factor : f.factors) acc = g.op(acc, factor.rep);
    return acc;
}

ChiLabel chi(const Element& g, const Chain& chain) {
    ChiLabel out;
    for (const auto& factor : factorize(g, chain).factors) out.push_back(f_offset(factor.ordinal));
    return out;
}

Region Region::block_prefix(const OrdinalSum& g, std::uint32_t offsets_per_block) {
    Region r;
    for (std::uint32_t q = 0; q < g.blocks(); ++q)
        for (std::uint32_t n = 0; n < offsets_per_block; ++n)
            if (g.valid_position({q, n})) r.positions.emplace_back(q, n);
    return r;
}

Region Region::all_positions(const OrdinalSum& g) {
    if (!g.is_finite()) throw Error(ErrorKind::UnboundedEnumeration, g.name() + " has infinitely many positions");
    Region r;
    for (std::uint32_t n = 0; n < g.bound().n; ++n) r.positions.emplace_back(0, n);
    return r;
}

std::vector<Element> enumerate_region(const Chain& chain, const std::optional<Region>& region, std::size_t cap) {
    std::vector<Element> out;
    if (chain.is_finite_tower()) {
        const auto& g = chain.group().finite();
        if (g.order() > cap) throw Error(ErrorKind::ConfigInvalid, "group larger than the enumeration cap");
        for (Elem x = 0; x < g.order(); ++x) out.emplace_back(x);
        return out;
    }
    const auto& sum = sum_of(chain);
    const Region r = resolve_region(chain, region);
    const auto& h = sum.coordinate();
    double total = 1;
    for (std::size_t i = 0; i < r.positions.size(); ++i) total *= static_cast<double>(h.order());
    if (total > static_cast<double>(cap))
        throw Error(ErrorKind::ConfigInvalid, "region holds more than " + std::to_string(cap) + " elements");
    std::vector<Elem> digits(r.positions.size(), 0);
    out.reserve(static_cast<std::size_t>(total));
    while (true) {
        SparseElement x;
        for (std::size_t i = 0; i < digits.size(); ++i)
            if (digits[i] != h.identity()) x.entries.emplace_back(r.positions[i], digits[i]);
        out.emplace_back(std::move(x));
        std::size_t i = digits.size();
        while (i > 0 && ++digits[i - 1] == h.order()) digits[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

std::vector<Element> enumerate_cell(const ChiLabel& s, const Chain& chain, const std::optional<Region>& region) {
    std::vector<Element> out;
    if (chain.is_finite_tower()) {
        const auto& g = chain.group().finite();
        for (Elem x = 0; x < g.order(); ++x)
            if (chi(Element{x}, chain) == s) out.emplace_back(x);
        return out;
    }
    const auto& sum = sum_of(chain);
    const Region r = resolve_region(chain, region);
    const auto& h = sum.coordinate();
    std::vector<Elem> values;
    for (Elem c = 0; c < h.order(); ++c)
        if (c != h.identity()) values.push_back(c);

    // Pick positions p_1 < ... < p_k with f(p_i) = s_i, then every assignment
    // of non-identity coordinates to them.
    std::vector<Ordinal> chosen;
    auto emit_values = [&]() {
        std::vector<std::size_t> idx(chosen.size(), 0);
        while (true) {
            SparseElement x;
            for (std::size_t i = 0; i < chosen.size(); ++i) x.entries.emplace_back(chosen[i], values[idx[i]]);
            out.emplace_back(std::move(x));
            std::size_t i = idx.size();
            while (i > 0 && ++idx[i - 1] == values.size()) idx[--i] = 0;
            if (i == 0) break;
        }
    };
    auto place = [&](auto&& self, std::size_t depth, std::size_t from) -> void {
        if (depth == s.size()) {
            emit_values();
            return;
        }
        for (std::size_t j = from; j < r.positions.size(); ++j) {
            if (r.positions[j].n != s[depth]) continue;
            chosen.push_back(r.positions[j]);
            self(self, depth + 1, j + 1);
            chosen.pop_back();
        }
    };
    if (!s.empty() && values.empty()) return out;
    place(place, 0, 0);
    return out;
}

std::uint64_t cell_size(const ChiLabel& s, const Chain& chain, const Region& region) {
    const auto& sum = sum_of(chain);
    const Region r = resolve_region(chain, region);
    std::vector<std::uint64_t> ways(s.size() + 1, 0);
    ways[0] = 1;
    for (auto p : r.positions)
        for (std::size_t j = s.size(); j > 0; --j)
            if (p.n == s[j - 1]) ways[j] += ways[j - 1];
    std::uint64_t count = ways[s.size()];
    for (std::size_t i = 0; i < s.size(); ++i) count *= sum.coordinate().order() - 1;
    return count;
}

Element separation_witness(std::span<const Element> k, const ChiLabel& s, const Chain& chain) {
    const Group& g = chain.group();
    Ordinal from = chain.bottom();
    for (const auto& x : k) {
        g.check(x);
        if (is_identity(g, x)) continue;
        Ordinal above = chain.stratum_of(x).predecessor.successor();
        from = std::max(from, above);
    }
    std::set<std::uint32_t> forbidden(s.begin(), s.end());
    auto gamma = chain.first_label_avoiding(from, forbidden);
    if (!gamma)
        throw Error(ErrorKind::NoSuitableLabel, "no label at or above " + from.to_string() +
                                                    " avoids the offsets of s; the chain is too short");
    return chain.canonical_rep(*gamma);
}

SeparationReport verify_separation(std::span<const Element> k, const ChiLabel& s, const Element& h,
                                   const Chain& chain, const std::optional<Region>& region) {
    const Group& g = chain.group();
    g.check(h);
    const auto cell = enumerate_cell(s, chain, region);
    SeparationReport report;
    report.cell_size = cell.size();
    std::unordered_map<Element, std::pair<std::size_t, std::size_t>, ElementHash> left;
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = 0; j < cell.size(); ++j) left.emplace(g.op(k[i], cell[j]), std::pair{i, j});
    report.products_checked = k.size() * cell.size();
    for (const auto& x2 : cell) {
        ++report.products_checked;
        auto it = left.find(g.op(h, x2));
        if (it != left.end()) {
            report.pass = false;
            report.k = k[it->second.first];
            report.x = cell[it->second.second];
            report.x2 = x2;
            return report;
        }
    }
    return report;
}

json factorization_to_json(const Factorization& f, const Group& g) {
    json out = json::array();
    for (const auto& factor : f.factors)
        out.push_back({{"ordinal", ordinal_to_json(factor.ordinal)}, {"rep", element_to_json(g, factor.rep)}});
    return out;
}

ChiLabel parse_chi_label(const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::MalformedSpec, "a chi label is a JSON array of naturals");
    ChiLabel out;
    for (const auto& v : j) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
            throw Error(ErrorKind::MalformedSpec, "chi label entries must be naturals");
        out.push_back(v.get<std::uint32_t>());
    }
    return out;
}

}  // namespace covlab
