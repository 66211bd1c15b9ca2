#include "covlab/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

constexpr std::size_t kMaxOrder = std::size_t{1} << 30;
constexpr std::size_t kExhaustiveAssociativityLimit = 256;
constexpr std::size_t kSampledTriples = 1'000'000;

}  // namespace

std::string to_string(GroupKind kind) {
    switch (kind) {
        case GroupKind::cyclic: return "cyclic";
        case GroupKind::cayley: return "cayley";
        case GroupKind::product: return "product";
        case GroupKind::ordinal_sum: return "ordinal_sum";
    }
    return "unknown";
}

struct FiniteGroup::Impl {
    GroupKind kind = GroupKind::cyclic;
    std::size_t order = 1;
    Elem identity = 0;
    bool abelian = true;
    // cayley
    std::vector<Elem> table;
    std::vector<Elem> inverse;
    // product
    std::vector<FiniteGroup> factors;
    std::vector<std::size_t> strides;
};

FiniteGroup::FiniteGroup() : FiniteGroup(cyclic(1)) {}

FiniteGroup FiniteGroup::cyclic(std::size_t order) {
    if (order == 0 || order > kMaxOrder)
        throw Error(ErrorKind::MalformedSpec, "cyclic order must be in [1, 2^30], got " + std::to_string(order));
    auto impl = std::make_shared<Impl>();
    impl->kind = GroupKind::cyclic;
    impl->order = order;
    return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Elem>> rows, Validation mode) {
    const std::size_t n = rows.size();
    if (n == 0) throw Error(ErrorKind::MalformedSpec, "empty Cayley table");
    if (n > 4096) throw Error(ErrorKind::MalformedSpec, "Cayley tables are limited to order 4096");
    std::vector<Elem> t(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw Error(ErrorKind::MalformedSpec, "Cayley table row " + std::to_string(i) + " has wrong length");
        for (std::size_t j = 0; j < n; ++j) {
            if (rows[i][j] >= n)
                throw Error(ErrorKind::MalformedSpec, "Cayley entry out of range at (" + std::to_string(i) +
                                                          "," + std::to_string(j) + ")");
            t[i * n + j] = rows[i][j];
        }
    }
    auto at = [&](std::size_t a, std::size_t b) { return t[a * n + b]; };

    // Latin square: every row and column a permutation.
    std::vector<char> seen(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[at(i, j)]++)
                throw Error(ErrorKind::NotAGroup, "row " + std::to_string(i) + " is not a permutation (value " +
                                                      std::to_string(at(i, j)) + " repeats)");
        }
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t j = 0; j < n; ++j) {
            if (seen[at(j, i)]++)
                throw Error(ErrorKind::NotAGroup, "column " + std::to_string(i) + " is not a permutation (value " +
                                                      std::to_string(at(j, i)) + " repeats)");
        }
    }

    std::size_t e = n;
    for (std::size_t c = 0; c < n && e == n; ++c) {
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) ok = at(c, x) == x && at(x, c) == x;
        if (ok) e = c;
    }
    if (e == n) throw Error(ErrorKind::NotAGroup, "no two-sided identity");

    std::vector<Elem> inv(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::size_t b = 0;
        while (at(a, b) != e) ++b;  // exists by the Latin property
        if (at(b, a) != e)
            throw Error(ErrorKind::NotAGroup, "element " + std::to_string(a) + " has no two-sided inverse");
        inv[a] = static_cast<Elem>(b);
    }

    auto fail_assoc = [](std::size_t a, std::size_t b, std::size_t c) {
        std::ostringstream os;
        os << "associativity fails for (" << a << "," << b << "," << c << ")";
        throw Error(ErrorKind::NotAGroup, os.str());
    };
    if (mode == Validation::exhaustive || n <= kExhaustiveAssociativityLimit) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                const std::size_t ab = at(a, b);
                for (std::size_t c = 0; c < n; ++c)
                    if (at(ab, c) != at(a, at(b, c))) fail_assoc(a, b, c);
            }
    } else {
        std::mt19937_64 rng(0xC0FFEEu);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (std::size_t s = 0; s < kSampledTriples; ++s) {
            std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
            if (at(at(a, b), c) != at(a, at(b, c))) fail_assoc(a, b, c);
        }
    }

    auto impl = std::make_shared<Impl>();
    impl->kind = GroupKind::cayley;
    impl->order = n;
    impl->identity = static_cast<Elem>(e);
    impl->table = std::move(t);
    impl->inverse = std::move(inv);
    impl->abelian = true;
    for (std::size_t a = 0; a < n && impl->abelian; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (impl->table[a * n + b] != impl->table[b * n + a]) {
                impl->abelian = false;
                break;
            }
    return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::product(std::vector<FiniteGroup> factors) {
    if (factors.empty()) throw Error(ErrorKind::MalformedSpec, "product needs at least one factor");
    auto impl = std::make_shared<Impl>();
    impl->kind = GroupKind::product;
    std::size_t order = 1;
    for (const auto& f : factors) {
        if (order > kMaxOrder / f.order())
            throw Error(ErrorKind::MalformedSpec, "product order exceeds 2^30");
        order *= f.order();
    }
    impl->order = order;
    impl->strides.resize(factors.size());
    std::size_t stride = 1;
    for (std::size_t i = factors.size(); i-- > 0;) {
        impl->strides[i] = stride;
        stride *= factors[i].order();
    }
    Elem id = 0;
    bool abelian = true;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        id += static_cast<Elem>(factors[i].identity() * impl->strides[i]);
        abelian = abelian && factors[i].is_abelian();
    }
    impl->identity = id;
    impl->abelian = abelian;
    impl->factors = std::move(factors);
    return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::power(std::size_t p, std::size_t n) {
    if (n == 0) return cyclic(1);
    return product(std::vector<FiniteGroup>(n, cyclic(p)));
}

GroupKind FiniteGroup::kind() const noexcept { return impl_->kind; }
std::size_t FiniteGroup::order() const noexcept { return impl_->order; }
Elem FiniteGroup::identity() const noexcept { return impl_->identity; }
bool FiniteGroup::is_abelian() const noexcept { return impl_->abelian; }
const std::vector<FiniteGroup>& FiniteGroup::factors() const noexcept { return impl_->factors; }

void FiniteGroup::check(Elem g) const {
    if (!contains(g))
        throw Error(ErrorKind::ElementNotInGroup,
                    std::to_string(g) + " is not an element of " + name());
}

Elem FiniteGroup::op(Elem a, Elem b) const {
    const Impl& m = *impl_;
    switch (m.kind) {
        case GroupKind::cyclic: {
            std::uint64_t s = std::uint64_t{a} + b;
            return static_cast<Elem>(s >= m.order ? s - m.order : s);
        }
        case GroupKind::cayley: return m.table[std::size_t{a} * m.order + b];
        case GroupKind::product: {
            Elem out = 0;
            for (std::size_t i = 0; i < m.factors.size(); ++i) {
                const auto& f = m.factors[i];
                const std::size_t st = m.strides[i];
                const Elem ca = static_cast<Elem>((a / st) % f.order());
                const Elem cb = static_cast<Elem>((b / st) % f.order());
                out += static_cast<Elem>(f.op(ca, cb) * st);
            }
            return out;
        }
        case GroupKind::ordinal_sum: break;
    }
    return 0;
}

Elem FiniteGroup::invert(Elem a) const {
    const Impl& m = *impl_;
    switch (m.kind) {
        case GroupKind::cyclic: return a == 0 ? 0 : static_cast<Elem>(m.order - a);
        case GroupKind::cayley: return m.inverse[a];
        case GroupKind::product: {
            Elem out = 0;
            for (std::size_t i = 0; i < m.factors.size(); ++i) {
                const auto& f = m.factors[i];
                const std::size_t st = m.strides[i];
                out += static_cast<Elem>(f.invert(static_cast<Elem>((a / st) % f.order())) * st);
            }
            return out;
        }
        case GroupKind::ordinal_sum: break;
    }
    return 0;
}

Elem FiniteGroup::pow(Elem a, std::uint64_t k) const {
    Elem result = identity();
    Elem base = a;
    while (k) {
        if (k & 1) result = op(result, base);
        base = op(base, base);
        k >>= 1;
    }
    return result;
}

std::size_t FiniteGroup::element_order(Elem a) const {
    std::size_t k = 1;
    Elem x = a;
    while (x != identity()) {
        x = op(x, a);
        ++k;
    }
    return k;
}

Elem FiniteGroup::coord(Elem g, std::size_t i) const {
    const Impl& m = *impl_;
    if (m.kind != GroupKind::product) throw Error(ErrorKind::NotProductBacked, name() + " has no coordinates");
    return static_cast<Elem>((g / m.strides[i]) % m.factors[i].order());
}

std::vector<Elem> FiniteGroup::coords(Elem g) const {
    const Impl& m = *impl_;
    if (m.kind != GroupKind::product) throw Error(ErrorKind::NotProductBacked, name() + " has no coordinates");
    std::vector<Elem> c(m.factors.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = static_cast<Elem>((g / m.strides[i]) % m.factors[i].order());
    return c;
}

Elem FiniteGroup::from_coords(std::span<const Elem> c) const {
    const Impl& m = *impl_;
    if (m.kind != GroupKind::product) throw Error(ErrorKind::NotProductBacked, name() + " has no coordinates");
    if (c.size() != m.factors.size())
        throw Error(ErrorKind::ElementNotInGroup, "expected " + std::to_string(m.factors.size()) + " coordinates");
    Elem out = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        m.factors[i].check(c[i]);
        out += static_cast<Elem>(c[i] * m.strides[i]);
    }
    return out;
}

std::string FiniteGroup::name() const {
    const Impl& m = *impl_;
    switch (m.kind) {
        case GroupKind::cyclic: return "Z_" + std::to_string(m.order);
        case GroupKind::cayley: return "cayley(" + std::to_string(m.order) + ")";
        case GroupKind::product: {
            std::string out;
            std::size_t i = 0;
            while (i < m.factors.size()) {
                std::string part = m.factors[i].name();
                std::size_t j = i + 1;
                while (j < m.factors.size() && m.factors[j].name() == part) ++j;
                if (m.factors[i].kind() == GroupKind::product) part = "(" + part + ")";
                if (!out.empty()) out += "x";
                out += part;
                if (j - i > 1) out += "^" + std::to_string(j - i);
                i = j;
            }
            return out;
        }
        case GroupKind::ordinal_sum: break;
    }
    return "?";
}

// ---------------------------------------------------------------------------

Elem SparseElement::at(Ordinal position, Elem identity) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), position,
                               [](const auto& e, Ordinal p) { return e.first < p; });
    return (it != entries.end() && it->first == position) ? it->second : identity;
}

std::size_t SparseElementHash::operator()(const SparseElement& g) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& [pos, v] : g.entries) {
        std::uint64_t x = (std::uint64_t{pos.q} << 40) ^ (std::uint64_t{pos.n} << 16) ^ v;
        h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

OrdinalSum::OrdinalSum(FiniteGroup coordinate, std::uint32_t blocks)
    : OrdinalSum(std::move(coordinate), blocks, Ordinal::omega_times(blocks)) {}

OrdinalSum::OrdinalSum(FiniteGroup coordinate, std::uint32_t blocks, Ordinal bound)
    : coordinate_(std::move(coordinate)), blocks_(blocks), bound_(bound) {
    if (bound_ > Ordinal::omega_times(blocks_))
        throw Error(ErrorKind::MalformedSpec, "ordinal_sum bound " + bound_.to_string() + " exceeds w*" +
                                                  std::to_string(blocks_));
    if (bound_.is_zero()) throw Error(ErrorKind::MalformedSpec, "ordinal_sum needs at least one position");
}

SparseElement OrdinalSum::op(const SparseElement& a, const SparseElement& b) const {
    SparseElement out;
    out.entries.reserve(a.entries.size() + b.entries.size());
    const Elem e = coordinate_.identity();
    auto ia = a.entries.begin(), ib = b.entries.begin();
    while (ia != a.entries.end() || ib != b.entries.end()) {
        if (ib == b.entries.end() || (ia != a.entries.end() && ia->first < ib->first)) {
            out.entries.push_back(*ia++);
        } else if (ia == a.entries.end() || ib->first < ia->first) {
            out.entries.push_back(*ib++);
        } else {
            Elem v = coordinate_.op(ia->second, ib->second);
            if (v != e) out.entries.emplace_back(ia->first, v);
            ++ia;
            ++ib;
        }
    }
    return out;
}

SparseElement OrdinalSum::invert(const SparseElement& a) const {
    SparseElement out = a;
    for (auto& [pos, v] : out.entries) v = coordinate_.invert(v);
    return out;
}

SparseElement OrdinalSum::unit(Ordinal position, Elem value) const {
    if (!valid_position(position))
        throw Error(ErrorKind::ElementNotInGroup, "position " + position.to_string() + " outside " + name());
    coordinate_.check(value);
    SparseElement out;
    if (value != coordinate_.identity()) out.entries.emplace_back(position, value);
    return out;
}

bool OrdinalSum::contains(const SparseElement& g) const noexcept {
    for (std::size_t i = 0; i < g.entries.size(); ++i) {
        const auto& [pos, v] = g.entries[i];
        if (!valid_position(pos) || !coordinate_.contains(v) || v == coordinate_.identity()) return false;
        if (i > 0 && !(g.entries[i - 1].first < pos)) return false;
    }
    return true;
}

void OrdinalSum::check(const SparseElement& g) const {
    if (!contains(g)) throw Error(ErrorKind::ElementNotInGroup, "malformed or out-of-range element of " + name());
}

std::string OrdinalSum::name() const {
    return "sum_{a<" + bound_.to_string() + "}(" + coordinate_.name() + ")";
}

// ---------------------------------------------------------------------------

GroupKind Group::kind() const noexcept {
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) return f->kind();
    return GroupKind::ordinal_sum;
}

const FiniteGroup& Group::finite() const {
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) return *f;
    throw Error(ErrorKind::MalformedSpec, "expected a finite group, got " + name());
}

const OrdinalSum& Group::ordinal_sum() const {
    if (auto* s = std::get_if<OrdinalSum>(&rep_)) return *s;
    throw Error(ErrorKind::MalformedSpec, "expected an ordinal_sum group, got " + name());
}

Element Group::identity() const {
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) return f->identity();
    return SparseElement{};
}

Element Group::op(const Element& a, const Element& b) const {
    check(a);
    check(b);
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) return f->op(std::get<Elem>(a), std::get<Elem>(b));
    return std::get<OrdinalSum>(rep_).op(std::get<SparseElement>(a), std::get<SparseElement>(b));
}

Element Group::invert(const Element& a) const {
    check(a);
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) return f->invert(std::get<Elem>(a));
    return std::get<OrdinalSum>(rep_).invert(std::get<SparseElement>(a));
}

bool Group::contains(const Element& g) const noexcept {
    if (auto* f = std::get_if<FiniteGroup>(&rep_)) {
        auto* e = std::get_if<Elem>(&g);
        return e && f->contains(*e);
    }
    auto* s = std::get_if<SparseElement>(&g);
    return s && std::get<OrdinalSum>(rep_).contains(*s);
}

void Group::check(const Element& g) const {
    if (!contains(g)) throw Error(ErrorKind::ElementNotInGroup, "element does not belong to " + name());
}

std::string Group::name() const {
    return std::visit([](const auto& g) { return g.name(); }, rep_);
}

}  // namespace covlab
