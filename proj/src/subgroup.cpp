#include "covlab/subgroup.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

#include "covlab/errors.hpp"

namespace covlab {

Subgroup::Subgroup(FiniteGroup parent, Bitset members)
    : parent_(std::move(parent)), members_(std::move(members)), elements_(members_.indices()) {}

Subgroup Subgroup::checked(FiniteGroup parent, Bitset members) {
    if (members.size() != parent.order())
        throw Error(ErrorKind::MalformedSpec, "membership bitset has the wrong width");
    if (!members.test(parent.identity())) throw Error(ErrorKind::NotAGroup, "subset misses the identity");
    Subgroup s(std::move(parent), std::move(members));
    const auto& g = s.parent_;
    for (Elem a : s.elements_) {
        if (!s.contains(g.invert(a)))
            throw Error(ErrorKind::NotAGroup, "subset not closed under inverse at " + std::to_string(a));
        for (Elem b : s.elements_)
            if (!s.contains(g.op(a, b))) {
                std::ostringstream os;
                os << "subset not closed: " << a << "*" << b << " = " << g.op(a, b);
                throw Error(ErrorKind::NotAGroup, os.str());
            }
    }
    return s;
}

Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Elem> generators) {
    for (Elem s : generators) g.check(s);
    Bitset members(g.order());
    std::deque<Elem> queue{g.identity()};
    members.set(g.identity());
    while (!queue.empty()) {
        Elem x = queue.front();
        queue.pop_front();
        for (Elem s : generators) {
            Elem y = g.op(x, s);
            if (!members.test(y)) {
                members.set(y);
                queue.push_back(y);
            }
        }
    }
    return Subgroup(g, std::move(members));
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return subgroup_generated(g, {}); }

Subgroup whole_group(const FiniteGroup& g) {
    Bitset all(g.order());
    all.set_all();
    return Subgroup::checked(g, std::move(all));
}

std::vector<Elem> right_coset_representatives(const Subgroup& h, const Subgroup& k) {
    if (h.parent().order() != k.parent().order())
        throw Error(ErrorKind::NotNested, "subgroups live in different groups");
    if (!h.is_subset_of(k) || h.order() == k.order())
        throw Error(ErrorKind::NotNested, "H must be a proper subgroup of K (|H|=" + std::to_string(h.order()) +
                                              ", |K|=" + std::to_string(k.order()) + ")");
    const auto& g = k.parent();
    Bitset assigned = h.members();
    std::vector<Elem> reps;
    for (Elem x : k.elements()) {  // increasing order, so x is the minimum of Hx
        if (assigned.test(x)) continue;
        reps.push_back(x);
        for (Elem y : h.elements()) assigned.set(g.op(y, x));
    }
    return reps;
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g) {
    std::vector<Subgroup> found;
    std::set<Bitset> seen;
    std::vector<std::vector<Elem>> gens;
    auto add = [&](Subgroup s, std::vector<Elem> generators) {
        if (seen.insert(s.members()).second) {
            found.push_back(std::move(s));
            gens.push_back(std::move(generators));
        }
    };
    std::vector<Elem> cyclic_gens;
    for (Elem x = 0; x < g.order(); ++x) {
        Elem one[] = {x};
        auto s = subgroup_generated(g, one);
        if (!seen.contains(s.members())) cyclic_gens.push_back(x);
        add(std::move(s), {x});
    }
    for (std::size_t i = 0; i < found.size(); ++i) {
        for (Elem c : cyclic_gens) {
            if (found[i].contains(c)) continue;
            auto next = gens[i];
            next.push_back(c);
            add(subgroup_generated(g, next), next);
        }
    }
    std::vector<std::size_t> idx(found.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (found[a].order() != found[b].order()) return found[a].order() < found[b].order();
        return found[a].elements() < found[b].elements();
    });
    std::vector<Subgroup> out;
    out.reserve(found.size());
    for (auto i : idx) out.push_back(found[i]);
    return out;
}

}  // namespace covlab
