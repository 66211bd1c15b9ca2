#pragma once

#include <span>
#include <vector>

#include "covlab/bitset.hpp"
#include "covlab/group.hpp"

namespace covlab {

/// A subgroup of a finite group, stored as a membership bitset plus the sorted
/// member list.
class Subgroup {
public:
    /// Throws NotAGroup if `members` misses the identity or is not closed
    /// under the operation and inverse.
    static Subgroup checked(FiniteGroup parent, Bitset members);

    const FiniteGroup& parent() const noexcept { return parent_; }
    std::size_t order() const noexcept { return elements_.size(); }
    bool contains(Elem g) const noexcept { return g < members_.size() && members_.test(g); }
    const Bitset& members() const noexcept { return members_; }
    /// Members in increasing index order.
    const std::vector<Elem>& elements() const noexcept { return elements_; }

    bool is_subset_of(const Subgroup& other) const noexcept { return members_.is_subset_of(other.members_); }
    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.members_ == b.members_; }

private:
    Subgroup(FiniteGroup parent, Bitset members);
    friend Subgroup subgroup_generated(const FiniteGroup&, std::span<const Elem>);

    FiniteGroup parent_;
    Bitset members_;
    std::vector<Elem> elements_;
};

/// Smallest subgroup containing `generators`, by breadth-first saturation.
Subgroup subgroup_generated(const FiniteGroup& g, std::span<const Elem> generators);
Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup whole_group(const FiniteGroup& g);

/// Canonical representatives of the right cosets Hx partitioning K \ H:
/// each is the smallest index in its coset. Throws NotNested unless H is a
/// proper subgroup of K.
std::vector<Elem> right_coset_representatives(const Subgroup& h, const Subgroup& k);

/// All subgroups, found as joins of cyclic subgroups until nothing new
/// appears. Sorted by (order, members). Intended for small groups.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g);

}  // namespace covlab
