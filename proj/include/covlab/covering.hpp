#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "covlab/bitset.hpp"
#include "covlab/group.hpp"

namespace covlab {

/// A subset of a finite group as a bitset over element indices.
class SubsetOfG {
public:
    SubsetOfG(FiniteGroup g, Bitset members);
    /// Throws ElementNotInGroup for out-of-range elements.
    static SubsetOfG of(const FiniteGroup& g, std::span<const Elem> elements);

    const FiniteGroup& group() const noexcept { return group_; }
    const Bitset& members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.count(); }
    bool empty() const noexcept { return members_.none(); }
    bool contains(Elem g) const noexcept { return g < members_.size() && members_.test(g); }
    std::vector<Elem> elements() const { return members_.indices(); }

    friend bool operator==(const SubsetOfG& a, const SubsetOfG& b) { return a.members_ == b.members_; }

private:
    FiniteGroup group_;
    Bitset members_;
};

/// {a * b^-1 : a, b in A}. Throws EmptySet.
SubsetOfG difference_set(const SubsetOfG& a);

/// Left translate g*A.
SubsetOfG left_translate(const SubsetOfG& a, Elem g);

enum class CoverMethod { exact, greedy, bounds_only };
enum class CoverSide { left, right };

std::string to_string(CoverMethod m);

struct CoverResult {
    std::size_t value = 0;
    /// X with X*A = G (or A*X = G for right covers), sorted.
    std::vector<Elem> witness;
    CoverMethod method = CoverMethod::exact;
    std::uint64_t nodes_explored = 0;
    bool proven_optimal = false;
    /// Best lower bound established; equals value when proven_optimal.
    std::size_t lower_bound = 0;
    /// Witness is the lexicographically least minimum cover.
    bool canonical = false;
};

struct CoverOptions {
    /// Branch-and-bound node limit; the incumbent is returned unproven when hit.
    std::uint64_t node_budget = 20'000'000;
    CoverSide side = CoverSide::left;
    /// Second search pass for the lexicographically least minimum cover.
    bool canonical = false;
    /// Solve inside the subgroup generated by a^-1 A and multiply by the
    /// index. Off means branch-and-bound over the whole group.
    bool reduce_to_subgroup = true;
    /// Local-search moves per target size when tightening the greedy
    /// incumbent; 0 disables.
    std::uint64_t local_search_moves = 200'000;
    std::uint64_t seed = 0x5eedu;
};

/// cov(A) = min{|X| : X*A = G} by branch and bound. Throws EmptySet.
CoverResult cov_exact(const SubsetOfG& a, const CoverOptions& opts = {});

/// Greedy set cover over translates, ties to the smallest element.
CoverResult cov_greedy(const SubsetOfG& a, CoverSide side = CoverSide::left);

struct CoverBounds {
    std::size_t lower = 0;
    std::size_t upper = 0;
};

/// lower = [G:H] * ceil(|H|/|A|) with H generated by a^-1 A (at least
/// ceil(|G|/|A|)); upper = greedy value.
CoverBounds cov_bounds(const SubsetOfG& a, CoverSide side = CoverSide::left);

/// True when X*A = G (left) or A*X = G (right).
bool is_cover(const SubsetOfG& a, std::span<const Elem> x, CoverSide side = CoverSide::left);

}  // namespace covlab
