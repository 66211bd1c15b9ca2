#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covlab/covering.hpp"
#include "covlab/factorization.hpp"
#include "covlab/group.hpp"

namespace covlab {

/// Positions where an element differs from the identity. Finite products use
/// plain factor indices (q = 0); a cyclic group counts as one factor.
struct SupportProfile {
    std::vector<Ordinal> support;
    std::size_t size() const noexcept { return support.size(); }
};

/// Throws NotProductBacked for Cayley-table groups.
SupportProfile support(const Group& g, const Element& x);
/// Number of coordinates of a product-backed finite group.
std::size_t coordinate_count(const FiniteGroup& g);
/// |supt(x)| without building the profile. Precondition: product-backed.
std::size_t support_size(const FiniteGroup& g, Elem x);

/// The partition of a finite product into A_n = {g : |supt(g)| = n}.
struct SupportPartition {
    FiniteGroup group;
    std::vector<SubsetOfG> cells;  // cells[n] = A_n, n = 0..coordinate_count

    /// Every a*b^-1 with a, b in A_n has support at most this size.
    std::size_t difference_support_bound(std::size_t n) const noexcept;
};

/// Throws NotProductBacked.
SupportPartition support_partition(const FiniteGroup& g);
/// |A_n| counted from the factor orders (elementary symmetric polynomial of
/// |H_i| - 1). Throws NotProductBacked.
std::uint64_t support_cell_size(const FiniteGroup& g, std::size_t n);

/// A_n ∩ region in an ordinal sum: n positions from the region, each with a
/// non-identity value.
std::vector<SparseElement> enumerate_support_cell(const OrdinalSum& g, std::size_t n, const Region& region);

/// h with support of size 2n+1 disjoint from every support in K: the
/// smallest free positions, each set to the smallest non-identity value.
/// Throws InsufficientFactors (naming the number of factors required) when
/// a finite product has fewer than 2n+1 free positions.
Element support_witness(const Group& g, std::span<const Element> k, std::size_t n);

struct WitnessReport {
    bool pass = true;
    std::uint64_t checked = 0;
    /// On failure: h = k * a * b^-1 with a, b in A_n.
    std::optional<Element> k;
    std::optional<Element> a;
    std::optional<Element> b;
};

/// Exhaustive check that h is not in K * A_n * A_n^-1: for every k and a the
/// only candidate is b = h^-1 k a, tested for |supt(b)| = n. Ordinal sums need
/// a region that bounds A_n.
WitnessReport verify_support_witness(const Group& g, std::span<const Element> k, std::size_t n, const Element& h,
                                     const std::optional<Region>& region = {});

/// G ≅ Z_{d_1} x ... x Z_{d_k} with d_1 | d_2 | ... | d_k, plus the explicit
/// relabeling between G and that product.
struct InvariantFactors {
    std::vector<std::size_t> factors;
    FiniteGroup product;
    std::vector<Elem> to_product;    // indexed by elements of G
    std::vector<Elem> from_product;  // indexed by elements of the product
};

/// Splits off a cyclic factor generated by the smallest element of maximal
/// order, decomposes the quotient recursively, and lifts its generators to
/// elements of the same order. Throws NotAbelian with a noncommuting pair.
InvariantFactors abelian_invariant_factors(const FiniteGroup& g);

/// First pair (a, b) in index order with ab != ba.
std::optional<std::pair<Elem, Elem>> noncommuting_pair(const FiniteGroup& g);

}  // namespace covlab
