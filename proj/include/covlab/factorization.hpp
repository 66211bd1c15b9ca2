#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covlab/chain.hpp"

namespace covlab {

struct Factor {
    Ordinal ordinal;
    Element rep;
};

/// g = x_s * ... * x_1 through a chain. Factors are listed in that order, so
/// ordinals increase toward the back and the last factor carries max(g).
struct Factorization {
    std::vector<Factor> factors;

    std::size_t length() const noexcept { return factors.size(); }
    /// Ordinal of the leading coset (gamma_1), or nullopt for the identity.
    std::optional<Ordinal> max() const;
    /// gamma_1, gamma_2, ..., gamma_s (decreasing).
    std::vector<Ordinal> gammas() const;
};

/// Finite sequence of naturals; the offsets of the factorization ordinals,
/// smallest ordinal first. Empty exactly for the identity.
using ChiLabel = std::vector<std::uint32_t>;

Factorization factorize(const Element& g, const Chain& chain);
/// Product of the representatives in listed order.
Element multiply_out(const Factorization& f, const Group& g);
ChiLabel chi(const Element& g, const Chain& chain);

/// Finite set of positions bounding enumeration in an ordinal sum.
struct Region {
    std::vector<Ordinal> positions;  // sorted, distinct

    /// omega*q + n for every block q and every n < offsets_per_block, clipped
    /// to the group's bound.
    static Region block_prefix(const OrdinalSum& g, std::uint32_t offsets_per_block);
    /// Every position of a finite-bound ordinal sum.
    static Region all_positions(const OrdinalSum& g);
};

/// All elements with support inside the region (ordinal sums), or the whole
/// group (finite towers). Throws UnboundedEnumeration when an ordinal sum
/// with infinitely many positions is given no region, and ConfigInvalid when
/// the region holds more than `cap` elements.
std::vector<Element> enumerate_region(const Chain& chain, const std::optional<Region>& region,
                                      std::size_t cap = std::size_t{1} << 24);

/// The cell H_s = chi^{-1}(s) inside the region. Finite towers are filtered
/// by chi; ordinal-sum cells are built directly from the support pattern.
std::vector<Element> enumerate_cell(const ChiLabel& s, const Chain& chain, const std::optional<Region>& region = {});

/// |H_s ∩ region| for ordinal sums, counted without enumerating.
std::uint64_t cell_size(const ChiLabel& s, const Chain& chain, const Region& region);

/// Label gamma above max(k) for every k in K with f(gamma) not among the
/// entries of s; returns the canonical representative h of X_gamma for the
/// smallest such gamma. Throws NoSuitableLabel when the chain runs out.
Element separation_witness(std::span<const Element> k, const ChiLabel& s, const Chain& chain);

struct SeparationReport {
    bool pass = true;
    std::size_t cell_size = 0;
    std::size_t products_checked = 0;
    /// On failure: k * x == h * x2 with x, x2 in the cell.
    std::optional<Element> k;
    std::optional<Element> x;
    std::optional<Element> x2;
};

/// Exhaustively checks K*H_s ∩ h*H_s = ∅ with H_s restricted to the region.
SeparationReport verify_separation(std::span<const Element> k, const ChiLabel& s, const Element& h,
                                   const Chain& chain, const std::optional<Region>& region = {});

json factorization_to_json(const Factorization& f, const Group& g);
ChiLabel parse_chi_label(const json& j);

}  // namespace covlab
