#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "covlab/ordinal.hpp"

namespace covlab {

/// Index of an element in a finite group's canonical enumeration.
using Elem = std::uint32_t;

enum class GroupKind { cyclic, cayley, product, ordinal_sum };

std::string to_string(GroupKind kind);

enum class Validation {
    automatic,   ///< exhaustive up to order 256, sampled above
    exhaustive,  ///< always check every triple
};

/// Immutable finite group. Copies share the underlying tables.
///
/// Product elements are numbered in mixed radix with factor 0 most
/// significant, so index order is the lexicographic order of coordinate
/// tuples and coordinate i is what the support of an element refers to.
class FiniteGroup {
public:
    FiniteGroup();  // trivial group

    static FiniteGroup cyclic(std::size_t order);
    /// Validates the table (see Validation); throws NotAGroup with a witness.
    static FiniteGroup from_table(std::vector<std::vector<Elem>> table,
                                  Validation mode = Validation::automatic);
    static FiniteGroup product(std::vector<FiniteGroup> factors);
    /// n copies of Z_p.
    static FiniteGroup power(std::size_t p, std::size_t n);

    GroupKind kind() const noexcept;
    std::size_t order() const noexcept;
    Elem identity() const noexcept;
    bool contains(Elem g) const noexcept { return g < order(); }

    Elem op(Elem a, Elem b) const;
    Elem invert(Elem a) const;
    Elem pow(Elem a, std::uint64_t k) const;
    std::size_t element_order(Elem a) const;
    bool is_abelian() const noexcept;

    /// Throws ElementNotInGroup unless g < order().
    void check(Elem g) const;

    /// Top-level factors; empty unless kind() == product.
    const std::vector<FiniteGroup>& factors() const noexcept;
    Elem coord(Elem g, std::size_t i) const;
    std::vector<Elem> coords(Elem g) const;
    Elem from_coords(std::span<const Elem> c) const;

    /// Short human-readable id such as "Z_6", "Z_2^4", "Z_2xZ_4", "cayley(6)".
    std::string name() const;

    /// Same underlying object (cheap identity test used for precondition checks).
    bool same_as(const FiniteGroup& other) const noexcept { return impl_ == other.impl_; }

    struct Impl;

private:
    explicit FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Finitely supported element of an ordinal-indexed direct sum. Entries are
/// sorted by position and never hold the coordinate identity.
struct SparseElement {
    std::vector<std::pair<Ordinal, Elem>> entries;

    bool is_identity() const noexcept { return entries.empty(); }
    /// Largest position in the support. Precondition: not identity.
    Ordinal top() const { return entries.back().first; }
    Elem at(Ordinal position, Elem identity) const;

    friend auto operator<=>(const SparseElement&, const SparseElement&) = default;
    friend bool operator==(const SparseElement&, const SparseElement&) = default;
};

struct SparseElementHash {
    std::size_t operator()(const SparseElement& g) const noexcept;
};

/// Direct sum of copies of a finite coordinate group over the positions
/// alpha < bound, where bound <= omega*blocks (default: equal).
class OrdinalSum {
public:
    OrdinalSum(FiniteGroup coordinate, std::uint32_t blocks);
    OrdinalSum(FiniteGroup coordinate, std::uint32_t blocks, Ordinal bound);

    const FiniteGroup& coordinate() const noexcept { return coordinate_; }
    std::uint32_t blocks() const noexcept { return blocks_; }
    Ordinal bound() const noexcept { return bound_; }
    /// True when bound < omega, i.e. the sum has finitely many positions.
    bool is_finite() const noexcept { return bound_.q == 0; }

    bool valid_position(Ordinal a) const noexcept { return a < bound_; }

    SparseElement identity() const { return {}; }
    SparseElement op(const SparseElement& a, const SparseElement& b) const;
    SparseElement invert(const SparseElement& a) const;
    /// Element with the single coordinate `value` at `position`.
    SparseElement unit(Ordinal position, Elem value) const;
    bool contains(const SparseElement& g) const noexcept;
    void check(const SparseElement& g) const;

    std::string name() const;

private:
    FiniteGroup coordinate_;
    std::uint32_t blocks_;
    Ordinal bound_;
};

using Element = std::variant<Elem, SparseElement>;

/// A realized group: one of the finite backends or a countable ordinal sum.
class Group {
public:
    Group(FiniteGroup g) : rep_(std::move(g)) {}   // NOLINT(google-explicit-constructor)
    Group(OrdinalSum g) : rep_(std::move(g)) {}    // NOLINT(google-explicit-constructor)

    GroupKind kind() const noexcept;
    bool is_finite_backend() const noexcept { return std::holds_alternative<FiniteGroup>(rep_); }
    const FiniteGroup& finite() const;
    const OrdinalSum& ordinal_sum() const;

    Element identity() const;
    Element op(const Element& a, const Element& b) const;
    Element invert(const Element& a) const;
    bool contains(const Element& g) const noexcept;
    void check(const Element& g) const;

    std::string name() const;

private:
    std::variant<FiniteGroup, OrdinalSum> rep_;
};

}  // namespace covlab
