#pragma once

#include <optional>
#include <set>
#include <vector>

#include "covlab/group.hpp"
#include "covlab/group_json.hpp"
#include "covlab/subgroup.hpp"

namespace covlab {

/// Where an element first appears in a chain: the smallest label whose
/// stratum contains it (always a successor) and that label's predecessor,
/// which indexes the representative system of the element's leading factor.
struct StratumLocation {
    Ordinal label;
    Ordinal predecessor;
};

/// Increasing ordinal-labeled subgroup chain G_0 = {e} < G_1 < ... with
/// union G, together with canonical right-coset representative systems X_a
/// satisfying G_{a+1} = G_a X_a.
///
/// Two backends:
///  - finite towers: explicit subgroups at consecutive labels l_0 < l_0+1 < ...;
///  - ordinal sums: every ordinal below the group's bound is a label and the
///    stratum at a is the set of elements supported strictly below a.
///
/// Immutable after construction.
class Chain {
public:
    /// Validates the finite analogues of the chain conditions; throws
    /// NotASubgroupTower when strata are not nested and
    /// ChainConditionViolated (naming the condition) otherwise.
    static Chain from_subgroups(std::vector<Subgroup> strata, std::vector<Ordinal> labels = {});
    static Chain from_tower(const FiniteGroup& g, const std::vector<std::vector<Elem>>& generators,
                            std::vector<Ordinal> labels = {});
    static Chain over_sum(const OrdinalSum& g);

    const Group& group() const noexcept { return group_; }
    bool is_finite_tower() const noexcept { return !strata_.empty(); }

    /// Finite towers only.
    const std::vector<Ordinal>& labels() const;
    const Subgroup& stratum(Ordinal label) const;

    bool has_label(Ordinal label) const noexcept;
    bool in_stratum(const Element& g, Ordinal label) const;

    /// X_label; empty for the top label of a finite tower.
    std::vector<Element> reps(Ordinal label) const;
    /// Smallest element of X_label. Throws NoSuitableLabel if X_label is empty.
    Element canonical_rep(Ordinal label) const;

    /// Throws IdentityElement for e.
    StratumLocation stratum_of(const Element& g) const;

    /// The unique x in X_label with g in G_label * x. Precondition: g lies in
    /// G_{label+1} \ G_label.
    Element coset_rep(const Element& g, Ordinal label) const;

    /// Smallest label >= from that carries a nonempty representative system
    /// and whose offset is not in `forbidden_offsets`.
    std::optional<Ordinal> first_label_avoiding(Ordinal from, const std::set<std::uint32_t>& forbidden_offsets) const;

    /// First label of the chain (the trivial stratum).
    Ordinal bottom() const noexcept;

private:
    explicit Chain(Group g) : group_(std::move(g)) {}
    std::size_t index_of(Ordinal label) const;

    Group group_;
    // finite tower
    std::vector<Subgroup> strata_;
    std::vector<Ordinal> labels_;
    std::vector<std::vector<Elem>> reps_;
    std::vector<std::uint32_t> first_layer_;  // smallest stratum index containing g
    std::vector<Elem> rep_of_;                // leading coset representative of g
};

/// Chain spec: {"tower":[{"generators":[...]},...],"labels":[[q,n],...]} for
/// finite groups ("labels" optional, default 0..m); {"labels":"auto"} or an
/// empty object for ordinal sums.
Chain chain_from_json(const Group& g, const json& spec);

}  // namespace covlab
