#include "covlab/chain.hpp"

#include <algorithm>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

[[noreturn]] void violated(int condition, const std::string& what) {
    throw Error(ErrorKind::ChainConditionViolated, "condition (" + std::to_string(condition) + "): " + what);
}

}  // namespace

Chain Chain::from_subgroups(std::vector<Subgroup> strata, std::vector<Ordinal> labels) {
    if (strata.empty()) throw Error(ErrorKind::NotASubgroupTower, "a tower needs at least one stratum");
    const FiniteGroup g = strata.front().parent();
    if (labels.empty()) {
        for (std::uint32_t i = 0; i < strata.size(); ++i) labels.emplace_back(0, i);
    }
    if (labels.size() != strata.size())
        throw Error(ErrorKind::NotASubgroupTower, std::to_string(strata.size()) + " strata but " +
                                                      std::to_string(labels.size()) + " labels");
    for (const auto& s : strata)
        if (s.parent().order() != g.order())
            throw Error(ErrorKind::NotASubgroupTower, "strata belong to different groups");

    for (std::size_t i = 1; i < strata.size(); ++i) {
        if (!strata[i - 1].is_subset_of(strata[i]))
            throw Error(ErrorKind::NotASubgroupTower, "stratum " + labels[i - 1].to_string() +
                                                          " is not contained in stratum " + labels[i].to_string());
        if (strata[i - 1].order() == strata[i].order())
            violated(2, "strata at " + labels[i - 1].to_string() + " and " + labels[i].to_string() +
                            " coincide; the chain must increase strictly");
        if (!(labels[i - 1] < labels[i])) violated(2, "labels must increase strictly");
        if (labels[i].is_limit())
            violated(3, "limit label " + labels[i].to_string() +
                            " would have to equal the union of the earlier strata, which a strictly increasing finite "
                            "tower cannot do");
        if (labels[i] != labels[i - 1].successor())
            violated(2, "label " + labels[i].to_string() + " is not the successor of " + labels[i - 1].to_string() +
                            "; the skipped strata would repeat");
    }
    if (strata.front().order() != 1)
        violated(1, "first stratum has order " + std::to_string(strata.front().order()) + ", expected {e}");
    if (strata.back().order() != g.order())
        violated(1, "union of strata has order " + std::to_string(strata.back().order()) + " but |G| = " +
                        std::to_string(g.order()));
    for (std::size_t i = 0; i + 1 < strata.size(); ++i)
        if (strata[i].order() >= g.order()) violated(4, "stratum " + labels[i].to_string() + " is not proper");

    Chain c{Group(g)};
    c.reps_.resize(strata.size());
    c.first_layer_.assign(g.order(), 0);
    c.rep_of_.assign(g.order(), g.identity());
    for (std::size_t i = 0; i + 1 < strata.size(); ++i) {
        c.reps_[i] = right_coset_representatives(strata[i], strata[i + 1]);
        for (Elem x : c.reps_[i])
            for (Elem y : strata[i].elements()) {
                Elem z = g.op(y, x);
                c.first_layer_[z] = static_cast<std::uint32_t>(i + 1);
                c.rep_of_[z] = x;
            }
    }
    c.strata_ = std::move(strata);
    c.labels_ = std::move(labels);
    return c;
}

Chain Chain::from_tower(const FiniteGroup& g, const std::vector<std::vector<Elem>>& generators,
                        std::vector<Ordinal> labels) {
    std::vector<Subgroup> strata;
    for (const auto& gens : generators) strata.push_back(subgroup_generated(g, gens));
    return from_subgroups(std::move(strata), std::move(labels));
}

Chain Chain::over_sum(const OrdinalSum& g) {
    // Conditions hold by construction: stratum(0) = {e}, strata increase
    // with the support bound, a limit stratum is the union below it, and
    // every stratum misses the units at its own position.
    return Chain{Group(g)};
}

const std::vector<Ordinal>& Chain::labels() const {
    if (!is_finite_tower()) throw Error(ErrorKind::UnboundedEnumeration, "ordinal-sum chains have no finite label list");
    return labels_;
}

std::size_t Chain::index_of(Ordinal label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label)
        throw Error(ErrorKind::ChainDoesNotCover, "no stratum labeled " + label.to_string());
    return static_cast<std::size_t>(it - labels_.begin());
}

const Subgroup& Chain::stratum(Ordinal label) const {
    if (!is_finite_tower()) throw Error(ErrorKind::UnboundedEnumeration, "ordinal-sum strata are infinite");
    return strata_[index_of(label)];
}

bool Chain::has_label(Ordinal label) const noexcept {
    if (is_finite_tower()) return std::binary_search(labels_.begin(), labels_.end(), label);
    return group_.ordinal_sum().valid_position(label) || label == group_.ordinal_sum().bound();
}

bool Chain::in_stratum(const Element& g, Ordinal label) const {
    group_.check(g);
    if (is_finite_tower()) return stratum(label).contains(std::get<Elem>(g));
    const auto& s = std::get<SparseElement>(g);
    return s.is_identity() || s.top() < label;
}

std::vector<Element> Chain::reps(Ordinal label) const {
    std::vector<Element> out;
    if (is_finite_tower()) {
        for (Elem x : reps_[index_of(label)]) out.emplace_back(x);
        return out;
    }
    const auto& sum = group_.ordinal_sum();
    if (!sum.valid_position(label)) return out;
    const auto& h = sum.coordinate();
    for (Elem c = 0; c < h.order(); ++c)
        if (c != h.identity()) out.emplace_back(sum.unit(label, c));
    return out;
}

Element Chain::canonical_rep(Ordinal label) const {
    auto xs = reps(label);
    if (xs.empty()) throw Error(ErrorKind::NoSuitableLabel, "label " + label.to_string() + " has no representatives");
    return *std::min_element(xs.begin(), xs.end());
}

StratumLocation Chain::stratum_of(const Element& g) const {
    group_.check(g);
    if (is_finite_tower()) {
        Elem x = std::get<Elem>(g);
        if (x == group_.finite().identity())
            throw Error(ErrorKind::IdentityElement, "the identity lies in every stratum");
        std::uint32_t layer = first_layer_[x];
        if (layer == 0) throw Error(ErrorKind::ChainDoesNotCover, "element outside the union of strata");
        return {labels_[layer], labels_[layer - 1]};
    }
    const auto& s = std::get<SparseElement>(g);
    if (s.is_identity()) throw Error(ErrorKind::IdentityElement, "the identity lies in every stratum");
    return {s.top().successor(), s.top()};
}

Element Chain::coset_rep(const Element& g, Ordinal label) const {
    group_.check(g);
    if (is_finite_tower()) {
        Elem x = std::get<Elem>(g);
        std::size_t i = index_of(label);
        if (first_layer_[x] != i + 1)
            throw Error(ErrorKind::ChainDoesNotCover, "element does not lie in the layer above " + label.to_string());
        return rep_of_[x];
    }
    const auto& s = std::get<SparseElement>(g);
    if (s.is_identity() || s.top() != label)
        throw Error(ErrorKind::ChainDoesNotCover, "element does not lie in the layer above " + label.to_string());
    return group_.ordinal_sum().unit(label, s.entries.back().second);
}

std::optional<Ordinal> Chain::first_label_avoiding(Ordinal from, const std::set<std::uint32_t>& forbidden) const {
    if (is_finite_tower()) {
        for (std::size_t i = 0; i + 1 < labels_.size(); ++i)
            if (!(labels_[i] < from) && !forbidden.contains(f_offset(labels_[i]))) return labels_[i];
        return std::nullopt;
    }
    const auto& sum = group_.ordinal_sum();
    for (Ordinal a = from; sum.valid_position(a); a = Ordinal::omega_times(a.q + 1)) {
        while (forbidden.contains(a.n)) ++a.n;
        if (sum.valid_position(a)) return a;
    }
    return std::nullopt;
}

Ordinal Chain::bottom() const noexcept { return is_finite_tower() ? labels_.front() : Ordinal{}; }

Chain chain_from_json(const Group& g, const json& spec) {
    if (!spec.is_object()) throw Error(ErrorKind::MalformedSpec, "chain spec must be an object");
    if (!g.is_finite_backend()) {
        if (spec.contains("tower")) throw Error(ErrorKind::MalformedSpec, "ordinal_sum chains are derived automatically");
        if (spec.contains("labels") && spec["labels"] != "auto")
            throw Error(ErrorKind::MalformedSpec, "ordinal_sum chains take \"labels\":\"auto\"");
        return Chain::over_sum(g.ordinal_sum());
    }
    if (!spec.contains("tower") || !spec["tower"].is_array())
        throw Error(ErrorKind::MalformedSpec, "finite chains need a \"tower\" array");
    std::vector<std::vector<Elem>> gens;
    for (const auto& level : spec["tower"]) {
        auto& v = gens.emplace_back();
        if (!level.is_object() || !level.contains("generators") || !level["generators"].is_array())
            throw Error(ErrorKind::MalformedSpec, "tower entries need a \"generators\" array");
        for (const auto& x : level["generators"]) v.push_back(parse_finite_element(g.finite(), x));
    }
    std::vector<Ordinal> labels;
    if (spec.contains("labels")) {
        if (spec["labels"] == "auto") throw Error(ErrorKind::MalformedSpec, "\"auto\" labels need an ordinal_sum group");
        for (const auto& l : spec["labels"]) labels.push_back(parse_ordinal(l));
    }
    return Chain::from_tower(g.finite(), gens, std::move(labels));
}

}  // namespace covlab
