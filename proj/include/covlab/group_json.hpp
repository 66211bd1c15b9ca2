#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "covlab/group.hpp"

namespace covlab {

using json = nlohmann::json;

struct BuildOptions {
    /// Check every associativity triple regardless of table size.
    bool force_exhaustive = false;
};

/// Builds a group from a GroupSpec document:
///   {"kind":"cyclic","order":N}
///   {"kind":"cayley","table":[[...],...]}
///   {"kind":"product","factors":[spec,...]}
///   {"kind":"ordinal_sum","blocks":Q,"block_length":"omega","coordinate":spec}
/// An ordinal_sum may add "bound":[q,n] to truncate the positions below
/// omega*q+n. Throws MalformedSpec or NotAGroup.
Group build_group(const json& spec, const BuildOptions& opts = {});
FiniteGroup build_finite_group(const json& spec, const BuildOptions& opts = {});

Ordinal parse_ordinal(const json& j);
json ordinal_to_json(Ordinal a);

/// Finite elements are integers (table index) or, for products, arrays of
/// coordinate elements. Ordinal-sum elements are arrays of
/// {"ordinal":[q,n],"value":v}.
Element parse_element(const Group& g, const json& j);
json element_to_json(const Group& g, const Element& e);
Elem parse_finite_element(const FiniteGroup& g, const json& j);
json finite_element_to_json(const FiniteGroup& g, Elem e);
SparseElement parse_sparse_element(const OrdinalSum& g, const json& j);
json sparse_element_to_json(const OrdinalSum& g, const SparseElement& e);

/// Reads and parses a JSON file; IoFailure when unreadable, MalformedSpec
/// when not JSON.
json load_json_file(const std::string& path);

}  // namespace covlab
