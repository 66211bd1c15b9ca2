#include "covlab/group_json.hpp"

#include <fstream>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorKind::MalformedSpec, what); }

std::uint64_t natural(const json& j, const char* field) {
    if (!j.contains(field)) malformed(std::string("missing field \"") + field + "\"");
    const auto& v = j.at(field);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
        malformed(std::string("field \"") + field + "\" must be a natural number");
    return v.get<std::uint64_t>();
}

}  // namespace

FiniteGroup build_finite_group(const json& spec, const BuildOptions& opts) {
    Group g = build_group(spec, opts);
    if (!g.is_finite_backend()) malformed("expected a finite group spec, got ordinal_sum");
    return g.finite();
}

Group build_group(const json& spec, const BuildOptions& opts) {
    if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
        malformed("group spec must be an object with a string \"kind\"");
    const std::string kind = spec["kind"];
    if (kind == "cyclic") return FiniteGroup::cyclic(natural(spec, "order"));
    if (kind == "cayley") {
        if (!spec.contains("table") || !spec["table"].is_array()) malformed("cayley spec needs \"table\"");
        std::vector<std::vector<Elem>> rows;
        for (const auto& row : spec["table"]) {
            if (!row.is_array()) malformed("cayley table rows must be arrays");
            auto& r = rows.emplace_back();
            for (const auto& v : row) {
                if (!v.is_number_integer() || v.get<std::int64_t>() < 0) malformed("cayley entries must be naturals");
                r.push_back(v.get<Elem>());
            }
        }
        bool exhaustive = opts.force_exhaustive || spec.value("exhaustive", false);
        return FiniteGroup::from_table(std::move(rows), exhaustive ? Validation::exhaustive : Validation::automatic);
    }
    if (kind == "product") {
        if (!spec.contains("factors") || !spec["factors"].is_array() || spec["factors"].empty())
            malformed("product spec needs a nonempty \"factors\" array");
        std::vector<FiniteGroup> factors;
        for (const auto& f : spec["factors"]) factors.push_back(build_finite_group(f, opts));
        return FiniteGroup::product(std::move(factors));
    }
    if (kind == "ordinal_sum") {
        auto blocks = natural(spec, "blocks");
        if (blocks == 0 || blocks > 1'000'000) malformed("ordinal_sum blocks must be in [1, 10^6]");
        if (spec.contains("block_length") && spec["block_length"] != "omega")
            malformed("ordinal_sum block_length must be \"omega\"");
        if (!spec.contains("coordinate")) malformed("ordinal_sum needs a \"coordinate\" spec");
        FiniteGroup coord = build_finite_group(spec["coordinate"], opts);
        if (spec.contains("bound"))
            return OrdinalSum(std::move(coord), static_cast<std::uint32_t>(blocks), parse_ordinal(spec["bound"]));
        return OrdinalSum(std::move(coord), static_cast<std::uint32_t>(blocks));
    }
    malformed("unknown group kind \"" + kind + "\"");
}

Ordinal parse_ordinal(const json& j) {
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return {0, j.get<std::uint32_t>()};
    if (j.is_array() && j.size() == 2 && j[0].is_number_integer() && j[1].is_number_integer() &&
        j[0].get<std::int64_t>() >= 0 && j[1].get<std::int64_t>() >= 0)
        return {j[0].get<std::uint32_t>(), j[1].get<std::uint32_t>()};
    malformed("ordinal must be a natural or a pair [q,n], got " + j.dump());
}

json ordinal_to_json(Ordinal a) { return json::array({a.q, a.n}); }

Elem parse_finite_element(const FiniteGroup& g, const json& j) {
    if (j.is_number_integer()) {
        if (j.get<std::int64_t>() < 0) throw Error(ErrorKind::ElementNotInGroup, "negative element " + j.dump());
        auto v = j.get<std::uint64_t>();
        if (v >= g.order()) throw Error(ErrorKind::ElementNotInGroup, j.dump() + " is not an element of " + g.name());
        return static_cast<Elem>(v);
    }
    if (j.is_array() && g.kind() == GroupKind::product) {
        const auto& fs = g.factors();
        if (j.size() != fs.size())
            throw Error(ErrorKind::ElementNotInGroup, "expected " + std::to_string(fs.size()) + " coordinates, got " +
                                                          j.dump());
        std::vector<Elem> c;
        for (std::size_t i = 0; i < fs.size(); ++i) c.push_back(parse_finite_element(fs[i], j[i]));
        return g.from_coords(c);
    }
    throw Error(ErrorKind::ElementNotInGroup, "cannot read " + j.dump() + " as an element of " + g.name());
}

json finite_element_to_json(const FiniteGroup& g, Elem e) {
    if (g.kind() != GroupKind::product) return e;
    json out = json::array();
    const auto& fs = g.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) out.push_back(finite_element_to_json(fs[i], g.coord(e, i)));
    return out;
}

SparseElement parse_sparse_element(const OrdinalSum& g, const json& j) {
    if (!j.is_array()) throw Error(ErrorKind::ElementNotInGroup, "ordinal_sum elements are arrays, got " + j.dump());
    SparseElement out;
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("ordinal") || !entry.contains("value"))
            throw Error(ErrorKind::ElementNotInGroup, "entries need \"ordinal\" and \"value\": " + entry.dump());
        Ordinal pos = parse_ordinal(entry["ordinal"]);
        Elem v = parse_finite_element(g.coordinate(), entry["value"]);
        out = g.op(out, g.unit(pos, v));
    }
    return out;
}

json sparse_element_to_json(const OrdinalSum& g, const SparseElement& e) {
    json out = json::array();
    for (const auto& [pos, v] : e.entries)
        out.push_back({{"ordinal", ordinal_to_json(pos)}, {"value", finite_element_to_json(g.coordinate(), v)}});
    return out;
}

Element parse_element(const Group& g, const json& j) {
    if (g.is_finite_backend()) return parse_finite_element(g.finite(), j);
    return parse_sparse_element(g.ordinal_sum(), j);
}

json element_to_json(const Group& g, const Element& e) {
    g.check(e);
    if (g.is_finite_backend()) return finite_element_to_json(g.finite(), std::get<Elem>(e));
    return sparse_element_to_json(g.ordinal_sum(), std::get<SparseElement>(e));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::MalformedSpec, path + ": " + e.what());
    }
}

}  // namespace covlab
