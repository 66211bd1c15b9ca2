#include "covlab/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "covlab/chain.hpp"
#include "covlab/constructions.hpp"
#include "covlab/covering.hpp"
#include "covlab/errors.hpp"
#include "covlab/factorization.hpp"
#include "covlab/phi.hpp"

namespace covlab {

namespace {

class Clock {
public:
    explicit Clock(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        if (!on_) return 0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    bool on_;
    std::chrono::steady_clock::time_point start_;
};

/// Collects rows in report order and forwards them to the streaming hook.
class Rows {
public:
    Rows(std::string experiment, std::string group, const RunOptions& opts)
        : experiment_(std::move(experiment)), group_(std::move(group)), opts_(opts) {}

    void add(json params, std::string metric, json value, double wall_ms = 0) {
        rows_.push_back({experiment_, group_, std::move(params), std::move(metric), std::move(value), wall_ms});
        if (opts_.on_row) opts_.on_row(rows_.back());
    }
    std::vector<ReportRow> take() { return std::move(rows_); }

private:
    std::string experiment_;
    std::string group_;
    const RunOptions& opts_;
    std::vector<ReportRow> rows_;
};

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorKind::ConfigInvalid, what); }

std::string join_path(const std::string& base, const std::string& p) {
    if (p.empty() || p.front() == '/' || base.empty() || base == ".") return p;
    return base + "/" + p;
}

/// cfg[key], or the parsed contents of cfg[key + "_file"].
json resolve(const json& cfg, const std::string& key, const RunOptions& opts) {
    if (cfg.contains(key)) return cfg.at(key);
    const std::string file_key = key + "_file";
    if (cfg.contains(file_key)) {
        if (!cfg.at(file_key).is_string()) bad_config("\"" + file_key + "\" must be a path");
        const std::string path = join_path(opts.base_dir, cfg.at(file_key).get<std::string>());
        try {
            return load_json_file(path);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::IoFailure) bad_config("cannot read " + file_key + " " + path);
            throw;
        }
    }
    bad_config("missing \"" + key + "\" (or \"" + file_key + "\")");
}

template <class T>
T param(const json& cfg, const std::string& key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception&) {
        bad_config("parameter \"" + key + "\" has the wrong type");
    }
}

std::string required_string(const json& cfg, const std::string& key) {
    if (!cfg.contains(key) || !cfg.at(key).is_string()) bad_config("missing string parameter \"" + key + "\"");
    return cfg.at(key).get<std::string>();
}

const FiniteGroup& require_finite(const Group& g, const std::string& what) {
    if (!g.is_finite_backend()) bad_config(what + " needs a finite group, got " + g.name());
    return g.finite();
}

std::vector<Element> parse_elements(const Group& g, const json& arr) {
    if (!arr.is_array()) bad_config("expected an array of elements");
    std::vector<Element> out;
    for (const auto& j : arr) out.push_back(parse_element(g, j));
    return out;
}

json elements_json(const Group& g, const std::vector<Elem>& xs) {
    json out = json::array();
    for (Elem x : xs) out.push_back(element_to_json(g, Element{x}));
    return out;
}

json chi_json(const ChiLabel& s) { return json(std::vector<std::uint32_t>(s.begin(), s.end())); }

/// Block prefix of the sum plus every position touched by `extra`.
Region region_for(const OrdinalSum& sum, std::uint32_t offsets, const std::vector<Element>& extra) {
    Region r = Region::block_prefix(sum, offsets);
    for (const auto& x : extra)
        for (const auto& [pos, v] : std::get<SparseElement>(x).entries) r.positions.push_back(pos);
    std::sort(r.positions.begin(), r.positions.end());
    r.positions.erase(std::unique(r.positions.begin(), r.positions.end()), r.positions.end());
    return r;
}

std::uint32_t offsets_param(const json& cfg) {
    auto v = param<std::int64_t>(cfg, "offsets", 10);
    if (v < 1 || v > 1'000'000) bad_config("\"offsets\" must be between 1 and 1000000");
    return static_cast<std::uint32_t>(v);
}

CoverOptions cover_options(const json& cfg, const RunOptions& opts) {
    CoverOptions co;
    co.seed = param<std::uint64_t>(cfg, "seed", opts.seed);
    const auto budget = param<std::uint64_t>(cfg, "budget", opts.budget);
    if (budget) co.node_budget = budget;
    return co;
}

// ---------------------------------------------------------------- cov

ExperimentResult run_cov(const json& cfg, const RunOptions& opts) {
    Group grp = build_group(resolve(cfg, "group", opts));
    const auto& g = require_finite(grp, "cov");
    std::vector<Elem> elems;
    for (const auto& x : parse_elements(grp, resolve(cfg, "set", opts))) elems.push_back(std::get<Elem>(x));
    SubsetOfG a = SubsetOfG::of(g, elems);
    const bool diff = param<bool>(cfg, "difference_set", false);
    if (diff) a = difference_set(a);
    const std::string method = param<std::string>(cfg, "method", "exact");
    const std::string side_name = param<std::string>(cfg, "side", "left");
    if (side_name != "left" && side_name != "right") bad_config("\"side\" must be left or right");
    const CoverSide side = side_name == "left" ? CoverSide::left : CoverSide::right;

    Clock clock(opts.timing);
    Rows rows("cov", g.name(), opts);
    json params = {{"set_size", a.size()}, {"method", method}, {"side", side_name}, {"difference_set", diff}};
    json summary;
    if (method == "bounds") {
        auto b = cov_bounds(a, side);
        summary = {{"method", "bounds"}, {"lower", b.lower}, {"upper", b.upper}, {"proven_optimal", b.lower == b.upper}};
        const double ms = clock.ms();
        rows.add(params, "lower_bound", b.lower, ms);
        rows.add(params, "upper_bound", b.upper, ms);
        return {rows.take(), summary};
    }
    CoverResult r;
    if (method == "exact") {
        CoverOptions co = cover_options(cfg, opts);
        co.side = side;
        co.canonical = param<bool>(cfg, "canonical", false);
        r = cov_exact(a, co);
    } else if (method == "greedy") {
        r = cov_greedy(a, side);
    } else {
        bad_config("\"method\" must be exact, greedy or bounds");
    }
    const double ms = clock.ms();
    summary = {{"value", r.value},
               {"witness", elements_json(grp, r.witness)},
               {"method", to_string(r.method)},
               {"proven_optimal", r.proven_optimal},
               {"nodes_explored", r.nodes_explored},
               {"lower_bound", r.lower_bound},
               {"canonical", r.canonical}};
    rows.add(params, "value", r.value, ms);
    rows.add(params, "lower_bound", r.lower_bound, ms);
    rows.add(params, "proven_optimal", r.proven_optimal, ms);
    rows.add(params, "nodes_explored", r.nodes_explored, ms);
    rows.add(params, "witness", summary["witness"], ms);
    return {rows.take(), summary};
}

// ---------------------------------------------------------------- theorem1

Chain chain_for(const Group& g, const json& cfg, const RunOptions& opts) {
    if (cfg.contains("chain") || cfg.contains("chain_file")) return chain_from_json(g, resolve(cfg, "chain", opts));
    if (g.is_finite_backend()) bad_config("finite groups need an explicit \"chain\" tower");
    return Chain::over_sum(g.ordinal_sum());
}

/// Distinct chi labels of length <= max_len realized by increasing
/// positions of the region.
std::set<ChiLabel> labels_in_region(const Region& r, std::size_t max_len) {
    std::set<ChiLabel> out{ChiLabel{}};
    ChiLabel cur;
    auto walk = [&](auto&& self, std::size_t from) -> void {
        if (cur.size() == max_len) return;
        for (std::size_t j = from; j < r.positions.size(); ++j) {
            cur.push_back(r.positions[j].n);
            out.insert(cur);
            self(self, j + 1);
            cur.pop_back();
        }
    };
    walk(walk, 0);
    return out;
}

ExperimentResult run_chain_experiment(const json& cfg, const RunOptions& opts) {
    Group g = build_group(resolve(cfg, "group", opts));
    Chain chain = chain_for(g, cfg, opts);
    const std::string op = required_string(cfg, "op");
    Rows rows("theorem1", g.name(), opts);
    Clock clock(opts.timing);
    json summary;

    if (op == "factorize") {
        Element x = parse_element(g, resolve(cfg, "element", opts));
        auto f = factorize(x, chain);
        auto s = chi(x, chain);
        const double ms = clock.ms();
        json params = {{"op", op}, {"element", element_to_json(g, x)}};
        summary = {{"element", element_to_json(g, x)},
                   {"factors", factorization_to_json(f, g)},
                   {"length", f.length()},
                   {"max", f.max() ? ordinal_to_json(*f.max()) : json(nullptr)},
                   {"chi", chi_json(s)}};
        rows.add(params, "length", f.length(), ms);
        rows.add(params, "chi", summary["chi"], ms);
        rows.add(params, "factors", summary["factors"], ms);
        return {rows.take(), summary};
    }

    if (op == "cells") {
        json cells = json::array();
        bool verified = true;
        std::size_t region_size = 0;
        json params = {{"op", op}};
        if (chain.is_finite_tower()) {
            const auto& fg = g.finite();
            std::map<ChiLabel, std::size_t> counts;
            for (Elem x = 0; x < fg.order(); ++x) ++counts[chi(Element{x}, chain)];
            std::size_t total = 0;
            for (const auto& [s, n] : counts) {
                verified = verified && enumerate_cell(s, chain).size() == n;
                total += n;
                cells.push_back({{"s", chi_json(s)}, {"size", n}});
            }
            verified = verified && total == fg.order();
            region_size = fg.order();
        } else {
            const auto& sum = g.ordinal_sum();
            const std::uint32_t offsets = offsets_param(cfg);
            const auto max_len = param<std::size_t>(cfg, "max_length", 2);
            const Region region = Region::block_prefix(sum, offsets);
            params["offsets"] = offsets;
            params["max_length"] = max_len;
            for (const auto& s : labels_in_region(region, max_len))
                cells.push_back({{"s", chi_json(s)}, {"size", cell_size(s, chain, region)}});
            // Small regions are also checked element by element.
            const double bits = static_cast<double>(region.positions.size()) *
                                std::log2(static_cast<double>(sum.coordinate().order()));
            if (bits <= 16) {
                std::map<ChiLabel, std::uint64_t> counts;
                const auto all = enumerate_region(chain, region);
                for (const auto& x : all) ++counts[chi(x, chain)];
                std::uint64_t total = 0;
                for (const auto& [s, n] : counts) {
                    verified = verified && cell_size(s, chain, region) == n;
                    total += n;
                }
                verified = verified && total == all.size();
                region_size = all.size();
            }
        }
        const double ms = clock.ms();
        summary = {{"cells", cells}, {"partition_verified", region_size ? json(verified) : json(nullptr)}};
        if (region_size) summary["region_size"] = region_size;
        for (const auto& c : cells) {
            json p = params;
            p["s"] = c["s"];
            rows.add(p, "cell_size", c["size"], ms);
        }
        rows.add(params, "partition_verified", summary["partition_verified"], ms);
        return {rows.take(), summary};
    }

    if (op == "witness") {
        auto k = parse_elements(g, resolve(cfg, "K", opts));
        ChiLabel s = parse_chi_label(resolve(cfg, "s", opts));
        json params = {{"op", op}, {"K", json::array()}, {"s", chi_json(s)}};
        for (const auto& x : k) params["K"].push_back(element_to_json(g, x));
        Element h;
        try {
            h = separation_witness(k, s, chain);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoSuitableLabel) throw;
            summary = {{"h", nullptr}, {"reason", e.message()}};
            rows.add(params, "status", std::string("NoSuitableLabel"), clock.ms());
            return {rows.take(), summary};
        }
        std::optional<Region> region;
        if (!chain.is_finite_tower()) {
            std::vector<Element> touched = k;
            touched.push_back(h);
            region = region_for(g.ordinal_sum(), offsets_param(cfg), touched);
            params["offsets"] = offsets_param(cfg);
        }
        auto report = verify_separation(k, s, h, chain, region);
        const double ms = clock.ms();
        summary = {{"h", element_to_json(g, h)},
                   {"gamma", ordinal_to_json(chain.stratum_of(h).predecessor)},
                   {"pass", report.pass},
                   {"cell_size", report.cell_size},
                   {"products_checked", report.products_checked}};
        if (!report.pass)
            summary["intersection"] = {{"k", element_to_json(g, *report.k)},
                                       {"x", element_to_json(g, *report.x)},
                                       {"x2", element_to_json(g, *report.x2)}};
        rows.add(params, "h", summary["h"], ms);
        rows.add(params, "pass", report.pass, ms);
        rows.add(params, "cell_size", report.cell_size, ms);
        rows.add(params, "products_checked", report.products_checked, ms);
        return {rows.take(), summary};
    }
    bad_config("theorem1 \"op\" must be factorize, cells or witness");
}

// ---------------------------------------------------------------- theorem2

struct CellCov {
    std::size_t n = 0;
    std::size_t cell_size = 0;
    std::size_t diffset_size = 0;
    std::size_t cov_lower = 0;
    std::size_t cov_upper = 0;
    bool proven = false;
    bool exact = false;
};

CellCov cell_cov(const SupportPartition& part, std::size_t n, bool exact, const CoverOptions& co) {
    CellCov c;
    c.n = n;
    c.cell_size = part.cells[n].size();
    if (c.cell_size == 0) return c;
    auto d = difference_set(part.cells[n]);
    c.diffset_size = d.size();
    c.exact = exact;
    if (exact) {
        auto r = cov_exact(d, co);
        c.cov_lower = r.lower_bound;
        c.cov_upper = r.value;
        c.proven = r.proven_optimal;
    } else {
        auto b = cov_bounds(d);
        c.cov_lower = b.lower;
        c.cov_upper = b.upper;
        c.proven = b.lower == b.upper;
    }
    return c;
}

json cell_cov_json(const CellCov& c) {
    json j = {{"n", c.n}, {"cell_size", c.cell_size}, {"diffset_size", c.diffset_size}, {"cov_lower", c.cov_lower}};
    if (c.proven) j["cov_exact"] = c.cov_upper;
    else j["cov_upper"] = c.cov_upper;
    return j;
}

ExperimentResult run_support_experiment(const json& cfg, const RunOptions& opts) {
    Group g = build_group(resolve(cfg, "group", opts));
    const std::string op = required_string(cfg, "op");
    Rows rows("theorem2", g.name(), opts);
    Clock clock(opts.timing);
    json summary;

    if (op == "cells") {
        json cells = json::array();
        json params = {{"op", op}};
        if (g.is_finite_backend()) {
            const std::size_t c = coordinate_count(g.finite());
            for (std::size_t n = 0; n <= c; ++n)
                cells.push_back({{"n", n}, {"cell_size", support_cell_size(g.finite(), n)}});
        } else {
            const auto& sum = g.ordinal_sum();
            const Region region = Region::block_prefix(sum, offsets_param(cfg));
            const auto max_n = param<std::size_t>(cfg, "max_n", 3);
            params["offsets"] = offsets_param(cfg);
            const std::uint64_t r = region.positions.size(), v = sum.coordinate().order() - 1;
            std::uint64_t choose = 1, power = 1;
            for (std::size_t n = 0; n <= max_n && n <= r; ++n) {
                cells.push_back({{"n", n}, {"cell_size", choose * power}});
                choose = choose * (r - n) / (n + 1);
                power *= v;
            }
        }
        const double ms = clock.ms();
        summary = {{"cells", cells}};
        for (const auto& c : cells) {
            json p = params;
            p["n"] = c["n"];
            rows.add(p, "cell_size", c["cell_size"], ms);
        }
        return {rows.take(), summary};
    }

    if (op == "witness") {
        auto k = parse_elements(g, resolve(cfg, "K", opts));
        const auto n = param<std::size_t>(cfg, "n", 1);
        json params = {{"op", op}, {"n", n}, {"K", json::array()}};
        for (const auto& x : k) params["K"].push_back(element_to_json(g, x));
        Element h;
        try {
            h = support_witness(g, k, n);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::InsufficientFactors) throw;
            summary = {{"h", nullptr}, {"reason", e.message()}};
            rows.add(params, "status", std::string("InsufficientFactors"), clock.ms());
            return {rows.take(), summary};
        }
        std::optional<Region> region;
        if (!g.is_finite_backend()) {
            std::vector<Element> touched = k;
            touched.push_back(h);
            region = region_for(g.ordinal_sum(), offsets_param(cfg), touched);
            params["offsets"] = offsets_param(cfg);
        }
        auto report = verify_support_witness(g, k, n, h, region);
        const double ms = clock.ms();
        summary = {{"h", element_to_json(g, h)},
                   {"support_size", support(g, h).size()},
                   {"pass", report.pass},
                   {"checked", report.checked}};
        if (!report.pass)
            summary["failure"] = {{"k", element_to_json(g, *report.k)},
                                  {"a", element_to_json(g, *report.a)},
                                  {"b", element_to_json(g, *report.b)}};
        rows.add(params, "h", summary["h"], ms);
        rows.add(params, "pass", report.pass, ms);
        rows.add(params, "checked", report.checked, ms);
        return {rows.take(), summary};
    }

    if (op == "cov-per-cell") {
        const auto& fg = require_finite(g, "theorem2 cov-per-cell");
        auto part = support_partition(fg);
        const std::size_t top = part.cells.size() - 1;
        const auto max_n = std::min(param<std::size_t>(cfg, "max_n", top), top);
        const std::string method = param<std::string>(cfg, "method", "exact");
        if (method != "exact" && method != "bounds") bad_config("\"method\" must be exact or bounds");
        const CoverOptions co = cover_options(cfg, opts);
        std::vector<CellCov> out(max_n + 1);
        std::vector<double> ms(max_n + 1, 0);
        parallel_for(max_n + 1, opts.threads, [&](std::size_t n) {
            Clock c(opts.timing);
            out[n] = cell_cov(part, n, method == "exact", co);
            ms[n] = c.ms();
        });
        summary = json::array();
        for (const auto& c : out) {
            json j = cell_cov_json(c);
            json p = {{"op", op}, {"n", c.n}, {"method", method}};
            rows.add(p, "cell_size", c.cell_size, ms[c.n]);
            rows.add(p, "diffset_size", c.diffset_size, ms[c.n]);
            rows.add(p, "cov_lower", c.cov_lower, ms[c.n]);
            rows.add(p, c.proven ? "cov_exact" : "cov_upper", c.cov_upper, ms[c.n]);
            summary.push_back(std::move(j));
        }
        return {rows.take(), summary};
    }
    bad_config("theorem2 \"op\" must be cells, witness or cov-per-cell");
}

// ---------------------------------------------------------------- phi

ExperimentResult run_phi(const json& cfg, const RunOptions& opts) {
    Group grp = build_group(resolve(cfg, "group", opts));
    const auto& g = require_finite(grp, "phi");
    const auto n = param<std::size_t>(cfg, "n", 2);
    const std::string mode = param<std::string>(cfg, "mode", "exhaustive");
    PhiOptions po;
    po.threads = opts.threads;
    po.budget = param<std::uint64_t>(cfg, "budget", opts.budget);
    po.cover.seed = param<std::uint64_t>(cfg, "seed", opts.seed);
    Clock clock(opts.timing);
    PhiReport r;
    json params = {{"n", n}, {"mode", mode}};
    if (mode == "exhaustive") {
        r = phi_exhaustive(g, n, po);
        params["budget"] = po.budget;
        if (!r.complete && r.phi_value == 0)
            throw Error(ErrorKind::BudgetExhausted, "budget ran out before any partition was complete");
    } else if (mode == "random") {
        const auto iters = param<std::uint64_t>(cfg, "iters", 1000);
        const auto seed = param<std::uint64_t>(cfg, "seed", opts.seed);
        params["iters"] = iters;
        params["seed"] = seed;
        r = phi_random_search(g, n, iters, seed, po);
    } else {
        bad_config("phi \"mode\" must be exhaustive or random");
    }
    const double ms = clock.ms();
    json summary = phi_report_to_json(r);
    Rows rows("phi", g.name(), opts);
    rows.add(params, "phi_value", r.phi_value, ms);
    rows.add(params, "partitions_examined", r.partitions_examined, ms);
    rows.add(params, "complete", r.complete, ms);
    rows.add(params, "exceeds_n", r.exceeds_n, ms);
    rows.add(params, "argmax", summary["argmax"], ms);
    return {rows.take(), summary};
}

// ---------------------------------------------------------------- tower

ExperimentResult run_tower(const json& cfg, const RunOptions& opts) {
    const FiniteGroup factor = build_finite_group(resolve(cfg, "factor", opts));
    if (!cfg.contains("m") || !cfg["m"].is_object()) bad_config("tower needs \"m\": {\"from\": a, \"to\": b}");
    const auto from = param<std::size_t>(cfg["m"], "from", 1);
    const auto to = param<std::size_t>(cfg["m"], "to", from);
    if (from < 1 || to < from) bad_config("tower range \"m\" is empty");
    const std::string measure = param<std::string>(cfg, "measure", "theorem2");
    const std::string method = param<std::string>(cfg, "method", "exact");
    if (method != "exact" && method != "bounds") bad_config("\"method\" must be exact or bounds");

    struct Slot {
        std::size_t m, n;
    };
    std::vector<Slot> slots;
    const auto max_n = param<std::size_t>(cfg, "max_n", 2);
    const auto phi_n = param<std::size_t>(cfg, "n", 2);
    for (std::size_t m = from; m <= to; ++m) {
        if (measure == "theorem2") {
            for (std::size_t n = 0; n <= std::min(max_n, m); ++n) slots.push_back({m, n});
        } else if (measure == "phi") {
            slots.push_back({m, phi_n});
        } else {
            bad_config("tower \"measure\" must be theorem2 or phi");
        }
    }
    const std::string family = factor.name() + "^m";
    Rows rows("tower", family, opts);
    const CoverOptions co = cover_options(cfg, opts);

    // Slots finish in any order; rows are released strictly in slot order.
    std::vector<std::optional<std::pair<ReportRow, json>>> done(slots.size());
    std::mutex mu;
    std::size_t flushed = 0;
    std::vector<ReportRow> ordered;
    json summary = json::array();
    auto release = [&] {
        while (flushed < done.size() && done[flushed]) {
            auto& [row, j] = *done[flushed];
            ordered.push_back(row);
            if (opts.on_row) opts.on_row(row);
            summary.push_back(j);
            ++flushed;
        }
    };
    parallel_for(slots.size(), opts.threads, [&](std::size_t i) {
        Clock clock(opts.timing);
        const auto [m, n] = slots[i];
        const FiniteGroup g = FiniteGroup::product(std::vector<FiniteGroup>(m, factor));
        ReportRow row{"tower", g.name(), {{"m", m}, {"n", n}, {"measure", measure}}, "", nullptr, 0};
        json j = {{"m", m}, {"n", n}};
        if (measure == "theorem2") {
            auto c = cell_cov(support_partition(g), n, method == "exact", co);
            row.metric = c.proven ? "cov_exact" : "cov_upper";
            row.value = c.cov_upper;
            j.update(cell_cov_json(c));
        } else {
            PhiOptions po;
            po.cover = co;
            auto r = phi_exhaustive(g, n, po);
            row.metric = "phi_value";
            row.value = r.phi_value;
            j["phi_value"] = r.phi_value;
            j["complete"] = r.complete;
        }
        row.wall_ms = clock.ms();
        std::lock_guard lock(mu);
        done[i].emplace(std::move(row), std::move(j));
        release();
    });
    return {ordered, summary};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_ms(double ms) {
    if (ms == 0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

}  // namespace

ExperimentResult run_experiment(const json& cfg, const RunOptions& opts) {
    if (!cfg.is_object()) bad_config("an experiment config is a JSON object");
    const std::string kind = required_string(cfg, "experiment");
    try {
        if (kind == "cov") return run_cov(cfg, opts);
        if (kind == "theorem1") return run_chain_experiment(cfg, opts);
        if (kind == "theorem2") return run_support_experiment(cfg, opts);
        if (kind == "phi") return run_phi(cfg, opts);
        if (kind == "tower") return run_tower(cfg, opts);
    } catch (const Error& e) {
        throw Error(e.kind(), kind + ": " + e.message());
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, kind + ": " + e.what());
    }
    bad_config("unknown experiment \"" + kind + "\" (cov, theorem1, theorem2, phi, tower)");
}

ReportFormat parse_format(const std::string& s) {
    if (s == "json") return ReportFormat::json;
    if (s == "csv") return ReportFormat::csv;
    bad_config("format must be json or csv, got \"" + s + "\"");
}

std::string csv_line(const ReportRow& row) {
    const std::string value = row.value.is_string() ? row.value.get<std::string>() : row.value.dump();
    return csv_escape(row.experiment) + "," + csv_escape(row.group) + "," + csv_escape(row.params.dump()) + "," +
           csv_escape(row.metric) + "," + csv_escape(value) + "," + format_ms(row.wall_ms);
}

json row_to_json(const ReportRow& row) {
    return {{"experiment", row.experiment}, {"group", row.group},   {"params", row.params},
            {"metric", row.metric},         {"value", row.value},   {"wall_ms", row.wall_ms}};
}

std::string format_report(const std::vector<ReportRow>& rows, ReportFormat fmt) {
    if (fmt == ReportFormat::csv) {
        std::string out = std::string(kCsvHeader) + "\n";
        for (const auto& r : rows) out += csv_line(r) + "\n";
        return out;
    }
    json arr = json::array();
    for (const auto& r : rows) arr.push_back(row_to_json(r));
    return arr.dump(2) + "\n";
}

void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, const std::string& path, bool allow_empty) {
    if (rows.empty() && !allow_empty) bad_config("the report has no rows (pass --allow-empty to write it anyway)");
    const std::string text = format_report(rows, fmt);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path);
}

}  // namespace covlab
