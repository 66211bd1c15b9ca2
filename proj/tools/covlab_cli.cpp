// covlab: command-line front end. Every subcommand builds an experiment
// config and hands it to run_experiment, so `covlab report --config c.json`
// reproduces any direct invocation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "covlab/chain.hpp"
#include "covlab/errors.hpp"
#include "covlab/group_json.hpp"
#include "covlab/harness.hpp"

using namespace covlab;
namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kBudget = 3 };

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::BudgetExhausted: return kBudget;
        case ErrorKind::NotAGroup:
        case ErrorKind::NotNested:
        case ErrorKind::ChainConditionViolated:
        case ErrorKind::NotASubgroupTower:
        case ErrorKind::ChainDoesNotCover:
        case ErrorKind::InvalidPartition: return kValidation;
        default: return kUsage;
    }
}

/// A file holding JSON, or the JSON text itself.
json json_arg(const std::string& s) {
    if (fs::is_regular_file(s)) return load_json_file(s);
    try {
        return json::parse(s);
    } catch (const json::parse_error&) {
        throw Error(ErrorKind::ConfigInvalid, "\"" + s + "\" is neither a readable file nor JSON");
    }
}

struct Globals {
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::uint64_t budget = 0;
    std::string out = "-";
    std::string format = "json";
    bool timing = false;
    bool allow_empty = false;
};

/// What the chosen subcommand asked for.
struct Job {
    json cfg = json::object();
    std::string base_dir = ".";
    /// Print rows even in json format (report, tower); otherwise json
    /// prints the experiment's native output.
    bool rows = false;
    std::function<int(const Globals&)> direct;
};

void put(json& cfg, const char* key, const std::string& arg) {
    if (!arg.empty()) cfg[key] = json_arg(arg);
}

void write_text(const std::string& text, const std::string& path) {
    if (path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) throw Error(ErrorKind::IoFailure, "cannot write " + path);
}

int run_job(const Job& job, const Globals& g) {
    if (job.direct) return job.direct(g);
    const ReportFormat fmt = parse_format(g.format);
    RunOptions opts;
    opts.seed = g.seed;
    opts.threads = g.threads;
    opts.budget = g.budget;
    opts.timing = g.timing;
    opts.base_dir = job.base_dir;

    // CSV to a file is written row by row, so an interrupted sweep keeps
    // every finished row and can be resumed from the row count.
    std::optional<std::ofstream> stream;
    if (fmt == ReportFormat::csv && g.out != "-") {
        stream.emplace(g.out, std::ios::binary | std::ios::trunc);
        if (!*stream) throw Error(ErrorKind::IoFailure, "cannot open " + g.out + " for writing");
        *stream << kCsvHeader << '\n' << std::flush;
        opts.on_row = [&](const ReportRow& r) { *stream << csv_line(r) << '\n' << std::flush; };
    }
    ExperimentResult result;
    try {
        result = run_experiment(job.cfg, opts);
    } catch (...) {
        if (stream) *stream << std::flush;
        throw;
    }
    if (stream) {
        stream->close();
        if (result.rows.empty() && !g.allow_empty) {
            fs::remove(g.out);
            throw Error(ErrorKind::ConfigInvalid, "the report has no rows (pass --allow-empty to write it anyway)");
        }
        return kOk;
    }
    if (fmt == ReportFormat::json && !job.rows) {
        write_text(result.summary.dump(2) + "\n", g.out);
        return kOk;
    }
    emit_report(result.rows, fmt, g.out, g.allow_empty);
    return kOk;
}

int validate(const std::string& group_arg, const std::string& chain_arg, const Globals& g) {
    Group grp = build_group(json_arg(group_arg));
    json out = {{"group", grp.name()}, {"valid", true}};
    if (grp.is_finite_backend()) out["order"] = grp.finite().order();
    else out["order"] = "countable";
    if (!chain_arg.empty()) {
        Chain c = chain_from_json(grp, json_arg(chain_arg));
        out["chain"] = {{"labels", json::array()}};
        for (const auto& a : c.labels()) out["chain"]["labels"].push_back(ordinal_to_json(a));
    }
    write_text(out.dump(2) + "\n", g.out);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covlab: covering numbers, chain factorizations and partition experiments on groups"};
    app.fallthrough();
    app.require_subcommand(1);

    Globals g;
    app.add_option("--seed", g.seed, "Seed for every randomized step");
    app.add_option("--threads", g.threads, "Worker cap")->check(CLI::Range(1u, 256u));
    app.add_option("--budget", g.budget, "Search node budget (0 keeps defaults)");
    app.add_option("--out", g.out, "Output path, - for stdout");
    app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timing", g.timing, "Record wall-clock milliseconds per row");
    app.add_flag("--allow-empty", g.allow_empty, "Write a report even when it has no rows");

    Job job;
    std::string group_arg, chain_arg, set_arg, element_arg, k_arg, s_arg, factor_arg, config_arg;
    std::size_t n = 1, max_n = 2, max_length = 2, offsets = 10, from = 1, to = 1;
    std::uint64_t iters = 1000;
    bool greedy = false, bounds = false, canonical = false, right = false, diff = false, random = false;
    std::string measure = "theorem2";

    auto group_opt = [&](CLI::App* sub) { sub->add_option("--group", group_arg, "Group spec (file or JSON)")->required(); };
    auto chain_opt = [&](CLI::App* sub) {
        sub->add_option("--chain", chain_arg, "Subgroup tower (file or JSON); ordinal sums default to their blocks");
    };
    auto offsets_opt = [&](CLI::App* sub) {
        sub->add_option("--offsets", offsets, "Ordinal sums: positions per block in the enumeration region");
    };

    auto* validate_cmd = app.add_subcommand("validate", "Check a group spec and optional chain");
    group_opt(validate_cmd);
    chain_opt(validate_cmd);
    validate_cmd->callback([&] { job.direct = [&](const Globals& gl) { return validate(group_arg, chain_arg, gl); }; });

    auto* cov = app.add_subcommand("cov", "Covering number of a subset");
    group_opt(cov);
    cov->add_option("--set", set_arg, "Subset as a JSON array (file or JSON)")->required();
    auto* exact_flag = cov->add_flag("--exact", "Exact branch and bound (default)");
    cov->add_flag("--greedy", greedy, "Greedy upper bound")->excludes(exact_flag);
    cov->add_flag("--bounds", bounds, "Lower and upper bounds only")->excludes(exact_flag);
    cov->add_flag("--canonical", canonical, "Lexicographically least minimum witness");
    cov->add_flag("--right", right, "Cover from the right: A X = G");
    cov->add_flag("--difference-set", diff, "Cover A A^-1 instead of A");
    cov->callback([&] {
        job.cfg = {{"experiment", "cov"},
                   {"method", greedy ? "greedy" : bounds ? "bounds" : "exact"},
                   {"side", right ? "right" : "left"},
                   {"canonical", canonical},
                   {"difference_set", diff}};
        put(job.cfg, "group", group_arg);
        put(job.cfg, "set", set_arg);
    });

    auto* t1 = app.add_subcommand("theorem1", "Chain factorizations, chi cells and separation witnesses");
    t1->require_subcommand(1);
    auto* t1_fact = t1->add_subcommand("factorize", "Factor an element along the chain");
    auto* t1_cells = t1->add_subcommand("cells", "Cell sizes of the chi partition");
    auto* t1_wit = t1->add_subcommand("witness", "Find and check h with K H_s and h H_s disjoint");
    for (auto* sub : {t1_fact, t1_cells, t1_wit}) {
        group_opt(sub);
        chain_opt(sub);
    }
    t1_fact->add_option("--element", element_arg, "Element (file or JSON)")->required();
    offsets_opt(t1_cells);
    t1_cells->add_option("--max-length", max_length, "Ordinal sums: longest chi label listed");
    t1_wit->add_option("--K", k_arg, "Array of elements (file or JSON)")->required();
    t1_wit->add_option("--s", s_arg, "chi label, e.g. [0,2]")->required();
    offsets_opt(t1_wit);
    auto t1_job = [&](const char* op) {
        job.cfg = {{"experiment", "theorem1"}, {"op", op}};
        put(job.cfg, "group", group_arg);
        put(job.cfg, "chain", chain_arg);
    };
    t1_fact->callback([&] {
        t1_job("factorize");
        put(job.cfg, "element", element_arg);
    });
    t1_cells->callback([&] {
        t1_job("cells");
        job.cfg["offsets"] = offsets;
        job.cfg["max_length"] = max_length;
    });
    t1_wit->callback([&] {
        t1_job("witness");
        put(job.cfg, "K", k_arg);
        put(job.cfg, "s", s_arg);
        job.cfg["offsets"] = offsets;
    });

    auto* t2 = app.add_subcommand("theorem2", "Support-size partitions of direct products");
    t2->require_subcommand(1);
    auto* t2_cells = t2->add_subcommand("cells", "Cell sizes |A_n|");
    auto* t2_wit = t2->add_subcommand("witness", "Find and check h outside K A_n A_n^-1");
    auto* t2_cov = t2->add_subcommand("cov-per-cell", "cov(A_n A_n^-1) for each cell");
    for (auto* sub : {t2_cells, t2_wit, t2_cov}) group_opt(sub);
    offsets_opt(t2_cells);
    t2_cells->add_option("--max-n", max_n, "Ordinal sums: largest support size listed");
    t2_wit->add_option("--K", k_arg, "Array of elements (file or JSON)")->required();
    t2_wit->add_option("--n", n, "Cell index");
    offsets_opt(t2_wit);
    auto* t2_max = t2_cov->add_option("--max-n", max_n, "Largest cell index (default: all)");
    t2_cov->add_flag("--bounds", bounds, "Bounds instead of exact cover numbers");
    auto t2_job = [&](const char* op) {
        job.cfg = {{"experiment", "theorem2"}, {"op", op}};
        put(job.cfg, "group", group_arg);
    };
    t2_cells->callback([&] {
        t2_job("cells");
        job.cfg["offsets"] = offsets;
        job.cfg["max_n"] = max_n;
    });
    t2_wit->callback([&] {
        t2_job("witness");
        put(job.cfg, "K", k_arg);
        job.cfg["n"] = n;
        job.cfg["offsets"] = offsets;
    });
    t2_cov->callback([&] {
        t2_job("cov-per-cell");
        if (t2_max->count()) job.cfg["max_n"] = max_n;
        job.cfg["method"] = bounds ? "bounds" : "exact";
    });

    auto* phi = app.add_subcommand("phi", "Largest min cell cov(A A^-1) over n-cell partitions");
    group_opt(phi);
    phi->add_option("--n", n, "Number of cells")->required();
    auto* exhaustive_flag = phi->add_flag("--exhaustive", "Search every partition (default)");
    phi->add_flag("--random", random, "Seeded local search")->excludes(exhaustive_flag);
    phi->add_option("--iters", iters, "Random search moves");
    phi->callback([&] {
        job.cfg = {{"experiment", "phi"}, {"n", n}, {"mode", random ? "random" : "exhaustive"}, {"iters", iters}};
        put(job.cfg, "group", group_arg);
    });

    auto* tower = app.add_subcommand("tower", "Sweep F^m over a range of m");
    tower->add_option("--factor", factor_arg, "Factor group spec (file or JSON)")->required();
    tower->add_option("--from", from, "Smallest m")->required();
    tower->add_option("--to", to, "Largest m")->required();
    tower->add_option("--measure", measure, "theorem2 or phi")->check(CLI::IsMember({"theorem2", "phi"}));
    tower->add_option("--max-n", max_n, "theorem2: largest cell index");
    tower->add_option("--n", n, "phi: number of cells");
    tower->add_flag("--bounds", bounds, "theorem2: bounds instead of exact cover numbers");
    tower->callback([&] {
        job.cfg = {{"experiment", "tower"},
                   {"m", {{"from", from}, {"to", to}}},
                   {"measure", measure},
                   {"max_n", max_n},
                   {"n", n},
                   {"method", bounds ? "bounds" : "exact"}};
        put(job.cfg, "factor", factor_arg);
        job.rows = true;
    });

    auto* report = app.add_subcommand("report", "Run an experiment config and emit its rows");
    report->add_option("--config", config_arg, "Experiment config file")->required()->check(CLI::ExistingFile);
    report->callback([&] {
        job.cfg = load_json_file(config_arg);
        job.base_dir = fs::path(config_arg).parent_path().string();
        if (job.base_dir.empty()) job.base_dir = ".";
        job.rows = true;
    });

    try {
        app.parse(argc, argv);
        return run_job(job, g);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    } catch (const Error& e) {
        std::cerr << "covlab: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "covlab: internal error: " << e.what() << '\n';
        return kValidation;
    }
}
