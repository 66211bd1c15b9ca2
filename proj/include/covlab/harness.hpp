#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "covlab/group_json.hpp"

namespace covlab {

/// One measured value. Rows are self-describing: the params object holds
/// everything needed to reproduce the measurement.
struct ReportRow {
    std::string experiment;
    std::string group;
    json params = json::object();
    std::string metric;
    json value;
    double wall_ms = 0;
};

struct ExperimentResult {
    std::vector<ReportRow> rows;
    /// The experiment's native JSON output (cover result, phi report, ...).
    json summary;
};

struct RunOptions {
    unsigned threads = 1;
    std::uint64_t seed = 0;
    /// Node budget for searches; 0 keeps each experiment's default.
    std::uint64_t budget = 0;
    /// Record wall-clock time per row. Off, wall_ms is 0 so reports are
    /// byte-stable.
    bool timing = false;
    /// Directory that relative *_file paths in the config resolve against.
    std::string base_dir = ".";
    /// Called with each row as soon as it is final, in report order.
    std::function<void(const ReportRow&)> on_row;
};

/// Runs one experiment config (see README for the schema). Module errors
/// propagate with the experiment kind prepended; unknown kinds, missing
/// files and bad parameters throw ConfigInvalid.
ExperimentResult run_experiment(const json& cfg, const RunOptions& opts = {});

enum class ReportFormat { json, csv };
ReportFormat parse_format(const std::string& s);

inline constexpr const char* kCsvHeader = "experiment,group,params,metric,value,wall_ms";

std::string csv_line(const ReportRow& row);
json row_to_json(const ReportRow& row);
std::string format_report(const std::vector<ReportRow>& rows, ReportFormat fmt);

/// Writes rows to `path` ("-" for stdout). Throws ConfigInvalid for an empty
/// report unless allow_empty, IoFailure when the file cannot be written.
void emit_report(const std::vector<ReportRow>& rows, ReportFormat fmt, const std::string& path,
                 bool allow_empty = false);

/// Runs f(0..count-1) on up to `threads` workers. Callers write results into
/// slots indexed by i, so output order never depends on scheduling. The
/// exception from the lowest failing index is rethrown.
template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::size_t failed_at = count;
    std::exception_ptr error;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < count;) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(mu);
                if (i < failed_at) {
                    failed_at = i;
                    error = std::current_exception();
                }
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace covlab
