#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "covlab/covering.hpp"
#include "covlab/group_json.hpp"

namespace covlab {

/// A partition of a finite group into nonempty cells.
struct PartitionCandidate {
    FiniteGroup group;
    std::vector<std::vector<Elem>> cells;

    std::size_t n() const noexcept { return cells.size(); }
};

/// Throws InvalidPartition naming an element that is missing, repeated, or
/// outside the group, or an empty cell.
void validate_partition(const PartitionCandidate& p);

/// Cells from a label per element (labels 0..n-1, each used).
PartitionCandidate partition_from_labels(const FiniteGroup& g, const std::vector<std::uint32_t>& labels);

/// cov(D D^-1) memoized by the cell's membership bitset. Safe to share
/// between threads; values do not depend on the order of calls.
class DiffCovCache {
public:
    explicit DiffCovCache(CoverOptions opts = {}) : opts_(opts) {}
    std::size_t get(const SubsetOfG& cell);
    /// False once any cached value came from a search that hit its budget.
    bool all_proven() const;

private:
    CoverOptions opts_;
    mutable std::mutex mu_;
    std::unordered_map<Bitset, std::size_t, BitsetHash> memo_;
    bool all_proven_ = true;
};

/// min over cells of cov(A_i A_i^-1). Throws InvalidPartition.
std::size_t min_cell_cov(const PartitionCandidate& p, DiffCovCache* cache = nullptr);

enum class PhiMode { exhaustive, randomized };
std::string to_string(PhiMode m);

/// Phi_G(n) for one group G: the largest min_cell_cov found over n-cell
/// partitions of G.
struct PhiReport {
    std::string group;
    std::size_t n = 0;
    std::size_t phi_value = 0;
    PartitionCandidate argmax;
    PhiMode mode = PhiMode::exhaustive;
    std::uint64_t partitions_examined = 0;
    std::uint64_t seed = 0;
    /// Exhaustive mode finished inside the budget (always true for random search).
    bool complete = true;
    /// Every cov value behind phi_value was proven optimal.
    bool proven = true;
    /// phi_value > n: a partition beating the conjectured bound Phi(n) = n.
    bool exceeds_n = false;
};

struct PhiOptions {
    /// Search nodes for exhaustive mode; 0 means unlimited.
    std::uint64_t budget = 0;
    /// Abandon a partial partition once a cell's difference-set cover number
    /// is already <= the best value (sound because adding elements to a
    /// cell can only lower it). Off visits every partition.
    bool prune = true;
    unsigned threads = 1;
    CoverOptions cover{};
};

/// Exhaustive max-min over restricted growth strings. The search is split
/// into a fixed set of prefix shards searched independently, so the report
/// is identical for every thread count.
PhiReport phi_exhaustive(const FiniteGroup& g, std::size_t n, const PhiOptions& opts = {});

/// Random restarts plus single-element moves kept only when min_cell_cov
/// strictly increases. `iterations` counts moves after the initial partition.
PhiReport phi_random_search(const FiniteGroup& g, std::size_t n, std::uint64_t iterations, std::uint64_t seed,
                            const PhiOptions& opts = {});

json phi_report_to_json(const PhiReport& r);

}  // namespace covlab
