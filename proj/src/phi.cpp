#include "covlab/phi.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <memory>
#include <random>
#include <thread>

#include "covlab/errors.hpp"

namespace covlab {

namespace {

constexpr std::size_t kShardDepth = 4;

void require_n(const FiniteGroup& g, std::size_t n) {
    if (n == 0 || n > g.order())
        throw Error(ErrorKind::ConfigInvalid, "cannot split " + g.name() + " of order " + std::to_string(g.order()) +
                                                  " into " + std::to_string(n) + " nonempty cells");
}

PartitionCandidate from_labels_unchecked(const FiniteGroup& g, const std::vector<std::uint32_t>& labels,
                                         std::size_t n) {
    PartitionCandidate p{g, std::vector<std::vector<Elem>>(n)};
    for (Elem x = 0; x < labels.size(); ++x) p.cells[labels[x]].push_back(x);
    return p;
}

/// Restricted growth strings of length `len` using at most n labels, leaving
/// enough room in a string of length `total` to open every label.
void rgs_prefixes(std::size_t len, std::size_t n, std::size_t total, std::vector<std::uint32_t>& cur,
                  std::uint32_t used, std::vector<std::vector<std::uint32_t>>& out) {
    if (cur.size() == len) {
        out.push_back(cur);
        return;
    }
    for (std::uint32_t c = 0; c <= used && c < n; ++c) {
        std::uint32_t u = std::max(used, c + 1);
        if (n - u > total - cur.size() - 1) continue;
        cur.push_back(c);
        rgs_prefixes(len, n, total, cur, u, out);
        cur.pop_back();
    }
}

class ShardSearch {
public:
    ShardSearch(const FiniteGroup& g, std::size_t n, const PhiOptions& opts, DiffCovCache& cache,
                std::uint64_t budget)
        : g_(g), n_(n), opts_(opts), cache_(cache), budget_(budget), labels_(g.order(), 0),
          cells_(n, Bitset(g.order())) {}

    void run(const std::vector<std::uint32_t>& prefix) {
        std::uint32_t used = 0;
        for (Elem x = 0; x < prefix.size(); ++x) {
            labels_[x] = prefix[x];
            cells_[prefix[x]].set(x);
            used = std::max(used, prefix[x] + 1);
        }
        dfs(static_cast<Elem>(prefix.size()), used);
    }

    std::size_t best = 0;
    std::vector<std::uint32_t> argmax;
    std::uint64_t examined = 0;
    bool exhausted = false;

private:
    std::size_t cov_of(std::uint32_t c) { return cache_.get(SubsetOfG(g_, cells_[c])); }

    void dfs(Elem i, std::uint32_t used) {
        if (exhausted) return;
        if (budget_ && ++nodes_ > budget_) {
            exhausted = true;
            return;
        }
        const std::size_t total = g_.order();
        if (i == total) {
            ++examined;
            std::size_t value = std::numeric_limits<std::size_t>::max();
            for (std::uint32_t c = 0; c < n_ && value > best; ++c) value = std::min(value, cov_of(c));
            if (value > best) {
                best = value;
                argmax = labels_;
            }
            return;
        }
        for (std::uint32_t c = 0; c <= used && c < n_; ++c) {
            const std::uint32_t u = std::max(used, c + 1);
            if (n_ - u > total - i - 1) continue;
            labels_[i] = c;
            cells_[c].set(i);
            if (!(opts_.prune && best > 0 && cov_of(c) <= best)) dfs(i + 1, u);
            cells_[c].reset(i);
            if (exhausted) return;
        }
    }

    const FiniteGroup& g_;
    std::size_t n_;
    const PhiOptions& opts_;
    DiffCovCache& cache_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<std::uint32_t> labels_;
    std::vector<Bitset> cells_;
};

std::size_t min_cov(const FiniteGroup& g, const std::vector<std::uint32_t>& labels, std::size_t n,
                    DiffCovCache& cache) {
    std::vector<Bitset> cells(n, Bitset(g.order()));
    for (Elem x = 0; x < labels.size(); ++x) cells[labels[x]].set(x);
    std::size_t value = std::numeric_limits<std::size_t>::max();
    for (auto& c : cells) value = std::min(value, cache.get(SubsetOfG(g, std::move(c))));
    return value;
}

}  // namespace

std::string to_string(PhiMode m) { return m == PhiMode::exhaustive ? "exhaustive" : "randomized"; }

void validate_partition(const PartitionCandidate& p) {
    const auto& g = p.group;
    std::vector<int> seen(g.order(), -1);
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        if (p.cells[i].empty()) throw Error(ErrorKind::InvalidPartition, "cell " + std::to_string(i) + " is empty");
        for (Elem x : p.cells[i]) {
            if (!g.contains(x))
                throw Error(ErrorKind::InvalidPartition, "element " + std::to_string(x) + " is not in " + g.name());
            if (seen[x] >= 0)
                throw Error(ErrorKind::InvalidPartition, "element " + std::to_string(x) + " lies in cells " +
                                                             std::to_string(seen[x]) + " and " + std::to_string(i));
            seen[x] = static_cast<int>(i);
        }
    }
    for (Elem x = 0; x < g.order(); ++x)
        if (seen[x] < 0) throw Error(ErrorKind::InvalidPartition, "element " + std::to_string(x) + " is in no cell");
}

PartitionCandidate partition_from_labels(const FiniteGroup& g, const std::vector<std::uint32_t>& labels) {
    if (labels.size() != g.order())
        throw Error(ErrorKind::InvalidPartition, "expected one label per element of " + g.name());
    std::uint32_t n = 0;
    for (auto l : labels) n = std::max(n, l + 1);
    auto p = from_labels_unchecked(g, labels, n);
    validate_partition(p);
    return p;
}

std::size_t DiffCovCache::get(const SubsetOfG& cell) {
    {
        std::lock_guard lock(mu_);
        if (auto it = memo_.find(cell.members()); it != memo_.end()) return it->second;
    }
    auto r = cov_exact(difference_set(cell), opts_);
    std::lock_guard lock(mu_);
    all_proven_ = all_proven_ && r.proven_optimal;
    memo_.emplace(cell.members(), r.value);
    return r.value;
}

bool DiffCovCache::all_proven() const {
    std::lock_guard lock(mu_);
    return all_proven_;
}

std::size_t min_cell_cov(const PartitionCandidate& p, DiffCovCache* cache) {
    validate_partition(p);
    DiffCovCache local;
    DiffCovCache& c = cache ? *cache : local;
    std::size_t value = std::numeric_limits<std::size_t>::max();
    for (const auto& cell : p.cells) value = std::min(value, c.get(SubsetOfG::of(p.group, cell)));
    return value;
}

PhiReport phi_exhaustive(const FiniteGroup& g, std::size_t n, const PhiOptions& opts) {
    require_n(g, n);
    std::vector<std::vector<std::uint32_t>> prefixes;
    std::vector<std::uint32_t> cur;
    rgs_prefixes(std::min(kShardDepth, g.order()), n, g.order(), cur, 0, prefixes);

    const std::uint64_t per_shard = opts.budget ? (opts.budget + prefixes.size() - 1) / prefixes.size() : 0;
    DiffCovCache cache(opts.cover);
    std::vector<std::unique_ptr<ShardSearch>> shards(prefixes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < prefixes.size();) {
            shards[i] = std::make_unique<ShardSearch>(g, n, opts, cache, per_shard);
            shards[i]->run(prefixes[i]);
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(prefixes.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    PhiReport r;
    r.group = g.name();
    r.n = n;
    r.mode = PhiMode::exhaustive;
    r.argmax.group = g;
    for (const auto& s : shards) {
        r.partitions_examined += s->examined;
        r.complete = r.complete && !s->exhausted;
        if (s->best > r.phi_value) {
            r.phi_value = s->best;
            r.argmax = from_labels_unchecked(g, s->argmax, n);
        }
    }
    r.proven = cache.all_proven();
    r.exceeds_n = r.phi_value > n;
    return r;
}

PhiReport phi_random_search(const FiniteGroup& g, std::size_t n, std::uint64_t iterations, std::uint64_t seed,
                            const PhiOptions& opts) {
    require_n(g, n);
    const std::size_t total = g.order();
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };
    auto random_labels = [&] {
        std::vector<Elem> perm(total);
        for (Elem x = 0; x < total; ++x) perm[x] = x;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::uint32_t> labels(total);
        for (std::size_t i = 0; i < total; ++i)
            labels[perm[i]] = static_cast<std::uint32_t>(i < n ? i : uniform(n));
        return labels;
    };

    DiffCovCache cache(opts.cover);
    PhiReport r;
    r.group = g.name();
    r.n = n;
    r.mode = PhiMode::randomized;
    r.seed = seed;

    auto labels = random_labels();
    std::vector<std::size_t> sizes(n, 0);
    auto recount = [&] {
        std::fill(sizes.begin(), sizes.end(), 0);
        for (auto l : labels) ++sizes[l];
    };
    recount();
    std::size_t value = min_cov(g, labels, n, cache);
    r.partitions_examined = 1;
    std::vector<std::uint32_t> best_labels = labels;
    std::size_t best = value;

    const std::uint64_t stagnation_limit = std::max<std::uint64_t>(64, 4 * total);
    std::uint64_t stagnant = 0;
    for (std::uint64_t it = 0; it < iterations; ++it) {
        if (stagnant >= stagnation_limit) {
            labels = random_labels();
            recount();
            value = min_cov(g, labels, n, cache);
            ++r.partitions_examined;
            stagnant = 0;
        } else {
            std::vector<Elem> movable;
            for (Elem x = 0; x < total; ++x)
                if (sizes[labels[x]] > 1) movable.push_back(x);
            if (movable.empty() || n < 2) {
                ++stagnant;
                continue;
            }
            const Elem x = movable[uniform(movable.size())];
            const std::uint32_t from = labels[x];
            std::uint32_t to = static_cast<std::uint32_t>(uniform(n - 1));
            if (to >= from) ++to;
            labels[x] = to;
            const std::size_t moved = min_cov(g, labels, n, cache);
            ++r.partitions_examined;
            if (moved > value) {
                value = moved;
                --sizes[from];
                ++sizes[to];
                stagnant = 0;
            } else {
                labels[x] = from;
                ++stagnant;
            }
        }
        if (value > best) {
            best = value;
            best_labels = labels;
        }
    }
    r.phi_value = best;
    r.argmax = from_labels_unchecked(g, best_labels, n);
    r.proven = cache.all_proven();
    r.exceeds_n = r.phi_value > n;
    return r;
}

json phi_report_to_json(const PhiReport& r) {
    json cells = json::array();
    for (const auto& cell : r.argmax.cells) {
        json c = json::array();
        for (Elem x : cell) c.push_back(finite_element_to_json(r.argmax.group, x));
        cells.push_back(std::move(c));
    }
    return {{"group", r.group},
            {"n", r.n},
            {"quantity", "Phi_G(n)"},
            {"phi_value", r.phi_value},
            {"argmax", std::move(cells)},
            {"mode", to_string(r.mode)},
            {"partitions_examined", r.partitions_examined},
            {"seed", r.seed},
            {"complete", r.complete},
            {"proven", r.proven},
            {"exceeds_n", r.exceeds_n}};
}

}  // namespace covlab
