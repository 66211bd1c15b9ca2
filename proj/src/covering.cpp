#include "covlab/covering.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>

#include "covlab/errors.hpp"
#include "covlab/subgroup.hpp"

namespace covlab {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

void require_nonempty(const SubsetOfG& a) {
    if (a.empty()) throw Error(ErrorKind::EmptySet, "the set must be nonempty");
}

SubsetOfG inverse_set(const SubsetOfG& a) {
    const auto& g = a.group();
    Bitset inv(g.order());
    a.members().for_each([&](std::size_t x) { inv.set(g.invert(static_cast<Elem>(x))); });
    return {g, std::move(inv)};
}

/// Set-cover instance: cover `universe` (local indices 0..n-1) with the sets
/// translate[y], one per universe element y.
struct Instance {
    std::size_t n = 0;
    std::size_t set_size = 0;
    std::vector<Elem> universe;                       // local -> group element
    std::vector<Bitset> translate;                    // y -> covered locals
    std::vector<std::vector<std::uint32_t>> members;  // y -> covered locals, as a list
    std::vector<std::vector<std::uint32_t>> covering; // u -> ys whose set contains u
    std::uint32_t identity_local = 0;
};

Instance build_instance(const FiniteGroup& g, std::vector<Elem> universe, const std::vector<Elem>& a,
                        CoverSide side) {
    Instance in;
    in.n = universe.size();
    in.set_size = a.size();
    std::vector<std::uint32_t> local(g.order(), kNone);
    for (std::size_t i = 0; i < universe.size(); ++i) local[universe[i]] = static_cast<std::uint32_t>(i);
    in.identity_local = local[g.identity()];
    in.translate.assign(in.n, Bitset(in.n));
    in.members.resize(in.n);
    in.covering.resize(in.n);
    for (std::size_t y = 0; y < in.n; ++y) {
        for (Elem x : a) {
            Elem z = side == CoverSide::left ? g.op(universe[y], x) : g.op(x, universe[y]);
            std::uint32_t u = local[z];
            in.translate[y].set(u);
            in.members[y].push_back(u);
            in.covering[u].push_back(static_cast<std::uint32_t>(y));
        }
    }
    in.universe = std::move(universe);
    return in;
}

std::vector<std::uint32_t> greedy_cover(const Instance& in) {
    Bitset covered(in.n);
    std::vector<std::uint32_t> chosen;
    std::size_t remaining = in.n;
    while (remaining) {
        std::size_t best_gain = 0;
        std::uint32_t best = 0;
        for (std::uint32_t y = 0; y < in.n; ++y) {
            std::size_t gain = in.translate[y].count_and_not(covered);
            if (gain > best_gain) {
                best_gain = gain;
                best = y;
            }
        }
        covered |= in.translate[best];
        chosen.push_back(best);
        remaining -= best_gain;
    }
    return chosen;
}

/// Tabu search for a cover with exactly `target` sets, started from `start`.
/// Moves: pick an uncovered element, add the best set covering it, drop the
/// set whose removal uncovers least.
class LocalSearch {
public:
    LocalSearch(const Instance& in, std::uint64_t seed) : in_(in), rng_(seed) {}

    std::optional<std::vector<std::uint32_t>> run(std::vector<std::uint32_t> start, std::uint64_t moves) {
        reset(start);
        const std::uint64_t tenure = 2 + cover_.size() / 4;
        std::vector<std::uint64_t> tabu_until(in_.n, 0);
        for (std::uint64_t it = 1; it <= moves; ++it) {
            if (uncovered_.empty()) return cover_;
            std::uint32_t u = uncovered_[pick(uncovered_.size())];

            std::uint32_t add = kNone;
            std::size_t best_gain = 0, ties = 0;
            for (std::uint32_t y : in_.covering[u]) {
                if (in_cover_[y] || tabu_until[y] > it) continue;
                std::size_t gain = 0;
                for (auto v : in_.members[y]) gain += count_[v] == 0;
                if (add == kNone || gain > best_gain) {
                    add = y;
                    best_gain = gain;
                    ties = 1;
                } else if (gain == best_gain && pick(++ties) == 0) {
                    add = y;
                }
            }
            if (add == kNone) continue;
            insert(add);

            std::uint32_t drop = kNone;
            std::size_t best_loss = 0;
            ties = 0;
            for (std::uint32_t c : cover_) {
                if (c == add || tabu_until[c] > it) continue;
                std::size_t loss = 0;
                for (auto v : in_.members[c]) loss += count_[v] == 1;
                if (drop == kNone || loss < best_loss) {
                    drop = c;
                    best_loss = loss;
                    ties = 1;
                } else if (loss == best_loss && pick(++ties) == 0) {
                    drop = c;
                }
            }
            if (drop == kNone) drop = cover_.front() == add ? cover_.back() : cover_.front();
            erase(drop);
            tabu_until[drop] = it + tenure;
            tabu_until[add] = it + tenure / 2;
        }
        if (uncovered_.empty()) return cover_;
        return std::nullopt;
    }

private:
    std::size_t pick(std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng_); }

    void reset(const std::vector<std::uint32_t>& start) {
        cover_.clear();
        in_cover_.assign(in_.n, 0);
        count_.assign(in_.n, 0);
        uncovered_.clear();
        pos_.assign(in_.n, kNone);
        for (std::uint32_t u = 0; u < in_.n; ++u) {
            pos_[u] = static_cast<std::uint32_t>(uncovered_.size());
            uncovered_.push_back(u);
        }
        for (auto y : start) insert(y);
    }
    void insert(std::uint32_t y) {
        cover_.push_back(y);
        in_cover_[y] = 1;
        for (auto v : in_.members[y])
            if (count_[v]++ == 0) remove_uncovered(v);
    }
    void erase(std::uint32_t y) {
        cover_.erase(std::find(cover_.begin(), cover_.end(), y));
        in_cover_[y] = 0;
        for (auto v : in_.members[y])
            if (--count_[v] == 0) {
                pos_[v] = static_cast<std::uint32_t>(uncovered_.size());
                uncovered_.push_back(v);
            }
    }
    void remove_uncovered(std::uint32_t v) {
        std::uint32_t p = pos_[v];
        std::uint32_t last = uncovered_.back();
        uncovered_[p] = last;
        pos_[last] = p;
        uncovered_.pop_back();
        pos_[v] = kNone;
    }

    const Instance& in_;
    std::mt19937_64 rng_;
    std::vector<std::uint32_t> cover_;
    std::vector<char> in_cover_;
    std::vector<std::uint32_t> count_;
    std::vector<std::uint32_t> uncovered_;
    std::vector<std::uint32_t> pos_;
};

/// Smallest k such that the k largest gains sum to at least `need`, or
/// SIZE_MAX when all gains together fall short. Gains are <= max_gain.
std::size_t sets_needed(std::vector<std::uint32_t>& buckets, std::size_t need) {
    std::size_t k = 0;
    for (std::size_t gain = buckets.size(); gain-- > 1;) {
        std::size_t c = buckets[gain];
        if (!c) continue;
        std::size_t take = std::min(c, ceil_div(need, gain));
        k += take;
        if (take * gain >= need) return k;
        need -= take * gain;
    }
    return std::numeric_limits<std::size_t>::max();
}

/// Depth-first branch and bound. Branches on the uncovered element with the
/// fewest admissible sets; a set already branched on at a node is forbidden
/// in its later siblings' subtrees.
class BranchAndBound {
public:
    BranchAndBound(const Instance& in, std::uint64_t budget, std::vector<std::uint32_t> incumbent)
        : in_(in), budget_(budget), best_(std::move(incumbent)), forbidden_(in.n),
          buckets_(in.set_size + 1, 0) {}

    /// Left translation acts transitively on the sets, so some optimal cover
    /// contains the identity's set; the search starts there.
    void run() {
        if (best_.size() <= 1) return;
        chosen_.push_back(in_.identity_local);
        dfs(in_.translate[in_.identity_local]);
        chosen_.pop_back();
    }

    std::size_t root_bound() {
        Bitset none(in_.n);
        return bound(none, in_.n);
    }

    bool exhausted() const { return exhausted_; }
    std::uint64_t nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& best() const { return best_; }

private:
    std::size_t bound(const Bitset& covered, std::size_t uncovered) {
        std::fill(buckets_.begin(), buckets_.end(), 0);
        for (std::uint32_t y = 0; y < in_.n; ++y) {
            if (forbidden_.test(y)) continue;
            ++buckets_[in_.translate[y].count_and_not(covered)];
        }
        return sets_needed(buckets_, uncovered);
    }

    void dfs(const Bitset& covered) {
        if (exhausted_) return;
        if (++nodes_ > budget_) {
            exhausted_ = true;
            return;
        }
        const std::size_t uncovered = in_.n - covered.count();
        if (uncovered == 0) {
            if (chosen_.size() < best_.size()) best_ = chosen_;
            return;
        }
        if (chosen_.size() + 1 >= best_.size()) return;
        const std::size_t need = bound(covered, uncovered);
        if (need == std::numeric_limits<std::size_t>::max() || chosen_.size() + need >= best_.size()) return;

        std::uint32_t branch_on = kNone;
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t u = covered.find_next_unset(0); u != Bitset::npos; u = covered.find_next_unset(u + 1)) {
            std::size_t admissible = 0;
            for (auto y : in_.covering[u]) admissible += !forbidden_.test(y);
            if (admissible < fewest) {
                fewest = admissible;
                branch_on = static_cast<std::uint32_t>(u);
                if (admissible == 0) return;
            }
        }

        std::vector<std::pair<std::size_t, std::uint32_t>> options;
        for (auto y : in_.covering[branch_on])
            if (!forbidden_.test(y)) options.emplace_back(in_.translate[y].count_and_not(covered), y);
        std::sort(options.begin(), options.end(),
                  [](const auto& a, const auto& b) { return a.first != b.first ? a.first > b.first : a.second < b.second; });

        std::vector<std::uint32_t> banned;
        for (const auto& [gain, y] : options) {
            if (chosen_.size() + 1 >= best_.size()) break;
            chosen_.push_back(y);
            dfs(covered | in_.translate[y]);
            chosen_.pop_back();
            if (exhausted_) break;
            forbidden_.set(y);
            banned.push_back(y);
        }
        for (auto y : banned) forbidden_.reset(y);
    }

    const Instance& in_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::vector<std::uint32_t> best_;
    std::vector<std::uint32_t> chosen_;
    Bitset forbidden_;
    std::vector<std::uint32_t> buckets_;
};

/// Lexicographically least cover of exactly `size` sets, scanning sets in
/// index order. Returns nullopt when none exists or the budget runs out.
std::optional<std::vector<std::uint32_t>> lex_least_cover(const Instance& in, std::size_t size,
                                                          std::uint64_t budget, std::uint64_t& nodes,
                                                          bool& exhausted) {
    std::vector<std::uint32_t> chosen;
    std::vector<std::uint32_t> max_cover(in.n);
    for (std::size_t u = 0; u < in.n; ++u)
        max_cover[u] = *std::max_element(in.covering[u].begin(), in.covering[u].end());
    auto dfs = [&](auto&& self, std::uint32_t start, const Bitset& covered) -> bool {
        if (++nodes > budget) {
            exhausted = true;
            return false;
        }
        std::size_t u = covered.find_next_unset(0);
        if (u == Bitset::npos) return true;
        if (chosen.size() == size) return false;
        const std::size_t uncovered = in.n - covered.count();
        if (uncovered > (size - chosen.size()) * in.set_size) return false;
        for (std::uint32_t y = start; y <= max_cover[u] && y < in.n; ++y) {
            chosen.push_back(y);
            if (self(self, y + 1, covered | in.translate[y])) return true;
            chosen.pop_back();
            if (exhausted) return false;
        }
        return false;
    };
    Bitset none(in.n);
    if (dfs(dfs, 0, none)) return chosen;
    return std::nullopt;
}

std::vector<Elem> to_elements(const Instance& in, const std::vector<std::uint32_t>& locals) {
    std::vector<Elem> out;
    for (auto y : locals) out.push_back(in.universe[y]);
    std::sort(out.begin(), out.end());
    return out;
}

constexpr std::uint64_t kProbeNodes = 20'000;

/// Repeatedly asks local search for a cover one set smaller than the
/// incumbent, starting from the incumbent minus its least useful set.
std::vector<std::uint32_t> tighten(const Instance& in, std::vector<std::uint32_t> incumbent, std::size_t floor,
                                   const CoverOptions& opts) {
    LocalSearch ls(in, opts.seed);
    while (incumbent.size() > floor) {
        std::vector<std::uint32_t> count(in.n, 0);
        for (auto y : incumbent)
            for (auto v : in.members[y]) ++count[v];
        auto unique = [&](std::uint32_t y) {
            std::size_t c = 0;
            for (auto v : in.members[y]) c += count[v] == 1;
            return c;
        };
        auto weakest = std::min_element(incumbent.begin(), incumbent.end(),
                                        [&](auto p, auto q) { return unique(p) < unique(q); });
        std::vector<std::uint32_t> start = incumbent;
        start.erase(start.begin() + (weakest - incumbent.begin()));
        auto found = ls.run(start, opts.local_search_moves);
        if (!found) break;
        incumbent = *found;
    }
    return incumbent;
}

Instance whole_instance(const SubsetOfG& a, CoverSide side) {
    const FiniteGroup& g = a.group();
    std::vector<Elem> all(g.order());
    for (Elem x = 0; x < g.order(); ++x) all[x] = x;
    return build_instance(g, std::move(all), a.elements(), side);
}

// max(ceil(|G|/|A|), [G:H] * ceil(|H|/|A|)) with a0*H the smallest left coset
// holding A (for right covers, the same bound for A^-1).
std::size_t coset_lower_bound(const SubsetOfG& a, CoverSide side) {
    const FiniteGroup& g = a.group();
    const SubsetOfG left = side == CoverSide::right ? inverse_set(a) : a;
    const auto elems = left.elements();
    const Elem a0_inv = g.invert(elems.front());
    std::vector<Elem> shifted;
    for (Elem x : elems) shifted.push_back(g.op(a0_inv, x));
    const std::size_t h = subgroup_generated(g, shifted).order();
    return std::max(ceil_div(g.order(), a.size()), (g.order() / h) * ceil_div(h, a.size()));
}

CoverResult cov_exact_left(const SubsetOfG& a, const CoverOptions& opts) {
    const FiniteGroup& g = a.group();
    const auto elems = a.elements();
    CoverResult result;
    result.method = CoverMethod::exact;

    // A is contained in the left coset a0*H with H generated by a0^-1 A. Each
    // translate x*A then sits inside a single left coset of H, so covering G
    // is covering each coset separately, and each coset is a copy of H.
    std::vector<Elem> universe;
    std::vector<Elem> shifted;
    Elem a0_inv = g.identity();
    if (opts.reduce_to_subgroup) {
        a0_inv = g.invert(elems.front());
        for (Elem x : elems) shifted.push_back(g.op(a0_inv, x));
        universe = subgroup_generated(g, shifted).elements();
    } else {
        shifted = elems;
        universe.resize(g.order());
        for (Elem x = 0; x < g.order(); ++x) universe[x] = x;
    }
    const std::size_t index = g.order() / universe.size();
    Instance in = build_instance(g, universe, shifted, CoverSide::left);

    std::vector<std::uint32_t> incumbent = greedy_cover(in);
    BranchAndBound probe(in, 0, {});
    const std::size_t root = std::max(ceil_div(in.n, in.set_size), probe.root_bound());
    bool exhausted = false;
    if (incumbent.size() > root) {
        // Most instances close within a few thousand nodes; local search is
        // only worth its cost on the ones that do not.
        BranchAndBound quick(in, std::min<std::uint64_t>(opts.node_budget, kProbeNodes), incumbent);
        quick.run();
        result.nodes_explored = quick.nodes();
        incumbent = quick.best();
        // A cover meeting the root bound is optimal even if the probe ran out.
        exhausted = quick.exhausted() && incumbent.size() > root;
    }
    if (exhausted) {
        if (opts.local_search_moves > 0) incumbent = tighten(in, std::move(incumbent), root, opts);
        BranchAndBound bb(in, opts.node_budget - result.nodes_explored, incumbent);
        if (incumbent.size() > root) bb.run();
        result.nodes_explored += bb.nodes();
        incumbent = bb.best();
        exhausted = bb.exhausted();
    }
    const auto& best = incumbent;
    result.proven_optimal = !exhausted;
    result.value = best.size() * index;
    result.lower_bound = result.proven_optimal ? result.value : root * index;

    // Lift the subgroup cover to every left coset t*H: x = t*y*a0^-1.
    std::vector<Elem> local_cover;
    for (auto y : best) local_cover.push_back(in.universe[y]);
    Bitset placed(g.order());
    for (Elem t = 0; t < g.order(); ++t) {
        if (placed.test(t)) continue;
        for (Elem h : universe) placed.set(g.op(t, h));
        for (Elem y : local_cover) result.witness.push_back(g.op(g.op(t, y), a0_inv));
    }
    std::sort(result.witness.begin(), result.witness.end());
    return result;
}

}  // namespace

std::string to_string(CoverMethod m) {
    switch (m) {
        case CoverMethod::exact: return "exact";
        case CoverMethod::greedy: return "greedy";
        case CoverMethod::bounds_only: return "bounds";
    }
    return "?";
}

SubsetOfG::SubsetOfG(FiniteGroup g, Bitset members) : group_(std::move(g)), members_(std::move(members)) {
    if (members_.size() != group_.order())
        throw Error(ErrorKind::ElementNotInGroup, "membership bitset width differs from the group order");
}

SubsetOfG SubsetOfG::of(const FiniteGroup& g, std::span<const Elem> elements) {
    Bitset b(g.order());
    for (Elem x : elements) {
        g.check(x);
        b.set(x);
    }
    return {g, std::move(b)};
}

SubsetOfG difference_set(const SubsetOfG& a) {
    require_nonempty(a);
    const auto& g = a.group();
    const auto elems = a.elements();
    std::vector<Elem> inv;
    for (Elem b : elems) inv.push_back(g.invert(b));
    Bitset out(g.order());
    for (Elem x : elems)
        for (Elem y : inv) out.set(g.op(x, y));
    return {g, std::move(out)};
}

SubsetOfG left_translate(const SubsetOfG& a, Elem t) {
    const auto& g = a.group();
    g.check(t);
    Bitset out(g.order());
    a.members().for_each([&](std::size_t x) { out.set(g.op(t, static_cast<Elem>(x))); });
    return {g, std::move(out)};
}

bool is_cover(const SubsetOfG& a, std::span<const Elem> x, CoverSide side) {
    const auto& g = a.group();
    Bitset covered(g.order());
    const auto elems = a.elements();
    for (Elem t : x) {
        g.check(t);
        for (Elem y : elems) covered.set(side == CoverSide::left ? g.op(t, y) : g.op(y, t));
    }
    return covered.all();
}

CoverResult cov_exact(const SubsetOfG& a, const CoverOptions& opts) {
    require_nonempty(a);
    const FiniteGroup& g = a.group();
    // A*X = G  iff  X^-1 * A^-1 = G.
    const bool right = opts.side == CoverSide::right;
    CoverResult result = cov_exact_left(right ? inverse_set(a) : a, opts);
    if (right) {
        for (auto& x : result.witness) x = g.invert(x);
        std::sort(result.witness.begin(), result.witness.end());
    }
    if (opts.canonical && result.proven_optimal) {
        Instance in = whole_instance(a, opts.side);
        std::uint64_t nodes = 0;
        bool exhausted = false;
        auto lex = lex_least_cover(in, result.value, opts.node_budget, nodes, exhausted);
        result.nodes_explored += nodes;
        if (lex) {
            result.witness = to_elements(in, *lex);
            result.canonical = true;
        }
    }
    return result;
}

CoverResult cov_greedy(const SubsetOfG& a, CoverSide side) {
    require_nonempty(a);
    Instance in = whole_instance(a, side);
    CoverResult result;
    result.method = CoverMethod::greedy;
    auto chosen = greedy_cover(in);
    result.value = chosen.size();
    result.witness = to_elements(in, chosen);
    result.lower_bound = coset_lower_bound(a, side);
    result.proven_optimal = result.value == result.lower_bound;
    return result;
}

CoverBounds cov_bounds(const SubsetOfG& a, CoverSide side) {
    require_nonempty(a);
    return {coset_lower_bound(a, side), greedy_cover(whole_instance(a, side)).size()};
}

}  // namespace covlab
