#ifndef RCELL_EXACT_SOLVER_HPP
#define RCELL_EXACT_SOLVER_HPP

#include "rcell/cell.hpp"
#include "rcell/cycle_order.hpp"
#include "rcell/schedule.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace rcell {

struct SearchOptions {
    bool prune = true;
    std::optional<std::uint64_t> node_limit;
    std::optional<double> time_limit;  // seconds
    /// Strict (>) pruning and lexicographically least optimal order.
    bool deterministic = false;
    unsigned threads = 1;
    SeparationScope scope = SeparationScope::all_machines;
};

struct SolveResult {
    Duration best_cycle_time;
    CycleOrder best_order;
    Schedule schedule;
    std::uint64_t nodes_explored = 0;
    double wall_time = 0.0;
    bool proven_optimal = true;
};

namespace detail {

/// Incumbent cycle time kept as ticks_num / den.
struct Incumbent {
    std::int64_t num = std::numeric_limits<std::int64_t>::max() / 8;
    std::int64_t den = 1;
    std::vector<int> cycle;

    [[nodiscard]] bool better(std::int64_t n, std::int64_t d) const {
        return static_cast<int128>(n) * den < static_cast<int128>(num) * d;
    }
    [[nodiscard]] bool equal(std::int64_t n, std::int64_t d) const {
        return static_cast<int128>(n) * den == static_cast<int128>(num) * d;
    }
};

/// Depth-first search over cycle positions. Position 0 is always L_1; the
/// children of a node are tried in canonical activity order.
class OrderSearch {
public:
    OrderSearch(const TickTable &table, const SearchOptions &opts)
        : t_(table), opts_(opts), n_(2 * table.m), eval_(table, opts.scope) {
        if (n_ > 30) throw std::invalid_argument("exact search supports at most 15 machines");
        cycle_.assign(n_, 0);
        pos_.assign(n_, -1);
        time_.assign(n_, 0);
        travel_.assign(n_, 0);
        cross_.assign(n_ + 1, 0);
        pos_[0] = 0;
    }

    /// Shared state between workers; `mutex` guards `best`.
    struct Shared {
        std::mutex mutex;
        Incumbent best;
        std::atomic<std::int64_t> best_num{std::numeric_limits<std::int64_t>::max() / 8};
        std::atomic<std::int64_t> best_den{1};
        std::atomic<std::uint64_t> nodes{0};
        std::atomic<bool> stop{false};
        std::optional<std::chrono::steady_clock::time_point> deadline;
    };

    /// Explores the subtree whose first activity after L_1 is `first`.
    void run_subtree(int first, Shared &shared) {
        shared_ = &shared;
        local_nodes_ = 0;
        place(1, first);
        ++local_nodes_;
        if (!pruned(node_bound(2))) dfs(2);
        unplace(1, first);
        shared.nodes += local_nodes_;
    }

    /// Lower bound for an arbitrary prefix (positions 1..k filled).
    std::int64_t prefix_bound_ticks(const std::vector<int> &prefix, std::int64_t &den_out) {
        den_out = 1;
        int k = 1;
        for (int b : prefix) place(k++, b);
        std::int64_t bound;
        if (k == n_) {
            eval_.evaluate(cycle_);
            bound = eval_.num();
            den_out = eval_.den();
        } else {
            bound = node_bound(k);
        }
        for (int q = k - 1; q >= 1; --q) unplace(q, cycle_[q]);
        return bound;
    }

private:
    [[nodiscard]] int machine_of(int idx) const { return idx < t_.m ? idx + 1 : idx - t_.m + 1; }
    [[nodiscard]] bool applies(int machine) const { return separation_applies(opts_.scope, machine); }

    void place(int k, int b) {
        const int last = cycle_[k - 1];
        const std::int64_t step = t_.d(last, b);
        std::int64_t t = time_[k - 1] + step;
        std::int64_t cross = cross_[k - 1];
        const int m = t_.m;
        if (b >= m) {
            const int i = b - m;
            if (applies(i + 1) && pos_[i] >= 0) t = std::max(t, time_[pos_[i]] + t_.sep[i]);
        } else if (applies(b + 1) && pos_[m + b] >= 0) {
            cross = std::max(cross, t_.sep[b] + travel_[k - 1] + step - travel_[pos_[m + b]]);
        }
        cycle_[k] = b;
        pos_[b] = k;
        time_[k] = t;
        travel_[k] = travel_[k - 1] + step;
        cross_[k] = cross;
        free_ &= ~(1u << b);
    }

    void unplace(int k, int b) {
        (void)k;
        pos_[b] = -1;
        free_ |= 1u << b;
    }

    // Lower bound in integer ticks for the node with positions 0..k-1 filled.
    [[nodiscard]] std::int64_t node_bound(int k) const {
        const int last = cycle_[k - 1];
        const std::int64_t now = time_[k - 1];
        std::int64_t bound = std::max(cross_[k - 1], now);
        if (free_ == 0) return std::max(bound, now + t_.d(last, 0));
        const int m = t_.m;
        const std::uint32_t from_set = free_ | (1u << last);
        std::int64_t tail = now;
        std::int64_t close = std::numeric_limits<std::int64_t>::max();
        for (std::uint32_t rs = free_; rs; rs &= rs - 1) {
            const int r = __builtin_ctz(rs);
            tail += min_in(r, from_set);
            close = std::min(close, t_.d(r, 0));
            const int i = machine_of(r) - 1;
            if (!applies(i + 1)) continue;
            if (r >= m && pos_[i] >= 0) {
                // U_i still open, L_i already done this cycle.
                bound = std::max(bound, time_[pos_[i]] + t_.sep[i] + min_out(r, free_ | 1u));
            } else if (r < m && pos_[m + i] >= 0) {
                // L_i still open after U_i: its part crosses into the next cycle.
                bound = std::max(bound, t_.sep[i] + travel_[k - 1] - travel_[pos_[m + i]] + min_in(r, from_set));
            }
        }
        return std::max(bound, tail + close);
    }

    [[nodiscard]] std::int64_t min_in(int b, std::uint32_t from_set) const {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::uint32_t s = from_set & ~(1u << b); s; s &= s - 1) best = std::min(best, t_.d(__builtin_ctz(s), b));
        return best;
    }
    [[nodiscard]] std::int64_t min_out(int a, std::uint32_t to_set) const {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::uint32_t s = to_set & ~(1u << a); s; s &= s - 1) best = std::min(best, t_.d(a, __builtin_ctz(s)));
        return best;
    }

    [[nodiscard]] bool pruned(std::int64_t bound) const {
        if (!opts_.prune) return false;
        const std::int64_t num = shared_->best_num.load(std::memory_order_relaxed);
        const std::int64_t den = shared_->best_den.load(std::memory_order_relaxed);
        const int128 lhs = static_cast<int128>(bound) * den;
        return opts_.deterministic ? lhs > num : lhs >= num;
    }

    void dfs(int k) {
        if (shared_->stop.load(std::memory_order_relaxed)) return;
        if (k == n_) {
            leaf();
            return;
        }
        for (std::uint32_t rs = free_; rs; rs &= rs - 1) {
            const int b = __builtin_ctz(rs);
            if (opts_.node_limit && shared_->nodes.load(std::memory_order_relaxed) + local_nodes_ >= *opts_.node_limit) {
                shared_->stop = true;
                return;
            }
            place(k, b);
            ++local_nodes_;
            if (!pruned(node_bound(k + 1))) dfs(k + 1);
            unplace(k, b);
        }
        if (local_nodes_ > 4096) {
            shared_->nodes += local_nodes_;
            local_nodes_ = 0;
            if (shared_->deadline && std::chrono::steady_clock::now() > *shared_->deadline) shared_->stop = true;
        }
    }

    void leaf() {
        eval_.evaluate(cycle_);
        const std::int64_t num = eval_.num();
        const std::int64_t den = eval_.den();
        std::lock_guard lock(shared_->mutex);
        Incumbent &best = shared_->best;
        bool take = best.cycle.empty() || best.better(num, den);
        if (!take && opts_.deterministic && best.equal(num, den))
            take = std::lexicographical_compare(cycle_.begin(), cycle_.end(), best.cycle.begin(), best.cycle.end());
        if (take) {
            best.num = num;
            best.den = den;
            best.cycle = cycle_;
            shared_->best_num = num;
            shared_->best_den = den;
        }
    }

    const TickTable &t_;
    const SearchOptions &opts_;
    int n_;
    CycleRatioEvaluator eval_;
    std::vector<int> cycle_;
    std::vector<int> pos_;
    std::vector<std::int64_t> time_;
    std::vector<std::int64_t> travel_;
    std::vector<std::int64_t> cross_;
    std::uint32_t free_ = 0;
    Shared *shared_ = nullptr;
    std::uint64_t local_nodes_ = 0;

public:
    void reset_free() {
        free_ = 0;
        for (int b = 1; b < n_; ++b) free_ |= 1u << b;
    }
};

} // namespace detail

/// Lower bound on the cycle time of every completion of `prefix` (the
/// activities following L_1, in order). A complete prefix yields its exact
/// cycle time.
inline Duration prefix_bound(const CellInstance &inst, const std::vector<Activity> &prefix,
                             SeparationScope scope = SeparationScope::all_machines) {
    const int m = inst.machines();
    std::vector<int> idx;
    std::vector<bool> seen(2 * m, false);
    for (const auto &a : prefix) {
        if (!inst.valid(a)) throw InvalidOrder("activity " + a.name() + " outside instance");
        const int k = a.index(m);
        if (k == 0 || seen[k]) throw InvalidOrder("prefix must be duplicate-free and exclude L1");
        seen[k] = true;
        idx.push_back(k);
    }
    const TickTable table(inst);
    SearchOptions opts;
    opts.scope = scope;
    detail::OrderSearch search(table, opts);
    search.reset_free();
    std::int64_t den = 1;
    const std::int64_t ticks = search.prefix_bound_ticks(idx, den);
    return table.from_ticks(ticks, den);
}

/// Minimum cycle time over all L_1-anchored orders by depth-first
/// branch-and-bound. Seeds the incumbent with the canonical order.
inline SolveResult solve_exact(const CellInstance &inst, const SearchOptions &opts = {}) {
    const auto started = std::chrono::steady_clock::now();
    const int m = inst.machines();
    const int n = 2 * m;
    const TickTable table(inst);

    detail::OrderSearch::Shared shared;
    if (opts.time_limit)
        shared.deadline = started + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                        std::chrono::duration<double>(*opts.time_limit));
    {
        detail::CycleRatioEvaluator eval(table, opts.scope);
        const std::vector<int> seed = CycleOrder::canonical(m).cycle_indices();
        eval.evaluate(seed);
        if (opts.prune) {
            shared.best = {eval.num(), eval.den(), seed};
            shared.best_num = eval.num();
            shared.best_den = eval.den();
        }
    }

    if (n == 2) {
        shared.nodes = 1;
    } else {
        std::atomic<int> next{1};
        auto worker = [&]() {
            detail::OrderSearch search(table, opts);
            for (int first = next++; first < n; first = next++) {
                search.reset_free();
                search.run_subtree(first, shared);
            }
        };
        const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(n - 1)));
        if (threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
            for (auto &th : pool) th.join();
        }
    }

    std::vector<int> best = shared.best.cycle;
    if (best.empty()) best = CycleOrder::canonical(m).cycle_indices();
    std::vector<int> tail(best.begin() + 1, best.end());
    CycleOrder order = CycleOrder::from_indices(m, tail);
    Schedule sched = evaluate_cycle(inst, order, opts.scope);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return SolveResult{sched.cycle_time, order, std::move(sched), shared.nodes.load(), secs, !shared.stop.load()};
}

} // namespace rcell

#endif // RCELL_EXACT_SOLVER_HPP
