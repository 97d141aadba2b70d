#ifndef RCELL_SCHEDULE_HPP
#define RCELL_SCHEDULE_HPP

#include "rcell/cell.hpp"
#include "rcell/cycle_order.hpp"

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcell {

struct Wait {
    Activity from;
    Activity to;
    Duration value;
};

/// Earliest-start schedule of one order at its minimum cycle time.
struct Schedule {
    CycleOrder order;
    Duration cycle_time;
    std::vector<Duration> completion;  // by canonical activity index; L_1 is 0
    std::vector<Wait> waits;           // consecutive pairs, closing pair into L_1 last
    std::vector<bool> pairing;         // z_i by machine-1; true iff L_i precedes U_i
    Duration travel;                   // sum of d along the cycle

    [[nodiscard]] Duration completion_of(const Activity &a) const {
        return completion.at(static_cast<std::size_t>(a.index(order.machines())));
    }
    [[nodiscard]] Duration total_wait() const {
        Duration sum(0);
        for (const auto &w : waits) sum += w.value;
        return sum;
    }
};

namespace detail {

/// Minimum cycle time of a fixed order as a maximum cycle ratio.
///
/// Nodes are the cycle positions 0..n-1 (position 0 is L_1 at time 0) plus
/// an end node n holding C. Every arc encodes t_to >= t_from + w - k*C; the
/// optimum C is the largest W/K over directed cycles, found by repeatedly
/// detecting a positive cycle under the current ratio and jumping to its
/// ratio. All arithmetic is in integer ticks.
class CycleRatioEvaluator {
public:
    struct Arc {
        int from;
        int to;
        std::int64_t w;
        int k;
    };

    explicit CycleRatioEvaluator(const TickTable &table, SeparationScope scope = SeparationScope::all_machines)
        : table_(table), scope_(scope) {}

    /// `cycle` holds canonical indices starting with 0 (L_1).
    /// Returns the cycle time as ticks_num / den with den >= 1.
    void evaluate(const std::vector<int> &cycle) {
        build_arcs(cycle);
        const int nodes = static_cast<int>(cycle.size()) + 1;
        // start from the bare chain length; build_arcs pushes those first
        num_ = 0;
        for (std::size_t e = 0; e < cycle.size(); ++e) num_ += arcs_[e].w;
        den_ = 1;
        dist_.assign(nodes, 0);
        pred_.assign(nodes, -1);
        for (int guard = 0;; ++guard) {
            if (guard > 4096) throw std::logic_error("cycle ratio iteration did not converge");
            const int hot = longest_paths(nodes);
            if (hot < 0) break;
            std::int64_t w = 0;
            std::int64_t k = 0;
            cycle_weight(hot, nodes, w, k);
            if (k <= 0) throw std::logic_error("positive cycle without a cycle-time arc");
            const std::int64_t g = std::gcd(w, k);
            num_ = w / g;
            den_ = k / g;
        }
    }

    [[nodiscard]] std::int64_t num() const { return num_; }
    [[nodiscard]] std::int64_t den() const { return den_; }
    /// Earliest completion of cycle position p in units of 1/den ticks.
    [[nodiscard]] std::int64_t scaled_time(int position) const { return dist_[position]; }
    [[nodiscard]] const std::vector<Arc> &arcs() const { return arcs_; }

private:
    void build_arcs(const std::vector<int> &cycle) {
        const int n = static_cast<int>(cycle.size());
        const int m = table_.m;
        arcs_.clear();
        pos_.assign(2 * m, -1);
        for (int p = 0; p < n; ++p) pos_[cycle[p]] = p;
        for (int p = 0; p + 1 < n; ++p) arcs_.push_back({p, p + 1, table_.d(cycle[p], cycle[p + 1]), 0});
        arcs_.push_back({n - 1, n, table_.d(cycle[n - 1], cycle[0]), 0});
        for (int i = 0; i < m; ++i) {
            if (!separation_applies(scope_, i + 1)) continue;
            const int pl = pos_[i];
            const int pu = pos_[m + i];
            arcs_.push_back({pl, pu, table_.sep[i], pl < pu ? 0 : 1});
        }
        arcs_.push_back({n, 0, 0, 1});
    }

    std::int64_t weight(const Arc &a) const { return a.w * den_ - a.k * num_; }

    // Bellman-Ford from node 0; returns a node reached by relaxation in the
    // final round (so a positive cycle exists), or -1.
    int longest_paths(int nodes) {
        constexpr std::int64_t unreached = std::numeric_limits<std::int64_t>::min() / 4;
        std::fill(dist_.begin(), dist_.end(), unreached);
        std::fill(pred_.begin(), pred_.end(), -1);
        dist_[0] = 0;
        int last = -1;
        for (int round = 0; round < nodes; ++round) {
            last = -1;
            for (int e = 0; e < static_cast<int>(arcs_.size()); ++e) {
                const Arc &a = arcs_[e];
                if (dist_[a.from] == unreached) continue;
                const std::int64_t cand = dist_[a.from] + weight(a);
                if (cand > dist_[a.to]) {
                    dist_[a.to] = cand;
                    pred_[a.to] = e;
                    last = a.to;
                }
            }
            if (last < 0) return -1;
        }
        return last;
    }

    void cycle_weight(int hot, int nodes, std::int64_t &w, std::int64_t &k) const {
        int v = hot;
        for (int i = 0; i < nodes; ++i) v = arcs_[pred_[v]].from;
        const int start = v;
        w = 0;
        k = 0;
        do {
            const Arc &a = arcs_[pred_[v]];
            w += a.w;
            k += a.k;
            v = a.from;
        } while (v != start);
    }

    const TickTable &table_;
    SeparationScope scope_;
    std::vector<Arc> arcs_;
    std::vector<int> pos_;
    std::vector<std::int64_t> dist_;
    std::vector<int> pred_;
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace detail

/// Minimum feasible cycle time of `order` together with its canonical
/// (earliest-completion) schedule.
inline Schedule evaluate_cycle(const CellInstance &inst, const CycleOrder &order,
                               SeparationScope scope = SeparationScope::all_machines) {
    if (order.machines() != inst.machines())
        throw InvalidOrder("order is for m=" + std::to_string(order.machines()) + " but instance has m=" +
                           std::to_string(inst.machines()));
    const TickTable table(inst);
    detail::CycleRatioEvaluator eval(table, scope);
    const std::vector<int> cycle = order.cycle_indices();
    eval.evaluate(cycle);

    const int m = inst.machines();
    const int n = static_cast<int>(cycle.size());
    Schedule s{order, table.from_ticks(eval.num(), eval.den()), {}, {}, {}, Duration(0)};
    s.completion.assign(n, Duration(0));
    for (int p = 0; p < n; ++p) s.completion[cycle[p]] = table.from_ticks(eval.scaled_time(p), eval.den());
    for (int p = 0; p < n; ++p) {
        const int a = cycle[p];
        const int b = cycle[(p + 1) % n];
        const Duration d = table.from_ticks(table.d(a, b));
        const Duration end = p + 1 < n ? s.completion[b] : s.cycle_time;
        s.waits.push_back({Activity::from_index(a, m), Activity::from_index(b, m), end - s.completion[a] - d});
        s.travel += d;
    }
    std::vector<int> pos(n);
    for (int p = 0; p < n; ++p) pos[cycle[p]] = p;
    for (int i = 0; i < m; ++i) s.pairing.push_back(pos[i] < pos[m + i]);
    return s;
}

/// Cycle time of L_1..L_m U_1..U_m; works for non-uniform processing times.
inline Duration canonical_cycle_time(const CellInstance &inst) {
    return evaluate_cycle(inst, CycleOrder::canonical(inst.machines())).cycle_time;
}

inline std::vector<Wait> waits(const Schedule &s) { return s.waits; }

/// One piece of the robot's motion over a cycle.
struct Segment {
    int from_station;
    int to_station;
    Duration start;
    Duration end;
    std::string action;  // move | wait | pick | place
    Activity activity;   // activity this segment belongs to
};

/// Robot movement over [0, C): travel hops take |from-to|*delta, pick and
/// place take epsilon, waits are spent at the pick station of the next
/// activity (for an unload, at the machine that is still processing).
inline std::vector<Segment> timeline(const CellInstance &inst, const Schedule &s) {
    const int m = inst.machines();
    auto pick_station = [&](const Activity &a) { return a.is_load() ? 0 : a.machine; };
    auto drop_station = [&](const Activity &a) { return a.is_load() ? a.machine : m + 1; };
    std::vector<Segment> out;
    Duration now = s.completion_of(Activity::load(1));
    for (const auto &w : s.waits) {
        const Activity &b = w.to;
        const int here = drop_station(w.from);
        const int pick = pick_station(b);
        const int drop = drop_station(b);
        auto push = [&](int from, int to, const Duration &len, const char *action) {
            if (len == Duration(0)) return;
            out.push_back({from, to, now, now + len, action, b});
            now += len;
        };
        push(here, pick, inst.delta() * std::abs(here - pick), "move");
        push(pick, pick, w.value, "wait");
        push(pick, pick, inst.epsilon(), "pick");
        push(pick, drop, inst.delta() * std::abs(pick - drop), "move");
        push(drop, drop, inst.epsilon(), "place");
    }
    return out;
}

} // namespace rcell

#endif // RCELL_SCHEDULE_HPP
