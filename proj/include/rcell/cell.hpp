#ifndef RCELL_CELL_HPP
#define RCELL_CELL_HPP

#include "rcell/duration.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcell {

class InvalidInstance : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ActivityKind : std::uint8_t { load, unload };

/// One robot task: L_i moves a raw part from the input buffer to machine i,
/// U_i moves the finished part from machine i to the output buffer.
struct Activity {
    ActivityKind kind = ActivityKind::load;
    int machine = 1;  // 1-based

    static constexpr Activity load(int i) { return {ActivityKind::load, i}; }
    static constexpr Activity unload(int i) { return {ActivityKind::unload, i}; }

    [[nodiscard]] constexpr bool is_load() const { return kind == ActivityKind::load; }

    /// Position in the canonical order L_1 < ... < L_m < U_1 < ... < U_m.
    [[nodiscard]] constexpr int index(int m) const { return is_load() ? machine - 1 : m + machine - 1; }
    static constexpr Activity from_index(int idx, int m) {
        return idx < m ? load(idx + 1) : unload(idx - m + 1);
    }

    [[nodiscard]] std::string name() const { return (is_load() ? "L" : "U") + std::to_string(machine); }

    friend constexpr bool operator==(const Activity &, const Activity &) = default;
};

/// Which load/unload pairs carry a minimum-separation requirement.
///
/// `skip_first_machine` drops machine 1's requirement. Physically wrong
/// (machine 1 still processes its part); kept to compare against results
/// computed under that relaxation.
enum class SeparationScope : std::uint8_t { all_machines, skip_first_machine };

inline bool separation_applies(SeparationScope scope, int machine) {
    return scope == SeparationScope::all_machines || machine != 1;
}

inline std::string_view to_string(SeparationScope scope) {
    return scope == SeparationScope::all_machines ? "all" : "skip-first";
}

/// Geometry and timing of a linear cell: input buffer at station 0,
/// machines 1..m, output buffer at station m+1.
class CellInstance {
public:
    CellInstance(int machines, Duration epsilon, Duration delta, Duration p)
        : CellInstance(machines, epsilon, delta, std::vector<Duration>(machines > 0 ? machines : 0, p)) {}

    CellInstance(int machines, Duration epsilon, Duration delta, std::vector<Duration> proc)
        : m_(machines), epsilon_(epsilon), delta_(delta), proc_(std::move(proc)) {
        if (m_ < 1) throw InvalidInstance("machine count must be at least 1");
        if (m_ > 64) throw InvalidInstance("machine count above 64 is not supported");
        if (epsilon_ <= Duration(0)) throw InvalidInstance("epsilon must be positive");
        if (delta_ <= Duration(0)) throw InvalidInstance("delta must be positive");
        if (static_cast<int>(proc_.size()) != m_)
            throw InvalidInstance("expected " + std::to_string(m_) + " processing times, got " +
                                  std::to_string(proc_.size()));
        for (const auto &p : proc_)
            if (p < Duration(0)) throw InvalidInstance("processing times must be non-negative");
    }

    [[nodiscard]] int machines() const { return m_; }
    [[nodiscard]] int activity_count() const { return 2 * m_; }
    [[nodiscard]] const Duration &epsilon() const { return epsilon_; }
    [[nodiscard]] const Duration &delta() const { return delta_; }
    [[nodiscard]] const std::vector<Duration> &proc() const { return proc_; }
    [[nodiscard]] const Duration &proc(int machine) const { return proc_.at(machine - 1); }

    [[nodiscard]] bool uniform_proc() const {
        for (const auto &p : proc_)
            if (p != proc_.front()) return false;
        return true;
    }
    [[nodiscard]] Duration max_proc() const {
        Duration best = proc_.front();
        for (const auto &p : proc_) best = max(best, p);
        return best;
    }

    /// Least common denominator of all parameters; multiplying by it makes
    /// every distance and separation an integer tick count.
    [[nodiscard]] std::int64_t tick_scale() const {
        std::int64_t scale = std::lcm(epsilon_.den(), delta_.den());
        for (const auto &p : proc_) scale = std::lcm(scale, p.den());
        return scale;
    }

    [[nodiscard]] bool valid(const Activity &a) const { return a.machine >= 1 && a.machine <= m_; }

    /// Stable identifier of the parameter set (FNV-1a, hex).
    [[nodiscard]] std::string hash() const {
        std::string key = "m=" + std::to_string(m_) + ";eps=" + epsilon_.to_string() +
                          ";delta=" + delta_.to_string() + ";p=";
        for (const auto &p : proc_) key += p.to_string() + ",";
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : key) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    friend bool operator==(const CellInstance &, const CellInstance &) = default;

private:
    int m_;
    Duration epsilon_;
    Duration delta_;
    std::vector<Duration> proc_;
};

/// Robot time from completing `a` to completing `b`, excluding any wait.
///
/// L_i -> U_i is outside the four published cases; it uses the same walk
/// (pick at machine i, carry to the output buffer).
inline Duration distance(const CellInstance &inst, const Activity &a, const Activity &b) {
    if (!inst.valid(a) || !inst.valid(b)) throw std::out_of_range("activity outside instance");
    if (a == b) throw std::invalid_argument("distance of an activity to itself is undefined");
    const std::int64_t m = inst.machines();
    const std::int64_t i = a.machine;
    const std::int64_t j = b.machine;
    std::int64_t hops = 0;
    if (a.is_load() && b.is_load())
        hops = i + j;
    else if (!a.is_load() && !b.is_load())
        hops = 2 * (m + 1 - j);
    else if (!a.is_load() && b.is_load())
        hops = m + 1 + j;
    else
        hops = std::llabs(i - j) + m + 1 - j;
    return inst.epsilon() * 2 + inst.delta() * hops;
}

/// Minimum time between completing L_i and completing U_i.
inline Duration min_separation(const CellInstance &inst, int machine) {
    if (machine < 1 || machine > inst.machines()) throw std::out_of_range("machine index out of range");
    return inst.epsilon() * 2 + inst.delta() * (inst.machines() + 1 - machine) + inst.proc(machine);
}

/// Closed-form big-M used by every formulation.
///
/// Defined for uniform processing times only. Note that it exceeds the
/// cycle time of the canonical order L_1..L_m U_1..U_m by 2(m-1)delta; see
/// canonical_cycle_time() in schedule.hpp for the evaluated value.
inline Duration big_m(const CellInstance &inst) {
    if (!inst.uniform_proc())
        throw std::invalid_argument("closed-form big-M needs a uniform processing time; "
                                    "evaluate the canonical order instead");
    const std::int64_t m = inst.machines();
    const Duration &eps = inst.epsilon();
    const Duration &delta = inst.delta();
    const Duration excess = inst.proc(1) - eps * (2 * (m - 1)) - delta * (m * m + m - 2);
    return delta * (2 * (m * m + 2 * m - 1)) + eps * (4 * m) + max(Duration(0), excess);
}

/// Integer tick version of the distance matrix and separations, indexed by
/// canonical activity index. Shared by the evaluator and the search.
struct TickTable {
    int m = 0;
    std::int64_t scale = 1;
    std::vector<std::int64_t> dist;  // (2m) x (2m), diagonal unused
    std::vector<std::int64_t> sep;   // per machine, index 0..m-1

    explicit TickTable(const CellInstance &inst) : m(inst.machines()), scale(inst.tick_scale()) {
        const int n = 2 * m;
        dist.assign(static_cast<std::size_t>(n) * n, 0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b)
                    dist[static_cast<std::size_t>(a) * n + b] =
                        to_ticks(distance(inst, Activity::from_index(a, m), Activity::from_index(b, m)));
        for (int i = 1; i <= m; ++i) sep.push_back(to_ticks(min_separation(inst, i)));
    }

    [[nodiscard]] std::int64_t d(int a, int b) const { return dist[static_cast<std::size_t>(a) * 2 * m + b]; }
    [[nodiscard]] std::int64_t to_ticks(const Duration &x) const {
        const Duration scaled = x * scale;
        if (!scaled.is_integer()) throw std::logic_error("tick scale does not clear denominator");
        return scaled.num();
    }
    [[nodiscard]] Duration from_ticks(std::int64_t ticks, std::int64_t den = 1) const {
        return Duration(ticks, scale * den);
    }
};

} // namespace rcell

#endif // RCELL_CELL_HPP
