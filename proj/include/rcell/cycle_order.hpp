#ifndef RCELL_CYCLE_ORDER_HPP
#define RCELL_CYCLE_ORDER_HPP

#include "rcell/cell.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcell {

class InvalidOrder : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cyclic robot activity order anchored at L_1: the cycle starts when L_1
/// completes and ends when it completes again. Only the 2m-1 activities in
/// between are stored.
class CycleOrder {
public:
    CycleOrder(int machines, std::vector<Activity> sequence) : m_(machines), seq_(std::move(sequence)) {
        if (m_ < 1) throw InvalidOrder("machine count must be at least 1");
        if (static_cast<int>(seq_.size()) != 2 * m_ - 1)
            throw InvalidOrder("order must list " + std::to_string(2 * m_ - 1) + " activities, got " +
                               std::to_string(seq_.size()));
        std::vector<bool> seen(2 * m_, false);
        seen[0] = true;
        for (const auto &a : seq_) {
            if (a.machine < 1 || a.machine > m_) throw InvalidOrder("activity " + a.name() + " outside 1.." + std::to_string(m_));
            const int idx = a.index(m_);
            if (idx == 0) throw InvalidOrder("L1 is the implicit anchor and cannot appear inside the order");
            if (seen[idx]) throw InvalidOrder("duplicate activity " + a.name());
            seen[idx] = true;
        }
    }

    /// L_2..L_m U_1..U_m.
    static CycleOrder canonical(int machines) {
        std::vector<Activity> seq;
        for (int i = 2; i <= machines; ++i) seq.push_back(Activity::load(i));
        for (int i = 1; i <= machines; ++i) seq.push_back(Activity::unload(i));
        return {machines, std::move(seq)};
    }

    static CycleOrder from_indices(int machines, const std::vector<int> &indices) {
        std::vector<Activity> seq;
        seq.reserve(indices.size());
        for (int idx : indices) seq.push_back(Activity::from_index(idx, machines));
        return {machines, std::move(seq)};
    }

    /// Parses "L3 L4 U2 U3 U1 U4 L2"; a trailing "L1" is accepted and ignored.
    static CycleOrder parse(std::string_view text, int machines) {
        std::istringstream in{std::string(text)};
        std::vector<Activity> seq;
        std::string tok;
        while (in >> tok) {
            if (tok.size() < 2 || (tok[0] != 'L' && tok[0] != 'U' && tok[0] != 'l' && tok[0] != 'u'))
                throw InvalidOrder("bad activity token '" + tok + "'");
            int machine = 0;
            for (std::size_t k = 1; k < tok.size(); ++k) {
                if (tok[k] < '0' || tok[k] > '9') throw InvalidOrder("bad activity token '" + tok + "'");
                machine = machine * 10 + (tok[k] - '0');
                if (machine > 1000) throw InvalidOrder("bad activity token '" + tok + "'");
            }
            const bool load = tok[0] == 'L' || tok[0] == 'l';
            seq.push_back(load ? Activity::load(machine) : Activity::unload(machine));
        }
        if (!seq.empty() && seq.back() == Activity::load(1) && static_cast<int>(seq.size()) == 2 * machines)
            seq.pop_back();
        return {machines, std::move(seq)};
    }

    [[nodiscard]] int machines() const { return m_; }
    [[nodiscard]] const std::vector<Activity> &sequence() const { return seq_; }

    /// Canonical indices of the full cycle, starting with L_1 (index 0).
    [[nodiscard]] std::vector<int> cycle_indices() const {
        std::vector<int> out{0};
        for (const auto &a : seq_) out.push_back(a.index(m_));
        return out;
    }

    /// Lexicographic comparison on canonical activity indices.
    [[nodiscard]] bool lex_less(const CycleOrder &o) const {
        return std::lexicographical_compare(seq_.begin(), seq_.end(), o.seq_.begin(), o.seq_.end(),
                                            [this](const Activity &a, const Activity &b) {
                                                return a.index(m_) < b.index(m_);
                                            });
    }

    [[nodiscard]] std::string to_string() const {
        std::string out;
        for (const auto &a : seq_) {
            if (!out.empty()) out += ' ';
            out += a.name();
        }
        return out;
    }

    friend bool operator==(const CycleOrder &, const CycleOrder &) = default;

private:
    int m_;
    std::vector<Activity> seq_;
};

} // namespace rcell

#endif // RCELL_CYCLE_ORDER_HPP
