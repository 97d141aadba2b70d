#ifndef RCELL_SCHEDULE_LP_HPP
#define RCELL_SCHEDULE_LP_HPP

#include "rcell/milp/simplex.hpp"
#include "rcell/schedule.hpp"

#include <stdexcept>
#include <string>

namespace rcell {

/// The fixed-order timing problem as an explicit LP over the completion
/// times and C. Independent of the cycle-ratio evaluator; used to
/// cross-check it.
inline milp::MilpModel cycle_time_lp(const CellInstance &inst, const CycleOrder &order,
                                     SeparationScope scope = SeparationScope::all_machines) {
    const int m = inst.machines();
    const std::vector<int> cycle = order.cycle_indices();
    const int n = static_cast<int>(cycle.size());
    auto d = [&](int a, int b) {
        return distance(inst, Activity::from_index(a, m), Activity::from_index(b, m)).to_double();
    };

    milp::MilpModel lp;
    std::vector<int> var(n, -1);  // by canonical index; L_1 is the constant 0
    for (int k = 1; k < n; ++k) var[cycle[k]] = lp.add_variable("t_" + Activity::from_index(cycle[k], m).name(), 0.0, milp::infinity);
    const int c = lp.add_variable("C", 0.0, milp::infinity);
    lp.set_objective({{c, 1.0}});

    // t_next - t_prev >= d; the first step leaves L_1 at time 0.
    for (int k = 0; k + 1 < n; ++k) {
        const int a = cycle[k];
        const int b = cycle[k + 1];
        std::vector<milp::Term> terms{{var[b], 1.0}};
        if (var[a] >= 0) terms.push_back({var[a], -1.0});
        lp.add_constraint("step_" + std::to_string(k), terms, milp::Sense::ge, d(a, b));
    }
    lp.add_constraint("close", {{c, 1.0}, {var[cycle[n - 1]], -1.0}}, milp::Sense::ge, d(cycle[n - 1], 0));

    std::vector<int> pos(n);
    for (int k = 0; k < n; ++k) pos[cycle[k]] = k;
    for (int i = 1; i <= m; ++i) {
        if (!separation_applies(scope, i)) continue;
        const int l = i - 1;
        const int u = m + i - 1;
        const double s = min_separation(inst, i).to_double();
        std::vector<milp::Term> terms{{var[u], 1.0}};
        if (var[l] >= 0) terms.push_back({var[l], -1.0});
        if (pos[l] < pos[u]) {
            lp.add_constraint("sep_" + std::to_string(i), terms, milp::Sense::ge, s);
        } else {
            terms.push_back({c, 1.0});
            lp.add_constraint("sep_" + std::to_string(i), terms, milp::Sense::ge, s);
        }
    }
    return lp;
}

/// Minimum cycle time of `order` by solving cycle_time_lp().
inline double lp_cycle_time(const CellInstance &inst, const CycleOrder &order,
                            SeparationScope scope = SeparationScope::all_machines) {
    const milp::LpResult r = milp::solve_lp(cycle_time_lp(inst, order, scope));
    if (r.status != milp::LpStatus::optimal)
        throw std::runtime_error("cycle-time LP ended with status " + std::string(milp::to_string(r.status)));
    return r.objective;
}

} // namespace rcell

#endif // RCELL_SCHEDULE_LP_HPP
