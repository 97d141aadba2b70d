#ifndef RCELL_MILP_FORMULATIONS_HPP
#define RCELL_MILP_FORMULATIONS_HPP

#include "rcell/cell.hpp"
#include "rcell/cycle_order.hpp"
#include "rcell/milp/model.hpp"
#include "rcell/schedule.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace rcell::milp {

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Shared pieces of the three builders: activity names, distances, big-M.
struct Builder {
    const CellInstance &inst;
    SeparationScope scope;
    int m;
    int n;
    double big_m_value;
    MilpModel model;

    Builder(const CellInstance &instance, SeparationScope sc, FormulationKind kind)
        : inst(instance), scope(sc), m(instance.machines()), n(2 * instance.machines()) {
        kind.validate();
        big_m_value = instance.uniform_proc() ? big_m(instance).to_double() : canonical_cycle_time(instance).to_double();
        model.metadata.present = true;
        model.metadata.kind = kind;
        model.metadata.machines = m;
        model.metadata.instance_hash = instance.hash();
        model.metadata.big_m = big_m_value;
        model.metadata.scope = std::string(to_string(scope));
    }

    [[nodiscard]] std::string name(int a) const { return Activity::from_index(a, m).name(); }
    [[nodiscard]] std::string pair(int a, int b) const { return name(a) + "_" + name(b); }
    [[nodiscard]] double d(int a, int b) const {
        return distance(inst, Activity::from_index(a, m), Activity::from_index(b, m)).to_double();
    }
    [[nodiscard]] double sep(int i) const { return min_separation(inst, i).to_double(); }
    [[nodiscard]] bool separated(int i) const { return separation_applies(scope, i); }
    [[nodiscard]] int load(int i) const { return i - 1; }
    [[nodiscard]] int unload(int i) const { return m + i - 1; }

    // Index of an (a, b) pair variable block laid out a-major, skipping a == b.
    [[nodiscard]] int pair_offset(int a, int b) const { return a * (n - 1) + (b < a ? b : b - 1); }
};

} // namespace detail

/// Position-variable (MTZ-style) model. t_{L1} is fixed to 0 and z_1 to 1.
inline MilpModel build_mtz(const CellInstance &inst, Variant variant = Variant::base,
                           ObjectiveForm objective = ObjectiveForm::cycle_variable,
                           SeparationScope scope = SeparationScope::all_machines) {
    detail::Builder b(inst, scope, {Formulation::mtz, variant, objective});
    MilpModel &mdl = b.model;
    const int n = b.n, m = b.m;
    const double M = b.big_m_value;
    const bool waits = variant == Variant::waits;

    std::vector<int> x(n * (n - 1)), w;
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            if (a != c) x[b.pair_offset(a, c)] = mdl.add_binary("x_" + b.pair(a, c));
    std::vector<int> t(n);
    for (int a = 0; a < n; ++a) t[a] = mdl.add_variable("t_" + b.name(a), 0.0, a == 0 ? 0.0 : infinity);
    const int C = mdl.add_variable("C", 0.0, infinity);
    std::vector<int> z(m + 1);
    for (int i = 1; i <= m; ++i) z[i] = mdl.add_variable("z_" + std::to_string(i), i == 1 ? 1.0 : 0.0, 1.0, VarKind::binary);
    if (waits) {
        w.resize(n * (n - 1));
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) w[b.pair_offset(a, c)] = mdl.add_variable("w_" + b.pair(a, c), 0.0, infinity);
    }
    auto X = [&](int a, int c) { return x[b.pair_offset(a, c)]; };
    auto W = [&](int a, int c) { return w[b.pair_offset(a, c)]; };

    for (int c = 0; c < n; ++c) {
        std::vector<Term> terms;
        for (int a = 0; a < n; ++a)
            if (a != c) terms.push_back({X(a, c), 1.0});
        mdl.add_constraint("in_" + b.name(c), std::move(terms), Sense::eq, 1.0);
    }
    for (int a = 0; a < n; ++a) {
        std::vector<Term> terms;
        for (int c = 0; c < n; ++c)
            if (a != c) terms.push_back({X(a, c), 1.0});
        mdl.add_constraint("out_" + b.name(a), std::move(terms), Sense::eq, 1.0);
    }
    for (int a = 0; a < n; ++a)
        for (int c = 1; c < n; ++c) {
            if (a == c) continue;
            const double dac = b.d(a, c);
            if (!waits) {
                mdl.add_constraint("prec_" + b.pair(a, c), {{t[c], 1.0}, {t[a], -1.0}, {X(a, c), -M}}, Sense::ge, dac - M);
            } else {
                mdl.add_constraint("prec_" + b.pair(a, c), {{t[c], 1.0}, {t[a], -1.0}, {W(a, c), -1.0}, {X(a, c), -M}},
                                   Sense::ge, dac - M);
                mdl.add_constraint("prec_ub_" + b.pair(a, c),
                                   {{t[c], 1.0}, {t[a], -1.0}, {W(a, c), -1.0}, {X(a, c), M}}, Sense::le, dac + M);
            }
        }
    for (int i = 1; i <= m; ++i) {
        const int L = t[b.load(i)], U = t[b.unload(i)];
        const std::string id = std::to_string(i);
        mdl.add_constraint("pair_" + id, {{U, 1.0}, {L, -1.0}, {z[i], -M}}, Sense::le, 0.0);
        if (!b.separated(i)) continue;
        const double S = b.sep(i);
        mdl.add_constraint("sep_" + id, {{U, 1.0}, {L, -1.0}, {z[i], -M}}, Sense::ge, S - M);
        mdl.add_constraint("sep_cross_" + id, {{L, 1.0}, {U, -1.0}, {C, -1.0}, {z[i], -S}}, Sense::le, -S);
    }
    for (int a = 1; a < n; ++a) {
        const double da = b.d(a, 0);
        if (!waits) {
            mdl.add_constraint("close_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {X(a, 0), -da}}, Sense::ge, 0.0);
        } else {
            mdl.add_constraint("close_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {W(a, 0), -1.0}, {X(a, 0), -M}},
                               Sense::ge, da - M);
            mdl.add_constraint("close_ub_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {W(a, 0), -1.0}, {X(a, 0), M}},
                               Sense::le, da + M);
        }
    }
    if (waits)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c)
                    mdl.add_constraint("wait_" + b.pair(a, c), {{W(a, c), 1.0}, {X(a, c), -M}}, Sense::le, 0.0);

    std::vector<Term> obj;
    if (objective == ObjectiveForm::cycle_variable) {
        obj.push_back({C, 1.0});
    } else {
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) obj.push_back({X(a, c), b.d(a, c)});
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) obj.push_back({W(a, c), 1.0});
    }
    mdl.set_objective(std::move(obj));
    return std::move(b.model);
}

/// Step-indexed (n-step) model: v_{a,b,s} = 1 when the robot passes from a
/// to b at step s; the move into L_1 is step 2m.
inline MilpModel build_vajda(const CellInstance &inst, Variant variant = Variant::base,
                             ObjectiveForm objective = ObjectiveForm::cycle_variable,
                             SeparationScope scope = SeparationScope::all_machines) {
    detail::Builder b(inst, scope, {Formulation::vajda, variant, objective});
    MilpModel &mdl = b.model;
    const int n = b.n, m = b.m;
    const double M = b.big_m_value;
    const bool waits = variant == Variant::waits;

    // v index: (pair_offset(a, c) * n + (s - 1))
    std::vector<int> v(static_cast<std::size_t>(n) * (n - 1) * n), w;
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            if (a != c)
                for (int s = 1; s <= n; ++s)
                    v[b.pair_offset(a, c) * n + s - 1] = mdl.add_binary("v_" + b.pair(a, c) + "_" + std::to_string(s));
    std::vector<int> t(n);
    for (int a = 0; a < n; ++a) t[a] = mdl.add_variable("t_" + b.name(a), 0.0, a == 0 ? 0.0 : infinity);
    const int C = mdl.add_variable("C", 0.0, infinity);
    std::vector<int> z(m + 1);
    for (int i = 1; i <= m; ++i) z[i] = mdl.add_binary("z_" + std::to_string(i));
    if (waits) {
        w.resize(n * (n - 1));
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) w[b.pair_offset(a, c)] = mdl.add_variable("w_" + b.pair(a, c), 0.0, infinity);
    }
    auto V = [&](int a, int c, int s) { return v[b.pair_offset(a, c) * n + s - 1]; };
    auto W = [&](int a, int c) { return w[b.pair_offset(a, c)]; };
    auto used = [&](int a, int c, double coef) {
        std::vector<Term> terms;
        for (int s = 1; s <= n; ++s) terms.push_back({V(a, c, s), coef});
        return terms;
    };
    auto join = [](std::vector<Term> lhs, const std::vector<Term> &rhs) {
        lhs.insert(lhs.end(), rhs.begin(), rhs.end());
        return lhs;
    };

    for (int a = 0; a < n; ++a) {
        std::vector<Term> terms;
        for (int c = 0; c < n; ++c)
            if (a != c) terms = join(std::move(terms), used(a, c, 1.0));
        mdl.add_constraint("out_" + b.name(a), std::move(terms), Sense::eq, 1.0);
    }
    for (int c = 1; c < n; ++c)
        for (int s = 1; s < n; ++s) {
            std::vector<Term> terms;
            for (int a = 0; a < n; ++a)
                if (a != c) terms.push_back({V(a, c, s), 1.0});
            for (int k = 0; k < n; ++k)
                if (k != c) terms.push_back({V(c, k, s + 1), -1.0});
            mdl.add_constraint("chain_" + b.name(c) + "_" + std::to_string(s), std::move(terms), Sense::eq, 0.0);
        }
    for (int c = 0; c < n; ++c) {
        std::vector<Term> terms;
        for (int a = 0; a < n; ++a)
            if (a != c) terms = join(std::move(terms), used(a, c, 1.0));
        mdl.add_constraint("in_" + b.name(c), std::move(terms), Sense::eq, 1.0);
    }
    for (int s = 1; s <= n; ++s) {
        std::vector<Term> terms;
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) terms.push_back({V(a, c, s), 1.0});
        mdl.add_constraint("step_" + std::to_string(s), std::move(terms), Sense::eq, 1.0);
    }
    {
        std::vector<Term> terms;
        for (int a = 1; a < n; ++a) terms.push_back({V(a, 0, n), 1.0});
        mdl.add_constraint("last_step", std::move(terms), Sense::eq, 1.0);
    }
    for (int a = 0; a < n; ++a)
        for (int c = 1; c < n; ++c) {
            if (a == c) continue;
            const double dac = b.d(a, c);
            std::vector<Term> base{{t[c], 1.0}, {t[a], -1.0}};
            if (waits) base.push_back({W(a, c), -1.0});
            mdl.add_constraint("prec_" + b.pair(a, c), join(base, used(a, c, -M)), Sense::ge, dac - M);
            if (waits) mdl.add_constraint("prec_ub_" + b.pair(a, c), join(base, used(a, c, M)), Sense::le, dac + M);
        }
    for (int j = 2; j <= m; ++j) {
        std::vector<Term> terms;
        const int U = b.unload(j), L = b.load(j);
        for (int a = 0; a < n; ++a)
            for (int s = 1; s <= n; ++s) {
                if (a != U) terms.push_back({V(a, U, s), static_cast<double>(s)});
                if (a != L) terms.push_back({V(a, L, s), -static_cast<double>(s)});
            }
        terms.push_back({z[j], -static_cast<double>(n - 1)});
        mdl.add_constraint("pair_" + std::to_string(j), std::move(terms), Sense::le, 0.0);
    }
    mdl.add_constraint("pair_1", {{z[1], 1.0}}, Sense::eq, 1.0);
    for (int j = 1; j <= m; ++j) {
        if (!b.separated(j)) continue;
        const int L = t[b.load(j)], U = t[b.unload(j)];
        const double S = b.sep(j);
        const std::string id = std::to_string(j);
        mdl.add_constraint("sep_" + id, {{U, 1.0}, {L, -1.0}, {z[j], -M}}, Sense::ge, S - M);
        mdl.add_constraint("sep_cross_" + id, {{L, 1.0}, {U, -1.0}, {C, -1.0}, {z[j], -S}}, Sense::le, -S);
    }
    for (int a = 1; a < n; ++a) {
        const double da = b.d(a, 0);
        if (!waits) {
            mdl.add_constraint("close_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {V(a, 0, n), -da}}, Sense::ge, 0.0);
        } else {
            mdl.add_constraint("close_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {W(a, 0), -1.0}, {V(a, 0, n), -M}},
                               Sense::ge, da - M);
            mdl.add_constraint("close_ub_" + b.name(a), {{C, 1.0}, {t[a], -1.0}, {W(a, 0), -1.0}, {V(a, 0, n), M}},
                               Sense::le, da + M);
        }
    }
    if (waits)
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) mdl.add_constraint("wait_" + b.pair(a, c), join({{W(a, c), 1.0}}, used(a, c, -M)), Sense::le, 0.0);

    std::vector<Term> obj;
    if (objective == ObjectiveForm::cycle_variable) {
        obj.push_back({C, 1.0});
    } else {
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) obj = join(std::move(obj), used(a, c, b.d(a, c)));
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c)
                if (a != c) obj.push_back({W(a, c), 1.0});
    }
    mdl.set_objective(std::move(obj));
    return std::move(b.model);
}

/// Single-commodity flow model: the flow t_{a,b} on a used arc is the
/// completion time of b, and waits are part of the balance rows.
inline MilpModel build_flow(const CellInstance &inst, SeparationScope scope = SeparationScope::all_machines) {
    detail::Builder b(inst, scope, {Formulation::flow, Variant::base, ObjectiveForm::cycle_variable});
    MilpModel &mdl = b.model;
    const int n = b.n, m = b.m;
    const double M = b.big_m_value;
    const double wait_cap = inst.max_proc().to_double();

    std::vector<int> x(n * (n - 1)), f(n * (n - 1)), w(n * (n - 1));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            if (a == c) continue;
            const int k = b.pair_offset(a, c);
            x[k] = mdl.add_binary("x_" + b.pair(a, c));
            f[k] = mdl.add_variable("t_" + b.pair(a, c), 0.0, infinity);
            w[k] = mdl.add_variable("w_" + b.pair(a, c), 0.0, infinity);
        }
    std::vector<int> z(m + 1, -1);
    for (int i = 2; i <= m; ++i) z[i] = mdl.add_binary("z_" + std::to_string(i));
    auto X = [&](int a, int c) { return x[b.pair_offset(a, c)]; };
    auto F = [&](int a, int c) { return f[b.pair_offset(a, c)]; };
    auto W = [&](int a, int c) { return w[b.pair_offset(a, c)]; };
    auto inflow = [&](int c, double sign) {
        std::vector<Term> terms;
        for (int a = 0; a < n; ++a)
            if (a != c) terms.push_back({F(a, c), sign});
        return terms;
    };
    auto join = [](std::vector<Term> lhs, const std::vector<Term> &rhs) {
        lhs.insert(lhs.end(), rhs.begin(), rhs.end());
        return lhs;
    };

    for (int c = 0; c < n; ++c) {
        std::vector<Term> terms;
        for (int a = 0; a < n; ++a)
            if (a != c) terms.push_back({X(a, c), 1.0});
        mdl.add_constraint("in_" + b.name(c), std::move(terms), Sense::eq, 1.0);
    }
    for (int a = 0; a < n; ++a) {
        std::vector<Term> terms;
        for (int c = 0; c < n; ++c)
            if (a != c) terms.push_back({X(a, c), 1.0});
        mdl.add_constraint("out_" + b.name(a), std::move(terms), Sense::eq, 1.0);
    }
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            if (a == c) continue;
            mdl.add_constraint("flow_cap_" + b.pair(a, c), {{F(a, c), 1.0}, {X(a, c), -M}}, Sense::le, 0.0);
            mdl.add_constraint("wait_cap_" + b.pair(a, c), {{W(a, c), 1.0}, {X(a, c), -wait_cap}}, Sense::le, 0.0);
        }
    for (int a = 0; a < n; ++a) {
        std::vector<Term> terms;
        for (int c = 0; c < n; ++c) {
            if (a == c) continue;
            terms.push_back({F(a, c), 1.0});
            terms.push_back({W(a, c), -1.0});
            terms.push_back({X(a, c), -b.d(a, c)});
        }
        if (a != 0) terms = join(std::move(terms), inflow(a, -1.0));
        mdl.add_constraint("balance_" + b.name(a), std::move(terms), Sense::eq, 0.0);
    }
    for (int i = 2; i <= m; ++i) {
        const int L = b.load(i), U = b.unload(i);
        const std::string id = std::to_string(i);
        const auto diff = join(inflow(U, 1.0), inflow(L, -1.0));
        mdl.add_constraint("pair_" + id, join(diff, {{z[i], -M}}), Sense::le, 0.0);
        if (!b.separated(i)) continue;
        const double S = b.sep(i);
        mdl.add_constraint("sep_" + id, join(diff, {{z[i], -M}}), Sense::ge, S - M);
        // completion of L_i may trail U_i by at most C - S when the part crosses the cycle boundary
        mdl.add_constraint("sep_cross_" + id, join(join(join(inflow(L, 1.0), inflow(U, -1.0)), inflow(0, -1.0)), {{z[i], -S}}),
                           Sense::le, -S);
    }
    if (b.separated(1)) mdl.add_constraint("sep_1", inflow(b.unload(1), 1.0), Sense::ge, b.sep(1));
    mdl.set_objective(inflow(0, 1.0));
    return std::move(b.model);
}

inline MilpModel build_model(const CellInstance &inst, FormulationKind kind,
                             SeparationScope scope = SeparationScope::all_machines) {
    switch (kind.formulation) {
    case Formulation::mtz: return build_mtz(inst, kind.variant, kind.objective, scope);
    case Formulation::vajda: return build_vajda(inst, kind.variant, kind.objective, scope);
    case Formulation::flow:
        kind.validate();
        return build_flow(inst, scope);
    }
    throw ModelError("unknown formulation");
}

inline SeparationScope model_scope(const MilpModel &model) {
    return model.metadata.scope == "skip-first" ? SeparationScope::skip_first_machine : SeparationScope::all_machines;
}

struct DecodedSolution {
    CycleOrder order;
    Schedule schedule;
};

/// Recovers the activity order from the successor variables of a solved
/// model and re-evaluates it.
inline DecodedSolution decode_solution(const MilpModel &model, const MilpSolution &sol, const CellInstance &inst) {
    if (!model.metadata.present) throw DecodeError("model carries no formulation metadata");
    if (model.metadata.instance_hash != inst.hash()) throw DecodeError("solution belongs to a different instance");
    if (!sol.has_incumbent()) throw DecodeError("solution has no variable values");
    if (static_cast<int>(sol.values.size()) != model.num_variables()) throw DecodeError("value vector size mismatch");
    const int m = inst.machines(), n = 2 * m;
    auto name = [&](int a) { return Activity::from_index(a, m).name(); };
    const bool stepped = model.metadata.kind.formulation == Formulation::vajda;

    std::vector<int> succ(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
            if (a == c) continue;
            double used = 0.0;
            if (stepped) {
                for (int s = 1; s <= n; ++s) {
                    const std::string vn = "v_" + name(a) + "_" + name(c) + "_" + std::to_string(s);
                    const double val = sol.values[model.at(vn)];
                    if (std::abs(val - std::round(val)) > 1e-6)
                        throw DecodeError("fractional assignment: " + vn + " = " + std::to_string(val));
                    used += std::round(val);
                }
            } else {
                const std::string xn = "x_" + name(a) + "_" + name(c);
                const double val = sol.values[model.at(xn)];
                if (std::abs(val - std::round(val)) > 1e-6)
                    throw DecodeError("fractional assignment: " + xn + " = " + std::to_string(val));
                used = std::round(val);
            }
            if (used > 1.5) throw DecodeError("arc " + name(a) + "->" + name(c) + " used more than once");
            if (used < 0.5) continue;
            if (succ[a] >= 0) throw DecodeError("activity " + name(a) + " has more than one successor");
            succ[a] = c;
        }
        if (succ[a] < 0) throw DecodeError("activity " + name(a) + " has no successor");
    }
    std::vector<int> seq;
    std::vector<bool> seen(n, false);
    seen[0] = true;
    for (int cur = succ[0]; cur != 0; cur = succ[cur]) {
        if (seen[cur]) throw DecodeError("successor structure revisits " + name(cur));
        seen[cur] = true;
        seq.push_back(cur);
    }
    if (static_cast<int>(seq.size()) != n - 1) {
        std::ostringstream msg;
        msg << "subtour: cycle through L1 covers " << seq.size() + 1 << " of " << n << " activities";
        throw DecodeError(msg.str());
    }
    CycleOrder order = CycleOrder::from_indices(m, seq);
    Schedule sched = evaluate_cycle(inst, order, model_scope(model));
    return {std::move(order), std::move(sched)};
}

/// Feasible assignment for `model` that realises `order` with its earliest
/// schedule. Throws if the order cannot be represented (instance mismatch or
/// times beyond the model's big-M).
inline std::vector<double> warm_start(const MilpModel &model, const CellInstance &inst, const CycleOrder &order) {
    if (!model.metadata.present) throw ModelError("model carries no formulation metadata");
    if (model.metadata.instance_hash != inst.hash()) throw ModelError("warm start: instance hash mismatch");
    if (order.machines() != inst.machines()) throw ModelError("warm start: order has the wrong machine count");
    const int m = inst.machines(), n = 2 * m;
    const Schedule s = evaluate_cycle(inst, order, model_scope(model));
    const std::vector<int> cycle = order.cycle_indices();
    auto name = [&](int a) { return Activity::from_index(a, m).name(); };
    auto set = [&](std::vector<double> &x, const std::string &var, double v) { x[model.at(var)] = v; };

    std::vector<double> x(model.num_variables(), 0.0);
    const Formulation f = model.metadata.kind.formulation;
    const double C = s.cycle_time.to_double();
    for (int p = 0; p < n; ++p) {
        const int a = cycle[p], c = cycle[(p + 1) % n];
        const std::string arc = name(a) + "_" + name(c);
        const double wait = s.waits[p].value.to_double();
        const double done = c == 0 ? C : s.completion[c].to_double();
        if (f == Formulation::vajda)
            set(x, "v_" + arc + "_" + std::to_string(p + 1), 1.0);
        else
            set(x, "x_" + arc, 1.0);
        if (f == Formulation::flow) set(x, "t_" + arc, done);
        if (f == Formulation::flow || model.metadata.kind.variant == Variant::waits) set(x, "w_" + arc, wait);
    }
    if (f != Formulation::flow) {
        for (int a = 0; a < n; ++a) set(x, "t_" + name(a), s.completion[a].to_double());
        set(x, "C", C);
    }
    for (int i = 1; i <= m; ++i) {
        const int zi = model.find("z_" + std::to_string(i));
        if (zi >= 0) x[zi] = s.pairing[i - 1] ? 1.0 : 0.0;
    }
    const double viol = model.max_violation(x);
    if (viol > 1e-6) {
        std::string where;
        for (const auto &row : model.constraints()) {
            const double a = MilpModel::activity(row, x);
            if ((row.sense != Sense::ge && a - row.rhs > 1e-6) || (row.sense != Sense::le && row.rhs - a > 1e-6)) {
                where = " (row " + row.name + ")";
                break;
            }
        }
        throw ModelError("warm start: order " + order.to_string() + " violates the model by " + std::to_string(viol) + where);
    }
    return x;
}

} // namespace rcell::milp

#endif // RCELL_MILP_FORMULATIONS_HPP
