#ifndef RCELL_MILP_BRANCH_AND_BOUND_HPP
#define RCELL_MILP_BRANCH_AND_BOUND_HPP

#include "rcell/milp/model.hpp"
#include "rcell/milp/simplex.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <ostream>
#include <queue>
#include <vector>

namespace rcell::milp {

struct BnbOptions {
    double integrality_tol = 1e-6;
    double abs_gap = 0.0;
    std::optional<std::uint64_t> node_limit;
    std::optional<double> time_limit;  // seconds
    bool propagate = true;
    /// Reinstall the parent's basis when jumping across the tree; otherwise
    /// the last basis is reused as is.
    bool restore_basis = true;
    /// Continue directly into one child (the rounding direction) and only
    /// fall back to the best-bound queue when the plunge ends.
    bool plunge = true;
    std::ostream *log = nullptr;
    /// Optional feasible assignment used as the starting incumbent.
    std::vector<double> incumbent;
    LpTolerances lp;
};

/// Row-activity bound tightening over the model rows plus an optional
/// objective cutoff row.
class Propagator {
public:
    Propagator(const MilpModel &model, double int_tol) : model_(model), int_tol_(int_tol) {
        for (const auto &row : model.constraints()) {
            if (row.sense != Sense::ge) rows_.push_back({row.terms, row.rhs});
            if (row.sense != Sense::le) rows_.push_back({negate(row.terms), -row.rhs});
        }
        binary_.resize(model.num_variables());
        for (int j = 0; j < model.num_variables(); ++j) binary_[j] = model.variable(j).kind == VarKind::binary;
    }

    void set_cutoff(double value) {
        cutoff_ = Row{model_.objective(), value};
        has_cutoff_ = true;
    }

    /// Tightens [lb, ub] in place; false when the box is proven empty.
    bool run(std::vector<double> &lb, std::vector<double> &ub, int max_passes = 12) const {
        for (int pass = 0; pass < max_passes; ++pass) {
            bool changed = false;
            for (const auto &row : rows_)
                if (!tighten(row, lb, ub, changed)) return false;
            if (has_cutoff_ && !tighten(cutoff_, lb, ub, changed)) return false;
            if (!changed) break;
        }
        return true;
    }

private:
    struct Row {
        std::vector<Term> terms;  // sum terms <= rhs
        double rhs;
    };

    static std::vector<Term> negate(std::vector<Term> t) {
        for (auto &x : t) x.coef = -x.coef;
        return t;
    }

    bool tighten(const Row &row, std::vector<double> &lb, std::vector<double> &ub, bool &changed) const {
        double minact = 0.0;
        int inf_count = 0;
        int inf_var = -1;
        for (const auto &t : row.terms) {
            const double b = t.coef > 0 ? lb[t.var] : ub[t.var];
            if (std::isinf(b)) {
                ++inf_count;
                inf_var = t.var;
            } else {
                minact += t.coef * b;
            }
        }
        const double slack_tol = 1e-7 * (1.0 + std::abs(row.rhs));
        if (inf_count == 0 && minact > row.rhs + slack_tol) return false;
        if (inf_count > 1) return true;
        for (const auto &t : row.terms) {
            const double own = t.coef > 0 ? lb[t.var] : ub[t.var];
            double rest;
            if (inf_count == 1) {
                if (t.var != inf_var) continue;
                rest = minact;
            } else {
                rest = minact - t.coef * own;
            }
            const double bound = (row.rhs - rest) / t.coef;
            const int j = t.var;
            if (t.coef > 0) {
                double nb = bound;
                if (binary_[j]) nb = nb < 1.0 - int_tol_ ? (nb < -int_tol_ ? -1.0 : 0.0) : 1.0;
                else nb += 1e-9 * (1.0 + std::abs(nb));
                if (nb < ub[j] - 1e-6 * (1.0 + std::abs(ub[j]))) {
                    ub[j] = nb;
                    changed = true;
                    if (lb[j] > ub[j] + 1e-6) return false;
                }
            } else {
                double nb = bound;
                if (binary_[j]) nb = nb > int_tol_ ? (nb > 1.0 + int_tol_ ? 2.0 : 1.0) : 0.0;
                else nb -= 1e-9 * (1.0 + std::abs(nb));
                if (nb > lb[j] + 1e-6 * (1.0 + std::abs(lb[j]))) {
                    lb[j] = nb;
                    changed = true;
                    if (lb[j] > ub[j] + 1e-6) return false;
                }
            }
        }
        return true;
    }

    const MilpModel &model_;
    double int_tol_;
    std::vector<Row> rows_;
    Row cutoff_{};
    bool has_cutoff_ = false;
    std::vector<bool> binary_;
};

namespace detail {

struct BoundChange {
    std::shared_ptr<const BoundChange> parent;
    int var;
    double lb, ub;
};

struct Node {
    std::uint64_t id = 0;
    std::uint64_t parent = 0;
    int depth = 0;
    double bound = -infinity;
    std::shared_ptr<const BoundChange> changes;
    std::shared_ptr<const Basis> basis;
};

struct NodeOrder {
    bool operator()(const Node &a, const Node &b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id < b.id;  // newest first among equal bounds
    }
};

inline std::string fmt(double v) {
    if (v == infinity) return "inf";
    if (v == -infinity) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace detail

/// Best-bound branch-and-bound on binary variables with most-fractional
/// branching (lowest index on ties) and plunging. Single threaded and
/// deterministic.
inline MilpSolution solve_milp(const MilpModel &model, const BnbOptions &opts = {}) {
    const auto started = std::chrono::steady_clock::now();
    model.validate();
    const int n = model.num_variables();
    std::vector<int> binaries;
    for (int j = 0; j < n; ++j)
        if (model.variable(j).kind == VarKind::binary) binaries.push_back(j);

    std::vector<double> lb0(n), ub0(n);
    for (int j = 0; j < n; ++j) {
        lb0[j] = model.variable(j).lb;
        ub0[j] = model.variable(j).ub;
    }

    MilpSolution sol;
    Propagator prop(model, opts.integrality_tol);
    double cutoff = infinity;
    auto gap_tol = [&](double inc) { return std::max(opts.abs_gap, 1e-6 * std::max(1.0, std::abs(inc))); };
    auto set_incumbent = [&](std::vector<double> x, double obj) {
        sol.values = std::move(x);
        sol.objective = obj;
        cutoff = obj - gap_tol(obj);
        prop.set_cutoff(cutoff);
    };
    if (!opts.incumbent.empty()) {
        if (static_cast<int>(opts.incumbent.size()) != n) throw ModelError("warm start size does not match model");
        if (model.max_violation(opts.incumbent) > 1e-6) throw ModelError("warm start assignment is infeasible");
        set_incumbent(opts.incumbent, model.objective_value(opts.incumbent));
    }

    DenseSimplex lp(model, opts.lp);
    std::priority_queue<detail::Node, std::vector<detail::Node>, detail::NodeOrder> open;
    open.push(detail::Node{});
    std::uint64_t next_id = 1;
    std::uint64_t last_solved = ~std::uint64_t{0};
    bool hit_limit = false;
    std::vector<double> lb, ub;
    std::vector<const detail::BoundChange *> path;

    auto elapsed = [&]() {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    auto log = [&](const detail::Node &nd, double bound, const std::string &branch) {
        if (!opts.log) return;
        *opts.log << "node " << nd.id << " depth " << nd.depth << " bound " << detail::fmt(bound) << " incumbent "
                  << detail::fmt(sol.objective) << " branch " << branch << '\n';
    };

    std::optional<detail::Node> plunge;
    while (plunge || !open.empty()) {
        if ((opts.node_limit && sol.nodes >= *opts.node_limit) || (opts.time_limit && elapsed() > *opts.time_limit)) {
            if (plunge) open.push(std::move(*plunge));
            hit_limit = true;
            break;
        }
        detail::Node nd;
        if (plunge) {
            nd = std::move(*plunge);
            plunge.reset();
        } else {
            nd = open.top();
            open.pop();
        }
        if (nd.bound >= cutoff) continue;
        ++sol.nodes;

        lb = lb0;
        ub = ub0;
        path.clear();
        for (const detail::BoundChange *c = nd.changes.get(); c; c = c->parent.get()) path.push_back(c);
        for (auto it = path.rbegin(); it != path.rend(); ++it) {
            lb[(*it)->var] = std::max(lb[(*it)->var], (*it)->lb);
            ub[(*it)->var] = std::min(ub[(*it)->var], (*it)->ub);
        }
        if (opts.propagate && !prop.run(lb, ub)) {
            log(nd, nd.bound, "infeasible");
            continue;
        }
        for (int j = 0; j < n; ++j) lp.set_bounds(j, lb[j], std::max(lb[j], ub[j]));
        if (opts.restore_basis && nd.basis && nd.parent != last_solved) lp.load_basis(*nd.basis);
        const LpResult r = lp.solve();
        last_solved = nd.id;
        sol.lp_iterations += static_cast<std::uint64_t>(r.iterations);
        if (r.status == LpStatus::infeasible) {
            log(nd, nd.bound, "infeasible");
            continue;
        }
        if (r.status == LpStatus::unbounded) {
            if (nd.id == 0) {
                sol.status = MilpStatus::unbounded;
                sol.seconds = elapsed();
                return sol;
            }
            continue;
        }
        if (r.status == LpStatus::iteration_limit) {
            hit_limit = true;
            open.push(nd);
            break;
        }
        const double bound = std::max(nd.bound, r.objective);
        if (nd.id == 0) sol.root_bound = r.objective;
        if (bound >= cutoff) {
            log(nd, bound, "pruned");
            continue;
        }
        int branch = -1;
        double frac_best = opts.integrality_tol;
        for (int j : binaries) {
            const double f = std::abs(r.values[j] - std::round(r.values[j]));
            if (f > frac_best) {
                frac_best = f;
                branch = j;
            }
        }
        if (branch < 0) {
            std::vector<double> x = r.values;
            for (int j : binaries) x[j] = std::round(x[j]);
            log(nd, bound, "integral");
            set_incumbent(std::move(x), model.objective_value(r.values));
            continue;
        }
        log(nd, bound, model.variable(branch).name);
        auto basis = opts.restore_basis ? std::make_shared<const Basis>(lp.basis()) : nullptr;
        const int dive_side = r.values[branch] >= 0.5 ? 1 : 0;
        for (int side = 0; side < 2; ++side) {
            detail::Node child;
            child.id = next_id++;
            child.parent = nd.id;
            child.depth = nd.depth + 1;
            child.bound = bound;
            child.basis = basis;
            child.changes = std::make_shared<const detail::BoundChange>(
                detail::BoundChange{nd.changes, branch, side == 0 ? 0.0 : 1.0, side == 0 ? 0.0 : 1.0});
            if (opts.plunge && side == dive_side)
                plunge = std::move(child);
            else
                open.push(std::move(child));
        }
    }

    sol.seconds = elapsed();
    if (hit_limit) {
        sol.status = MilpStatus::limit;
        double best = sol.objective;
        while (!open.empty()) {
            best = std::min(best, open.top().bound);
            open.pop();
        }
        sol.best_bound = best;
        return sol;
    }
    sol.status = sol.has_incumbent() ? MilpStatus::optimal : MilpStatus::infeasible;
    sol.best_bound = sol.objective;
    return sol;
}

} // namespace rcell::milp

#endif // RCELL_MILP_BRANCH_AND_BOUND_HPP
