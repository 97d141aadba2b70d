#ifndef RCELL_MILP_SIMPLEX_HPP
#define RCELL_MILP_SIMPLEX_HPP

#include "rcell/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace rcell::milp {

enum class LpStatus : std::uint8_t { optimal, infeasible, unbounded, iteration_limit };

inline std::string_view to_string(LpStatus s) {
    switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration-limit";
    }
    return "?";
}

struct LpTolerances {
    double primal = 1e-7;   // final residual / bound violation
    double dual = 1e-9;     // reduced-cost optimality
    double pivot = 1e-7;    // smallest usable pivot element
    double working = 1e-9;  // feasibility threshold during iterations
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    double objective = infinity;
    std::vector<double> values;
    long iterations = 0;
};

/// Basis snapshot: basic column per row plus the resting bound of each
/// nonbasic column (true = upper).
struct Basis {
    std::vector<int> basic;
    std::vector<bool> at_upper;
};

/// Dense bounded-variable primal simplex on an explicit tableau. Every row
/// gets a slack s_r with sum_j a_rj x_j + s_r = b_r; the slack bounds encode
/// the row sense. Phase 1 minimises the sum of bound violations.
class DenseSimplex {
public:
    explicit DenseSimplex(const MilpModel &model, LpTolerances tol = {})
        : tol_(tol), m_(model.num_constraints()), n_(model.num_variables()), cols_(n_ + m_) {
        a_.assign(static_cast<std::size_t>(m_) * cols_, 0.0);
        b_.resize(m_);
        lb_.resize(cols_);
        ub_.resize(cols_);
        cost_.assign(cols_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lb_[j] = model.variable(j).lb;
            ub_[j] = model.variable(j).ub;
        }
        for (int r = 0; r < m_; ++r) {
            const auto &row = model.constraints()[r];
            for (const auto &t : row.terms) a_[idx(r, t.var)] += t.coef;
            a_[idx(r, n_ + r)] = 1.0;
            b_[r] = row.rhs;
            lb_[n_ + r] = row.sense == Sense::ge ? -infinity : 0.0;
            ub_[n_ + r] = row.sense == Sense::le ? infinity : 0.0;
        }
        for (const auto &t : model.objective()) cost_[t.var] += t.coef;
        x_.assign(cols_, 0.0);
        slack_basis();
    }

    [[nodiscard]] int rows() const { return m_; }
    [[nodiscard]] int structurals() const { return n_; }
    [[nodiscard]] double lower(int j) const { return lb_[j]; }
    [[nodiscard]] double upper(int j) const { return ub_[j]; }

    /// Changes the bounds of structural `j`, keeping the current basis.
    void set_bounds(int j, double lb, double ub) {
        if (lb_[j] == lb && ub_[j] == ub) return;
        lb_[j] = lb;
        ub_[j] = ub;
        if (row_of_[j] >= 0) return;  // basic: phase 1 repairs any violation
        const double target = rest_value(j, at_upper_[j]);
        shift_nonbasic(j, target - x_[j]);
    }

    [[nodiscard]] Basis basis() const {
        Basis b;
        b.basic = basic_;
        b.at_upper = at_upper_;
        return b;
    }

    /// Installs a stored basis and refactorises. Falls back to the slack
    /// basis if the stored one is singular.
    void load_basis(const Basis &b) {
        if (!pivot_to(b.basic)) {
            basic_ = b.basic;
            row_of_.assign(cols_, -1);
            for (int r = 0; r < m_; ++r) row_of_[basic_[r]] = r;
            at_upper_ = b.at_upper;
            for (int j = 0; j < cols_; ++j)
                if (row_of_[j] < 0) x_[j] = rest_value(j, at_upper_[j]);
            if (!refactor()) slack_basis();
            pivots_since_refactor_ = 0;
            return;
        }
        at_upper_ = b.at_upper;
        for (int j = 0; j < cols_; ++j)
            if (row_of_[j] < 0) x_[j] = rest_value(j, at_upper_[j]);
        recompute_basics();
    }

    LpResult solve(long max_iterations = 200000) {
        LpResult res;
        weight_.assign(cols_, 1.0);
        bland_ = false;
        degenerate_streak_ = 0;
        long &since_refactor = pivots_since_refactor_;
        int repairs = 0;
        int perturb_rounds = 0;
        for (;;) {
            if (res.iterations >= max_iterations) {
                unperturb();
                res.status = LpStatus::iteration_limit;
                return res;
            }
            if (degenerate_streak_ > 300 && !perturbed_ && perturb_rounds < 2) {
                ++perturb_rounds;
                perturb();
                degenerate_streak_ = 0;
                bland_ = false;
            }
            if (since_refactor >= refactor_interval()) {
                if (!refactor()) slack_basis();
                since_refactor = 0;
            }
            // Short reoptimisations do best with plain Dantzig; long runs
            // (cold starts, heavy degeneracy) need the edge weights.
            devex_ = res.iterations > m_;
            const bool phase1 = any_infeasible();
            price(phase1);
            const int enter = choose_entering();
            if (enter < 0) {
                // Drift in the tableau shows up as a residual; refresh and go on.
                if (since_refactor > 0 && repairs < 3 && residual() > 1e-9) {
                    ++repairs;
                    if (!refactor()) slack_basis();
                    since_refactor = 0;
                    continue;
                }
                if (perturbed_) {
                    // Solved the widened problem; go back to the true bounds.
                    unperturb();
                    degenerate_streak_ = 0;
                    continue;
                }
                if (phase1) {
                    res.status = LpStatus::infeasible;
                    return res;
                }
                res.status = LpStatus::optimal;
                res.values.assign(x_.begin(), x_.begin() + n_);
                for (int j = 0; j < n_; ++j) res.values[j] = std::clamp(res.values[j], lb_[j], ub_[j]);
                res.objective = 0.0;
                for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.values[j];
                return res;
            }
            const Step st = ratio_test(enter, phase1);
            if (st.theta == infinity) {
                if (!phase1) {
                    unperturb();
                    res.status = LpStatus::unbounded;
                    return res;
                }
                // cannot happen with exact arithmetic; refresh and retry
                if (!refactor()) slack_basis();
                since_refactor = 0;
                bland_ = true;
                ++res.iterations;
                continue;
            }
            apply(enter, st);
            ++res.iterations;
            ++since_refactor;
            // Steps this small come from round-off and do not guarantee progress.
            if (st.theta <= 1e-9) {
                if (++degenerate_streak_ > 50) bland_ = true;
            } else {
                degenerate_streak_ = 0;
                bland_ = false;
            }
        }
    }

    /// Max |A x + s - b| over rows at the current point.
    [[nodiscard]] double residual() const {
        double worst = 0.0;
        for (int r = 0; r < m_; ++r) {
            double s = -b_[r];
            const double *row = &a_[idx(r, 0)];
            for (int j = 0; j < cols_; ++j) s += row[j] * x_[j];
            worst = std::max(worst, std::abs(s) / (1.0 + std::abs(b_[r])));
        }
        return worst;
    }

private:
    struct Step {
        double theta = infinity;
        int leave_row = -1;   // -1: entering variable flips to its other bound
        bool leave_to_upper = false;
        int dir = 1;
    };

    // Refactorising costs about one pivot per structural basic column.
    [[nodiscard]] long refactor_interval() const { return std::max<long>(100, 4L * m_); }

    // Widens every finite bound by a small random amount so that degenerate
    // vertices split apart. The true bounds come back in unperturb().
    void perturb() {
        saved_lb_ = lb_;
        saved_ub_ = ub_;
        std::uniform_real_distribution<double> u(0.5, 1.0);
        for (int j = 0; j < cols_; ++j) {
            if (lb_[j] == ub_[j]) continue;
            if (lb_[j] != -infinity) lb_[j] -= 1e-6 * (1.0 + std::abs(lb_[j])) * u(rng_);
            if (ub_[j] != infinity) ub_[j] += 1e-6 * (1.0 + std::abs(ub_[j])) * u(rng_);
        }
        for (int j = 0; j < cols_; ++j)
            if (row_of_[j] < 0) x_[j] = rest_value(j, at_upper_[j]);
        recompute_basics();
        perturbed_ = true;
    }

    void unperturb() {
        if (!perturbed_) return;
        lb_ = saved_lb_;
        ub_ = saved_ub_;
        for (int j = 0; j < cols_; ++j)
            if (row_of_[j] < 0) x_[j] = rest_value(j, at_upper_[j]);
        recompute_basics();
        perturbed_ = false;
    }

    [[nodiscard]] std::size_t idx(int r, int j) const { return static_cast<std::size_t>(r) * cols_ + j; }

    [[nodiscard]] double rest_value(int j, bool upper) const {
        if (upper && ub_[j] != infinity) return ub_[j];
        if (lb_[j] != -infinity) return lb_[j];
        if (ub_[j] != infinity) return ub_[j];
        return 0.0;
    }

    void shift_nonbasic(int j, double delta) {
        if (delta == 0.0) return;
        x_[j] += delta;
        for (int r = 0; r < m_; ++r) {
            const double t = t_[idx(r, j)];
            if (t != 0.0) x_[basic_[r]] -= t * delta;
        }
    }

    void slack_basis() {
        basic_.resize(m_);
        row_of_.assign(cols_, -1);
        at_upper_.assign(cols_, false);
        for (int r = 0; r < m_; ++r) {
            basic_[r] = n_ + r;
            row_of_[n_ + r] = r;
        }
        for (int j = 0; j < n_; ++j) {
            at_upper_[j] = lb_[j] == -infinity && ub_[j] != infinity;
            x_[j] = rest_value(j, at_upper_[j]);
        }
        t_ = a_;
        rhs_ = b_;
        recompute_basics();
    }

    // x_B = B^-1 b - T_N x_N using the current tableau (T = B^-1 A).
    void recompute_basics() {
        for (int r = 0; r < m_; ++r) {
            double s = rhs_[r];
            const double *row = &t_[idx(r, 0)];
            for (int j = 0; j < cols_; ++j)
                if (row_of_[j] < 0 && x_[j] != 0.0) s -= row[j] * x_[j];
            x_[basic_[r]] = s;
        }
    }

    // Rebuilds T = B^-1 A and B^-1 b by Gauss-Jordan on [A | b].
    bool refactor() {
        std::vector<double> t = a_;
        std::vector<double> rhs = b_;
        std::vector<int> order(m_);
        std::vector<bool> used(m_, false);
        // Slack columns are unit vectors: eliminating them first costs nothing.
        std::vector<int> seq(m_);
        std::iota(seq.begin(), seq.end(), 0);
        std::stable_partition(seq.begin(), seq.end(), [&](int k) { return basic_[k] >= n_; });
        for (int k : seq) {
            const int col = basic_[k];
            int best = -1;
            double mag = 1e-11;
            for (int r = 0; r < m_; ++r)
                if (!used[r] && std::abs(t[idx(r, col)]) > mag) {
                    mag = std::abs(t[idx(r, col)]);
                    best = r;
                }
            if (best < 0) return false;
            used[best] = true;
            order[k] = best;
            pivot_rows(t, rhs, best, col);
        }
        t_.assign(t.size(), 0.0);
        rhs_.resize(m_);
        for (int k = 0; k < m_; ++k) {
            std::copy_n(&t[idx(order[k], 0)], cols_, &t_[idx(k, 0)]);
            rhs_[k] = rhs[order[k]];
        }
        recompute_basics();
        return true;
    }

    void pivot_rows(std::vector<double> &t, std::vector<double> &rhs, int pr, int pc) const {
        double *prow = &t[idx(pr, 0)];
        const double inv = 1.0 / prow[pc];
        nz_.clear();
        for (int j = 0; j < cols_; ++j) {
            if (prow[j] == 0.0) continue;
            prow[j] *= inv;
            nz_.push_back(j);
        }
        prow[pc] = 1.0;
        rhs[pr] *= inv;
        for (int r = 0; r < m_; ++r) {
            if (r == pr) continue;
            double *row = &t[idx(r, 0)];
            const double f = row[pc];
            if (f == 0.0) continue;
            for (int j : nz_) {
                double v = row[j] - f * prow[j];
                if (std::abs(v) < 1e-13) v = 0.0;
                row[j] = v;
            }
            row[pc] = 0.0;
            rhs[r] -= f * rhs[pr];
        }
    }

    // Moves the tableau to the basis `target` by exchanging only the columns
    // that differ. Gives up (false) when the difference is large or a pivot
    // element is too small; the caller then refactorises from scratch.
    bool pivot_to(const std::vector<int> &target) {
        std::vector<bool> wanted(cols_, false);
        for (int j : target) wanted[j] = true;
        std::vector<int> incoming;
        for (int j : target)
            if (row_of_[j] < 0) incoming.push_back(j);
        if (incoming.empty()) return true;
        if (static_cast<int>(incoming.size()) * 3 > m_ || pivots_since_refactor_ + static_cast<long>(incoming.size()) > refactor_interval()) return false;
        for (int j : incoming) {
            int best = -1;
            double mag = 1e-7;
            for (int r = 0; r < m_; ++r) {
                if (wanted[basic_[r]]) continue;
                const double t = std::abs(t_[idx(r, j)]);
                if (t > mag) {
                    mag = t;
                    best = r;
                }
            }
            if (best < 0) return false;
            const int out = basic_[best];
            pivot_rows(t_, rhs_, best, j);
            basic_[best] = j;
            row_of_[j] = best;
            row_of_[out] = -1;
            ++pivots_since_refactor_;
        }
        return true;
    }

    [[nodiscard]] bool infeasible_value(int j) const {
        return x_[j] < lb_[j] - tol_.working || x_[j] > ub_[j] + tol_.working;
    }

    [[nodiscard]] bool any_infeasible() const {
        for (int r = 0; r < m_; ++r)
            if (infeasible_value(basic_[r])) return true;
        return false;
    }

    void price(bool phase1) {
        d_.assign(cols_, 0.0);
        if (!phase1)
            for (int j = 0; j < cols_; ++j) d_[j] = cost_[j];
        for (int r = 0; r < m_; ++r) {
            const int bj = basic_[r];
            double cb;
            if (phase1)
                cb = x_[bj] < lb_[bj] - tol_.working ? -1.0 : x_[bj] > ub_[bj] + tol_.working ? 1.0 : 0.0;
            else
                cb = cost_[bj];
            if (cb == 0.0) continue;
            const double *row = &t_[idx(r, 0)];
            for (int j = 0; j < cols_; ++j)
                if (row[j] != 0.0) d_[j] -= cb * row[j];
        }
    }

    [[nodiscard]] int choose_entering() const {
        int best = -1;
        double score = 0.0;
        for (int j = 0; j < cols_; ++j) {
            if (row_of_[j] >= 0 || lb_[j] == ub_[j]) continue;
            const double dj = d_[j];
            const bool can_up = x_[j] < ub_[j] - tol_.working;
            const bool can_down = x_[j] > lb_[j] + tol_.working;
            double gain = 0.0;
            if (dj < -tol_.dual && can_up) gain = -dj;
            else if (dj > tol_.dual && can_down) gain = dj;
            if (gain == 0.0) continue;
            if (bland_) return j;
            if (devex_) gain = gain * gain / weight_[j];
            if (gain > score || best < 0) {
                score = gain;
                best = j;
            }
        }
        return best;
    }

    [[nodiscard]] Step ratio_test(int enter, bool phase1) const {
        Step st;
        st.dir = d_[enter] < 0 ? 1 : -1;
        if (lb_[enter] != -infinity && ub_[enter] != infinity) st.theta = ub_[enter] - lb_[enter];
        double best_alpha = 0.0;
        int best_var = -1;
        for (int r = 0; r < m_; ++r) {
            const double t = t_[idx(r, enter)];
            if (std::abs(t) <= tol_.pivot) continue;
            const double alpha = -t * st.dir;  // change of x_B[r] per unit step
            const int bj = basic_[r];
            const double x = x_[bj];
            double limit = infinity;
            bool to_upper = false;
            if (phase1 && x < lb_[bj] - tol_.working) {
                if (alpha > 0) limit = (lb_[bj] - x) / alpha;
            } else if (phase1 && x > ub_[bj] + tol_.working) {
                if (alpha < 0) {
                    limit = (x - ub_[bj]) / -alpha;
                    to_upper = true;
                }
            } else if (alpha < 0) {
                if (lb_[bj] != -infinity) limit = std::max(0.0, x - lb_[bj]) / -alpha;
            } else if (ub_[bj] != infinity) {
                limit = std::max(0.0, ub_[bj] - x) / alpha;
                to_upper = true;
            }
            if (limit == infinity) continue;
            const double mag = std::abs(alpha);
            bool take;
            if (st.leave_row < 0 && limit < st.theta) take = true;
            else if (limit < st.theta - (bland_ ? 1e-9 : 1e-12)) take = true;
            else if (limit <= st.theta + (bland_ ? 1e-9 : 1e-12) && st.leave_row >= 0)
                take = bland_ ? bj < best_var : mag > best_alpha;
            else take = false;
            if (take) {
                st.theta = limit;
                st.leave_row = r;
                st.leave_to_upper = to_upper;
                best_alpha = mag;
                best_var = bj;
            }
        }
        return st;
    }

    void apply(int enter, const Step &st) {
        const double step = st.theta * st.dir;
        if (st.leave_row < 0) {
            shift_nonbasic(enter, step);
            at_upper_[enter] = st.dir > 0;
            x_[enter] = rest_value(enter, at_upper_[enter]);
            return;
        }
        shift_nonbasic(enter, step);
        const int r = st.leave_row;
        const int leave = basic_[r];
        update_weights(r, enter, leave);
        at_upper_[leave] = st.leave_to_upper;
        x_[leave] = rest_value(leave, st.leave_to_upper);
        rhs_pivot(r, enter);
        basic_[r] = enter;
        row_of_[enter] = r;
        row_of_[leave] = -1;
    }

    void update_weights(int r, int enter, int leave) {
        const double *row = &t_[idx(r, 0)];
        const double aq = row[enter];
        const double wq = weight_[enter];
        for (int j = 0; j < cols_; ++j) {
            if (row_of_[j] >= 0 || j == enter || row[j] == 0.0) continue;
            const double ratio = row[j] / aq;
            weight_[j] = std::max(weight_[j], ratio * ratio * wq);
        }
        weight_[leave] = std::max(wq / (aq * aq), 1.0);
        // Restart the reference framework before the weights lose meaning.
        for (int j = 0; j < cols_; ++j)
            if (!(weight_[j] <= 1e6)) {
                weight_.assign(cols_, 1.0);
                break;
            }
    }

    void rhs_pivot(int r, int enter) { pivot_rows(t_, rhs_, r, enter); }

    LpTolerances tol_;
    int m_, n_, cols_;
    std::vector<double> a_, b_;
    std::vector<double> t_, rhs_;
    std::vector<double> lb_, ub_, cost_, x_, d_;
    std::vector<double> weight_;  // devex reference weights
    std::vector<int> basic_, row_of_;
    std::vector<bool> at_upper_;
    bool bland_ = false;
    bool devex_ = false;
    int degenerate_streak_ = 0;
    long pivots_since_refactor_ = 0;
    bool perturbed_ = false;
    std::vector<double> saved_lb_, saved_ub_;
    std::mt19937 rng_{12345};
    mutable std::vector<int> nz_;

};

/// Solves the LP relaxation of `model` (binaries relaxed to [0,1]).
inline LpResult solve_lp(const MilpModel &model, LpTolerances tol = {}) {
    if (model.num_constraints() == 0) throw ModelError("model has no constraints");
    DenseSimplex lp(model, tol);
    return lp.solve();
}

} // namespace rcell::milp

#endif // RCELL_MILP_SIMPLEX_HPP
