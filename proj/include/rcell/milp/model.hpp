#ifndef RCELL_MILP_MODEL_HPP
#define RCELL_MILP_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace rcell::milp {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class VarKind : std::uint8_t { continuous, binary };
enum class Sense : std::uint8_t { le, eq, ge };

struct Variable {
    std::string name;
    double lb = 0.0;
    double ub = infinity;
    VarKind kind = VarKind::continuous;
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

enum class Formulation : std::uint8_t { mtz, vajda, flow };
enum class Variant : std::uint8_t { base, waits };
enum class ObjectiveForm : std::uint8_t { cycle_variable, travel_plus_wait };

inline std::string_view to_string(Formulation f) {
    switch (f) {
    case Formulation::mtz: return "mtz";
    case Formulation::vajda: return "vajda";
    case Formulation::flow: return "flow";
    }
    return "?";
}
inline std::string_view to_string(Variant v) { return v == Variant::base ? "base" : "waits"; }
inline std::string_view to_string(ObjectiveForm o) {
    return o == ObjectiveForm::cycle_variable ? "cycle-variable" : "travel-plus-wait";
}

/// Which model family produced a MilpModel and with which options.
struct FormulationKind {
    Formulation formulation = Formulation::mtz;
    Variant variant = Variant::base;
    ObjectiveForm objective = ObjectiveForm::cycle_variable;

    void validate() const {
        if (formulation == Formulation::flow && variant != Variant::base)
            throw ModelError("flow formulation has no waiting-time variant");
        if (objective == ObjectiveForm::travel_plus_wait && variant != Variant::waits)
            throw ModelError("travel-plus-wait objective requires the waiting-time variant");
    }
    friend bool operator==(const FormulationKind &, const FormulationKind &) = default;
};

struct ModelMetadata {
    bool present = false;
    FormulationKind kind;
    int machines = 0;
    std::string instance_hash;
    double big_m = 0.0;
    std::string scope = "all";
    friend bool operator==(const ModelMetadata &, const ModelMetadata &) = default;
};

class MilpModel {
public:
    int add_variable(std::string name, double lb, double ub, VarKind kind = VarKind::continuous) {
        if (name.empty()) throw ModelError("variable name must not be empty");
        if (index_.count(name)) throw ModelError("duplicate variable '" + name + "'");
        if (kind == VarKind::binary && (lb < 0.0 || ub > 1.0))
            throw ModelError("binary variable '" + name + "' must have bounds inside [0,1]");
        if (lb > ub) throw ModelError("variable '" + name + "' has lb > ub");
        const int id = static_cast<int>(vars_.size());
        index_.emplace(name, id);
        vars_.push_back({std::move(name), lb, ub, kind});
        return id;
    }
    int add_binary(std::string name) { return add_variable(std::move(name), 0.0, 1.0, VarKind::binary); }

    void add_constraint(std::string name, std::vector<Term> terms, Sense sense, double rhs) {
        for (const auto &t : terms)
            if (t.var < 0 || t.var >= static_cast<int>(vars_.size()))
                throw ModelError("constraint '" + name + "' references an undeclared variable");
        rows_.push_back({std::move(name), merge(std::move(terms)), sense, rhs});
    }

    void set_objective(std::vector<Term> terms) { objective_ = merge(std::move(terms)); }

    [[nodiscard]] int find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        return it == index_.end() ? -1 : it->second;
    }
    [[nodiscard]] int at(std::string_view name) const {
        const int id = find(name);
        if (id < 0) throw ModelError("unknown variable '" + std::string(name) + "'");
        return id;
    }

    [[nodiscard]] const std::vector<Variable> &variables() const { return vars_; }
    [[nodiscard]] const std::vector<Constraint> &constraints() const { return rows_; }
    [[nodiscard]] const std::vector<Term> &objective() const { return objective_; }
    [[nodiscard]] int num_variables() const { return static_cast<int>(vars_.size()); }
    [[nodiscard]] int num_constraints() const { return static_cast<int>(rows_.size()); }
    [[nodiscard]] Variable &variable(int j) { return vars_.at(j); }
    [[nodiscard]] const Variable &variable(int j) const { return vars_.at(j); }

    ModelMetadata metadata;

    [[nodiscard]] int count_kind(VarKind kind) const {
        int n = 0;
        for (const auto &v : vars_) n += v.kind == kind;
        return n;
    }

    [[nodiscard]] double objective_value(const std::vector<double> &x) const {
        double s = 0.0;
        for (const auto &t : objective_) s += t.coef * x.at(t.var);
        return s;
    }

    [[nodiscard]] static double activity(const Constraint &row, const std::vector<double> &x) {
        double s = 0.0;
        for (const auto &t : row.terms) s += t.coef * x.at(t.var);
        return s;
    }

    /// Largest violation of any row, bound, or integrality requirement.
    [[nodiscard]] double max_violation(const std::vector<double> &x, bool integrality = true) const {
        if (x.size() != vars_.size()) throw ModelError("assignment size does not match model");
        double worst = 0.0;
        for (std::size_t j = 0; j < vars_.size(); ++j) {
            worst = std::max({worst, vars_[j].lb - x[j], x[j] - vars_[j].ub});
            if (integrality && vars_[j].kind == VarKind::binary) worst = std::max(worst, std::abs(x[j] - std::round(x[j])));
        }
        for (const auto &row : rows_) {
            const double a = activity(row, x);
            if (row.sense != Sense::ge) worst = std::max(worst, a - row.rhs);
            if (row.sense != Sense::le) worst = std::max(worst, row.rhs - a);
        }
        return worst;
    }

    /// Structural checks; throws ModelError.
    void validate() const {
        if (vars_.empty()) throw ModelError("model has no variables");
        if (rows_.empty()) throw ModelError("model has no constraints");
        std::map<std::string, int> names;
        for (const auto &row : rows_) {
            if (row.name.empty()) throw ModelError("constraint without a name");
            if (!names.emplace(row.name, 0).second) throw ModelError("duplicate constraint '" + row.name + "'");
            if (!std::isfinite(row.rhs)) throw ModelError("constraint '" + row.name + "' has non-finite rhs");
        }
        for (const auto &v : vars_)
            if (v.kind == VarKind::binary && (v.lb < 0.0 || v.ub > 1.0))
                throw ModelError("binary variable '" + v.name + "' outside [0,1]");
        if (metadata.present) metadata.kind.validate();
    }

private:
    static std::vector<Term> merge(std::vector<Term> terms) {
        std::vector<Term> out;
        std::unordered_map<int, std::size_t> slot;
        for (const auto &t : terms) {
            auto [it, fresh] = slot.emplace(t.var, out.size());
            if (fresh)
                out.push_back(t);
            else
                out[it->second].coef += t.coef;
        }
        std::erase_if(out, [](const Term &t) { return t.coef == 0.0; });
        return out;
    }

    std::vector<Variable> vars_;
    std::vector<Constraint> rows_;
    std::vector<Term> objective_;
    std::unordered_map<std::string, int> index_;
};

enum class MilpStatus : std::uint8_t { optimal, infeasible, unbounded, limit };

inline std::string_view to_string(MilpStatus s) {
    switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::unbounded: return "unbounded";
    case MilpStatus::limit: return "limit";
    }
    return "?";
}

struct MilpSolution {
    MilpStatus status = MilpStatus::infeasible;
    double objective = infinity;
    std::vector<double> values;
    double best_bound = -infinity;
    double root_bound = -infinity;
    std::uint64_t nodes = 0;
    std::uint64_t lp_iterations = 0;
    double seconds = 0.0;
    [[nodiscard]] bool has_incumbent() const { return !values.empty(); }
};

} // namespace rcell::milp

#endif // RCELL_MILP_MODEL_HPP
