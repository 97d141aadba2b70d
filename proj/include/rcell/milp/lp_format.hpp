#ifndef RCELL_MILP_LP_FORMAT_HPP
#define RCELL_MILP_LP_FORMAT_HPP

#include "rcell/milp/model.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace rcell::milp {

class LpFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string format_number(double v) {
    if (v == infinity) return "+inf";
    if (v == -infinity) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Accumulates tokens and wraps lines at a soft width.
class LineWriter {
public:
    explicit LineWriter(std::ostream &os) : os_(os) {}
    void begin(const std::string &head) {
        os_ << ' ' << head;
        width_ = head.size() + 1;
    }
    void token(const std::string &tok) {
        if (width_ + tok.size() + 1 > 78) {
            os_ << "\n   ";
            width_ = 3;
        }
        os_ << ' ' << tok;
        width_ += tok.size() + 1;
    }
    void end() {
        os_ << '\n';
        width_ = 0;
    }

private:
    std::ostream &os_;
    std::size_t width_ = 0;
};

inline void write_terms(LineWriter &lw, const MilpModel &model, const std::vector<Term> &terms) {
    if (terms.empty() && model.num_variables() > 0) {
        lw.token("+");
        lw.token("0");
        lw.token(model.variable(0).name);
        return;
    }
    for (const auto &t : terms) {
        lw.token(t.coef < 0 ? "-" : "+");
        lw.token(format_number(std::abs(t.coef)));
        lw.token(model.variable(t.var).name);
    }
}

inline nlohmann::json metadata_json(const ModelMetadata &md) {
    return {{"v", 1},
            {"formulation", std::string(to_string(md.kind.formulation))},
            {"variant", std::string(to_string(md.kind.variant))},
            {"objective", std::string(to_string(md.kind.objective))},
            {"machines", md.machines},
            {"instance", md.instance_hash},
            {"big_m", md.big_m},
            {"scope", md.scope}};
}

inline ModelMetadata metadata_from_json(const nlohmann::json &j) {
    ModelMetadata md;
    md.present = true;
    const std::string f = j.at("formulation").get<std::string>();
    if (f == "mtz")
        md.kind.formulation = Formulation::mtz;
    else if (f == "vajda")
        md.kind.formulation = Formulation::vajda;
    else if (f == "flow")
        md.kind.formulation = Formulation::flow;
    else
        throw LpFormatError("unknown formulation tag '" + f + "'");
    md.kind.variant = j.at("variant").get<std::string>() == "waits" ? Variant::waits : Variant::base;
    md.kind.objective = j.at("objective").get<std::string>() == "travel-plus-wait" ? ObjectiveForm::travel_plus_wait
                                                                                  : ObjectiveForm::cycle_variable;
    md.machines = j.at("machines").get<int>();
    md.instance_hash = j.at("instance").get<std::string>();
    md.big_m = j.at("big_m").get<double>();
    md.scope = j.value("scope", std::string("all"));
    return md;
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

inline double parse_number(const std::string &tok) {
    const std::string l = lower(tok);
    if (l == "+inf" || l == "inf" || l == "+infinity" || l == "infinity") return infinity;
    if (l == "-inf" || l == "-infinity") return -infinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception &) {
        throw LpFormatError("expected a number, got '" + tok + "'");
    }
    if (used != tok.size()) throw LpFormatError("expected a number, got '" + tok + "'");
    return v;
}

inline bool is_number(const std::string &tok) {
    if (tok.empty()) return false;
    try {
        (void)parse_number(tok);
        return true;
    } catch (const LpFormatError &) {
        return false;
    }
}

inline bool is_sense(const std::string &tok) {
    return tok == "<=" || tok == ">=" || tok == "=" || tok == "=<" || tok == "=>" || tok == "<" || tok == ">";
}

inline Sense to_sense(const std::string &tok) {
    if (tok == "<=" || tok == "=<" || tok == "<") return Sense::le;
    if (tok == ">=" || tok == "=>" || tok == ">") return Sense::ge;
    return Sense::eq;
}

} // namespace detail

/// Writes `model` in LP text format. Metadata goes into a leading comment
/// line so that other readers skip it.
inline void write_lp(const MilpModel &model, std::ostream &os) {
    model.validate();
    if (model.metadata.present) os << "\\ rcell " << detail::metadata_json(model.metadata).dump() << '\n';
    detail::LineWriter lw(os);
    os << "Minimize\n";
    lw.begin("obj:");
    detail::write_terms(lw, model, model.objective());
    lw.end();
    os << "Subject To\n";
    for (const auto &row : model.constraints()) {
        lw.begin(row.name + ":");
        detail::write_terms(lw, model, row.terms);
        lw.token(row.sense == Sense::le ? "<=" : row.sense == Sense::ge ? ">=" : "=");
        lw.token(detail::format_number(row.rhs));
        lw.end();
    }
    os << "Bounds\n";
    for (const auto &v : model.variables()) {
        if (v.lb == -infinity && v.ub == infinity)
            os << ' ' << v.name << " free\n";
        else if (v.lb == v.ub)
            os << ' ' << v.name << " = " << detail::format_number(v.lb) << '\n';
        else
            os << ' ' << detail::format_number(v.lb) << " <= " << v.name << " <= " << detail::format_number(v.ub)
               << '\n';
    }
    bool any_binary = false;
    for (const auto &v : model.variables()) {
        if (v.kind != VarKind::binary) continue;
        if (!any_binary) os << "Binaries\n";
        any_binary = true;
        os << ' ' << v.name << '\n';
    }
    os << "End\n";
    if (!os) throw std::runtime_error("failed to write LP output");
}

inline std::string to_lp_string(const MilpModel &model) {
    std::ostringstream os;
    write_lp(model, os);
    return os.str();
}

/// Reads the LP subset produced by write_lp (plus common spellings of the
/// section keywords). Variable order follows the Bounds section, then first use.
inline MilpModel read_lp(std::istream &is) {
    enum class Section { none, objective, constraints, bounds, binaries, done };
    struct RawRow {
        std::string name;
        std::vector<std::pair<std::string, double>> terms;
        Sense sense = Sense::le;
        double rhs = 0.0;
    };
    struct RawVar {
        double lb = 0.0, ub = infinity;
        bool binary = false, bounded = false;
    };

    ModelMetadata md;
    std::vector<std::string> order;
    std::map<std::string, RawVar> vars;
    auto touch = [&](const std::string &name) -> RawVar & {
        auto [it, fresh] = vars.try_emplace(name);
        if (fresh) order.push_back(name);
        return it->second;
    };
    std::vector<std::string> bound_order;
    std::vector<std::pair<std::string, double>> objective;
    std::vector<RawRow> rows;

    // Tokenize the body per section; constraint statements may span lines.
    Section section = Section::none;
    std::vector<std::string> pending;
    auto flush_statement = [&]() {
        if (pending.empty()) return;
        std::vector<std::string> toks;
        toks.swap(pending);
        std::string name;
        std::size_t k = 0;
        if (!toks.empty() && toks[0].size() > 1 && toks[0].back() == ':') {
            name = toks[0].substr(0, toks[0].size() - 1);
            k = 1;
        }
        std::vector<std::pair<std::string, double>> terms;
        double sign = 1.0, coef = 1.0;
        bool have_coef = false;
        for (; k < toks.size(); ++k) {
            const std::string &tok = toks[k];
            if (tok == "+" || tok == "-") {
                sign = tok == "-" ? -1.0 : 1.0;
                continue;
            }
            if (detail::is_sense(tok)) break;
            if (!have_coef && detail::is_number(tok) && k + 1 < toks.size() && !detail::is_sense(toks[k + 1])) {
                coef = detail::parse_number(tok);
                have_coef = true;
                continue;
            }
            touch(tok);
            terms.emplace_back(tok, sign * coef);
            sign = 1.0;
            coef = 1.0;
            have_coef = false;
        }
        if (section == Section::objective) {
            objective = std::move(terms);
            return;
        }
        if (k + 2 != toks.size()) throw LpFormatError("malformed constraint '" + name + "'");
        RawRow row{name.empty() ? "R" + std::to_string(rows.size() + 1) : name, std::move(terms),
                   detail::to_sense(toks[k]), detail::parse_number(toks[k + 1])};
        rows.push_back(std::move(row));
    };

    auto bound_line = [&](const std::vector<std::string> &t) {
        if (t.size() == 2 && detail::lower(t[1]) == "free") {
            auto &v = touch(t[0]);
            v.lb = -infinity;
            v.ub = infinity;
            v.bounded = true;
            bound_order.push_back(t[0]);
        } else if (t.size() == 5 && detail::is_sense(t[1]) && detail::is_sense(t[3])) {
            auto &v = touch(t[2]);
            v.lb = detail::parse_number(t[0]);
            v.ub = detail::parse_number(t[4]);
            v.bounded = true;
            bound_order.push_back(t[2]);
        } else if (t.size() == 3 && detail::is_sense(t[1])) {
            auto &v = touch(t[0]);
            const double val = detail::parse_number(t[2]);
            const Sense s = detail::to_sense(t[1]);
            if (s != Sense::ge) v.ub = val;
            if (s != Sense::le) v.lb = val;
            v.bounded = true;
            bound_order.push_back(t[0]);
        } else {
            throw LpFormatError("malformed bound line");
        }
    };

    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("\\", 0) == 0) {
            const std::string tag = "\\ rcell ";
            if (line.rfind(tag, 0) == 0) {
                try {
                    md = detail::metadata_from_json(nlohmann::json::parse(line.substr(tag.size())));
                } catch (const nlohmann::json::exception &e) {
                    throw LpFormatError(std::string("bad metadata line: ") + e.what());
                }
            }
            continue;
        }
        std::istringstream ls(line);
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (toks.empty()) continue;
        const std::string head = detail::lower(toks[0]);
        const bool indented = std::isspace(static_cast<unsigned char>(line[0])) != 0;
        if (!indented) {
            Section next = Section::none;
            if (head == "minimize" || head == "minimise" || head == "min")
                next = Section::objective;
            else if ((head == "subject" && toks.size() > 1 && detail::lower(toks[1]) == "to") || head == "st" ||
                     head == "s.t.")
                next = Section::constraints;
            else if (head == "bounds")
                next = Section::bounds;
            else if (head == "binaries" || head == "binary" || head == "bin")
                next = Section::binaries;
            else if (head == "end")
                next = Section::done;
            else if (head == "maximize" || head == "maximise" || head == "max")
                throw LpFormatError("maximization models are not supported");
            else if (head == "generals" || head == "general")
                throw LpFormatError("general integer variables are not supported");
            if (next != Section::none) {
                flush_statement();
                section = next;
                continue;
            }
        }
        switch (section) {
        case Section::objective:
        case Section::constraints:
            if (toks[0].size() > 1 && toks[0].back() == ':' && !pending.empty()) flush_statement();
            pending.insert(pending.end(), toks.begin(), toks.end());
            break;
        case Section::bounds: bound_line(toks); break;
        case Section::binaries:
            for (const auto &t : toks) {
                auto &v = touch(t);
                v.binary = true;
                if (!v.bounded) {
                    v.lb = 0.0;
                    v.ub = 1.0;
                }
            }
            break;
        case Section::none: throw LpFormatError("content before the Minimize section");
        case Section::done: break;
        }
    }
    flush_statement();
    if (section != Section::done) throw LpFormatError("missing End section");

    MilpModel model;
    model.metadata = md;
    std::vector<std::string> final_order;
    std::map<std::string, bool> placed;
    for (const auto &n : bound_order)
        if (!placed[n]) {
            placed[n] = true;
            final_order.push_back(n);
        }
    for (const auto &n : order)
        if (!placed[n]) {
            placed[n] = true;
            final_order.push_back(n);
        }
    for (const auto &n : final_order) {
        const RawVar &v = vars.at(n);
        model.add_variable(n, v.lb, v.ub, v.binary ? VarKind::binary : VarKind::continuous);
    }
    auto resolve = [&](const std::vector<std::pair<std::string, double>> &raw) {
        std::vector<Term> terms;
        for (const auto &[n, c] : raw) terms.push_back({model.at(n), c});
        return terms;
    };
    model.set_objective(resolve(objective));
    for (const auto &r : rows) model.add_constraint(r.name, resolve(r.terms), r.sense, r.rhs);
    model.validate();
    return model;
}

inline MilpModel read_lp_string(const std::string &text) {
    std::istringstream is(text);
    return read_lp(is);
}

} // namespace rcell::milp

#endif // RCELL_MILP_LP_FORMAT_HPP
