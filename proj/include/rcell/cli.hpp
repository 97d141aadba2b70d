#ifndef RCELL_CLI_HPP
#define RCELL_CLI_HPP

#include "rcell/bench.hpp"
#include "rcell/exact_solver.hpp"
#include "rcell/instance_io.hpp"
#include "rcell/milp/branch_and_bound.hpp"
#include "rcell/milp/formulations.hpp"
#include "rcell/milp/lp_format.hpp"
#include "rcell/schedule.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rcell::cli {

enum ExitCode : int { ok = 0, limit = 1, input_error = 2, check_mismatch = 3 };

/// Input problem the user can fix; reported on one line with exit code 2.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// "0..250/25", "4,5,6", "4..6" or any comma-separated mix.
inline std::vector<int> parse_int_list(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    auto to_int = [&](const std::string &s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception &) {
            throw UsageError("bad number '" + s + "' in list '" + text + "'");
        }
        if (used != s.size()) throw UsageError("bad number '" + s + "' in list '" + text + "'");
        return v;
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(to_int(item));
            continue;
        }
        const auto slash = item.find('/', dots);
        const int lo = to_int(item.substr(0, dots));
        const int hi = to_int(item.substr(dots + 2, slash == std::string::npos ? std::string::npos : slash - dots - 2));
        const int step = slash == std::string::npos ? 1 : to_int(item.substr(slash + 1));
        if (step <= 0) throw UsageError("range step must be positive in '" + item + "'");
        if (hi < lo) throw UsageError("range end below start in '" + item + "'");
        for (int v = lo; v <= hi; v += step) out.push_back(v);
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

inline SeparationScope parse_scope(const std::string &s) {
    if (s == "all") return SeparationScope::all_machines;
    if (s == "skip-first") return SeparationScope::skip_first_machine;
    throw UsageError("unknown scope '" + s + "' (expected all or skip-first)");
}

inline milp::FormulationKind parse_kind(const std::string &formulation, const std::string &variant,
                                        const std::string &objective) {
    milp::FormulationKind k;
    if (formulation == "mtz") k.formulation = milp::Formulation::mtz;
    else if (formulation == "vajda") k.formulation = milp::Formulation::vajda;
    else if (formulation == "flow") k.formulation = milp::Formulation::flow;
    else throw UsageError("unknown formulation '" + formulation + "'");
    if (variant == "base") k.variant = milp::Variant::base;
    else if (variant == "waits") k.variant = milp::Variant::waits;
    else throw UsageError("unknown variant '" + variant + "' (expected base or waits)");
    if (objective == "cycle") k.objective = milp::ObjectiveForm::cycle_variable;
    else if (objective == "travel-wait") k.objective = milp::ObjectiveForm::travel_plus_wait;
    else throw UsageError("unknown objective '" + objective + "' (expected cycle or travel-wait)");
    try {
        k.validate();
    } catch (const milp::ModelError &e) {
        throw UsageError(e.what());
    }
    return k;
}

inline CellInstance read_instance_arg(const std::string &arg) {
    if (arg == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return parse_instance(ss.str());
    }
    return load_instance(arg);
}

inline nlohmann::json schedule_json(const Schedule &s) {
    nlohmann::json j;
    j["C"] = duration_json(s.cycle_time);
    j["C_exact"] = s.cycle_time.to_string();
    j["order"] = s.order.to_string();
    j["travel"] = duration_json(s.travel);
    j["total_wait"] = duration_json(s.total_wait());
    j["completion"] = nlohmann::json::object();
    const int m = s.order.machines();
    for (int a = 0; a < 2 * m; ++a)
        j["completion"][Activity::from_index(a, m).name()] = duration_json(s.completion[a]);
    j["waits"] = nlohmann::json::array();
    for (const auto &w : s.waits)
        j["waits"].push_back({{"from", w.from.name()}, {"to", w.to.name()}, {"w", duration_json(w.value)}});
    j["pairing"] = nlohmann::json::array();
    for (bool z : s.pairing) j["pairing"].push_back(z ? 1 : 0);
    return j;
}

inline nlohmann::json timeline_json(const CellInstance &inst, const Schedule &s) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &seg : timeline(inst, s))
        arr.push_back({{"from", seg.from_station},
                       {"to", seg.to_station},
                       {"start", duration_json(seg.start)},
                       {"end", duration_json(seg.end)},
                       {"action", seg.action},
                       {"activity", seg.activity.name()}});
    return arr;
}

inline void print_schedule(std::ostream &out, const Schedule &s) {
    out << "C: " << s.cycle_time.to_string() << "\n";
    out << "order: L1 " << s.order.to_string() << "\n";
    out << "travel: " << s.travel.to_string() << "  total wait: " << s.total_wait().to_string() << "\n";
    out << "waits:";
    for (const auto &w : s.waits)
        if (w.value != Duration(0)) out << " " << w.from.name() << "->" << w.to.name() << "=" << w.value.to_string();
    out << "\npairing (z):";
    for (bool z : s.pairing) out << " " << (z ? 1 : 0);
    out << "\n";
}

struct SolveArgs {
    std::string instance;
    std::string method = "enum";
    std::string variant = "base";
    std::string objective = "cycle";
    std::string scope = "all";
    std::optional<double> timeout;
    std::optional<std::uint64_t> node_limit;
    unsigned threads = 1;
    bool deterministic = false;
    bool json = false;
    bool no_warm_start = false;
    std::string log_path;
};

inline int run_solve(const SolveArgs &a, std::ostream &out) {
    const CellInstance inst = read_instance_arg(a.instance);
    const SeparationScope scope = parse_scope(a.scope);
    nlohmann::json j;
    j["v"] = 1;
    j["method"] = a.method;
    j["instance"] = instance_to_json(inst);
    j["scope"] = std::string(to_string(scope));
    bool hit_limit = false;
    std::optional<Schedule> sched;

    if (a.method == "enum") {
        SearchOptions opts;
        opts.node_limit = a.node_limit;
        opts.time_limit = a.timeout;
        opts.threads = a.threads;
        opts.deterministic = a.deterministic;
        opts.scope = scope;
        const SolveResult r = solve_exact(inst, opts);
        hit_limit = !r.proven_optimal;
        j["status"] = hit_limit ? "limit" : "optimal";
        j["nodes"] = r.nodes_explored;
        j["seconds"] = r.wall_time;
        sched = r.schedule;
    } else {
        const milp::FormulationKind kind = parse_kind(a.method, a.variant, a.objective);
        const milp::MilpModel model = milp::build_model(inst, kind, scope);
        milp::BnbOptions opts;
        opts.time_limit = a.timeout;
        opts.node_limit = a.node_limit;
        std::ofstream log;
        if (!a.log_path.empty()) {
            log.open(a.log_path);
            if (!log) throw UsageError("cannot open log file '" + a.log_path + "'");
            opts.log = &log;
        }
        if (!a.no_warm_start) opts.incumbent = milp::warm_start(model, inst, CycleOrder::canonical(inst.machines()));
        const milp::MilpSolution sol = milp::solve_milp(model, opts);
        j["variant"] = a.variant;
        j["objective_form"] = a.objective;
        j["status"] = std::string(milp::to_string(sol.status));
        j["nodes"] = sol.nodes;
        j["lp_iterations"] = sol.lp_iterations;
        j["seconds"] = sol.seconds;
        j["root_lpr"] = sol.root_bound;
        j["best_bound"] = sol.best_bound;
        j["big_m"] = model.metadata.big_m;
        hit_limit = sol.status == milp::MilpStatus::limit;
        if (sol.has_incumbent()) {
            j["objective"] = sol.objective;
            const milp::DecodedSolution dec = milp::decode_solution(model, sol, inst);
            sched = dec.schedule;
        }
    }
    if (sched) {
        const nlohmann::json sj = schedule_json(*sched);
        for (const auto &[k, v] : sj.items()) j[k] = v;
    }
    if (a.json) {
        out << j.dump(2) << "\n";
    } else {
        out << "method: " << a.method << "\nstatus: " << j["status"].get<std::string>() << "\n";
        if (sched) print_schedule(out, *sched);
        out << "nodes: " << j["nodes"] << "  seconds: " << j["seconds"] << "\n";
    }
    return hit_limit ? limit : ok;
}

inline int run_eval(const std::string &instance, const std::string &order_text, const std::string &scope_text,
                    bool show_timeline, bool json, std::ostream &out) {
    const CellInstance inst = read_instance_arg(instance);
    const CycleOrder order = CycleOrder::parse(order_text, inst.machines());
    const Schedule s = evaluate_cycle(inst, order, parse_scope(scope_text));
    if (json) {
        nlohmann::json j = schedule_json(s);
        j["v"] = 1;
        if (show_timeline) j["timeline"] = timeline_json(inst, s);
        out << j.dump(2) << "\n";
    } else if (show_timeline) {
        out << timeline_json(inst, s).dump(2) << "\n";
    } else {
        print_schedule(out, s);
    }
    return ok;
}

struct BenchArgs {
    std::string m = "4";
    std::string p = "0..250/25";
    std::string methods = "enum,mtz,vajda,flow";
    std::string out = "csv";
    std::string output_path;
    std::string plot_path;
    std::string scope = "all";
    std::optional<double> timeout = 120.0;
    unsigned workers = 1;
    bool check = false;
    bool long_runs = false;
    bool force = false;
    bool quiet = false;
};

inline int run_bench(const BenchArgs &a, std::ostream &out, std::ostream &err) {
    bench::BenchConfig cfg;
    cfg.machines = parse_int_list(a.m);
    cfg.procs = parse_int_list(a.p);
    cfg.methods.clear();
    {
        std::stringstream ss(a.methods);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                cfg.methods.push_back(bench::parse_method(tok));
            } catch (const std::invalid_argument &e) {
                throw UsageError(e.what());
            }
        }
    }
    cfg.milp_time_limit = a.timeout;
    cfg.workers = a.workers;
    cfg.long_runs = a.long_runs;
    cfg.force = a.force;
    cfg.scope = parse_scope(a.scope);
    if (a.out != "csv" && a.out != "md") throw UsageError("--out must be csv or md");
    try {
        cfg.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }

    const bench::BenchReport report = bench::run_benchmark(cfg, a.quiet ? nullptr : &err);
    std::ofstream file;
    std::ostream *sink = &out;
    if (!a.output_path.empty()) {
        file.open(a.output_path);
        if (!file) throw UsageError("cannot open output file '" + a.output_path + "'");
        sink = &file;
    }
    if (a.out == "csv")
        bench::write_csv(report, *sink);
    else
        bench::write_markdown(report, *sink);
    if (!a.plot_path.empty()) {
        std::ofstream plot(a.plot_path);
        if (!plot) throw UsageError("cannot open plot file '" + a.plot_path + "'");
        plot << bench::emit_plot_data(report).dump(2) << "\n";
    }
    if (a.check && report.any_mismatch()) return check_mismatch;
    if (report.any_limit()) return limit;
    return ok;
}

/// Entry point shared by the executable and the tests.
inline int cli_main(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Cyclic scheduling toolkit for a linear robotic cell", "rcell"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto *s = app.add_subcommand("solve", "Find a minimum cycle time");
    s->add_option("instance", solve.instance, "Instance JSON file ('-' for stdin)")->required();
    s->add_option("--method", solve.method, "enum | mtz | vajda | flow")->check(CLI::IsMember({"enum", "mtz", "vajda", "flow"}));
    s->add_option("--variant", solve.variant, "base | waits (MILP methods)");
    s->add_option("--objective", solve.objective, "cycle | travel-wait (waits variant only)");
    s->add_option("--scope", solve.scope, "Separation scope: all | skip-first");
    s->add_option("--timeout", solve.timeout, "Time limit in seconds");
    s->add_option("--node-limit", solve.node_limit, "Node limit");
    s->add_option("--threads", solve.threads, "Worker threads for enumeration");
    s->add_flag("--deterministic", solve.deterministic, "Enumeration: return the lexicographically least optimum");
    s->add_flag("--json", solve.json, "Print the result as JSON");
    s->add_flag("--no-warm-start", solve.no_warm_start, "MILP: do not seed with the canonical order");
    s->add_option("--log", solve.log_path, "MILP: write the node log to this file");

    std::string eval_instance, eval_order, eval_scope = "all";
    bool eval_timeline = false, eval_json = false;
    auto *e = app.add_subcommand("eval", "Evaluate one activity order");
    e->add_option("instance", eval_instance, "Instance JSON file ('-' for stdin)")->required();
    e->add_option("order", eval_order, "Activities after L1, e.g. \"L2 L3 L4 U1 U2 U3 U4\"")->required();
    e->add_option("--scope", eval_scope, "Separation scope: all | skip-first");
    e->add_flag("--timeline", eval_timeline, "Emit robot movement segments as JSON");
    e->add_flag("--json", eval_json, "Print the schedule as JSON");

    std::string lp_instance, lp_form = "mtz", lp_variant = "base", lp_objective = "cycle", lp_scope = "all", lp_out;
    auto *x = app.add_subcommand("export-lp", "Write a model in LP text format");
    x->add_option("instance", lp_instance, "Instance JSON file ('-' for stdin)")->required();
    x->add_option("--formulation", lp_form, "mtz | vajda | flow");
    x->add_option("--variant", lp_variant, "base | waits");
    x->add_option("--objective", lp_objective, "cycle | travel-wait");
    x->add_option("--scope", lp_scope, "Separation scope: all | skip-first");
    x->add_option("-o,--output", lp_out, "Output file (default stdout)");

    BenchArgs ba;
    auto *b = app.add_subcommand("bench", "Sweep instances and compare methods against reference values");
    b->add_option("--m", ba.m, "Machine counts, e.g. 4,5 or 4..6");
    b->add_option("--p", ba.p, "Processing times, e.g. 0..250/25");
    b->add_option("--methods", ba.methods, "Comma list of enum, mtz, vajda, flow");
    b->add_option("--out", ba.out, "csv | md");
    b->add_option("-o,--output", ba.output_path, "Write the report to a file");
    b->add_option("--plot", ba.plot_path, "Write seconds-versus-p series as JSON");
    b->add_option("--scope", ba.scope, "Separation scope: all | skip-first");
    b->add_option("--timeout", ba.timeout, "Per-cell MILP time limit in seconds");
    b->add_option("--workers", ba.workers, "Cells solved in parallel");
    b->add_flag("--check", ba.check, "Exit 3 if any cell differs from the reference table");
    b->add_flag("--long", ba.long_runs, "Allow enumeration above 6 machines");
    b->add_flag("--force", ba.force, "Allow machine counts above 6");
    b->add_flag("--quiet", ba.quiet, "No per-cell progress on stderr");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &ex) {
        if (ex.get_exit_code() == 0) return app.exit(ex, out, err);
        err << "error: " << ex.what() << "\n";
        return input_error;
    }

    try {
        if (*s) return run_solve(solve, out);
        if (*e) return run_eval(eval_instance, eval_order, eval_scope, eval_timeline, eval_json, out);
        if (*x) {
            const CellInstance inst = read_instance_arg(lp_instance);
            const milp::MilpModel model = milp::build_model(inst, parse_kind(lp_form, lp_variant, lp_objective), parse_scope(lp_scope));
            if (lp_out.empty()) {
                milp::write_lp(model, out);
            } else {
                std::ofstream f(lp_out);
                if (!f) throw UsageError("cannot open output file '" + lp_out + "'");
                milp::write_lp(model, f);
                if (!f) throw std::runtime_error("write to '" + lp_out + "' failed");
            }
            return ok;
        }
        if (*b) return run_bench(ba, out, err);
    } catch (const UsageError &ex) {
        err << "error: " << ex.what() << "\n";
        return input_error;
    } catch (const InstanceFormatError &ex) {
        err << "error: " << ex.what() << "\n";
        return input_error;
    } catch (const InvalidOrder &ex) {
        err << "error: " << ex.what() << "\n";
        return input_error;
    } catch (const InvalidInstance &ex) {
        err << "error: " << ex.what() << "\n";
        return input_error;
    }
    return input_error;
}

inline int cli_main(int argc, char **argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_main(std::move(args), out, err);
}

} // namespace rcell::cli

#endif // RCELL_CLI_HPP
