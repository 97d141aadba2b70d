#include "rcell/bench.hpp"
#include "rcell/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rcell;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::cli_main(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("rcell_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &text) {
        const auto path = dir_ / name;
        std::ofstream(path) << text;
        return path.string();
    }
    std::string path(const std::string &name) const { return (dir_ / name).string(); }
    static std::string slurp(const std::string &p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

TEST(ExpectedTable, ChecksumPinned) {
    EXPECT_EQ(bench::expected_table_checksum(), bench::expected_table_pin);
    EXPECT_EQ(bench::expected_rows.size(), 33u);
    ASSERT_NE(bench::find_expected(5, 100), nullptr);
    EXPECT_EQ(bench::find_expected(5, 100)->big_m, 192);
    EXPECT_EQ(bench::find_expected(7, 0), nullptr);
}

TEST(ExpectedTable, BigMColumnMatchesClosedForm) {
    for (const auto &r : bench::expected_rows)
        EXPECT_EQ(big_m(CellInstance(r.m, Duration(1), Duration(2), Duration(r.p))), Duration(r.big_m)) << r.m << "/" << r.p;
}

TEST(BenchConfig, Validation) {
    bench::BenchConfig cfg;
    cfg.machines = {7};
    cfg.procs = {0};
    cfg.methods = {bench::Method::flow};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg.force = true;
    EXPECT_NO_THROW(cfg.validate());
    cfg.procs.clear();
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    EXPECT_THROW((void)bench::parse_method("cplex"), std::invalid_argument);
}

TEST(Bench, CsvColumnsAndVerdicts) {
    bench::BenchConfig cfg;
    cfg.machines = {4};
    cfg.procs = {0, 75};
    cfg.methods = {bench::Method::enumeration, bench::Method::flow};
    const auto report = bench::run_benchmark(cfg);
    ASSERT_EQ(report.rows.size(), 2u);
    std::ostringstream csv;
    bench::write_csv(report, csv);
    std::istringstream in(csv.str());
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "m,p,c_opt,big_m,mtz_lpr,mtz_obj,mtz_s,vajda_lpr,vajda_obj,vajda_s,flow_lpr,flow_obj,flow_s,enum_c,"
                      "enum_s,verdict");
    int rows = 0;
    while (std::getline(in, line)) {
        const auto f = split_line(line);
        ASSERT_EQ(f.size(), 16u) << line;
        EXPECT_EQ(f[0], "4");
        EXPECT_EQ(f[3], f[1] == "0" ? "108" : "141");
        EXPECT_EQ(f[4], "");  // mtz not run
        ++rows;
    }
    EXPECT_EQ(rows, 2);
    EXPECT_EQ(report.rows[0].verdict, "MATCH");
    EXPECT_EQ(report.rows[0].c_opt, Duration(96));
    // the faithful separation rule gives a longer optimum than the reference at p=75
    EXPECT_EQ(report.rows[1].c_opt, Duration(105));
    EXPECT_TRUE(report.rows[1].verdict.starts_with("MISMATCH")) << report.rows[1].verdict;
    EXPECT_TRUE(report.any_mismatch());
}

TEST(Bench, MarkdownAndPlot) {
    bench::BenchConfig cfg;
    cfg.machines = {4};
    cfg.procs = {0, 25};
    cfg.methods = {bench::Method::enumeration, bench::Method::flow};
    const auto report = bench::run_benchmark(cfg);
    std::ostringstream md;
    bench::write_markdown(report, md);
    EXPECT_NE(md.str().find("| m | p |"), std::string::npos) << md.str();

    const auto plot = bench::emit_plot_data(report);
    EXPECT_EQ(plot["v"], 1);
    EXPECT_EQ(plot["x"], "p");
    EXPECT_EQ(plot["y"], "seconds");
    ASSERT_EQ(plot["series"].size(), 2u);
    for (const auto &s : plot["series"]) {
        EXPECT_EQ(s["m"], 4);
        ASSERT_EQ(s["points"].size(), 2u);
        EXPECT_EQ(s["points"][0][0], 0);
        EXPECT_EQ(s["points"][1][0], 25);
    }
    EXPECT_THROW((void)bench::emit_plot_data(bench::BenchReport{}), std::invalid_argument);
}

TEST(Bench, NoReferenceOutsideTable) {
    bench::BenchConfig cfg;
    cfg.machines = {3};
    cfg.procs = {10};
    cfg.methods = {bench::Method::enumeration};
    const auto report = bench::run_benchmark(cfg);
    EXPECT_EQ(report.rows[0].verdict, "NO-REFERENCE");
    EXPECT_FALSE(report.any_mismatch());
}

TEST_F(CliTest, EvalCanonicalOrder) {
    const auto inst = write("m4p0.json", R"({"m": 4, "epsilon": 1, "delta": 2, "p": 0})");
    auto r = run_cli({"eval", inst, "L2 L3 L4 U1 U2 U3 U4", "--json"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["C"], 96);  // sum of the eight legs; no waiting at p=0
    EXPECT_EQ(j["total_wait"], 0);
    EXPECT_EQ(j["order"], "L2 L3 L4 U1 U2 U3 U4");

    r = run_cli({"eval", inst, "L2 L3 L4 U1 U2 U3 U4"});
    EXPECT_NE(r.out.find("C: 96"), std::string::npos);

    r = run_cli({"eval", inst, "L2 L3 L4 U1 U2 U3 U4", "--timeline"});
    ASSERT_EQ(r.code, 0);
    const auto tl = nlohmann::json::parse(r.out);
    ASSERT_TRUE(tl.is_array());
    EXPECT_EQ(tl.back()["end"], 96);
}

TEST_F(CliTest, SolveEnumAndMilp) {
    const auto inst = write("m3.json", R"({"m": 3, "epsilon": 1, "delta": 2, "p": 50})");
    const auto e = run_cli({"solve", inst, "--method", "enum", "--json", "--deterministic"});
    ASSERT_EQ(e.code, 0) << e.err;
    const auto je = nlohmann::json::parse(e.out);
    EXPECT_EQ(je["status"], "optimal");
    const auto log = path("bnb.log");
    for (const char *method : {"mtz", "vajda", "flow"}) {
        const auto r = run_cli({"solve", inst, "--method", method, "--json", "--log", log});
        ASSERT_EQ(r.code, 0) << method << ": " << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j["C"], je["C"]) << method;
        EXPECT_LE(j["root_lpr"].get<double>(), j["objective"].get<double>() + 1e-9);
    }
    EXPECT_FALSE(slurp(log).empty());
}

TEST_F(CliTest, SolveHitsLimitWithExitOne) {
    const auto inst = write("m6.json", R"({"m": 6, "epsilon": 1, "delta": 2, "p": 100})");
    const auto r = run_cli({"solve", inst, "--method", "vajda", "--node-limit", "1", "--json"});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["status"], "limit");
}

TEST_F(CliTest, ExportLpRoundTrips) {
    const auto inst = write("m2.json", R"({"m": 2, "epsilon": 1, "delta": 2, "p": 5})");
    const auto out = path("m2.lp");
    const auto r = run_cli({"export-lp", inst, "--formulation", "vajda", "--variant", "waits", "-o", out});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto model = milp::read_lp_string(slurp(out));
    EXPECT_EQ(model.metadata.kind.formulation, milp::Formulation::vajda);
    EXPECT_EQ(model.metadata.kind.variant, milp::Variant::waits);
}

TEST_F(CliTest, BenchCheckExitCodes) {
    const auto csv = path("b.csv");
    const auto plot = path("b.json");
    auto r = run_cli({"bench", "--m", "4", "--p", "0,25", "--methods", "enum,flow", "--check", "--quiet", "-o", csv, "--plot", plot});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(slurp(csv).find("MATCH"), std::string::npos);
    EXPECT_EQ(nlohmann::json::parse(slurp(plot))["v"], 1);

    r = run_cli({"bench", "--m", "4", "--p", "75", "--methods", "enum", "--check", "--quiet"});
    EXPECT_EQ(r.code, 3);
    r = run_cli({"bench", "--m", "4", "--p", "75", "--methods", "enum", "--check", "--quiet", "--scope", "skip-first"});
    EXPECT_EQ(r.code, 0) << r.out;
}

TEST_F(CliTest, InputErrorsExitTwo) {
    const auto bad = write("bad.json", R"({"m": 4, "epsilon": 1, "delta": 2, "p": 0, "q": 1})");
    const auto good = write("good.json", R"({"m": 2, "epsilon": 1, "delta": 2, "p": 0})");
    EXPECT_EQ(run_cli({"solve", bad}).code, 2);
    EXPECT_EQ(run_cli({"solve", path("missing.json")}).code, 2);
    EXPECT_EQ(run_cli({"eval", good, "L2 U1"}).code, 2);
    EXPECT_EQ(run_cli({"solve", good, "--method", "cplex"}).code, 2);
    EXPECT_EQ(run_cli({"solve", good, "--method", "flow", "--variant", "waits"}).code, 2);
    EXPECT_EQ(run_cli({"bench", "--m", "7", "--methods", "flow"}).code, 2);
    EXPECT_EQ(run_cli({"bench", "--p", "9..1"}).code, 2);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
    const auto r = run_cli({"eval", bad, "L2 L3 L4 U1 U2 U3 U4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("unknown key 'q'"), std::string::npos) << r.err;
}

TEST_F(CliTest, HelpExitsZero) {
    const auto r = run_cli({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("bench"), std::string::npos);
}

TEST(IntList, Forms) {
    EXPECT_EQ(cli::parse_int_list("0..250/25").size(), 11u);
    EXPECT_EQ(cli::parse_int_list("4,5"), (std::vector<int>{4, 5}));
    EXPECT_EQ(cli::parse_int_list("4..6"), (std::vector<int>{4, 5, 6}));
    EXPECT_THROW((void)cli::parse_int_list("a"), cli::UsageError);
    EXPECT_THROW((void)cli::parse_int_list("1..5/0"), cli::UsageError);
}
