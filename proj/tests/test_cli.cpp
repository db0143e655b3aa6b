#include "fgps/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fgps;
using namespace fgps::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("fgps_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double field(const std::string& summary, const std::string& key)
{
    const auto pos = summary.find(key + "=");
    EXPECT_NE(pos, std::string::npos) << key;
    return std::stod(summary.substr(pos + key.size() + 1));
}

} // namespace

TEST(Config, DefaultsAreValid)
{
    EXPECT_TRUE(config_errors(RunConfig{}).empty());
}

TEST(Config, FileAndOverrides)
{
    RunConfig c;
    std::istringstream in("# experiment\nproblem = 4\nn1=6\n n2 = 8 \nng=40\nlambda=0.5\nL=12\n"
                          "alpha=0.9\nbeta=0.95\neval_grid=25\nout=res.csv\n\n");
    apply_config_stream(c, in);
    apply_setting(c, "n1", "10");
    EXPECT_EQ(c.problem_id, 4);
    EXPECT_EQ(c.n1, 10);
    EXPECT_EQ(c.n2, 8);
    EXPECT_EQ(c.n_g, 40);
    EXPECT_EQ(c.lambda, 0.5);
    EXPECT_EQ(c.memory_len, 12.0);
    EXPECT_EQ(c.alpha, 0.9);
    EXPECT_EQ(c.beta, 0.95);
    EXPECT_EQ(c.eval_grid, 25);
    EXPECT_EQ(c.output_path, "res.csv");
    EXPECT_TRUE(config_errors(c).empty());
}

TEST(Config, MalformedInputs)
{
    RunConfig c;
    EXPECT_THROW(apply_setting(c, "colour", "red"), Error);
    EXPECT_THROW(apply_setting(c, "n1", "four"), Error);
    std::istringstream in("problem 1\n");
    EXPECT_THROW(apply_config_stream(c, in), Error);
}

TEST(Config, EveryInvalidFieldNamed)
{
    RunConfig c;
    c.problem_id = 9;
    c.n1 = 5;
    c.n2 = 2;
    c.n_g = 0;
    c.lambda = -0.5;
    c.memory_len = 0.0;
    c.eval_grid = 1;
    c.alpha = 1.5;
    c.beta = 0.0;
    const auto errs = config_errors(c);
    EXPECT_EQ(errs.size(), 9u);
    for (const char* name : {"problem", "n1", "n2", "ng", "lambda", "L", "eval_grid", "alpha", "beta"}) {
        bool found = false;
        for (const auto& e : errs)
            found = found || e.rfind(name, 0) == 0;
        EXPECT_TRUE(found) << name;
    }
    std::ostringstream out, err;
    EXPECT_NE(cmd_solve(c, out, err), 0);
    EXPECT_NE(err.str().find("n1"), std::string::npos);
}

TEST(Config, FixedOrdersForBuiltInProblems)
{
    RunConfig c;
    c.problem_id = 2;
    c.alpha = 0.5;
    EXPECT_EQ(config_errors(c).size(), 1u);
    c.alpha = 1.0 / 3.0;
    EXPECT_TRUE(config_errors(c).empty());
    c.problem_id = 4;
    c.alpha = 1.0;
    c.beta = 1.0;
    EXPECT_TRUE(config_errors(c).empty());
}

TEST(Solve, ProblemOneDefaults)
{
    const auto dir = scratch_dir("solve");
    RunConfig c;
    c.output_path = (dir / "p1.csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_solve(c, out, err), 0) << err.str();
    const std::string s = out.str();
    EXPECT_LE(field(s, "max_err"), 1e-10);
    EXPECT_NEAR(field(s, "kappa"), 12.615, 0.01 * 12.615);
    EXPECT_GE(field(s, "elapsed_ms"), 0.0);

    const std::string body = slurp(c.output_path);
    EXPECT_EQ(body.substr(0, body.find('\n')), "x,t,u_exact,u_approx,abs_err");
    EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1 + 100 * 100);
    fs::remove_all(dir);
}

TEST(Solve, DeterministicOutput)
{
    const auto dir = scratch_dir("determinism");
    RunConfig c;
    c.problem_id = 3;
    c.eval_grid = 30;
    std::ostringstream out, err;
    c.output_path = (dir / "a.csv").string();
    ASSERT_EQ(cmd_solve(c, out, err), 0);
    c.output_path = (dir / "b.csv").string();
    ASSERT_EQ(cmd_solve(c, out, err), 0);
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
    fs::remove_all(dir);
}

TEST(Solve, SmallQuadrature)
{
    const auto dir = scratch_dir("ng40");
    RunConfig c;
    c.n_g = 40;
    c.output_path = (dir / "p.csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_solve(c, out, err), 0);
    EXPECT_TRUE(std::isfinite(field(out.str(), "max_err")));
    fs::remove_all(dir);
}

TEST(Solve, MissingOutputDirectory)
{
    const auto dir = scratch_dir("missing");
    RunConfig c;
    c.output_path = (dir / "nope" / "p.csv").string();
    std::ostringstream out, err;
    EXPECT_NE(cmd_solve(c, out, err), 0);
    EXPECT_FALSE(fs::exists(c.output_path));
    EXPECT_FALSE(err.str().empty());
    fs::remove_all(dir);
}

TEST(Solve, ProblemFourFractionalLeavesExactBlank)
{
    const auto dir = scratch_dir("p4");
    RunConfig c;
    c.problem_id = 4;
    c.alpha = 0.9;
    c.beta = 0.9;
    c.eval_grid = 5;
    c.output_path = (dir / "p4.csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_solve(c, out, err), 0);
    EXPECT_NE(out.str().find("max_err=n/a"), std::string::npos);
    std::ifstream in(c.output_path);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    const auto parts = csv::split(line);
    ASSERT_EQ(parts.size(), 5u);
    EXPECT_TRUE(parts[2].empty());
    EXPECT_FALSE(parts[3].empty());
    fs::remove_all(dir);
}

TEST(Solve, WarnsOnShortMemory)
{
    const auto dir = scratch_dir("warn");
    RunConfig c;
    c.problem_id = 4;
    c.alpha = 0.5;
    c.beta = 0.9;
    c.memory_len = 0.3;
    c.eval_grid = 5;
    c.n_g = 100;
    c.output_path = (dir / "p.csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_solve(c, out, err), 0) << err.str();
    EXPECT_NE(err.str().find("warning"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Cache, SecondRunLoadsIdenticalMatrices)
{
    const auto dir = scratch_dir("cache");
    RunConfig c;
    c.n_g = 200;
    c.eval_grid = 10;
    c.cache_dir = (dir / "cache").string();
    c.output_path = (dir / "a.csv").string();
    const auto first = run(c, [](const std::string&) {});
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(*c.cache_dir))
        ++files;
    EXPECT_EQ(files, 2u); // one rule, one matrix (both axes share T, N and order)
    const auto second = run(c, [](const std::string&) {});
    EXPECT_EQ(first.result.system.a_matrix, second.result.system.a_matrix);
    EXPECT_EQ(first.result.system.f_vector, second.result.system.f_vector);
    fs::remove_all(dir);
}

TEST(Fdm, WritesLoadableCache)
{
    const auto dir = scratch_dir("fdm");
    FdmRequest r;
    r.n_g = 300;
    r.out = (dir / "d.csv").string();
    std::ostringstream out, err;
    ASSERT_EQ(cmd_fdm(r, out, err), 0) << err.str();
    std::ifstream in(r.out);
    const auto loaded = csv::read_fdm(in);
    EXPECT_EQ(loaded.matrix.storage_size(), 7u);
    const auto fresh = build_fdm(PeriodicGrid(r.period, 4), make_quadrature_rule(300, 0.0), 0.5, 30.0);
    for (std::size_t i = 0; i < 7; ++i)
        EXPECT_EQ(loaded.matrix.diagonals()[i], fresh.diagonals()[i]);

    // A solve configured with the same parameters picks the file up.
    RunConfig c;
    c.n_g = 300;
    c.cache_dir = (dir / "cache").string();
    fs::create_directories(*c.cache_dir);
    const auto key_name = [&] {
        run(c, [](const std::string&) {});
        for (const auto& e : fs::directory_iterator(*c.cache_dir))
            if (e.path().filename().string().rfind("fdm", 0) == 0)
                return e.path();
        return fs::path();
    }();
    ASSERT_FALSE(key_name.empty());
    std::ifstream cached(key_name);
    const auto from_solve = csv::read_fdm(cached);
    for (std::size_t i = 0; i < 7; ++i)
        EXPECT_EQ(from_solve.matrix.diagonals()[i], loaded.matrix.diagonals()[i]);
    fs::remove_all(dir);
}

TEST(Fdm, RejectsBadParameters)
{
    FdmRequest r;
    r.gamma = 1.0;
    r.out = (fs::temp_directory_path() / "fgps_bad_fdm.csv").string();
    std::ostringstream out, err;
    EXPECT_NE(cmd_fdm(r, out, err), 0);
    EXPECT_FALSE(fs::exists(r.out));
}

TEST(Convergence, GridSweepShowsTradeOff)
{
    RunConfig c;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_convergence(c, "n1n2", {"4", "20"}, out, err), 0) << err.str();
    std::istringstream lines(out.str());
    std::string header, r4, r20;
    std::getline(lines, header);
    std::getline(lines, r4);
    std::getline(lines, r20);
    EXPECT_EQ(header, "param,value,max_err,rms_err,kappa,elapsed_ms");
    const double e4 = csv::parse_double(csv::split(r4)[2]);
    const double e20 = csv::parse_double(csv::split(r20)[2]);
    EXPECT_GT(e20, e4);
}

TEST(Convergence, ProblemFourOrderSweep)
{
    RunConfig c;
    c.problem_id = 4;
    std::ostringstream out, err;
    ASSERT_EQ(cmd_convergence(c, "alpha-beta", {"0.8", "0.9", "0.99"}, out, err), 0) << err.str();
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    std::vector<double> dev;
    while (std::getline(lines, line))
        dev.push_back(csv::parse_double(csv::split(line)[2]));
    ASSERT_EQ(dev.size(), 3u);
    EXPECT_GT(dev[0], dev[1]);
    EXPECT_GT(dev[1], dev[2]);
}

TEST(Convergence, RejectsBadSweeps)
{
    RunConfig c;
    std::ostringstream out, err;
    EXPECT_NE(cmd_convergence(c, "n1n2", {}, out, err), 0);
    EXPECT_NE(cmd_convergence(c, "n1n2", {"4", "5"}, out, err), 0);
    EXPECT_NE(cmd_convergence(c, "size", {"4"}, out, err), 0);
    EXPECT_NE(cmd_convergence(c, "alpha-beta", {"0.9"}, out, err), 0); // problem 1 orders are fixed
    EXPECT_TRUE(out.str().empty()); // rejected before any row is written
}

TEST(OracleCheck, DefaultsPass)
{
    RunConfig c;
    const auto report = oracle_check(c, [](const std::string&) {});
    EXPECT_TRUE(report.passed);
    EXPECT_LE(report.max_discrepancy, kOracleCheckThreshold);
    bool saw_constant = false, saw_limit = false;
    for (const auto& l : report.lines) {
        if (l.function == "constant") {
            saw_constant = true;
            EXPECT_LE(l.discrepancy, 1e-10);
        }
        if (l.gamma == 0.999) {
            saw_limit = true;
            EXPECT_TRUE(l.informational);
        }
    }
    EXPECT_TRUE(saw_constant);
    EXPECT_TRUE(saw_limit);
    std::ostringstream out, err;
    EXPECT_EQ(cmd_oracle_check(c, out, err), 0);
    EXPECT_NE(out.str().find("result=PASS"), std::string::npos);
}
