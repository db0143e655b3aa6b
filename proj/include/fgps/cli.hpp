#pragma once

// Command implementations behind the `fgps` executable. Each command takes a
// validated RunConfig plus output streams and returns a process exit code.

#include "fgps/csv_io.hpp"
#include "fgps/error.hpp"
#include "fgps/frac_diff.hpp"
#include "fgps/gegenbauer.hpp"
#include "fgps/problems.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fgps::cli {

struct RunConfig {
    int problem_id = 1;
    int n1 = 4;
    int n2 = 4;
    int n_g = 1000;
    double lambda = 0.0;
    double memory_len = 30.0;
    std::optional<double> alpha; // problems 1-3 fix their orders
    std::optional<double> beta;
    int eval_grid = 100;
    std::string output_path = "results.csv";
    std::optional<std::string> cache_dir;
};

namespace detail {

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double fixed_alpha(int id) { return id == 1 ? 0.5 : id == 2 ? 1.0 / 3.0 : 0.7; }
inline double fixed_beta(int id) { return id == 1 ? 0.5 : id == 2 ? 2.0 / 3.0 : 0.8; }

} // namespace detail

inline constexpr double kDefaultProblem4Order = 0.8;

/// Sets one key of the flat key=value configuration.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
{
    using csv::parse_double;
    using csv::parse_int;
    try {
        if (key == "problem")
            c.problem_id = parse_int(value);
        else if (key == "n1")
            c.n1 = parse_int(value);
        else if (key == "n2")
            c.n2 = parse_int(value);
        else if (key == "ng" || key == "n_g")
            c.n_g = parse_int(value);
        else if (key == "lambda")
            c.lambda = parse_double(value);
        else if (key == "L" || key == "memory_len")
            c.memory_len = parse_double(value);
        else if (key == "alpha")
            c.alpha = parse_double(value);
        else if (key == "beta")
            c.beta = parse_double(value);
        else if (key == "eval_grid" || key == "eval-grid")
            c.eval_grid = parse_int(value);
        else if (key == "out")
            c.output_path = value;
        else if (key == "cache_dir" || key == "cache-dir")
            c.cache_dir = value;
        else
            fgps::detail::fail(ErrorKind::InvalidParameter, "unknown configuration key '" + key + "'");
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Format)
            fgps::detail::fail(ErrorKind::InvalidParameter, key + ": " + e.what());
        throw;
    }
}

inline void apply_config_stream(RunConfig& c, std::istream& in)
{
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        const std::string body = detail::trim(std::string_view(line).substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fgps::detail::fail(ErrorKind::InvalidParameter,
                               "config line " + std::to_string(line_no) + ": expected key=value");
        apply_setting(c, detail::trim(std::string_view(body).substr(0, eq)),
                      detail::trim(std::string_view(body).substr(eq + 1)));
    }
}

inline void apply_config_file(RunConfig& c, const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fgps::detail::fail(ErrorKind::Io, "cannot open config file " + path);
    apply_config_stream(c, in);
}

/// Every violated constraint, one diagnostic per field.
inline std::vector<std::string> config_errors(const RunConfig& c)
{
    std::vector<std::string> errs;
    if (c.problem_id < 1 || c.problem_id > 4)
        errs.push_back("problem: must be 1, 2, 3 or 4");
    if (c.n1 < 4 || c.n1 % 2 != 0)
        errs.push_back("n1: must be an even integer >= 4");
    if (c.n2 < 4 || c.n2 % 2 != 0)
        errs.push_back("n2: must be an even integer >= 4");
    if (c.n_g < 1)
        errs.push_back("ng: must be >= 1");
    if (!(std::isfinite(c.lambda) && c.lambda > kMinGegenbauerIndex))
        errs.push_back("lambda: must exceed -1/2");
    if (!(std::isfinite(c.memory_len) && c.memory_len > 0.0))
        errs.push_back("L: must be positive");
    if (c.eval_grid < 2)
        errs.push_back("eval_grid: must be >= 2");
    const auto check_order = [&](const std::optional<double>& v, const char* name, double fixed) {
        if (!v)
            return;
        if (!(*v > 0.0 && *v <= 1.0)) {
            errs.push_back(std::string(name) + ": must lie in (0,1]");
        } else if (c.problem_id >= 1 && c.problem_id <= 3 && std::abs(*v - fixed) > 1e-12) {
            errs.push_back(std::string(name) + ": fixed at " + csv::format_double(fixed) + " for problem "
                           + std::to_string(c.problem_id));
        }
    };
    const bool fixed = c.problem_id >= 1 && c.problem_id <= 3;
    check_order(c.alpha, "alpha", fixed ? detail::fixed_alpha(c.problem_id) : 0.0);
    check_order(c.beta, "beta", fixed ? detail::fixed_beta(c.problem_id) : 0.0);
    return errs;
}

inline void validate_config(const RunConfig& c)
{
    const auto errs = config_errors(c);
    if (errs.empty())
        return;
    std::string msg = "invalid configuration";
    for (const auto& e : errs)
        msg += "\n  " + e;
    fgps::detail::fail(ErrorKind::InvalidParameter, msg);
}

inline ProblemSpec problem_for(const RunConfig& c)
{
    return catalog(c.problem_id, c.alpha.value_or(kDefaultProblem4Order),
                   c.beta.value_or(kDefaultProblem4Order), c.memory_len);
}

/// Reference surface for error metrics: the exact solution when known,
/// otherwise (problem 4 at fractional orders) the integer-order limit u^{1,1}.
inline Field reference_for(const ProblemSpec& spec, int problem_id)
{
    if (spec.exact)
        return spec.exact->u;
    if (problem_id == 4)
        return problem4_unit_order_solution;
    return {};
}

namespace detail {

inline std::string cache_name(const std::string& prefix, std::initializer_list<std::pair<const char*, std::string>> parts)
{
    std::string name = prefix;
    for (const auto& [k, v] : parts)
        name += std::string("_") + k + v;
    return name + ".csv";
}

inline QuadratureRule cached_rule(const RunConfig& c)
{
    if (!c.cache_dir)
        return make_quadrature_rule(c.n_g, c.lambda);
    namespace fs = std::filesystem;
    fs::create_directories(*c.cache_dir);
    const fs::path path = fs::path(*c.cache_dir)
                          / cache_name("rule", {{"lambda", csv::format_double(c.lambda)},
                                                {"ng", std::to_string(c.n_g)}});
    if (std::ifstream in(path); in) {
        try {
            auto rule = csv::read_rule(in);
            if (rule.lambda == c.lambda && rule.n_g == c.n_g)
                return rule;
        } catch (const Error&) {
            // fall through and rebuild
        }
    }
    auto rule = make_quadrature_rule(c.n_g, c.lambda);
    csv::write_file_atomically(path, [&](std::ostream& out) { csv::write_rule(out, rule); });
    return rule;
}

struct TimedFdm {
    FracDiffMatrix matrix;
    double build_ms = 0.0;
};

inline TimedFdm cached_fdm(const RunConfig& c, const QuadratureRule& rule, const PeriodicGrid& grid,
                           double gamma, const WarningSink& warn)
{
    namespace fs = std::filesystem;
    const csv::FdmCacheKey key{gamma, c.memory_len, grid.size(), grid.period(), c.lambda, c.n_g};
    fs::path path;
    if (c.cache_dir) {
        fs::create_directories(*c.cache_dir);
        path = fs::path(*c.cache_dir)
               / cache_name("fdm", {{"N", std::to_string(key.n)},
                                    {"T", csv::format_double(key.period)},
                                    {"gamma", csv::format_double(key.gamma)},
                                    {"L", csv::format_double(key.memory_len)},
                                    {"lambda", csv::format_double(key.lambda)},
                                    {"ng", std::to_string(key.n_g)}});
        if (std::ifstream in(path); in) {
            try {
                auto loaded = csv::read_fdm(in);
                if (loaded.key == key)
                    return TimedFdm{std::move(loaded.matrix), 0.0};
            } catch (const Error&) {
                // fall through and rebuild
            }
        }
    }
    const auto start = std::chrono::steady_clock::now();
    auto m = build_fdm(grid, rule, gamma, c.memory_len, warn);
    const auto stop = std::chrono::steady_clock::now();
    if (c.cache_dir)
        csv::write_file_atomically(path, [&](std::ostream& out) { csv::write_fdm(out, m, c.lambda, c.n_g); });
    return TimedFdm{std::move(m), std::chrono::duration<double, std::milli>(stop - start).count()};
}

} // namespace detail

struct RunOutcome {
    ProblemSpec spec;
    SolveResult result;
    std::optional<ErrorReport> report; // against reference_for(spec)
};

/// Full pipeline for a validated config, reusing cached rules and matrices
/// when a cache directory is configured.
inline RunOutcome run(const RunConfig& c, const WarningSink& warn)
{
    validate_config(c);
    ProblemSpec spec = problem_for(c);
    const QuadratureRule rule = detail::cached_rule(c);
    const PeriodicGrid gx(spec.period_x, c.n1);
    const PeriodicGrid gt(spec.period_t, c.n2);
    auto da = detail::cached_fdm(c, rule, gx, effective_order(spec.alpha), warn);
    auto db = detail::cached_fdm(c, rule, gt, effective_order(spec.beta), warn);
    SolveResult result = solve_with_operators(spec, da.matrix, db.matrix);
    result.elapsed_ms += da.build_ms + db.build_ms;

    std::optional<ErrorReport> report;
    if (const Field ref = reference_for(spec, c.problem_id)) {
        report = error_against(result.solution.grid_values, ref, c.eval_grid);
        report->kappa = result.kappa;
        report->elapsed_ms = result.elapsed_ms;
    }
    return RunOutcome{std::move(spec), std::move(result), report};
}

/// Writes each distinct warning once.
inline WarningSink stream_warnings(std::ostream& err)
{
    auto seen = std::make_shared<std::set<std::string>>();
    return [&err, seen](const std::string& msg) {
        if (seen->insert(msg).second)
            err << "warning: " << msg << '\n';
    };
}

/// Writes the results table `x,t,u_exact,u_approx,abs_err` over the eval grid.
inline void write_results(std::ostream& out, const ProblemSpec& spec, const GridFunction2D& u, int m)
{
    out << "x,t,u_exact,u_approx,abs_err\n";
    for (int i = 0; i < m; ++i) {
        const double x = eval_point(spec.period_x, m, i);
        for (int k = 0; k < m; ++k) {
            const double t = eval_point(spec.period_t, m, k);
            const double approx = tensor_interpolate(u, x, t);
            out << csv::format_double(x) << ',' << csv::format_double(t) << ',';
            if (spec.exact) {
                const double exact = spec.exact->u(x, t);
                out << csv::format_double(exact) << ',' << csv::format_double(approx) << ','
                    << csv::format_double(std::abs(exact - approx)) << '\n';
            } else {
                out << ',' << csv::format_double(approx) << ",\n";
            }
        }
    }
}

inline std::string summary_line(const RunOutcome& o)
{
    std::ostringstream os;
    os << std::setprecision(6);
    if (o.spec.exact && o.report)
        os << "max_err=" << o.report->max_abs_err << " rms_err=" << o.report->rms_err;
    else
        os << "max_err=n/a rms_err=n/a";
    os << " kappa=" << o.result.kappa << " elapsed_ms=" << o.result.elapsed_ms;
    return os.str();
}

inline int report_failure(std::ostream& err, const std::exception& e)
{
    err << "fgps: " << e.what() << '\n';
    return 1;
}

inline int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        validate_config(c);
        namespace fs = std::filesystem;
        const fs::path path(c.output_path);
        const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
        if (!fs::is_directory(parent))
            fgps::detail::fail(ErrorKind::Io, "output directory does not exist: " + parent.string());

        const RunOutcome o = run(c, stream_warnings(err));
        csv::write_file_atomically(path, [&](std::ostream& f) {
            write_results(f, o.spec, o.result.solution.grid_values, c.eval_grid);
        });
        out << summary_line(o) << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

struct FdmRequest {
    int n = 4;
    double period = 2.0 * std::numbers::pi;
    double gamma = 0.5;
    double memory_len = 30.0;
    int n_g = 1000;
    double lambda = 0.0;
    std::string out;
};

inline int cmd_fdm(const FdmRequest& r, std::ostream& out, std::ostream& err)
{
    try {
        fgps::detail::require(r.n_g >= 1, ErrorKind::InvalidParameter, "ng: must be >= 1");
        const PeriodicGrid grid(r.period, r.n);
        const auto rule = make_quadrature_rule(r.n_g, r.lambda);
        const auto d = build_fdm(grid, rule, r.gamma, r.memory_len, stream_warnings(err));
        csv::write_file_atomically(r.out, [&](std::ostream& f) { csv::write_fdm(f, d, r.lambda, r.n_g); });
        out << "wrote " << d.storage_size() << " diagonal values to " << r.out << '\n';
        return 0;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

inline const std::vector<std::string>& sweep_parameters()
{
    static const std::vector<std::string> names = {"n_g", "n1n2", "alpha-beta"};
    return names;
}

inline RunConfig with_sweep_value(RunConfig c, const std::string& param, const std::string& value)
{
    if (param == "n_g" || param == "ng") {
        apply_setting(c, "ng", value);
    } else if (param == "n1n2") {
        apply_setting(c, "n1", value);
        apply_setting(c, "n2", value);
    } else if (param == "alpha-beta") {
        fgps::detail::require(c.problem_id == 4, ErrorKind::InvalidParameter,
                              "alpha-beta sweeps apply to problem 4 only");
        apply_setting(c, "alpha", value);
        apply_setting(c, "beta", value);
    } else {
        fgps::detail::fail(ErrorKind::InvalidParameter,
                           "unknown sweep parameter '" + param + "' (use n_g, n1n2 or alpha-beta)");
    }
    return c;
}

/// One row `param,value,max_err,rms_err,kappa,elapsed_ms` per sweep value.
/// Problem 4 errors are deviations from u^{1,1}.
inline int cmd_convergence(const RunConfig& base, const std::string& param,
                           const std::vector<std::string>& values, std::ostream& out, std::ostream& err)
{
    try {
        fgps::detail::require(!values.empty(), ErrorKind::InvalidParameter, "empty sweep value list");
        std::vector<RunConfig> configs;
        for (const auto& v : values) {
            configs.push_back(with_sweep_value(base, param, v));
            validate_config(configs.back());
        }
        out << "param,value,max_err,rms_err,kappa,elapsed_ms\n";
        for (std::size_t i = 0; i < configs.size(); ++i) {
            const RunOutcome o = run(configs[i], stream_warnings(err));
            out << param << ',' << values[i] << ',';
            if (o.report)
                out << csv::format_double(o.report->max_abs_err) << ','
                    << csv::format_double(o.report->rms_err);
            else
                out << ',';
            out << ',' << csv::format_double(o.result.kappa) << ','
                << csv::format_double(o.result.elapsed_ms) << '\n';
        }
        return 0;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

inline constexpr double kOracleCheckThreshold = 1e-8;
inline constexpr double kConstantThreshold = 1e-10;

struct OracleCheckLine {
    std::string function;
    double gamma = 0.0;
    double discrepancy = 0.0;
    bool informational = false;
    bool passed = false;
    std::string note;
};

struct OracleCheckReport {
    std::vector<OracleCheckLine> lines;
    double max_discrepancy = 0.0; // over the non-informational lines
    bool passed = true;
};

/// Compares the matrix operator with the quadrature oracle on the x-grid of
/// the configured problem for a battery of trigonometric functions.
inline OracleCheckReport oracle_check(const RunConfig& c, const WarningSink& warn)
{
    validate_config(c);
    const ProblemSpec spec = problem_for(c);
    const PeriodicGrid grid(spec.period_x, c.n1);
    const QuadratureRule rule = detail::cached_rule(c);
    const double w = 2.0 * std::numbers::pi / spec.period_x;

    struct TestFunction {
        std::string name;
        std::function<double(double)> f, df;
        double threshold;
    };
    std::vector<TestFunction> battery = {
        {"sin", [w](double x) { return std::sin(w * x); }, [w](double x) { return w * std::cos(w * x); },
         kOracleCheckThreshold},
        {"cos", [w](double x) { return std::cos(w * x); }, [w](double x) { return -w * std::sin(w * x); },
         kOracleCheckThreshold},
        {"constant", [](double) { return 1.0; }, [](double) { return 0.0; }, kConstantThreshold},
    };
    if (c.n1 / 2 > 2) {
        battery.push_back({"sin+cos2",
                           [w](double x) { return std::sin(w * x) + 0.5 * std::cos(2 * w * x); },
                           [w](double x) { return w * std::cos(w * x) - w * std::sin(2 * w * x); },
                           kOracleCheckThreshold});
    }

    struct Order {
        double gamma;
        bool informational;
    };
    const std::vector<Order> orders = {{1.0 / 3.0, false}, {0.5, false}, {2.0 / 3.0, false},
                                       {0.7, false},       {0.8, false}, {0.999, true}};

    OracleCheckReport report;
    for (const auto& order : orders) {
        const auto d = build_fdm(grid, rule, order.gamma, c.memory_len, warn);
        for (const auto& fn : battery) {
            OracleCheckLine line{fn.name, order.gamma, 0.0, order.informational, true, {}};
            std::vector<double> samples;
            for (double x : grid.nodes())
                samples.push_back(fn.f(x));
            const auto approx = apply_fd(d, samples);
            try {
                for (int r = 0; r < grid.size(); ++r) {
                    const double ref = fd_oracle(fn.df, order.gamma, c.memory_len, grid.node(r), 1e-12);
                    line.discrepancy = std::max(line.discrepancy, std::abs(approx[r] - ref));
                }
                line.passed = line.discrepancy <= fn.threshold;
            } catch (const NumericalFailure& e) {
                line.passed = false;
                line.note = e.what();
            }
            if (!order.informational) {
                report.max_discrepancy = std::max(report.max_discrepancy, line.discrepancy);
                report.passed = report.passed && line.passed;
            }
            report.lines.push_back(std::move(line));
        }
    }
    return report;
}

inline int cmd_oracle_check(const RunConfig& c, std::ostream& out, std::ostream& err)
{
    try {
        const auto report = oracle_check(c, stream_warnings(err));
        out << std::setprecision(6);
        for (const auto& l : report.lines) {
            out << "function=" << l.function << " gamma=" << l.gamma << " max_discrepancy=" << l.discrepancy
                << ' ' << (l.informational ? "info" : (l.passed ? "pass" : "FAIL"));
            if (!l.note.empty())
                out << " (" << l.note << ')';
            out << '\n';
        }
        out << "max_discrepancy=" << report.max_discrepancy << " threshold=" << kOracleCheckThreshold
            << " result=" << (report.passed ? "PASS" : "FAIL") << '\n';
        return report.passed ? 0 : 1;
    } catch (const std::exception& e) {
        return report_failure(err, e);
    }
}

} // namespace fgps::cli
