#include "fgps/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Overrides {
    std::optional<std::string> config;
    std::vector<std::pair<std::string, std::string>> settings;
};

void add_run_options(CLI::App& cmd, Overrides& o)
{
    cmd.add_option_function<std::string>("--config", [&o](const std::string& v) { o.config = v; },
                                         "flat key=value configuration file");
    const auto setting = [&](const char* flag, const char* key, const char* help) {
        cmd.add_option_function<std::string>(
            flag, [&o, key](const std::string& v) { o.settings.emplace_back(key, v); }, help);
    };
    setting("--problem", "problem", "benchmark problem 1..4");
    setting("--n1", "n1", "collocation points in x (even, >= 4)");
    setting("--n2", "n2", "collocation points in t (even, >= 4)");
    setting("--ng", "ng", "Gegenbauer quadrature points");
    setting("--lambda", "lambda", "Gegenbauer index (> -1/2)");
    setting("--L", "L", "memory length");
    setting("--alpha", "alpha", "order in x (problem 4)");
    setting("--beta", "beta", "order in t (problem 4)");
    setting("--eval-grid", "eval_grid", "evaluation grid size per axis");
    setting("--out", "out", "output CSV path");
    setting("--cache-dir", "cache_dir", "directory for cached quadrature rules and matrices");
}

fgps::cli::RunConfig build_config(const Overrides& o)
{
    fgps::cli::RunConfig c;
    if (o.config)
        fgps::cli::apply_config_file(c, *o.config);
    for (const auto& [k, v] : o.settings)
        fgps::cli::apply_setting(c, k, v);
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier-Gegenbauer pseudospectral solver for periodic fractional PDEs"};
    app.require_subcommand(1);

    Overrides solve_opts, conv_opts, oracle_opts;
    auto* solve = app.add_subcommand("solve", "solve a benchmark problem and write a results table");
    add_run_options(*solve, solve_opts);

    auto* conv = app.add_subcommand("convergence", "sweep one parameter and tabulate errors");
    add_run_options(*conv, conv_opts);
    std::string sweep;
    std::vector<std::string> values;
    conv->add_option("--sweep", sweep, "n_g, n1n2 or alpha-beta")->required();
    conv->add_option("--values", values, "comma separated sweep values")->delimiter(',')->required();

    auto* oracle = app.add_subcommand("oracle-check", "compare the matrix operator with direct quadrature");
    add_run_options(*oracle, oracle_opts);

    fgps::cli::FdmRequest fdm_req;
    auto* fdm = app.add_subcommand("fdm", "build a fractional differentiation matrix and cache it");
    fdm->add_option("--n", fdm_req.n, "grid size (even)");
    fdm->add_option("--period", fdm_req.period, "period");
    fdm->add_option("--gamma", fdm_req.gamma, "order in (0,1)");
    fdm->add_option("--L", fdm_req.memory_len, "memory length");
    fdm->add_option("--ng", fdm_req.n_g, "Gegenbauer quadrature points");
    fdm->add_option("--lambda", fdm_req.lambda, "Gegenbauer index");
    fdm->add_option("--out", fdm_req.out, "output cache path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve)
            return fgps::cli::cmd_solve(build_config(solve_opts), std::cout, std::cerr);
        if (*conv) {
            std::erase_if(values, [](const std::string& v) { return v.find_first_not_of(" \t") == std::string::npos; });
            return fgps::cli::cmd_convergence(build_config(conv_opts), sweep, values, std::cout, std::cerr);
        }
        if (*oracle)
            return fgps::cli::cmd_oracle_check(build_config(oracle_opts), std::cout, std::cerr);
        if (*fdm)
            return fgps::cli::cmd_fdm(fdm_req, std::cout, std::cerr);
    } catch (const std::exception& e) {
        return fgps::cli::report_failure(std::cerr, e);
    }
    return 1;
}
