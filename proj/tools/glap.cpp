// glap: verification suite and solver pipeline for the fractional
// g-Laplacian with a singular right-hand side on (-1, 1).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "glap/cli.hpp"
#include "glap/error.hpp"

namespace {

struct Common {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    bool no_plot = false;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "key=value run configuration")->required();
    sub->add_option("--out", c.out, "output directory")->capture_default_str();
    sub->add_option("--seed", c.seed, "overrides the seed of the configuration");
    sub->add_flag("--no-plot", c.no_plot, "skip the SVG plots");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"glap: Young-function checks and solver for (-Delta_g)^s u = f u^{-q}"};
    app.require_subcommand(1);

    Common check, solve, conv;
    auto* c1 = app.add_subcommand("check-young", "run the inequality checks, write checks.csv");
    auto* c2 = app.add_subcommand("solve", "run the monotone scheme, write solution and diagnostics");
    auto* c3 = app.add_subcommand("convergence", "mesh refinement study, write convergence.csv");
    add_common(c1, check);
    add_common(c2, solve);
    add_common(c3, conv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const Common& opt = c1->parsed() ? check : c2->parsed() ? solve : conv;
    try {
        glap::cli::RunConfig cfg = glap::cli::load_config(opt.config);
        if (opt.seed) cfg.seed = *opt.seed;
        if (opt.no_plot) cfg.plot = false;
        const std::filesystem::path out(opt.out);
        if (c1->parsed()) return glap::cli::cmd_check_young(cfg, out, std::cout);
        if (c2->parsed()) return glap::cli::cmd_solve(cfg, out, std::cout);
        return glap::cli::cmd_convergence(cfg, out, std::cout);
    } catch (const glap::NonConvergence& e) {
        std::cerr << "error: " << e.what() << "\nhistory:";
        for (double v : e.history()) std::cerr << ' ' << glap::cli::format_number(v);
        std::cerr << '\n';
        return 1;
    } catch (const glap::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return glap::cli::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
