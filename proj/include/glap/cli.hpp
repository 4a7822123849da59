#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glap/nonlocal.hpp"
#include "glap/orlicz.hpp"
#include "glap/solver.hpp"
#include "glap/verify.hpp"
#include "glap/young.hpp"

namespace glap::cli {

/// Flat key=value run configuration. See docs/config.md for the keys.
struct RunConfig {
    std::string family = "power";
    double p = 4.0;
    double p1 = 3.0;
    double p2 = 4.0;
    double a = 2.0;
    double b = 2.0;
    double c = 1.0;
    std::optional<double> p_minus;  ///< overrides the declared exponents
    std::optional<double> p_plus;

    double s = 0.3;
    std::size_t M = 65;
    KernelOptions kernel;

    std::string f = "const:1";
    std::string q = "const:0.5";
    double q_star = 2.0;
    double delta = 0.25;
    CaseTag case_tag = CaseTag::main1;
    std::optional<double> phi_r;
    std::vector<int> n_schedule{1, 2, 4, 8, 16};
    SolverOptions solver;

    std::vector<std::size_t> meshes{33, 65, 129};
    std::size_t samples = 1000;
    double eps = 1.0;
    std::size_t comparison_trials = 20;
    std::uint64_t seed = kDefaultSeed;
    bool plot = true;

    /// Directory against which file: tags are resolved.
    std::filesystem::path base_dir = ".";
};

/// Parses and validates; throws ConfigError naming the line and key.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

YoungFunction make_young(const RunConfig& cfg);
OperatorConfig make_operator(const RunConfig& cfg);

/// Nodal samples of a profile tag: const:c, gaussian:A,sigma, bump:A,
/// abs-power:A,gamma, strip:in,out (uses delta) or file:path (one value
/// per line, M lines). A bare number is read as const.
GridFunction make_profile(const std::string& tag, const MeshPtr& mesh, const RunConfig& cfg,
                          const std::string& key);
ProblemData make_problem(const RunConfig& cfg, const MeshPtr& mesh);

/// Numbers in every CSV: 12 significant digits, C locale.
std::string format_number(double v);

/// Each command writes into out_dir (created if needed) and returns the exit
/// code; errors propagate as exceptions, see exit_code_for.
int cmd_check_young(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_solve(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);
int cmd_convergence(const RunConfig& cfg, const std::filesystem::path& out_dir, std::ostream& log);

/// 2 for ConfigError / DomainError, 1 for every other library error.
int exit_code_for(const std::exception& e);

}  // namespace glap::cli
