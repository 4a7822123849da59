#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glap/nonlocal.hpp"
#include "glap/young.hpp"

namespace glap {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Result of one randomized inequality check. The margin of a sample is
/// rhs - lhs for "lhs <= rhs", normalised as documented per check, and
/// pass holds iff the worst margin is >= -tolerance.
struct CheckOutcome {
    std::string name;
    std::size_t samples = 0;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string offending;  ///< worst sample, filled when the check fails
    std::string detail;     ///< constants used and empirical optima
};

/// lambda^{p-} G(t) <= G(lambda t) <= lambda^{p+} G(t) for lambda >= 1 and the
/// reversed pair for lambda <= 1; relative margins, tolerance 1e-9.
CheckOutcome check_delta2(const YoungFunction& yf, std::size_t n_samples,
                          std::uint64_t seed = kDefaultSeed);

/// (g(b) - g(a))(b - a) >= C_L G(|b - a|), C_L = min(1/2, 2^{-p+} / (2 p-));
/// absolute margins, tolerance 1e-10. Half the pairs straddle 0.
double lindqvist_constant(const YoungFunction& yf);
CheckOutcome check_lindqvist(const YoungFunction& yf, std::size_t n_samples,
                             std::uint64_t seed = kDefaultSeed);

/// |g(a) - g(b)| <= C_E |a - b| g(|a| + |b|) / (|a| + |b|) <= C_E g(|a| + |b|)
/// with C_E = p+ - 1; relative margins, tolerance 1e-10.
CheckOutcome check_gdiff(const YoungFunction& yf, std::size_t n_samples,
                         std::uint64_t seed = kDefaultSeed);

/// (p- - 1) G(t) <= Gbar(g(t)) <= (p+ - 1) G(t); relative margins, tolerance 1e-7.
CheckOutcome check_conjugate(const YoungFunction& yf, std::size_t n_samples,
                             std::uint64_t seed = kDefaultSeed);

/// theta_1 = inf Phi(x) / (x Phi'(x)) over a log grid on [1e-3, 1e3] and the
/// extra points given.
double phi_theta(const PhiWeight& w, const std::vector<double>& extra = {});

/// |Phi(x) - Phi(y)| >= C_M Phi'(eps) |x - y| for max(x, y) >= eps with
/// C_M = min(theta_1, 1); relative margins, tolerance 1e-9.
CheckOutcome check_phi_mvt(const PhiWeight& w, double eps, std::size_t n_samples,
                           std::uint64_t seed = kDefaultSeed);

/// t^{1/r} <= (2/r) Phi(t) on a log grid over [1, 1e6]. Reports the smallest
/// grid point t0 from which the inequality holds up to 1e6; fails when it
/// does not hold at 1e6.
CheckOutcome check_rpower(const PhiWeight& w, std::size_t n_samples);
double rpower_threshold(const PhiWeight& w, std::size_t n_samples);

/// Random ordered right-hand sides F_u <= F_v on an M-node mesh; the
/// discrete solutions must satisfy v >= u - 1e-7 at every node. The first
/// two trials are F_v = F_u and F_v = F_u + 1.
CheckOutcome check_comparison(const OperatorConfig& cfg, std::size_t trials, std::size_t M = 33,
                              std::uint64_t seed = kDefaultSeed);

/// Power family only: doubling F multiplies the solution by 2^{1/(p-1)},
/// tolerance 1e-6 in sup norm.
CheckOutcome check_scaling(const OperatorConfig& cfg, std::size_t M = 33,
                           std::uint64_t seed = kDefaultSeed);

/// Exponents on the default growth grid as a check row.
CheckOutcome check_growth(const YoungFunction& yf);

/// Grid infimum of g(t1) g(t2) / g(t1 t2) on [1e-2, 1e2]^2 as a check row.
CheckOutcome check_submultiplicative(const YoungFunction& yf);

struct SuiteOptions {
    std::size_t samples = 1000;
    std::uint64_t seed = kDefaultSeed;
    double q_star = 2.0;
    double eps = 1.0;
    std::optional<double> phi_r;
    double s = 0.3;
    std::size_t comparison_trials = 20;
    bool include_solver_checks = true;
};

/// Every check above for one Young function, in a fixed order.
std::vector<CheckOutcome> run_suite(const YoungFunction& yf, const SuiteOptions& opt = {});

}  // namespace glap
