#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "glap/nonlocal.hpp"
#include "glap/orlicz.hpp"
#include "glap/young.hpp"

namespace glap {

enum class CaseTag { main1, main2 };

/// Data of (-Delta_g)^s u = f u^{-q(x)} in (-1, 1), u = 0 outside.
struct ProblemData {
    GridFunction f;   ///< nonnegative datum
    GridFunction q;   ///< nonnegative exponent profile
    double q_star = 2.0;
    double delta = 0.25;  ///< width of the boundary strip {1 - delta < |x| < 1}
    CaseTag case_tag = CaseTag::main1;
    /// Overrides the Phi exponent r (main2 only).
    std::optional<double> phi_r;
};

/// Checks the case hypotheses; throws ConfigError or DomainError.
void validate(const ProblemData& data, const OperatorConfig& cfg);

struct SolverOptions {
    double tol_res = 1e-8;    ///< residual target tol_res (1 + ||rhs||_inf)
    double tol_step = 1e-10;  ///< Newton step target relative to max(1, ||u||_inf)
    int newton_max = 200;
    int picard_after = 5;     ///< failed line searches before switching to Picard steps
    double tol_fp = 1e-8;
    int fp_max = 500;
    double tol_mono = 1e-7;
    double tol_conv = 1e-6;
};

struct AuxiliarySolve {
    GridFunction u;
    int iterations = 0;
    bool picard = false;
    std::vector<double> history;  ///< ||r||_inf per iteration
};

/// Discrete solution of (-Delta_g)^s u = F with zero exterior data:
/// residual(u, F) = 0 by damped Newton from a scaled sqrt(1 - x^2) guess (or
/// the warm start), halving the step until ||r||_inf decreases.
AuxiliarySolve solve_auxiliary_report(const OperatorConfig& cfg, const GridFunction& F,
                                      const SolverOptions& opt = {},
                                      const GridFunction* warm_start = nullptr);
GridFunction solve_auxiliary(const OperatorConfig& cfg, const GridFunction& F,
                             const SolverOptions& opt = {});

struct FixedPointResult {
    GridFunction u;
    GridFunction frozen_rhs;  ///< F of the last outer step, u = S(previous iterate)
    int iterations = 0;
    std::vector<double> history;  ///< ||S(u^k) - u^k||_inf
};

/// Fixed point of S(u) = solve_auxiliary(min(f, n) / (u^+ + 1/n)^q) from u = 0.
/// The iterate is relaxed, u <- u + omega (S(u) - u), and omega is halved
/// (down to 1/64) whenever the defect grows.
FixedPointResult fixed_point_S_report(const OperatorConfig& cfg, const ProblemData& data, int n,
                                      const SolverOptions& opt = {});
GridFunction fixed_point_S(const OperatorConfig& cfg, const ProblemData& data, int n,
                           const SolverOptions& opt = {});

struct HolderFit {
    double alpha = 1.0;
    double seminorm = 0.0;  ///< sup |u(x) - u(y)| / |x - y|^alpha on the window
};

/// Slope of log omega(delta) against log delta on the middle half of (-1, 1),
/// where omega is the modulus of continuity of the nodal values (largest
/// increment over node pairs at distance <= delta), for delta up to half the
/// window. Clipped to (0, 1]; a constant window gives (1, 0).
HolderFit holder_exponent_fit(const GridFunction& u);

struct SolveReport {
    std::vector<int> schedule;
    std::vector<GridFunction> snapshots;
    std::vector<GridFunction> frozen_rhs;
    std::vector<int> fp_iterations;
    std::vector<std::vector<double>> fp_histories;
    std::vector<double> energies;       ///< modular_W of u_n (main1) or of Phi(u_n) (main2)
    std::vector<double> lower_bounds;   ///< min of u_n over |x| <= 1/2
    std::vector<double> cauchy;         ///< ||u_n - u_prev||_inf, first entry ||u_n||_inf
    bool converged = false;
    int converged_at = 0;               ///< first n meeting tol_conv, 0 if none
    HolderFit holder;

    const GridFunction& solution() const { return snapshots.back(); }
};

/// Runs every n in the (strictly increasing) schedule. Throws InvariantError
/// when u_n < u_prev - tol_mono at some node or when l(K) <= 0 for f != 0.
SolveReport monotone_scheme(const OperatorConfig& cfg, const ProblemData& data,
                            const std::vector<int>& schedule, const SolverOptions& opt = {});

/// Nodal Phi(u), main2 energies are taken of this.
GridFunction phi_of(const PhiWeight& w, const GridFunction& u);

/// min over interior nodes of apply(v_alpha) for v_alpha = alpha (1 - |x|).
/// Near the boundary the interior part of the integral is negative, so for
/// p > 2 these minima are negative and decrease with alpha.
std::vector<double> barrier_minima(const OperatorConfig& cfg, const MeshPtr& mesh,
                                   const std::vector<double>& alphas);
/// barrier_minima, throwing InvariantError unless they strictly increase.
std::vector<double> barrier_check(const OperatorConfig& cfg, const MeshPtr& mesh,
                                  const std::vector<double>& alphas);

struct BoundaryEnergy {
    std::vector<double> seminorms;
    bool bounded = true;
    double band_ratio = 1.0;  ///< max / min over the positive entries
    double r_qstar = 0.0;     ///< r q* (main2)
    std::string message;
};

/// Luxemburg W^{s,G} seminorms of u_n (main1) or Phi(u_n) (main2). The
/// sequence counts as unbounded when its last entry exceeds twice the median
/// of the last three and is still growing.
BoundaryEnergy boundary_energy_report(const SolveReport& report, const ProblemData& data,
                                      const OperatorConfig& cfg);

}  // namespace glap
