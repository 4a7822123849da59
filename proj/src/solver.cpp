#include "glap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "glap/error.hpp"

namespace glap {
namespace {

using Vec = Eigen::VectorXd;

bool interior_zero(const GridFunction& v) {
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (v[i] != 0.0) return false;
    }
    return true;
}

Vec interior(const GridFunction& v) {
    Vec out(static_cast<Eigen::Index>(v.size() - 2));
    for (std::size_t i = 1; i + 1 < v.size(); ++i) out(static_cast<Eigen::Index>(i - 1)) = v[i];
    return out;
}

GridFunction from_interior(const MeshPtr& mesh, const Vec& x) {
    std::vector<double> v(mesh->size(), 0.0);
    for (std::size_t i = 1; i + 1 < v.size(); ++i) v[i] = x(static_cast<Eigen::Index>(i - 1));
    return GridFunction(mesh, std::move(v));
}

double sup(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// tau psi with psi = sqrt(1 - x^2) and weak_form(tau psi, psi) = sum F w psi.
GridFunction initial_guess(const OperatorConfig& cfg, const GridFunction& F) {
    const MeshPtr& mesh = F.mesh_ptr();
    GridFunction psi = GridFunction::sample(mesh, [](double x) { return std::sqrt(std::max(0.0, 1.0 - x * x)); });
    psi[0] = psi[psi.size() - 1] = 0.0;
    double target = 0.0;
    for (std::size_t i = 1; i + 1 < F.size(); ++i) target += F[i] * mesh->w(i) * psi[i];
    auto level = [&](double tau) { return weak_form(cfg, psi.scaled(tau), psi) - target; };
    double lo = 1.0;
    double hi = 1.0;
    if (level(1.0) < 0.0) {
        while (level(hi) < 0.0 && hi < 1e150) hi *= 4.0;
        lo = hi / 4.0;
    } else {
        while (level(lo) > 0.0 && lo > 1e-150) lo /= 4.0;
        hi = lo * 4.0;
    }
    for (int it = 0; it < 40; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (level(mid) < 0.0) lo = mid; else hi = mid;
    }
    return psi.scaled(std::sqrt(lo * hi));
}

std::string dump(const GridFunction& v) {
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

}  // namespace

void validate(const ProblemData& data, const OperatorConfig& cfg) {
    if (data.f.size() != data.q.size()) throw DomainError("f and q live on different meshes");
    if (!(data.delta > 0.0 && data.delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
    for (std::size_t i = 0; i < data.f.size(); ++i) {
        if (data.f[i] < 0.0) throw ConfigError("f must be nonnegative");
        if (data.q[i] < 0.0) throw ConfigError("q must be nonnegative");
    }
    double strip_max = 0.0;
    const Mesh& mesh = data.q.mesh();
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (std::abs(mesh.x(i)) > 1.0 - data.delta) strip_max = std::max(strip_max, data.q[i]);
    }
    if (data.case_tag == CaseTag::main1) {
        if (strip_max > 1.0) {
            throw ConfigError("main1 requires q <= 1 on the boundary strip, found max q = " +
                              std::to_string(strip_max));
        }
    } else {
        if (strip_max > data.q_star) {
            throw ConfigError("main2 requires q <= q_star on the boundary strip, found max q = " +
                              std::to_string(strip_max));
        }
        PhiWeight check(cfg.yf, data.q_star, data.phi_r);
    }
}

AuxiliarySolve solve_auxiliary_report(const OperatorConfig& cfg, const GridFunction& F,
                                      const SolverOptions& opt, const GridFunction* warm_start) {
    for (std::size_t i = 0; i < F.size(); ++i) {
        if (F[i] < 0.0) throw DomainError("solve_auxiliary: right-hand side must be nonnegative");
    }
    const MeshPtr& mesh = F.mesh_ptr();
    AuxiliarySolve out{GridFunction::zeros(mesh), 0, false, {}};
    if (interior_zero(F)) return out;

    const double tol = opt.tol_res * (1.0 + F.sup_norm());
    GridFunction u = warm_start ? *warm_start : initial_guess(cfg, F);
    if (u.size() != F.size() || !u.vanishes_on_boundary()) {
        throw DomainError("solve_auxiliary: warm start must live on the same mesh and vanish on the boundary");
    }
    Vec rhs = interior(F);
    for (Eigen::Index k = 0; k < rhs.size(); ++k) rhs(k) *= mesh->w(static_cast<std::size_t>(k) + 1);

    Vec r = interior(residual(cfg, u, F));
    double nr = sup(r);
    double last_step = std::numeric_limits<double>::infinity();
    int failures = 0;
    bool picard = false;
    out.history.push_back(nr);

    for (int it = 0;; ++it) {
        if (nr <= tol && last_step <= opt.tol_step * std::max(1.0, u.sup_norm())) {
            out.iterations = it;
            break;
        }
        if (it >= opt.newton_max) {
            throw NonConvergence("solve_auxiliary: no convergence in " + std::to_string(opt.newton_max) +
                                     " iterations (residual " + std::to_string(nr) + ")",
                                 out.history);
        }
        const Vec x = interior(u);
        Vec next;
        double next_norm = 0.0;
        Vec next_r;
        bool accepted = false;
        if (!picard) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(jacobian(cfg, u));
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
                picard = true;
            } else {
                const Vec step = -ldlt.solve(r);
                double best = std::numeric_limits<double>::infinity();
                double lambda = 1.0;
                for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
                    Vec trial = x + lambda * step;
                    Vec tr = interior(residual(cfg, from_interior(mesh, trial), F));
                    const double nt = sup(tr);
                    if (nt < best) {
                        best = nt;
                        next = std::move(trial);
                        next_r = std::move(tr);
                        next_norm = nt;
                    }
                    if (nt < nr) {
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) {
                    if (nr <= tol) {
                        // At the rounding floor; the residual target is met.
                        out.iterations = it;
                        break;
                    }
                    if (++failures >= opt.picard_after) picard = true;
                }
            }
        }
        if (picard) {
            // Kacanov step: freeze the secant coefficients at u.
            Eigen::LDLT<Eigen::MatrixXd> ldlt(secant_matrix(cfg, u));
            next = ldlt.solve(rhs);
            if (ldlt.info() != Eigen::Success || !next.allFinite()) {
                throw NonConvergence("solve_auxiliary: singular secant matrix", out.history);
            }
            next_r = interior(residual(cfg, from_interior(mesh, next), F));
            next_norm = sup(next_r);
            out.picard = true;
        }
        last_step = sup(next - x);
        u = from_interior(mesh, next);
        r = std::move(next_r);
        nr = next_norm;
        out.history.push_back(nr);
    }

    const double floor = -1e-9 * std::max(1.0, u.sup_norm());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < floor) {
            throw InvariantError("solve_auxiliary: negative solution value " + std::to_string(u[i]) +
                                 " at node " + std::to_string(i));
        }
        if (u[i] < 0.0) u[i] = 0.0;
    }
    out.u = std::move(u);
    return out;
}

GridFunction solve_auxiliary(const OperatorConfig& cfg, const GridFunction& F, const SolverOptions& opt) {
    return solve_auxiliary_report(cfg, F, opt).u;
}

FixedPointResult fixed_point_S_report(const OperatorConfig& cfg, const ProblemData& data, int n,
                                      const SolverOptions& opt) {
    if (n < 1) throw DomainError("fixed_point_S: n must be positive");
    validate(data, cfg);
    const MeshPtr& mesh = data.f.mesh_ptr();
    const std::size_t M = mesh->size();
    const double nn = static_cast<double>(n);
    std::vector<double> fn(M);
    for (std::size_t i = 0; i < M; ++i) fn[i] = std::min(data.f[i], nn);

    FixedPointResult out{GridFunction::zeros(mesh), GridFunction::zeros(mesh), 0, {}};
    if (interior_zero(GridFunction(mesh, fn))) return out;

    GridFunction u = GridFunction::zeros(mesh);
    std::optional<GridFunction> warm;
    double omega = 1.0;
    double prev_defect = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= opt.fp_max; ++k) {
        std::vector<double> F(M);
        for (std::size_t i = 0; i < M; ++i) {
            F[i] = fn[i] / std::pow(std::max(u[i], 0.0) + 1.0 / nn, data.q[i]);
        }
        GridFunction Fg(mesh, std::move(F));
        AuxiliarySolve aux = solve_auxiliary_report(cfg, Fg, opt, warm ? &*warm : nullptr);
        const double defect = sup_distance(aux.u, u);
        out.history.push_back(defect);
        if (defect <= opt.tol_fp) {
            out.u = std::move(aux.u);
            out.frozen_rhs = std::move(Fg);
            out.iterations = k;
            return out;
        }
        if (defect > prev_defect) omega = std::max(0.5 * omega, 1.0 / 64.0);
        prev_defect = defect;
        for (std::size_t i = 0; i < M; ++i) u[i] += omega * (aux.u[i] - u[i]);
        warm = std::move(aux.u);
    }
    throw NonConvergence("fixed_point_S: no convergence in " + std::to_string(opt.fp_max) +
                             " outer iterations for n = " + std::to_string(n),
                         out.history);
}

GridFunction fixed_point_S(const OperatorConfig& cfg, const ProblemData& data, int n,
                           const SolverOptions& opt) {
    return fixed_point_S_report(cfg, data, n, opt).u;
}

HolderFit holder_exponent_fit(const GridFunction& u) {
    const Mesh& mesh = u.mesh();
    std::size_t a = mesh.size();
    std::size_t b = 0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (std::abs(mesh.x(i)) <= 0.5 + 1e-12) {
            a = std::min(a, i);
            b = std::max(b, i);
        }
    }
    HolderFit fit;
    if (b <= a) return fit;
    std::vector<double> lx;
    std::vector<double> ly;
    std::vector<double> osc(b - a + 1, 0.0);
    for (std::size_t k = 1; k <= b - a; ++k) {
        // Modulus of continuity: sup over separations up to k h.
        osc[k] = osc[k - 1];
        for (std::size_t i = a; i + k <= b; ++i) osc[k] = std::max(osc[k], std::abs(u[i + k] - u[i]));
        // Separations beyond half the window only see the saturated modulus.
        if (osc[k] > 0.0 && 2 * k <= b - a) {
            lx.push_back(std::log(static_cast<double>(k) * mesh.h()));
            ly.push_back(std::log(osc[k]));
        }
    }
    if (lx.empty()) return fit;
    if (lx.size() >= 2) {
        const double n = static_cast<double>(lx.size());
        double mx = 0.0;
        double my = 0.0;
        for (std::size_t j = 0; j < lx.size(); ++j) {
            mx += lx[j];
            my += ly[j];
        }
        mx /= n;
        my /= n;
        double sxy = 0.0;
        double sxx = 0.0;
        for (std::size_t j = 0; j < lx.size(); ++j) {
            sxy += (lx[j] - mx) * (ly[j] - my);
            sxx += (lx[j] - mx) * (lx[j] - mx);
        }
        fit.alpha = std::clamp(sxy / sxx, 1e-3, 1.0);
    }
    for (std::size_t k = 1; k <= b - a; ++k) {
        fit.seminorm = std::max(fit.seminorm, osc[k] / std::pow(static_cast<double>(k) * mesh.h(), fit.alpha));
    }
    return fit;
}

GridFunction phi_of(const PhiWeight& w, const GridFunction& u) {
    std::vector<double> v(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) v[i] = phi(w, std::max(u[i], 0.0));
    return GridFunction(u.mesh_ptr(), std::move(v));
}

SolveReport monotone_scheme(const OperatorConfig& cfg, const ProblemData& data,
                            const std::vector<int>& schedule, const SolverOptions& opt) {
    if (schedule.empty()) throw ConfigError("n_schedule must not be empty");
    for (std::size_t k = 0; k < schedule.size(); ++k) {
        if (schedule[k] < 1 || (k > 0 && schedule[k] <= schedule[k - 1])) {
            throw ConfigError("n_schedule must be strictly increasing positive integers");
        }
    }
    validate(data, cfg);
    std::optional<PhiWeight> weight;
    if (data.case_tag == CaseTag::main2) weight.emplace(cfg.yf, data.q_star, data.phi_r);
    const bool f_zero = interior_zero(data.f);
    const Mesh& mesh = data.f.mesh();

    SolveReport rep;
    for (int n : schedule) {
        FixedPointResult fp = fixed_point_S_report(cfg, data, n, opt);
        const GridFunction& u = fp.u;
        double change = f_zero ? 0.0 : std::numeric_limits<double>::infinity();
        if (!rep.snapshots.empty()) {
            const GridFunction& prev = rep.snapshots.back();
            for (std::size_t i = 0; i < u.size(); ++i) {
                if (u[i] < prev[i] - opt.tol_mono) {
                    std::ostringstream os;
                    os.precision(12);
                    os << "monotone_scheme: u_" << n << " < u_" << rep.schedule.back() << " - tol_mono at node "
                       << i << " (x = " << mesh.x(i) << "): " << u[i] << " < " << prev[i] << "\nu_"
                       << rep.schedule.back() << " = " << dump(prev) << "\nu_" << n << " = " << dump(u);
                    throw InvariantError(os.str());
                }
            }
            change = sup_distance(u, prev);
            rep.cauchy.push_back(change);
        } else {
            rep.cauchy.push_back(u.sup_norm());
        }
        if (!rep.converged && change <= opt.tol_conv) {
            rep.converged = true;
            rep.converged_at = n;
        }
        double l = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < mesh.size(); ++i) {
            if (std::abs(mesh.x(i)) <= 0.5 + 1e-12) l = std::min(l, u[i]);
        }
        if (!f_zero && !(l > 0.0)) {
            throw InvariantError("monotone_scheme: interior lower bound l(K) = " + std::to_string(l) +
                                 " is not positive for n = " + std::to_string(n));
        }
        rep.lower_bounds.push_back(l);
        rep.energies.push_back(weight ? modular_W(phi_of(*weight, u), cfg.yf, cfg.s, cfg.kernel)
                                      : modular_W(u, cfg.yf, cfg.s, cfg.kernel));
        rep.schedule.push_back(n);
        rep.fp_iterations.push_back(fp.iterations);
        rep.fp_histories.push_back(std::move(fp.history));
        rep.frozen_rhs.push_back(std::move(fp.frozen_rhs));
        rep.snapshots.push_back(std::move(fp.u));
    }
    rep.holder = holder_exponent_fit(rep.snapshots.back());
    return rep;
}

std::vector<double> barrier_minima(const OperatorConfig& cfg, const MeshPtr& mesh,
                                   const std::vector<double>& alphas) {
    std::vector<double> out;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const double a = alphas[k];
        if (!(a > 0.0) || (k > 0 && !(a > alphas[k - 1]))) {
            throw ConfigError("barrier_check: alphas must be positive and increasing");
        }
        GridFunction v = GridFunction::sample(mesh, [a](double x) { return a * (1.0 - std::abs(x)); });
        v[0] = v[v.size() - 1] = 0.0;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < v.size(); ++i) m = std::min(m, apply(cfg, v, i));
        out.push_back(m);
    }
    return out;
}

std::vector<double> barrier_check(const OperatorConfig& cfg, const MeshPtr& mesh,
                                  const std::vector<double>& alphas) {
    const std::vector<double> out = barrier_minima(cfg, mesh, alphas);
    for (std::size_t k = 1; k < out.size(); ++k) {
        if (!(out[k] > out[k - 1])) {
            std::ostringstream os;
            os.precision(12);
            os << "barrier_check: minimum " << out[k] << " at alpha = " << alphas[k] << " does not exceed "
               << out[k - 1] << " at alpha = " << alphas[k - 1];
            throw InvariantError(os.str());
        }
    }
    return out;
}

BoundaryEnergy boundary_energy_report(const SolveReport& report, const ProblemData& data,
                                      const OperatorConfig& cfg) {
    BoundaryEnergy out;
    std::optional<PhiWeight> weight;
    if (data.case_tag == CaseTag::main2) {
        weight.emplace(cfg.yf, data.q_star, data.phi_r);
        out.r_qstar = weight->r() * weight->q_star();
    }
    for (const GridFunction& u : report.snapshots) {
        out.seminorms.push_back(weight ? luxemburg_seminorm_W(phi_of(*weight, u), cfg.yf, cfg.s, cfg.kernel)
                                       : luxemburg_seminorm_W(u, cfg.yf, cfg.s, cfg.kernel));
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (double v : out.seminorms) {
        if (v > 0.0) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    out.band_ratio = hi > 0.0 ? hi / lo : 1.0;
    const std::size_t n = out.seminorms.size();
    if (n >= 3) {
        const auto& e = out.seminorms;
        const double med = median3(e[n - 3], e[n - 2], e[n - 1]);
        std::ostringstream os;
        os.precision(6);
        for (std::size_t k = 0; k < n; ++k) {
            if (e[k] > 2.0 * med) os << "energy of u_" << report.schedule[k] << " = " << e[k] << " exceeds twice the median " << med << "; ";
        }
        if (e[n - 1] > 2.0 * med && e[n - 1] > e[n - 2]) {
            out.bounded = false;
            os << "trend is unbounded";
        }
        out.message = os.str();
    }
    return out;
}

}  // namespace glap
