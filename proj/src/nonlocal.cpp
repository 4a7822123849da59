#include "glap/nonlocal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "discretization.hpp"
#include "glap/error.hpp"
#include "glap/quadrature.hpp"

namespace glap {
namespace {


void require_interior(const GridFunction& u, std::size_t i) {
    if (i == 0 || i + 1 >= u.size()) {
        throw DomainError("apply: node " + std::to_string(i) + " is not an interior node");
    }
}

void require_zero_trace(const GridFunction& u, const char* what) {
    if (!u.vanishes_on_boundary()) {
        throw DomainError(std::string(what) + ": grid function must vanish at the boundary nodes");
    }
}

// \int_d^{far} g(v z^{-s}) z^{-1-s} dz, with far = inf in closed form.
double exterior_side(const OperatorConfig& cfg, double v, double d, double far) {
    if (v == 0.0) return 0.0;
    const double s = cfg.s;
    const YoungFunction& yf = cfg.yf;
    const double a = std::abs(v);
    const double body = quad::integrate_log(
        [&](double z) { return yf.g(a * std::pow(z, -s)) * std::pow(z, -1.0 - s); }, d, far, {},
        "exterior integral");
    double tail = 0.0;
    if (cfg.kernel.tail_mode == TailMode::analytic) tail = yf.G(a * std::pow(far, -s)) / (s * a);
    return std::copysign(body + tail, v);
}

}  // namespace

OperatorConfig::OperatorConfig(YoungFunction yf_, double s_, KernelOptions kernel_)
    : yf(std::move(yf_)), s(s_), kernel(kernel_) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional order s must lie in (0,1)");
    if (!(kernel.R_far > 1.0) || !std::isfinite(kernel.R_far)) throw ConfigError("R_far must exceed 1");
    if (kernel.near_band < 1) throw ConfigError("near_band must be at least 1");
}

double apply(const OperatorConfig& cfg, const GridFunction& u, std::size_t i) {
    require_interior(u, i);
    const Mesh& mesh = u.mesh();
    const std::size_t M = mesh.size();
    const double h = mesh.h();
    const double s = cfg.s;
    const YoungFunction& yf = cfg.yf;
    const double ui = u[i];

    // Near band |z| < rho = (b + 1/2) h with u replaced by its one-sided
    // slopes at x_i, integrated in symmetric pairs z -> u(x_i +- z). A side
    // whose band would pass the boundary stops there; the exterior rule
    // covers the rest.
    const std::size_t b = std::min<std::size_t>({static_cast<std::size_t>(cfg.kernel.near_band), i, M - 1 - i});
    const double rho = (static_cast<double>(b) + 0.5) * h;
    const double dr = static_cast<double>(M - 1 - i) * h;
    const double dl = static_cast<double>(i) * h;
    const double reach_l = std::min(rho, dl);
    const double reach_r = std::min(rho, dr);
    const double paired = std::min(reach_l, reach_r);
    const double sl = (ui - u[i - 1]) / h;
    const double sr = (u[i + 1] - ui) / h;
    double near = 0.0;
    if (sl != sr) {
        const double beta = (yf.origin_exponent() - 1.0) * (1.0 - s) - 1.0 - s;
        if (!(beta > -1.0)) {
            std::ostringstream os;
            os << "apply: principal value diverges at the kink at node " << i
               << " (need (p0 - 1)(1 - s) > s)";
            throw NumericError(os.str());
        }
        near = quad::integrate_power_endpoint(
            [&](double z) {
                const double zs = std::pow(z, 1.0 - s);
                // kernel applied in two halves: 0 * inf at underflowing z otherwise
                const double half = std::pow(z, -0.5 * (1.0 + s));
                return ((yf.g(sl * zs) - yf.g(sr * zs)) * half) * half;
            },
            paired, beta, {}, "apply near band");
    }
    auto one_sided = [&](double slope, double from, double to) {
        return quad::integrate(
            [&](double z) { return yf.g(slope * std::pow(z, 1.0 - s)) * std::pow(z, -1.0 - s); }, from, to, {},
            "apply near band");
    };
    if (reach_l > paired) near += one_sided(sl, paired, reach_l);
    if (reach_r > paired) near -= one_sided(sr, paired, reach_r);

    // Node-centred midpoint cells beyond the band, trapezoid weight at the boundary.
    double cells = 0.0;
    for (std::size_t j = 0; j < M; ++j) {
        const std::size_t d = j > i ? j - i : i - j;
        if (d <= b) continue;
        const double z = static_cast<double>(d) * h;
        cells += mesh.w(j) * yf.g((ui - u[j]) * std::pow(z, -s)) * std::pow(z, -1.0 - s);
    }

    const double R = cfg.kernel.R_far;
    const double ext = exterior_side(cfg, ui, dr, R - 1.0 + dr) + exterior_side(cfg, ui, dl, R - 1.0 + dl);
    return near + cells + ext;
}

std::vector<double> apply_all(const OperatorConfig& cfg, const GridFunction& u) {
    std::vector<double> out(u.size(), 0.0);
    for (std::size_t i = 1; i + 1 < u.size(); ++i) out[i] = apply(cfg, u, i);
    return out;
}

double weak_form(const OperatorConfig& cfg, const GridFunction& u, const GridFunction& phi) {
    require_zero_trace(u, "weak_form");
    require_zero_trace(phi, "weak_form");
    if (u.size() != phi.size()) throw DomainError("weak_form: meshes differ");
    const detail::Kernel k = detail::make_kernel(u.mesh(), cfg.yf, cfg.s, cfg.kernel);
    const std::size_t M = k.M;
    double far = 0.0;
    for (std::size_t i = 0; i < M; ++i) {
        double row = 0.0;
        for (std::size_t j = i + k.band + 1; j < M; ++j) {
            const std::size_t d = j - i;
            row += k.w[j] * cfg.yf.g((u[i] - u[j]) * k.d_pow_s[d]) * (phi[i] - phi[j]) * k.d_pow_1s[d];
        }
        far += 2.0 * k.w[i] * row;
    }
    double near = 0.0;
    for (std::size_t e = 0; e + 1 < M; ++e) {
        near += detail::band_flux(k, (u[e + 1] - u[e]) / k.h) * (phi[e + 1] - phi[e]);
    }
    double ext = 0.0;
    for (std::size_t i = 1; i + 1 < M; ++i) {
        ext += 2.0 * k.w[i] * detail::exterior_flux(k, i, u[i]) * phi[i];
    }
    return far + near + ext;
}

GridFunction residual(const OperatorConfig& cfg, const GridFunction& u, const GridFunction& rhs) {
    require_zero_trace(u, "residual");
    if (u.size() != rhs.size()) throw DomainError("residual: meshes differ");
    const detail::Kernel k = detail::make_kernel(u.mesh(), cfg.yf, cfg.s, cfg.kernel);
    const std::size_t M = k.M;
    std::vector<double> r(M, 0.0);
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i + k.band + 1; j < M; ++j) {
            const std::size_t d = j - i;
            const double flux =
                2.0 * k.w[i] * k.w[j] * cfg.yf.g((u[i] - u[j]) * k.d_pow_s[d]) * k.d_pow_1s[d];
            r[i] += flux;
            r[j] -= flux;
        }
    }
    for (std::size_t e = 0; e + 1 < M; ++e) {
        const double flux = detail::band_flux(k, (u[e + 1] - u[e]) / k.h);
        r[e] -= flux;
        r[e + 1] += flux;
    }
    for (std::size_t i = 1; i + 1 < M; ++i) {
        r[i] += 2.0 * k.w[i] * detail::exterior_flux(k, i, u[i]) - rhs[i] * k.w[i];
    }
    r.front() = r.back() = 0.0;
    return GridFunction(u.mesh_ptr(), std::move(r));
}

Eigen::MatrixXd jacobian(const OperatorConfig& cfg, const GridFunction& u) {
    require_zero_trace(u, "jacobian");
    const detail::Kernel k = detail::make_kernel(u.mesh(), cfg.yf, cfg.s, cfg.kernel);
    const std::size_t M = k.M;
    const Eigen::Index n = static_cast<Eigen::Index>(M - 2);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    // Interior unknown i sits at row i - 1; couplings to boundary nodes only
    // feed the diagonal.
    auto add = [&](std::size_t a, std::size_t b, double c) {
        const bool ia = a > 0 && a + 1 < M;
        const bool ib = b > 0 && b + 1 < M;
        const auto ra = static_cast<Eigen::Index>(a) - 1;
        const auto rb = static_cast<Eigen::Index>(b) - 1;
        if (ia) J(ra, ra) += c;
        if (ib) J(rb, rb) += c;
        if (ia && ib) {
            J(ra, rb) -= c;
            J(rb, ra) -= c;
        }
    };
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i + k.band + 1; j < M; ++j) {
            const std::size_t d = j - i;
            const double c = 2.0 * k.w[i] * k.w[j] *
                             cfg.yf.g_prime((u[i] - u[j]) * k.d_pow_s[d]) * k.d_pow_s[d] * k.d_pow_1s[d];
            add(i, j, c);
        }
    }
    for (std::size_t e = 0; e + 1 < M; ++e) {
        add(e, e + 1, detail::band_flux_prime(k, (u[e + 1] - u[e]) / k.h) / k.h);
    }
    for (std::size_t i = 1; i + 1 < M; ++i) {
        const auto r = static_cast<Eigen::Index>(i) - 1;
        J(r, r) += 2.0 * k.w[i] * detail::exterior_flux_prime(k, i, u[i]);
    }
    return J;
}

Eigen::MatrixXd secant_matrix(const OperatorConfig& cfg, const GridFunction& u) {
    require_zero_trace(u, "secant_matrix");
    const detail::Kernel k = detail::make_kernel(u.mesh(), cfg.yf, cfg.s, cfg.kernel);
    const std::size_t M = k.M;
    const Eigen::Index n = static_cast<Eigen::Index>(M - 2);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    auto add = [&](std::size_t a, std::size_t b, double c) {
        const bool ia = a > 0 && a + 1 < M;
        const bool ib = b > 0 && b + 1 < M;
        const auto ra = static_cast<Eigen::Index>(a) - 1;
        const auto rb = static_cast<Eigen::Index>(b) - 1;
        if (ia) A(ra, ra) += c;
        if (ib) A(rb, rb) += c;
        if (ia && ib) {
            A(ra, rb) -= c;
            A(rb, ra) -= c;
        }
    };
    auto ratio = [&](double D) { return D == 0.0 ? cfg.yf.g_prime(0.0) : cfg.yf.g(D) / D; };
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t j = i + k.band + 1; j < M; ++j) {
            const std::size_t d = j - i;
            const double D = (u[i] - u[j]) * k.d_pow_s[d];
            add(i, j, 2.0 * k.w[i] * k.w[j] * ratio(D) * k.d_pow_s[d] * k.d_pow_1s[d]);
        }
    }
    for (std::size_t e = 0; e + 1 < M; ++e) {
        const double sigma = (u[e + 1] - u[e]) / k.h;
        const double c = sigma == 0.0 ? detail::band_flux_prime(k, 0.0) : detail::band_flux(k, sigma) / sigma;
        add(e, e + 1, c / k.h);
    }
    for (std::size_t i = 1; i + 1 < M; ++i) {
        const auto r = static_cast<Eigen::Index>(i) - 1;
        const double v = u[i];
        const double c = v == 0.0 ? detail::exterior_flux_prime(k, i, 0.0) : detail::exterior_flux(k, i, v) / v;
        A(r, r) += 2.0 * k.w[i] * c;
    }
    return A;
}

}  // namespace glap
