#include "glap/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "discretization.hpp"
#include "glap/error.hpp"

namespace glap {

Mesh::Mesh(std::size_t M) {
    if (M < 9) throw DomainError("mesh needs at least 9 nodes, got " + std::to_string(M));
    const double n = static_cast<double>(M - 1);
    h_ = 2.0 / n;
    x_.resize(M);
    w_.assign(M, h_);
    // Written so that x_{M-1-i} = -x_i exactly.
    for (std::size_t i = 0; i < M; ++i) {
        x_[i] = (2.0 * static_cast<double>(i) - n) / n;
    }
    w_.front() = w_.back() = 0.5 * h_;
}

MeshPtr make_mesh(std::size_t M) { return std::make_shared<const Mesh>(M); }

GridFunction::GridFunction(MeshPtr mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), v_(std::move(values)) {
    if (!mesh_) throw DomainError("grid function without mesh");
    if (v_.size() != mesh_->size()) {
        throw DomainError("grid function has " + std::to_string(v_.size()) + " values for " +
                          std::to_string(mesh_->size()) + " nodes");
    }
    for (double v : v_) {
        if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
    }
}

GridFunction GridFunction::zeros(MeshPtr mesh) {
    const std::size_t M = mesh->size();
    return GridFunction(std::move(mesh), std::vector<double>(M, 0.0));
}

GridFunction GridFunction::sample(MeshPtr mesh, const std::function<double(double)>& f) {
    std::vector<double> v(mesh->size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh->x(i));
    return GridFunction(std::move(mesh), std::move(v));
}

double GridFunction::operator()(double x) const {
    if (!(x >= -1.0 && x <= 1.0)) return 0.0;
    const double t = (x + 1.0) / mesh_->h();
    const std::size_t last = size() - 1;
    const std::size_t i = std::min(static_cast<std::size_t>(t), last - 1);
    const double lam = t - static_cast<double>(i);
    return (1.0 - lam) * v_[i] + lam * v_[i + 1];
}

bool GridFunction::vanishes_on_boundary() const noexcept {
    return v_.front() == 0.0 && v_.back() == 0.0;
}

double GridFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : v_) m = std::max(m, std::abs(v));
    return m;
}

GridFunction GridFunction::scaled(double a) const {
    std::vector<double> v(v_);
    for (double& x : v) x *= a;
    return GridFunction(mesh_, std::move(v));
}

GridFunction GridFunction::reflected() const {
    std::vector<double> v(v_.rbegin(), v_.rend());
    return GridFunction(mesh_, std::move(v));
}

double sup_distance(const GridFunction& u, const GridFunction& v) {
    if (u.size() != v.size()) throw DomainError("sup_distance: meshes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

double modular_LG(const GridFunction& u, const YoungFunction& yf) {
    const Mesh& mesh = u.mesh();
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += yf.G(u[i]) * mesh.w(i);
    return acc;
}

double luxemburg_root(const std::function<double(double)>& modular_at_scale) {
    // Illinois iteration on ln(modular) against ln(lambda).
    auto F = [&](double l) { return std::log(modular_at_scale(std::exp(l))); };
    double lo = std::log(1e-12);
    double hi = std::log(1e12);
    double flo = F(lo);
    double fhi = F(hi);
    if (!(flo > 0.0)) throw NumericError("Luxemburg norm below 1e-12");
    if (!(fhi < 0.0)) throw NumericError("Luxemburg norm above 1e12");
    int side = 0;
    for (int it = 0; it < 400; ++it) {
        double x = 0.5 * (lo + hi);
        if (std::isfinite(flo) && std::isfinite(fhi)) {
            const double sec = (lo * fhi - hi * flo) / (fhi - flo);
            if (sec > lo && sec < hi) x = sec;
        }
        const double fx = F(x);
        if (std::abs(std::expm1(fx)) <= 1e-10) return std::exp(x);
        if (fx > 0.0) {
            lo = x;
            flo = fx;
            if (side == 1) fhi *= 0.5;
            side = 1;
        } else {
            hi = x;
            fhi = fx;
            if (side == -1) flo *= 0.5;
            side = -1;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(lo))) break;
    }
    return std::exp(0.5 * (lo + hi));
}

double luxemburg_norm_LG(const GridFunction& u, const YoungFunction& yf) {
    if (u.sup_norm() == 0.0) return 0.0;
    return luxemburg_root([&](double lam) {
        const Mesh& mesh = u.mesh();
        double acc = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) acc += yf.G(u[i] / lam) * mesh.w(i);
        return acc;
    });
}

namespace detail {

Kernel make_kernel(const Mesh& mesh, const YoungFunction& yf, double s, const KernelOptions& opt) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order s must lie in (0,1)");
    if (opt.near_band < 1) throw ConfigError("near_band must be at least 1");
    if (!(opt.R_far > 1.0) || !std::isfinite(opt.R_far)) throw ConfigError("R_far must exceed 1");
    const std::size_t M = mesh.size();
    if (static_cast<std::size_t>(opt.near_band) + 1 >= M) {
        throw ConfigError("near_band must be smaller than the number of mesh cells");
    }
    Kernel k(yf);
    k.s = s;
    k.M = M;
    k.h = mesh.h();
    k.band = static_cast<std::size_t>(opt.near_band);
    k.w.assign(mesh.weights().begin(), mesh.weights().end());
    k.d_pow_s.assign(M, 0.0);
    k.d_pow_1s.assign(M, 0.0);
    k.d_inv.assign(M, 0.0);
    for (std::size_t j = 1; j < M; ++j) {
        const double d = static_cast<double>(j) * k.h;
        k.d_pow_s[j] = std::pow(d, -s);
        k.d_inv[j] = 1.0 / d;
        k.d_pow_1s[j] = k.d_pow_s[j] * k.d_inv[j];
    }
    const double rho = (static_cast<double>(k.band) + 0.5) * k.h;
    k.band_scale = std::pow(rho, 1.0 - s);
    if (opt.tail_mode == TailMode::zero) k.ext_sign = {1.0, 1.0, -1.0, -1.0};
    k.ext_pow_s.assign(M, {0.0, 0.0, 0.0, 0.0});
    k.tail_pow_s.assign(M, {0.0, 0.0});
    for (std::size_t i = 1; i + 1 < M; ++i) {
        const double dl = static_cast<double>(i) * k.h;
        const double dr = static_cast<double>(M - 1 - i) * k.h;
        const double tl = std::pow(opt.R_far - 1.0 + dl, -s);
        const double tr = std::pow(opt.R_far - 1.0 + dr, -s);
        k.ext_pow_s[i] = {std::pow(dl, -s), std::pow(dr, -s), tl, tr};
        k.tail_pow_s[i] = {tl, tr};
    }
    return k;
}

}  // namespace detail

ModularReport modular_W_report(const GridFunction& u, const YoungFunction& yf, double s,
                               const KernelOptions& opt) {
    if (!u.vanishes_on_boundary()) {
        throw DomainError("modular_W: grid function must vanish at the boundary nodes");
    }
    const detail::Kernel k = detail::make_kernel(u.mesh(), yf, s, opt);
    const std::size_t M = k.M;
    ModularReport r;
    for (std::size_t i = 0; i < M; ++i) {
        double row = 0.0;
        for (std::size_t j = i + k.band + 1; j < M; ++j) {
            const std::size_t d = j - i;
            row += k.w[j] * yf.G((u[i] - u[j]) * k.d_pow_s[d]) * k.d_inv[d];
        }
        r.far += 2.0 * k.w[i] * row;
    }
    for (std::size_t e = 0; e + 1 < M; ++e) {
        r.near += k.h * detail::band_energy(k, (u[e + 1] - u[e]) / k.h);
    }
    for (std::size_t i = 1; i + 1 < M; ++i) {
        if (u[i] == 0.0) continue;
        r.exterior += 2.0 * k.w[i] * detail::exterior_energy(k, i, u[i]);
        const double a = std::abs(u[i]);
        r.tail += 2.0 * k.w[i] / s *
                  (yf.G_log_moment(a * k.tail_pow_s[i][0]) + yf.G_log_moment(a * k.tail_pow_s[i][1]));
    }
    r.value = r.far + r.near + r.exterior;
    r.tail_warning = r.tail > 0.01 * r.value;
    return r;
}

double modular_W(const GridFunction& u, const YoungFunction& yf, double s, const KernelOptions& opt) {
    return modular_W_report(u, yf, s, opt).value;
}

double luxemburg_seminorm_W(const GridFunction& u, const YoungFunction& yf, double s,
                            const KernelOptions& opt) {
    if (!u.vanishes_on_boundary()) {
        throw DomainError("luxemburg_seminorm_W: grid function must vanish at the boundary nodes");
    }
    if (u.sup_norm() == 0.0) return 0.0;
    return luxemburg_root([&](double lam) { return modular_W(u.scaled(1.0 / lam), yf, s, opt); });
}

}  // namespace glap
