#pragma once

// Shared node-pair discretisation of the kernel |x - y|^{-(1+s)} on the
// uniform mesh. The discrete modular is
//
//   W(u) = sum_{|i-j| > B} w_i w_j G(|u_i - u_j| / d_ij^s) / d_ij
//        + sum_e h Lambda(sigma_e)
//        + sum_i 2 w_i E_i(u_i),
//
// with sigma_e the slope on element e, Lambda(sigma) the band integral
// \int_{|z| < rho} G(|sigma| |z|^{1-s}) dz / |z| for rho = (B + 1/2) h, and
// E_i(v) = \int_{|y| > 1} G(|v| / |x_i - y|^s) dy / |x_i - y|. Both reduce to
// the moment H(T) = \int_0^T G(t) dt / t:
//
//   Lambda(sigma) = 2 / (1 - s) H(|sigma| rho^{1-s}),
//   E_i(v)        = 1 / s sum_{d in {1 + x_i, 1 - x_i}} H(|v| d^{-s}).
//
// The weak form and the nodal residual are the exact gradient of W, so
// coercivity and monotonicity carry over from G to the discrete system.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "glap/orlicz.hpp"
#include "glap/young.hpp"

namespace glap::detail {

struct Kernel {
    explicit Kernel(YoungFunction f) : yf(std::move(f)) {}

    YoungFunction yf;
    double s = 0.0;
    std::size_t M = 0;
    double h = 0.0;
    std::size_t band = 1;
    std::vector<double> w;
    std::vector<double> d_pow_s;    ///< (k h)^{-s}, indexed by k = |i - j|
    std::vector<double> d_pow_1s;   ///< (k h)^{-(1+s)}
    std::vector<double> d_inv;      ///< (k h)^{-1}
    double band_scale = 0.0;        ///< rho^{1-s}
    /// Per node, the signed exterior distances raised to -s: the two
    /// boundary distances with weight +1 and, in zero-tail mode, the two
    /// truncation distances with weight -1.
    std::vector<std::array<double, 4>> ext_pow_s;
    std::array<double, 4> ext_sign{1.0, 1.0, 0.0, 0.0};
    std::vector<std::array<double, 2>> tail_pow_s;  ///< (R_far -+ x_i)^{-s}
};

Kernel make_kernel(const Mesh& mesh, const YoungFunction& yf, double s, const KernelOptions& opt);

inline double band_energy(const Kernel& k, double sigma) {
    if (sigma == 0.0) return 0.0;
    return 2.0 / (1.0 - k.s) * k.yf.G_log_moment(std::abs(sigma) * k.band_scale);
}

/// Lambda'(sigma), odd.
inline double band_flux(const Kernel& k, double sigma) {
    if (sigma == 0.0) return 0.0;
    return 2.0 / (1.0 - k.s) * k.yf.G(std::abs(sigma) * k.band_scale) / sigma;
}

/// Lambda''(sigma), even; 0 at sigma = 0 since G(t) = o(t^2).
inline double band_flux_prime(const Kernel& k, double sigma) {
    const double a = std::abs(sigma);
    if (a == 0.0) return 0.0;
    const double c = k.band_scale;
    return 2.0 / (1.0 - k.s) * (k.yf.g(a * c) * c * a - k.yf.G(a * c)) / (a * a);
}

/// E_i(v) with the truncation policy of the kernel.
inline double exterior_energy(const Kernel& k, std::size_t i, double v) {
    if (v == 0.0) return 0.0;
    const double a = std::abs(v);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (k.ext_sign[j] != 0.0) acc += k.ext_sign[j] * k.yf.G_log_moment(a * k.ext_pow_s[i][j]);
    }
    return acc / k.s;
}

/// dE_i/dv, odd in v.
inline double exterior_flux(const Kernel& k, std::size_t i, double v) {
    if (v == 0.0) return 0.0;
    const double a = std::abs(v);
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (k.ext_sign[j] != 0.0) acc += k.ext_sign[j] * k.yf.G(a * k.ext_pow_s[i][j]);
    }
    return acc / (k.s * v);
}

/// d^2E_i/dv^2, even in v.
inline double exterior_flux_prime(const Kernel& k, std::size_t i, double v) {
    const double a = std::abs(v);
    if (a == 0.0) return 0.0;
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) {
        if (k.ext_sign[j] == 0.0) continue;
        const double c = k.ext_pow_s[i][j];
        acc += k.ext_sign[j] * (k.yf.g(a * c) * c * a - k.yf.G(a * c));
    }
    return acc / (k.s * a * a);
}

}  // namespace glap::detail
