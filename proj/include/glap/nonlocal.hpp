#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "glap/orlicz.hpp"
#include "glap/young.hpp"

namespace glap {

/// Fractional g-Laplacian on (-1, 1) with zero exterior data.
struct OperatorConfig {
    /// Throws ConfigError unless 0 < s < 1, R_far > 1 and near_band >= 1.
    OperatorConfig(YoungFunction yf, double s, KernelOptions kernel = {});

    YoungFunction yf;
    double s;
    KernelOptions kernel;
};

/// Pointwise value \int g((u(x_i) - u(y)) / |x_i - y|^s) dy / |x_i - y|^{1+s}
/// at an interior node, for the piecewise-linear zero extension of u.
///
/// The band |z| < (near_band + 1/2) h uses the one-sided slopes of u at x_i
/// and is integrated in symmetric pairs z -> u(x_i +- z), which leaves
/// [g(sigma_L z^{1-s}) - g(sigma_R z^{1-s})] z^{-1-s}; a side of the band
/// stops at the boundary. The other nodes contribute node-centred midpoint
/// cells and the exterior an adaptive rule on [dist, R_far] plus the
/// closed-form tail.
double apply(const OperatorConfig& cfg, const GridFunction& u, std::size_t i);

/// apply at every interior node (boundary entries are left at 0).
std::vector<double> apply_all(const OperatorConfig& cfg, const GridFunction& u);

/// Discrete \int\int g(D_s u) (phi(x) - phi(y)) dx dy / |x - y|^{1+s}: the
/// directional derivative of modular_W at u along phi, same cells and band.
/// Both u and phi must vanish at the boundary nodes.
double weak_form(const OperatorConfig& cfg, const GridFunction& u, const GridFunction& phi);

/// r_i = weak_form(u, e_i) - rhs_i w_i on interior nodes; 0 on the boundary.
GridFunction residual(const OperatorConfig& cfg, const GridFunction& u, const GridFunction& rhs);

/// d r / d u over interior nodes; symmetric positive semidefinite.
Eigen::MatrixXd jacobian(const OperatorConfig& cfg, const GridFunction& u);

/// A(u) with residual(u, rhs) = A(u) u - rhs w on interior nodes; every
/// flux is written as (flux / difference) * difference.
Eigen::MatrixXd secant_matrix(const OperatorConfig& cfg, const GridFunction& u);

}  // namespace glap
