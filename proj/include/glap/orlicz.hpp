#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "glap/young.hpp"

namespace glap {

/// Uniform grid on (-1, 1) with M nodes, both endpoints included.
class Mesh {
public:
    explicit Mesh(std::size_t M);

    std::size_t size() const noexcept { return x_.size(); }
    double h() const noexcept { return h_; }
    double x(std::size_t i) const { return x_[i]; }
    double w(std::size_t i) const { return w_[i]; }
    std::span<const double> nodes() const noexcept { return x_; }
    /// Trapezoid weights; they sum to 2.
    std::span<const double> weights() const noexcept { return w_; }

    /// Index of the node mirrored through the origin.
    std::size_t mirror(std::size_t i) const noexcept { return size() - 1 - i; }

private:
    double h_;
    std::vector<double> x_;
    std::vector<double> w_;
};

using MeshPtr = std::shared_ptr<const Mesh>;

MeshPtr make_mesh(std::size_t M);

/// Nodal values on a mesh; piecewise linear in between and zero outside (-1, 1).
class GridFunction {
public:
    GridFunction(MeshPtr mesh, std::vector<double> values);

    static GridFunction zeros(MeshPtr mesh);
    static GridFunction sample(MeshPtr mesh, const std::function<double(double)>& f);

    const Mesh& mesh() const noexcept { return *mesh_; }
    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    std::size_t size() const noexcept { return v_.size(); }
    double operator[](std::size_t i) const { return v_[i]; }
    double& operator[](std::size_t i) { return v_[i]; }
    std::span<const double> values() const noexcept { return v_; }
    std::vector<double>& data() noexcept { return v_; }

    /// Piecewise-linear interpolant; 0 outside [-1, 1].
    double operator()(double x) const;

    bool vanishes_on_boundary() const noexcept;
    double sup_norm() const noexcept;
    GridFunction scaled(double a) const;
    /// u o (x -> -x).
    GridFunction reflected() const;

private:
    MeshPtr mesh_;
    std::vector<double> v_;
};

/// sup_i |u_i - v_i|; the meshes must have equal size.
double sup_distance(const GridFunction& u, const GridFunction& v);

enum class TailMode { analytic, zero };

/// Discretisation parameters of the singular kernel |x - y|^{-(1+s)}.
struct KernelOptions {
    /// Node pairs closer than (near_band + 1/2) h are handled through the
    /// element slope instead of the nodal difference quotient.
    int near_band = 1;
    /// Exterior truncation radius.
    double R_far = 100.0;
    /// analytic: the part beyond R_far is added in closed form.
    /// zero: it is dropped (and reported).
    TailMode tail_mode = TailMode::analytic;
};

double modular_LG(const GridFunction& u, const YoungFunction& yf);
double luxemburg_norm_LG(const GridFunction& u, const YoungFunction& yf);

struct ModularReport {
    double value = 0.0;     ///< far + near + exterior
    double far = 0.0;       ///< node pairs outside the near band
    double near = 0.0;      ///< slope-regularised band around the diagonal
    double exterior = 0.0;  ///< interactions with R \ (-1, 1), truncated per tail_mode
    double tail = 0.0;      ///< contribution of |y| > R_far (included only in analytic mode)
    bool tail_warning = false;  ///< tail > 1% of value
};

/// Gagliardo-type modular \int\int G(|u(x)-u(y)| / |x-y|^s) dx dy / |x-y| over
/// R x R of the zero extension of u. u must vanish at both boundary nodes.
ModularReport modular_W_report(const GridFunction& u, const YoungFunction& yf, double s,
                               const KernelOptions& opt = {});
double modular_W(const GridFunction& u, const YoungFunction& yf, double s,
                 const KernelOptions& opt = {});
double luxemburg_seminorm_W(const GridFunction& u, const YoungFunction& yf, double s,
                            const KernelOptions& opt = {});

/// inf{ lambda > 0 : modular(lambda) <= 1 } for a modular that is
/// nonincreasing in lambda, solved to |modular - 1| <= 1e-10 on [1e-12, 1e12].
double luxemburg_root(const std::function<double(double)>& modular_at_scale);

}  // namespace glap
