#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace glap {

enum class Family { power, double_power, log_type, custom };

/// An N-function G(t) = \int_0^t g with its derivative g and g'.
///
/// The member evaluators are the signed, unchecked hot-path versions: g is
/// extended to the whole line as an odd function, G and g' as even ones. The
/// free functions below (eval_g, eval_G, ...) are the checked entry points.
///
/// Every instance carries declared growth exponents p_minus <= p_plus with
///   p_minus - 1 <= t g'(t) / g(t) <= p_plus - 1,
/// and p_minus > 2 is enforced for all families.
class YoungFunction {
public:
    using ScalarMap = std::function<double(double)>;

    /// G(t) = t^p / p.
    static YoungFunction power(double p);
    /// G(t) = t^p1 / p1 + t^p2 / p2.
    static YoungFunction double_power(double p1, double p2);
    /// g(t) = t^a log(b + c t), with exponents (1 + a, 2 + a). Requires b >= 1
    /// so that g stays positive on (0, inf).
    static YoungFunction log_type(double a, double b, double c);
    /// User-supplied g and g' on t >= 0. G is integrated numerically unless
    /// a closed form is given.
    static YoungFunction custom(std::string name, ScalarMap g, ScalarMap g_prime,
                                double p_minus, double p_plus, ScalarMap G = {});

    double g(double t) const;
    double g_prime(double t) const;
    double G(double t) const;
    /// \int_0^T G(tau) / tau dtau. Both the slope-band and the exterior parts
    /// of the fractional modular reduce to this one-dimensional moment.
    double G_log_moment(double T) const;

    double p_minus() const noexcept { return p_minus_; }
    double p_plus() const noexcept { return p_plus_; }
    /// lim_{t -> 0+} t g(t) / G(t): the power behaviour of G at the origin.
    double origin_exponent() const;

    Family family() const noexcept { return family_; }
    std::span<const double> parameters() const noexcept { return params_; }
    bool has_closed_form_G() const noexcept;
    std::string describe() const;

    /// Same function, different declared exponents. Only p_minus > 2 and
    /// p_minus <= p_plus are enforced; whether the declaration is true is
    /// what estimate_growth_bounds and the lemma checks find out.
    YoungFunction with_exponents(double p_minus, double p_plus) const;

private:
    YoungFunction() = default;

    Family family_ = Family::power;
    std::array<double, 3> params_{};
    double p_minus_ = 0.0;
    double p_plus_ = 0.0;
    std::string name_;
    ScalarMap custom_g_;
    ScalarMap custom_g_prime_;
    ScalarMap custom_G_;
};

double eval_g(const YoungFunction& yf, double t);
double eval_G(const YoungFunction& yf, double t);

/// The t >= 0 with G(t) = y, by bracketing on [0, hi] with hi growing by a
/// factor 4, refined with Newton steps that are kept inside the bracket.
double invert_G(const YoungFunction& yf, double y);

/// Generalised inverse sup{ tau : g(tau) <= t }.
double conjugate_g(const YoungFunction& yf, double t);

/// Complementary function \int_0^t conjugate_g.
double eval_Gbar(const YoungFunction& yf, double t);

/// Inverse of the Sobolev conjugate, \int_0^t G^{-1}(tau) tau^{-(N+s)/N} dtau.
/// Throws ConfigError when the integral diverges at the origin.
double sobolev_conjugate_inv(const YoungFunction& yf, double s, int dim, double t);

/// n points log-spaced on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t n);

/// The grid used for exponent verification: 512 points over [1e-3, 1e3].
std::vector<double> default_growth_grid();

struct GrowthBounds {
    double p_minus_hat = 0.0;  ///< inf of t g'/g + 1
    double p_plus_hat = 0.0;   ///< sup of t g'/g + 1
    double ratio_min = 0.0;    ///< inf of t g / G
    double ratio_max = 0.0;    ///< sup of t g / G
};

/// Empirical growth exponents over a log grid spanning at least six decades.
/// Throws InvariantError naming the offending t when either ratio leaves the
/// declared [p_minus, p_plus] by more than 1e-6.
GrowthBounds estimate_growth_bounds(const YoungFunction& yf, std::span<const double> grid);

/// Boundary weight Phi(t) = \int_0^t G^{-1}(G(1) tau^{q*-1}) dtau.
class PhiWeight {
public:
    /// r defaults to p_minus / (p_minus + q* - 1). Throws ConfigError unless
    /// q* > 1, 0 < r <= 1 and r q* < p_minus.
    PhiWeight(YoungFunction base, double q_star, std::optional<double> r = std::nullopt);

    const YoungFunction& base() const noexcept { return base_; }
    double q_star() const noexcept { return q_star_; }
    double r() const noexcept { return r_; }
    double G_at_one() const noexcept { return g1_; }

private:
    YoungFunction base_;
    double q_star_;
    double r_;
    double g1_;
};

double phi(const PhiWeight& w, double t);
double phi_prime(const PhiWeight& w, double t);
/// Phi(to) - Phi(from) as a single integral (no cancellation for close points).
double phi_increment(const PhiWeight& w, double from, double to);

struct Submultiplicativity {
    double constant = 0.0;  ///< inf of g(t1) g(t2) / g(t1 t2) over the grid
    double t1 = 0.0;        ///< arg inf
    double t2 = 0.0;
    bool accepted = false;  ///< constant > 1e-12
};

/// Grid infimum over the product grid x grid, which must span four decades.
Submultiplicativity submultiplicativity_constant(const YoungFunction& yf,
                                                 std::span<const double> grid);

}  // namespace glap
