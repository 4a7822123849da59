#pragma once

// Thin adaptive-quadrature layer over Boost.Math's Gauss-Kronrod rule with
// explicit handling of algebraic endpoint singularities.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "glap/error.hpp"

namespace glap::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
    unsigned max_depth = 18;
};

[[noreturn]] void throw_nonconvergent(std::string_view what, double a, double b,
                                      double value, double error);

namespace detail {

// Boost 1.74 compares the error of the rule on [-1, 1] against a tolerance
// scaled to [a, b], so short intervals always recurse to full depth. The
// bisection is therefore done here, with the rule applied one panel at a time.
template <class F>
double gk15_adaptive(F& f, double a, double b, double abs_tol, double rel_tol, unsigned depth,
                     double& error, double& l1) {
    double err = 0.0;
    double mass = 0.0;
    const double est = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 0, rel_tol, &err, &mass);
    err *= 0.5 * std::abs(b - a);
    if (abs_tol < 0.0) abs_tol = rel_tol * std::abs(est);
    if (depth == 0 || !std::isfinite(est) || err <= std::max(rel_tol * std::abs(est), abs_tol)) {
        error += err;
        l1 += mass;
        return est;
    }
    const double mid = 0.5 * (a + b);
    return gk15_adaptive(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1, error, l1) +
           gk15_adaptive(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1, error, l1);
}

}  // namespace detail

/// Adaptive 15-point Gauss-Kronrod on a finite interval [a, b].
template <class F>
double integrate(F&& f, double a, double b, const Options& opt = {},
                 std::string_view what = "integral") {
    if (a == b) return 0.0;
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        detail::gk15_adaptive(f, a, b, -1.0, opt.rel_tol, opt.max_depth, error, l1);
    // Boost's estimate |K15 - G7| is pessimistic; allow one order of slack.
    const double budget = 10.0 * std::max(opt.rel_tol * l1, opt.abs_floor);
    if (!std::isfinite(value) || error > budget) {
        throw_nonconvergent(what, a, b, value, error);
    }
    return value;
}

/// Tanh-sinh rule on [a, b]; tolerates integrable endpoint singularities.
template <class F>
double integrate_endpoint(F&& f, double a, double b, const Options& opt = {},
                          std::string_view what = "integral") {
    if (a == b) return 0.0;
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    double error = 0.0;
    double l1 = 0.0;
    const double value = rule.integrate(f, a, b, opt.rel_tol, &error, &l1);
    const double budget = 10.0 * std::max(opt.rel_tol * l1, opt.abs_floor);
    if (!std::isfinite(value) || error > budget) {
        throw_nonconvergent(what, a, b, value, error);
    }
    return value;
}

/// Integral over [0, b] of an integrand behaving like x^beta at the origin,
/// beta > -1. The substitution x = b v^m with m = 1/(beta+1) maps the
/// leading endpoint behaviour to a constant one; lower-order corrections are
/// left to the tanh-sinh rule. Integer beta >= 0 is already smooth.
template <class F>
double integrate_power_endpoint(F&& f, double b, double beta, const Options& opt = {},
                                std::string_view what = "integral") {
    if (b == 0.0) return 0.0;
    if (!(beta > -1.0)) {
        throw NumericError(std::string(what) + ": endpoint exponent " + std::to_string(beta) +
                           " is not integrable");
    }
    if (beta >= 0.0 && beta == std::floor(beta)) return integrate(f, 0.0, b, opt, what);
    const double m = std::min(1.0 / (beta + 1.0), 50.0);
    auto g = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double vm1 = std::pow(v, m - 1.0);
        const double x = b * vm1 * v;
        if (x <= 0.0) return 0.0;
        return f(x) * m * b * vm1;
    };
    return integrate_endpoint(g, 0.0, 1.0, opt, what);
}

/// Integral over [a, b], 0 < a < b, after the substitution x = e^v. Suited to
/// power-law tails spanning several decades.
template <class F>
double integrate_log(F&& f, double a, double b, const Options& opt = {},
                     std::string_view what = "integral") {
    if (a == b) return 0.0;
    auto g = [&](double v) {
        const double x = std::exp(v);
        return f(x) * x;
    };
    return integrate(g, std::log(a), std::log(b), opt, what);
}

/// Integral over [0, b] of an integrand behaving like x^beta at the origin and
/// like a (possibly different) power at infinity: endpoint substitution on
/// [0, min(b, 1)] plus the log substitution on [1, b].
template <class F>
double integrate_from_origin(F&& f, double b, double beta, const Options& opt = {},
                             std::string_view what = "integral") {
    if (b <= 1.0) return integrate_power_endpoint(f, b, beta, opt, what);
    return integrate_power_endpoint(f, 1.0, beta, opt, what) + integrate_log(f, 1.0, b, opt, what);
}

}  // namespace glap::quad
