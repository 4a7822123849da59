#include "glap/young.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "glap/error.hpp"
#include "glap/quadrature.hpp"

namespace glap {
namespace {

constexpr double kBracketGuard = 1e300;

void require_finite(double t, const char* what) {
    if (!std::isfinite(t)) throw DomainError(std::string(what) + ": non-finite argument");
}

void require_nonneg(double t, const char* what) {
    require_finite(t, what);
    if (t < 0.0) throw DomainError(std::string(what) + ": negative argument " + std::to_string(t));
}

void require_exponents(double pm, double pp) {
    if (!std::isfinite(pm) || !std::isfinite(pp)) throw ConfigError("growth exponents must be finite");
    if (!(pm > 2.0)) throw ConfigError("p_minus > 2 required, got " + std::to_string(pm));
    if (pp < pm) throw ConfigError("p_plus must be >= p_minus");
}

// Root of an increasing f with f(0) = 0 at level y > 0. fp is f'.
template <class F, class Fp>
double invert_increasing(F&& f, Fp&& fp, double y, const char* what) {
    double lo = 0.0;
    double hi = 1.0;
    while (f(hi) < y) {
        lo = hi;
        hi *= 4.0;
        if (hi > kBracketGuard) {
            throw NumericError(std::string(what) + ": bracket exceeded 1e300 for level " +
                               std::to_string(y));
        }
    }
    if (lo == 0.0) {
        // Small levels: shrink the bracket too, Newton from far above is slow
        // for the superlinear functions inverted here.
        while (hi > 1.0 / kBracketGuard && f(0.25 * hi) >= y) hi *= 0.25;
        lo = 0.25 * hi;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
        const double r = f(x) - y;
        if (std::abs(r) <= 1e-14 * y) return x;
        if (r < 0.0) lo = x; else hi = x;
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
        const double d = fp(x);
        double next = (d > 0.0 && std::isfinite(d)) ? x - r / d : lo;
        // Newton is kept strictly inside the bracket; otherwise bisect.
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 1e-15 * x) return next;
        x = next;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
    require_exponents(p, p);
    YoungFunction yf;
    yf.family_ = Family::power;
    yf.params_ = {p, 0.0, 0.0};
    yf.p_minus_ = yf.p_plus_ = p;
    return yf;
}

YoungFunction YoungFunction::double_power(double p1, double p2) {
    require_exponents(std::min(p1, p2), std::max(p1, p2));
    YoungFunction yf;
    yf.family_ = Family::double_power;
    yf.params_ = {p1, p2, 0.0};
    yf.p_minus_ = std::min(p1, p2);
    yf.p_plus_ = std::max(p1, p2);
    return yf;
}

YoungFunction YoungFunction::log_type(double a, double b, double c) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
        throw ConfigError("log-type parameters must be finite");
    }
    if (!(a > 1.0)) throw ConfigError("log-type requires a > 1 so that p_minus = 1 + a > 2");
    if (!(b >= 1.0)) throw ConfigError("log-type requires b >= 1 so that g > 0 on (0, inf)");
    if (!(c > 0.0)) throw ConfigError("log-type requires c > 0");
    YoungFunction yf;
    yf.family_ = Family::log_type;
    yf.params_ = {a, b, c};
    yf.p_minus_ = 1.0 + a;
    yf.p_plus_ = 2.0 + a;
    return yf;
}

YoungFunction YoungFunction::custom(std::string name, ScalarMap g, ScalarMap g_prime,
                                    double p_minus, double p_plus, ScalarMap G) {
    require_exponents(p_minus, p_plus);
    if (!g || !g_prime) throw ConfigError("custom Young function needs g and g'");
    YoungFunction yf;
    yf.family_ = Family::custom;
    yf.p_minus_ = p_minus;
    yf.p_plus_ = p_plus;
    yf.name_ = std::move(name);
    yf.custom_g_ = std::move(g);
    yf.custom_g_prime_ = std::move(g_prime);
    yf.custom_G_ = std::move(G);
    return yf;
}

double YoungFunction::g(double t) const {
    const double a = std::abs(t);
    double v = 0.0;
    switch (family_) {
        case Family::power:
            v = std::pow(a, params_[0] - 1.0);
            break;
        case Family::double_power:
            v = std::pow(a, params_[0] - 1.0) + std::pow(a, params_[1] - 1.0);
            break;
        case Family::log_type:
            v = std::pow(a, params_[0]) * std::log(params_[1] + params_[2] * a);
            break;
        case Family::custom:
            v = custom_g_(a);
            break;
    }
    return t < 0.0 ? -v : v;
}

double YoungFunction::g_prime(double t) const {
    const double a = std::abs(t);
    switch (family_) {
        case Family::power:
            return (params_[0] - 1.0) * std::pow(a, params_[0] - 2.0);
        case Family::double_power:
            return (params_[0] - 1.0) * std::pow(a, params_[0] - 2.0) +
                   (params_[1] - 1.0) * std::pow(a, params_[1] - 2.0);
        case Family::log_type: {
            const auto [pa, pb, pc] = params_;
            return pa * std::pow(a, pa - 1.0) * std::log(pb + pc * a) +
                   pc * std::pow(a, pa) / (pb + pc * a);
        }
        case Family::custom:
            return custom_g_prime_(a);
    }
    return 0.0;
}

double YoungFunction::G(double t) const {
    const double a = std::abs(t);
    switch (family_) {
        case Family::power:
            return std::pow(a, params_[0]) / params_[0];
        case Family::double_power:
            return std::pow(a, params_[0]) / params_[0] + std::pow(a, params_[1]) / params_[1];
        case Family::custom:
            if (custom_G_) return custom_G_(a);
            break;
        case Family::log_type:
            break;
    }
    if (a == 0.0) return 0.0;
    return quad::integrate([this](double x) { return g(x); }, 0.0, a, {}, "G");
}

double YoungFunction::G_log_moment(double T) const {
    const double a = std::abs(T);
    if (a == 0.0) return 0.0;
    switch (family_) {
        case Family::power:
            return std::pow(a, params_[0]) / (params_[0] * params_[0]);
        case Family::double_power:
            return std::pow(a, params_[0]) / (params_[0] * params_[0]) +
                   std::pow(a, params_[1]) / (params_[1] * params_[1]);
        default:
            break;
    }
    // \int_0^T G(tau)/tau dtau = \int_0^T g(x) log(T/x) dx by Fubini.
    return quad::integrate([this, a](double x) { return x <= 0.0 ? 0.0 : g(x) * std::log(a / x); },
                           0.0, a, {}, "G log-moment");
}

double YoungFunction::origin_exponent() const {
    switch (family_) {
        case Family::power:
            return params_[0];
        case Family::double_power:
            return std::min(params_[0], params_[1]);
        case Family::log_type:
            return params_[1] > 1.0 ? 1.0 + params_[0] : 2.0 + params_[0];
        case Family::custom: {
            const double t = 1e-8;
            return t * g(t) / G(t);
        }
    }
    return p_minus_;
}

bool YoungFunction::has_closed_form_G() const noexcept {
    return family_ == Family::power || family_ == Family::double_power ||
           (family_ == Family::custom && static_cast<bool>(custom_G_));
}

std::string YoungFunction::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (family_) {
        case Family::power:
            os << "power(p=" << params_[0] << ")";
            break;
        case Family::double_power:
            os << "double-power(p1=" << params_[0] << ",p2=" << params_[1] << ")";
            break;
        case Family::log_type:
            os << "log-type(a=" << params_[0] << ",b=" << params_[1] << ",c=" << params_[2] << ")";
            break;
        case Family::custom:
            os << "custom(" << name_ << ")";
            break;
    }
    return os.str();
}

YoungFunction YoungFunction::with_exponents(double p_minus, double p_plus) const {
    require_exponents(p_minus, p_plus);
    YoungFunction copy = *this;
    copy.p_minus_ = p_minus;
    copy.p_plus_ = p_plus;
    return copy;
}

double eval_g(const YoungFunction& yf, double t) {
    require_finite(t, "eval_g");
    return yf.g(t);
}

double eval_G(const YoungFunction& yf, double t) {
    require_nonneg(t, "eval_G");
    return yf.G(t);
}

double invert_G(const YoungFunction& yf, double y) {
    require_nonneg(y, "invert_G");
    if (y == 0.0) return 0.0;
    if (yf.family() == Family::power) {
        const double p = yf.parameters()[0];
        return std::pow(p * y, 1.0 / p);
    }
    return invert_increasing([&](double t) { return yf.G(t); }, [&](double t) { return yf.g(t); },
                             y, "invert_G");
}

double conjugate_g(const YoungFunction& yf, double t) {
    require_nonneg(t, "conjugate_g");
    if (t == 0.0) return 0.0;
    if (yf.family() == Family::power) return std::pow(t, 1.0 / (yf.parameters()[0] - 1.0));
    return invert_increasing([&](double x) { return yf.g(x); },
                             [&](double x) { return yf.g_prime(x); }, t, "conjugate_g");
}

double eval_Gbar(const YoungFunction& yf, double t) {
    require_nonneg(t, "eval_Gbar");
    if (t == 0.0) return 0.0;
    // conjugate_g behaves like tau^{1/(p0-1)} at the origin.
    const double beta = 1.0 / (yf.origin_exponent() - 1.0);
    return quad::integrate_from_origin([&](double x) { return conjugate_g(yf, x); }, t, beta, {}, "Gbar");
}

double sobolev_conjugate_inv(const YoungFunction& yf, double s, int dim, double t) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("fractional order s must lie in (0,1)");
    if (dim < 1) throw ConfigError("dimension N must be positive");
    require_nonneg(t, "sobolev_conjugate_inv");
    const double p0 = yf.origin_exponent();
    const double N = static_cast<double>(dim);
    if (!(1.0 / p0 > s / N)) {
        std::ostringstream os;
        os << "Sobolev conjugate integral diverges at the origin: need 1/p0 > s/N, got p0 = " << p0
           << ", s = " << s << ", N = " << dim;
        throw ConfigError(os.str());
    }
    if (t == 0.0) return 0.0;
    const double kernel_exp = -(N + s) / N;
    const double beta = 1.0 / p0 + kernel_exp;
    return quad::integrate_from_origin(
        [&](double x) {
            if (x <= 0.0) return 0.0;
            // split the kernel power so neither factor overflows for tiny x
            const double half = std::pow(x, 0.5 * kernel_exp);
            return (invert_G(yf, x) * half) * half;
        },
        t, beta, {},
        "Sobolev conjugate");
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw DomainError("log_grid needs 0 < lo < hi and n >= 2");
    std::vector<double> out(n);
    const double a = std::log(lo);
    const double step = (std::log(hi) - a) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a + step * static_cast<double>(i));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_growth_grid() { return log_grid(1e-3, 1e3, 512); }

GrowthBounds estimate_growth_bounds(const YoungFunction& yf, std::span<const double> grid) {
    if (grid.empty()) throw DomainError("estimate_growth_bounds: empty grid");
    const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
    if (!(*mn > 0.0) || *mx / *mn < 1e6 * (1.0 - 1e-9)) {
        throw DomainError("estimate_growth_bounds: grid must be positive and span six decades");
    }
    GrowthBounds b;
    b.p_minus_hat = b.ratio_min = std::numeric_limits<double>::infinity();
    b.p_plus_hat = b.ratio_max = -std::numeric_limits<double>::infinity();
    const double lo = yf.p_minus() - 1e-6;
    const double hi = yf.p_plus() + 1e-6;
    std::vector<double> bad;
    for (double t : grid) {
        const double gt = yf.g(t);
        const double e = t * yf.g_prime(t) / gt + 1.0;
        const double ratio = t * gt / yf.G(t);
        b.p_minus_hat = std::min(b.p_minus_hat, e);
        b.p_plus_hat = std::max(b.p_plus_hat, e);
        b.ratio_min = std::min(b.ratio_min, ratio);
        b.ratio_max = std::max(b.ratio_max, ratio);
        if (!(e >= lo && e <= hi && ratio >= lo && ratio <= hi)) bad.push_back(t);
    }
    if (!bad.empty()) {
        std::ostringstream os;
        os.precision(6);
        os << yf.describe() << ": growth exponents leave declared [" << yf.p_minus() << ", "
           << yf.p_plus() << "] (observed [" << b.p_minus_hat << ", " << b.p_plus_hat
           << "]) at t =";
        for (std::size_t k = 0; k < std::min<std::size_t>(bad.size(), 8); ++k) os << ' ' << bad[k];
        if (bad.size() > 8) os << " ... (" << bad.size() << " points)";
        throw InvariantError(os.str());
    }
    return b;
}

PhiWeight::PhiWeight(YoungFunction base, double q_star, std::optional<double> r)
    : base_(std::move(base)), q_star_(q_star), r_(0.0), g1_(0.0) {
    if (!std::isfinite(q_star) || !(q_star > 1.0)) throw ConfigError("q_star must be > 1");
    r_ = r.value_or(base_.p_minus() / (base_.p_minus() + q_star - 1.0));
    if (!(r_ > 0.0 && r_ <= 1.0)) throw ConfigError("Phi exponent r must lie in (0,1]");
    if (!(r_ * q_star_ < base_.p_minus())) {
        std::ostringstream os;
        os << "condition r*q_star < p_minus violated: r*q_star = " << r_ * q_star_
           << ", p_minus = " << base_.p_minus();
        throw ConfigError(os.str());
    }
    g1_ = base_.G(1.0);
}

double phi_prime(const PhiWeight& w, double t) {
    require_nonneg(t, "phi_prime");
    return invert_G(w.base(), w.G_at_one() * std::pow(t, w.q_star() - 1.0));
}

double phi_increment(const PhiWeight& w, double from, double to) {
    require_nonneg(from, "phi_increment");
    require_nonneg(to, "phi_increment");
    if (from == to) return 0.0;
    if (from > to) return -phi_increment(w, to, from);
    auto integrand = [&](double x) { return phi_prime(w, x); };
    if (from == 0.0) {
        const double beta = (w.q_star() - 1.0) / w.base().origin_exponent();
        return quad::integrate_from_origin(integrand, to, beta, {}, "Phi");
    }
    if (to / from > 10.0) return quad::integrate_log(integrand, from, to, {}, "Phi");
    return quad::integrate(integrand, from, to, {}, "Phi");
}

double phi(const PhiWeight& w, double t) { return phi_increment(w, 0.0, t); }

Submultiplicativity submultiplicativity_constant(const YoungFunction& yf,
                                                 std::span<const double> grid) {
    if (grid.empty()) throw DomainError("submultiplicativity_constant: empty grid");
    const auto [mn, mx] = std::minmax_element(grid.begin(), grid.end());
    if (!(*mn > 0.0) || *mx / *mn < 1e4 * (1.0 - 1e-9)) {
        throw DomainError("submultiplicativity_constant: grid must be positive and span four decades");
    }
    Submultiplicativity out;
    out.constant = std::numeric_limits<double>::infinity();
    for (double t1 : grid) {
        const double g1 = yf.g(t1);
        for (double t2 : grid) {
            const double ratio = g1 * yf.g(t2) / yf.g(t1 * t2);
            if (ratio < out.constant) {
                out.constant = ratio;
                out.t1 = t1;
                out.t2 = t2;
            }
        }
    }
    out.accepted = out.constant > 1e-12;
    return out;
}

}  // namespace glap
