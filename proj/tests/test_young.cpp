#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "glap/error.hpp"
#include "glap/young.hpp"
#include "oracles.hpp"

using namespace glap;
using doctest::Approx;

namespace {

const YoungFunction P4 = YoungFunction::power(4);
const YoungFunction DP = YoungFunction::double_power(3, 4);
const YoungFunction LT = YoungFunction::log_type(2, 2, 1);

}  // namespace

TEST_CASE("g on the three families") {
    CHECK(eval_g(P4, 2.0) == 8.0);
    CHECK(eval_g(P4, 0.0) == 0.0);
    CHECK(eval_g(DP, 0.0) == 0.0);
    CHECK(eval_g(LT, 0.0) == 0.0);
    CHECK(eval_g(LT, 1.0) == Approx(std::log(3.0)).epsilon(1e-15));
    // odd extension for the hot-path member
    CHECK(P4.g(-2.0) == -8.0);
    CHECK(eval_g(P4, -2.0) == -8.0);
    CHECK_THROWS_AS(eval_G(P4, -1.0), DomainError);
    CHECK_THROWS_AS(eval_g(P4, std::numeric_limits<double>::quiet_NaN()), DomainError);
    CHECK_THROWS_AS(eval_g(P4, std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("g is nondecreasing") {
    for (const auto& yf : {P4, DP, LT}) {
        double prev = 0.0;
        for (double t : log_grid(1e-3, 1e3, 200)) {
            const double v = eval_g(yf, t);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("G closed forms and quadrature") {
    CHECK(eval_G(P4, 2.0) == Approx(4.0).epsilon(1e-15));
    CHECK(eval_G(DP, 1.0) == Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(eval_G(P4, 0.0) == 0.0);
    CHECK(eval_G(LT, 0.0) == 0.0);
    for (double t : {1e-6, 1e-3, 0.5, 1.0, 7.0, 300.0, 1e4}) {
        const double ref = oracle::G_log_type_a2(2.0, 1.0, t);
        CHECK(eval_G(LT, t) == Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("G log-moment against direct quadrature of G(tau)/tau") {
    for (const auto& yf : {P4, DP, LT}) {
        for (double T : {0.3, 1.0, 5.0}) {
            using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
            const double ref = GK::integrate([&](double t) { return t > 0 ? yf.G(t) / t : 0.0; }, 0.0, T, 15, 1e-13);
            CHECK(yf.G_log_moment(T) == Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("invert_G") {
    CHECK(invert_G(P4, 4.0) == Approx(2.0).epsilon(1e-12));
    CHECK(invert_G(P4, 0.0) == 0.0);
    CHECK(invert_G(DP, 7.0 / 12.0) == Approx(1.0).epsilon(1e-12));
    for (const auto& yf : {P4, DP, LT}) {
        for (double y : {1e-40, 1e-8, 0.3, 1.0, 42.0, 1e9}) {
            const double t = invert_G(yf, y);
            CHECK(std::abs(yf.G(t) - y) <= 1e-10 * std::max(1.0, y));
        }
    }
    CHECK_THROWS_AS(invert_G(DP, -1.0), DomainError);
}

TEST_CASE("conjugate_g") {
    const YoungFunction P3 = YoungFunction::power(3);
    CHECK(conjugate_g(P3, 4.0) == Approx(2.0).epsilon(1e-14));
    CHECK(conjugate_g(P3, 0.0) == 0.0);
    CHECK(conjugate_g(LT, 1.0986) == Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(conjugate_g(LT, std::log(3.0)) - 1.0) <= 1e-8);
    double prev = 0.0;
    for (double t : log_grid(1e-3, 1e3, 50)) {
        const double v = conjugate_g(DP, t);
        CHECK(v >= prev);
        CHECK(DP.g(v) == Approx(t).epsilon(1e-10));
        prev = v;
    }
}

TEST_CASE("complementary function") {
    const YoungFunction P3 = YoungFunction::power(3);
    CHECK(eval_Gbar(P3, 1.0) == Approx(2.0 / 3.0).epsilon(1e-10));
    CHECK(eval_Gbar(P3, 0.0) == 0.0);
    // closed form t^{p'} / p' of the power conjugate
    for (double t : {0.01, 0.7, 3.0, 250.0}) {
        CHECK(eval_Gbar(P3, t) == Approx(std::pow(t, 1.5) / 1.5).epsilon(1e-9));
    }
    for (const auto& yf : {P4, DP, LT}) {
        const double G1 = yf.G(1.0);
        const double Gb = eval_Gbar(yf, yf.g(1.0));
        CHECK(Gb >= (yf.p_minus() - 1.0) * G1 * (1.0 - 1e-8));
        CHECK(Gb <= (yf.p_plus() - 1.0) * G1 * (1.0 + 1e-8));
    }
}

TEST_CASE("inverse Sobolev conjugate") {
    const YoungFunction P3 = YoungFunction::power(3);
    CHECK(sobolev_conjugate_inv(P3, 0.2, 1, 0.0) == 0.0);
    const double ref = std::cbrt(3.0) / (1.0 / 3.0 - 0.2);
    CHECK(sobolev_conjugate_inv(P3, 0.2, 1, 1.0) == Approx(ref).epsilon(1e-9));
    CHECK(sobolev_conjugate_inv(P3, 0.2, 1, 8.0) > sobolev_conjugate_inv(P3, 0.2, 1, 1.0));
    CHECK_THROWS_AS(sobolev_conjugate_inv(P3, 0.5, 1, 1.0), ConfigError);
}

TEST_CASE("growth exponents") {
    const auto grid = default_growth_grid();
    CHECK(grid.size() == 512);
    const GrowthBounds bp = estimate_growth_bounds(P4, grid);
    CHECK(bp.p_minus_hat == Approx(4.0).epsilon(1e-12));
    CHECK(bp.p_plus_hat == Approx(4.0).epsilon(1e-12));

    // inf/sup of (3 + 4t)/(1 + t) sit at the grid ends; a 16-decade grid
    // brings them within 1e-6 of (3, 4).
    const auto wide = log_grid(1e-8, 1e8, 512);
    const GrowthBounds bd = estimate_growth_bounds(DP, wide);
    CHECK(std::abs(bd.p_minus_hat - 3.0) <= 1e-6);
    CHECK(std::abs(bd.p_plus_hat - 4.0) <= 1e-6);
    CHECK(bd.p_minus_hat == Approx(3.0 + 1e-8 / (1.0 + 1e-8)).epsilon(1e-12));

    const GrowthBounds bl = estimate_growth_bounds(LT, grid);
    CHECK(bl.p_minus_hat >= 3.0);
    CHECK(bl.p_plus_hat <= 4.0);
    CHECK(bl.ratio_min >= 3.0);
    CHECK(bl.ratio_max <= 4.0);

    const YoungFunction wrong = P4.with_exponents(5.0, 5.0);
    try {
        estimate_growth_bounds(wrong, grid);
        FAIL("expected an invariant failure");
    } catch (const InvariantError& e) {
        CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
    CHECK_THROWS_AS(estimate_growth_bounds(P4, log_grid(1.0, 1e3, 50)), DomainError);
}

TEST_CASE("family parameters are validated") {
    CHECK_THROWS_AS(YoungFunction::power(2.0), ConfigError);
    CHECK_THROWS_AS(YoungFunction::double_power(2.0, 4.0), ConfigError);
    CHECK_THROWS_AS(YoungFunction::log_type(1.0, 2.0, 1.0), ConfigError);
    CHECK_THROWS_AS(YoungFunction::log_type(2.0, 0.5, 1.0), ConfigError);
    CHECK_THROWS_AS(P4.with_exponents(4.0, 3.0), ConfigError);
}

TEST_CASE("custom family without closed-form G") {
    const YoungFunction cu = YoungFunction::custom(
        "cubic", [](double t) { return t * t * t; }, [](double t) { return 3.0 * t * t; }, 4.0, 4.0);
    CHECK_FALSE(cu.has_closed_form_G());
    CHECK(cu.G(2.0) == Approx(4.0).epsilon(1e-12));
    CHECK(cu.origin_exponent() == Approx(4.0).epsilon(1e-6));
}

TEST_CASE("boundary weight Phi") {
    const PhiWeight w(P4, 2.0);
    CHECK(w.r() == Approx(0.8));
    CHECK(phi(w, 0.0) == 0.0);
    CHECK(phi(w, 1.0) == Approx(0.8).epsilon(1e-10));
    for (double t : {0.01, 2.0, 50.0}) {
        CHECK(phi(w, t) == Approx(0.8 * std::pow(t, 1.25)).epsilon(1e-10));
        CHECK(phi_prime(w, t) == Approx(std::pow(t, 0.25)).epsilon(1e-12));
    }
    CHECK(phi_increment(w, 3.0, 3.001) == Approx(0.8 * (std::pow(3.001, 1.25) - std::pow(3.0, 1.25))).epsilon(1e-8));

    // q* -> 1+: integrand tends to G^{-1}(G(1)) = 1
    const PhiWeight flat(DP, 1.0 + 1e-9);
    CHECK(phi(flat, 3.0) == Approx(3.0).epsilon(1e-7));

    // convex and increasing for every family
    for (const auto& yf : {P4, DP, LT}) {
        const PhiWeight v(yf, 2.0);
        const auto ts = log_grid(1e-2, 1e2, 40);
        for (std::size_t k = 1; k + 1 < ts.size(); ++k) {
            const double a = phi(v, ts[k - 1]), b = phi(v, ts[k]), c = phi(v, ts[k + 1]);
            CHECK(b > a);
            const double slope_l = (b - a) / (ts[k] - ts[k - 1]);
            const double slope_r = (c - b) / (ts[k + 1] - ts[k]);
            CHECK(slope_r > slope_l);
        }
    }
}

TEST_CASE("Phi parameter checks") {
    CHECK_THROWS_AS(PhiWeight(P4, 1.0), ConfigError);
    CHECK_THROWS_AS(PhiWeight(P4, 2.0, 1.5), ConfigError);
    try {
        PhiWeight(P4, 4.0, 1.0);
        FAIL("expected a configuration error");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("r*q_star < p_minus") != std::string::npos);
    }
}

TEST_CASE("submultiplicativity") {
    const auto grid = log_grid(1e-2, 1e2, 41);
    const Submultiplicativity sp = submultiplicativity_constant(P4, grid);
    CHECK(sp.constant == Approx(1.0).epsilon(1e-12));
    CHECK(sp.accepted);

    // g = t^2 + t^3: the ratio (t1^2 + t1^3)(t2^2 + t2^3) / (t1^2 t2^2 + t1^3 t2^3)
    // in closed form, minimised over the same grid.
    double ref = std::numeric_limits<double>::infinity();
    for (double a : grid) {
        for (double b : grid) {
            ref = std::min(ref, (1.0 + a) * (1.0 + b) / (1.0 + a * b));
        }
    }
    const Submultiplicativity sd = submultiplicativity_constant(DP, grid);
    CHECK(sd.constant == Approx(ref).epsilon(1e-12));
    CHECK(sd.constant >= 1.0);

    const Submultiplicativity sl = submultiplicativity_constant(YoungFunction::log_type(2, 1, 1), grid);
    CHECK(sl.constant > 0.0);
    CHECK(sl.accepted == (sl.constant > 1e-12));
    CHECK_THROWS_AS(submultiplicativity_constant(P4, log_grid(1.0, 10.0, 5)), DomainError);
}
