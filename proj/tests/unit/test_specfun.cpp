#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles/frozen_values.hpp"
#include "rissec/errors.hpp"
#include "rissec/specfun.hpp"

using namespace rissec;
using namespace rissec::specfun;

namespace {

MeijerGSpec exp_spec() { return {1, 0, 0, 1, {}, {0.0}}; }
MeijerGSpec binom_spec(double a) { return {1, 1, 1, 1, {1 - a}, {0.0}}; }

// H^{1,0}_{0,1}(x | ; (0,1)) = e^{-x}, H^{1,1}_{1,1}(x | (1-a,1); (0,1)) = Γ(a)(1+x)^{-a}
HVariable exp_var() { return {1, 0, 0, 1, {}, {{0.0, 1.0}}}; }
HVariable binom_var(double a) { return {1, 1, 1, 1, {{1 - a, 1.0}}, {{0.0, 1.0}}}; }

}  // namespace

TEST_CASE("log gamma: exact points") {
    CHECK(std::abs(log_gamma_complex(1.0)) < 1e-15);
    CHECK(log_gamma_complex(0.5).real() == doctest::Approx(std::log(std::sqrt(std::numbers::pi))).epsilon(1e-14));
    CHECK(std::abs(log_gamma_complex(2.0)) < 1e-15);
}

TEST_CASE("log gamma: arbitrary precision reference") {
    for (auto& p : oracle::lgamma_points) {
        cplx v = log_gamma_complex({p[0], p[1]});
        double scale = std::max(1.0, std::abs(cplx(p[2], p[3])));
        INFO("z = " << p[0] << " + " << p[1] << "i");
        CHECK(std::abs(v - cplx(p[2], p[3])) < 1e-13 * scale);
    }
}

TEST_CASE("log gamma: real axis and recurrence") {
    for (double x : {0.01, 0.3, 1.7, 4.5, 17.25, 150.0}) {
        CHECK(log_gamma_complex(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
        CHECK(log_gamma_complex(x).imag() == 0.0);
    }
    // ln Γ(z+1) = ln Γ(z) + ln z holds exactly on the principal branch off the negative axis
    for (cplx z : {cplx(0.3, 2.0), cplx(5.0, -11.0), cplx(1e-2, 40.0)}) {
        cplx lhs = log_gamma_complex(z + 1.0), rhs = log_gamma_complex(z) + std::log(z);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    }
    // conjugate symmetry
    cplx z(-2.3, 0.7);
    CHECK(std::abs(log_gamma_complex(std::conj(z)) - std::conj(log_gamma_complex(z))) < 1e-13);
}

TEST_CASE("log gamma: poles are rejected") {
    CHECK_THROWS_AS(log_gamma_complex(0.0), DomainError);
    CHECK_THROWS_AS(log_gamma_complex(-3.0), DomainError);
    CHECK_NOTHROW(log_gamma_complex({-3.0, 1e-6}));
}

TEST_CASE("meijer g: elementary reductions") {
    CHECK(meijer_g(exp_spec(), 1.0).value == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
    CHECK(meijer_g(binom_spec(2), 1.0).value == doctest::Approx(0.25).epsilon(1e-9));
    for (double x : {1e-3, 0.05, 3.0, 70.0, 1e3}) {
        auto e = meijer_g(exp_spec(), x);
        CHECK(std::abs(e.mantissa * std::exp(e.log_scale + x) - 1) < 1e-6);
        double a = 2.7;
        CHECK(meijer_g(binom_spec(a), x).value ==
              doctest::Approx(std::tgamma(a) * std::pow(1 + x, -a)).epsilon(1e-6));
    }
}

TEST_CASE("meijer g: arbitrary precision reference") {
    for (auto& c : oracle::meijer_cases) {
        MeijerGSpec s{c.m, c.n, c.p, c.q, {c.a, c.a + c.p}, {c.b, c.b + c.q}};
        auto e = meijer_g(s, c.x);
        INFO("G^{" << c.m << "," << c.n << "}_{" << c.p << "," << c.q << "} at " << c.x);
        CHECK(e.value == doctest::Approx(c.value).epsilon(1e-6));
        CHECK(e.error <= 1e-6 * std::abs(e.value));
    }
}

TEST_CASE("meijer g: contour shift stays within the error estimate") {
    MeijerGSpec s{3, 1, 1, 3, {-1.5}, {2.0, 3.0, 3.5}};
    auto mb = compile(s, 0.7);
    auto c0 = place_contour(mb, Placement::center);
    auto base = integrate(mb, {c0});
    for (double shift : {-0.1, 0.1}) {
        ContourSpec cs;
        cs.abscissa = {c0[0] + shift};
        auto e = integrate(mb, cs);
        CHECK(std::abs(e.value - base.value) < 10 * (e.error + base.error));
    }
}

TEST_CASE("meijer g: invalid specs") {
    CHECK_THROWS_AS(meijer_g({2, 0, 0, 1, {}, {0.0}}, 1.0), ConfigError);
    CHECK_THROWS_AS(meijer_g({1, 0, 1, 1, {}, {0.0}}, 1.0), ConfigError);
    // b = 0 on the left meets a − 1 = 0 on the right: no separating contour
    CHECK_THROWS_AS(meijer_g({1, 1, 1, 1, {1.0}, {0.0}}, 1.0), ConfigError);
    CHECK_THROWS_AS(meijer_g(exp_spec(), -1.0), DomainError);
    ContourSpec bad;
    bad.node_budget = 16;
    CHECK_THROWS_AS(meijer_g(exp_spec(), 1.0, bad), ConfigError);
}

TEST_CASE("meijer g: budget exhaustion reports the achieved error") {
    ContourSpec cs;
    cs.node_budget = 64;
    cs.rel_tol = 1e-15;
    cs.half_extent = 200;
    try {
        meijer_g(binom_spec(0.05), 1e-3, cs);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(e.achieved_error > 0);
    }
}

TEST_CASE("fox h: separable bivariate equals the product of univariate values") {
    FoxHSpec s;
    s.r = 2;
    s.n_outer = 1;
    s.outer_upper = {{0.5, {0, 0}}};  // Γ(1/2)
    s.outer_lower = {{-2.0, {0, 0}}};  // 1/Γ(3)
    s.vars = {exp_var(), binom_var(1.5)};
    for (auto [x1, x2] : {std::pair{0.3, 2.0}, std::pair{4.0, 0.01}}) {
        auto h = fox_h_bivariate(s, x1, x2);
        auto g1 = meijer_g(exp_spec(), x1), g2 = meijer_g(binom_spec(1.5), x2);
        double want = std::sqrt(std::numbers::pi) / 2 * g1.value * g2.value;
        double tol = h.error + std::abs(want) * (g1.error / g1.value + g2.error / g2.value);
        CHECK(std::abs(h.value - want) <= std::max(tol, 1e-12 * want));
        CHECK(h.value == doctest::Approx(want).epsilon(1e-6));
    }
}

TEST_CASE("fox h: separable four-variate equals the product of four values") {
    FoxHSpec s;
    s.r = 4;
    s.vars = {exp_var(), binom_var(2.0), binom_var(0.7), exp_var()};
    std::vector<double> x{0.5, 1.0, 3.0, 2.0};
    ContourSpec cs;
    cs.rel_tol = 1e-4;
    auto h = fox_h_multivariate(s, x, cs);
    double want = std::exp(-0.5) * 0.25 * std::tgamma(0.7) * std::pow(4.0, -0.7) * std::exp(-2.0);
    CHECK(std::abs(h.value - want) <= 2 * h.error + 1e-12 * want);
    CHECK(h.value == doctest::Approx(want).epsilon(1e-4));
}

TEST_CASE("fox h: coupled bivariate against a one-dimensional identity") {
    // Σ-coupling Γ(1 + ζ1 + ζ2) over e^{-x} kernels gives (1 + x1 + x2)^{-1}:
    // (2πi)^{-2} ∬ Γ(−ζ1)Γ(−ζ2)Γ(1+ζ1+ζ2) x1^{ζ1} x2^{ζ2} = 1/(1+x1+x2)
    FoxHSpec s;
    s.r = 2;
    s.n_outer = 1;
    s.outer_upper = {{0.0, {1, 1}}};
    HVariable v{1, 0, 0, 1, {}, {{0.0, 1.0}}};
    s.vars = {v, v};
    auto h = fox_h_bivariate(s, 0.4, 1.1);
    CHECK(h.value == doctest::Approx(1 / 2.5).epsilon(1e-6));
}

TEST_CASE("fox h: malformed specs") {
    FoxHSpec s;
    s.r = 2;
    s.vars = {exp_var()};
    CHECK_THROWS_AS(fox_h_bivariate(s, 1, 1), ConfigError);
    s.vars = {exp_var(), exp_var()};
    s.outer_upper = {{0.0, {1}}};
    s.n_outer = 1;
    CHECK_THROWS_AS(fox_h_bivariate(s, 1, 1), ConfigError);
}
