#include <doctest.h>

#include <cmath>

#include "../oracles/frozen_values.hpp"
#include "rissec/errors.hpp"
#include "rissec/montecarlo.hpp"
#include "rissec/snrdist.hpp"
#include "support.hpp"

using namespace rissec;
using namespace rissec::snrdist;

TEST_CASE("derived constants at paper_default: independent transcription") {
    auto k = derive_constants(testing::paper_default(true));
    double t = 1e-10;
    CHECK(k.lambda1 == doctest::Approx(oracle::k_lambda1).epsilon(t));
    CHECK(k.C_cal == doctest::Approx(oracle::k_C_cal).epsilon(t));
    CHECK(k.G_cal == doctest::Approx(oracle::k_G_cal).epsilon(t));
    CHECK(k.a == doctest::Approx(oracle::k_a).epsilon(t));
    CHECK(k.ybar1 == doctest::Approx(oracle::k_ybar1).epsilon(t));
    CHECK(k.c == doctest::Approx(oracle::k_c).epsilon(t));
    CHECK(k.d == doctest::Approx(oracle::k_d).epsilon(t));
    CHECK(k.eta1 == doctest::Approx(oracle::k_eta1).epsilon(t));
    CHECK(k.eta2 == doctest::Approx(oracle::k_eta2).epsilon(t));
    CHECK(k.delta1 == doctest::Approx(oracle::k_delta1).epsilon(t));
    CHECK(k.delta2 == doctest::Approx(oracle::k_delta2).epsilon(t));
    CHECK(k.gammabar_R == doctest::Approx(oracle::k_gammabar_R).epsilon(t));
    CHECK(k.gammabar_E == doctest::Approx(oracle::k_gammabar_E).epsilon(t));
    CHECK(k.gammabar_R1 == doctest::Approx(oracle::k_gammabar_R1).epsilon(t));
    CHECK(k.gammabar_R2 == doctest::Approx(oracle::k_gammabar_R2).epsilon(t));
    CHECK(k.gammabar_E1 == doctest::Approx(oracle::k_gammabar_E1).epsilon(t));
    CHECK(k.gammabar_E2 == doctest::Approx(oracle::k_gammabar_E2).epsilon(t));
    CHECK(k.R_t == oracle::k_R_t);
    CHECK(k.R_t_prime == oracle::k_R_t_prime);
}

TEST_CASE("derived constants: scaling and symmetry") {
    auto cfg = testing::paper_default();
    auto k = derive_constants(cfg);
    auto cfg2 = cfg;
    cfg2.P_s *= 2;
    auto k2 = derive_constants(cfg2);
    CHECK(k2.ybar1 == doctest::Approx(2 * k.ybar1).epsilon(1e-14));
    CHECK(k2.a == doctest::Approx(2 * k.a).epsilon(1e-14));
    CHECK(k2.eta1 == k.eta1);
    CHECK(k2.delta1 == k.delta1);
    CHECK(k2.c == k.c);
    CHECK(k2.d == k.d);

    auto cfg3 = cfg;
    cfg3.fading["ThetaR"] = {2.2, 4.0, 1.0};
    cfg3.fading["TTheta"] = {3.5, 9.0, 1.0};
    auto a = derive_constants(cfg3);
    std::swap(cfg3.fading["ThetaR"], cfg3.fading["TTheta"]);
    auto b = derive_constants(cfg3);
    CHECK(a.c == doctest::Approx(b.c).epsilon(1e-13));
    CHECK(a.d == doctest::Approx(b.d).epsilon(1e-13));

    cfg.base = LogBase::nats;
    auto kn = derive_constants(cfg);
    CHECK(kn.R_t == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
    CHECK(kn.R_t_prime == doctest::Approx(std::exp(1.0) - 1).epsilon(1e-15));
}

TEST_CASE("scenario validation names the problem") {
    auto cfg = testing::paper_default();
    cfg.fading.erase("ThetaE");
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("ThetaE"), ConfigError);
    cfg = testing::paper_default();
    cfg.fading["ST"].m_s = 1.0;
    CHECK_THROWS_WITH_AS(derive_constants(cfg), doctest::Contains("ST"), ConfigError);
    cfg = testing::paper_default();
    cfg.R_s = -1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = testing::paper_default();
    cfg.geometry.d_TR = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("fingerprint follows every field") {
    auto cfg = testing::paper_default();
    auto f = fingerprint(cfg);
    CHECK(fingerprint(testing::paper_default()) == f);
    auto c2 = cfg;
    c2.fading["TE"].omega = 1.0000001;
    CHECK(fingerprint(c2) != f);
    c2 = cfg;
    c2.direct_links = true;
    CHECK(fingerprint(c2) != f);
}

TEST_CASE("no-direct laws against quadrature over the fading variables") {
    auto k = derive_constants(testing::paper_default());
    SnrDistribution r(Receiver::reader, false, k), e(Receiver::eve, false, k);
    CHECK(r.mean() == doctest::Approx(oracle::reader_mean).epsilon(1e-10));
    CHECK(e.mean() == doctest::Approx(oracle::eve_mean).epsilon(1e-10));
    struct P {
        double t, rc, rp, ec, ep;
    };
    for (auto p : {P{0.3, oracle::reader_cdf_lo, oracle::reader_pdf_lo, oracle::eve_cdf_lo, oracle::eve_pdf_lo},
                   P{1.0, oracle::reader_cdf_mid, oracle::reader_pdf_mid, oracle::eve_cdf_mid, oracle::eve_pdf_mid},
                   P{3.0, oracle::reader_cdf_hi, oracle::reader_pdf_hi, oracle::eve_cdf_hi, oracle::eve_pdf_hi}}) {
        INFO("x = " << p.t << " x mean");
        CHECK(cdf_reader_nodirect(p.t * oracle::reader_mean, r) == doctest::Approx(p.rc).epsilon(1e-6));
        CHECK(pdf_reader_nodirect(p.t * oracle::reader_mean, r) == doctest::Approx(p.rp).epsilon(1e-6));
        CHECK(cdf_eve_nodirect(p.t * oracle::eve_mean, e) == doctest::Approx(p.ec).epsilon(1e-6));
        CHECK(pdf_eve_nodirect(p.t * oracle::eve_mean, e) == doctest::Approx(p.ep).epsilon(1e-6));
    }
}

TEST_CASE("direct laws against nested quadrature") {
    auto k = derive_constants(testing::paper_default(true));
    SnrDistribution r(Receiver::reader, true, k), e(Receiver::eve, true, k);
    CHECK(r.mean() == doctest::Approx(oracle::reader_direct_mean).epsilon(1e-10));
    CHECK(e.mean() == doctest::Approx(oracle::eve_direct_mean).epsilon(1e-10));
    struct P {
        double t, rc, ec;
    };
    for (auto p : {P{0.3, oracle::reader_direct_cdf_lo, oracle::eve_direct_cdf_lo},
                   P{1.0, oracle::reader_direct_cdf_mid, oracle::eve_direct_cdf_mid},
                   P{3.0, oracle::reader_direct_cdf_hi, oracle::eve_direct_cdf_hi}}) {
        INFO("x = " << p.t << " x mean");
        CHECK(cdf_reader_direct(p.t * oracle::reader_direct_mean, r) == doctest::Approx(p.rc).epsilon(1e-5));
        CHECK(cdf_eve_direct(p.t * oracle::eve_direct_mean, e) == doctest::Approx(p.ec).epsilon(1e-5));
    }
}

TEST_CASE("wrong-case evaluators are rejected") {
    auto k = derive_constants(testing::paper_default());
    SnrDistribution r(Receiver::reader, false, k);
    CHECK_THROWS_AS(cdf_eve_nodirect(1e-8, r), ConfigError);
    CHECK_THROWS_AS(pdf_reader_direct(1e-8, r), ConfigError);
}

TEST_CASE("no-direct laws: normalization, limits, CDF = ∫PDF") {
    auto k = derive_constants(testing::paper_default());
    for (auto who : {Receiver::reader, Receiver::eve}) {
        SnrDistribution h(who, false, k);
        double m = h.mean();
        INFO(std::string(who == Receiver::reader ? "reader" : "eve"));
        auto pdf = [&](double x) { return h.pdf(x); };
        CHECK(testing::integrate_log(pdf, 1e-8 * m, 1e3 * m, 1e-8) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(h.cdf(1e-9 * m) < 1e-6);
        CHECK(h.cdf(200 * m) > 1 - 1e-3);
        double prev = 0;
        for (double t = 1e-3; t < 100; t *= 2.5) {
            double c = h.cdf(t * m);
            CHECK(c >= prev);
            CHECK(h.pdf(t * m) >= 0);
            prev = c;
        }
        for (double t : {0.1, 1.0, 4.0})
            CHECK(std::abs(testing::integrate_log(pdf, 1e-9 * m, t * m, 1e-10) - h.cdf(t * m)) < 1e-5);
    }
}

TEST_CASE("direct laws: dominance and degeneration to the no-direct laws") {
    auto cfg = testing::paper_default(true);
    auto k = derive_constants(cfg);
    for (auto who : {Receiver::reader, Receiver::eve}) {
        SnrDistribution d(who, true, k), n(who, false, k);
        double m = n.mean();
        for (double t : {0.3, 1.0, 3.0, 30.0}) CHECK(d.cdf(t * m) <= n.cdf(t * m) + 1e-6);
    }
    // At paper_default the direct Eve link is 1e5 times stronger than the RIS
    // path, so the limit needs more than the 1e-6 used for the secrecy metrics.
    for (auto who : {Receiver::reader, Receiver::eve}) {
        INFO(std::string(who == Receiver::reader ? "reader" : "eve"));
        double prev = 1;
        for (double f : {1e-4, 1e-7, 1e-10}) {
            auto c = cfg;
            c.fading["TR"].omega *= f;
            c.fading["TE"].omega *= f;
            auto k0 = derive_constants(c);
            SnrDistribution d(who, true, k0), n(who, false, k0);
            double m = n.mean(), gap = 0;
            for (double t : {0.3, 1.0, 3.0}) gap = std::max(gap, std::abs(d.cdf(t * m) - n.cdf(t * m)));
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 1e-4);
    }
}

TEST_CASE("CDF at the Monte-Carlo median") {
    for (bool direct : {false, true}) {
        auto cfg = testing::paper_default(direct);
        auto k = derive_constants(cfg);
        auto b = montecarlo::simulate_batch(cfg, 1000000, 9);
        for (auto who : {Receiver::reader, Receiver::eve}) {
            SnrDistribution h(who, direct, k);
            auto ecdf = montecarlo::empirical_cdf(b, who == Receiver::reader ? montecarlo::Which::reader
                                                                            : montecarlo::Which::eve);
            double med = ecdf.quantile(0.5);
            INFO("direct " << direct << " receiver " << int(who));
            CHECK(std::abs(h.cdf(med) - 0.5) < 3 * std::sqrt(0.25 / 1e6));
        }
    }
}

TEST_CASE("product laws: moments") {
    auto k = derive_constants(testing::paper_default());
    // E[γ_E] = γ̄_E a (mean of an F power times a unit exponential)
    CHECK(k.eve_ris.moment(1) == doctest::Approx(k.gammabar_E * k.a).epsilon(1e-12));
    CHECK(k.eve_ris.moment(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.reader_ris.moment(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(k.eve_ris.upper() == doctest::Approx(6.0));
}
