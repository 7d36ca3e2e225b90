#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles/frozen_values.hpp"
#include "rissec/errors.hpp"
#include "rissec/secrecy.hpp"
#include "support.hpp"

using namespace rissec;
using namespace rissec::snrdist;
using namespace rissec::secrecy;

namespace {

// N = 8, γ̄_R2 = 10 dB, γ̄_E2 = 0 dB
ScenarioConfig moderate() {
    auto cfg = testing::paper_default();
    testing::set_mean_snr_db(cfg, 10, 0);
    return cfg;
}

SecrecyQuery query(const ScenarioConfig& cfg, Mode mode = Mode::exact) {
    return make_query(cfg, derive_constants(cfg), mode);
}

}  // namespace

TEST_CASE("no-direct ASC and SOP against quadrature over the laws") {
    auto q = query(moderate());
    auto a = asc(q);
    CHECK(a.method == "exact");
    CHECK(a.value == doctest::Approx(oracle::mod_asc).epsilon(1e-6));
    CHECK(a.error_estimate < 1e-5 * a.value);
    CHECK(sop(q).value == doctest::Approx(oracle::mod_sop).epsilon(1e-5));

    auto cfg = moderate();
    cfg.R_s = 2;
    CHECK(sop(query(cfg)).value == doctest::Approx(oracle::mod_sop_rs2).epsilon(1e-5));
}

TEST_CASE("asymptotic ASC and SOP against quadrature") {
    auto q = query(moderate(), Mode::asymptotic);
    auto a = asc(q), s = sop(q);
    CHECK(a.method == "asymptotic");
    CHECK(a.value == doctest::Approx(oracle::mod_asc_asymptotic).epsilon(1e-6));
    CHECK(s.value == doctest::Approx(oracle::mod_sop_asymptotic).epsilon(1e-6));
}

TEST_CASE("asymptotes scale with the reader SNR as the leading terms predict") {
    auto lo = moderate(), hi = moderate();
    testing::set_mean_snr_db(hi, 20, 0);
    auto qa = query(lo, Mode::asymptotic), qb = query(hi, Mode::asymptotic);
    CHECK(asc(qb).value - asc(qa).value == doctest::Approx(std::log2(10.0)).epsilon(1e-9));
    // F_R(x) ∝ x^m near 0 with m = 3 here
    CHECK(sop(qa).value / sop(qb).value == doctest::Approx(1e3).epsilon(1e-9));
    // the Eve side alone never moves
    auto eve_a = asc(qa).terms.at(1).value, eve_b = asc(qb).terms.at(1).value;
    CHECK(eve_a == doctest::Approx(eve_b).epsilon(1e-12));
}

TEST_CASE("ASC approaches the reader capacity as Eve fades out") {
    auto cfg = moderate();
    testing::set_mean_snr_db(cfg, 10, -80);
    auto q = query(cfg);
    const auto& r = q.reader;
    double m = r.mean();
    auto f = [&](double x) { return std::log2(1 + x) * r.pdf(x); };
    double cap = testing::integrate_log(f, 1e-8 * m, 1e3 * m, 1e-9);
    CHECK(asc(q).value == doctest::Approx(cap).epsilon(1e-5));
}

TEST_CASE("SOP is one half for identical laws at R_s = 0") {
    auto q = query(moderate());
    q.eve = q.reader;
    q.R_t = 1;
    q.R_t_prime = 0;
    CHECK(sop(q).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("ranges and monotonicity in R_s") {
    auto cfg = moderate();
    double prev = 0;
    for (double rs : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
        cfg.R_s = rs;
        auto q = query(cfg);
        double s = sop(q).value;
        CHECK(s >= 0);
        CHECK(s <= 1);
        CHECK(s >= prev - 1e-9);
        prev = s;
    }
    CHECK(asc(query(cfg)).value >= 0);
}

TEST_CASE("log base: nats scale ASC by ln 2") {
    auto cfg = moderate();
    double bits = asc(query(cfg)).value;
    cfg.base = LogBase::nats;
    CHECK(asc(query(cfg)).value == doctest::Approx(bits * std::numbers::ln2).epsilon(1e-6));
}

TEST_CASE("direct-link results carry named terms") {
    auto cfg = testing::paper_default(true);
    auto q = query(cfg);
    auto s = sop(q);
    REQUIRE(!s.terms.empty());
    for (const auto& t : s.terms) CHECK(!t.name.empty());
    CHECK(s.value >= 0);
    CHECK(s.value <= 1);
    auto a = asc(q);
    REQUIRE(!a.terms.empty());
    CHECK(a.value > 0);
}

TEST_CASE("direct-link metrics reduce to the no-direct ones") {
    // the direct Eve link here is 1e5 times the RIS path, hence the small Ω
    auto cfg = moderate();
    cfg.direct_links = true;
    cfg.fading["TR"].omega = 1e-10;
    cfg.fading["TE"].omega = 1e-10;
    auto qd = query(cfg);
    cfg.direct_links = false;
    auto qn = query(cfg);
    CHECK(asc(qd).value == doctest::Approx(asc(qn).value).epsilon(1e-3));
    CHECK(sop(qd).value == doctest::Approx(sop(qn).value).epsilon(1e-3));
}

TEST_CASE("case mismatches are rejected") {
    auto q = query(moderate());
    CHECK_THROWS_AS(asc_direct(q), ConfigError);
    auto cfg = moderate();
    cfg.direct_links = true;
    auto qd = query(cfg, Mode::asymptotic);
    CHECK_THROWS_AS(asc_asymptotic(qd), ConfigError);
}
