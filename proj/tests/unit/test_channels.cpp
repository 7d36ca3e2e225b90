#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../oracles/frozen_values.hpp"
#include "rissec/channels.hpp"
#include "rissec/errors.hpp"
#include "support.hpp"

using namespace rissec;
using namespace rissec::channels;

namespace {

const FadingParams f231{2, 3, 1};

template <class Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    double n = xs.size(), d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double F = cdf(xs[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

template <class Draw>
std::vector<double> draws(std::size_t n, std::uint64_t seed, Draw draw) {
    Philox4x32 rng(seed, 0);
    std::vector<double> v(n);
    for (auto& x : v) x = draw(rng);
    return v;
}

struct Stats {
    double mean, se;
};
Stats stats(const std::vector<double>& v) {
    double m = 0, s = 0;
    for (double x : v) m += x;
    m /= v.size();
    for (double x : v) s += (x - m) * (x - m);
    return {m, std::sqrt(s / (v.size() - 1) / v.size())};
}

}  // namespace

TEST_CASE("philox: published known-answer vectors") {
    using B = Philox4x32::Block;
    CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
          B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("philox: streams differ, repeats agree") {
    Philox4x32 a(7, 0), b(7, 0), c(7, 1), d(8, 0);
    bool differ_c = false, differ_d = false;
    for (int i = 0; i < 16; ++i) {
        auto x = a();
        CHECK(x == b());
        differ_c |= x != c();
        differ_d |= x != d();
    }
    CHECK(differ_c);
    CHECK(differ_d);
}

TEST_CASE("F power law: density") {
    CHECK(fisher_f_power_pdf(0.0, f231) == 0.0);
    CHECK(fisher_f_power_pdf(1.0, f231) == doctest::Approx(oracle::f_pdf_1).epsilon(1e-13));
    CHECK(fisher_f_power_cdf(0.5, f231) == doctest::Approx(oracle::f_cdf_half).epsilon(1e-13));
    CHECK(fisher_f_power_cdf(2.0, f231) == doctest::Approx(oracle::f_cdf_2).epsilon(1e-13));

    auto pdf = [](double x) { return fisher_f_power_pdf(x, f231); };
    CHECK(testing::integrate_log(pdf, 1e-12, 1e12) == doctest::Approx(1.0).epsilon(1e-9));
    auto xpdf = [](double x) { return x * fisher_f_power_pdf(x, f231); };
    CHECK(testing::integrate_log(xpdf, 1e-12, 1e14) == doctest::Approx(1.0).epsilon(1e-6));

    for (double x : {0.01, 0.4, 3.0, 40.0})
        CHECK(testing::integrate_log(pdf, 1e-14, x) == doctest::Approx(fisher_f_power_cdf(x, f231)).epsilon(1e-9));
}

TEST_CASE("F power law: moments and mean-power normalization") {
    for (FadingParams fp : {f231, FadingParams{3, 6, 1}, FadingParams{0.7, 4.5, 2.5}}) {
        CHECK(fisher_f_power_moment(1, fp) == doctest::Approx(fp.omega).epsilon(1e-13));
        CHECK(fisher_f_power_moment(0, fp) == doctest::Approx(1.0).epsilon(1e-14));
        auto f = [&](double x) { return std::sqrt(x) * fisher_f_power_pdf(x, fp); };
        CHECK(testing::integrate_log(f, 1e-14, 1e14) == doctest::Approx(fisher_f_power_moment(0.5, fp)).epsilon(1e-7));
    }
    CHECK_THROWS_AS(fisher_f_power_moment(3.0, f231), DomainError);
}

TEST_CASE("F power law: validation") {
    CHECK_THROWS_AS(FadingParams({2, 1, 1}).validate(), ConfigError);
    CHECK_THROWS_AS(FadingParams({0, 3, 1}).validate(), ConfigError);
    CHECK_THROWS_AS(FadingParams({2, 3, -1}).validate(), ConfigError);
    CHECK_THROWS_AS(fisher_f_power_pdf(1.0, {2, 0.5, 1}), ConfigError);
}

TEST_CASE("F power law: sampler") {
    auto v = draws(1000000, 3, [](Philox4x32& r) { return sample_fisher_f_power(f231, r); });
    CHECK(std::abs(stats(v).mean - 1.0) < 0.01);

    v.resize(100000);
    double ks = ks_distance(v, [](double x) { return fisher_f_power_cdf(x, f231); });
    CHECK(ks < 1.628 / std::sqrt(double(v.size())));

    auto w = draws(100, 3, [](Philox4x32& r) { return sample_fisher_f_power(f231, r); });
    CHECK(std::equal(w.begin(), w.end(), v.begin()));
}

TEST_CASE("RIS moment constants: independent transcription") {
    auto k = ris_moment_constants(8, f231, f231);
    CHECK(k.A == doctest::Approx(oracle::ris_A).epsilon(1e-13));
    CHECK(k.B == doctest::Approx(oracle::ris_B).epsilon(1e-13));
    CHECK(k.C == doctest::Approx(oracle::ris_C).epsilon(1e-13));
    CHECK(k.D == doctest::Approx(oracle::ris_D).epsilon(1e-13));
    CHECK(k.c == doctest::Approx(oracle::ris_c).epsilon(1e-12));
    CHECK(k.d == doctest::Approx(oracle::ris_d).epsilon(1e-12));
    auto k1 = ris_moment_constants(1, f231, f231), k2 = ris_moment_constants(2, f231, f231);
    CHECK(k2.c - k1.c == doctest::Approx(oracle::ris_c_slope).epsilon(1e-11));
    CHECK(k2.d == k1.d);
}

TEST_CASE("RIS moment constants: hop swap") {
    FadingParams h1{2.5, 4, 1.5}, h2{1.2, 7, 0.8};
    auto a = ris_moment_constants(16, h1, h2), b = ris_moment_constants(16, h2, h1);
    CHECK(a.A == doctest::Approx(b.A).epsilon(1e-15));
    CHECK(a.B == doctest::Approx(b.B).epsilon(1e-15));
    CHECK(a.C == doctest::Approx(b.C).epsilon(1e-15));
    CHECK(a.D == doctest::Approx(b.D).epsilon(1e-15));
    CHECK(a.c == doctest::Approx(b.c).epsilon(1e-13));
    CHECK(a.d == doctest::Approx(b.d).epsilon(1e-13));
    CHECK_THROWS_AS(ris_moment_constants(0, h1, h2), ConfigError);
}

TEST_CASE("RIS sum power law: density") {
    auto k = ris_moment_constants(8, f231, f231);
    double ybar = 3.0;
    CHECK(ris_sum_power_pdf(0.0, k, ybar) == 0.0);
    auto pdf = [&](double y) { return ris_sum_power_pdf(y, k, ybar); };
    CHECK(testing::integrate_log(pdf, 1e-8, 1e8) == doctest::Approx(1.0).epsilon(1e-9));
    for (double y : {50.0, 200.0, 900.0})
        CHECK(testing::integrate_log(pdf, 1e-8, y) == doctest::Approx(ris_sum_power_cdf(y, k, ybar)).epsilon(1e-8));
}

TEST_CASE("reader cascade: mean matches the exact coherent sum") {
    FadingParams fp{3, 6, 1};
    double e_half = fisher_f_power_moment(0.5, fp);
    for (int N : {1, 8, 32}) {
        auto v = draws(200000, 11 + N, [&](Philox4x32& r) { return sample_reader_cascade(N, fp, fp, r); });
        double want = N + double(N) * (N - 1) * std::pow(e_half, 4);
        auto s = stats(v);
        INFO("N = " << N);
        CHECK(std::abs(s.mean - want) < 3 * s.se);
    }
}

TEST_CASE("reader cascade: N = 1 is a product of two F powers") {
    auto v = draws(20000, 5, [](Philox4x32& r) { return sample_reader_cascade(1, f231, f231, r); });
    // P(X1 X2 ≤ y) = ∫ f(u) F(y/u) du
    auto cdf = [](double y) {
        return testing::integrate_log([&](double u) { return fisher_f_power_pdf(u, f231) * fisher_f_power_cdf(y / u, f231); },
                                      1e-10, 1e10, 1e-8);
    };
    std::sort(v.begin(), v.end());
    std::vector<double> sub;
    for (std::size_t i = 0; i < v.size(); i += 40) sub.push_back(v[i]);
    double d = 0;
    for (std::size_t i = 0; i < sub.size(); ++i) {
        double emp = double(i * 40 + 1) / v.size();
        d = std::max(d, std::abs(emp - cdf(sub[i])));
    }
    CHECK(d < 1.628 / std::sqrt(double(v.size())) + 40.0 / v.size());
}

TEST_CASE("reader cascade: gamma match improves with N") {
    FadingParams fp{3, 6, 1};
    auto gap = [&](int N) {
        auto k = ris_moment_constants(N, fp, fp);
        auto v = draws(100000, 21, [&](Philox4x32& r) { return sample_reader_cascade(N, fp, fp, r); });
        return ks_distance(v, [&](double y) { return ris_sum_power_cdf(y, k, 1.0); });
    };
    double g2 = gap(2), g32 = gap(32);
    MESSAGE("KS gap of the gamma match: N=2 " << g2 << ", N=32 " << g32);
    CHECK(g32 < g2);
}

TEST_CASE("eve cascade: incoherent mean and exponential limit") {
    FadingParams fp{3, 6, 1};
    for (int N : {1, 8, 32}) {
        auto v = draws(200000, 31 + N, [&](Philox4x32& r) { return sample_eve_cascade(N, fp, fp, r); });
        auto s = stats(v);
        INFO("N = " << N);
        CHECK(std::abs(s.mean - N) < 3 * s.se);
    }
    auto ks_exp = [&](int N) {
        auto v = draws(100000, 41, [&](Philox4x32& r) { return sample_eve_cascade(N, fp, fp, r); });
        return ks_distance(v, [&](double y) { return -std::expm1(-y / N); });
    };
    CHECK(ks_exp(64) < ks_exp(4));
}

TEST_CASE("matched cascades: laws and determinism") {
    FadingParams fp{3, 6, 1};
    auto k = ris_moment_constants(8, fp, fp);
    auto v = draws(100000, 51, [&](Philox4x32& r) { return sample_reader_cascade_matched(k, r); });
    CHECK(ks_distance(v, [&](double y) { return ris_sum_power_cdf(y, k, 1.0); }) < 1.628 / std::sqrt(1e5));
    auto w = draws(100000, 52, [&](Philox4x32& r) { return sample_eve_cascade_matched(8, fp, fp, r); });
    CHECK(ks_distance(w, [&](double y) { return -std::expm1(-y / 8); }) < 1.628 / std::sqrt(1e5));
    auto w2 = draws(100000, 52, [&](Philox4x32& r) { return sample_eve_cascade_matched(8, fp, fp, r); });
    CHECK(w == w2);
}
