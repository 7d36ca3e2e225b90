#pragma once

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rissec/snrdist.hpp"

namespace testing {

inline rissec::snrdist::ScenarioConfig paper_default(bool direct = false) {
    using namespace rissec::snrdist;
    ScenarioConfig cfg;
    for (auto& l : link_names()) cfg.fading[l] = {3, 6, 1};
    cfg.N = 8;
    cfg.P_s = dbm_to_watt(30);
    cfg.sigma2_R = dbm_to_watt(-60);
    cfg.sigma2_E = dbm_to_watt(-40);
    cfg.direct_links = direct;
    return cfg;
}

// Rescales the noise powers so that γ̄_R2 and γ̄_E2 hit the given dB values.
inline void set_mean_snr_db(rissec::snrdist::ScenarioConfig& cfg, double r2_db, double e2_db) {
    auto k = rissec::snrdist::derive_constants(cfg);
    cfg.sigma2_R *= k.gammabar_R2 / std::pow(10.0, r2_db / 10);
    cfg.sigma2_E *= k.gammabar_E2 / std::pow(10.0, e2_db / 10);
}

// ∫ f(x) dx over [lo, hi] after x = e^u; adaptive Gauss-Kronrod.
inline double integrate_log(const std::function<double(double)>& f, double lo, double hi,
                            double tol = 1e-9) {
    auto g = [&](double u) {
        double x = std::exp(u);
        return f(x) * x;
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, std::log(lo), std::log(hi), 15, tol);
}

inline bool rel_close(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace testing
