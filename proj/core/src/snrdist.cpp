#include "rissec/snrdist.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "mb_build.hpp"
#include "rissec/errors.hpp"

namespace rissec::snrdist {

using specfun::Evaluation;
using specfun::MeijerGSpec;

namespace {

void positive(double v, const std::string& name) {
    if (!(v > 0) || !std::isfinite(v)) throw ConfigError(name + " must be positive and finite");
}

Evaluation scaled(Evaluation e, double factor) {
    e.value *= factor;
    e.error *= std::abs(factor);
    e.mantissa *= factor;
    return e;
}

}  // namespace

std::string canonical_string(const ScenarioConfig& cfg) {
    std::string out;
    auto put = [&](const char* key, double v) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.17g;", key, v);
        out += buf;
    };
    const auto& g = cfg.geometry;
    put("d_ST", g.d_ST);
    put("d_TTheta", g.d_TTheta);
    put("d_ThetaR", g.d_ThetaR);
    put("d_ThetaE", g.d_ThetaE);
    put("d_TR", g.d_TR);
    put("d_TE", g.d_TE);
    put("chi", g.chi);
    for (const auto& [name, fp] : cfg.fading) {
        out += name + ":";
        put("m", fp.m);
        put("m_s", fp.m_s);
        put("omega", fp.omega);
    }
    put("N", cfg.N);
    put("P_s", cfg.P_s);
    put("sigma2_R", cfg.sigma2_R);
    put("sigma2_E", cfg.sigma2_E);
    if (cfg.sigma2_T) put("sigma2_T", *cfg.sigma2_T);
    put("R_s", cfg.R_s);
    put("direct", cfg.direct_links ? 1 : 0);
    put("bits", cfg.base == LogBase::bits ? 1 : 0);
    return out;
}

std::uint64_t fingerprint(const ScenarioConfig& cfg) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_string(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

void LinkGeometry::validate() const {
    positive(d_ST, "d_ST");
    positive(d_TTheta, "d_TTheta");
    positive(d_ThetaR, "d_ThetaR");
    positive(d_ThetaE, "d_ThetaE");
    positive(d_TR, "d_TR");
    positive(d_TE, "d_TE");
    positive(chi, "chi");
}

const FadingParams& ScenarioConfig::link(const std::string& name) const {
    auto it = fading.find(name);
    if (it == fading.end()) throw ConfigError("fading block missing for link " + name);
    return it->second;
}

void ScenarioConfig::validate() const {
    geometry.validate();
    for (const auto& name : link_names()) {
        if (!direct_links && (name == "TR" || name == "TE") && !fading.count(name)) continue;
        link(name).validate(name);
    }
    if (N < 1) throw ConfigError("N must be at least 1");
    positive(P_s, "P_s");
    positive(sigma2_R, "sigma2_R");
    positive(sigma2_E, "sigma2_E");
    if (sigma2_T) positive(*sigma2_T, "sigma2_T");
    if (!(R_s >= 0) || !std::isfinite(R_s)) throw ConfigError("R_s must be non-negative");
}

ProductLaw ProductLaw::normalized(double log_scale, std::vector<GammaTerm> gammas) {
    ProductLaw law;
    law.log_scale = log_scale;
    law.gammas = std::move(gammas);
    for (const auto& g : law.gammas) law.log_coeff -= std::lgamma(g.a);
    return law;
}

double ProductLaw::lower() const {
    double lo = -std::numeric_limits<double>::infinity();
    for (const auto& g : gammas)
        if (g.b > 0) lo = std::max(lo, -g.a / g.b);
    return lo;
}

double ProductLaw::upper() const {
    double hi = std::numeric_limits<double>::infinity();
    for (const auto& g : gammas)
        if (g.b < 0) hi = std::min(hi, g.a / -g.b);
    return hi;
}

double ProductLaw::log_moment(double s) const {
    if (!(s > lower() && s < upper())) throw DomainError("moment order outside the strip of existence");
    double v = log_coeff + s * log_scale;
    for (const auto& g : gammas) v += std::lgamma(g.a + g.b * s);
    return v;
}

double ProductLaw::moment(double s) const { return std::exp(log_moment(s)); }

double ProductLaw::log_mean() const {
    double v = log_scale;
    for (const auto& g : gammas) v += g.b * specfun::digamma(g.a);
    return v;
}

void rebuild_laws(DerivedConstants& k, const ScenarioConfig& cfg) {
    const auto& st = cfg.link("ST");
    const double m = st.m, ms = st.m_s;
    const double sqrt_pi = std::sqrt(std::numbers::pi);

    // Reader RIS path: γ_R2 = γ̄_R2 · X_ST · R², R ~ Gamma(c+1, d).
    // G_cal = Q / B with B = 4 γ̄_R ȳ₁ d² / λ₁ and Q = 2^c / (√π Γ(m)Γ(m_s)Γ(c+1)).
    {
        double B = 4.0 * k.gammabar_R * k.ybar1 * k.d * k.d / k.lambda1;
        k.reader_ris.log_scale = std::log(B / 4.0);
        k.reader_ris.gammas = {{m, 1}, {ms, -1}, {k.c + 1, 2}};
        k.reader_ris.log_coeff = std::log(k.G_cal * B * sqrt_pi) - k.c * std::log(2.0);
    }
    // Eve RIS path: γ_E2 = γ̄_E · X_ST · Y, Y exponential with mean a.
    {
        k.eve_ris.log_scale = std::log(k.gammabar_E * k.a / k.lambda1);
        k.eve_ris.gammas = {{m, 1}, {ms, -1}, {1, 1}};
        k.eve_ris.log_coeff = std::log(k.C_cal / k.lambda1);
    }
    if (cfg.direct_links) {
        const auto& tr = cfg.link("TR");
        const auto& te = cfg.link("TE");
        k.reader_direct.log_scale = std::log(k.gammabar_R1 / k.delta1);
        k.reader_direct.gammas = {{m, 1}, {ms, -1}, {tr.m, 1}, {tr.m_s, -1}};
        k.reader_direct.log_coeff = std::log(k.eta1);
        k.eve_direct.log_scale = std::log(k.gammabar_E1 / k.delta2);
        k.eve_direct.gammas = {{m, 1}, {ms, -1}, {te.m, 1}, {te.m_s, -1}};
        k.eve_direct.log_coeff = std::log(k.eta2);
    } else {
        k.reader_direct = {};
        k.eve_direct = {};
    }
}

DerivedConstants derive_constants(const ScenarioConfig& cfg) {
    cfg.validate();
    const auto& g = cfg.geometry;
    const auto& st = cfg.link("ST");
    const auto& tt = cfg.link("TTheta");
    const auto& tr_ris = cfg.link("ThetaR");
    const auto& te_ris = cfg.link("ThetaE");
    auto pl = [&](double dist) { return std::pow(dist, g.chi); };

    DerivedConstants k;
    // With σ²_T given, λ₁ follows the literal tag-side definition; otherwise it
    // is the F-law rate of |h_ST|² so that E|h_ST|² = Ω_ST.
    k.lambda1 = cfg.sigma2_T ? st.m * *cfg.sigma2_T / (st.m_s * cfg.P_s) : channels::fisher_f_rate(st);
    k.C_cal = k.lambda1 / (std::tgamma(st.m) * std::tgamma(st.m_s));

    k.ris = channels::ris_moment_constants(cfg.N, tt, tr_ris);
    k.c = k.ris.c;
    k.d = k.ris.d;

    k.ybar1 = cfg.P_s / (pl(g.d_TTheta) * pl(g.d_ThetaR) * cfg.sigma2_R);
    k.a = cfg.N * tt.omega * te_ris.omega * cfg.P_s / (pl(g.d_TTheta) * pl(g.d_ThetaE) * cfg.sigma2_E);
    k.gammabar_R = 1.0 / pl(g.d_ST);
    k.gammabar_E = 1.0 / pl(g.d_ST);
    k.gammabar_R2 = k.gammabar_R * k.ybar1;
    k.gammabar_E2 = cfg.P_s / (pl(g.d_ST) * pl(g.d_TTheta) * pl(g.d_ThetaE) * cfg.sigma2_E);

    {
        double B = 4.0 * k.gammabar_R * k.ybar1 * k.d * k.d / k.lambda1;
        double Q = std::pow(2.0, k.c) /
                   (std::sqrt(std::numbers::pi) * std::tgamma(st.m) * std::tgamma(st.m_s) * std::tgamma(k.c + 1));
        k.G_cal = Q / B;
    }

    if (cfg.direct_links) {
        const auto& tr = cfg.link("TR");
        const auto& te = cfg.link("TE");
        double gst = std::tgamma(st.m) * std::tgamma(st.m_s);
        k.eta1 = 1.0 / (gst * std::tgamma(tr.m) * std::tgamma(tr.m_s));
        k.eta2 = 1.0 / (gst * std::tgamma(te.m) * std::tgamma(te.m_s));
        k.delta1 = k.lambda1 * channels::fisher_f_rate(tr);
        k.delta2 = k.lambda1 * channels::fisher_f_rate(te);
        k.gammabar_R1 = cfg.P_s / (pl(g.d_ST) * pl(g.d_TR) * cfg.sigma2_R);
        k.gammabar_E1 = cfg.P_s / (pl(g.d_ST) * pl(g.d_TE) * cfg.sigma2_E);
    }

    double base = cfg.base == LogBase::bits ? 2.0 : std::numbers::e;
    k.R_t = std::pow(base, cfg.R_s);
    k.R_t_prime = k.R_t - 1.0;

    rebuild_laws(k, cfg);
    return k;
}

const std::vector<std::string>& perturbable_constants() {
    static const std::vector<std::string> names{
        "lambda1", "C_cal", "G_cal", "a", "ybar1", "c", "d", "eta1", "eta2", "delta1", "delta2",
        "gammabar_R", "gammabar_E", "gammabar_R1", "gammabar_E1", "R_t", "R_t_prime"};
    return names;
}

void perturb_constant(DerivedConstants& k, const std::string& name, double factor) {
    double* f = nullptr;
    if (name == "lambda1") f = &k.lambda1;
    else if (name == "C_cal") f = &k.C_cal;
    else if (name == "G_cal") f = &k.G_cal;
    else if (name == "a") f = &k.a;
    else if (name == "ybar1") f = &k.ybar1;
    else if (name == "c") f = &k.c;
    else if (name == "d") f = &k.d;
    else if (name == "eta1") f = &k.eta1;
    else if (name == "eta2") f = &k.eta2;
    else if (name == "delta1") f = &k.delta1;
    else if (name == "delta2") f = &k.delta2;
    else if (name == "gammabar_R") f = &k.gammabar_R;
    else if (name == "gammabar_E") f = &k.gammabar_E;
    else if (name == "gammabar_R1") f = &k.gammabar_R1;
    else if (name == "gammabar_E1") f = &k.gammabar_E1;
    else if (name == "R_t") f = &k.R_t;
    else if (name == "R_t_prime") f = &k.R_t_prime;
    else throw ConfigError("unknown derived constant: " + name);
    *f *= factor;
}

// ---- distributions ----

SnrDistribution::SnrDistribution(Receiver who, bool direct, const DerivedConstants& k,
                                 const specfun::ContourSpec& contour)
    : who_(who), direct_(direct), contour_(contour) {
    const ProductLaw& ris = who == Receiver::reader ? k.reader_ris : k.eve_ris;
    terms_.push_back(ris);
    if (direct) {
        const ProductLaw& dl = who == Receiver::reader ? k.reader_direct : k.eve_direct;
        if (dl.gammas.empty()) throw ConfigError("direct-link distribution requested without direct-link constants");
        terms_.push_back(dl);
    }
}

namespace {

// One law with gammas {(m,1), (m_s,−1), extra...}; expresses the density and
// CDF as Meijer G in x/B with B = exp(log_scale) (duplication applied to
// Γ(c+1+2s)).
struct SingleG {
    MeijerGSpec pdf, cdf;
    double B = 1, coeff = 1;
};

SingleG single_g(const ProductLaw& law) {
    SingleG g;
    const double m = law.gammas[0].a, ms = law.gammas[1].a;
    g.coeff = std::exp(law.log_coeff);
    std::vector<double> lower{m};
    double log_B = law.log_scale;
    const auto& x = law.gammas[2];
    if (x.b == 2) {
        lower.push_back(x.a / 2);
        lower.push_back((x.a + 1) / 2);
        log_B += std::log(4.0);
        g.coeff *= std::pow(2.0, x.a - 1) / std::sqrt(std::numbers::pi);
    } else {
        lower.push_back(x.a);
    }
    g.B = std::exp(log_B);
    int nb = static_cast<int>(lower.size());
    g.pdf = {nb, 1, 1, nb, {1 - ms}, lower};
    auto lc = lower;
    lc.push_back(0);
    g.cdf = {nb, 2, 2, nb + 1, {1 - ms, 1}, lc};
    return g;
}

bool single_law_g_route(const std::vector<ProductLaw>& t) {
    return t.size() == 1 && t[0].gammas.size() == 3 && t[0].gammas[0].b == 1 && t[0].gammas[1].b == -1 &&
           t[0].gammas[2].b > 0;
}

}  // namespace

specfun::MellinBarnes pdf_integrand(const std::vector<ProductLaw>& terms, double x) {
    if (!(x > 0)) throw DomainError("density argument must be positive");
    const int r = static_cast<int>(terms.size());
    detail::Builder b(r);
    std::vector<double> all(r, 1.0);
    for (int i = 0; i < r; ++i) b.moment(terms[i], 0.0, b.unit(i, -1.0));
    if (r == 2) {
        b.gamma(0.0, b.unit(0)).gamma(0.0, b.unit(1)).gamma(0.0, all, -1);
    } else if (r != 1) {
        throw ConfigError("density of more than two terms is not supported");
    }
    b.power(std::log(x), -1.0, all);
    return b.get();
}

specfun::MellinBarnes cdf_integrand(const std::vector<ProductLaw>& terms, double x) {
    if (!(x > 0)) throw DomainError("CDF argument must be positive");
    const int r = static_cast<int>(terms.size());
    detail::Builder b(r);
    std::vector<double> all(r, 1.0);
    for (int i = 0; i < r; ++i) b.moment(terms[i], 0.0, b.unit(i, -1.0));
    for (int i = 0; i < r; ++i) b.gamma(0.0, b.unit(i));
    b.gamma(1.0, all, -1);
    b.power(std::log(x), 0.0, all);
    return b.get();
}

namespace {

// P(X > x) for one law: ∫ M(v)/v x^{-v}, 0 < v < upper.
specfun::MellinBarnes single_ccdf_integrand(const ProductLaw& law, double x) {
    detail::Builder b(1);
    b.moment(law, 0.0, {1.0}).reciprocal(0.0, {1.0}).power(std::log(x), 0.0, {-1.0});
    return b.get();
}

// Correction term of P(U + V > x) = P(U > x) + P(V > x) − I(x), contours
// moved to 0 < v_i < 1 with Γ(−v) = −Γ(1−v)Γ(v)/Γ(1+v).
specfun::MellinBarnes pair_ccdf_cross(const ProductLaw& u, const ProductLaw& v, double x) {
    detail::Builder b(2);
    b.moment(u, 0.0, b.unit(0)).moment(v, 0.0, b.unit(1));
    for (int i = 0; i < 2; ++i) b.gamma(1.0, b.unit(i, -1.0)).reciprocal(0.0, b.unit(i));
    b.gamma(1.0, {-1.0, -1.0}, -1);
    b.power(std::log(x), 0.0, {-1.0, -1.0});
    return b.get();
}

}  // namespace

// Densities and probabilities only need absolute accuracy where they are
// small; x·pdf is the mass per unit log x.
specfun::ContourSpec SnrDistribution::contour_for(double unit) const {
    specfun::ContourSpec c = contour_;
    if (c.abs_tol == 0) c.abs_tol = unit * c.rel_tol;
    return c;
}

Evaluation SnrDistribution::pdf_eval(double x) const {
    if (!(x > 0)) throw DomainError("density argument must be positive");
    const auto contour_ = contour_for(0.1 / x);
    if (single_law_g_route(terms_)) {
        SingleG g = single_g(terms_[0]);
        return scaled(specfun::meijer_g(g.pdf, x / g.B, contour_), g.coeff / x);
    }
    return specfun::integrate(pdf_integrand(terms_, x), contour_);
}

Evaluation SnrDistribution::cdf_eval(double x) const {
    if (!(x > 0)) throw DomainError("CDF argument must be positive");
    const auto contour_ = contour_for(1e-2);
    if (single_law_g_route(terms_)) {
        SingleG g = single_g(terms_[0]);
        return scaled(specfun::meijer_g(g.cdf, x / g.B, contour_), g.coeff);
    }
    return specfun::integrate(cdf_integrand(terms_, x), contour_);
}

Evaluation SnrDistribution::ccdf_eval(double x) const {
    if (!(x > 0)) throw DomainError("CCDF argument must be positive");
    const auto contour_ = contour_for(1e-2);
    if (terms_.size() == 1) return specfun::integrate(single_ccdf_integrand(terms_[0], x), contour_);
    Evaluation a = specfun::integrate(single_ccdf_integrand(terms_[0], x), contour_);
    Evaluation b = specfun::integrate(single_ccdf_integrand(terms_[1], x), contour_);
    Evaluation c = specfun::integrate(pair_ccdf_cross(terms_[0], terms_[1], x), contour_);
    Evaluation out = c;
    out.value = a.value + b.value - c.value;
    out.error = a.error + b.error + c.error;
    out.mantissa = out.value;
    out.log_scale = 0;
    out.evaluations = a.evaluations + b.evaluations + c.evaluations;
    return out;
}

double SnrDistribution::pdf(double x) const { return x > 0 ? pdf_eval(x).value : 0.0; }
double SnrDistribution::cdf(double x) const { return x > 0 ? cdf_eval(x).value : 0.0; }
double SnrDistribution::ccdf(double x) const { return x > 0 ? ccdf_eval(x).value : 1.0; }

double SnrDistribution::mean() const { return moment(1); }

double SnrDistribution::moment(int k) const {
    if (k < 0) throw DomainError("moment order must be non-negative");
    if (terms_.size() == 1) return terms_[0].moment(k);
    double s = 0, binom = 1;
    for (int j = 0; j <= k; ++j) {
        s += binom * terms_[0].moment(j) * terms_[1].moment(k - j);
        binom = binom * (k - j) / (j + 1);
    }
    return s;
}

namespace {
const SnrDistribution& expect(const SnrDistribution& h, Receiver who, bool direct, const char* op) {
    if (h.receiver() != who || h.direct() != direct)
        throw ConfigError(std::string(op) + ": handle is for a different receiver or link case");
    return h;
}
}  // namespace

double pdf_reader_nodirect(double x, const SnrDistribution& h) {
    return expect(h, Receiver::reader, false, "pdf_reader_nodirect").pdf(x);
}
double cdf_reader_nodirect(double x, const SnrDistribution& h) {
    return expect(h, Receiver::reader, false, "cdf_reader_nodirect").cdf(x);
}
double pdf_eve_nodirect(double x, const SnrDistribution& h) {
    return expect(h, Receiver::eve, false, "pdf_eve_nodirect").pdf(x);
}
double cdf_eve_nodirect(double x, const SnrDistribution& h) {
    return expect(h, Receiver::eve, false, "cdf_eve_nodirect").cdf(x);
}
double pdf_reader_direct(double x, const SnrDistribution& h) {
    return expect(h, Receiver::reader, true, "pdf_reader_direct").pdf(x);
}
double cdf_reader_direct(double x, const SnrDistribution& h) {
    return expect(h, Receiver::reader, true, "cdf_reader_direct").cdf(x);
}
double pdf_eve_direct(double x, const SnrDistribution& h) {
    return expect(h, Receiver::eve, true, "pdf_eve_direct").pdf(x);
}
double cdf_eve_direct(double x, const SnrDistribution& h) {
    return expect(h, Receiver::eve, true, "cdf_eve_direct").cdf(x);
}

}  // namespace rissec::snrdist
