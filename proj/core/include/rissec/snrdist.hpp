#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rissec/channels.hpp"
#include "rissec/specfun.hpp"

namespace rissec::snrdist {

using channels::FadingParams;

// Distances in meters. Θ is the RIS.
struct LinkGeometry {
    double d_ST = 50, d_TTheta = 50, d_ThetaR = 60, d_ThetaE = 50, d_TR = 90, d_TE = 50;
    double chi = 3.5;
    void validate() const;
};

enum class LogBase { bits, nats };

// Link names used as fading keys.
inline const std::vector<std::string>& link_names() {
    static const std::vector<std::string> names{"ST", "TTheta", "ThetaR", "ThetaE", "TR", "TE"};
    return names;
}

// Powers in watts.
struct ScenarioConfig {
    LinkGeometry geometry;
    std::map<std::string, FadingParams> fading;
    int N = 8;
    double P_s = 1.0;
    double sigma2_R = 1e-9;
    double sigma2_E = 1e-7;
    // Tag-side scale in λ₁. Unset: λ₁ is calibrated so E|h_ST|² = Ω_ST.
    std::optional<double> sigma2_T;
    double R_s = 1.0;
    bool direct_links = false;
    LogBase base = LogBase::bits;
    void validate() const;
    const FadingParams& link(const std::string& name) const;
};

// E[X^s] = exp(log_coeff + s · log_scale) Π_j Γ(a_j + b_j s). For a proper
// law log_coeff = −Σ_j ln Γ(a_j); it is stored separately so that the
// normalizing constants of the closed forms stay visible (and perturbable).
struct GammaTerm {
    double a = 0, b = 0;
};
struct ProductLaw {
    double log_coeff = 0;
    double log_scale = 0;
    std::vector<GammaTerm> gammas;
    static ProductLaw normalized(double log_scale, std::vector<GammaTerm> gammas);
    double lower() const;  // moments exist for lower() < s < upper()
    double upper() const;
    double log_moment(double s) const;
    double moment(double s) const;
    double log_mean() const;  // E[ln X]
};

struct DerivedConstants {
    double lambda1 = 0, C_cal = 0, G_cal = 0, a = 0, ybar1 = 0;
    double c = 0, d = 0;
    double eta1 = 0, eta2 = 0, delta1 = 0, delta2 = 0;
    double gammabar_R = 0, gammabar_E = 0;
    double gammabar_R1 = 0, gammabar_R2 = 0, gammabar_E1 = 0, gammabar_E2 = 0;
    double R_t = 0, R_t_prime = 0;
    channels::RisMomentConstants ris;
    // SNR laws: RIS path and direct path of each receiver
    ProductLaw reader_ris, reader_direct, eve_ris, eve_direct;
};

DerivedConstants derive_constants(const ScenarioConfig& cfg);

// Names of the constants a negative control may perturb, and the perturbation.
const std::vector<std::string>& perturbable_constants();
// Multiplies one constant by `factor` and rebuilds the laws that depend on it.
void perturb_constant(DerivedConstants& k, const std::string& name, double factor);
// Rebuilds the SNR laws from the scalar constants and the config.
void rebuild_laws(DerivedConstants& k, const ScenarioConfig& cfg);

enum class Receiver { reader, eve };

// Distribution of one receiver's SNR: a product law, or the sum of two
// independent product laws when direct links are present.
class SnrDistribution {
public:
    SnrDistribution(Receiver who, bool direct, const DerivedConstants& k,
                    const specfun::ContourSpec& contour = {});
    Receiver receiver() const { return who_; }
    bool direct() const { return direct_; }
    const std::vector<ProductLaw>& terms() const { return terms_; }
    double pdf(double x) const;
    double cdf(double x) const;
    double ccdf(double x) const;
    specfun::Evaluation pdf_eval(double x) const;
    specfun::Evaluation cdf_eval(double x) const;
    specfun::Evaluation ccdf_eval(double x) const;
    double mean() const;
    double moment(int k) const;  // E[X^k]

private:
    specfun::ContourSpec contour_for(double unit) const;
    Receiver who_;
    bool direct_;
    std::vector<ProductLaw> terms_;
    specfun::ContourSpec contour_;
};

double pdf_reader_nodirect(double x, const SnrDistribution& h);
double cdf_reader_nodirect(double x, const SnrDistribution& h);
double pdf_eve_nodirect(double x, const SnrDistribution& h);
double cdf_eve_nodirect(double x, const SnrDistribution& h);
double pdf_reader_direct(double x, const SnrDistribution& h);
double cdf_reader_direct(double x, const SnrDistribution& h);
double pdf_eve_direct(double x, const SnrDistribution& h);
double cdf_eve_direct(double x, const SnrDistribution& h);

// Gamma-product integrands for one- and two-term laws; exposed for the
// secrecy module and for tests.
specfun::MellinBarnes pdf_integrand(const std::vector<ProductLaw>& terms, double x);
specfun::MellinBarnes cdf_integrand(const std::vector<ProductLaw>& terms, double x);

// dB helpers
// FNV-1a over a canonical %.17g serialization of every field.
std::uint64_t fingerprint(const ScenarioConfig& cfg);
std::string canonical_string(const ScenarioConfig& cfg);

double db_to_linear(double db);
double dbm_to_watt(double dbm);

}  // namespace rissec::snrdist
