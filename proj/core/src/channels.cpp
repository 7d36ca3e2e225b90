#include "rissec/channels.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "rissec/errors.hpp"

namespace rissec::channels {

void FadingParams::validate(const std::string& link) const {
    std::string where = link.empty() ? "fading" : "fading." + link;
    if (!(m > 0) || !std::isfinite(m)) throw ConfigError(where + ".m must be positive");
    if (!(m_s > 1) || !std::isfinite(m_s)) throw ConfigError(where + ".m_s must exceed 1");
    if (!(omega > 0) || !std::isfinite(omega)) throw ConfigError(where + ".omega must be positive");
}

double fisher_f_rate(const FadingParams& fp) { return fp.m / ((fp.m_s - 1.0) * fp.omega); }

double fisher_f_power_pdf(double x, const FadingParams& fp) {
    fp.validate();
    if (x < 0) throw DomainError("fisher_f_power_pdf: negative argument");
    const double lam = fisher_f_rate(fp);
    if (x == 0) return fp.m < 1 ? INFINITY : (fp.m == 1 ? lam * fp.m_s : 0.0);
    double u = lam * x;
    double lg = fp.m * std::log(lam) + (fp.m - 1) * std::log(x) - (fp.m + fp.m_s) * std::log1p(u) -
                (std::lgamma(fp.m) + std::lgamma(fp.m_s) - std::lgamma(fp.m + fp.m_s));
    return std::exp(lg);
}

double fisher_f_power_cdf(double x, const FadingParams& fp) {
    fp.validate();
    if (x <= 0) return 0.0;
    double u = fisher_f_rate(fp) * x;
    return boost::math::ibeta(fp.m, fp.m_s, u / (1.0 + u));
}

double fisher_f_power_moment(double t, const FadingParams& fp) {
    fp.validate();
    if (!(t > -fp.m && t < fp.m_s)) throw DomainError("fisher_f_power_moment: order outside (-m, m_s)");
    return std::exp(-t * std::log(fisher_f_rate(fp)) + std::lgamma(fp.m + t) + std::lgamma(fp.m_s - t) -
                    std::lgamma(fp.m) - std::lgamma(fp.m_s));
}

double sample_fisher_f_power(const FadingParams& fp, Philox4x32& rng) {
    boost::random::gamma_distribution<double> gm(fp.m), gs(fp.m_s);
    double a = gm(rng);
    double b = gs(rng);
    return a / b / fisher_f_rate(fp);
}

RisMomentConstants ris_moment_constants(int N, const FadingParams& hop1, const FadingParams& hop2) {
    if (N < 1) throw ConfigError("N must be at least 1");
    hop1.validate("hop1");
    hop2.validate("hop2");
    using boost::math::beta;
    RisMomentConstants k;
    k.A = beta(hop2.m + 1, hop2.m_s - 1) * beta(hop1.m + 1, hop1.m_s - 1);
    k.B = beta(hop2.m + 0.5, hop2.m_s - 0.5) * beta(hop1.m + 0.5, hop1.m_s - 0.5);
    k.C = beta(hop2.m, hop2.m_s) * beta(hop1.m, hop1.m_s);
    k.D = std::sqrt((hop2.m_s - 1) * (hop1.m_s - 1) * hop2.omega * hop1.omega / (hop2.m * hop1.m));
    double den = k.A * k.C - k.B * k.B;
    if (!(std::abs(den) > 1e-14 * k.A * k.C))
        throw DomainError("ris_moment_constants: A'C' = B'^2, moment match degenerate");
    k.c = ((N + 1) * k.B * k.B - k.A * k.C) / den;
    k.d = k.D * den / (k.B * k.C);
    return k;
}

double ris_sum_power_pdf(double y, const RisMomentConstants& k, double ybar) {
    if (y < 0) throw DomainError("ris_sum_power_pdf: negative argument");
    if (!(ybar > 0)) throw DomainError("ris_sum_power_pdf: ybar must be positive");
    if (y == 0) return k.c > 1 ? 0.0 : (k.c == 1 ? 1.0 / (2 * ybar * k.d * k.d) : INFINITY);
    double r = std::sqrt(y / ybar);
    double lg = (k.c - 1) * std::log(r) - r / k.d - std::log(2 * ybar) - (k.c + 1) * std::log(k.d) -
                std::lgamma(k.c + 1);
    return std::exp(lg);
}

double ris_sum_power_cdf(double y, const RisMomentConstants& k, double ybar) {
    if (y <= 0) return 0.0;
    return boost::math::gamma_p(k.c + 1, std::sqrt(y / ybar) / k.d);
}

double sample_reader_cascade(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng) {
    double s = 0;
    for (int n = 0; n < N; ++n)
        s += std::sqrt(sample_fisher_f_power(hop1, rng) * sample_fisher_f_power(hop2, rng));
    return s * s;
}

double sample_eve_cascade(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng) {
    boost::random::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::complex<double> s = 0;
    for (int n = 0; n < N; ++n) {
        double amp = std::sqrt(sample_fisher_f_power(hop1, rng) * sample_fisher_f_power(hop2, rng));
        s += std::polar(amp, phase(rng));
    }
    return std::norm(s);
}

double sample_reader_cascade_matched(const RisMomentConstants& k, Philox4x32& rng) {
    boost::random::gamma_distribution<double> g(k.c + 1, k.d);
    double r = g(rng);
    return r * r;
}

double sample_eve_cascade_matched(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng) {
    boost::random::exponential_distribution<double> e(1.0);
    return N * hop1.omega * hop2.omega * e(rng);
}

}  // namespace rissec::channels
