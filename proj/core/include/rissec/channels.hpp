#pragma once

#include <string>

#include "rissec/rng.hpp"

namespace rissec::channels {

// Squared envelope of a Fisher-Snedecor F channel: X = Ω (m_s − 1)/m · G_m / G_{m_s}
// with unit-scale gamma variates, so E[X] = Ω.
struct FadingParams {
    double m = 1;
    double m_s = 2;
    double omega = 1;
    // `link` only labels the error message.
    void validate(const std::string& link = "") const;
};

// λ in E[X^t] = λ^{-t} Γ(m+t) Γ(m_s−t) / (Γ(m) Γ(m_s)).
double fisher_f_rate(const FadingParams& fp);
double fisher_f_power_pdf(double x, const FadingParams& fp);
double fisher_f_power_cdf(double x, const FadingParams& fp);
// E[X^t], finite for −m < t < m_s.
double fisher_f_power_moment(double t, const FadingParams& fp);
double sample_fisher_f_power(const FadingParams& fp, Philox4x32& rng);

// Moment match of R = Σ_n |h_1n||h_2n| to a gamma law with shape c+1 and scale d.
struct RisMomentConstants {
    double A = 0, B = 0, C = 0, D = 0;
    double c = 0, d = 0;
};
RisMomentConstants ris_moment_constants(int N, const FadingParams& hop1, const FadingParams& hop2);

// Density of Y = ybar · R² under the gamma match above.
double ris_sum_power_pdf(double y, const RisMomentConstants& k, double ybar);
double ris_sum_power_cdf(double y, const RisMomentConstants& k, double ybar);

// (Σ_n |h_1n||h_2n|)²: phases aligned at the RIS.
double sample_reader_cascade(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng);
// |Σ_n |h_1n||h_2n| e^{jφ_n}|² with φ_n uniform on [−π, π).
double sample_eve_cascade(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng);

// Draws from the laws the closed forms assume: R² with R gamma(c+1, d), and
// an exponential with mean N Ω_1 Ω_2.
double sample_reader_cascade_matched(const RisMomentConstants& k, Philox4x32& rng);
double sample_eve_cascade_matched(int N, const FadingParams& hop1, const FadingParams& hop2, Philox4x32& rng);

}  // namespace rissec::channels
