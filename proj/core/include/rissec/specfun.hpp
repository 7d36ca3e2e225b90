#pragma once

#include <complex>
#include <span>
#include <vector>

namespace rissec::specfun {

using cplx = std::complex<double>;

// Principal branch of log Gamma(z). Throws DomainError at non-positive integers.
cplx log_gamma_complex(cplx z);

// Real digamma / trigamma (any non-pole argument).
double digamma(double x);
double trigamma(double x);

// G^{m,n}_{p,q}(x | a; b) = (1/2πi) ∫ Π_{j≤m}Γ(b_j − s) Π_{j≤n}Γ(1 − a_j + s)
//                          / [Π_{j>m}Γ(1 − b_j + s) Π_{j>n}Γ(a_j − s)] x^s ds
struct MeijerGSpec {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<double> a;  // size p
    std::vector<double> b;  // size q
    void validate() const;
};

// Multivariate Fox H in the usual split form
//   (2πi)^{-r} ∫ Ψ(ζ) Π_i θ_i(ζ_i) x_i^{ζ_i} dζ
// with
//   Ψ = Π_{j≤n_outer} Γ(1 − a_j + α_j·ζ) / [Π_{j>n_outer} Γ(a_j − α_j·ζ) Π_j Γ(1 − b_j + β_j·ζ)]
//   θ_i = Π_{k≤m_i} Γ(d_k − δ_k ζ_i) Π_{k≤n_i} Γ(1 − c_k + γ_k ζ_i)
//         / [Π_{k>m_i} Γ(1 − d_k + δ_k ζ_i) Π_{k>n_i} Γ(c_k − γ_k ζ_i)]
// Weights are real; cross weights may carry either sign.
struct HBlock {
    double coeff = 0;
    std::vector<double> weights;  // size r
};
struct HPair {
    double coeff = 0;
    double weight = 1;
};
struct HVariable {
    int m = 0, n = 0, p = 0, q = 0;
    std::vector<HPair> upper;  // (c_k, γ_k), size p
    std::vector<HPair> lower;  // (d_k, δ_k), size q
};
struct FoxHSpec {
    int r = 1;
    int n_outer = 0;
    std::vector<HBlock> outer_upper;
    std::vector<HBlock> outer_lower;
    std::vector<HVariable> vars;  // size r
    void validate() const;
};

// Automatic placement: `center` maximizes the distance to the nearest pole
// (the gap midpoint in one dimension); `saddle` then slides toward the
// real-axis minimum of the integrand, which limits cancellation.
enum class Placement { saddle, center };

struct ContourSpec {
    std::vector<double> abscissa;  // empty: automatic placement
    Placement placement = Placement::saddle;
    double half_extent = 0;        // 0: automatic truncation
    int node_budget = 4096;        // per axis
    double rel_tol = 1e-6;
    double abs_tol = 0;            // also accept once the absolute error is below this
    double cost_ceiling = 1e9;     // total integrand evaluations per level
    void validate() const;
};

// value = mantissa · exp(log_scale); the split keeps results that under- or
// overflow a double (e.g. e^{-1000}) usable in relative comparisons.
struct Evaluation {
    double value = 0;
    double error = 0;
    double mantissa = 0;
    double log_scale = 0;
    std::vector<double> abscissa;
    std::vector<double> half_extent;
    std::vector<int> nodes;  // per axis, final level
    double evaluations = 0;  // summed over refinement levels
    int levels = 0;
};

// Generic gamma-product integrand in r variables:
//   sign · e^{log_const} (2πi)^{-r} ∫ Π_k Γ(offset_k + w_k·ζ)^{power_k} exp(Σ_i ζ_i log_x_i) dζ
// A vertical contour is admissible when every numerator argument has
// positive real part on it.
struct GammaFactor {
    double offset = 0;
    std::vector<double> weights;
    int power = 1;  // +1 numerator, -1 denominator
};
struct MellinBarnes {
    int r = 1;
    std::vector<GammaFactor> factors;
    std::vector<double> log_x;
    double log_const = 0;  // constant prefactor sign · exp(log_const)
    double sign = 1;
    void validate() const;
};

MellinBarnes compile(const MeijerGSpec& spec, double x);
MellinBarnes compile(const FoxHSpec& spec, std::span<const double> x);

// Log of the integrand at a complex point; used by tests and probes.
cplx log_integrand(const MellinBarnes& mb, std::span<const cplx> zeta);

// Automatic contour: a feasible point near the real-axis minimum of the
// integrand magnitude, kept away from the poles by a log barrier.
std::vector<double> place_contour(const MellinBarnes& mb, Placement placement = Placement::saddle);

Evaluation integrate(const MellinBarnes& mb, const ContourSpec& contour = {});

Evaluation meijer_g(const MeijerGSpec& spec, double x, const ContourSpec& contour = {});
Evaluation fox_h_bivariate(const FoxHSpec& spec, double x1, double x2,
                           const ContourSpec& contour = {});
Evaluation fox_h_multivariate(const FoxHSpec& spec, std::span<const double> x,
                              const ContourSpec& contour = {});

}  // namespace rissec::specfun
