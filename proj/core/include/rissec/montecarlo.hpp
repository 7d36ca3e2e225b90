#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rissec/snrdist.hpp"

namespace rissec::montecarlo {

using snrdist::LogBase;
using snrdist::ScenarioConfig;

// paper:    SNRs formed as in the system model with one shared |h_ST|², exact
//           N-element cascades, direct and RIS paths added as powers.
// matched:  the laws the closed forms assume: gamma-matched reader cascade,
//           exponential Eve cascade, an independent |h_ST|² in every term.
// physical: as paper, but direct and RIS fields add coherently.
enum class Mode { paper, matched, physical };

Mode parse_mode(const std::string& s);
std::string to_string(Mode m);

inline constexpr int kBatches = 32;

struct SampleBatch {
    std::vector<double> gamma_R, gamma_E;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t fingerprint = 0;
    Mode mode = Mode::matched;
    // batch b holds trials [offsets[b], offsets[b+1])
    std::vector<std::size_t> offsets;
};

struct McEstimate {
    double mean = 0;
    double standard_error = 0;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
};

// Trials are split into kBatches fixed batches, batch b drawing from Philox
// stream b of `seed`; results do not depend on the thread count.
SampleBatch simulate_batch(const ScenarioConfig& cfg, std::size_t n_trials, std::uint64_t seed,
                           Mode mode = Mode::matched, unsigned threads = 0);

enum class Which { reader, eve };

// Mean SNR of one receiver, batch-means standard error.
McEstimate estimate_mean(const SampleBatch& batch, Which which);
// Per-trial secrecy rate max(0, log((1+γ_R)/(1+γ_E))).
std::vector<double> secrecy_rates(const SampleBatch& batch, LogBase base = LogBase::bits);
// Mean of max(0, log((1+γ_R)/(1+γ_E))) with a batch-means standard error.
McEstimate estimate_asc(const SampleBatch& batch, LogBase base = LogBase::bits);
// Fraction of trials with C_s ≤ R_s, binomial standard error. An empty or
// full count uses the Agresti-Coull interval width instead of zero.
McEstimate estimate_sop(const SampleBatch& batch, double R_s, LogBase base = LogBase::bits);


class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);
    double operator()(double x) const;  // right-continuous
    double quantile(double p) const;    // smallest x with F(x) ≥ p
    const std::vector<double>& sorted() const { return sorted_; }
    std::size_t size() const { return sorted_.size(); }

private:
    std::vector<double> sorted_;
};

EmpiricalCdf empirical_cdf(const SampleBatch& batch, Which which);

// Goodness-of-fit statistics of the sample against a continuous CDF.
double ks_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf);
double cvm_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf);
// Asymptotic critical values (n·ω² for Cramér-von Mises, √n·D for KS).
double cvm_critical(double alpha);
double ks_critical(double alpha, std::size_t n);

// Monotone cubic interpolation of an expensive CDF in log x over [lo, hi];
// outside the range it clamps to the end values.
class CdfTable {
public:
    CdfTable(const std::function<double(double)>& cdf, double lo, double hi, int points = 400);
    double operator()(double x) const;

private:
    std::vector<double> u_, f_, slope_;
};

// CSV: trial,gamma_R,gamma_E
void dump_samples_csv(const SampleBatch& batch, const std::string& path);

}  // namespace rissec::montecarlo
