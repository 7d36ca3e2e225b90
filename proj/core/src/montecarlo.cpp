#include "rissec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>
#include <thread>

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "rissec/errors.hpp"
#include "rissec/rng.hpp"

namespace rissec::montecarlo {

using channels::FadingParams;
using channels::sample_fisher_f_power;

Mode parse_mode(const std::string& s) {
    if (s == "paper") return Mode::paper;
    if (s == "matched") return Mode::matched;
    if (s == "physical") return Mode::physical;
    throw ConfigError("unknown Monte-Carlo mode '" + s + "' (expected paper, matched or physical)");
}

std::string to_string(Mode m) {
    switch (m) {
        case Mode::paper: return "paper";
        case Mode::matched: return "matched";
        case Mode::physical: return "physical";
    }
    return "?";
}

namespace {

struct Setup {
    const ScenarioConfig& cfg;
    snrdist::DerivedConstants k;
    FadingParams st, tt, tr_ris, te_ris, tr, te;
};

// Σ_n |h_1n||h_2n| e^{jφ_n}, φ uniform
std::complex<double> eve_field(int N, const FadingParams& h1, const FadingParams& h2, Philox4x32& rng) {
    boost::random::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::complex<double> s = 0;
    for (int n = 0; n < N; ++n)
        s += std::polar(std::sqrt(sample_fisher_f_power(h1, rng) * sample_fisher_f_power(h2, rng)), phase(rng));
    return s;
}

void trial(const Setup& S, Mode mode, Philox4x32& rng, double& gR, double& gE) {
    const auto& k = S.k;
    const bool direct = S.cfg.direct_links;
    const int N = S.cfg.N;
    if (mode == Mode::matched) {
        double xr = sample_fisher_f_power(S.st, rng);
        double xe = sample_fisher_f_power(S.st, rng);
        double yr = channels::sample_reader_cascade_matched(k.ris, rng);
        double ye = channels::sample_eve_cascade_matched(N, S.tt, S.te_ris, rng);
        gR = k.gammabar_R2 * xr * yr;
        gE = k.gammabar_E2 * xe * ye;
        if (direct) {
            // the direct-link forms convolve two independent product laws
            gR += k.gammabar_R1 * sample_fisher_f_power(S.st, rng) * sample_fisher_f_power(S.tr, rng);
            gE += k.gammabar_E1 * sample_fisher_f_power(S.st, rng) * sample_fisher_f_power(S.te, rng);
        }
        return;
    }
    double x = sample_fisher_f_power(S.st, rng);
    double amp_r = std::sqrt(channels::sample_reader_cascade(N, S.tt, S.tr_ris, rng));
    std::complex<double> field_e = eve_field(N, S.tt, S.te_ris, rng);
    if (!direct) {
        gR = k.gammabar_R2 * x * amp_r * amp_r;
        gE = k.gammabar_E2 * x * std::norm(field_e);
        return;
    }
    double hr = sample_fisher_f_power(S.tr, rng);
    double he = sample_fisher_f_power(S.te, rng);
    if (mode == Mode::paper) {
        gR = x * (k.gammabar_R1 * hr + k.gammabar_R2 * amp_r * amp_r);
        gE = x * (k.gammabar_E1 * he + k.gammabar_E2 * std::norm(field_e));
        return;
    }
    // physical: the RIS aligns its reflection with the direct path at the
    // reader; at Eve the direct path has its own uniform phase
    boost::random::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    double a = std::sqrt(k.gammabar_R1 * hr) + std::sqrt(k.gammabar_R2) * amp_r;
    std::complex<double> b = std::polar(std::sqrt(k.gammabar_E1 * he), phase(rng)) + std::sqrt(k.gammabar_E2) * field_e;
    gR = x * a * a;
    gE = x * std::norm(b);
}

double secrecy_rate(double gR, double gE, double log_base) {
    return std::max(0.0, (std::log1p(gR) - std::log1p(gE)) / log_base);
}

double log_base_of(LogBase b) { return b == LogBase::bits ? std::log(2.0) : 1.0; }

}  // namespace

SampleBatch simulate_batch(const ScenarioConfig& cfg, std::size_t n_trials, std::uint64_t seed, Mode mode,
                           unsigned threads) {
    if (n_trials < 1) throw ConfigError("n_trials must be at least 1");
    Setup S{cfg, snrdist::derive_constants(cfg), cfg.link("ST"), cfg.link("TTheta"), cfg.link("ThetaR"),
            cfg.link("ThetaE"), {}, {}};
    if (cfg.direct_links) {
        S.tr = cfg.link("TR");
        S.te = cfg.link("TE");
    }
    SampleBatch out;
    out.n_trials = n_trials;
    out.seed = seed;
    out.mode = mode;
    out.fingerprint = snrdist::fingerprint(cfg);
    out.gamma_R.resize(n_trials);
    out.gamma_E.resize(n_trials);
    out.offsets.resize(kBatches + 1);
    for (int b = 0; b <= kBatches; ++b) out.offsets[b] = n_trials * b / kBatches;

    auto run = [&](int b) {
        Philox4x32 rng(seed, static_cast<std::uint64_t>(b));
        for (std::size_t i = out.offsets[b]; i < out.offsets[b + 1]; ++i)
            trial(S, mode, rng, out.gamma_R[i], out.gamma_E[i]);
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, kBatches);
    if (threads == 1) {
        for (int b = 0; b < kBatches; ++b) run(b);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&, t] {
                for (int b = static_cast<int>(t); b < kBatches; b += static_cast<int>(threads)) run(b);
            });
        for (auto& th : pool) th.join();
    }
    return out;
}

namespace {

// Batch means of f over the batch's fixed batches.
template <class F>
McEstimate batch_means(const SampleBatch& batch, F f) {
    McEstimate e;
    e.n_trials = batch.n_trials;
    e.seed = batch.seed;
    std::vector<double> means;
    double total = 0;
    for (std::size_t b = 0; b + 1 < batch.offsets.size(); ++b) {
        std::size_t lo = batch.offsets[b], hi = batch.offsets[b + 1];
        if (hi == lo) continue;
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        total += s;
        means.push_back(s / (hi - lo));
    }
    e.mean = total / batch.n_trials;
    if (means.size() > 1) {
        double m = 0, v = 0;
        for (double x : means) m += x;
        m /= means.size();
        for (double x : means) v += (x - m) * (x - m);
        e.standard_error = std::sqrt(v / (means.size() - 1) / means.size());
    }
    return e;
}

}  // namespace

McEstimate estimate_mean(const SampleBatch& batch, Which which) {
    const auto& x = which == Which::reader ? batch.gamma_R : batch.gamma_E;
    return batch_means(batch, [&](std::size_t i) { return x[i]; });
}

std::vector<double> secrecy_rates(const SampleBatch& batch, LogBase base) {
    const double lb = log_base_of(base);
    std::vector<double> cs(batch.n_trials);
    for (std::size_t i = 0; i < cs.size(); ++i) cs[i] = secrecy_rate(batch.gamma_R[i], batch.gamma_E[i], lb);
    return cs;
}

McEstimate estimate_asc(const SampleBatch& batch, LogBase base) {
    const double lb = log_base_of(base);
    return batch_means(batch, [&](std::size_t i) { return secrecy_rate(batch.gamma_R[i], batch.gamma_E[i], lb); });
}

McEstimate estimate_sop(const SampleBatch& batch, double R_s, LogBase base) {
    if (!(R_s >= 0)) throw ConfigError("R_s must be non-negative");
    const double lb = log_base_of(base);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < batch.n_trials; ++i)
        if (secrecy_rate(batch.gamma_R[i], batch.gamma_E[i], lb) <= R_s) ++hits;
    McEstimate e;
    e.n_trials = batch.n_trials;
    e.seed = batch.seed;
    const double n = static_cast<double>(batch.n_trials);
    e.mean = hits / n;
    if (hits == 0 || hits == batch.n_trials) {
        double p = (hits + 2.0) / (n + 4.0);
        e.standard_error = std::sqrt(p * (1 - p) / (n + 4.0));
    } else {
        e.standard_error = std::sqrt(e.mean * (1 - e.mean) / n);
    }
    return e;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw ConfigError("empirical CDF needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / sorted_.size();
}

double EmpiricalCdf::quantile(double p) const {
    if (!(p >= 0 && p <= 1)) throw DomainError("quantile level must lie in [0, 1]");
    std::size_t n = sorted_.size();
    std::size_t idx = static_cast<std::size_t>(std::ceil(p * n));
    return sorted_[idx == 0 ? 0 : std::min(idx, n) - 1];
}

EmpiricalCdf empirical_cdf(const SampleBatch& batch, Which which) {
    return EmpiricalCdf(which == Which::reader ? batch.gamma_R : batch.gamma_E);
}

double ks_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf) {
    const auto& x = ecdf.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = cdf(x[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

double cvm_statistic(const EmpiricalCdf& ecdf, const std::function<double(double)>& cdf) {
    const auto& x = ecdf.sorted();
    const double n = static_cast<double>(x.size());
    double t = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = cdf(x[i]) - (2.0 * i + 1.0) / (2.0 * n);
        t += r * r;
    }
    return t;
}

double cvm_critical(double alpha) {
    if (alpha == 0.05) return 0.46136;
    if (alpha == 0.01) return 0.74346;
    if (alpha == 0.10) return 0.34730;
    throw DomainError("Cramér-von Mises critical value tabulated for alpha = 0.10, 0.05, 0.01 only");
}

double ks_critical(double alpha, std::size_t n) {
    // asymptotic Kolmogorov distribution: √n·D > sqrt(−ln(α/2)/2)
    if (!(alpha > 0 && alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

// Fritsch-Carlson monotone cubic Hermite in u = ln x.
CdfTable::CdfTable(const std::function<double(double)>& cdf, double lo, double hi, int points) {
    if (!(lo > 0 && hi > lo) || points < 4) throw ConfigError("CdfTable needs 0 < lo < hi and at least 4 points");
    const double a = std::log(lo), b = std::log(hi);
    u_.resize(points);
    f_.resize(points);
    for (int i = 0; i < points; ++i) {
        u_[i] = a + (b - a) * i / (points - 1);
        f_[i] = cdf(std::exp(u_[i]));
    }
    const int n = points;
    std::vector<double> d(n - 1);
    for (int i = 0; i + 1 < n; ++i) d[i] = (f_[i + 1] - f_[i]) / (u_[i + 1] - u_[i]);
    slope_.assign(n, 0.0);
    slope_[0] = d[0];
    slope_[n - 1] = d[n - 2];
    for (int i = 1; i + 1 < n; ++i) slope_[i] = d[i - 1] * d[i] <= 0 ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (int i = 0; i + 1 < n; ++i) {
        if (d[i] == 0) {
            slope_[i] = slope_[i + 1] = 0;
            continue;
        }
        double al = slope_[i] / d[i], be = slope_[i + 1] / d[i];
        double s = al * al + be * be;
        if (s > 9) {
            double tau = 3 / std::sqrt(s);
            slope_[i] = tau * al * d[i];
            slope_[i + 1] = tau * be * d[i];
        }
    }
}

double CdfTable::operator()(double x) const {
    if (!(x > 0)) return f_.front();
    double u = std::log(x);
    if (u <= u_.front()) return f_.front();
    if (u >= u_.back()) return f_.back();
    const double step = (u_.back() - u_.front()) / (u_.size() - 1);
    std::size_t i = std::min(static_cast<std::size_t>((u - u_.front()) / step), u_.size() - 2);
    double h = u_[i + 1] - u_[i], t = (u - u_[i]) / h;
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * f_[i] + h10 * h * slope_[i] + h01 * f_[i + 1] + h11 * h * slope_[i + 1];
}

void dump_samples_csv(const SampleBatch& batch, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    os.precision(17);
    os << "trial,gamma_R,gamma_E\n";
    for (std::size_t i = 0; i < batch.n_trials; ++i)
        os << i << ',' << batch.gamma_R[i] << ',' << batch.gamma_E[i] << '\n';
}

}  // namespace rissec::montecarlo
