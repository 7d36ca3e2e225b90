#include <cstdio>
#include <cstdlib>
#include <algorithm>
#include <cstdint>
#include <tuple>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rissec/errors.hpp"
#include "rissec/specfun.hpp"
#include "specfun_internal.hpp"

namespace rissec::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double arg_at(const GammaFactor& f, const std::vector<double>& s) {
    double v = f.offset;
    for (std::size_t i = 0; i < s.size(); ++i) v += f.weights[i] * s[i];
    return v;
}

bool involves(const GammaFactor& f) {
    return std::any_of(f.weights.begin(), f.weights.end(), [](double w) { return w != 0.0; });
}

// Envelope of log|Γ(x)^p| on the real axis with derivatives. For
// denominators the sine factor of the reflection formula is dropped so the
// zeros of 1/Γ do not pull the contour toward them.
struct Envelope {
    double v, d1, d2;
};

Envelope envelope(double x, int p) {
    if (p > 0) return {std::lgamma(x), digamma(x), trigamma(x)};
    if (x >= 0.5) return {-std::lgamma(x), -digamma(x), -trigamma(x)};
    double y = 1.0 - x;
    return {-(std::lgamma(y) - std::log(kPi)), digamma(y), -trigamma(y)};
}

// Dense solve, n ≤ 6. Returns false when singular.
bool solve(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& x) {
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
        if (std::abs(a[piv * n + c]) < 1e-300) return false;
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
            std::swap(b[c], b[piv]);
        }
        for (int r = c + 1; r < n; ++r) {
            double f = a[r * n + c] / a[c * n + c];
            for (int k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
            b[r] -= f * b[c];
        }
    }
    x.assign(n, 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= a[r * n + k] * x[k];
        x[r] = s / a[r * n + r];
    }
    return true;
}

struct Constraint {
    std::vector<double> a;  // normalized weights
    double b;               // normalized offset
};

// Numerator arguments must stay positive: a·σ + b > 0 after normalization.
std::vector<Constraint> numerator_constraints(const MellinBarnes& mb) {
    std::vector<Constraint> out;
    for (const auto& f : mb.factors) {
        if (f.power < 0) continue;
        if (!involves(f)) {
            if (f.offset <= 0.0) {
                std::ostringstream os;
                os << "constant numerator gamma has non-positive argument " << f.offset;
                throw ConfigError(os.str());
            }
            continue;
        }
        double norm = 0;
        for (double w : f.weights) norm += w * w;
        norm = std::sqrt(norm);
        Constraint c;
        c.b = f.offset / norm;
        for (double w : f.weights) c.a.push_back(w / norm);
        out.push_back(std::move(c));
    }
    return out;
}

// Phase 1: maximize the smallest normalized slack (Chebyshev-centre style)
// inside a box, by a log-barrier Newton iteration in (σ, t).
std::vector<double> feasible_point(const MellinBarnes& mb) {
    const int r = mb.r;
    auto cons = numerator_constraints(mb);
    double box = 50.0;
    for (const auto& f : mb.factors) box = std::max(box, 10.0 + std::abs(f.offset));
    for (int i = 0; i < r; ++i) {
        Constraint lo, hi;
        lo.a.assign(r, 0.0);
        hi.a.assign(r, 0.0);
        lo.a[i] = 1.0;
        hi.a[i] = -1.0;
        lo.b = box;
        hi.b = box;
        cons.push_back(lo);
        cons.push_back(hi);
    }
    const int n = r + 1;
    std::vector<double> y(n, 0.0);
    auto slack = [&](const Constraint& c, const std::vector<double>& v) {
        double s = c.b;
        for (int i = 0; i < r; ++i) s += c.a[i] * v[i];
        return s - v[r];
    };
    double tmin = std::numeric_limits<double>::infinity();
    for (const auto& c : cons) tmin = std::min(tmin, slack(c, y));
    y[r] = tmin - 1.0;

    for (double mu : {1.0, 1e-1, 1e-2, 1e-3, 1e-4}) {
        auto objective = [&](const std::vector<double>& v) {
            double f = -v[r];
            for (const auto& c : cons) {
                double s = slack(c, v);
                if (s <= 0) return std::numeric_limits<double>::infinity();
                f -= mu * std::log(s);
            }
            return f;
        };
        for (int it = 0; it < 100; ++it) {
            std::vector<double> g(n, 0.0), H(n * n, 0.0);
            g[r] = -1.0;
            for (const auto& c : cons) {
                double s = slack(c, y);
                std::vector<double> grad(c.a);
                grad.push_back(-1.0);
                for (int i = 0; i < n; ++i) {
                    g[i] -= mu * grad[i] / s;
                    for (int j = 0; j < n; ++j) H[i * n + j] += mu * grad[i] * grad[j] / (s * s);
                }
            }
            std::vector<double> step;
            std::vector<double> rhs(g);
            for (double& v : rhs) v = -v;
            if (!solve(H, rhs, n, step)) break;
            double f0 = objective(y);
            double alpha = 1.0;
            std::vector<double> trial(n);
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                for (int i = 0; i < n; ++i) trial[i] = y[i] + alpha * step[i];
                if (objective(trial) < f0) {
                    moved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if (!moved) break;
            double dmax = 0;
            for (int i = 0; i < n; ++i) dmax = std::max(dmax, std::abs(trial[i] - y[i]));
            y = trial;
            if (dmax < 1e-12) break;
        }
    }
    if (!(y[r] > 1e-9))
        throw ConfigError("no vertical contour separates the pole families of the integrand");
    y.resize(r);
    return y;
}

}  // namespace

void MellinBarnes::validate() const {
    if (r < 1) throw ConfigError("Mellin-Barnes integrand needs at least one variable");
    if (static_cast<int>(log_x.size()) != r)
        throw ConfigError("Mellin-Barnes integrand: log_x has wrong length");
    for (double v : log_x)
        if (!std::isfinite(v)) throw ConfigError("Mellin-Barnes integrand: non-finite argument");
    if (!std::isfinite(log_const) || !(sign == 1.0 || sign == -1.0))
        throw ConfigError("Mellin-Barnes integrand: bad constant prefactor");
    for (const auto& f : factors) {
        if (static_cast<int>(f.weights.size()) != r)
            throw ConfigError("Mellin-Barnes integrand: weight vector has wrong length");
        if (f.power != 1 && f.power != -1)
            throw ConfigError("Mellin-Barnes integrand: power must be +1 or -1");
        if (!std::isfinite(f.offset)) throw ConfigError("Mellin-Barnes integrand: non-finite parameter");
    }
}

void ContourSpec::validate() const {
    if (half_extent < 0) throw ConfigError("contour half_extent must be positive (0 selects automatic)");
    if (node_budget < 64) throw ConfigError("contour node_budget must be at least 64");
    if (!(rel_tol > 0)) throw ConfigError("contour rel_tol must be positive");
    if (!(cost_ceiling > 0)) throw ConfigError("contour cost_ceiling must be positive");
    if (!(abs_tol >= 0)) throw ConfigError("contour abs_tol must be non-negative");
}

cplx log_integrand(const MellinBarnes& mb, std::span<const cplx> zeta) {
    cplx acc = mb.log_const;
    if (mb.sign < 0) acc += cplx(0.0, kPi);
    for (const auto& f : mb.factors) {
        cplx z = f.offset;
        for (int i = 0; i < mb.r; ++i) z += f.weights[i] * zeta[i];
        if (f.power < 0 && z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
            return {kNegInf, 0.0};
        acc += static_cast<double>(f.power) * log_gamma_mod2pi(z);
    }
    for (int i = 0; i < mb.r; ++i) acc += zeta[i] * mb.log_x[i];
    return acc;
}

std::vector<double> place_contour(const MellinBarnes& mb, Placement placement) {
    mb.validate();
    const int r = mb.r;
    std::vector<double> s = feasible_point(mb);
    if (placement == Placement::center) return s;

    // Phase 2: minimize the real-axis log magnitude plus a barrier that
    // keeps numerator arguments away from their first pole.
    const double mu = 1.0;
    const double far = 1e5;
    auto phi = [&](const std::vector<double>& v, std::vector<double>* g, std::vector<double>* H) {
        double val = 0;
        if (g) g->assign(r, 0.0);
        if (H) H->assign(r * r, 0.0);
        for (const auto& f : mb.factors) {
            if (!involves(f)) continue;
            double x = arg_at(f, v);
            if (f.power > 0 && x <= 0) return std::numeric_limits<double>::infinity();
            Envelope e = envelope(x, f.power);
            val += e.v;
            double b1 = e.d1, b2 = e.d2;
            if (f.power > 0) {
                val -= mu * std::log(x);
                b1 -= mu / x;
                b2 += mu / (x * x);
            }
            for (int i = 0; i < r; ++i) {
                if (g) (*g)[i] += b1 * f.weights[i];
                if (H)
                    for (int j = 0; j < r; ++j) (*H)[i * r + j] += b2 * f.weights[i] * f.weights[j];
            }
        }
        for (int i = 0; i < r; ++i) {
            val += v[i] * mb.log_x[i];
            if (g) (*g)[i] += mb.log_x[i];
            double lo = far + v[i], hi = far - v[i];
            if (lo <= 0 || hi <= 0) return std::numeric_limits<double>::infinity();
            val -= 1e-3 * (std::log(lo) + std::log(hi));
            if (g) (*g)[i] -= 1e-3 * (1.0 / lo - 1.0 / hi);
            if (H) (*H)[i * r + i] += 1e-3 * (1.0 / (lo * lo) + 1.0 / (hi * hi));
        }
        return val;
    };

    double lambda = 0;
    for (int it = 0; it < 300; ++it) {
        std::vector<double> g, H;
        double f0 = phi(s, &g, &H);
        if (!std::isfinite(f0)) break;
        std::vector<double> step;
        bool ok = false;
        for (int tries = 0; tries < 40 && !ok; ++tries) {
            std::vector<double> Hd(H);
            for (int i = 0; i < r; ++i) Hd[i * r + i] += lambda;
            std::vector<double> rhs(g);
            for (double& v : rhs) v = -v;
            if (solve(Hd, rhs, r, step)) {
                double dd = 0;
                for (int i = 0; i < r; ++i) dd += step[i] * g[i];
                if (dd < 0) ok = true;
            }
            if (!ok) lambda = std::max(1e-6, lambda * 10.0);
        }
        if (!ok) break;
        double gnorm = 0;
        for (double v : g) gnorm = std::max(gnorm, std::abs(v));
        double alpha = 1.0;
        std::vector<double> trial(r);
        bool moved = false;
        for (int ls = 0; ls < 80; ++ls) {
            for (int i = 0; i < r; ++i) trial[i] = s[i] + alpha * step[i];
            double f1 = phi(trial, nullptr, nullptr);
            if (f1 <= f0 - 1e-4 * alpha * gnorm * 0.0 && f1 < f0) {
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!moved) break;
        lambda = alpha == 1.0 ? lambda * 0.1 : lambda;
        double dmax = 0;
        for (int i = 0; i < r; ++i) dmax = std::max(dmax, std::abs(trial[i] - s[i]));
        s = trial;
        if (dmax < 1e-12 * (1.0 + std::abs(s[0]))) break;
    }
    return s;
}

namespace {

struct Cross {
    std::size_t factor;
    bool integer;
    std::vector<int> iw;
    int last_var;
    int J;
    std::vector<cplx> table;
    double norm;
};

// Significant region of one level, reused to skip work on the next finer
// level: for each row (all indices but the last) the range of last-axis
// indices whose magnitude reached the truncation threshold.
struct Mask {
    std::vector<int> K;  // axes of the level that built it
    std::vector<int> lo, hi;
    double fill = 1.0;
};

struct Grid {
    int r;
    double h;
    std::vector<int> K;
    std::vector<std::vector<cplx>> sep;
    std::vector<Cross> cross;
    std::vector<std::vector<std::size_t>> closes_at;  // cross terms completed at depth d
    std::vector<std::vector<std::size_t>> touches;    // cross terms involving var d
    std::vector<double> remaining_max;
    const MellinBarnes* mb;
    std::vector<double> sigma;
    double prune;
    double thr;
    const Mask* mask_in = nullptr;
    std::vector<int> idx;
    std::vector<int> row_lo, row_hi;
    bool fast_inner;
    std::vector<std::vector<long>> saved;
    std::vector<std::vector<double>> saved_w;
};

cplx factor_value(const GammaFactor& f, cplx z, double norm) {
    if (f.power < 0 && z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        return 0.0;
    return std::exp(static_cast<double>(f.power) * log_gamma_mod2pi(z) - norm);
}

double normalizer(const GammaFactor& f, double x) { return envelope(x, f.power).v; }

struct Accum {
    cplx sum = 0;
    double l1 = 0;
    double evaluations = 0;
};

// Last-axis index range allowed by the previous level's mask (empty: lo > hi).
std::pair<int, int> mask_range(const Grid& G) {
    const Mask& m = *G.mask_in;
    std::size_t lin = 0;
    for (int j = 0; j + 1 < G.r; ++j) {
        int c = std::clamp(G.idx[j] / 2, -m.K[j], m.K[j]);
        lin = lin * (2 * m.K[j] + 1) + (c + m.K[j]);
    }
    int l = m.lo[lin], u = m.hi[lin];
    if (l > u) return {1, 0};
    const int K = G.K[G.r - 1];
    return {std::max(-K, 2 * l - 2), std::min(K, 2 * u + 2)};
}

void inner_row(Grid& G, cplx P, std::vector<long>& base, std::vector<double>& omega_base, Accum& acc,
               std::size_t row) {
    const int d = G.r - 1;
    const int K = G.K[d];
    int k_lo = d == 0 ? 0 : -K, k_hi = K;
    if (G.mask_in && d > 0) std::tie(k_lo, k_hi) = mask_range(G);
    int lo = 1, hi = 0;
    if (G.fast_inner) {
        const auto& close = G.closes_at[d];
        const std::size_t nc = close.size();
        const cplx* tp[8];
        long st[8];
        for (std::size_t c = 0; c < nc; ++c) {
            const Cross& cr = G.cross[close[c]];
            tp[c] = cr.table.data() + base[close[c]] + cr.J;
            st[c] = cr.iw[d];
        }
        const cplx* sp = G.sep[d].data() + K;
        cplx sum = 0;
        double l1 = 0;
        for (int k = k_lo; k <= k_hi; ++k) {
            cplx v = P * sp[k];
            for (std::size_t c = 0; c < nc; ++c) v *= tp[c][st[c] * k];
            if (d == 0 && k > 0) v *= 2.0;
            double a = std::abs(v.real()) + std::abs(v.imag());
            sum += v;
            l1 += a;
            if (a >= G.thr) {
                if (lo > hi) lo = k;
                hi = k;
            }
        }
        acc.sum += sum;
        acc.l1 += l1;
        acc.evaluations += std::max(0, k_hi - k_lo + 1);
    } else {
        const auto& close = G.closes_at[d];
        for (int k = k_lo; k <= k_hi; ++k) {
            cplx v = P * G.sep[d][k + K];
            if (d == 0 && k > 0) v *= 2.0;
            for (std::size_t ci : close) {
                const Cross& c = G.cross[ci];
                const GammaFactor& f = G.mb->factors[c.factor];
                if (c.integer) {
                    v *= c.table[base[ci] + static_cast<long>(c.iw[d]) * k + c.J];
                } else {
                    double x = arg_at(f, G.sigma);
                    v *= factor_value(f, cplx(x, omega_base[ci] + f.weights[d] * G.h * k), c.norm);
                }
            }
            double a = std::abs(v.real()) + std::abs(v.imag());
            acc.sum += v;
            acc.l1 += a;
            acc.evaluations += 1;
            if (a >= G.thr) {
                if (lo > hi) lo = k;
                hi = k;
            }
        }
    }
    G.row_lo[row] = lo;
    G.row_hi[row] = hi;
}

void sum_rec(Grid& G, int d, cplx P, std::vector<long>& base, std::vector<double>& omega_base, Accum& acc,
             std::size_t lin) {
    if (d + 1 == G.r) {
        inner_row(G, P, base, omega_base, acc, lin);
        return;
    }
    const int K = G.K[d];
    const int k_lo = d == 0 ? 0 : -K;
    const auto& sep = G.sep[d];
    const auto& touch = G.touches[d];
    const auto& close = G.closes_at[d];
    auto& saved = G.saved[d];
    auto& saved_w = G.saved_w[d];
    for (std::size_t t = 0; t < touch.size(); ++t) {
        saved[t] = base[touch[t]];
        saved_w[t] = omega_base[touch[t]];
    }
    for (int k = k_lo; k <= K; ++k) {
        cplx v = P * sep[k + K];
        if (d == 0 && k > 0) v *= 2.0;
        std::size_t lin_k = lin * (2 * K + 1) + (k + K);
        if (std::abs(v.real()) + std::abs(v.imag()) < G.prune / G.remaining_max[d]) continue;
        G.idx[d] = k;
        for (std::size_t t = 0; t < touch.size(); ++t) {
            const Cross& c = G.cross[touch[t]];
            base[touch[t]] = saved[t] + static_cast<long>(c.integer ? c.iw[d] : 0) * k;
            omega_base[touch[t]] = saved_w[t] + G.mb->factors[c.factor].weights[d] * G.h * k;
        }
        for (std::size_t ci : close) {
            const Cross& c = G.cross[ci];
            if (c.integer) {
                v *= c.table[base[ci] + c.J];
            } else {
                const GammaFactor& f = G.mb->factors[c.factor];
                double x = arg_at(f, G.sigma);
                v *= factor_value(f, cplx(x, omega_base[ci]), c.norm);
            }
        }
        sum_rec(G, d + 1, v, base, omega_base, acc, lin_k);
    }
    for (std::size_t t = 0; t < touch.size(); ++t) {
        base[touch[t]] = saved[t];
        omega_base[touch[t]] = saved_w[t];
    }
}

struct LevelResult {
    double value;  // mantissa
    double l1;
    double evaluations;
    double log_scale;
};

LevelResult trapezoid(const MellinBarnes& mb, const std::vector<double>& sigma, double h,
                      const std::vector<int>& K, double rel_tol, double thr, const Mask* mask_in,
                      Mask* mask_out) {
    const int r = mb.r;
    Grid G;
    G.r = r;
    G.h = h;
    G.K = K;
    G.mb = &mb;
    G.sigma = sigma;
    G.sep.assign(r, {});
    G.closes_at.assign(r, {});
    G.touches.assign(r, {});
    G.mask_in = mask_in;
    G.idx.assign(r, 0);

    double log_scale = mb.log_const;
    double sign = mb.sign;
    for (int i = 0; i < r; ++i) {
        log_scale += sigma[i] * mb.log_x[i];
        G.sep[i].assign(2 * K[i] + 1, cplx(1.0, 0.0));
        for (int k = -K[i]; k <= K[i]; ++k)
            G.sep[i][k + K[i]] = std::exp(cplx(0.0, h * k * mb.log_x[i]));
    }
    for (std::size_t fi = 0; fi < mb.factors.size(); ++fi) {
        const GammaFactor& f = mb.factors[fi];
        double x = arg_at(f, sigma);
        std::vector<int> support;
        for (int i = 0; i < r; ++i)
            if (f.weights[i] != 0.0) support.push_back(i);
        if (support.empty()) {
            // constant: magnitude to the scale, sign kept separately
            if (f.power < 0 && x <= 0 && x == std::floor(x)) return {0.0, 0.0, 0.0, 0.0};
            log_scale += f.power * std::lgamma(x);
            if (x < 0 && static_cast<long>(std::floor(x)) % 2 != 0) sign = -sign;
            continue;
        }
        double norm = normalizer(f, x);
        log_scale += norm;
        if (support.size() == 1) {
            int i = support[0];
            double w = f.weights[i];
            for (int k = -K[i]; k <= K[i]; ++k)
                G.sep[i][k + K[i]] *= factor_value(f, cplx(x, w * h * k), norm);
            continue;
        }
        Cross c;
        c.factor = fi;
        c.norm = norm;
        c.integer = true;
        c.last_var = support.back();
        c.iw.assign(r, 0);
        long J = 0;
        for (int i : support) {
            double w = f.weights[i];
            if (std::abs(w - std::round(w)) > 1e-12) c.integer = false;
            c.iw[i] = static_cast<int>(std::lround(w));
            J += std::abs(c.iw[i]) * static_cast<long>(K[i]);
        }
        if (c.integer) {
            c.J = static_cast<int>(J);
            c.table.resize(2 * J + 1);
            for (long j = -J; j <= J; ++j) c.table[j + J] = factor_value(f, cplx(x, h * j), norm);
        } else {
            c.J = 0;
        }
        std::size_t idx = G.cross.size();
        G.closes_at[c.last_var].push_back(idx);
        for (int i : support) G.touches[i].push_back(idx);
        G.cross.push_back(std::move(c));
    }

    // Bound on the product of all factors still to be multiplied from depth d
    // on; used to skip negligible sub-grids.
    G.remaining_max.assign(r + 1, 1.0);
    for (int d = r - 1; d >= 0; --d) {
        double m = 0;
        for (const auto& v : G.sep[d]) m = std::max(m, std::abs(v));
        for (std::size_t ci : G.closes_at[d]) {
            double cm = 1.0;
            if (G.cross[ci].integer) {
                cm = 0;
                for (const auto& v : G.cross[ci].table) cm = std::max(cm, std::abs(v));
            } else {
                cm = 1e300;
            }
            m *= cm;
        }
        G.remaining_max[d] = std::max(1e-300, std::min(1e300, m * G.remaining_max[d + 1]));
    }
    G.prune = 1e-4 * rel_tol;
    G.thr = thr;
    G.fast_inner = G.closes_at[r - 1].size() <= 8;
    for (std::size_t ci : G.closes_at[r - 1])
        if (!G.cross[ci].integer) G.fast_inner = false;
    G.saved.assign(r, {});
    G.saved_w.assign(r, {});
    for (int d = 0; d < r; ++d) {
        G.saved[d].resize(G.touches[d].size());
        G.saved_w[d].resize(G.touches[d].size());
    }

    std::size_t nrows = 1;
    for (int j = 0; j + 1 < r; ++j) nrows *= 2 * K[j] + 1;
    G.row_lo.assign(nrows, 1);
    G.row_hi.assign(nrows, 0);

    std::vector<long> base(G.cross.size(), 0);
    std::vector<double> omega_base(G.cross.size(), 0.0);
    Accum acc;
    sum_rec(G, 0, 1.0, base, omega_base, acc, 0);

    if (mask_out) {
        // dilate by one cell along every row axis
        std::vector<int> lo(G.row_lo), hi(G.row_hi);
        std::size_t stride = 1;
        for (int j = r - 2; j >= 0; --j) {
            const std::size_t n = 2 * K[j] + 1;
            std::vector<int> nlo(lo), nhi(hi);
            for (std::size_t i = 0; i < nrows; ++i) {
                if (lo[i] > hi[i]) continue;
                std::size_t pos = (i / stride) % n;
                for (std::size_t nb : {pos > 0 ? i - stride : i, pos + 1 < n ? i + stride : i}) {
                    if (nlo[nb] > nhi[nb]) {
                        nlo[nb] = lo[i];
                        nhi[nb] = hi[i];
                    } else {
                        nlo[nb] = std::min(nlo[nb], lo[i]);
                        nhi[nb] = std::max(nhi[nb], hi[i]);
                    }
                }
            }
            lo.swap(nlo);
            hi.swap(nhi);
            stride *= n;
        }
        double count = 0;
        for (std::size_t i = 0; i < nrows; ++i)
            if (lo[i] <= hi[i]) count += hi[i] - lo[i] + 1;
        mask_out->K = K;
        mask_out->lo = std::move(lo);
        mask_out->hi = std::move(hi);
        double full = static_cast<double>(nrows) * (2 * K[r - 1] + 1);
        mask_out->fill = std::clamp(2.0 * count / full, 1e-6, 1.0);
    }

    double meas = std::pow(h / (2.0 * kPi), r);
    return {sign * acc.sum.real() * meas, acc.l1 * meas, acc.evaluations, log_scale};
}

// Truncation along a direction: last t where the integrand exceeds
// tol × running maximum.
double probe(const MellinBarnes& mb, const std::vector<double>& sigma, const std::vector<int>& dir,
             double step, double log_tol, double t_cap) {
    const int r = mb.r;
    std::vector<cplx> z(r);
    auto at = [&](double t) {
        for (int i = 0; i < r; ++i) z[i] = cplx(sigma[i], t * dir[i]);
        return log_integrand(mb, z).real();
    };
    double runmax = at(0.0);
    double last = 0;
    int quiet = 0;
    for (double t = step; t <= t_cap; t += step) {
        double v = at(t);
        if (v > runmax) runmax = v;
        if (v > runmax + log_tol) {
            last = t;
            quiet = 0;
        } else if (++quiet > 8 && t > 2.0 * last + 1.0) {
            break;
        }
    }
    return last + 2.0 * step;
}

Evaluation finish(Evaluation ev, double mantissa, double err, double log_scale) {
    ev.mantissa = mantissa;
    ev.log_scale = log_scale;
    double sc = std::exp(log_scale);
    ev.value = mantissa * sc;
    ev.error = err * sc;
    return ev;
}

}  // namespace

namespace {

Evaluation integrate_once(const MellinBarnes& mb, const ContourSpec& contour) {
    mb.validate();
    contour.validate();
    const int r = mb.r;
    Evaluation ev;

    std::vector<double> sigma;
    if (!contour.abscissa.empty()) {
        if (static_cast<int>(contour.abscissa.size()) != r)
            throw ConfigError("contour abscissa list has wrong length");
        sigma = contour.abscissa;
        for (const auto& f : mb.factors) {
            if (f.power < 0) continue;
            double x = arg_at(f, sigma);
            if (!(x > 0)) {
                std::ostringstream os;
                os << "contour abscissa does not separate poles (numerator argument " << x << ")";
                throw ConfigError(os.str());
            }
        }
    } else {
        sigma = place_contour(mb, contour.placement);
    }
    ev.abscissa = sigma;
    if (std::getenv("RISSEC_MB_DEBUG")) {
        std::fprintf(stderr, "contour");
        for (double v : sigma) std::fprintf(stderr, " %g", v);
        std::fprintf(stderr, "  log|f| %g\n", log_integrand(mb, std::vector<cplx>(sigma.begin(), sigma.end())).real());
    }

    // Strip half-widths per axis and curvature scales at the contour.
    std::vector<double> delta(r, std::numeric_limits<double>::infinity());
    std::vector<double> curv(r, 0.0);
    for (const auto& f : mb.factors) {
        double x = arg_at(f, sigma);
        Envelope e = envelope(x, f.power);
        for (int i = 0; i < r; ++i) {
            double w = f.weights[i];
            if (w == 0.0) continue;
            if (f.power > 0) delta[i] = std::min(delta[i], x / std::abs(w));
            curv[i] += e.d2 * w * w;
        }
    }
    double h0 = 1.0;
    for (int i = 0; i < r; ++i) {
        if (std::isfinite(delta[i])) h0 = std::min(h0, 2.0 * kPi * delta[i] / std::log(1e4));
        if (curv[i] > 0) h0 = std::min(h0, 0.5 / std::sqrt(curv[i]));
    }
    h0 = std::max(h0, 1e-4);

    // Truncation box from probes along axes and diagonals; log_tol is
    // relative to the running maximum of |f| along each ray.
    const bool auto_box = !(contour.half_extent > 0);
    auto box = [&](double log_tol) {
        std::vector<double> w(r, 0.0);
        double t_cap = std::min(0.5 * contour.node_budget * h0, 2000.0);
        int total = 1;
        for (int i = 0; i < r; ++i) total *= 3;
        for (int code = 1; code < total; ++code) {
            std::vector<int> dir(r);
            int c = code;
            for (int i = 0; i < r; ++i) {
                dir[i] = c % 3 - 1;
                c /= 3;
            }
            int first = 0;
            while (first < r && dir[first] == 0) ++first;
            if (first == r || dir[first] < 0) continue;  // ±dir are conjugate
            double cut = probe(mb, sigma, dir, std::min(h0, 0.25), log_tol, t_cap);
            for (int i = 0; i < r; ++i)
                if (dir[i] != 0) w[i] = std::max(w[i], cut);
        }
        return w;
    };
    const double base_log_tol = std::log(contour.rel_tol * 1e-3);
    std::vector<double> wmax = auto_box ? box(base_log_tol) : std::vector<double>(r, contour.half_extent);
    bool reboxed = false;
    ev.half_extent = wmax;

    double prev = 0;
    bool have_prev = false;
    double last_err = std::numeric_limits<double>::infinity();
    // In three or more dimensions an extra coarse pass is cheap and supplies
    // the row mask for the first full-resolution level.
    const int first_level = r >= 3 ? -1 : 0;
    Mask mask;
    bool have_mask = false;
    double rho = 1.0;
    for (int level = first_level; level < 24; ++level) {
        double h = h0 / std::pow(2.0, level);
        std::vector<int> K(r);
        double cost = 1;
        for (int i = 0; i < r; ++i) {
            double k = std::ceil(wmax[i] / h);
            if (2 * k + 1 > contour.node_budget) {
                std::ostringstream os;
                os << "Mellin-Barnes quadrature exceeded node budget " << contour.node_budget
                   << " on axis " << i << " (achieved relative error " << last_err << ")";
                throw ConvergenceError(os.str(), last_err);
            }
            K[i] = static_cast<int>(k);
            cost *= 2 * k + 1;
        }
        if (have_mask) cost *= mask.fill;
        if (0.5 * cost > contour.cost_ceiling) {
            std::ostringstream os;
            os << "Mellin-Barnes quadrature cost guard: " << 0.5 * cost << " evaluations exceed ceiling "
               << contour.cost_ceiling << " (achieved relative error " << last_err << ")";
            throw ConvergenceError(os.str(), last_err);
        }
        // Mask threshold relative to the integrand at the contour's real
        // point (normalized to about 1 there), lowered by the cancellation
        // ratio |I| / ∫|f| seen on the previous level.
        double thr = 1e-3 * contour.rel_tol * (have_prev ? rho : 1e-3);
        Mask next;
        LevelResult lr =
            trapezoid(mb, sigma, h, K, contour.rel_tol, thr, have_mask ? &mask : nullptr, &next);
        rho = std::min(1.0, std::abs(lr.value) / std::max(lr.l1, 1e-300));
        mask = std::move(next);
        have_mask = true;
        // Strong cancellation: tails cut at rel_tol of the peak are as large
        // as the result. Widen the box once and restart the refinement.
        // An absolute target caps how far the threshold needs to drop.
        double need = rho;
        if (contour.abs_tol > 0)
            need = std::max(need, 1e-2 * contour.abs_tol / (contour.rel_tol * lr.l1 * std::exp(lr.log_scale)));
        if (auto_box && !reboxed && need < 1e-2 && lr.value != 0) {
            reboxed = true;
            auto wider = box(base_log_tol + std::log(need));
            bool grew = false;
            for (int i = 0; i < r; ++i)
                if (wider[i] > 1.05 * wmax[i]) {
                    wmax[i] = wider[i];
                    grew = true;
                }
            if (grew) {
                ev.evaluations += lr.evaluations;
                ev.half_extent = wmax;
                have_prev = false;
                have_mask = false;
                level = first_level - 1;
                continue;
            }
        }
        ev.evaluations += lr.evaluations;
        ev.levels = level - first_level + 1;
        ev.nodes.assign(K.begin(), K.end());
        for (int& n : ev.nodes) n = 2 * n + 1;
        if (!std::isfinite(lr.value))
            throw ConvergenceError("Mellin-Barnes quadrature produced a non-finite value", last_err);
        if (std::getenv("RISSEC_MB_DEBUG"))
            std::fprintf(stderr, "level %d h %g K %d %d value %.12g l1 %g log_scale %g evals %g\n", level, h, K[0],
                         r > 1 ? K[1] : 0, lr.value, lr.l1, lr.log_scale, lr.evaluations);
        // |I| ≤ ∫|f|: a term that is negligible in absolute terms needs no
        // refinement. Factor 2 covers the coarse estimate of ∫|f|.
        if (contour.abs_tol > 0 && 2.0 * lr.l1 * std::exp(lr.log_scale) <= contour.abs_tol)
            return finish(ev, lr.value, lr.l1, lr.log_scale);
        if (have_prev) {
            double mag = std::max(std::abs(lr.value), 1e-300);
            double d = std::abs(lr.value - prev) / mag;
            // Trapezoid error on an analytic strip squares when h halves, so
            // the error of the finer level is about d² (with a safety factor).
            // rounding floor plus the truncation threshold used by the probes
            double floor_err = (1e-15 + 1e-3 * contour.rel_tol) * lr.l1 / mag;
            double est = std::max(100.0 * d * d, floor_err);
            last_err = est;
            if (d < 1e-2 && est <= contour.rel_tol) {
                return finish(ev, lr.value, est * mag, lr.log_scale);
            }
            // Absolute target: a value that is tiny next to ∫|f| (e.g. a
            // probability correction that vanishes) never converges in the
            // relative sense, so judge the raw change between levels.
            if (contour.abs_tol > 0) {
                double err_abs = d < 1e-2 ? est * mag : std::max(std::abs(lr.value - prev), floor_err * mag);
                if (err_abs * std::exp(lr.log_scale) <= contour.abs_tol)
                    return finish(ev, lr.value, err_abs, lr.log_scale);
            }
            // Result dominated by cancellation: accept once the change sits
            // at the rounding floor.
            if (std::abs(lr.value - prev) <= 1e-13 * lr.l1) {
                return finish(ev, lr.value, std::max(std::abs(lr.value - prev), 1e-15 * lr.l1),
                              lr.log_scale);
            }
        }
        prev = lr.value;
        have_prev = true;
    }
    throw ConvergenceError("Mellin-Barnes quadrature did not converge", last_err);
}

}  // namespace

Evaluation integrate(const MellinBarnes& mb, const ContourSpec& contour) {
    try {
        return integrate_once(mb, contour);
    } catch (const ConvergenceError&) {
        // The saddle can sit so close to a pole that the step needed there
        // overruns the budget; the max-clearance contour is the fallback.
        if (!contour.abscissa.empty() || contour.placement != Placement::saddle) throw;
        ContourSpec c = contour;
        c.placement = Placement::center;
        try {
            return integrate_once(mb, c);
        } catch (const ConvergenceError&) {
        }
        throw;
    }
}

}  // namespace rissec::specfun
