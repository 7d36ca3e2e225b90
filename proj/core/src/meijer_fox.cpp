#include <cmath>
#include <sstream>

#include "rissec/errors.hpp"
#include "rissec/specfun.hpp"

namespace rissec::specfun {

namespace {

bool nonneg_integer(double v) { return v >= -1e-12 && std::abs(v - std::round(v)) < 1e-12; }

void finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + ": non-finite parameter");
}

GammaFactor factor(double offset, std::vector<double> w, int power) {
    GammaFactor f;
    f.offset = offset;
    f.weights = std::move(w);
    f.power = power;
    return f;
}

}  // namespace

void MeijerGSpec::validate() const {
    if (p < 0 || q < 0 || m < 0 || n < 0 || m > q || n > p)
        throw ConfigError("Meijer G: require 0 <= m <= q and 0 <= n <= p");
    if (static_cast<int>(a.size()) != p || static_cast<int>(b.size()) != q)
        throw ConfigError("Meijer G: parameter list sizes do not match p, q");
    for (double v : a) finite_or_throw(v, "Meijer G");
    for (double v : b) finite_or_throw(v, "Meijer G");
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i)
            if (nonneg_integer(a[i] - 1.0 - b[j])) {
                std::ostringstream os;
                os << "Meijer G: poles of Gamma(b_" << j + 1 << " - s) and Gamma(1 - a_" << i + 1
                   << " + s) coincide; no contour separates them";
                throw ConfigError(os.str());
            }
}

void FoxHSpec::validate() const {
    if (r < 1) throw ConfigError("Fox H: r must be at least 1");
    if (static_cast<int>(vars.size()) != r) throw ConfigError("Fox H: need one variable block per dimension");
    if (n_outer < 0 || n_outer > static_cast<int>(outer_upper.size()))
        throw ConfigError("Fox H: n_outer exceeds the outer upper list");
    for (const auto* list : {&outer_upper, &outer_lower})
        for (const auto& blk : *list) {
            finite_or_throw(blk.coeff, "Fox H");
            if (static_cast<int>(blk.weights.size()) != r)
                throw ConfigError("Fox H: outer weight vector has wrong length");
            for (double w : blk.weights) finite_or_throw(w, "Fox H");
        }
    for (const auto& v : vars) {
        if (v.m < 0 || v.n < 0 || v.m > v.q || v.n > v.p)
            throw ConfigError("Fox H: per-variable indices require 0 <= m <= q, 0 <= n <= p");
        if (static_cast<int>(v.upper.size()) != v.p || static_cast<int>(v.lower.size()) != v.q)
            throw ConfigError("Fox H: per-variable parameter list sizes do not match p, q");
        for (const auto* list : {&v.upper, &v.lower})
            for (const auto& pr : *list) {
                finite_or_throw(pr.coeff, "Fox H");
                if (!(pr.weight > 0)) throw ConfigError("Fox H: per-variable weights must be positive");
            }
    }
}

MellinBarnes compile(const MeijerGSpec& spec, double x) {
    spec.validate();
    if (!(x > 0)) throw DomainError("Meijer G: argument must be positive");
    MellinBarnes mb;
    mb.r = 1;
    mb.log_x = {std::log(x)};
    for (int j = 0; j < spec.q; ++j) {
        if (j < spec.m)
            mb.factors.push_back(factor(spec.b[j], {-1.0}, 1));
        else
            mb.factors.push_back(factor(1.0 - spec.b[j], {1.0}, -1));
    }
    for (int j = 0; j < spec.p; ++j) {
        if (j < spec.n)
            mb.factors.push_back(factor(1.0 - spec.a[j], {1.0}, 1));
        else
            mb.factors.push_back(factor(spec.a[j], {-1.0}, -1));
    }
    return mb;
}

MellinBarnes compile(const FoxHSpec& spec, std::span<const double> x) {
    spec.validate();
    if (static_cast<int>(x.size()) != spec.r) throw ConfigError("Fox H: argument count does not match r");
    MellinBarnes mb;
    mb.r = spec.r;
    for (double v : x) {
        if (!(v > 0)) throw DomainError("Fox H: arguments must be positive");
        mb.log_x.push_back(std::log(v));
    }
    auto neg = [](std::vector<double> w) {
        for (double& v : w) v = -v;
        return w;
    };
    for (std::size_t j = 0; j < spec.outer_upper.size(); ++j) {
        const auto& blk = spec.outer_upper[j];
        if (static_cast<int>(j) < spec.n_outer)
            mb.factors.push_back(factor(1.0 - blk.coeff, blk.weights, 1));
        else
            mb.factors.push_back(factor(blk.coeff, neg(blk.weights), -1));
    }
    for (const auto& blk : spec.outer_lower) mb.factors.push_back(factor(1.0 - blk.coeff, blk.weights, -1));
    for (int i = 0; i < spec.r; ++i) {
        const auto& v = spec.vars[i];
        auto unit = [&](double w) {
            std::vector<double> e(spec.r, 0.0);
            e[i] = w;
            return e;
        };
        for (int k = 0; k < v.q; ++k) {
            const auto& pr = v.lower[k];
            if (k < v.m)
                mb.factors.push_back(factor(pr.coeff, unit(-pr.weight), 1));
            else
                mb.factors.push_back(factor(1.0 - pr.coeff, unit(pr.weight), -1));
        }
        for (int k = 0; k < v.p; ++k) {
            const auto& pr = v.upper[k];
            if (k < v.n)
                mb.factors.push_back(factor(1.0 - pr.coeff, unit(pr.weight), 1));
            else
                mb.factors.push_back(factor(pr.coeff, unit(-pr.weight), -1));
        }
    }
    return mb;
}

Evaluation meijer_g(const MeijerGSpec& spec, double x, const ContourSpec& contour) {
    return integrate(compile(spec, x), contour);
}

Evaluation fox_h_bivariate(const FoxHSpec& spec, double x1, double x2, const ContourSpec& contour) {
    if (spec.r != 2) throw ConfigError("fox_h_bivariate: spec must have r = 2");
    const double x[2] = {x1, x2};
    return integrate(compile(spec, x), contour);
}

Evaluation fox_h_multivariate(const FoxHSpec& spec, std::span<const double> x, const ContourSpec& contour) {
    return integrate(compile(spec, x), contour);
}

}  // namespace rissec::specfun
