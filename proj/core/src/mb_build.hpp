#pragma once

#include <cmath>
#include <vector>

#include "rissec/snrdist.hpp"
#include "rissec/specfun.hpp"

namespace rissec::detail {

// Assembles gamma-product integrands in r contour variables ζ. Exponents are
// affine in ζ: s = s0 + w·ζ.
class Builder {
public:
    explicit Builder(int r) {
        mb_.r = r;
        mb_.log_x.assign(r, 0.0);
    }
    int r() const { return mb_.r; }
    std::vector<double> unit(int i, double w = 1.0) const {
        std::vector<double> e(mb_.r, 0.0);
        e[i] = w;
        return e;
    }
    // Γ(off + w·ζ)^power
    Builder& gamma(double off, const std::vector<double>& w, int power = 1) {
        bool any = false;
        for (double v : w) any = any || v != 0.0;
        if (!any) {
            mb_.log_const += power * std::lgamma(off);
            if (off < 0 && static_cast<long>(std::floor(off)) % 2 != 0) mb_.sign = -mb_.sign;
            return *this;
        }
        mb_.factors.push_back({off, w, power});
        return *this;
    }
    // base^{s0 + w·ζ}, given log(base)
    Builder& power(double log_base, double s0, const std::vector<double>& w) {
        mb_.log_const += s0 * log_base;
        for (int i = 0; i < mb_.r; ++i) mb_.log_x[i] += w[i] * log_base;
        return *this;
    }
    // E[X^{s0 + w·ζ}]
    Builder& moment(const snrdist::ProductLaw& law, double s0, const std::vector<double>& w) {
        power(law.log_scale, s0, w);
        for (const auto& g : law.gammas) {
            std::vector<double> wg(w);
            for (double& v : wg) v *= g.b;
            gamma(g.a + g.b * s0, wg, 1);
        }
        mb_.log_const += law.log_coeff;
        return *this;
    }
    // 1 / (s0 + w·ζ) = Γ(·)/Γ(1 + ·), valid where the argument is positive
    Builder& reciprocal(double s0, const std::vector<double>& w) {
        gamma(s0, w, 1);
        gamma(1.0 + s0, w, -1);
        return *this;
    }
    // Γ(z) for z = off + w·ζ on the strip (−n−1, −n), rewritten with
    // positive-argument gammas: (−1)^{n+1} Γ(z+n+1) Γ(−z−n) / Γ(1−z).
    Builder& reflected_gamma(double off, const std::vector<double>& w, int n) {
        std::vector<double> neg(w);
        for (double& v : neg) v = -v;
        gamma(off + n + 1, w, 1);
        gamma(-off - n, neg, 1);
        gamma(1.0 - off, neg, -1);
        if (n % 2 == 0) negate();
        return *this;
    }
    Builder& negate() {
        mb_.sign = -mb_.sign;
        return *this;
    }
    Builder& scale_log(double v) {
        mb_.log_const += v;
        return *this;
    }
    const specfun::MellinBarnes& get() const { return mb_; }

private:
    specfun::MellinBarnes mb_;
};

}  // namespace rissec::detail
