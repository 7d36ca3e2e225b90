#include "rissec/secrecy.hpp"

#include <cmath>
#include <numbers>

#include "mb_build.hpp"
#include "rissec/errors.hpp"

namespace rissec::secrecy {

using detail::Builder;
using snrdist::ProductLaw;
using W = std::vector<double>;

namespace {

double log_base(LogBase b) { return b == LogBase::bits ? std::log(2.0) : 1.0; }

W add(W a, const W& b, double sb = 1.0) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += sb * b[i];
    return a;
}
W neg(W a) {
    for (double& v : a) v = -v;
    return a;
}

// P(X ≤ w) for X a sum of independent laws, one contour variable per law:
// Π M_i(−t_i) Γ(t_i) / Γ(1 + Σt) · w^{Σt}. Returns the exponent Σt.
W cdf_piece(Builder& b, const std::vector<ProductLaw>& laws, const std::vector<int>& vars) {
    W sum(b.r(), 0.0);
    for (std::size_t i = 0; i < laws.size(); ++i) {
        W e = b.unit(vars[i]);
        b.moment(laws[i], 0.0, neg(e)).gamma(0.0, e);
        sum = add(sum, e);
    }
    b.gamma(1.0, sum, -1);
    return sum;
}

// P(X > z) for one law: M(v)/v · z^{−v}. Returns the exponent −v.
W ccdf_piece(Builder& b, const ProductLaw& law, int var) {
    W e = b.unit(var);
    b.moment(law, 0.0, e).reciprocal(0.0, e);
    return neg(e);
}

// Correction term of P(U + V > z): M_U(v₁)M_V(v₂) Γ(−v₁)Γ(−v₂)/Γ(1−v₁−v₂) z^{−v₁−v₂},
// with Γ(−v) = −Γ(1−v)Γ(v)/Γ(1+v) (the two signs cancel).
W ccdf_cross_piece(Builder& b, const ProductLaw& u, const ProductLaw& v, int v1, int v2) {
    W e1 = b.unit(v1), e2 = b.unit(v2);
    b.moment(u, 0.0, e1).moment(v, 0.0, e2);
    for (const W& e : {e1, e2}) b.gamma(1.0, neg(e)).reciprocal(0.0, e);
    W sum = add(e1, e2);
    b.gamma(1.0, neg(sum), -1);
    return neg(sum);
}

// ∫₀^∞ z^{e}/(1+z) dz = Γ(1+e)Γ(−e) for −1 < e < 0.
void z_integral(Builder& b, const W& e) { b.gamma(1.0, e).gamma(0.0, neg(e)); }

// Γ(ζ)Γ(−p−ζ)/Γ(−p) · ratio^{−ζ}: term of (1 + ratio·Y)^p with ζ on (−1, −p);
// the factor E[Y^{−ζ}] is added by the caller.
void binomial_kernel(Builder& b, const W& p, int zeta, double log_ratio) {
    W ez = b.unit(zeta);
    b.reflected_gamma(0.0, ez, 0);
    b.gamma(0.0, neg(add(p, ez)));
    b.gamma(0.0, neg(p), -1);
    b.power(log_ratio, 0.0, neg(ez));
}

Term evaluate(const std::string& name, const specfun::MellinBarnes& mb, const specfun::ContourSpec& c) {
    auto ev = specfun::integrate(mb, c);
    return {name, ev.value, ev.error, ev.evaluations};
}

SecrecyResult assemble(std::string method, std::vector<Term> terms, const std::vector<double>& signs,
                       double divisor) {
    SecrecyResult r;
    r.method = std::move(method);
    double biggest = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        terms[i].value *= signs[i] / divisor;
        terms[i].error /= divisor;
        r.value += terms[i].value;
        r.error_estimate += terms[i].error;
        biggest = std::max(biggest, std::abs(terms[i].value));
    }
    if (terms.size() > 1 && std::abs(r.value) < 1e-3 * biggest) {
        r.low_confidence = true;
        r.warnings.push_back("terms cancel to below 1e-3 of the largest; prefer the Monte-Carlo estimate");
    }
    r.terms = std::move(terms);
    return r;
}

void require_case(const SecrecyQuery& q, bool direct, const char* op) {
    if (q.reader.direct() != direct || q.eve.direct() != direct)
        throw ConfigError(std::string(op) + ": reader and Eve handles must both be " +
                          (direct ? "direct-link" : "no-direct-link") + " distributions");
}

// SOP contributions are probabilities: an absolute target is meaningful.
specfun::ContourSpec probability_contour(const specfun::ContourSpec& c) {
    specfun::ContourSpec out = c;
    if (out.abs_tol == 0) out.abs_tol = 1e-2 * c.rel_tol;
    return out;
}

}  // namespace

SecrecyQuery make_query(const snrdist::ScenarioConfig& cfg, const snrdist::DerivedConstants& k, Mode mode,
                        const specfun::ContourSpec& contour) {
    return {snrdist::SnrDistribution(snrdist::Receiver::reader, cfg.direct_links, k, contour),
            snrdist::SnrDistribution(snrdist::Receiver::eve, cfg.direct_links, k, contour),
            k.R_t,
            k.R_t_prime,
            cfg.base,
            mode,
            contour};
}

// E[(ln(1+γ_R) − ln(1+γ_E))⁺] = ∫₀^∞ F_E(z) F̄_R(z) / (1+z) dz
SecrecyResult asc_nodirect(const SecrecyQuery& q) {
    require_case(q, false, "asc_nodirect");
    Builder b(2);
    W e = cdf_piece(b, {q.eve.terms()[0]}, {0});
    W r = ccdf_piece(b, q.reader.terms()[0], 1);
    z_integral(b, add(e, r));
    return assemble("exact", {evaluate("F_E*Fbar_R", b.get(), q.contour)}, {1.0}, log_base(q.base));
}

// F̄_R = F̄_R1 + F̄_R2 − cross, F_E a two-law CDF.
SecrecyResult asc_direct(const SecrecyQuery& q) {
    require_case(q, true, "asc_direct");
    const auto& E = q.eve.terms();
    const auto& R = q.reader.terms();
    std::vector<Term> terms;
    const char* names[] = {"F_E*Fbar_R2", "F_E*Fbar_R1"};
    for (int i = 0; i < 2; ++i) {
        Builder b(3);
        W e = cdf_piece(b, E, {0, 1});
        W r = ccdf_piece(b, R[i], 2);
        z_integral(b, add(e, r));
        terms.push_back(evaluate(names[i], b.get(), q.contour));
    }
    // The 4-D correction only needs accuracy relative to the whole ASC; the
    // cheaper terms fix that scale.
    specfun::ContourSpec c4 = q.contour;
    if (c4.abs_tol == 0) c4.abs_tol = 0.5 * q.contour.rel_tol * std::abs(terms[0].value + terms[1].value);
    Builder b(4);
    W e = cdf_piece(b, E, {0, 1});
    W r = ccdf_cross_piece(b, R[0], R[1], 2, 3);
    z_integral(b, add(e, r));
    terms.push_back(evaluate("F_E*cross_R", b.get(), c4));
    return assemble("exact", std::move(terms), {1.0, 1.0, -1.0}, log_base(q.base));
}

namespace {

// SOP = Pr(γ_R < R_t γ_E + R_t′) = E[F_R(R_t γ_E + R_t′)], expanding
// (R_t′ + R_t γ_E)^p by Mellin-Barnes in powers of γ_E.
std::vector<Term> sop_outage_terms(const SecrecyQuery& q, const specfun::ContourSpec& c) {
    const auto& R = q.reader.terms();
    const int nr = static_cast<int>(R.size());
    std::vector<int> tv(nr);
    for (int i = 0; i < nr; ++i) tv[i] = i;
    // (γ_E1 + γ_E2)^q is expanded about the stronger term; expanding about a
    // much weaker one leaves a huge integrand that cancels to a small value.
    std::vector<ProductLaw> E = q.eve.terms();
    if (E.size() == 2 && E[1].moment(1.0) > E[0].moment(1.0)) std::swap(E[0], E[1]);
    std::vector<Term> terms;

    if (q.R_t_prime <= 0) {
        // E[(γ_E1 + γ_E2)^p] = M_E1(p) + ∫ Γ(ξ)Γ(−p−ξ)/Γ(−p) M_E1(p+ξ) M_E2(−ξ), ξ ∈ (−1, −p)
        Builder b(nr);
        W p = cdf_piece(b, R, tv);
        b.power(std::log(q.R_t), 0.0, p).moment(E[0], 0.0, p);
        terms.push_back(evaluate("E[F_R(R_t*gE)]", b.get(), c));
        if (E.size() == 2) {
            Builder b3(nr + 1);
            W p3 = cdf_piece(b3, R, tv);
            b3.power(std::log(q.R_t), 0.0, p3);
            binomial_kernel(b3, p3, nr, 0.0);
            W ex = b3.unit(nr);
            b3.moment(E[0], 0.0, add(p3, ex)).moment(E[1], 0.0, neg(ex));
            terms.push_back(evaluate("expansion_E2", b3.get(), c));
        }
        return terms;
    }
    const double lp = std::log(q.R_t_prime), lr = std::log(q.R_t / q.R_t_prime);
    {
        Builder b(nr);
        W p = cdf_piece(b, R, tv);
        b.power(lp, 0.0, p);
        terms.push_back(evaluate("F_R(R_t')", b.get(), c));
    }
    {
        Builder b(nr + 1);
        W p = cdf_piece(b, R, tv);
        b.power(lp, 0.0, p);
        binomial_kernel(b, p, nr, lr);
        b.moment(E[0], 0.0, neg(b.unit(nr)));
        terms.push_back(evaluate("expansion_E1", b.get(), c));
    }
    if (E.size() == 2) {
        // Second expansion of E[(γ_E1 + γ_E2)^{−ζ}]; its 1/Γ(ζ) cancels the
        // outer Γ(ζ), leaving Γ(−p−ζ)/Γ(−p) Γ(ξ)Γ(ζ−ξ) M_E1(ξ−ζ) M_E2(−ξ).
        Builder b(nr + 2);
        W p = cdf_piece(b, R, tv);
        b.power(lp, 0.0, p);
        W ez = b.unit(nr), ex = b.unit(nr + 1);
        b.gamma(0.0, neg(add(p, ez)));
        b.gamma(0.0, neg(p), -1);
        b.power(lr, 0.0, neg(ez));
        b.reflected_gamma(0.0, ex, 0);
        b.gamma(0.0, add(ez, ex, -1.0));
        b.moment(E[0], 0.0, add(ex, ez, -1.0)).moment(E[1], 0.0, neg(ex));
        terms.push_back(evaluate("expansion_E1E2", b.get(), c));
    }
    return terms;
}

// E[(R_t′ + R_t γ_E)^{e·ζ}] with e·ζ = −v < 0 appended to a reader piece; the
// negative power has a residue-free expansion
// (1 + a + b)^{−v} = ∬ Γ(s₁)Γ(s₂)Γ(v−s₁−s₂)/Γ(v) a^{−s₁} b^{−s₂}.
void eve_negative_power(Builder& b, const SecrecyQuery& q, const std::vector<ProductLaw>& E, const W& e,
                        int first) {
    W v = neg(e);
    if (q.R_t_prime <= 0) {
        b.power(std::log(q.R_t), 0.0, e);
        if (E.size() == 1) {
            b.moment(E[0], 0.0, e);
            return;
        }
        // (γ_E1 + γ_E2)^{−v} = ∫ Γ(s)Γ(v−s)/Γ(v) γ_E1^{s−v} γ_E2^{−s}
        W es = b.unit(first);
        b.gamma(0.0, es).gamma(0.0, add(v, es, -1.0)).gamma(0.0, v, -1);
        b.moment(E[0], 0.0, add(e, es)).moment(E[1], 0.0, neg(es));
        return;
    }
    b.power(std::log(q.R_t_prime), 0.0, e);
    const double lr = std::log(q.R_t / q.R_t_prime);
    W rest = v;
    for (std::size_t i = 0; i < E.size(); ++i) {
        W es = b.unit(first + static_cast<int>(i));
        b.gamma(0.0, es).power(lr, 0.0, neg(es)).moment(E[i], 0.0, neg(es));
        rest = add(rest, es, -1.0);
    }
    b.gamma(0.0, rest).gamma(0.0, v, -1);
}

// 1 − SOP = E[F̄_R(R_t γ_E + R_t′)]; free of cancellation when outage is likely.
std::vector<Term> sop_complement_terms(const SecrecyQuery& q, const specfun::ContourSpec& c) {
    const auto& R = q.reader.terms();
    const auto& E = q.eve.terms();
    const int ne = q.R_t_prime <= 0 ? static_cast<int>(E.size()) - 1 : static_cast<int>(E.size());
    std::vector<Term> terms;
    for (std::size_t i = 0; i < R.size(); ++i) {
        Builder b(1 + ne);
        W e = ccdf_piece(b, R[i], 0);
        eve_negative_power(b, q, E, e, 1);
        terms.push_back(evaluate(R.size() == 1 ? "Fbar_R" : (i == 0 ? "Fbar_R2" : "Fbar_R1"), b.get(), c));
    }
    if (R.size() == 2) {
        Builder b(2 + ne);
        W e = ccdf_cross_piece(b, R[0], R[1], 0, 1);
        eve_negative_power(b, q, E, e, 2);
        Term t = evaluate("cross_R", b.get(), c);
        t.value = -t.value;
        terms.push_back(t);
    }
    return terms;
}

SecrecyResult sop_any(const SecrecyQuery& q) {
    const auto c = probability_contour(q.contour);
    // Outage is likely when the mean reader SNR sits below the threshold it
    // must beat; evaluate whichever of SOP and 1 − SOP should be small.
    bool complement = q.reader.mean() < q.R_t * q.eve.mean() + q.R_t_prime;
    if (!complement) {
        auto outage = [&](const specfun::ContourSpec& cc) {
            auto terms = sop_outage_terms(q, cc);
            return assemble("exact", std::move(terms), std::vector<double>(terms.size(), 1.0), 1.0);
        };
        auto r = outage(c);
        // A small SOP needs a proportionally smaller absolute target.
        double tol = c.abs_tol;
        for (int pass = 0; pass < 2 && q.contour.abs_tol == 0; ++pass) {
            double wanted = r.value > 0 ? 1e-2 * c.rel_tol * r.value : 0.0;
            if (wanted > 0.5 * tol) break;
            specfun::ContourSpec cc = c;
            cc.abs_tol = tol = wanted;
            try {
                double before = r.value;
                r = outage(cc);
                if (std::abs(r.value - before) <= 1e-2 * std::abs(r.value)) break;
            } catch (const ConvergenceError& e) {
                r.warnings.push_back(std::string("relative refinement of a small SOP failed: ") + e.what());
                break;
            }
        }
        return r;
    }
    auto terms = sop_complement_terms(q, c);
    std::vector<Term> all{{"one", 1.0, 0, 0}};
    for (auto& t : terms) all.push_back(t);
    std::vector<double> signs(all.size(), -1.0);
    signs[0] = 1.0;
    auto r = assemble("exact-complement", std::move(all), signs, 1.0);
    // 1 − (tiny) is not a cancellation
    r.low_confidence = false;
    r.warnings.clear();
    return r;
}

}  // namespace

SecrecyResult sop_nodirect(const SecrecyQuery& q) {
    require_case(q, false, "sop_nodirect");
    return sop_any(q);
}

SecrecyResult sop_direct(const SecrecyQuery& q) {
    require_case(q, true, "sop_direct");
    return sop_any(q);
}

// High reader SNR: E[ln(1+γ_R)] → E[ln γ_R] and the positive part is inactive,
// so ASC → E[ln γ_R] − E[ln(1+γ_E)] with
// E[ln(1+γ_E)] = ∫ M_E(s) Γ(s)² Γ(1−s)/Γ(1+s) ds, 0 < s < 1.
SecrecyResult asc_asymptotic(const SecrecyQuery& q) {
    require_case(q, false, "asc_asymptotic");
    Builder b(1);
    W s{1.0};
    b.moment(q.eve.terms()[0], 0.0, s).gamma(0.0, s).gamma(0.0, s).gamma(1.0, neg(s)).gamma(1.0, s, -1);
    Term lead{"E[ln gR]", q.reader.terms()[0].log_mean(), 0, 0};
    Term eve = evaluate("E[ln(1+gE)]", b.get(), q.contour);
    auto r = assemble("asymptotic", {lead, eve}, {1.0, -1.0}, log_base(q.base));
    r.low_confidence = false;
    r.warnings.clear();
    return r;
}

// High reader SNR: F_R(w) ≈ A w^{p*} from the first pole of M_R(−t) right of
// the contour, so SOP → A · E[(R_t γ_E + R_t′)^{p*}].
SecrecyResult sop_asymptotic(const SecrecyQuery& q) {
    require_case(q, false, "sop_asymptotic");
    ProductLaw R = q.reader.terms()[0];
    const ProductLaw& E = q.eve.terms()[0];
    std::vector<std::string> warnings;

    auto first_pole = [&](int* which) {
        double best = INFINITY;
        for (std::size_t j = 0; j < R.gammas.size(); ++j)
            if (R.gammas[j].b > 0 && R.gammas[j].a / R.gammas[j].b < best) {
                best = R.gammas[j].a / R.gammas[j].b;
                *which = static_cast<int>(j);
            }
        return best;
    };
    int j = -1;
    double p = first_pole(&j);
    // a second pole at (nearly) the same place makes the leading term
    // logarithmic; the closed form assumes simple poles
    for (std::size_t i = 0; i < R.gammas.size(); ++i) {
        const auto& g = R.gammas[i];
        if (static_cast<int>(i) != j && g.b > 0 && std::abs(g.a / g.b - p) < 1e-6 * std::max(1.0, p)) {
            R.gammas[j].a *= 1.0 + 1e-6;
            warnings.push_back("coincident leading poles; parameter perturbed by 1e-6");
            p = first_pole(&j);
            break;
        }
    }
    if (!(p < E.upper()))
        throw DomainError("sop_asymptotic: E[gamma_E^p] diverges for the leading exponent p = " + std::to_string(p));

    // residue of Γ(a − b t) at t = a/b is −1/b; closing to the right flips the sign
    double log_A = R.log_coeff - p * R.log_scale - std::log(R.gammas[j].b) - std::log(p);
    double sign_A = 1;
    for (std::size_t i = 0; i < R.gammas.size(); ++i) {
        if (static_cast<int>(i) == j) continue;
        double arg = R.gammas[i].a - R.gammas[i].b * p;
        log_A += std::lgamma(arg);
        if (arg < 0 && static_cast<long>(std::floor(arg)) % 2 != 0) sign_A = -sign_A;
    }
    const double A = sign_A * std::exp(log_A);

    std::vector<Term> terms;
    if (q.R_t_prime <= 0) {
        terms.push_back({"A*R_t^p*E[gE^p]", A * std::pow(q.R_t, p) * E.moment(p), 0, 0});
    } else {
        const double ratio = q.R_t / q.R_t_prime;
        const int n = static_cast<int>(std::floor(p));
        const bool integer = std::abs(p - std::round(p)) < 1e-12;
        double poly = 0, binom = 1;
        const int kmax = integer ? static_cast<int>(std::round(p)) : n;
        for (int k = 0; k <= kmax; ++k) {
            poly += binom * std::pow(ratio, k) * E.moment(k);
            binom *= (p - k) / (k + 1);
        }
        const double scale = A * std::pow(q.R_t_prime, p);
        terms.push_back({"binomial", scale * poly, 0, 0});
        if (!integer) {
            // remainder of (1 + ratio·Y)^p past the first n+1 binomial terms,
            // contour ζ ∈ (−n−1, −p)
            Builder b(1);
            W z{1.0};
            b.reflected_gamma(0.0, z, n);
            b.gamma(-p, neg(z));
            b.gamma(-p, {0.0}, -1);
            b.power(std::log(ratio), 0.0, neg(z));
            b.moment(E, 0.0, neg(z));
            Term t = evaluate("remainder", b.get(), q.contour);
            t.value *= scale;
            t.error *= std::abs(scale);
            terms.push_back(t);
        }
    }
    std::vector<double> signs(terms.size(), 1.0);
    auto r = assemble("asymptotic", std::move(terms), signs, 1.0);
    r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
    return r;
}

SecrecyResult asc(const SecrecyQuery& q) {
    if (q.mode == Mode::asymptotic) return asc_asymptotic(q);
    return q.reader.direct() ? asc_direct(q) : asc_nodirect(q);
}

SecrecyResult sop(const SecrecyQuery& q) {
    if (q.mode == Mode::asymptotic) return sop_asymptotic(q);
    return q.reader.direct() ? sop_direct(q) : sop_nodirect(q);
}

}  // namespace rissec::secrecy
