#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "rissec/errors.hpp"
#include "rissec/specfun.hpp"
#include "specfun_internal.hpp"

namespace rissec::specfun {

namespace {

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr double kStirling[] = {
    1.0 / 12.0,          -1.0 / 360.0,         1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,    1.0 / 156.0,         -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0,
};

cplx stirling(cplx z) {
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    cplx inv = 1.0 / z;
    cplx inv2 = inv * inv;
    cplx series = 0;
    cplx pw = inv;
    for (double c : kStirling) {
        series += c * pw;
        pw *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + half_log_2pi + series;
}

void check_pole(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("log_gamma_complex: non-finite argument");
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()))
        throw DomainError("log_gamma_complex: pole at z = " + std::to_string(z.real()));
}

int shift_count(cplx z) {
    double target = std::abs(z.imag()) < 10.0 ? 10.0 : 0.0;
    return z.real() < target ? static_cast<int>(std::ceil(target - z.real())) : 0;
}

}  // namespace

// Principal branch: lnΓ(z+1) = lnΓ(z) + log z holds with the principal log,
// so shifting by a sum of principal logs keeps the branch.
cplx log_gamma_complex(cplx z) {
    check_pole(z);
    int n = shift_count(z);
    cplx acc = 0;
    for (int k = 0; k < n; ++k) {
        acc += std::log(z);
        z += 1.0;
    }
    return stirling(z) - acc;
}

// Same value modulo 2πi; one log for the whole shift. Only exp() of the
// result is meaningful.
cplx log_gamma_mod2pi(cplx z) {
    check_pole(z);
    int n = shift_count(z);
    cplx acc = 0;
    cplx prod = 1;
    for (int k = 0; k < n; ++k) {
        prod *= z;
        z += 1.0;
        if (std::abs(prod.real()) + std::abs(prod.imag()) > 1e150) {
            acc += std::log(prod);
            prod = 1;
        }
    }
    acc += std::log(prod);
    return stirling(z) - acc;
}

double digamma(double x) {
    if (x <= 0 && x == std::floor(x))
        throw DomainError("digamma: pole at x = " + std::to_string(x));
    return boost::math::digamma(x);
}

double trigamma(double x) {
    if (x <= 0 && x == std::floor(x))
        throw DomainError("trigamma: pole at x = " + std::to_string(x));
    return boost::math::trigamma(x);
}

}  // namespace rissec::specfun
