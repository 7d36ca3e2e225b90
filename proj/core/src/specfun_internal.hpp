#pragma once

#include "rissec/specfun.hpp"

namespace rissec::specfun {

// lnΓ(z) modulo 2πi; cheaper than the principal branch.
cplx log_gamma_mod2pi(cplx z);

}  // namespace rissec::specfun
