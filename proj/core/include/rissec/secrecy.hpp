#pragma once

#include <string>
#include <vector>

#include "rissec/snrdist.hpp"

namespace rissec::secrecy {

using snrdist::LogBase;
using snrdist::SnrDistribution;

enum class Mode { exact, asymptotic };

struct SecrecyQuery {
    SnrDistribution reader;
    SnrDistribution eve;
    double R_t = 2, R_t_prime = 1;  // threshold transforms of R_s
    LogBase base = LogBase::bits;
    Mode mode = Mode::exact;
    specfun::ContourSpec contour;
};

// Reader/Eve handles and thresholds for one scenario.
SecrecyQuery make_query(const snrdist::ScenarioConfig& cfg, const snrdist::DerivedConstants& k,
                        Mode mode = Mode::exact, const specfun::ContourSpec& contour = {});

struct Term {
    std::string name;
    double value = 0;
    double error = 0;
    double evaluations = 0;
};

struct SecrecyResult {
    double value = 0;
    double error_estimate = 0;
    std::string method;
    std::vector<Term> terms;
    bool low_confidence = false;  // |sum| < 1e-3 · max |term|
    std::vector<std::string> warnings;
};

SecrecyResult asc_nodirect(const SecrecyQuery& q);
SecrecyResult sop_nodirect(const SecrecyQuery& q);
SecrecyResult asc_direct(const SecrecyQuery& q);
SecrecyResult sop_direct(const SecrecyQuery& q);
SecrecyResult asc_asymptotic(const SecrecyQuery& q);
SecrecyResult sop_asymptotic(const SecrecyQuery& q);

// Dispatch on the handles' link case and the query mode.
SecrecyResult asc(const SecrecyQuery& q);
SecrecyResult sop(const SecrecyQuery& q);

}  // namespace rissec::secrecy
