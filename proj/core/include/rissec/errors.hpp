#pragma once

#include <stdexcept>
#include <string>

namespace rissec {

// Bad input: invalid parameters, unparsable config, contour that does not
// separate the pole families.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of a function (e.g. a gamma pole).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature did not reach the requested tolerance within its budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_error(achieved) {}
    double achieved_error;
};

}  // namespace rissec
