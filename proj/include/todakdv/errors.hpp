#pragma once

#include <stdexcept>
#include <string>

namespace todakdv {

// Bad input: profiles, sizes, configuration. Maps to CLI exit code 2.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Solver did not converge, bracketing failed, blow-up. Maps to exit code 3.
class NumericalFailure : public std::runtime_error {
public:
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace todakdv
