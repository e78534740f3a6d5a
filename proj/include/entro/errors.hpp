#pragma once

#include <stdexcept>
#include <string>

namespace entro {

// Parameter set falls on an excluded boundary or outside every covered case.
struct UnsupportedRegime : std::domain_error {
    explicit UnsupportedRegime(const std::string& what) : std::domain_error(what) {}
};

// Input exceeds the scale the brute-force oracles are meant for.
struct ScaleError : std::invalid_argument {
    explicit ScaleError(const std::string& what) : std::invalid_argument(what) {}
};

// A defining series fails to converge for the given exponents.
struct DivergenceError : std::domain_error {
    explicit DivergenceError(const std::string& what) : std::domain_error(what) {}
};

// Profile cannot produce a living tree / requested structure does not exist.
struct InfeasibleProfile : std::domain_error {
    explicit InfeasibleProfile(const std::string& what) : std::domain_error(what) {}
};

}  // namespace entro
