#pragma once

// Slowly varying correction factors used by weights and envelopes.  Both are
// log-powers with a +2 shift in the argument so they stay positive and finite
// down to y = 0; a constant factor is the exponent-zero special case.

#include <cmath>

namespace entro {

// tau(y) = (log2(y+2))^nu, or identically 1
struct TauSpec {
    bool log_power = false;
    double nu = 0.0;

    static TauSpec constant() { return TauSpec{}; }
    static TauSpec log_pow(double nu_) { return TauSpec{true, nu_}; }

    double eval(double y) const {
        if (!log_power) return 1.0;
        return std::pow(std::log2(y + 2.0), nu);
    }
    double exponent() const { return log_power ? nu : 0.0; }
};

// rho(y) = (log2(y+2))^{-lambda}, or identically 1
struct RhoSpec {
    bool log_power = false;
    double lambda = 0.0;

    static RhoSpec constant() { return RhoSpec{}; }
    static RhoSpec log_pow(double lambda_) { return RhoSpec{true, lambda_}; }

    double eval(double y) const {
        if (!log_power) return 1.0;
        return std::pow(std::log2(y + 2.0), -lambda);
    }
    double exponent() const { return log_power ? lambda : 0.0; }
};

}  // namespace entro
