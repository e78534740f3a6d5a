#pragma once

#include <cmath>
#include <stdexcept>

#include "entro/exponent.hpp"

namespace entro {

// Order envelope for e_k(I: l_p^nu -> l_q^nu). All logs base 2. For p <= q
// the three regimes meet at k = log2(nu) and k = nu; both boundaries are
// assigned to the middle regime so the function is well defined.
inline double schutt_envelope(Exponent p, Exponent q, long long nu, long long k) {
    if (nu < 1) throw std::invalid_argument("schutt_envelope: nu >= 1 required");
    if (k < 1) throw std::invalid_argument("schutt_envelope: k >= 1 required");
    const double kd = static_cast<double>(k);
    const double nud = static_cast<double>(nu);
    if (p.inv() >= q.inv()) {  // p <= q
        const double lognu = std::log2(nud);
        if (kd < lognu) return 1.0;
        if (kd <= nud) {
            double gap = p.inv() - q.inv();
            return std::pow(std::log2(1.0 + nud / kd) / kd, gap);
        }
        return std::exp2(-kd / nud) * std::pow(nud, inv_gap(q, p));
    }
    return std::exp2(-kd / nud) * std::pow(nud, inv_gap(q, p));
}

}  // namespace entro
