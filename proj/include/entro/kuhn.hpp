#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "entro/errors.hpp"
#include "entro/exponent.hpp"

namespace entro {

// Nonincreasing positive sequences given in closed form (analytic tails) or
// as a finite explicit list (zero beyond support).
struct GeometricSeq {
    double c = 1.0;      // sigma_k = c * ratio^k
    double ratio = 0.5;  // in (0,1)
};
struct PowerLawSeq {
    double c = 1.0;  // sigma_k = c * k^{-s}
    double s = 1.0;
};
struct FiniteSeq {
    std::vector<double> values;  // sigma_1..sigma_len, zero afterwards
};
using SigmaSeq = std::variant<GeometricSeq, PowerLawSeq, FiniteSeq>;

inline double sigma_at(const SigmaSeq& s, long long k) {
    if (std::holds_alternative<GeometricSeq>(s)) {
        const auto& g = std::get<GeometricSeq>(s);
        return g.c * std::pow(g.ratio, static_cast<double>(k));
    }
    if (std::holds_alternative<PowerLawSeq>(s)) {
        const auto& p = std::get<PowerLawSeq>(s);
        return p.c * std::pow(static_cast<double>(k), -p.s);
    }
    const auto& f = std::get<FiniteSeq>(s).values;
    return (k >= 1 && static_cast<size_t>(k) <= f.size()) ? f[k - 1] : 0.0;
}

namespace detail {

// sum_{k>=n} sigma_k^E with certified relative error <= 1e-10
inline double tail_power_sum(const SigmaSeq& s, long long n, double E) {
    if (std::holds_alternative<GeometricSeq>(s)) {
        const auto& g = std::get<GeometricSeq>(s);
        if (!(g.ratio > 0.0 && g.ratio < 1.0))
            throw DivergenceError("geometric sigma needs ratio in (0,1)");
        double rE = std::pow(g.ratio, E);
        return std::pow(g.c, E) * std::pow(g.ratio, E * static_cast<double>(n)) / (1.0 - rE);
    }
    if (std::holds_alternative<PowerLawSeq>(s)) {
        const auto& p = std::get<PowerLawSeq>(s);
        double a = p.s * E;
        if (!(a > 1.0))
            throw DivergenceError("power-law sigma^E diverges: s*E <= 1");
        double cE = std::pow(p.c, E);
        // partial sum to K, then integral-test bracket for the remainder:
        // int_K^inf <= sum_{k>K} <= int_{K-?}.. bracket width <= K^{-a}
        double partial = 0.0;
        long long K = n;
        for (;;) {
            double block = 0.0;
            long long stop = K + 4096;
            for (; K < stop; ++K) block += std::pow(static_cast<double>(K), -a);
            partial += block;
            double lo = std::pow(static_cast<double>(K), 1.0 - a) / (a - 1.0);
            double hi = std::pow(static_cast<double>(K - 1), 1.0 - a) / (a - 1.0);
            if (hi - lo <= 1e-10 * (partial + lo) || K > 100'000'000) {
                return cE * (partial + 0.5 * (lo + hi));
            }
        }
    }
    const auto& f = std::get<FiniteSeq>(s).values;
    double sum = 0.0;
    for (size_t k = static_cast<size_t>(std::max<long long>(n, 1)); k <= f.size(); ++k)
        sum += std::pow(f[k - 1], E);
    return sum;
}

inline double diag_exponent(Exponent p, Exponent q) {
    if (!(q < p)) throw std::invalid_argument("diagonal tail quantity needs q < p");
    if (p.is_inf()) return q.value();
    return p.value() * q.value() / (p.value() - q.value());
}

}  // namespace detail

// omega_n = (sum_{k>=n} sigma_k^{pq/(p-q)})^{1/q-1/p}; for p = inf the inner
// exponent is q and the outer one is 1/q.
inline double kuhn_omega(const SigmaSeq& sigma, Exponent p, Exponent q, long long n) {
    if (n < 1) throw std::invalid_argument("kuhn_omega: n >= 1 required");
    double E = detail::diag_exponent(p, q);
    double tail = detail::tail_power_sum(sigma, n, E);
    if (tail == 0.0) return 0.0;
    return std::pow(tail, inv_gap(q, p));
}

// max_{n<=N} omega_n / omega_{2n}: the smallest doubling constant witnessed up
// to index N. Once omega_{2n} hits zero (finite support), the scan stops and
// the last finite ratio stands.
inline double check_doubling(const SigmaSeq& sigma, Exponent p, Exponent q, long long N) {
    if (N < 1) throw std::invalid_argument("check_doubling: N >= 1 required");
    double best = 0.0;
    for (long long n = 1; n <= N; ++n) {
        double w2 = kuhn_omega(sigma, p, q, 2 * n);
        if (w2 == 0.0) break;
        double ratio = kuhn_omega(sigma, p, q, n) / w2;
        best = std::max(best, ratio);
    }
    return best;
}

}  // namespace entro
