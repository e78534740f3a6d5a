#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "entro/entropy_oracle.hpp"
#include "entro/kuhn.hpp"

namespace entro {

// Certified bound sequence: values[k-1] bounds e_k of some operator.
// Stored nonincreasing (entropy numbers are).
struct BoundSequence {
    enum class Kind { Upper, Lower };
    Kind kind = Kind::Upper;
    std::vector<double> values;

    double at(size_t k) const {
        if (k < 1 || k > values.size()) throw std::out_of_range("BoundSequence index");
        return values[k - 1];
    }
    size_t max_index() const { return values.size(); }

    void make_nonincreasing() {
        if (kind == Kind::Upper) {
            for (size_t i = 1; i < values.size(); ++i)
                values[i] = std::min(values[i], values[i - 1]);
        } else {
            for (size_t i = values.size(); i-- > 1;)
                values[i - 1] = std::max(values[i - 1], values[i]);
        }
    }

    static BoundSequence upper(std::vector<double> v) {
        BoundSequence s{Kind::Upper, std::move(v)};
        s.make_nonincreasing();
        return s;
    }
    static BoundSequence lower(std::vector<double> v) {
        BoundSequence s{Kind::Lower, std::move(v)};
        s.make_nonincreasing();
        return s;
    }
};

inline BoundSequence oracle_upper_sequence(const OracleProfile& prof) {
    return BoundSequence::upper(prof.upper);
}
inline BoundSequence oracle_lower_sequence(const OracleProfile& prof) {
    return BoundSequence::lower(prof.lower);
}

// e_{k+l-1}(S+T) <= e_k(S) + e_l(T): best split per output index.
inline BoundSequence bound_sum(const BoundSequence& a, const BoundSequence& b) {
    if (a.kind != BoundSequence::Kind::Upper || b.kind != BoundSequence::Kind::Upper)
        throw std::invalid_argument("bound_sum expects upper bound sequences");
    size_t m_max = a.max_index() + b.max_index() - 1;
    std::vector<double> c(m_max, 0.0);
    for (size_t m = 1; m <= m_max; ++m) {
        double best = std::numeric_limits<double>::infinity();
        for (size_t k = 1; k <= a.max_index(); ++k) {
            size_t l = m + 1 - k;  // k + l - 1 = m
            if (l < 1 || l > b.max_index()) continue;
            best = std::min(best, a.at(k) + b.at(l));
        }
        c[m - 1] = best;
    }
    return BoundSequence::upper(std::move(c));
}

// e_m(ST) <= min(||S|| e_m(T), ||T|| e_m(S), min_{k+l-1=m} e_k(S) e_l(T))
inline BoundSequence bound_compose(const BoundSequence& a, const BoundSequence& b,
                                   double norm_s, double norm_t) {
    if (a.kind != BoundSequence::Kind::Upper || b.kind != BoundSequence::Kind::Upper)
        throw std::invalid_argument("bound_compose expects upper bound sequences");
    size_t m_max = a.max_index() + b.max_index() - 1;
    std::vector<double> c(m_max, std::numeric_limits<double>::infinity());
    for (size_t m = 1; m <= m_max; ++m) {
        double best = std::numeric_limits<double>::infinity();
        if (m <= b.max_index()) best = std::min(best, norm_s * b.at(m));
        if (m <= a.max_index()) best = std::min(best, norm_t * a.at(m));
        for (size_t k = 1; k <= a.max_index(); ++k) {
            size_t l = m + 1 - k;
            if (l < 1 || l > b.max_index()) continue;
            best = std::min(best, a.at(k) * b.at(l));
        }
        c[m - 1] = best;
    }
    return BoundSequence::upper(std::move(c));
}

// e_{n + floor(log2(family)) + 1}(V) <= sup_member e_n + approximation defect
struct FamilyBound {
    long long index;
    double bound;
};
inline FamilyBound family_bound(double per_member_bound, long long family_size,
                                double approx_error, long long n) {
    if (family_size < 1) throw std::invalid_argument("family_bound: family_size >= 1");
    if (approx_error < 0) throw std::invalid_argument("family_bound: approx_error >= 0");
    long long shift = static_cast<long long>(std::floor(std::log2(static_cast<double>(family_size))));
    return {n + shift + 1, per_member_bound + approx_error};
}

// min(block norms) * certified lower for e_n of the block identity
inline double block_lower_bound(const std::vector<double>& block_norms,
                                const EntropyInterval& oracle_idm) {
    if (block_norms.empty()) throw std::invalid_argument("block_lower_bound: empty block list");
    double m = block_norms[0];
    for (double v : block_norms) m = std::min(m, v);
    return m * oracle_idm.lower;
}

// omega_n built from a block-norm profile: an order-only lower rate (the
// corollary's constant is unknown), not a certified numeric bound.
inline double tail_lower_bound(const SigmaSeq& block_norm_profile, Exponent p, Exponent q,
                               long long n) {
    return kuhn_omega(block_norm_profile, p, q, n);
}

}  // namespace entro
