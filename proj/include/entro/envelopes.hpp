#pragma once

// Closed-form order envelopes for the entropy numbers of tree summation
// operators (theorem8/theorem9) and of weighted Sobolev embeddings on h-set
// supports (sobolev_envelopes).  Each evaluator selects exactly one branch
// from its parameter set; boundary sets the source results exclude raise
// UnsupportedRegime instead of interpolating.  Logs are base 2 throughout and
// every envelope is defined for n >= 4 so log n stays away from 0.

#include <algorithm>
#include <cmath>
#include <string>

#include "entro/errors.hpp"
#include "entro/exponent.hpp"
#include "entro/hset.hpp"
#include "entro/slowly_varying.hpp"
#include "entro/summation.hpp"

namespace entro {

struct EnvelopeValue {
    std::string case_id;
    double value = 0.0;
};

struct TreeEnvelopeParams {
    WeightProfile weights;
    HSetProfile profile;
    Exponent p, q;

    void validate() const {
        if (q.is_inf())
            throw UnsupportedRegime("tree envelope: target exponent must be finite");
        if (weights.m_star != profile.m_star)
            throw std::invalid_argument("tree envelope: m_star mismatch between profiles");
        if (!weight_decay_admissible(weights, profile, q))
            throw UnsupportedRegime("tree envelope: weight/profile compatibility fails");
    }
};

namespace detail {
inline void require_n(long long n) {
    if (n < 4) throw std::domain_error("envelope: defined for n >= 4");
}
}  // namespace detail

// Entropy envelope for the summation operator on an h-set tree with theta > 0.
inline EnvelopeValue theorem8_envelope(const TreeEnvelopeParams& par, long long n) {
    detail::require_n(n);
    par.validate();
    const WeightProfile& wp = par.weights;
    const HSetProfile& hp = par.profile;
    double theta = hp.theta, gamma = hp.gamma;
    if (!(theta > 0.0))
        throw UnsupportedRegime("theorem8_envelope: requires theta > 0");
    double ig = inv_gap(par.q, par.p);  // 1/q - 1/p
    double A = pos_part(ig);
    double kappa = wp.kappa(), alpha = wp.alpha();
    double thq = theta / par.q.value();
    bool w_strict = wp.kappa_w > thq;  // strict decay vs the boundary branch of admissibility
    double dn = static_cast<double>(n);
    double ln = std::log2(dn);
    double rho_ln = wp.rho_eval(ln);
    double tau_ln = hp.tau.eval(ln);

    if (kappa > theta * A) {
        double a0 = w_strict ? alpha : alpha - par.q.inv();
        double val = std::pow(dn, -kappa / theta + ig) *
                     std::pow(ln, -a0 - kappa * gamma / theta) * rho_ln *
                     std::pow(tau_ln, -kappa / theta);
        return {"case1", val};
    }
    if (kappa == theta * A) {
        if (par.p >= par.q) {
            double a0 = w_strict ? alpha - (1.0 - gamma) * ig
                                 : alpha - 1.0 - (1.0 - gamma) * ig;
            if (!(a0 > 0.0))
                throw UnsupportedRegime("theorem8_envelope: case 2a needs alpha_0 > 0");
            return {"case2a", std::pow(ln, -a0) * rho_ln * std::pow(tau_ln, -ig)};
        }
        double a0 = w_strict ? alpha : alpha - par.q.inv();
        double gap = -ig;  // = 1/p - 1/q > 0 here
        if (!(a0 > 0.0))
            throw UnsupportedRegime("theorem8_envelope: case 2b needs alpha_0 > 0");
        if (a0 == gap)
            throw UnsupportedRegime("theorem8_envelope: alpha_0 = 1/p - 1/q is excluded");
        if (a0 > gap)
            return {"case2b.1", std::pow(dn, ig) * std::pow(ln, -a0 - ig) * rho_ln};
        return {"case2b.2", std::pow(dn, -a0) * wp.rho_eval(dn)};
    }
    throw UnsupportedRegime("theorem8_envelope: kappa < theta*(1/q-1/p)_+ is not covered");
}

// Entropy envelope in the flat regime theta = 0, kappa = 0, kappa_w > 0;
// the slowly varying parts alone set the rate (lambda from rho_u*rho_w,
// nu from tau).
inline EnvelopeValue theorem9_envelope(const TreeEnvelopeParams& par, long long n) {
    detail::require_n(n);
    par.validate();
    const WeightProfile& wp = par.weights;
    const HSetProfile& hp = par.profile;
    double theta = hp.theta, gamma = hp.gamma;
    if (theta != 0.0 || wp.kappa() != 0.0 || !(wp.kappa_w > 0.0))
        throw UnsupportedRegime("theorem9_envelope: requires theta = 0, kappa = 0, kappa_w > 0");
    if (!(1.0 - gamma > 0.0))
        throw UnsupportedRegime("theorem9_envelope: requires gamma < 1");
    double ig = inv_gap(par.q, par.p);
    double A = pos_part(ig);
    double alpha = wp.alpha(), lam = wp.lambda(), nu = hp.tau.exponent();
    double dn = static_cast<double>(n);
    double ln = std::log2(dn);

    double slack = alpha - (1.0 - gamma) * A;
    if (slack > 0.0) {
        double e = alpha / (1.0 - gamma);
        return {"case1", std::pow(dn, -e + ig) * std::pow(ln, -lam - alpha * nu / (1.0 - gamma))};
    }
    if (slack == 0.0 && lam > (1.0 - nu) * A) {
        if (par.p >= par.q)
            return {"case2a", std::pow(ln, -lam + (1.0 - nu) * ig)};
        double gap = -ig;
        if (lam == gap)
            throw UnsupportedRegime("theorem9_envelope: lambda = 1/p - 1/q is excluded");
        if (lam > gap)
            return {"case2b.1", std::pow(dn, ig) * std::pow(ln, -lam - ig)};
        return {"case2b.2", std::pow(dn, -lam)};
    }
    throw UnsupportedRegime("theorem9_envelope: parameters outside every covered case");
}

struct SobolevValue {
    std::string theorem_id;  // th1 | th2 | th3
    std::string case_id;
    double value = 0.0;
};

// Parameters of the weighted Sobolev embedding W^r_{p,g} -> L_{q,v} on a
// domain whose singular set carries the h-set profile.  The weight exponents
// mirror the tree side: beta plays kappa's role, alpha the polynomial log
// correction, lambda the slowly varying one.
struct SobolevEnvelopeParams {
    double r = 1.0;  // smoothness
    double d = 1.0;  // ambient dimension
    Exponent p, q;
    HSetProfile profile;  // theta must satisfy 0 <= theta < d
    double beta_g = 0.0, alpha_g = 0.0;
    RhoSpec rho_g;
    double beta_v = 0.0, alpha_v = 0.0;
    RhoSpec rho_v;

    double delta() const { return r + d * q.inv() - d * p.inv(); }
    double beta() const { return beta_g + beta_v; }
    double alpha() const { return alpha_g + alpha_v; }
    double lambda() const { return rho_g.exponent() + rho_v.exponent(); }
    double rho_eval(double y) const { return rho_g.eval(y) * rho_v.eval(y); }

    void validate() const {
        if (q.is_inf())
            throw UnsupportedRegime("sobolev envelope: target exponent must be finite");
        if (!(r > 0.0) || !(d >= 1.0))
            throw std::invalid_argument("sobolev envelope: need r > 0 and d >= 1");
        if (!(delta() > 0.0))
            throw UnsupportedRegime("sobolev envelope: requires delta = r + d/q - d/p > 0");
        if (profile.theta >= d)
            throw UnsupportedRegime("sobolev envelope: requires theta < d");
        // weight compatibility: beta_v below (d-theta)/q, or on it with a
        // strong enough log correction
        double edge = (d - profile.theta) / q.value();
        bool ok = beta_v < edge ||
                  (beta_v == edge && alpha_v > (1.0 - profile.gamma) / q.value());
        if (!ok)
            throw UnsupportedRegime("sobolev envelope: weight compatibility condition fails");
    }
};

inline SobolevValue sobolev_envelopes(const SobolevEnvelopeParams& par, long long n) {
    detail::require_n(n);
    par.validate();
    double theta = par.profile.theta, gamma = par.profile.gamma;
    double d = par.d, delta = par.delta(), beta = par.beta(), alpha = par.alpha();
    double ig = inv_gap(par.q, par.p);
    double A = pos_part(ig);
    bool v_strict = par.beta_v < (d - theta) / par.q.value();
    double dn = static_cast<double>(n);
    double ln = std::log2(dn);

    if (theta > 0.0) {
        double excess = beta - delta;  // compared against -theta*A
        if (excess < -theta * A) {
            double a0 = v_strict ? alpha : alpha - par.q.inv();
            double s_edge = (delta - beta) / theta;
            if (delta / d == s_edge)
                throw UnsupportedRegime("sobolev th1: delta/d = (delta-beta)/theta is excluded");
            double sigma = 1.0;
            std::string which = "case1-power";
            if (delta / d > s_edge) {
                sigma = std::pow(ln, -a0 + (beta - delta) * gamma / theta) *
                        par.rho_eval(ln) * std::pow(par.profile.tau.eval(ln), (beta - delta) / theta);
                which = "case1-log";
            }
            double val = std::pow(dn, -std::min(delta / d, s_edge) + ig) * sigma;
            return {"th1", which, val};
        }
        if (excess == -theta * A) {
            if (par.p >= par.q) {
                double a0 = v_strict ? alpha - (1.0 - gamma) * ig
                                     : alpha - 1.0 - (1.0 - gamma) * ig;
                if (!(a0 > 0.0))
                    throw UnsupportedRegime("sobolev th1: case 2a needs alpha_0 > 0");
                return {"th1", "case2a",
                        std::pow(ln, -a0) * par.rho_eval(ln) *
                            std::pow(par.profile.tau.eval(ln), -ig)};
            }
            double a0 = v_strict ? alpha : alpha - par.q.inv();
            double gap = -ig;
            if (!(a0 > 0.0))
                throw UnsupportedRegime("sobolev th1: case 2b needs alpha_0 > 0");
            if (a0 == gap)
                throw UnsupportedRegime("sobolev th1: alpha_0 = 1/p - 1/q is excluded");
            if (a0 > gap)
                return {"th1", "case2b.1",
                        std::pow(dn, ig) * std::pow(ln, -a0 - ig) * par.rho_eval(ln)};
            return {"th1", "case2b.2", std::pow(dn, -a0) * par.rho_eval(dn)};
        }
        throw UnsupportedRegime("sobolev th1: beta - delta above -theta*(1/q-1/p)_+ is not covered");
    }

    // theta = 0 branch; both statements require beta_v strictly below d/q
    if (!v_strict)
        throw UnsupportedRegime("sobolev th2/th3: require beta_v < d/q");
    if (beta - delta < 0.0)
        return {"th2", "main", std::pow(dn, -par.r / d)};
    if (beta - delta == 0.0) {
        double lam = par.lambda(), nu = par.profile.tau.exponent();
        double slack = alpha - (1.0 - gamma) * A;
        if (slack > 0.0) {
            if (!(1.0 - gamma > 0.0))
                throw UnsupportedRegime("sobolev th3: requires gamma < 1");
            double e = alpha / (1.0 - gamma);
            if (delta / d == e)
                throw UnsupportedRegime("sobolev th3: delta/d = alpha/(1-gamma) is excluded");
            double sigma = 1.0;
            std::string which = "case1-power";
            if (delta / d > e) {
                sigma = std::pow(ln, -lam - alpha * nu / (1.0 - gamma));
                which = "case1-log";
            }
            return {"th3", which, std::pow(dn, -std::min(delta / d, e) + ig) * sigma};
        }
        if (slack == 0.0 && lam > (1.0 - nu) * A) {
            if (par.p >= par.q)
                return {"th3", "case2a", std::pow(ln, -lam + (1.0 - nu) * ig)};
            double gap = -ig;
            if (lam == gap)
                throw UnsupportedRegime("sobolev th3: lambda = 1/p - 1/q is excluded");
            if (lam > gap)
                return {"th3", "case2b.1", std::pow(dn, ig) * std::pow(ln, -lam - ig)};
            return {"th3", "case2b.2", std::pow(dn, -lam)};
        }
        throw UnsupportedRegime("sobolev th3: parameters outside every covered case");
    }
    throw UnsupportedRegime("sobolev: theta = 0 with beta > delta is not covered");
}

}  // namespace entro
