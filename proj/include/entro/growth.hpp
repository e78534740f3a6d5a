#pragma once

// Inversion of growth maps y -> y^{gamma*} (log2 y)^{alpha*} rho*(log2 y)
// past their monotone threshold, plus a grid check that a factor really is
// slowly varying.  Used to translate "N(y) points suffice" statements into
// "y(N)" rates.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "entro/errors.hpp"
#include "entro/slowly_varying.hpp"

namespace entro {

struct GrowthSpec {
    double gamma_star = 1.0;  // must be > 0
    double alpha_star = 0.0;  // log-power exponent of psi*
    RhoSpec rho_star;         // slowly varying tail of psi*

    // F(y) = y^{gamma*} psi*(y) on y > 1
    double eval(double y) const {
        double t = std::log2(y);
        return std::pow(y, gamma_star) * std::pow(t, alpha_star) * rho_star.eval(t);
    }
};

struct GrowthThreshold {
    double y0 = 0.0;  // start of the monotone stretch on the scan grid
    double x0 = 0.0;  // F(y0); inversion is defined for x >= x0
};

namespace detail {
// F in terms of t = log2 y; all searching happens on the t axis
inline double growth_of_t(const GrowthSpec& spec, double t) {
    return std::pow(std::exp2(t), spec.gamma_star) * std::pow(t, spec.alpha_star) *
           spec.rho_star.eval(t);
}
}  // namespace detail

// Scans a dyadic grid for the point past which F never decreases again.
inline GrowthThreshold growth_threshold(const GrowthSpec& spec) {
    if (!(spec.gamma_star > 0.0))
        throw std::invalid_argument("growth_threshold: gamma_star must be > 0");
    const double step = 0.125;
    const int n_steps = 7200;  // reaches y = 2^900
    double t_start = step;
    double prev = detail::growth_of_t(spec, step);
    for (int i = 2; i <= n_steps; ++i) {
        double t = step * i;
        double cur = detail::growth_of_t(spec, t);
        if (cur < prev) t_start = t;  // still descending here; move the start up
        prev = cur;
    }
    GrowthThreshold th;
    th.y0 = std::exp2(t_start);
    th.x0 = detail::growth_of_t(spec, t_start);
    if (!std::isfinite(th.x0))
        throw std::invalid_argument("growth_threshold: F not finite on the scan grid");
    return th;
}

// Solves y^{gamma*} psi*(y) = x for x at or above the monotone threshold.
// Bisection on t = log2 y drives the bracket far below the 1e-10 residual
// target, so no polishing step is needed.
inline double invert_growth(const GrowthSpec& spec, double x) {
    GrowthThreshold th = growth_threshold(spec);
    if (!(x >= th.x0))
        throw std::domain_error("invert_growth: x below the monotone threshold x0 = " +
                                std::to_string(th.x0));
    double t_lo = std::log2(th.y0), t_hi = t_lo;
    double f_hi = detail::growth_of_t(spec, t_hi);
    while (f_hi < x) {
        t_hi = t_hi < 1.0 ? t_hi + 1.0 : t_hi * 1.5;
        if (t_hi > 1020.0)
            throw ScaleError("invert_growth: x beyond double range of the growth map");
        f_hi = detail::growth_of_t(spec, t_hi);
    }
    for (int i = 0; i < 220; ++i) {
        double mid = 0.5 * (t_lo + t_hi);
        if (detail::growth_of_t(spec, mid) < x) t_lo = mid;
        else t_hi = mid;
    }
    return std::exp2(0.5 * (t_lo + t_hi));
}

// Asymptotic inverse y ~ x^{1/g} (log2 x)^{-a/g} [rho*(log2 x)]^{-1/g}; the
// exact inverse approaches this within a slowly varying factor.
inline double growth_inverse_asymptotic(const GrowthSpec& spec, double x) {
    double g = spec.gamma_star, lx = std::log2(x);
    return std::pow(x, 1.0 / g) * std::pow(lx, -spec.alpha_star / g) *
           std::pow(spec.rho_star.eval(lx), -1.0 / g);
}

struct SlowVariationGrid {
    double y_lo = 2.0;
    double y_hi = 1048576.0;  // 2^20
    double t_lo = 2.0;
    double t_hi = 1048576.0;
    int points = 25;  // per axis, log spaced
};

struct SlowVariationReport {
    double C = 1.0;  // smallest constant making t^{-eps}/C <= L(ty)/L(y) <= C t^eps on the grid
    bool pass = false;
    double worst_y = 0.0, worst_t = 0.0;
};

// Grid certificate that Lambda grows slower than every power: checks the
// two-sided band with exponent eps and reports the constant it needed.
inline SlowVariationReport slowly_varying_check(const std::function<double(double)>& Lambda,
                                                double eps,
                                                const SlowVariationGrid& grid = {},
                                                double cap = 64.0) {
    if (!(eps > 0.0)) throw std::invalid_argument("slowly_varying_check: eps must be > 0");
    SlowVariationReport rep;
    for (int i = 0; i < grid.points; ++i) {
        double fy = static_cast<double>(i) / (grid.points - 1);
        double y = grid.y_lo * std::pow(grid.y_hi / grid.y_lo, fy);
        double base = Lambda(y);
        if (!(base > 0.0))
            throw std::invalid_argument("slowly_varying_check: Lambda must be positive");
        for (int k = 0; k < grid.points; ++k) {
            double ft = static_cast<double>(k) / (grid.points - 1);
            double t = grid.t_lo * std::pow(grid.t_hi / grid.t_lo, ft);
            double r = Lambda(t * y) / base;
            double need = std::max(r / std::pow(t, eps), 1.0 / (r * std::pow(t, eps)));
            if (need > rep.C) {
                rep.C = need;
                rep.worst_y = y;
                rep.worst_t = t;
            }
        }
    }
    rep.pass = rep.C <= cap;
    return rep;
}

}  // namespace entro
