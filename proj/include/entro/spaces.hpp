#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "entro/errors.hpp"
#include "entro/exponent.hpp"

namespace entro {

inline double lp_norm(std::span<const double> v, Exponent p) {
    if (p.is_inf()) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    double pv = p.value();
    if (pv == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::fabs(x);
        return s;
    }
    if (pv == 2.0) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::fabs(x), pv);
    return std::pow(s, 1.0 / pv);
}

inline double lp_dist(std::span<const double> a, std::span<const double> b, Exponent p) {
    const size_t d = a.size();
    if (p.is_inf()) {
        double m = 0.0;
        for (size_t i = 0; i < d; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
        return m;
    }
    double pv = p.value();
    if (pv == 1.0) {
        double s = 0.0;
        for (size_t i = 0; i < d; ++i) s += std::fabs(a[i] - b[i]);
        return s;
    }
    if (pv == 2.0) {
        double s = 0.0;
        for (size_t i = 0; i < d; ++i) {
            double t = a[i] - b[i];
            s += t * t;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (size_t i = 0; i < d; ++i) s += std::pow(std::fabs(a[i] - b[i]), pv);
    return std::pow(s, 1.0 / pv);
}

// Flat row-major point set; all points lie in the closed unit ball of the
// norm it was built for, and every ball point is within `mesh` of the set.
struct NetPointSet {
    int dim = 0;
    double mesh = 0.0;
    std::vector<double> coords;  // size() == count()*dim

    size_t count() const { return dim > 0 ? coords.size() / dim : 0; }
    std::span<const double> point(size_t i) const {
        return {coords.data() + i * static_cast<size_t>(dim), static_cast<size_t>(dim)};
    }
};

// Axis-aligned grid of step mesh*dim^{-1/p}, filtered to the ball. Rounding
// any ball point toward zero lands on a kept grid node within mesh in l_p,
// which is the covering certificate.
inline NetPointSet unit_ball_net(int dim, Exponent p, double mesh) {
    if (dim < 1 || dim > 4)
        throw ScaleError("unit_ball_net: dim must be in [1,4], got " + std::to_string(dim));
    if (!(mesh > 0.0) || mesh > 1.0)
        throw std::invalid_argument("unit_ball_net: mesh must be in (0,1]");

    const double step = mesh * std::pow(static_cast<double>(dim), -p.inv());
    const long long m = static_cast<long long>(std::floor(1.0 / step + 1e-12));
    const long long per_axis = 2 * m + 1;
    double predicted = 1.0;
    for (int i = 0; i < dim; ++i) predicted *= static_cast<double>(per_axis);
    if (predicted > 4e7)
        throw ScaleError("unit_ball_net: grid would have ~" + std::to_string(predicted) +
                         " nodes; coarsen the mesh");

    NetPointSet net;
    net.dim = dim;
    net.mesh = mesh;
    std::vector<long long> idx(dim, -m);
    std::vector<double> pt(dim);
    const double tol = 1.0 + 1e-12;
    for (;;) {
        for (int i = 0; i < dim; ++i) pt[i] = static_cast<double>(idx[i]) * step;
        if (lp_norm(pt, p) <= tol)
            net.coords.insert(net.coords.end(), pt.begin(), pt.end());
        int axis = dim - 1;
        while (axis >= 0) {
            if (++idx[axis] <= m) break;
            idx[axis] = -m;
            --axis;
        }
        if (axis < 0) break;
    }
    return net;
}

}  // namespace entro
