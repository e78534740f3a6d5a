#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "entro/errors.hpp"
#include "entro/operator_matrix.hpp"
#include "entro/rng.hpp"
#include "entro/spaces.hpp"

namespace entro {

// Certified bracket lower <= e_k(T) <= upper.
struct EntropyInterval {
    int k = 1;
    double lower = 0.0;
    double upper = 0.0;
    double net_mesh = 0.0;
    double norm_bound = 0.0;
};

struct OracleOptions {
    int restarts = 32;          // greedy restarts shared by covering and packing
    std::uint64_t seed_salt = 0;
};

// Brackets for every k = 1..k_max from shared greedy passes.
struct OracleProfile {
    std::vector<double> lower;  // index k-1
    std::vector<double> upper;
    double mesh = 0.0;
    double norm_bound = 0.0;
};

namespace detail {

// Monotone distance keys: cheap to update pointwise, converted to true
// distances only at selection time.
struct Metric {
    enum Kind { MAX, SUM_ABS, SUM_SQ, SUM_POW } kind;
    double qv = 2.0;

    explicit Metric(Exponent q) {
        if (q.is_inf()) kind = MAX;
        else if (q.value() == 1.0) kind = SUM_ABS;
        else if (q.value() == 2.0) kind = SUM_SQ;
        else { kind = SUM_POW; qv = q.value(); }
    }

    double key(const double* a, const double* b, int dim) const {
        switch (kind) {
            case MAX: {
                double m = 0.0;
                for (int i = 0; i < dim; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
                return m;
            }
            case SUM_ABS: {
                double s = 0.0;
                for (int i = 0; i < dim; ++i) s += std::fabs(a[i] - b[i]);
                return s;
            }
            case SUM_SQ: {
                double s = 0.0;
                for (int i = 0; i < dim; ++i) {
                    double t = a[i] - b[i];
                    s += t * t;
                }
                return s;
            }
            default: {
                double s = 0.0;
                for (int i = 0; i < dim; ++i) s += std::pow(std::fabs(a[i] - b[i]), qv);
                return s;
            }
        }
    }

    double dist_of_key(double k) const {
        if (kind == SUM_SQ) return std::sqrt(k);
        if (kind == SUM_POW) return std::pow(k, 1.0 / qv);
        return k;
    }
};

// One farthest-point traversal from `start`, selecting `m` points.
// After the c-th selection the points picked so far are pairwise >= d_c and
// the remaining set is within d_{c+1} of them, so a single pass yields both
// covering radii and packing separations for every center count at once.
inline void gonzalez_pass(const std::vector<double>& pts, int dim, const Metric& metric,
                          size_t start, size_t m, std::vector<double>& cover_radius,
                          std::vector<double>& separation) {
    const size_t n = pts.size() / dim;
    m = std::min(m, n);
    std::vector<double> keys(n);
    const double* s = pts.data() + start * dim;
    double max_key = 0.0;
    size_t far_idx = 0;
    for (size_t i = 0; i < n; ++i) {
        keys[i] = metric.key(pts.data() + i * dim, s, dim);
        if (keys[i] > max_key) { max_key = keys[i]; far_idx = i; }
    }
    // cover_radius[c] (1-based center count) and separation[c] (point count)
    for (size_t c = 1; c < m; ++c) {
        double d = metric.dist_of_key(max_key);
        cover_radius[c] = std::min(cover_radius[c], d);
        separation[c + 1] = std::max(separation[c + 1], d);
        const double* nc = pts.data() + far_idx * dim;
        max_key = 0.0;
        size_t next = 0;
        for (size_t i = 0; i < n; ++i) {
            double k = metric.key(pts.data() + i * dim, nc, dim);
            if (k < keys[i]) keys[i] = k;
            if (keys[i] > max_key) { max_key = keys[i]; next = i; }
        }
        far_idx = next;
    }
    if (m >= 1) {
        // radius with all m selected centers
        cover_radius[m] = std::min(cover_radius[m], metric.dist_of_key(max_key));
    }
    for (size_t c = m + 1; c < cover_radius.size(); ++c) cover_radius[c] = std::min(cover_radius[c], metric.dist_of_key(max_key));
}

// 1-D images admit exact covering/packing via sweeps + binary search.
inline double line_cover_radius(const std::vector<double>& xs, size_t centers) {
    if (xs.empty() || centers == 0) return 0.0;
    double lo = 0.0, hi = (xs.back() - xs.front()) / 2.0;
    if (hi <= 0.0) return 0.0;
    auto feasible = [&](double r) {
        size_t used = 0;
        size_t i = 0;
        const size_t n = xs.size();
        while (i < n) {
            if (++used > centers) return false;
            double reach = xs[i] + 2.0 * r;
            while (i < n && xs[i] <= reach) ++i;
        }
        return true;
    };
    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid; else lo = mid;
    }
    return hi;  // certified feasible radius
}

inline double line_max_separation(const std::vector<double>& xs, size_t points) {
    if (points <= 1 || xs.size() < points) return points <= 1 ? 0.0 : 0.0;
    double lo = 0.0, hi = xs.back() - xs.front();
    auto feasible = [&](double delta) {
        size_t cnt = 1;
        double last = xs.front();
        for (double x : xs)
            if (x - last >= delta) { ++cnt; last = x; }
        return cnt >= points;
    };
    if (!feasible(0.0)) return 0.0;
    for (int it = 0; it < 90; ++it) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid)) lo = mid; else hi = mid;
    }
    return lo;  // certified achievable separation
}

}  // namespace detail

// Brackets e_k(T) for all k = 1..k_max. Covering upper: greedy farthest-point
// k-center radius on the image of a certified ball net, plus ||T||*mesh for
// the net discretization. Packing lower: 2^{k-1}+1 image points pairwise >= d
// force e_k >= d/2. Restart starting points come from a seed derived from the
// scale-invariant inputs (dims, exponents, mesh), which keeps the whole
// procedure exactly scale-equivariant.
inline OracleProfile entropy_oracle_profile(const OperatorMatrix& T, int k_max, double mesh,
                                            const OracleOptions& opts = {}) {
    if (T.cols > 4)
        throw ScaleError("entropy oracle: source dim must be <= 4");
    if (k_max < 1 || k_max > 12)
        throw ScaleError("entropy oracle: k must be in [1,12]");
    if (!(mesh > 0.0) || mesh > 0.5)
        throw ScaleError("entropy oracle: mesh must be in (0, 0.5]");

    OracleProfile prof;
    prof.mesh = mesh;
    prof.norm_bound = norm_upper_bound(T);
    prof.lower.assign(k_max, 0.0);
    prof.upper.assign(k_max, 0.0);
    if (T.is_zero()) return prof;  // degenerate: one center at 0 covers exactly

    // The greedy path must not depend on the scale of T: the ball net is
    // symmetric, so candidate distances carry exact ties, and multiplying by
    // a non-power-of-two breaks those ties differently at the last bit.  The
    // core therefore runs on a normalized copy (largest entry scaled out,
    // entries snapped to a 2^-26 grid, both steps commuting exactly with
    // entrywise rescaling), and the quantization error is paid back into the
    // certified bounds at the end.
    double m_abs = 0.0;
    for (double v : T.a) m_abs = std::max(m_abs, std::fabs(v));
    OperatorMatrix Tn = T;
    constexpr double grid = 67108864.0;  // 2^26
    for (double& v : Tn.a) v = std::round(v / m_abs * grid) / grid;
    const double nb_n = norm_upper_bound(Tn);
    double dq;  // operator-norm bound of the normalization defect
    {
        OperatorMatrix defect(T.rows, T.cols, T.p, T.q);
        defect.a.assign(defect.a.size(), 0.5 / grid);
        dq = norm_upper_bound(defect);
    }

    NetPointSet net = unit_ball_net(T.cols, T.p, mesh);
    const size_t npts = net.count();
    std::vector<double> image(npts * static_cast<size_t>(T.rows));
    {
        std::vector<double> y(T.rows);
        for (size_t i = 0; i < npts; ++i) {
            Tn.apply(net.point(i), y);
            std::copy(y.begin(), y.end(), image.begin() + i * T.rows);
        }
    }

    const size_t n_max = static_cast<size_t>(1) << (k_max - 1);
    const size_t m_sel = std::min(n_max + 1, npts);

    // In normalized units: certified upper/lower for e_k(Tn), then rescale and
    // absorb the quantization defect on both sides.
    auto finish = [&](int k, double upper_n, double lower_n) {
        prof.upper[k - 1] = m_abs * (upper_n + dq);
        prof.lower[k - 1] = std::max(0.0, m_abs * (lower_n - dq));
        prof.lower[k - 1] = std::min(prof.lower[k - 1], prof.upper[k - 1]);
    };

    if (T.rows == 1) {
        std::vector<double> xs(npts);
        for (size_t i = 0; i < npts; ++i) xs[i] = image[i];
        std::sort(xs.begin(), xs.end());
        for (int k = 1; k <= k_max; ++k) {
            size_t centers = static_cast<size_t>(1) << (k - 1);
            finish(k, detail::line_cover_radius(xs, centers) + nb_n * mesh,
                   detail::line_max_separation(xs, centers + 1) / 2.0);
        }
        return prof;
    }

    detail::Metric metric(T.q);
    std::vector<double> cover(m_sel + 1, std::numeric_limits<double>::infinity());
    std::vector<double> sep(m_sel + 2, 0.0);

    std::uint64_t seed = 0x243f6a8885a308d3ull ^ opts.seed_salt;
    seed = hash_mix(seed, static_cast<std::uint64_t>(T.rows));
    seed = hash_mix(seed, static_cast<std::uint64_t>(T.cols));
    seed = hash_mix(seed, T.p.encode());
    seed = hash_mix(seed, T.q.encode());
    {
        std::uint64_t mesh_bits;
        __builtin_memcpy(&mesh_bits, &mesh, sizeof(mesh_bits));
        seed = hash_mix(seed, mesh_bits);
    }
    SplitMix64 stream(seed);

    int restarts = std::max(1, opts.restarts);
    for (int r = 0; r < restarts; ++r) {
        size_t start = static_cast<size_t>(stream.next_below(npts));
        detail::gonzalez_pass(image, T.rows, metric, start, m_sel, cover, sep);
    }

    // The image of the symmetric ball is symmetric about 0, so one ball at the
    // origin with radius max_i |y_i| is always a valid cover; greedy centers
    // sit on the image and can do twice as badly for a single center.
    {
        std::vector<double> zero(static_cast<size_t>(T.rows), 0.0);
        double k0 = 0.0;
        for (size_t i = 0; i < npts; ++i)
            k0 = std::max(k0, metric.key(image.data() + i * T.rows, zero.data(), T.rows));
        double r0 = metric.dist_of_key(k0);
        for (double& c : cover) c = std::min(c, r0);
    }

    for (int k = 1; k <= k_max; ++k) {
        size_t centers = static_cast<size_t>(1) << (k - 1);
        double radius = centers >= m_sel ? cover[m_sel] : cover[centers];
        if (!std::isfinite(radius)) radius = 0.0;
        double d = (centers + 1 <= m_sel) ? sep[centers + 1] : 0.0;
        finish(k, radius + nb_n * mesh, d / 2.0);
    }
    return prof;
}

inline EntropyInterval entropy_oracle(const OperatorMatrix& T, int k, double mesh,
                                      const OracleOptions& opts = {}) {
    OracleProfile prof = entropy_oracle_profile(T, k, mesh, opts);
    EntropyInterval iv;
    iv.k = k;
    iv.lower = prof.lower[k - 1];
    iv.upper = prof.upper[k - 1];
    iv.net_mesh = mesh;
    iv.norm_bound = prof.norm_bound;
    return iv;
}

}  // namespace entro
