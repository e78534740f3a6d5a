#pragma once

// Two-weighted summation operator on a rooted tree:
//   (S f)(xi) = w(xi) * sum_{xi' <= xi} u(xi') f(xi')
// with the sum over ancestors of xi including xi itself.  Weights are
// levelwise: u_j = 2^{-kappa_u m* j} (m* j + 1)^{-alpha_u} rho_u(m* j + 1),
// same shape for w_j.  Norms l_p -> l_q are exact for p = 1, p = inf and
// p = q = 2; elsewhere a multistart ascent returns a certified lower bound.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "entro/entropy_oracle.hpp"
#include "entro/errors.hpp"
#include "entro/exponent.hpp"
#include "entro/hset.hpp"
#include "entro/operator_matrix.hpp"
#include "entro/rng.hpp"
#include "entro/schutt.hpp"
#include "entro/slowly_varying.hpp"
#include "entro/tree.hpp"

namespace entro {

struct WeightProfile {
    double kappa_u = 0.0, alpha_u = 0.0;
    RhoSpec rho_u;
    double kappa_w = 0.0, alpha_w = 0.0;
    RhoSpec rho_w;
    int m_star = 1;

    double kappa() const { return kappa_u + kappa_w; }
    double alpha() const { return alpha_u + alpha_w; }
    double lambda() const { return rho_u.exponent() + rho_w.exponent(); }
    double rho_eval(double y) const { return rho_u.eval(y) * rho_w.eval(y); }

    // weights use the shifted argument m*j + 1 so level 0 is well defined
    double u_at(int j) const {
        double mj = static_cast<double>(m_star) * j;
        return std::exp2(-kappa_u * mj) * std::pow(mj + 1.0, -alpha_u) * rho_u.eval(mj + 1.0);
    }
    double w_at(int j) const {
        double mj = static_cast<double>(m_star) * j;
        return std::exp2(-kappa_w * mj) * std::pow(mj + 1.0, -alpha_w) * rho_w.eval(mj + 1.0);
    }
};

// Weight-vs-profile compatibility condition: kappa_w > theta/q, or
// kappa_w = theta/q together with alpha_w > (1-gamma)/q.  Requires finite q.
inline bool weight_decay_admissible(const WeightProfile& wp, const HSetProfile& hp, Exponent q) {
    if (q.is_inf())
        throw std::invalid_argument("weight_decay_admissible: target exponent must be finite");
    double thq = hp.theta / q.value();
    if (wp.kappa_w > thq) return true;
    return wp.kappa_w == thq && wp.alpha_w > (1.0 - hp.gamma) / q.value();
}

struct SummationOperator {
    RootedTree tree;
    std::vector<double> u, w;  // per vertex, positive
    Exponent p, q;
    int level_offset = 0;  // global level of the root (nonzero for subtree operators)

    int size() const { return tree.size(); }

    static SummationOperator from_profile(const RootedTree& t, const WeightProfile& prof,
                                          Exponent p, Exponent q, int level_offset = 0) {
        SummationOperator s;
        s.tree = t;
        s.p = p;
        s.q = q;
        s.level_offset = level_offset;
        int V = t.size();
        s.u.resize(static_cast<size_t>(V));
        s.w.resize(static_cast<size_t>(V));
        for (int v = 0; v < V; ++v) {
            s.u[v] = prof.u_at(t.level[v] + level_offset);
            s.w[v] = prof.w_at(t.level[v] + level_offset);
        }
        s.validate();
        return s;
    }

    static SummationOperator from_weights(const RootedTree& t, std::vector<double> u,
                                          std::vector<double> w, Exponent p, Exponent q) {
        SummationOperator s;
        s.tree = t;
        s.u = std::move(u);
        s.w = std::move(w);
        s.p = p;
        s.q = q;
        s.validate();
        return s;
    }

    void validate() const {
        if (static_cast<int>(u.size()) != tree.size() || static_cast<int>(w.size()) != tree.size())
            throw std::invalid_argument("SummationOperator: weight size mismatch");
        for (int v = 0; v < tree.size(); ++v)
            if (!(u[v] > 0.0) || !(w[v] > 0.0))
                throw std::invalid_argument("SummationOperator: weights must be positive");
    }
};

// g(xi) = w(xi) * (prefix sum of u*f along the root path); ids are
// topological, so one forward pass suffices.
inline std::vector<double> apply(const SummationOperator& s, const std::vector<double>& f) {
    int V = s.size();
    if (static_cast<int>(f.size()) != V)
        throw std::invalid_argument("apply: vector size mismatch");
    std::vector<double> prefix(static_cast<size_t>(V)), g(static_cast<size_t>(V));
    for (int v = 0; v < V; ++v) {
        double above = v == 0 ? 0.0 : prefix[s.tree.parent[v]];
        prefix[v] = above + s.u[v] * f[v];
        g[v] = s.w[v] * prefix[v];
    }
    return g;
}

// (S^T g)(xi) = u(xi) * sum over the subtree of xi of w*g; one backward pass.
inline std::vector<double> apply_transpose(const SummationOperator& s,
                                           const std::vector<double>& g) {
    int V = s.size();
    if (static_cast<int>(g.size()) != V)
        throw std::invalid_argument("apply_transpose: vector size mismatch");
    std::vector<double> acc(static_cast<size_t>(V));
    for (int v = V - 1; v >= 0; --v) {
        acc[v] += s.w[v] * g[v];
        if (v > 0) acc[s.tree.parent[v]] += acc[v];
    }
    std::vector<double> out(static_cast<size_t>(V));
    for (int v = 0; v < V; ++v) out[v] = s.u[v] * acc[v];
    return out;
}

inline OperatorMatrix to_matrix(const SummationOperator& s) {
    int V = s.size();
    if (V > 4096) throw ScaleError("to_matrix: operator too large (V > 4096)");
    OperatorMatrix m(V, V, s.p, s.q);
    for (int xi = 0; xi < V; ++xi)
        for (int anc = xi; anc != -1; anc = s.tree.parent[anc])
            m.at(xi, anc) = s.w[xi] * s.u[anc];
    return m;
}

inline SummationOperator subtree_operator(const SummationOperator& s, int root) {
    Subtree sub = subtree_at(s.tree, root);
    std::vector<double> u2, w2;
    u2.reserve(sub.orig_ids.size());
    w2.reserve(sub.orig_ids.size());
    for (int v : sub.orig_ids) {
        u2.push_back(s.u[v]);
        w2.push_back(s.w[v]);
    }
    SummationOperator out = SummationOperator::from_weights(sub.tree, std::move(u2),
                                                            std::move(w2), s.p, s.q);
    out.level_offset = s.level_offset + s.tree.level[root];
    return out;
}

namespace detail {

// column q-norms: col[v] = u[v] * || w restricted to subtree(v) ||_q,
// all vertices in one backward pass
inline std::vector<double> column_norms(const SummationOperator& s) {
    int V = s.size();
    std::vector<double> acc(static_cast<size_t>(V), 0.0), col(static_cast<size_t>(V));
    if (s.q.is_inf()) {
        for (int v = V - 1; v >= 0; --v) {
            acc[v] = std::max(acc[v], s.w[v]);
            if (v > 0) acc[s.tree.parent[v]] = std::max(acc[s.tree.parent[v]], acc[v]);
        }
        for (int v = 0; v < V; ++v) col[v] = s.u[v] * acc[v];
    } else {
        double qq = s.q.value();
        for (int v = V - 1; v >= 0; --v) {
            acc[v] += std::pow(s.w[v], qq);
            if (v > 0) acc[s.tree.parent[v]] += acc[v];
        }
        for (int v = 0; v < V; ++v) col[v] = s.u[v] * std::pow(acc[v], 1.0 / qq);
    }
    return col;
}

}  // namespace detail

// Same certificate as the dense norm_upper_bound, without materializing the
// matrix: max column q-norm, exact at p=1, times V^{1-1/p} otherwise.
inline double norm_upper_bound(const SummationOperator& s) {
    std::vector<double> col = detail::column_norms(s);
    double m = 0.0;
    for (double c : col) m = std::max(m, c);
    if (!s.p.is_inf() && s.p.value() == 1.0) return m;
    return std::pow(static_cast<double>(s.size()), 1.0 - s.p.inv()) * m;
}

// Exact operator norm in the three solvable regimes:
//   p=1      -> max column q-norm (extreme points of the l_1 ball),
//   p=inf    -> ||S 1||_q (nonnegative kernel, max of the cube at f = 1),
//   p=q=2    -> spectral norm by power iteration on S^T S with a certified
//               Collatz-Wielandt bracket (S^T S is irreducible: every vertex
//               shares the root's subtree), relative width 1e-12.
inline double norm_exact(const SummationOperator& s) {
    if (!s.p.is_inf() && s.p.value() == 1.0) {
        std::vector<double> col = detail::column_norms(s);
        double m = 0.0;
        for (double c : col) m = std::max(m, c);
        return m;
    }
    if (s.p.is_inf()) {
        std::vector<double> ones(static_cast<size_t>(s.size()), 1.0);
        return lp_norm(entro::apply(s, ones), s.q);
    }
    if (s.p.value() == 2.0 && !s.q.is_inf() && s.q.value() == 2.0) {
        int V = s.size();
        std::vector<double> x(static_cast<size_t>(V), 1.0 / std::sqrt(static_cast<double>(V)));
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 1000000; ++it) {
            std::vector<double> y = apply_transpose(s, entro::apply(s, x));
            double step_lo = std::numeric_limits<double>::infinity(), step_hi = 0.0;
            for (int v = 0; v < V; ++v) {
                double r = y[v] / x[v];
                step_lo = std::min(step_lo, r);
                step_hi = std::max(step_hi, r);
            }
            lo = std::max(lo, step_lo);
            hi = std::min(hi, step_hi);
            if (hi - lo <= 1e-12 * hi) break;
            double nrm = lp_norm(y, Exponent::finite(2.0));
            for (int v = 0; v < V; ++v) x[v] = y[v] / nrm;
        }
        return std::sqrt(0.5 * (lo + hi));
    }
    throw UnsupportedRegime("norm_exact: only p=1, p=inf and p=q=2 have exact algorithms");
}

inline bool norm_exact_available(Exponent p, Exponent q) {
    if (p.is_inf()) return true;
    if (p.value() == 1.0) return true;
    return p.value() == 2.0 && !q.is_inf() && q.value() == 2.0;
}

struct NormEstimate {
    double value = 0.0;            // certified lower bound: ||S witness||_q with ||witness||_p = 1
    std::vector<double> witness;
};

namespace detail {

// one ascent sweep f -> argmax_{||f||_p = 1} <f, S^T dual_q(S f)>
inline bool ascend(const SummationOperator& s, std::vector<double>& f) {
    std::vector<double> g = entro::apply(s, f);
    int V = s.size();
    std::vector<double> psi(static_cast<size_t>(V), 0.0);
    if (s.q.is_inf()) {
        int best = 0;
        for (int v = 1; v < V; ++v)
            if (std::abs(g[v]) > std::abs(g[best])) best = v;
        psi[best] = g[best] >= 0.0 ? 1.0 : -1.0;
    } else {
        double qq = s.q.value();
        for (int v = 0; v < V; ++v)
            psi[v] = (g[v] >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(g[v]), qq - 1.0);
    }
    std::vector<double> z = apply_transpose(s, psi);
    std::vector<double> nf(static_cast<size_t>(V), 0.0);
    if (s.p.is_inf()) {
        for (int v = 0; v < V; ++v) nf[v] = z[v] >= 0.0 ? 1.0 : -1.0;
    } else if (s.p.value() == 1.0) {
        int best = 0;
        for (int v = 1; v < V; ++v)
            if (std::abs(z[v]) > std::abs(z[best])) best = v;
        if (z[best] == 0.0) return false;
        nf[best] = z[best] >= 0.0 ? 1.0 : -1.0;
    } else {
        double e = 1.0 / (s.p.value() - 1.0);  // p' - 1
        for (int v = 0; v < V; ++v)
            nf[v] = (z[v] >= 0.0 ? 1.0 : -1.0) * std::pow(std::abs(z[v]), e);
        double nrm = lp_norm(nf, s.p);
        if (!(nrm > 0.0)) return false;
        for (int v = 0; v < V; ++v) nf[v] /= nrm;
    }
    f = std::move(nf);
    return true;
}

}  // namespace detail

// Multistart mixed-norm ascent.  Each sweep is monotone for the nonnegative
// kernel, so every iterate is a certificate; starts are the all-ones vector,
// the basis vectors, then random sign vectors.  Random starts depend only on
// (seed, V, p, q), never on the weight values, which keeps the whole
// estimate scale-equivariant.
inline NormEstimate norm_estimate(const SummationOperator& s, int restarts = 64,
                                  std::uint64_t seed = 0) {
    if (restarts < 1) throw std::invalid_argument("norm_estimate: restarts must be >= 1");
    int V = s.size();
    auto objective = [&](std::vector<double>& f) -> double {
        double nrm = lp_norm(f, s.p);
        if (!(nrm > 0.0)) return 0.0;
        for (double& x : f) x /= nrm;
        return lp_norm(entro::apply(s, f), s.q);
    };

    std::uint64_t h = hash_mix(seed, static_cast<std::uint64_t>(V));
    h = hash_mix(h, s.p.encode());
    h = hash_mix(h, s.q.encode());

    NormEstimate best;
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> f(static_cast<size_t>(V), 0.0);
        if (r == 0) {
            f.assign(static_cast<size_t>(V), 1.0);
        } else if (r <= V) {
            f[r - 1] = 1.0;
        } else {
            SplitMix64 rng(hash_mix(h, static_cast<std::uint64_t>(r)));
            for (int v = 0; v < V; ++v) f[v] = rng.next() & 1 ? 1.0 : -1.0;
        }
        double val = objective(f);
        int stalled = 0;
        for (int it = 0; it < 2000 && stalled < 3; ++it) {
            std::vector<double> cand = f;
            if (!detail::ascend(s, cand)) break;
            double cv = objective(cand);
            if (cv > val * (1.0 + 1e-13)) stalled = 0;
            else ++stalled;
            if (cv >= val) {
                val = cv;
                f = std::move(cand);
            }
        }
        if (val > best.value) {
            best.value = val;
            best.witness = f;
        }
    }
    return best;
}

struct CjValue {
    std::string case_id;
    double value = 0.0;
};

// Closed-form envelope C(j) for the norm of the subtree operator rooted at
// level j, valid for j >= 2.  Exact float equality selects the boundary
// cases; parameter sets outside every case raise UnsupportedRegime.
inline CjValue cj_envelope(const WeightProfile& wp, const HSetProfile& hp, Exponent p,
                           Exponent q, int j) {
    if (j < 2) throw std::invalid_argument("cj_envelope: defined for j >= 2 only");
    if (q.is_inf()) throw UnsupportedRegime("cj_envelope: target exponent must be finite");
    if (wp.m_star != hp.m_star)
        throw std::invalid_argument("cj_envelope: weight and h profiles disagree on m_star");
    if (!weight_decay_admissible(wp, hp, q))
        throw UnsupportedRegime("cj_envelope: weight/profile compatibility condition fails");

    double theta = hp.theta, gamma = hp.gamma;
    double ig = inv_gap(q, p);       // 1/q - 1/p
    double A = pos_part(ig);         // positive iff p > q
    double kappa = wp.kappa(), alpha = wp.alpha();
    double thq = theta / q.value();
    double mj = static_cast<double>(wp.m_star) * j;
    double rho = wp.rho_eval(mj);

    if (wp.kappa_w > thq) {
        if (kappa > theta * A)
            return {"case1", std::exp2(-kappa * mj) * std::pow(mj, -alpha) * rho};
        if (kappa == theta * A) {
            if (alpha > (1.0 - gamma) * A)
                return {"case2", std::exp2(-theta * A * mj) * std::pow(mj, -alpha + A) * rho};
            if (theta == 0.0 && alpha == (1.0 - gamma) * A) {
                // flat-exponent regime: only the slowly varying parts separate scales
                double lam = wp.lambda(), nu = hp.tau.exponent();
                double L = std::log2(mj);
                if (lam > (1.0 - nu) * A) {
                    if (p <= q) return {"case-log-flat", std::pow(L, -lam)};
                    return {"case-log-gap",
                            std::pow(mj, gamma * ig) * std::pow(L, -lam + ig)};
                }
            }
        }
        throw UnsupportedRegime("cj_envelope: parameters on an excluded boundary");
    }
    // admissibility passed, so here kappa_w == theta/q
    if (theta > 0.0) {
        bool case3 = kappa > theta * A ||
                     (kappa == theta * A && p < q && alpha > 1.0 / q.value());
        if (case3)
            return {"case3",
                    std::exp2(-kappa * mj) * std::pow(mj, -alpha + q.inv()) * rho};
        if (kappa == theta * A && p >= q && alpha > 1.0 + (1.0 - gamma) * A)
            return {"case4",
                    std::exp2(-theta * ig * mj) * std::pow(mj, -alpha + 1.0 + ig) * rho};
    }
    throw UnsupportedRegime("cj_envelope: parameters outside every covered case");
}

struct CjBandRow {
    int j = 0;
    double norm = 0.0;
    double envelope = 0.0;
    double ratio = 0.0;
    bool exact = false;
};

struct CjBandReport {
    std::vector<CjBandRow> rows;
    double band = 0.0;  // max ratio / min ratio
};

struct CjBandOptions {
    int subtree_depth = 8;
    int restarts = 24;  // only used outside the exact-norm regimes
    std::uint64_t seed = 0;
    long long vertex_guard = 2000000;
};

// Desk-scale check of the two-sided norm claim: for each j, generate a
// depth-limited model of the subtree hanging at level j, compute its norm
// and divide by C(j).  The ratio series should stay inside a fixed band.
inline CjBandReport cj_band_experiment(const WeightProfile& wp, const HSetProfile& hp,
                                       Exponent p, Exponent q, int j_lo, int j_hi,
                                       const CjBandOptions& opts = {}) {
    if (j_lo < 2 || j_hi < j_lo)
        throw std::invalid_argument("cj_band_experiment: need 2 <= j_lo <= j_hi");
    CjBandReport rep;
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
        HSetTreeResult gen;
        bool made = false;
        for (int d = opts.subtree_depth; d >= 1 && !made; --d) {
            try {
                gen = generate_hset_tree(hp, d, j, opts.vertex_guard);
                made = true;
            } catch (const InfeasibleProfile&) {
                if (d == 1) throw;
            }
        }
        SummationOperator s = SummationOperator::from_profile(gen.tree, wp, p, q, j);
        CjBandRow row;
        row.j = j;
        row.exact = norm_exact_available(p, q);
        row.norm = row.exact ? norm_exact(s)
                             : norm_estimate(s, opts.restarts,
                                             hash_mix(opts.seed, static_cast<std::uint64_t>(j)))
                                   .value;
        row.envelope = cj_envelope(wp, hp, p, q, j).value;
        row.ratio = row.norm / row.envelope;
        rmin = std::min(rmin, row.ratio);
        rmax = std::max(rmax, row.ratio);
        rep.rows.push_back(row);
    }
    rep.band = rmax / rmin;
    return rep;
}

struct BlockLowerBound {
    double value = 0.0;
    bool certified = false;  // true when the identity-block factor came from the oracle
    int level = -1;          // level carrying the chosen antichain
    std::vector<int> roots;  // the m block roots
    double min_block_norm = 0.0;
};

// Lower bound for e_n(S) through m incomparable subtrees: restricting S to
// functions supported on the blocks dominates M * I_m with M the smallest
// block norm, so e_n(S) >= M * e_n(I_m : l_p^m -> l_q^m).  The identity
// factor is the oracle's certified lower bound when m <= 4 and n <= m,
// otherwise the order-only closed form.
inline BlockLowerBound entropy_lower_via_blocks(const SummationOperator& s, int n, int m,
                                                double mesh = 0.05) {
    if (n < 1 || m < 1) throw std::invalid_argument("entropy_lower_via_blocks: n, m >= 1");
    auto by_level = s.tree.levels();
    BlockLowerBound best;
    bool found = false;
    for (size_t lvl = 0; lvl < by_level.size(); ++lvl) {
        if (static_cast<int>(by_level[lvl].size()) < m) continue;
        std::vector<std::pair<double, int>> norms;
        for (int v : by_level[lvl]) {
            SummationOperator sub = subtree_operator(s, v);
            double nn = norm_exact_available(s.p, s.q)
                            ? norm_exact(sub)
                            : norm_estimate(sub, 16, static_cast<std::uint64_t>(v)).value;
            norms.emplace_back(nn, v);
        }
        std::sort(norms.begin(), norms.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        double M = norms[static_cast<size_t>(m) - 1].first;
        if (!found || M > best.min_block_norm) {
            found = true;
            best.min_block_norm = M;
            best.level = static_cast<int>(lvl);
            best.roots.clear();
            for (int i = 0; i < m; ++i) best.roots.push_back(norms[i].second);
        }
    }
    if (!found)
        throw InfeasibleProfile("entropy_lower_via_blocks: no level holds " +
                                std::to_string(m) + " incomparable vertices");
    if (m == 1) {
        best.value = best.min_block_norm * std::exp2(1.0 - n);
        best.certified = true;
    } else if (m <= 4 && n <= m) {
        EntropyInterval iv = entropy_oracle(OperatorMatrix::identity(m, s.p, s.q), n, mesh);
        best.value = best.min_block_norm * iv.lower;
        best.certified = true;
    } else {
        best.value = best.min_block_norm * schutt_envelope(s.p, s.q, m, n);
        best.certified = false;
    }
    return best;
}

// Dump format: the tree serialization followed by one `j u_j w_j` line per
// level (full precision).  Requires levelwise weights.
inline std::string serialize_operator(const SummationOperator& s) {
    int V = s.size();
    std::vector<int> first(static_cast<size_t>(s.tree.depth()) + 1, -1);
    for (int v = 0; v < V; ++v) {
        int l = s.tree.level[v];
        if (first[l] == -1) first[l] = v;
        else if (s.u[v] != s.u[first[l]] || s.w[v] != s.w[first[l]])
            throw std::invalid_argument("serialize_operator: weights are not levelwise");
    }
    std::string out = serialize_tree(s.tree);
    char buf[96];
    for (size_t l = 0; l < first.size(); ++l) {
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g\n",
                      static_cast<int>(l) + s.level_offset, s.u[first[l]], s.w[first[l]]);
        out += buf;
    }
    return out;
}

// Reads the dump format back.  The boundary between the tree rows and the
// weight rows is where the leading id stops matching the row index; when the
// level offset happens to continue that run (integer-valued weights only),
// the split is recovered by scanning for a vertex count whose tree depth
// matches the number of remaining rows.
inline SummationOperator parse_operator(const std::string& text, Exponent p, Exponent q) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        if (nl > pos) lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    if (lines.size() < 2) throw std::invalid_argument("parse_operator: truncated dump");

    auto build = [&](size_t V) {
        std::string tree_text;
        for (size_t i = 0; i < V; ++i) tree_text += lines[i] + "\n";
        RootedTree tree = parse_tree(tree_text);
        size_t levels = static_cast<size_t>(tree.depth()) + 1;
        if (lines.size() - V != levels)
            throw std::invalid_argument("parse_operator: weight rows do not match tree depth");
        std::vector<double> lu(levels), lw(levels);
        int offset = 0;
        for (size_t l = 0; l < levels; ++l) {
            int j = 0;
            double u = 0.0, w = 0.0;
            if (std::sscanf(lines[V + l].c_str(), "%d %lg %lg", &j, &u, &w) != 3)
                throw std::invalid_argument("parse_operator: bad weight row '" + lines[V + l] + "'");
            if (l == 0) {
                if (j < 0) throw std::invalid_argument("parse_operator: negative level offset");
                offset = j;
            } else if (j != offset + static_cast<int>(l)) {
                throw std::invalid_argument("parse_operator: weight rows not consecutive by level");
            }
            lu[l] = u;
            lw[l] = w;
        }
        std::vector<double> u(tree.parent.size()), w(tree.parent.size());
        for (size_t v = 0; v < tree.parent.size(); ++v) {
            u[v] = lu[static_cast<size_t>(tree.level[v])];
            w[v] = lw[static_cast<size_t>(tree.level[v])];
        }
        SummationOperator s = SummationOperator::from_weights(tree, u, w, p, q);
        s.level_offset = offset;
        return s;
    };

    size_t run = lines.size();
    for (size_t i = 0; i < lines.size(); ++i) {
        long long id = -1;
        if (std::sscanf(lines[i].c_str(), "%lld", &id) != 1 || id != static_cast<long long>(i)) {
            run = i;
            break;
        }
    }
    if (run < lines.size()) return build(run);
    // ambiguous id run: try every split from the largest plausible tree down
    for (size_t V = lines.size() - 1; V >= 1; --V) {
        try {
            return build(V);
        } catch (const std::invalid_argument&) {
            if (V == 1) break;
        }
    }
    throw std::invalid_argument("parse_operator: no consistent tree/weight split");
}

}  // namespace entro
