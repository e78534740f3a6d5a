#pragma once

// The acceptance gate: twelve end-to-end criteria, each with pinned
// tolerances and its own wall-clock budget.  Every criterion re-derives its
// expected values from closed forms or independent oracles at run time; a
// criterion never reads fixtures.  The runner prints one line per criterion
// and the process exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "entro/experiments.hpp"

namespace entro {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::uint64_t seed = 0x5eedULL;
    int jobs = 1;
    // Override for the ratio band in the identity-block comparison; the
    // default is the shipped tolerance, 1 is the impossible-band control.
    double schutt_band = 16.0;
};

namespace acceptdetail {

using expdetail::fd;

// Accumulates checks; keeps the first failure and a caller-supplied summary.
struct Tally {
    bool ok = true;
    long long checks = 0;
    std::string first_fail;

    void expect(bool cond, const std::string& why) {
        ++checks;
        if (!cond && ok) {
            ok = false;
            first_fail = why;
        }
    }
};

inline CriterionResult finish(int id, const std::string& name, const Tally& t,
                              const std::string& summary) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    r.pass = t.ok;
    r.detail = t.ok ? summary + " (" + std::to_string(t.checks) + " checks)" : t.first_fail;
    return r;
}

// ---- 1: 1-D law ----------------------------------------------------------
// The unit interval under the sup norm: e_k of the identity is exactly
// 2^{1-k}, and the oracle bracket must pin it tightly.
inline CriterionResult c1_one_dim_law(const AcceptanceOptions&) {
    Tally t;
    OperatorMatrix id = OperatorMatrix::identity(1, Exponent::inf(), Exponent::inf());
    OracleProfile prof = entropy_oracle_profile(id, 6, 0.005, {});
    double max_width = 0.0;
    for (int k = 1; k <= 6; ++k) {
        double truth = std::exp2(1.0 - k);
        double lo = prof.lower[k - 1], hi = prof.upper[k - 1];
        t.expect(lo <= truth && truth <= hi,
                 "k=" + std::to_string(k) + ": bracket [" + fd(lo) + ", " + fd(hi) +
                     "] misses " + fd(truth));
        t.expect(hi - lo <= 0.02,
                 "k=" + std::to_string(k) + ": width " + fd(hi - lo) + " > 0.02");
        max_width = std::max(max_width, hi - lo);
    }
    return finish(1, "one-dim-law", t, "max bracket width " + fd(max_width));
}

// ---- 2: scale equivariance -----------------------------------------------
inline CriterionResult c2_scale_equivariance(const AcceptanceOptions& o) {
    Tally t;
    const Exponent pool[5] = {Exponent::finite(1.0), Exponent::finite(1.5), Exponent::finite(2.0),
                              Exponent::finite(3.0), Exponent::inf()};
    const double lambdas[3] = {0.5, 2.0, 10.0};
    const int k_max = 4;
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        SplitMix64 rng(hash_mix(o.seed, 200 + i));
        int rows = 1 + static_cast<int>(rng.next_below(3));
        int cols = 1 + static_cast<int>(rng.next_below(3));
        Exponent p = pool[rng.next_below(5)], q = pool[rng.next_below(5)];
        OperatorMatrix T(rows, cols, p, q);
        for (double& x : T.a) x = 2.0 * rng.next_unit() - 1.0;
        OracleOptions opts;
        opts.restarts = 8;
        opts.seed_salt = hash_mix(o.seed, i);
        OracleProfile base = entropy_oracle_profile(T, k_max, 0.15, opts);
        for (double lam : lambdas) {
            OracleProfile scaled = entropy_oracle_profile(T.scaled(lam), k_max, 0.15, opts);
            for (int k = 0; k < k_max; ++k) {
                double dl = std::fabs(scaled.lower[k] - lam * base.lower[k]);
                double du = std::fabs(scaled.upper[k] - lam * base.upper[k]);
                double tol_l = 1e-9 * std::max(1.0, lam * base.lower[k]);
                double tol_u = 1e-9 * std::max(1.0, lam * base.upper[k]);
                t.expect(dl <= tol_l && du <= tol_u,
                         "op " + std::to_string(i) + " lambda " + fd(lam) + " k=" +
                             std::to_string(k + 1) + ": interval deviates by " +
                             fd(std::max(dl, du)));
                worst = std::max(worst, std::max(dl / tol_l, du / tol_u));
            }
        }
    }
    return finish(2, "scale-equivariance", t, "max deviation " + fd(worst) + " of tolerance");
}

// ---- 3: diagonal-identity envelope band ----------------------------------
inline CriterionResult c3_schutt_band(const AcceptanceOptions& o) {
    Tally t;
    std::vector<Exponent> es = {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::inf()};
    SchuttBandResult res =
        run_schutt_band({2, 3, 4}, es, es, 8, o.schutt_band, o.seed, o.jobs, 8);
    for (const SchuttBandRow& r : res.rows)
        t.expect(r.ratio >= 1.0 / o.schutt_band && r.ratio <= o.schutt_band,
                 "nu=" + std::to_string(r.nu) + " p=" + r.p.str() + " q=" + r.q.str() +
                     " k=" + std::to_string(r.k) + ": ratio " + fd(r.ratio) +
                     " outside [1/" + fd(o.schutt_band) + ", " + fd(o.schutt_band) + "]");
    return finish(3, "schutt-band", t,
                  "ratios in [" + fd(res.ratio_min) + ", " + fd(res.ratio_max) + "]");
}

// ---- 4: sum and composition calculus -------------------------------------
inline CriterionResult c4_bound_calculus(const AcceptanceOptions& o) {
    Tally t;
    const Exponent pool[3] = {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::inf()};
    const double mesh = 0.15;
    const int k_max = 4;
    OracleOptions opts;
    opts.restarts = 8;
    double worst_slack = 0.0;
    for (int i = 0; i < 50; ++i) {
        SplitMix64 rng(hash_mix(o.seed, 400 + i));
        opts.seed_salt = hash_mix(o.seed, 4000 + i);
        int r = 1 + static_cast<int>(rng.next_below(3));
        int c = 1 + static_cast<int>(rng.next_below(3));
        int mid = 1 + static_cast<int>(rng.next_below(3));
        Exponent p = pool[rng.next_below(3)], q = pool[rng.next_below(3)];
        Exponent pm = pool[rng.next_below(3)];
        auto fill = [&](OperatorMatrix& m) {
            for (double& x : m.a) x = 2.0 * rng.next_unit() - 1.0;
        };

        // additivity: e_{k+l-1}(S+T) <= e_k(S) + e_l(T)
        OperatorMatrix S(r, c, p, q), T(r, c, p, q);
        fill(S);
        fill(T);
        BoundSequence a = oracle_upper_sequence(entropy_oracle_profile(S, k_max, mesh, opts));
        BoundSequence b = oracle_upper_sequence(entropy_oracle_profile(T, k_max, mesh, opts));
        BoundSequence sum = bound_sum(a, b);
        OracleProfile psum =
            entropy_oracle_profile(S + T, 2 * k_max - 1, mesh, opts);
        double slack = 2.0 * mesh * (norm_upper_bound(S) + norm_upper_bound(T)) + 1e-9;
        for (int m = 1; m <= 2 * k_max - 1; ++m) {
            double gap = psum.upper[m - 1] - sum.at(static_cast<size_t>(m));
            t.expect(gap <= slack, "pair " + std::to_string(i) + " sum index " +
                                       std::to_string(m) + ": oracle upper exceeds calculus by " +
                                       fd(gap) + " > slack " + fd(slack));
            worst_slack = std::max(worst_slack, gap / slack);
        }

        // composition: S2 (mid -> q) after T2 (p -> mid)
        OperatorMatrix T2(mid, c, p, pm), S2(r, mid, pm, q);
        fill(T2);
        fill(S2);
        BoundSequence a2 = oracle_upper_sequence(entropy_oracle_profile(S2, k_max, mesh, opts));
        BoundSequence b2 = oracle_upper_sequence(entropy_oracle_profile(T2, k_max, mesh, opts));
        double ns = norm_upper_bound(S2), nt = norm_upper_bound(T2);
        BoundSequence comp = bound_compose(a2, b2, ns, nt);
        OracleProfile pcomp =
            entropy_oracle_profile(compose(S2, T2), 2 * k_max - 1, mesh, opts);
        double cslack = 2.0 * mesh * (ns * nt + ns + nt) + 1e-9;
        for (int m = 1; m <= 2 * k_max - 1; ++m) {
            double gap = pcomp.upper[m - 1] - comp.at(static_cast<size_t>(m));
            t.expect(gap <= cslack, "pair " + std::to_string(i) + " compose index " +
                                        std::to_string(m) + ": oracle upper exceeds calculus by " +
                                        fd(gap) + " > slack " + fd(cslack));
            worst_slack = std::max(worst_slack, gap / cslack);
        }
    }
    return finish(4, "bound-calculus", t, "worst gap at " + fd(worst_slack) + " of mesh slack");
}

// ---- 5: diagonal tail exactness ------------------------------------------
inline CriterionResult c5_kuhn_exact(const AcceptanceOptions&) {
    Tally t;
    double worst = 0.0;
    // geometric sigma_k = c r^k against symbolic geometric sums
    struct Case {
        double c, r;
        Exponent p, q;
    };
    const Case cases[3] = {{1.0, 0.5, Exponent::inf(), Exponent::finite(1.0)},
                           {1.0, 0.5, Exponent::finite(2.0), Exponent::finite(1.0)},
                           {3.0, 0.75, Exponent::finite(3.0), Exponent::finite(1.5)}};
    for (const Case& cs : cases) {
        SigmaSeq sig = GeometricSeq{cs.c, cs.r};
        // exponent of the inner sum: q when p = inf, else pq/(p-q)
        double E = cs.p.is_inf() ? cs.q.value()
                                 : cs.p.value() * cs.q.value() / (cs.p.value() - cs.q.value());
        double outer = cs.q.inv() - cs.p.inv();
        for (long long n = 1; n <= 50; ++n) {
            double inner = std::pow(cs.c, E) * std::pow(cs.r, E * n) / (1.0 - std::pow(cs.r, E));
            double expect = std::pow(inner, outer);
            double got = kuhn_omega(sig, cs.p, cs.q, n);
            double rel = std::fabs(got - expect) / expect;
            t.expect(rel <= 1e-12, "geometric omega_" + std::to_string(n) + ": rel err " + fd(rel));
            worst = std::max(worst, rel);
        }
    }
    // doubling constant: omega_n / omega_2n = 2^n for c=1, r=1/2, p=inf, q=1
    double dbl = check_doubling(GeometricSeq{1.0, 0.5}, Exponent::inf(), Exponent::finite(1.0), 8);
    double rel = std::fabs(dbl - 256.0) / 256.0;
    t.expect(rel <= 1e-12, "doubling constant " + fd(dbl) + " != 2^8");
    worst = std::max(worst, rel);
    return finish(5, "kuhn-exact", t, "max relative error " + fd(worst));
}

// ---- 6: balanced-partition fuzz ------------------------------------------
inline CriterionResult c6_partition_fuzz(const AcceptanceOptions& o) {
    Tally t;
    const int trials = 500;
    const int ks[3] = {2, 3, 5};
    struct Row {
        std::string fail;  // empty on pass
        double witness = 0.0;
    };
    std::vector<Row> rows(trials);
    expdetail::parallel_cells(o.jobs, trials, [&](int i) {
        SplitMix64 rng(hash_mix(o.seed, 600 + i));
        int V = 1 + static_cast<int>(rng.next_below(10000));
        int k = ks[rng.next_below(3)];
        RootedTree tree = random_tree(rng.next(), V, k);
        std::vector<double> phi(static_cast<size_t>(V));
        for (double& w : phi) w = 0.125 + rng.next_unit();
        int depth = 0;
        while ((2LL << depth) <= V) ++depth;  // n = 1..2^depth, all <= V
        DyadicChainResult chain = dyadic_chain(tree, phi, depth);
        Row& row = rows[static_cast<size_t>(i)];
        for (size_t lv = 0; lv < chain.levels.size(); ++lv) {
            const BalancedPartitionReport& rep = chain.levels[lv];
            PartitionCheck chk = verify_partition_lemma(tree, phi, rep);
            if (!chk.pass) {
                row.fail = "trial " + std::to_string(i) + " n=" + std::to_string(rep.n) + ": " +
                           chk.violation;
                return;
            }
            // the exact (k+2)*Phi_total/n bound, no tolerance
            if (rep.max_nonsingleton_phi > (k + 2.0) * rep.phi_total / static_cast<double>(rep.n)) {
                row.fail = "trial " + std::to_string(i) + " n=" + std::to_string(rep.n) +
                           ": non-singleton part exceeds (k+2) Phi / n";
                return;
            }
            if (rep.parts_count > (2LL * k + 4) * rep.n) {
                row.fail = "trial " + std::to_string(i) + " n=" + std::to_string(rep.n) +
                           ": parts_count " + std::to_string(rep.parts_count) + " > (2k+4) n";
                return;
            }
            row.witness = std::max(row.witness, rep.witness_C);
            if (lv + 1 < chain.levels.size()) {
                NestingCheck nest =
                    verify_nesting(rep.parts, chain.levels[lv + 1].parts);
                if (!nest.pass) {
                    row.fail = "trial " + std::to_string(i) + ": " + nest.violation;
                    return;
                }
            }
        }
    });
    double max_witness = 0.0;
    for (const Row& row : rows) {
        t.expect(row.fail.empty(), row.fail);
        max_witness = std::max(max_witness, row.witness);
    }
    return finish(6, "partition-fuzz", t,
                  std::to_string(trials) + " trees, max witness C " + fd(max_witness));
}

// ---- 7: norm estimate vs exact norms -------------------------------------
inline CriterionResult c7_sumop_norms(const AcceptanceOptions& o) {
    Tally t;
    const Exponent qs[3] = {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::inf()};
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        SplitMix64 rng(hash_mix(o.seed, 700 + i));
        int V = 2 + static_cast<int>(rng.next_below(63));
        RootedTree tree = random_tree(rng.next(), V, 1 + static_cast<int>(rng.next_below(4)));
        std::vector<double> u(static_cast<size_t>(V)), w(static_cast<size_t>(V));
        for (double& x : u) x = 0.25 + 2.0 * rng.next_unit();
        for (double& x : w) x = 0.25 + 2.0 * rng.next_unit();
        Exponent p, q;
        switch (i % 3) {  // the three exactly-solvable regimes
            case 0: p = Exponent::finite(1.0); q = qs[rng.next_below(3)]; break;
            case 1: p = Exponent::inf(); q = qs[rng.next_below(3)]; break;
            default: p = Exponent::finite(2.0); q = Exponent::finite(2.0); break;
        }
        SummationOperator s = SummationOperator::from_weights(tree, u, w, p, q);
        double exact = norm_exact(s);
        NormEstimate est = norm_estimate(s, V + 2, hash_mix(o.seed, 7000 + i));
        double upper = norm_upper_bound(s);
        double rel = std::fabs(est.value - exact) / exact;
        t.expect(rel <= 1e-6, "tree " + std::to_string(i) + " (p=" + p.str() + ", q=" + q.str() +
                                  "): estimate off exact by " + fd(rel));
        t.expect(est.value <= upper * (1.0 + 1e-12),
                 "tree " + std::to_string(i) + ": estimate exceeds the closed-form upper bound");
        t.expect(est.value <= exact * (1.0 + 1e-12),
                 "tree " + std::to_string(i) + ": certified lower exceeds the exact norm");
        worst = std::max(worst, rel);
    }
    return finish(7, "sumop-norms", t, "max relative gap " + fd(worst));
}

// ---- 8: per-level norm vs closed form C(j) -------------------------------
inline CriterionResult c8_cj_band(const AcceptanceOptions& o) {
    Tally t;
    CjBandOptions opts;
    opts.subtree_depth = 8;
    opts.seed = o.seed;

    WeightProfile case1;  // plain power decay on the doubling tree
    case1.kappa_w = 2.0;
    CjBandReport r1 = cj_band_experiment(case1, HSetProfile::binary(), Exponent::finite(1.0),
                                         Exponent::finite(1.0), 2, 8, opts);
    t.expect(r1.band <= 32.0, "power-decay profile: band " + fd(r1.band) + " > 32");

    WeightProfile case3;  // boundary w-decay, p=1 < q=2 on the quadrupling tree
    case3.kappa_w = 1.0;
    case3.alpha_w = 1.0;
    CjBandReport r3 = cj_band_experiment(case3, HSetProfile::quaternary(), Exponent::finite(1.0),
                                         Exponent::finite(2.0), 2, 8, opts);
    t.expect(r3.band <= 32.0, "boundary-decay profile: band " + fd(r3.band) + " > 32");
    return finish(8, "cj-band", t,
                  "bands " + fd(r1.band) + " and " + fd(r3.band) + " over j=2..8");
}

// ---- 9: block route stays below the oracle upper -------------------------
inline CriterionResult c9_block_lower(const AcceptanceOptions& o) {
    Tally t;
    const Exponent pool[3] = {Exponent::finite(1.0), Exponent::finite(2.0), Exponent::inf()};
    int compared = 0;
    for (int i = 0; i < 20; ++i) {
        SplitMix64 rng(hash_mix(o.seed, 900 + i));
        int V = 2 + static_cast<int>(rng.next_below(3));  // oracle needs cols <= 4
        RootedTree tree = random_tree(rng.next(), V, 2);
        std::vector<double> u(static_cast<size_t>(V)), w(static_cast<size_t>(V));
        for (double& x : u) x = 0.5 + rng.next_unit();
        for (double& x : w) x = 0.5 + rng.next_unit();
        Exponent p = pool[rng.next_below(3)], q = pool[rng.next_below(3)];
        SummationOperator s = SummationOperator::from_weights(tree, u, w, p, q);
        OracleOptions opts;
        opts.restarts = 16;
        opts.seed_salt = hash_mix(o.seed, 9000 + i);
        OracleProfile prof = entropy_oracle_profile(to_matrix(s), 2, V == 4 ? 0.15 : 0.12, opts);
        for (int n = 1; n <= 2; ++n)
            for (int m = 1; m <= 2; ++m) {
                if (n > m) continue;  // certified route needs n <= m
                BlockLowerBound blk;
                try {
                    blk = entropy_lower_via_blocks(s, n, m, 0.05);
                } catch (const InfeasibleProfile&) {
                    continue;  // no level carries m incomparable subtrees
                }
                if (!blk.certified) continue;
                ++compared;
                t.expect(blk.value <= prof.upper[n - 1] * (1.0 + 1e-9),
                         "op " + std::to_string(i) + " n=" + std::to_string(n) + " m=" +
                             std::to_string(m) + ": block lower " + fd(blk.value) +
                             " exceeds oracle upper " + fd(prof.upper[n - 1]));
            }
    }
    t.expect(compared >= 20, "too few certified comparisons: " + std::to_string(compared));
    return finish(9, "block-lower", t, std::to_string(compared) + " certified comparisons");
}

// ---- 10: envelope slopes and excluded boundaries -------------------------
inline CriterionResult c10_envelope_slopes(const AcceptanceOptions&) {
    Tally t;
    const Exponent P1 = Exponent::finite(1.0), P2 = Exponent::finite(2.0),
                   P4 = Exponent::finite(4.0);
    HSetProfile bin = HSetProfile::binary(), lg = HSetProfile::logarithmic();

    auto tree_par = [](HSetProfile hp, double ku, double au, double kw, double aw, Exponent p,
                       Exponent q, double lam_u = 0.0) {
        TreeEnvelopeParams par;
        par.profile = hp;
        par.weights.kappa_u = ku;
        par.weights.alpha_u = au;
        par.weights.kappa_w = kw;
        par.weights.alpha_w = aw;
        if (lam_u != 0.0) par.weights.rho_u = RhoSpec::log_pow(lam_u);
        par.p = p;
        par.q = q;
        return par;
    };
    auto sob_par = [](HSetProfile hp, Exponent p, Exponent q, double bg, double ag,
                      double lam_g = 0.0) {
        SobolevEnvelopeParams par;
        par.r = 2.0;
        par.d = 2.0;
        par.p = p;
        par.q = q;
        par.profile = hp;
        par.beta_g = bg;
        par.alpha_g = ag;
        if (lam_g != 0.0) par.rho_g = RhoSpec::log_pow(lam_g);
        return par;
    };

    struct Branch {
        std::string label;
        std::function<double(long long)> value;
        double power, log_power;
    };
    std::vector<Branch> branches;
    auto add_tree8 = [&](std::string label, TreeEnvelopeParams par, double s, double lt) {
        branches.push_back(
            {std::move(label), [par](long long n) { return theorem8_envelope(par, n).value; }, s, lt});
    };
    auto add_tree9 = [&](std::string label, TreeEnvelopeParams par, double s, double lt) {
        branches.push_back(
            {std::move(label), [par](long long n) { return theorem9_envelope(par, n).value; }, s, lt});
    };
    auto add_sob = [&](std::string label, SobolevEnvelopeParams par, double s, double lt) {
        branches.push_back(
            {std::move(label), [par](long long n) { return sobolev_envelopes(par, n).value; }, s, lt});
    };

    // decaying-weight tree envelope, all five branches
    add_tree8("decay/case1", tree_par(bin, 0.0, 0.5, 1.0, 0.5, P2, P2), -1.0, -1.0);
    add_tree8("decay/case1-edge", tree_par(bin, 0.5, 0.0, 0.5, 1.0, P2, P2), -1.0, -0.5);
    add_tree8("decay/case2a", tree_par(bin, -1.0, 1.5, 1.0, 0.5, P2, P2), 0.0, -2.0);
    add_tree8("decay/case2b.1", tree_par(bin, -1.0, 1.5, 1.0, 0.5, P1, P2), -0.5, -1.5);
    add_tree8("decay/case2b.2", tree_par(bin, -1.0, -0.75, 1.0, 1.0, P1, P2, 1.0), -0.25, -1.0);
    // flat tree envelope
    add_tree9("flat/case1", tree_par(lg, -1.0, 1.0, 1.0, 1.0, P2, P2), -1.0, 0.0);
    add_tree9("flat/case1-gap", tree_par(lg, -1.0, 1.0, 1.0, 1.0, P1, P2), -1.5, 0.0);
    add_tree9("flat/case2a", tree_par(lg, -1.0, -1.0, 1.0, 1.0, P2, P2, 1.0), 0.0, -1.0);
    add_tree9("flat/case2b.1", tree_par(lg, -1.0, -1.0, 1.0, 1.0, P1, P2, 2.0), -0.5, -1.5);
    add_tree9("flat/case2b.2", tree_par(lg, -1.0, -1.0, 1.0, 1.0, P1, P2, 0.25), -0.25, 0.0);
    // embedding envelopes
    add_sob("emb/th1-power", sob_par(bin, P2, P2, 0.0, 0.0), -1.0, 0.0);
    add_sob("emb/th1-log", sob_par(bin, P2, P2, 1.5, 1.0), -0.5, -1.0);
    add_sob("emb/th1-2a", sob_par(bin, P4, P2, 2.25, 1.0), 0.0, -0.75);
    add_sob("emb/th1-2b.1", sob_par(bin, P1, P2, 1.0, 1.0), -0.5, -0.5);
    add_sob("emb/th1-2b.2", sob_par(bin, P1, P2, 1.0, 0.25, 1.0), -0.25, -1.0);
    add_sob("emb/th2", sob_par(lg, P2, P2, 0.0, 0.0), -1.0, 0.0);
    add_sob("emb/th3-log", sob_par(lg, P2, P2, 2.0, 1.0, 1.0), -0.5, -1.0);
    add_sob("emb/th3-power", sob_par(lg, P2, P2, 2.0, 3.0), -1.0, 0.0);
    add_sob("emb/th3-2a", sob_par(lg, P2, P2, 2.0, 0.0, 1.0), 0.0, -1.0);
    add_sob("emb/th3-2b.1", sob_par(lg, P1, P2, 1.0, 0.0, 2.0), -0.5, -1.5);
    add_sob("emb/th3-2b.2", sob_par(lg, P1, P2, 1.0, 0.0, 0.25), -0.25, 0.0);

    double worst_pow = 0.0, worst_log = 0.0;
    for (const Branch& br : branches) {
        RateSeries series;
        for (int e = 6; e <= 24; ++e) series.push(1LL << e, br.value(1LL << e));
        SlopeFit fit = slope_fit(series);
        double dp = std::fabs(fit.power - br.power);
        double dl = std::fabs(fit.log_power - br.log_power);
        t.expect(dp <= 0.05, br.label + ": fitted power " + fd(fit.power) + " vs coded " +
                                 fd(br.power));
        t.expect(dl <= 0.5, br.label + ": fitted log power " + fd(fit.log_power) + " vs coded " +
                                fd(br.log_power));
        worst_pow = std::max(worst_pow, dp);
        worst_log = std::max(worst_log, dl);
    }

    // excluded boundaries must refuse, not extrapolate
    auto throws_unsupported = [](auto&& fn) {
        try {
            fn();
        } catch (const UnsupportedRegime&) {
            return true;
        }
        return false;
    };
    t.expect(throws_unsupported(
                 [&] { theorem8_envelope(tree_par(bin, -1.0, 0.0, 1.0, 0.5, P1, P2), 64); }),
             "decay boundary alpha_0 = 1/p - 1/q not rejected");
    t.expect(throws_unsupported(
                 [&] { theorem8_envelope(tree_par(bin, -2.0, 0.0, 1.0, 0.0, P2, P2), 64); }),
             "decay kappa below covered range not rejected");
    t.expect(throws_unsupported(
                 [&] { theorem9_envelope(tree_par(lg, -1.0, -1.0, 1.0, 1.0, P1, P2, 0.5), 64); }),
             "flat boundary lambda = 1/p - 1/q not rejected");
    t.expect(throws_unsupported([&] { sobolev_envelopes(sob_par(bin, P2, P2, 1.0, 0.0), 64); }),
             "embedding tie delta/d = (delta-beta)/theta not rejected");
    t.expect(throws_unsupported([&] { sobolev_envelopes(sob_par(lg, P2, P2, 2.0, 2.0), 64); }),
             "embedding tie delta/d = alpha/(1-gamma) not rejected");
    return finish(10, "envelope-slopes", t,
                  std::to_string(branches.size()) + " branches, worst power gap " + fd(worst_pow) +
                      ", log gap " + fd(worst_log));
}

// ---- 11: growth inversion -------------------------------------------------
inline CriterionResult c11_growth_inverse(const AcceptanceOptions&) {
    Tally t;
    std::vector<GrowthSpec> specs(3);
    specs[0] = {2.0, 0.0, RhoSpec::constant()};
    specs[1] = {1.0, 1.0, RhoSpec::constant()};
    specs[2] = {1.5, -2.0, RhoSpec::log_pow(1.0)};
    double worst_rel = 0.0, worst_ratio = 1.0;
    for (size_t si = 0; si < specs.size(); ++si) {
        const GrowthSpec& spec = specs[si];
        GrowthThreshold th = growth_threshold(spec);
        double lo = std::log2(std::max(th.x0 * (1.0 + 1e-9), 16.0)), hi = 140.0;
        for (int i = 0; i < 100; ++i) {
            double x = std::exp2(lo + (hi - lo) * i / 99.0);
            double y = invert_growth(spec, x);
            double resid = std::fabs(spec.eval(y) - x);
            t.expect(resid <= 1e-10 * x, "spec " + std::to_string(si) + " x=" + fd(x) +
                                             ": residual " + fd(resid) + " > 1e-10 x");
            worst_rel = std::max(worst_rel, resid / x);
            if (x >= std::exp2(20.0)) {
                double ratio = y / growth_inverse_asymptotic(spec, x);
                t.expect(ratio >= 0.5 && ratio <= 2.0,
                         "spec " + std::to_string(si) + " x=" + fd(x) +
                             ": asymptotic inverse off by factor " + fd(ratio));
                worst_ratio = std::max(worst_ratio, std::max(ratio, 1.0 / ratio));
            }
        }
    }
    return finish(11, "growth-inverse", t, "max residual " + fd(worst_rel) +
                                               " of x, asymptotic factor " + fd(worst_ratio));
}

// ---- 12: byte-identical reruns -------------------------------------------
inline CriterionResult c12_determinism(const AcceptanceOptions& o) {
    Tally t;
    std::vector<json> cfgs;
    cfgs.push_back({{"kind", "entropy-oracle"},
                    {"seed", 7},
                    {"p", "inf"},
                    {"q", "inf"},
                    {"op", {{"type", "identity"}, {"dim", 2}}},
                    {"k_max", 4},
                    {"mesh", 0.1},
                    {"restarts", 8}});
    cfgs.push_back({{"kind", "kuhn"},
                    {"seed", 7},
                    {"sigma", {{"type", "geometric"}, {"c", 1.0}, {"ratio", 0.5}}},
                    {"p", "inf"},
                    {"q", 1},
                    {"n_max", 16}});
    cfgs.push_back({{"kind", "partition-fuzz"},
                    {"seed", 11},
                    {"trees", 40},
                    {"v_max", 300},
                    {"dyadic_depth", 2}});
    cfgs.push_back({{"kind", "schutt-band"},
                    {"seed", 5},
                    {"nu", json::array({2})},
                    {"p", json::array({2})},
                    {"q", json::array({1})},
                    {"k_max", 4},
                    {"restarts", 4}});
    cfgs.push_back({{"kind", "cj-band"},
                    {"seed", 3},
                    {"profile", "binary"},
                    {"weights", {{"kappa_w", 2.0}}},
                    {"p", 1},
                    {"q", 1},
                    {"j_lo", 2},
                    {"j_hi", 4},
                    {"depth", 4}});
    int bodies = 0;
    for (const json& cfg : cfgs) {
        std::uint64_t seed = experiment_seed(cfg, nullptr);
        ExperimentOutcome first = run_experiment(cfg, 1, seed);
        ExperimentOutcome again = run_experiment(cfg, 1, seed);
        ExperimentOutcome wide = run_experiment(cfg, 2, seed);  // scheduling must not leak
        t.expect(first.files.size() == again.files.size() &&
                     first.files.size() == wide.files.size(),
                 cfg["kind"].get<std::string>() + ": file sets differ between runs");
        for (size_t f = 0; f < first.files.size(); ++f) {
            ++bodies;
            t.expect(first.files[f] == again.files[f],
                     cfg["kind"].get<std::string>() + "/" + first.files[f].first +
                         ": rerun body differs");
            t.expect(first.files[f] == wide.files[f],
                     cfg["kind"].get<std::string>() + "/" + first.files[f].first +
                         ": body depends on worker count");
        }
    }
    return finish(12, "determinism", t, std::to_string(bodies) + " result bodies compared");
}

}  // namespace acceptdetail

inline const std::vector<std::string>& acceptance_names() {
    static const std::vector<std::string> names = {
        "one-dim-law",    "scale-equivariance", "schutt-band", "bound-calculus",
        "kuhn-exact",     "partition-fuzz",     "sumop-norms", "cj-band",
        "block-lower",    "envelope-slopes",    "growth-inverse", "determinism"};
    return names;
}

inline CriterionResult run_acceptance_criterion(int id, const AcceptanceOptions& o) {
    using namespace acceptdetail;
    auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    switch (id) {
        case 1: r = c1_one_dim_law(o); break;
        case 2: r = c2_scale_equivariance(o); break;
        case 3: r = c3_schutt_band(o); break;
        case 4: r = c4_bound_calculus(o); break;
        case 5: r = c5_kuhn_exact(o); break;
        case 6: r = c6_partition_fuzz(o); break;
        case 7: r = c7_sumop_norms(o); break;
        case 8: r = c8_cj_band(o); break;
        case 9: r = c9_block_lower(o); break;
        case 10: r = c10_envelope_slopes(o); break;
        case 11: r = c11_growth_inverse(o); break;
        case 12: r = c12_determinism(o); break;
        default: throw std::invalid_argument("acceptance: criterion id out of range");
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// Maps suite tokens to criterion ids; "all" or an empty token list selects
// everything, an unknown token is a usage error.
inline std::vector<int> resolve_acceptance_subset(const std::vector<std::string>& tokens) {
    const std::vector<std::string>& names = acceptance_names();
    std::vector<int> ids;
    for (const std::string& tok : tokens) {
        if (tok.empty()) continue;  // explicit empty token: contributes nothing
        if (tok == "all") {
            for (int i = 1; i <= static_cast<int>(names.size()); ++i) ids.push_back(i);
            continue;
        }
        bool found = false;
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == tok) {
                ids.push_back(static_cast<int>(i) + 1);
                found = true;
            }
        if (!found) throw ConfigError("acceptance: unknown suite '" + tok + "'");
    }
    if (tokens.empty())
        for (int i = 1; i <= static_cast<int>(names.size()); ++i) ids.push_back(i);
    return ids;
}

// Runs the selected criteria, printing one line each.  Returns the process
// exit code: 0 when everything passed, 2 on any scientific failure.
inline int run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& o,
                          std::ostream& os) {
    if (ids.empty()) {
        os << "warning: empty acceptance subset selected; nothing to check "
              "(vacuous pass)\n";
        return 0;
    }
    int passed = 0;
    for (int id : ids) {
        CriterionResult r = run_acceptance_criterion(id, o);
        char line[64];
        std::snprintf(line, sizeof line, "[%2d] %-20s %s  %7.2fs  ", r.id, r.name.c_str(),
                      r.pass ? "PASS" : "FAIL", r.seconds);
        os << line << r.detail << "\n";
        if (r.pass) ++passed;
    }
    os << "acceptance: " << passed << "/" << ids.size() << " criteria passed\n";
    return passed == static_cast<int>(ids.size()) ? 0 : 2;
}

}  // namespace entro
