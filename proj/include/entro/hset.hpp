#pragma once

// Branching profiles h(t) = t^theta * |log2 t|^gamma * tau(|log2 t|) and the
// trees whose level populations track 1/h.  The closed form is only used for
// t <= t_floor; above the floor h is extended as a constant so it stays
// defined and monotone on all of (0,1].

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <vector>

#include "entro/errors.hpp"
#include "entro/slowly_varying.hpp"
#include "entro/tree.hpp"

namespace entro {

struct HSetProfile {
    double theta = 1.0;
    double gamma = 0.0;
    TauSpec tau;
    int m_star = 1;
    double c_star = 1.0;
    double t_floor = 0.25;

    static HSetProfile make(double theta, double gamma, TauSpec tau, int m_star,
                            double c_star, double t_floor = 0.25);

    // Pure power h(t) = t (binary growth, exact with c_star = 1).
    static HSetProfile binary() {
        return make(1.0, 0.0, TauSpec::constant(), 1, 1.0, 1.0);
    }
    // h(t) = t^2 (4-ary growth, exact with c_star = 1).
    static HSetProfile quaternary() {
        return make(2.0, 0.0, TauSpec::constant(), 1, 1.0, 1.0);
    }
    // h(t) = |log2 t|^{-1}: slow sub-polynomial growth, populations ~ j.
    static HSetProfile logarithmic() {
        return make(0.0, -1.0, TauSpec::constant(), 1, 2.0, 0.25);
    }
};

// h evaluated with the constant extension above t_floor.  Logs base 2.
inline double h_eval(const HSetProfile& prof, double t) {
    if (!(t > 0.0) || t > 1.0)
        throw std::domain_error("h_eval: t must lie in (0, 1], got " + std::to_string(t));
    double tt = std::min(t, prof.t_floor);
    double y = -std::log2(tt);  // = |log2 tt| since tt <= 1
    double logpart = prof.gamma == 0.0 ? 1.0 : std::pow(y, prof.gamma);
    return std::pow(tt, prof.theta) * logpart * prof.tau.eval(y);
}

inline HSetProfile HSetProfile::make(double theta, double gamma, TauSpec tau,
                                     int m_star, double c_star, double t_floor) {
    if (theta < 0.0) throw InfeasibleProfile("h profile: theta must be >= 0");
    if (m_star < 1) throw InfeasibleProfile("h profile: m_star must be >= 1");
    if (c_star < 1.0) throw InfeasibleProfile("h profile: c_star must be >= 1");
    if (!(t_floor > 0.0) || t_floor > 1.0)
        throw InfeasibleProfile("h profile: t_floor must lie in (0, 1]");
    HSetProfile prof{theta, gamma, tau, m_star, c_star, t_floor};
    // Positivity and monotonicity are checked numerically on a dyadic grid
    // reaching well below any depth the generator will touch.
    double prev = h_eval(prof, t_floor);
    if (!(prev > 0.0) || !std::isfinite(prev))
        throw InfeasibleProfile("h profile: h not positive/finite at t_floor");
    for (int i = 1; i <= 240; ++i) {
        double t = t_floor * std::exp2(-0.25 * i);
        double v = h_eval(prof, t);
        if (!(v > 0.0) || !std::isfinite(v))
            throw InfeasibleProfile("h profile: h not positive/finite at t = " + std::to_string(t));
        // grid descends, so h must not increase as t shrinks
        if (v > prev * (1.0 + 1e-9))
            throw InfeasibleProfile("h profile: h not nondecreasing near t = " + std::to_string(t));
        prev = v;
    }
    return prof;
}

struct HSetTreeResult {
    RootedTree tree;
    std::vector<long long> level_population;  // realized N_j, level 0..J
    std::vector<int> deficient_levels;        // levels where the target fell short
};

// Builds a tree whose level-j population tracks h(2^{-m* j0}) / h(2^{-m*(j0+j)}).
// level_offset shifts the profile window so subtrees rooted deep in a larger
// tree can be generated directly.  Populations never shrink: a target below
// the current population keeps one child per parent and the level is recorded
// as deficient.  Children are spread by remainder accumulation, so sibling
// counts at a level differ by at most one.
inline HSetTreeResult generate_hset_tree(const HSetProfile& prof, int J,
                                         int level_offset = 0,
                                         long long vertex_guard = 10000000) {
    if (J < 0 || J > 30)
        throw InfeasibleProfile("generate_hset_tree: depth must lie in [0, 30]");
    if (level_offset < 0)
        throw InfeasibleProfile("generate_hset_tree: level offset must be >= 0");
    double m = static_cast<double>(prof.m_star);
    if (m * (level_offset + J) > 900.0)
        throw InfeasibleProfile("generate_hset_tree: m_star * depth too large for double range");

    double h_top = h_eval(prof, std::exp2(-m * level_offset));
    std::vector<long long> pop(static_cast<size_t>(J) + 1, 1);
    std::vector<int> deficient;
    long long total = 1;
    for (int l = 1; l <= J; ++l) {
        double target = h_top / h_eval(prof, std::exp2(-m * (level_offset + l)));
        if (target > 2e18)
            throw InfeasibleProfile("generate_hset_tree: branching target overflows");
        long long want = std::llround(target);
        if (want < pop[l - 1]) {
            deficient.push_back(l);
            want = pop[l - 1];  // keep one child per parent; never die out
        }
        if (want < 1) want = 1;
        pop[l] = want;
        total += want;
        if (total > vertex_guard)
            throw InfeasibleProfile("generate_hset_tree: vertex count exceeds guard");
    }
    if (J >= 1 && static_cast<int>(deficient.size()) == J)
        throw InfeasibleProfile("generate_hset_tree: branching target below population at every level");

    // Children counts per parent are base = floor(ncur/nprev) plus one extra
    // for the lineages that have waited longest since their last branching.
    // A fixed assignment (extras always to the same parents) would starve the
    // other subtrees: their windowed counts drift below target without bound
    // for slowly growing profiles.  The rotation keeps every subtree's share
    // balanced at all window depths.
    std::vector<int> parent;
    parent.reserve(static_cast<size_t>(total));
    parent.push_back(-1);
    long long level_start = 0;           // id of first vertex at level l-1
    std::vector<long long> order(1, 0);  // relative ids, longest-waiting first
    for (int l = 1; l <= J; ++l) {
        long long nprev = pop[l - 1], ncur = pop[l];
        long long base = ncur / nprev;
        long long extra = ncur - base * nprev;
        std::vector<long long> cnt(static_cast<size_t>(nprev), base);
        for (long long r = 0; r < extra; ++r) cnt[static_cast<size_t>(order[r])] += 1;

        std::vector<long long> first_child(static_cast<size_t>(nprev));
        long long next_id = level_start + nprev;
        for (long long i = 0; i < nprev; ++i) {
            first_child[static_cast<size_t>(i)] = next_id;
            for (long long c = 0; c < cnt[static_cast<size_t>(i)]; ++c)
                parent.push_back(static_cast<int>(level_start + i));
            next_id += cnt[static_cast<size_t>(i)];
        }

        std::vector<long long> next_order;
        next_order.reserve(static_cast<size_t>(ncur));
        for (long long r = 0; r < nprev; ++r) {
            long long i = order[static_cast<size_t>(r)];
            if (cnt[static_cast<size_t>(i)] == 1)
                next_order.push_back(first_child[static_cast<size_t>(i)] - level_start - nprev);
        }
        for (long long r = 0; r < nprev; ++r) {
            long long i = order[static_cast<size_t>(r)];
            if (cnt[static_cast<size_t>(i)] >= 2)
                for (long long c = 0; c < cnt[static_cast<size_t>(i)]; ++c)
                    next_order.push_back(first_child[static_cast<size_t>(i)] - level_start - nprev +
                                         c);
        }
        order = std::move(next_order);
        level_start += nprev;
    }
    HSetTreeResult res;
    res.tree = RootedTree::from_parents(parent);
    res.level_population = std::move(pop);
    res.deficient_levels = std::move(deficient);
    return res;
}

struct HSetConditionReport {
    double q_min = 0.0;   // min over (vertex, depth) of card V_l(xi) / target ratio
    double q_max = 0.0;
    bool pass = false;
    long long pairs_checked = 0;
    int worst_vertex = -1;  // vertex attaining q_min
    int worst_depth = 0;
};

// Checks card V_l(xi) * h(2^{-m*(j+l)}) / h(2^{-m*j}) in [1/c_star, c_star]
// over realized (vertex, depth) pairs with j + l <= depth(tree).  Descendant
// counts for all vertices at offset l come from one bottom-up pass per l, so
// the sweep is exhaustive in O(V * depth) unless `sample` forces a stride.
inline HSetConditionReport verify_hset_condition(const RootedTree& tree,
                                                 const HSetProfile& prof,
                                                 long long sample = 2000000,
                                                 int level_offset = 0) {
    int V = tree.size();
    int D = tree.depth();
    double m = static_cast<double>(prof.m_star);

    long long all_pairs = 0;
    for (int v = 0; v < V; ++v) all_pairs += D - tree.level[v];
    long long stride = sample > 0 ? std::max(1LL, all_pairs / sample) : 1;

    HSetConditionReport rep;
    rep.q_min = std::numeric_limits<double>::infinity();
    rep.q_max = 0.0;

    std::vector<double> ratio_inv(static_cast<size_t>(D) + 1);  // h(2^{-m(j+l)})/h(2^{-mj}) by level j, per l
    std::vector<long long> cnt(static_cast<size_t>(V), 1), nxt(static_cast<size_t>(V), 0);
    long long tick = 0;
    for (int l = 1; l <= D; ++l) {
        // cnt currently holds descendant counts at offset l-1; push down once
        for (int v = 0; v < V; ++v) nxt[v] = 0;
        for (int v = V - 1; v >= 1; --v) nxt[tree.parent[v]] += cnt[v];
        std::swap(cnt, nxt);
        for (int j = 0; j + l <= D; ++j)
            ratio_inv[j] = h_eval(prof, std::exp2(-m * (level_offset + j + l))) /
                           h_eval(prof, std::exp2(-m * (level_offset + j)));
        for (int v = 0; v < V; ++v) {
            int j = tree.level[v];
            if (j + l > D) continue;
            if (tick++ % stride != 0) continue;
            double q = static_cast<double>(cnt[v]) * ratio_inv[j];
            if (q < rep.q_min) { rep.q_min = q; rep.worst_vertex = v; rep.worst_depth = l; }
            if (q > rep.q_max) rep.q_max = q;
            ++rep.pairs_checked;
        }
    }
    if (rep.pairs_checked == 0) { rep.q_min = 1.0; rep.q_max = 1.0; }
    rep.pass = rep.q_min >= (1.0 / prof.c_star) * (1.0 - 1e-9) &&
               rep.q_max <= prof.c_star * (1.0 + 1e-9);
    return rep;
}

}  // namespace entro
