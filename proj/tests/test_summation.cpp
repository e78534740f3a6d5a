#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "entro/entropy_oracle.hpp"
#include "entro/errors.hpp"
#include "entro/rng.hpp"
#include "entro/summation.hpp"

using namespace entro;

static SummationOperator unit_chain(int v, Exponent p, Exponent q) {
    return SummationOperator::from_weights(random_tree(0, v, 1), std::vector<double>(v, 1.0),
                                           std::vector<double>(v, 1.0), p, q);
}

static SummationOperator random_sumop(std::uint64_t seed, int vmax, Exponent p, Exponent q) {
    SplitMix64 rng(seed);
    int V = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(vmax)));
    RootedTree t = random_tree(rng.next(), V, 3);
    std::vector<double> u(V), w(V);
    for (double& x : u) x = 0.25 + rng.next_unit();
    for (double& x : w) x = 0.25 + rng.next_unit();
    return SummationOperator::from_weights(t, u, w, p, q);
}

TEST_CASE("apply runs prefix sums along root paths") {
    Exponent p2 = Exponent::finite(2.0);
    SummationOperator chain = unit_chain(3, p2, p2);
    CHECK(apply(chain, {1.0, 1.0, 1.0}) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(apply(chain, {1.0, -1.0, 2.0}) == std::vector<double>{1.0, 0.0, 2.0});

    SummationOperator star = SummationOperator::from_weights(
        RootedTree::from_parents({-1, 0, 0}), {1, 1, 1}, {1, 1, 1}, p2, p2);
    CHECK(entro::apply(star, {1.0, 1.0, 1.0}) == std::vector<double>{1.0, 2.0, 2.0});
}

TEST_CASE("operator weights must be positive and sized to the tree") {
    RootedTree t = random_tree(0, 3, 1);
    Exponent p2 = Exponent::finite(2.0);
    CHECK_THROWS_AS(SummationOperator::from_weights(t, {1, 1}, {1, 1, 1}, p2, p2),
                    std::invalid_argument);
    CHECK_THROWS_AS(SummationOperator::from_weights(t, {1, 0, 1}, {1, 1, 1}, p2, p2),
                    std::invalid_argument);
}

TEST_CASE("matrix form matches apply on random inputs") {
    Exponent p2 = Exponent::finite(2.0);
    SummationOperator chain = unit_chain(2, p2, p2);
    OperatorMatrix M = to_matrix(chain);
    CHECK(M.a == std::vector<double>{1.0, 0.0, 1.0, 1.0});

    SummationOperator one = SummationOperator::from_weights(random_tree(0, 1, 1), {2.0}, {3.0}, p2, p2);
    CHECK(to_matrix(one).a == std::vector<double>{6.0});

    for (std::uint64_t seed : {3u, 4u, 5u}) {
        SummationOperator s = random_sumop(seed, 20, p2, p2);
        OperatorMatrix m = to_matrix(s);
        SplitMix64 rng(seed + 100);
        std::vector<double> f(s.size()), g1(s.size());
        for (double& x : f) x = 2.0 * rng.next_unit() - 1.0;
        std::vector<double> g2 = entro::apply(s, f);
        m.apply(f, g1);
        for (int i = 0; i < s.size(); ++i)
            CHECK(g1[i] == Catch::Approx(g2[i]).margin(1e-12));
    }
}

TEST_CASE("transpose application agrees with the matrix transpose") {
    Exponent p2 = Exponent::finite(2.0);
    SummationOperator s = random_sumop(9, 16, p2, p2);
    OperatorMatrix m = to_matrix(s);
    SplitMix64 rng(1);
    std::vector<double> g(s.size());
    for (double& x : g) x = 2.0 * rng.next_unit() - 1.0;
    std::vector<double> ft = apply_transpose(s, g);
    for (int j = 0; j < s.size(); ++j) {
        double dot = 0.0;
        for (int i = 0; i < s.size(); ++i) dot += m.at(i, j) * g[i];
        CHECK(ft[j] == Catch::Approx(dot).margin(1e-12));
    }
}

TEST_CASE("exact norms in the three closed regimes") {
    CHECK(norm_exact(unit_chain(3, Exponent::finite(1.0), Exponent::finite(1.0))) == 3.0);
    CHECK(norm_exact(unit_chain(3, Exponent::inf(), Exponent::inf())) == 3.0);
    // p=q=2, chain of 2: largest singular value of [[1,0],[1,1]] is the golden ratio
    double gold = (1.0 + std::sqrt(5.0)) / 2.0;
    CHECK(norm_exact(unit_chain(2, Exponent::finite(2.0), Exponent::finite(2.0))) ==
          Catch::Approx(gold).epsilon(1e-10));

    Exponent p2 = Exponent::finite(2.0);
    SummationOperator one = SummationOperator::from_weights(random_tree(0, 1, 1), {2.0}, {3.0},
                                                           Exponent::finite(1.0), p2);
    CHECK(norm_exact(one) == 6.0);

    CHECK(norm_exact_available(Exponent::finite(1.0), Exponent::finite(3.0)));
    CHECK(norm_exact_available(Exponent::inf(), Exponent::finite(2.0)));
    CHECK_FALSE(norm_exact_available(Exponent::finite(3.0), Exponent::finite(1.5)));
    CHECK_THROWS_AS(norm_exact(random_sumop(1, 8, Exponent::finite(3.0), Exponent::finite(1.5))),
                    UnsupportedRegime);
}

TEST_CASE("p=1 norm equals the best column in any q") {
    // chain of 3, p=1, q=inf: columns have sup-norms max_i w_i (u_j=1): all 1
    CHECK(norm_exact(unit_chain(3, Exponent::finite(1.0), Exponent::inf())) == 1.0);
    // q=2: column 0 has l2 norm sqrt(3)
    CHECK(norm_exact(unit_chain(3, Exponent::finite(1.0), Exponent::finite(2.0))) ==
          Catch::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("ascent estimate matches exact norms and respects the upper bound") {
    struct Regime {
        Exponent p, q;
    } regimes[] = {{Exponent::finite(1.0), Exponent::finite(2.0)},
                   {Exponent::inf(), Exponent::finite(1.0)},
                   {Exponent::finite(2.0), Exponent::finite(2.0)}};
    for (const Regime& r : regimes) {
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            SummationOperator s = random_sumop(hash_mix(seed, 55), 24, r.p, r.q);
            double exact = norm_exact(s);
            NormEstimate est = norm_estimate(s, s.size() + 2, seed);
            CHECK(est.value == Catch::Approx(exact).epsilon(1e-6));
            CHECK(est.value <= norm_upper_bound(s) * (1.0 + 1e-12));
            CHECK(est.value <= exact * (1.0 + 1e-12));  // ascent never overshoots
        }
    }
    // outside the exact regimes the estimate still sits under the upper bound
    SummationOperator s = random_sumop(5, 24, Exponent::finite(3.0), Exponent::finite(1.5));
    NormEstimate est = norm_estimate(s, 16, 7);
    CHECK(est.value > 0.0);
    CHECK(est.value <= norm_upper_bound(s) * (1.0 + 1e-12));
}

TEST_CASE("norms scale exactly with power-of-two weight scalings") {
    SummationOperator s = random_sumop(21, 20, Exponent::finite(1.0), Exponent::finite(2.0));
    SummationOperator s4 = s;
    for (double& x : s4.u) x *= 4.0;
    CHECK(norm_exact(s4) == 4.0 * norm_exact(s));

    SummationOperator t = random_sumop(22, 16, Exponent::finite(2.0), Exponent::finite(2.0));
    SummationOperator t4 = t;
    for (double& x : t4.w) x *= 4.0;
    CHECK(norm_exact(t4) == Catch::Approx(4.0 * norm_exact(t)).epsilon(1e-12));
    NormEstimate e1 = norm_estimate(t, 12, 3);
    NormEstimate e4 = norm_estimate(t4, 12, 3);
    CHECK(e4.value == Catch::Approx(4.0 * e1.value).epsilon(1e-12));
}

TEST_CASE("subtree operators never exceed the full norm") {
    SummationOperator s = random_sumop(31, 30, Exponent::finite(1.0), Exponent::finite(2.0));
    double full = norm_exact(s);
    for (int v = 0; v < s.size(); ++v) {
        SummationOperator sub = subtree_operator(s, v);
        CHECK(norm_exact(sub) <= full * (1.0 + 1e-12));
    }
    // level bookkeeping: the subtree keeps global levels through level_offset
    SummationOperator sub = subtree_operator(s, s.size() - 1);
    CHECK(sub.level_offset == s.tree.level[s.size() - 1]);
}

TEST_CASE("weight/profile compatibility condition") {
    HSetProfile bin = HSetProfile::binary();  // theta=1
    WeightProfile wp;
    wp.kappa_w = 1.0;
    CHECK(weight_decay_admissible(wp, bin, Exponent::finite(2.0)));   // 1 > 1/2
    CHECK_FALSE(weight_decay_admissible(wp, bin, Exponent::finite(1.0)));  // 1 = 1/1, alpha_w = 0
    wp.alpha_w = 2.0;
    CHECK(weight_decay_admissible(wp, bin, Exponent::finite(1.0)));   // boundary with alpha_w > 1
    CHECK_THROWS_AS(weight_decay_admissible(wp, bin, Exponent::inf()), std::invalid_argument);
}

TEST_CASE("profile-driven weights follow the closed form") {
    WeightProfile wp;
    wp.kappa_u = 1.0;
    wp.alpha_u = 2.0;
    wp.kappa_w = 0.5;
    wp.m_star = 2;
    // u_j = 2^{-m j} (m j + 1)^{-2}, w_j = 2^{-m j / 2}
    CHECK(wp.u_at(0) == 1.0);
    CHECK(wp.u_at(1) == Catch::Approx(0.25 / 9.0));
    CHECK(wp.w_at(3) == Catch::Approx(std::exp2(-3.0)));

    RootedTree t = random_tree(0, 4, 1);
    SummationOperator s = SummationOperator::from_profile(t, wp, Exponent::finite(2.0),
                                                          Exponent::finite(2.0));
    CHECK(s.u[2] == Catch::Approx(wp.u_at(2)));
    SummationOperator deep = SummationOperator::from_profile(t, wp, Exponent::finite(2.0),
                                                             Exponent::finite(2.0), 5);
    CHECK(deep.u[0] == Catch::Approx(wp.u_at(5)));
}

TEST_CASE("level-norm envelope: case selection and frozen values") {
    HSetProfile bin = HSetProfile::binary();        // theta=1, gamma=0
    HSetProfile quad = HSetProfile::quaternary();   // theta=2
    HSetProfile lg = HSetProfile::logarithmic();    // theta=0, gamma=-1
    Exponent p1 = Exponent::finite(1.0), p2 = Exponent::finite(2.0), p4 = Exponent::finite(4.0);

    SECTION("case 1: dominant exponential decay") {
        WeightProfile wp;
        wp.kappa_w = 2.0;
        CjValue c = cj_envelope(wp, bin, p1, p1, 3);
        CHECK(c.case_id == "case1");
        CHECK(c.value == Catch::Approx(std::exp2(-6.0)));
    }
    SECTION("case 2: critical decay, polynomial correction") {
        WeightProfile wp;
        wp.kappa_w = 2.0;
        wp.kappa_u = -1.5;  // kappa = 1/2 = theta * (1/q - 1/p)
        wp.alpha_u = 1.0;
        CjValue c = cj_envelope(wp, bin, p2, p1, 4);
        CHECK(c.case_id == "case2");
        CHECK(c.value == Catch::Approx(std::exp2(-2.0) * std::pow(4.0, -0.5)));
    }
    SECTION("case 3: boundary w-decay with theta > 0") {
        WeightProfile wp;
        wp.kappa_w = 1.0;   // = theta/q = 2/2
        wp.alpha_w = 1.0;   // needed on the boundary: > (1-gamma)/q = 1/2
        CjValue c = cj_envelope(wp, quad, p1, p2, 4);
        CHECK(c.case_id == "case3");
        CHECK(c.value == Catch::Approx(std::exp2(-4.0) * std::pow(4.0, -0.5)));
    }
    SECTION("case 4: boundary w-decay, p >= q") {
        WeightProfile wp;
        wp.kappa_w = 1.0;
        wp.alpha_w = 1.0;
        wp.kappa_u = -0.5;  // kappa = 1/2 = theta * (1/q-1/p) = 2 * 1/4
        wp.alpha_u = 2.0;   // alpha = 3 > 1 + (1-gamma) A = 1.25
        CjValue c = cj_envelope(wp, quad, p4, p2, 4);
        CHECK(c.case_id == "case4");
        CHECK(c.value == Catch::Approx(std::exp2(-2.0) * std::pow(4.0, -1.75)));
    }
    SECTION("flat-exponent log regimes at theta = 0") {
        WeightProfile wp;
        wp.kappa_w = 1.0;
        wp.kappa_u = -1.0;
        wp.alpha_w = 1.0;
        wp.alpha_u = -1.0;
        wp.rho_u = RhoSpec::log_pow(1.0);
        CjValue flat = cj_envelope(wp, lg, p2, p2, 4);
        CHECK(flat.case_id == "case-log-flat");
        CHECK(flat.value == Catch::Approx(0.5));  // (log2 4)^{-1}

        WeightProfile wg = wp;
        wg.alpha_u = -0.5;  // alpha = 1/2 = (1-gamma) A = 2 * 1/4
        CjValue gap = cj_envelope(wg, lg, p4, p2, 4);
        CHECK(gap.case_id == "case-log-gap");
        CHECK(gap.value == Catch::Approx(std::pow(4.0, -0.25) * std::pow(2.0, -0.75)));
    }
    SECTION("guards and excluded boundaries") {
        WeightProfile wp;
        wp.kappa_w = 2.0;
        CHECK_THROWS_AS(cj_envelope(wp, bin, p1, p1, 1), std::invalid_argument);
        CHECK_THROWS_AS(cj_envelope(wp, bin, p1, Exponent::inf(), 3), UnsupportedRegime);
        WeightProfile mism = wp;
        mism.m_star = 2;
        CHECK_THROWS_AS(cj_envelope(mism, bin, p1, p1, 3), std::invalid_argument);
        WeightProfile weak;  // kappa_w = 0 < theta/q
        CHECK_THROWS_AS(cj_envelope(weak, bin, p1, p1, 3), UnsupportedRegime);
        // kappa = theta A with alpha exactly (1-gamma) A and theta > 0: excluded
        WeightProfile bound;
        bound.kappa_w = 2.0;
        bound.kappa_u = -1.5;  // kappa = 0.5 = theta A
        bound.alpha_u = 0.5;   // alpha = (1-gamma) A = 0.5
        CHECK_THROWS_AS(cj_envelope(bound, bin, p2, p1, 4), UnsupportedRegime);
    }
}

TEST_CASE("norm/envelope ratios stay in a narrow band for a decaying profile") {
    HSetProfile bin = HSetProfile::binary();
    WeightProfile wp;
    wp.kappa_w = 2.0;
    CjBandOptions opts;
    opts.subtree_depth = 5;
    CjBandReport rep = cj_band_experiment(wp, bin, Exponent::finite(1.0), Exponent::finite(1.0),
                                          2, 5, opts);
    REQUIRE(rep.rows.size() == 4);
    for (const CjBandRow& row : rep.rows) {
        CHECK(row.exact);
        CHECK(row.ratio > 0.0);
    }
    CHECK(rep.band <= 32.0);
    CHECK(rep.band >= 1.0);
}

TEST_CASE("block lower bounds stay under the oracle upper") {
    Exponent p2 = Exponent::finite(2.0);
    SummationOperator star = SummationOperator::from_weights(
        RootedTree::from_parents({-1, 0, 0}), {1, 1, 1}, {1, 1, 1}, p2, p2);
    BlockLowerBound blk = entropy_lower_via_blocks(star, 2, 2);
    CHECK(blk.certified);
    CHECK(blk.level == 1);
    CHECK(blk.roots.size() == 2);
    CHECK(blk.min_block_norm == Catch::Approx(1.0));
    EntropyInterval full = entropy_oracle(to_matrix(star), 2, 0.05);
    CHECK(blk.value <= full.upper + 1e-12);

    // m = 1 reduces to the halving law times the best subtree norm
    SummationOperator chain = unit_chain(3, p2, p2);
    BlockLowerBound m1 = entropy_lower_via_blocks(chain, 3, 1);
    CHECK(m1.certified);
    CHECK(m1.level == 0);
    CHECK(m1.value == Catch::Approx(norm_exact(chain) * 0.25).epsilon(1e-9));

    CHECK_THROWS_AS(entropy_lower_via_blocks(chain, 2, 2), InfeasibleProfile);
}

TEST_CASE("operator serialization dumps tree then levelwise weights") {
    Exponent p2 = Exponent::finite(2.0);
    SummationOperator s = SummationOperator::from_weights(random_tree(0, 2, 1), {1.0, 0.5},
                                                          {1.0, 0.5}, p2, p2);
    CHECK(serialize_operator(s) == "0 -1 0\n1 0 1\n0 1 1\n1 0.5 0.5\n");

    SummationOperator bad = SummationOperator::from_weights(
        RootedTree::from_parents({-1, 0, 0}), {1, 1, 1}, {1, 0.5, 0.7}, p2, p2);
    CHECK_THROWS_AS(serialize_operator(bad), std::invalid_argument);
}
