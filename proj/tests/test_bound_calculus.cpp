#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "entro/bound_calculus.hpp"
#include "entro/entropy_oracle.hpp"
#include "entro/operator_matrix.hpp"
#include "entro/rng.hpp"

using namespace entro;

TEST_CASE("bound sequences are normalized monotone and 1-indexed") {
    BoundSequence up = BoundSequence::upper({1.0, 2.0, 0.5});
    CHECK(up.at(1) == 1.0);   // forward min pass flattens the bump
    CHECK(up.at(2) == 1.0);
    CHECK(up.at(3) == 0.5);
    CHECK(up.max_index() == 3);
    CHECK_THROWS_AS(up.at(0), std::out_of_range);
    CHECK_THROWS_AS(up.at(4), std::out_of_range);

    BoundSequence lo = BoundSequence::lower({0.1, 0.5, 0.2});
    CHECK(lo.at(1) == 0.5);   // backward max pass lifts the head
    CHECK(lo.at(2) == 0.5);
    CHECK(lo.at(3) == 0.2);
}

TEST_CASE("sum rule: c_m = min over k+l-1=m of a_k+b_l") {
    BoundSequence a = BoundSequence::upper({1.0, 0.5});
    BoundSequence b = BoundSequence::upper({1.0, 0.25});
    BoundSequence c = bound_sum(a, b);
    CHECK(c.max_index() == 3);
    CHECK(c.at(1) == 2.0);
    CHECK(c.at(2) == 1.25);  // min(1+0.25, 0.5+1)
    CHECK(c.at(3) == 0.75);

    // halving sequences: m=3 gives min(1.25, 1.0, 1.25) = 1
    BoundSequence h = BoundSequence::upper({1.0, 0.5, 0.25});
    BoundSequence s = bound_sum(h, h);
    CHECK(s.at(3) == 1.0);
    CHECK(s.at(5) == 0.5);

    CHECK_THROWS_AS(bound_sum(BoundSequence::lower({1.0}), b), std::invalid_argument);
}

TEST_CASE("composition rule mixes norm and product routes") {
    BoundSequence a = BoundSequence::upper({1.0, 0.5});
    BoundSequence b = BoundSequence::upper({2.0, 0.1});
    // norm_s = 0.3, norm_t = 4
    BoundSequence c = bound_compose(a, b, 0.3, 4.0);
    // m=1: min(0.3*2, 4*1, 1*2) = 0.6
    CHECK(c.at(1) == Catch::Approx(0.6));
    // m=2: min(0.3*0.1, 4*0.5, 1*0.1, 0.5*2) = 0.03
    CHECK(c.at(2) == Catch::Approx(0.03));
    // m=3: only the product route k=l=2: 0.5*0.1 = 0.05, but monotonization
    // clamps it at c_2 = 0.03
    CHECK(c.at(3) == Catch::Approx(0.03));
}

TEST_CASE("family bound shifts the index by log2 of the family size") {
    FamilyBound f1 = family_bound(0.5, 1, 0.0, 3);
    CHECK(f1.index == 4);  // n + 0 + 1
    CHECK(f1.bound == 0.5);
    FamilyBound f8 = family_bound(0.5, 8, 0.125, 3);
    CHECK(f8.index == 7);  // 3 + 3 + 1
    CHECK(f8.bound == 0.625);
    FamilyBound f9 = family_bound(1.0, 9, 0.0, 1);
    CHECK(f9.index == 5);  // floor(log2 9) = 3
    CHECK_THROWS_AS(family_bound(1.0, 0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("block lower bound takes the weakest block") {
    EntropyInterval iv;
    iv.k = 2;
    iv.lower = 0.5;
    iv.upper = 0.7;
    CHECK(block_lower_bound({2.0, 3.0}, iv) == 1.0);
    CHECK_THROWS_AS(block_lower_bound({}, iv), std::invalid_argument);
}

TEST_CASE("tail lower bound delegates to the diagonal-tail rate") {
    SigmaSeq sig = GeometricSeq{1.0, 0.5};
    CHECK(tail_lower_bound(sig, Exponent::inf(), Exponent::finite(1.0), 3) ==
          Catch::Approx(0.25).epsilon(1e-12));
}

static OperatorMatrix random_op(std::uint64_t seed, int n, Exponent p, Exponent q) {
    OperatorMatrix T;
    T.rows = n;
    T.cols = n;
    T.p = p;
    T.q = q;
    T.a.resize(static_cast<size_t>(n) * n);
    SplitMix64 rng(seed);
    for (double& x : T.a) x = 2.0 * rng.next_unit() - 1.0;
    return T;
}

TEST_CASE("sum rule dominates the oracle upper of S+T on a sample pair") {
    Exponent p = Exponent::finite(2.0);
    Exponent q = Exponent::finite(2.0);
    const double mesh = 0.1;
    for (std::uint64_t seed : {31u, 47u}) {
        OperatorMatrix S = random_op(seed, 2, p, q);
        OperatorMatrix T = random_op(seed + 1000, 2, p, q);
        OracleProfile ps = entropy_oracle_profile(S, 4, mesh, {});
        OracleProfile pt = entropy_oracle_profile(T, 4, mesh, {});
        OracleProfile psum = entropy_oracle_profile(S + T, 4, mesh, {});
        BoundSequence c = bound_sum(oracle_upper_sequence(ps), oracle_upper_sequence(pt));
        double slack = 2.0 * (norm_upper_bound(S) + norm_upper_bound(T)) * mesh;
        for (size_t m = 1; m <= 4; ++m)
            CHECK(psum.upper[m - 1] <= c.at(m) + slack + 1e-12);
    }
}
