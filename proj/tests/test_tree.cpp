#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "entro/errors.hpp"
#include "entro/hset.hpp"
#include "entro/tree.hpp"

using namespace entro;

TEST_CASE("from_parents builds levels and rejects malformed input") {
    RootedTree chain = RootedTree::from_parents({-1, 0, 1, 2});
    CHECK(chain.size() == 4);
    CHECK(chain.depth() == 3);
    CHECK(chain.level == std::vector<int>{0, 1, 2, 3});
    CHECK(chain.max_branching == 1);

    RootedTree star = RootedTree::from_parents({-1, 0, 0, 0});
    CHECK(star.depth() == 1);
    CHECK(star.max_branching == 3);
    CHECK(star.children[0] == std::vector<int>{1, 2, 3});

    CHECK_THROWS_AS(RootedTree::from_parents({0}), std::invalid_argument);       // root must be -1
    CHECK_THROWS_AS(RootedTree::from_parents({-1, 2, 1}), std::invalid_argument); // parent after child
    CHECK_THROWS_AS(RootedTree::from_parents({-1, -1}), std::invalid_argument);  // two roots
    CHECK_THROWS_AS(RootedTree::from_parents({}), std::invalid_argument);
}

TEST_CASE("levels() groups ids by depth") {
    RootedTree t = RootedTree::from_parents({-1, 0, 0, 1, 1, 2});
    auto lv = t.levels();
    REQUIRE(lv.size() == 3);
    CHECK(lv[0] == std::vector<int>{0});
    CHECK(lv[1] == std::vector<int>{1, 2});
    CHECK(lv[2] == std::vector<int>{3, 4, 5});
}

TEST_CASE("descendant counts in a complete binary tree") {
    // 3 levels: 0; 1,2; 3,4,5,6
    RootedTree t = RootedTree::from_parents({-1, 0, 0, 1, 1, 2, 2});
    CHECK(descendants_at_depth(t, 0, 0) == 1);
    CHECK(descendants_at_depth(t, 0, 1) == 2);
    CHECK(descendants_at_depth(t, 0, 2) == 4);
    CHECK(descendants_at_depth(t, 1, 1) == 2);
    CHECK(descendants_at_depth(t, 3, 1) == 0);
}

TEST_CASE("subtree extraction preserves structure") {
    RootedTree t = RootedTree::from_parents({-1, 0, 0, 1, 1, 2, 2});
    Subtree s = subtree_at(t, 1);
    CHECK(s.tree.size() == 3);
    CHECK(s.tree.parent == std::vector<int>{-1, 0, 0});
    CHECK(s.orig_ids == std::vector<int>{1, 3, 4});
    Subtree whole = subtree_at(t, 0);
    CHECK(whole.tree.size() == 7);
}

TEST_CASE("random trees respect the branching cap and are deterministic") {
    RootedTree one = random_tree(5, 1, 3);
    CHECK(one.size() == 1);

    RootedTree chain = random_tree(9, 40, 1);
    CHECK(chain.max_branching == 1);
    CHECK(chain.depth() == 39);

    RootedTree a = random_tree(42, 1000, 3);
    RootedTree b = random_tree(42, 1000, 3);
    CHECK(a.parent == b.parent);
    CHECK(a.max_branching <= 3);
    CHECK(a.size() == 1000);
    RootedTree c = random_tree(43, 1000, 3);
    CHECK(a.parent != c.parent);
}

TEST_CASE("tree serialization round trips with the id/parent/level layout") {
    RootedTree t = RootedTree::from_parents({-1, 0, 1});
    CHECK(serialize_tree(t) == "0 -1 0\n1 0 1\n2 1 2\n");
    RootedTree back = parse_tree(serialize_tree(t));
    CHECK(back.parent == t.parent);

    RootedTree r = random_tree(77, 200, 4);
    CHECK(parse_tree(serialize_tree(r)).parent == r.parent);

    CHECK_THROWS_AS(parse_tree("0 -1 1\n"), std::invalid_argument);   // level must match depth
    CHECK_THROWS_AS(parse_tree("1 -1 0\n"), std::invalid_argument);   // ids must start at 0
    CHECK_THROWS_AS(parse_tree(""), std::invalid_argument);
}

TEST_CASE("branch profiles evaluate h(t) = t^theta |log2 t|^gamma tau") {
    HSetProfile bin = HSetProfile::binary();
    CHECK(h_eval(bin, 0.125) == Catch::Approx(0.125));
    CHECK(h_eval(bin, 1.0) == 1.0);

    // theta=1, gamma=1, tau = (log2(y+2))^0 = 1, floor at 1/4:
    // h(1/4) = (1/4) * |log2 1/4| = 1/2
    HSetProfile mixed = HSetProfile::make(1.0, 1.0, TauSpec::log_pow(0.0), 1, 2.0, 0.25);
    CHECK(h_eval(mixed, 0.25) == Catch::Approx(0.5));
    CHECK(h_eval(mixed, 0.5) == Catch::Approx(0.5));  // flat above the floor

    HSetProfile lg = HSetProfile::logarithmic();
    CHECK(h_eval(lg, std::exp2(-4)) == Catch::Approx(0.25));  // |log2 t|^{-1}

    CHECK_THROWS_AS(h_eval(bin, 0.0), std::domain_error);
    CHECK_THROWS_AS(h_eval(bin, 1.5), std::domain_error);
    CHECK_THROWS_AS(h_eval(bin, -0.25), std::domain_error);
}

TEST_CASE("profile validation rejects non-monotone shapes") {
    // theta=0 with positive gamma makes h decrease in t: not a branch profile
    CHECK_THROWS_AS(HSetProfile::make(0.0, 1.0, TauSpec::constant(), 1, 2.0, 0.25),
                    InfeasibleProfile);
    CHECK_THROWS_AS(HSetProfile::make(-0.5, 0.0, TauSpec::constant(), 1, 1.0, 1.0),
                    InfeasibleProfile);
    CHECK_THROWS_AS(HSetProfile::make(1.0, 0.0, TauSpec::constant(), 0, 1.0, 1.0),
                    InfeasibleProfile);
}

TEST_CASE("binary profile generates the complete binary tree") {
    HSetTreeResult r = generate_hset_tree(HSetProfile::binary(), 4);
    CHECK(r.tree.size() == 31);
    CHECK(r.level_population == std::vector<long long>{1, 2, 4, 8, 16});
    CHECK(r.deficient_levels.empty());
    HSetConditionReport rep = verify_hset_condition(r.tree, HSetProfile::binary());
    CHECK(rep.pass);
    CHECK(rep.q_min == Catch::Approx(1.0));
    CHECK(rep.q_max == Catch::Approx(1.0));
}

TEST_CASE("quaternary profile quadruples level populations") {
    HSetTreeResult r = generate_hset_tree(HSetProfile::quaternary(), 3);
    CHECK(r.level_population == std::vector<long long>{1, 4, 16, 64});
    CHECK(verify_hset_condition(r.tree, HSetProfile::quaternary()).pass);
}

TEST_CASE("logarithmic profile grows like l/2 and verifies within band 2") {
    HSetTreeResult r = generate_hset_tree(HSetProfile::logarithmic(), 10);
    REQUIRE(r.level_population.size() == 11);
    CHECK(r.level_population[10] == 5);
    // populations are nondecreasing
    for (size_t i = 1; i < r.level_population.size(); ++i)
        CHECK(r.level_population[i] >= r.level_population[i - 1]);
    HSetConditionReport rep = verify_hset_condition(r.tree, HSetProfile::logarithmic());
    CHECK(rep.pass);
    CHECK(rep.q_min >= 0.5);
    CHECK(rep.q_max <= 2.0);
}

TEST_CASE("verification fails a tree that does not match the profile") {
    // a bare chain pretending to be binary: card V_l = 1 instead of 2^l
    RootedTree chain = RootedTree::from_parents({-1, 0, 1, 2, 3, 4});
    HSetConditionReport rep = verify_hset_condition(chain, HSetProfile::binary());
    CHECK_FALSE(rep.pass);
    CHECK(rep.q_min < 0.5);
}

TEST_CASE("generator guards depth and population blowup") {
    CHECK_THROWS_AS(generate_hset_tree(HSetProfile::binary(), 31), InfeasibleProfile);
    CHECK_THROWS_AS(generate_hset_tree(HSetProfile::binary(), 28), InfeasibleProfile);  // 2^28 > guard
    CHECK_THROWS_AS(generate_hset_tree(HSetProfile::make(1.0, 0.0, TauSpec::constant(), 40, 1.0, 1.0),
                                       25),
                    InfeasibleProfile);  // m* * depth beyond the double-safe range
}

TEST_CASE("level offset starts the profile deeper in the tree") {
    // binary profile from offset 2: ratios h(2^{-2})/h(2^{-(2+l)}) = 2^l still
    HSetTreeResult r = generate_hset_tree(HSetProfile::binary(), 3, 2);
    CHECK(r.level_population == std::vector<long long>{1, 2, 4, 8});
    CHECK(verify_hset_condition(r.tree, HSetProfile::binary(), 2000000, 2).pass);
}
