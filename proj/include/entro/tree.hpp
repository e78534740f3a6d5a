#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entro/rng.hpp"

namespace entro {

// Finite leveled rooted tree. Vertex ids are dense 0..V-1 with parent id <
// child id (so id order is a topological order); the root is id 0.
struct RootedTree {
    std::vector<int> parent;               // parent[0] == -1
    std::vector<int> level;                // level[0] == 0
    std::vector<std::vector<int>> children;
    int max_branching = 0;

    int size() const { return static_cast<int>(parent.size()); }
    int depth() const {
        int d = 0;
        for (int l : level) d = std::max(d, l);
        return d;
    }

    static RootedTree from_parents(const std::vector<int>& parents) {
        RootedTree t;
        const int v = static_cast<int>(parents.size());
        if (v == 0) throw std::invalid_argument("tree needs at least one vertex");
        if (parents[0] != -1) throw std::invalid_argument("vertex 0 must be the root (parent -1)");
        t.parent = parents;
        t.level.assign(v, 0);
        t.children.assign(v, {});
        for (int i = 1; i < v; ++i) {
            int p = parents[i];
            if (p < 0 || p >= i)
                throw std::invalid_argument("parent id must precede child id; vertex " +
                                            std::to_string(i));
            t.level[i] = t.level[p] + 1;
            t.children[p].push_back(i);
        }
        for (const auto& c : t.children)
            t.max_branching = std::max(t.max_branching, static_cast<int>(c.size()));
        return t;
    }

    // vertices by level, ids ascending within a level
    std::vector<std::vector<int>> levels() const {
        std::vector<std::vector<int>> out(depth() + 1);
        for (int v = 0; v < size(); ++v) out[level[v]].push_back(v);
        return out;
    }
};

// card V_l(xi): number of descendants of xi exactly l levels below it
inline long long descendants_at_depth(const RootedTree& t, int xi, int l) {
    if (xi < 0 || xi >= t.size()) throw std::out_of_range("descendants_at_depth: unknown vertex");
    if (l < 0) throw std::invalid_argument("descendants_at_depth: l >= 0");
    if (l == 0) return 1;
    std::vector<int> frontier{xi};
    for (int step = 0; step < l; ++step) {
        std::vector<int> next;
        for (int v : frontier)
            next.insert(next.end(), t.children[v].begin(), t.children[v].end());
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return static_cast<long long>(frontier.size());
}

// The subtree rooted at xi, reindexed to 0..V'-1; orig_ids maps back.
struct Subtree {
    RootedTree tree;
    std::vector<int> orig_ids;
};

inline Subtree subtree_at(const RootedTree& t, int xi) {
    if (xi < 0 || xi >= t.size()) throw std::out_of_range("subtree_at: unknown vertex");
    Subtree s;
    std::vector<int> order{xi};
    // BFS in id order keeps parent-before-child within the new numbering
    for (size_t head = 0; head < order.size(); ++head) {
        int v = order[head];
        for (int c : t.children[v]) order.push_back(c);
    }
    std::vector<int> new_id(t.size(), -1);
    for (size_t i = 0; i < order.size(); ++i) new_id[order[i]] = static_cast<int>(i);
    std::vector<int> parents(order.size());
    parents[0] = -1;
    for (size_t i = 1; i < order.size(); ++i) parents[i] = new_id[t.parent[order[i]]];
    s.tree = RootedTree::from_parents(parents);
    s.orig_ids = std::move(order);
    return s;
}

// Uniform attachment with branching capped at k; deterministic per seed.
inline RootedTree random_tree(std::uint64_t seed, int v_count, int k) {
    if (v_count < 1) throw std::invalid_argument("random_tree: V >= 1");
    if (k < 1) throw std::invalid_argument("random_tree: k >= 1");
    SplitMix64 rng(hash_mix(0x8d2f'b1c4'9a3e'0057ull, seed));
    std::vector<int> parents(v_count, -1);
    std::vector<int> child_count(v_count, 0);
    std::vector<int> eligible{0};
    for (int v = 1; v < v_count; ++v) {
        size_t pick = static_cast<size_t>(rng.next_below(eligible.size()));
        int p = eligible[pick];
        parents[v] = p;
        if (++child_count[p] >= k) {
            eligible[pick] = eligible.back();
            eligible.pop_back();
        }
        eligible.push_back(v);
    }
    return RootedTree::from_parents(parents);
}

// line-oriented text: one vertex per line "id parent level", root parent -1
inline std::string serialize_tree(const RootedTree& t) {
    std::string out;
    for (int v = 0; v < t.size(); ++v) {
        out += std::to_string(v);
        out += ' ';
        out += std::to_string(t.parent[v]);
        out += ' ';
        out += std::to_string(t.level[v]);
        out += '\n';
    }
    return out;
}

inline RootedTree parse_tree(const std::string& text) {
    std::istringstream in(text);
    std::vector<int> parents;
    std::vector<int> levels;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long id, par, lev;
        if (!(ls >> id >> par >> lev)) throw std::invalid_argument("bad tree line: " + line);
        if (id != static_cast<long long>(parents.size()))
            throw std::invalid_argument("tree lines must be ordered by id; saw " + line);
        parents.push_back(static_cast<int>(par));
        levels.push_back(static_cast<int>(lev));
    }
    RootedTree t = RootedTree::from_parents(parents);
    for (int v = 0; v < t.size(); ++v)
        if (t.level[v] != levels[v])
            throw std::invalid_argument("level mismatch at vertex " + std::to_string(v));
    return t;
}

}  // namespace entro
