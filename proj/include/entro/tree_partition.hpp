#pragma once

// Balanced partition of a bounded-branching tree into connected parts with
// additive weight control: every non-singleton part weighs at most
// (k+2) * Phi_total / n, and the number of parts stays proportional to n.
// A dyadic refinement chain keeps partitions for n, 2n, 4n, ... nested.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entro/errors.hpp"
#include "entro/tree.hpp"

namespace entro {

struct TreePartition {
    std::vector<int> part_of;    // vertex id -> part index
    std::vector<int> part_root;  // part index -> minimal (shallowest) vertex
    std::vector<double> part_weight;
    std::vector<int> part_size;

    int parts_count() const { return static_cast<int>(part_root.size()); }
    std::vector<std::vector<int>> members() const {
        std::vector<std::vector<int>> out(part_root.size());
        for (int v = 0; v < static_cast<int>(part_of.size()); ++v)
            out[part_of[v]].push_back(v);
        return out;
    }
};

struct BalancedPartitionReport {
    TreePartition parts;
    long long n = 1;
    int k = 1;        // branching bound of the input tree
    long long parts_count = 0;
    double max_nonsingleton_phi = 0.0;
    double phi_total = 0.0;
    double witness_C = 0.0;  // parts_count / n, the realized constant
};

// Post-order sweep with threshold T = Phi_total / n.  Every vertex merges its
// surviving child components; while the merged weight exceeds T the heaviest
// pending component is cut off as a finished part (ties broken by lowest root
// id).  A vertex whose own weight exceeds T becomes a singleton part.  Open
// components therefore never weigh more than T, so every non-singleton part
// satisfies the (k+2) bound with room to spare.
inline BalancedPartitionReport partition_balanced(const RootedTree& tree,
                                                  const std::vector<double>& phi,
                                                  long long n) {
    int V = tree.size();
    if (static_cast<int>(phi.size()) != V)
        throw std::invalid_argument("partition_balanced: weight vector size mismatch");
    if (n < 1) throw std::invalid_argument("partition_balanced: n must be >= 1");
    double total = 0.0;
    for (double w : phi) {
        if (!(w >= 0.0)) throw std::invalid_argument("partition_balanced: weights must be >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw std::invalid_argument("partition_balanced: total weight must be positive");

    double T = total / static_cast<double>(n);

    TreePartition part;
    part.part_of.assign(static_cast<size_t>(V), -1);

    std::vector<double> comp_weight(static_cast<size_t>(V), 0.0);
    std::vector<std::vector<int>> comp_children(static_cast<size_t>(V));
    std::vector<char> closed(static_cast<size_t>(V), 0);

    auto close_component = [&](int root) {
        int pi = part.parts_count();
        part.part_root.push_back(root);
        part.part_weight.push_back(comp_weight[root]);
        int count = 0;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            part.part_of[v] = pi;
            ++count;
            for (int c : comp_children[v]) stack.push_back(c);
        }
        part.part_size.push_back(count);
        closed[root] = 1;
    };

    for (int v = V - 1; v >= 0; --v) {
        std::vector<std::pair<double, int>> pending;  // (weight, open child comp root)
        double s = phi[v];
        for (int c : tree.children[v])
            if (!closed[c]) {
                pending.emplace_back(comp_weight[c], c);
                s += comp_weight[c];
            }
        std::sort(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        size_t cut = 0;
        while (s > T && cut < pending.size()) {
            close_component(pending[cut].second);
            s -= pending[cut].first;
            ++cut;
        }
        if (s > T) {
            // all children gone and phi[v] alone exceeds the threshold
            comp_weight[v] = phi[v];
            close_component(v);
        } else {
            comp_weight[v] = s;
            for (size_t i = cut; i < pending.size(); ++i)
                comp_children[v].push_back(pending[i].second);
        }
    }
    if (!closed[0]) close_component(0);

    BalancedPartitionReport rep;
    rep.n = n;
    rep.k = tree.max_branching;
    rep.parts_count = part.parts_count();
    rep.phi_total = total;
    for (int pi = 0; pi < part.parts_count(); ++pi)
        if (part.part_size[pi] >= 2)
            rep.max_nonsingleton_phi = std::max(rep.max_nonsingleton_phi, part.part_weight[pi]);
    rep.witness_C = static_cast<double>(rep.parts_count) / static_cast<double>(n);
    rep.parts = std::move(part);
    return rep;
}

struct DyadicChainResult {
    std::vector<BalancedPartitionReport> levels;  // n = 1, 2, 4, ..., 2^depth
    long long max_refinement = 1;  // max parts of S_{2n} inside one part of S_n
};

// Refines each part of S_n independently with its local share n' =
// max(1, ceil(2n * Phi(P) / Phi_total)), so parts of S_{2n} are nested inside
// parts of S_n by construction and the global weight bound still holds: a part
// carried over whole has Phi(P) <= Phi_total / (2n) precisely when n' = 1.
inline DyadicChainResult dyadic_chain(const RootedTree& tree,
                                      const std::vector<double>& phi,
                                      int depth) {
    if (depth < 0) throw std::invalid_argument("dyadic_chain: depth must be >= 0");
    int V = tree.size();
    DyadicChainResult chain;
    chain.levels.push_back(partition_balanced(tree, phi, 1));
    double total = chain.levels[0].phi_total;

    for (int d = 1; d <= depth; ++d) {
        long long n2 = 1LL << d;
        const TreePartition& coarse = chain.levels.back().parts;
        auto groups = coarse.members();

        TreePartition fine;
        fine.part_of.assign(static_cast<size_t>(V), -1);
        long long worst = 1;
        for (int pi = 0; pi < coarse.parts_count(); ++pi) {
            const std::vector<int>& mem = groups[pi];  // ascending ids, parent before child
            double pw = coarse.part_weight[pi];
            long long local_n =
                std::max(1LL, static_cast<long long>(std::ceil(
                                  static_cast<double>(n2) * pw / total - 1e-12)));
            if (mem.size() == 1 || local_n == 1) {
                int out = fine.parts_count();
                fine.part_root.push_back(coarse.part_root[pi]);
                fine.part_weight.push_back(pw);
                fine.part_size.push_back(static_cast<int>(mem.size()));
                for (int v : mem) fine.part_of[v] = out;
                continue;
            }
            // induced subtree on the part (connected, ids already topological)
            std::vector<int> local_id(static_cast<size_t>(V), -1);
            for (size_t i = 0; i < mem.size(); ++i) local_id[mem[i]] = static_cast<int>(i);
            std::vector<int> local_parent(mem.size());
            std::vector<double> local_phi(mem.size());
            for (size_t i = 0; i < mem.size(); ++i) {
                int v = mem[i];
                int gp = tree.parent[v];
                local_parent[i] = (v == coarse.part_root[pi]) ? -1 : local_id[gp];
                local_phi[i] = phi[v];
            }
            auto sub = partition_balanced(RootedTree::from_parents(local_parent), local_phi, local_n);
            worst = std::max(worst, static_cast<long long>(sub.parts_count));
            int base = fine.parts_count();
            for (int spi = 0; spi < sub.parts.parts_count(); ++spi) {
                fine.part_root.push_back(mem[sub.parts.part_root[spi]]);
                fine.part_weight.push_back(sub.parts.part_weight[spi]);
                fine.part_size.push_back(sub.parts.part_size[spi]);
            }
            for (size_t i = 0; i < mem.size(); ++i)
                fine.part_of[mem[i]] = base + sub.parts.part_of[i];
        }
        chain.max_refinement = std::max(chain.max_refinement, worst);

        BalancedPartitionReport rep;
        rep.n = n2;
        rep.k = tree.max_branching;
        rep.parts_count = fine.parts_count();
        rep.phi_total = total;
        for (int pi = 0; pi < fine.parts_count(); ++pi)
            if (fine.part_size[pi] >= 2)
                rep.max_nonsingleton_phi = std::max(rep.max_nonsingleton_phi, fine.part_weight[pi]);
        rep.witness_C = static_cast<double>(rep.parts_count) / static_cast<double>(n2);
        rep.parts = std::move(fine);
        chain.levels.push_back(std::move(rep));
    }
    return chain;
}

struct PartitionCheck {
    bool pass = true;
    std::string violation;  // first failed check, empty when pass
    double max_nonsingleton_ratio = 0.0;  // max part weight / ((k+2) Phi / n)
};

// Re-derives every invariant from the raw part assignment: disjoint cover,
// connectivity (each non-root member's parent is in the same part, exactly one
// root per part), weight consistency, and the (k+2)*Phi/n weight bound.
inline PartitionCheck verify_partition_lemma(const RootedTree& tree,
                                             const std::vector<double>& phi,
                                             const BalancedPartitionReport& rep) {
    PartitionCheck out;
    auto fail = [&](const std::string& why) {
        if (out.pass) { out.pass = false; out.violation = why; }
    };
    int V = tree.size();
    const TreePartition& part = rep.parts;
    if (static_cast<int>(part.part_of.size()) != V) {
        fail("part_of does not cover the vertex set");
        return out;
    }
    int P = part.parts_count();
    if (P != rep.parts_count) fail("parts_count mismatch");
    std::vector<double> weight(static_cast<size_t>(P), 0.0);
    std::vector<int> size(static_cast<size_t>(P), 0), roots(static_cast<size_t>(P), 0);
    for (int v = 0; v < V; ++v) {
        int pi = part.part_of[v];
        if (pi < 0 || pi >= P) {
            fail("vertex " + std::to_string(v) + " has out-of-range part index");
            return out;
        }
        weight[pi] += phi[v];
        ++size[pi];
        bool is_root = v == 0 || part.part_of[tree.parent[v]] != pi;
        if (is_root) ++roots[pi];
    }
    double total = 0.0;
    for (double w : phi) total += w;
    double bound = (tree.max_branching + 2) * total / static_cast<double>(rep.n);
    for (int pi = 0; pi < P; ++pi) {
        if (size[pi] == 0) fail("empty part " + std::to_string(pi));
        // one root == connected and closed under root paths, given tree structure
        if (roots[pi] != 1)
            fail("part " + std::to_string(pi) + " is disconnected (" +
                 std::to_string(roots[pi]) + " roots)");
        if (std::abs(weight[pi] - part.part_weight[pi]) > 1e-9 * (1.0 + std::abs(weight[pi])))
            fail("part " + std::to_string(pi) + " weight mismatch");
        if (size[pi] >= 2) {
            out.max_nonsingleton_ratio = std::max(out.max_nonsingleton_ratio, weight[pi] / bound);
            if (weight[pi] > bound * (1.0 + 1e-9))
                fail("part " + std::to_string(pi) + " exceeds the (k+2)*Phi/n bound");
        }
    }
    return out;
}

struct NestingCheck {
    bool pass = true;
    std::string violation;
    long long max_refinement = 1;
};

// Each part of the finer partition must sit inside exactly one coarser part.
inline NestingCheck verify_nesting(const TreePartition& coarse, const TreePartition& fine) {
    NestingCheck out;
    int P = fine.parts_count();
    std::vector<int> target(static_cast<size_t>(P), -1);
    for (size_t v = 0; v < fine.part_of.size(); ++v) {
        int fp = fine.part_of[v], cp = coarse.part_of[v];
        if (target[fp] == -1) target[fp] = cp;
        else if (target[fp] != cp && out.pass) {
            out.pass = false;
            out.violation = "fine part " + std::to_string(fp) + " straddles coarse parts";
        }
    }
    std::vector<long long> hits(static_cast<size_t>(coarse.parts_count()), 0);
    for (int fp = 0; fp < P; ++fp)
        if (target[fp] >= 0) ++hits[target[fp]];
    for (long long h : hits) out.max_refinement = std::max(out.max_refinement, h);
    return out;
}

inline std::string serialize_partition(const TreePartition& part) {
    std::string out;
    char buf[64];
    for (size_t v = 0; v < part.part_of.size(); ++v) {
        std::snprintf(buf, sizeof buf, "%zu %d\n", v, part.part_of[v]);
        out += buf;
    }
    return out;
}

inline TreePartition parse_partition(const std::string& text, const RootedTree& tree) {
    std::istringstream in(text);
    TreePartition part;
    part.part_of.assign(static_cast<size_t>(tree.size()), -1);
    long long id, pi;
    size_t seen = 0;
    while (in >> id >> pi) {
        if (id < 0 || id >= tree.size() || pi < 0)
            throw std::invalid_argument("parse_partition: bad line for id " + std::to_string(id));
        part.part_of[id] = static_cast<int>(pi);
        ++seen;
    }
    if (seen != part.part_of.size())
        throw std::invalid_argument("parse_partition: wrong number of rows");
    int P = 0;
    for (int v : part.part_of) P = std::max(P, v + 1);
    part.part_root.assign(static_cast<size_t>(P), -1);
    part.part_weight.assign(static_cast<size_t>(P), 0.0);
    part.part_size.assign(static_cast<size_t>(P), 0);
    for (int v = 0; v < tree.size(); ++v) {
        int p = part.part_of[v];
        if (part.part_root[p] == -1) part.part_root[p] = v;
        ++part.part_size[p];
    }
    return part;
}

}  // namespace entro
