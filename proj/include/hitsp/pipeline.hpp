#ifndef HITSP_PIPELINE_HPP
#define HITSP_PIPELINE_HPP

#include "hitsp/cuts.hpp"
#include "hitsp/maxent.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Per-node sampling models. Every internal non-root node gets a lambda-uniform
// distribution over its contracted internal graph with marginal 1/2 on every
// half-edge; the root cycle picks one copy per parallel pair uniformly, with
// e+ forced and its twin excluded. Fitting happens once and is reused by all
// trials.
// ---------------------------------------------------------------------------
struct NodeModel {
    int node = -1;
    TreeDistribution dist;        // over the contracted internal graph
    std::vector<int> he_of_edge;  // distribution edge index -> half-edge id
};

struct NodeDistributions {
    std::vector<NodeModel> models;  // in increasing node id order
    double epsilon = 0.0;
};

inline NodeDistributions fit_node_distributions(const CutHierarchy& h,
                                                const FitOptions& opt = {}) {
    NodeDistributions nd;
    nd.epsilon = opt.epsilon;
    for (const auto& node : h.nodes) {
        if (node.kind == NodeKind::Leaf || node.kind == NodeKind::RootCycle) continue;
        auto ig = h.internal_graph(node.id);
        WeightedGraph g;
        g.n = ig.num_children;
        NodeModel model;
        model.node = node.id;
        for (const auto& [a, b, he] : ig.edges) {
            g.edges.push_back({a, b});
            model.he_of_edge.push_back(he);
        }
        HITSP_ASSERT(static_cast<int>(g.edges.size()) == 2 * (g.n - 1),
                     "a contracted critical set has 2(k-1) internal edges");
        std::vector<double> z(g.edges.size(), 0.5);
        model.dist = fit_lambdas(g, z, opt);
        nd.models.push_back(std::move(model));
    }
    return nd;
}

// ---------------------------------------------------------------------------
// 1-trees: a spanning tree plus the forced edge e+.
// ---------------------------------------------------------------------------
struct OneTree {
    Bitset edges;               // over half-edge ids
    std::vector<int> edge_list;
    std::vector<int> odd_vertices;
    double cost = 0.0;

    bool contains(int he) const { return edges.test(he); }
};

inline std::vector<int> odd_set(const SupportGraph& g, const Bitset& tree_edges) {
    std::vector<int> deg(g.n, 0);
    for (const auto& he : g.half_edges)
        if (tree_edges.test(he.id)) {
            ++deg[he.u];
            ++deg[he.v];
        }
    std::vector<int> odd;
    for (int v = 0; v < g.n; ++v)
        if (deg[v] & 1) odd.push_back(v);
    HITSP_ASSERT(odd.size() % 2 == 0, "odd-degree vertex count is even");
    return odd;
}

inline OneTree sample_one_tree(const CutHierarchy& h, const NodeDistributions& nd,
                               RandomStream& rng) {
    const SupportGraph& g = h.graph;
    OneTree t;
    t.edges = Bitset(static_cast<int>(g.half_edges.size()));
    for (const auto& model : nd.models) {
        auto tree = model.dist.sample(rng);
        for (int e : tree) t.edges.set(model.he_of_edge[e]);
    }
    const HierNode& root = h.root();
    for (const auto& rung : root.rungs) {
        int pick;
        if (rung[0] == g.e_plus || rung[1] == g.e_plus) pick = g.e_plus;
        else pick = rung[rng.below(2)];
        t.edges.set(pick);
    }

    for (const auto& he : g.half_edges)
        if (t.edges.test(he.id)) {
            t.edge_list.push_back(he.id);
            t.cost += he.cost;
        }
    HITSP_ASSERT(static_cast<int>(t.edge_list.size()) == g.n, "a 1-tree has n edges");

    // T minus e+ must be a spanning tree.
    {
        std::vector<int> parent(g.n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int comps = g.n;
        for (int e : t.edge_list) {
            if (e == g.e_plus) continue;
            int a = find(g.half_edges[e].u), b = find(g.half_edges[e].v);
            HITSP_ASSERT(a != b, "T minus e+ is acyclic");
            parent[a] = b;
            --comps;
        }
        HITSP_ASSERT(comps == 1, "T minus e+ spans the graph");
    }
    t.odd_vertices = odd_set(g, t.edges);
    return t;
}

// ---------------------------------------------------------------------------
// Exact per-node tree enumerations (fitted probabilities), used by the exact
// analysis paths. The root's "trees" are its 2^(k-1) rung selections.
// ---------------------------------------------------------------------------
struct NodeTrees {
    int node = -1;
    std::vector<std::vector<int>> trees;  // half-edge id lists
    std::vector<double> prob;
    Bitset edge_mask;                     // all internal half-edges of the node
};

inline NodeTrees enumerate_node_trees(const CutHierarchy& h, const NodeDistributions& nd,
                                      int node, double cap = 2e5) {
    const SupportGraph& g = h.graph;
    NodeTrees out;
    out.node = node;
    out.edge_mask = Bitset(static_cast<int>(g.half_edges.size()));
    for (int he : h.nodes[node].internal_edges) out.edge_mask.set(he);
    if (h.nodes[node].kind == NodeKind::RootCycle) {
        const auto& rungs = h.nodes[node].rungs;
        int free_rungs = static_cast<int>(rungs.size()) - 1;
        require(free_rungs <= 40 && (1ll << free_rungs) <= cap,
                "root cycle too large for exact enumeration");
        std::vector<int> free_idx;
        int eplus_rung = -1;
        for (std::size_t i = 0; i < rungs.size(); ++i) {
            if (rungs[i][0] == g.e_plus || rungs[i][1] == g.e_plus)
                eplus_rung = static_cast<int>(i);
            else
                free_idx.push_back(static_cast<int>(i));
        }
        HITSP_ASSERT(eplus_rung >= 0, "e+ lies on a root rung");
        double p = std::pow(0.5, free_rungs);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_rungs); ++mask) {
            std::vector<int> tree{g.e_plus};
            for (int i = 0; i < free_rungs; ++i)
                tree.push_back(rungs[free_idx[i]][(mask >> i) & 1]);
            std::sort(tree.begin(), tree.end());
            out.trees.push_back(std::move(tree));
            out.prob.push_back(p);
        }
        return out;
    }
    for (const auto& model : nd.models)
        if (model.node == node) {
            auto en = enumerate_trees(model.dist, cap);
            for (std::size_t t = 0; t < en.trees.size(); ++t) {
                std::vector<int> tree;
                for (int e : en.trees[t]) tree.push_back(model.he_of_edge[e]);
                std::sort(tree.begin(), tree.end());
                out.trees.push_back(std::move(tree));
                out.prob.push_back(en.prob[t]);
            }
            return out;
        }
    throw StructuralError("no distribution fitted for node " + std::to_string(node));
}

}  // namespace hitsp

#endif  // HITSP_PIPELINE_HPP
