#ifndef HITSP_MAXENT_HPP
#define HITSP_MAXENT_HPP

#include <Eigen/Dense>

#include "hitsp/common.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Weighted multigraphs for spanning-tree distributions. Parallel copies are
// first-class edges: each carries its own weight and its own marginal.
// ---------------------------------------------------------------------------
struct WeightedGraph {
    struct Edge {
        int u = 0, v = 0;
    };
    int n = 0;
    std::vector<Edge> edges;

    int other(int e, int at) const { return edges[e].u == at ? edges[e].v : edges[e].u; }
};

namespace detail {

inline Eigen::MatrixXd reduced_laplacian(const WeightedGraph& g, const std::vector<double>& lambda) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n, g.n);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int u = g.edges[e].u, v = g.edges[e].v;
        L(u, u) += lambda[e];
        L(v, v) += lambda[e];
        L(u, v) -= lambda[e];
        L(v, u) -= lambda[e];
    }
    return L.block(1, 1, g.n - 1, g.n - 1);
}

}  // namespace detail

// Weighted spanning-tree count (matrix-tree); with unit weights this is the
// plain number of spanning trees.
inline double weighted_tree_count(const WeightedGraph& g, const std::vector<double>& lambda) {
    if (g.n == 1) return 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(detail::reduced_laplacian(g, lambda));
    if (!lu.isInvertible()) return 0.0;
    return lu.determinant();
}

inline double spanning_tree_count(const WeightedGraph& g) {
    return weighted_tree_count(g, std::vector<double>(g.edges.size(), 1.0));
}

// p_e = Pr[e in T] for Pr[T] ~ prod lambda_e, via lambda_e times the
// effective resistance across e in the lambda-weighted Laplacian.
inline std::vector<double> exact_marginals(const WeightedGraph& g,
                                           const std::vector<double>& lambda) {
    require(g.n >= 2, "marginals need at least two vertices");
    Eigen::MatrixXd Lr = detail::reduced_laplacian(g, lambda);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(Lr);
    if (!lu.isInvertible())
        throw StructuralError("graph is disconnected (singular reduced Laplacian)");
    double rc = lu.rcond();
    if (rc < 1e-13)
        throw StructuralError("reduced Laplacian is near-singular, rcond=" + format_double(rc));
    Eigen::MatrixXd M = lu.inverse();  // indexed by vertices 1..n-1
    auto entry = [&](int a, int b) {
        if (a == 0 || b == 0) return 0.0;
        return M(a - 1, b - 1);
    };
    std::vector<double> p(g.edges.size());
    double sum = 0;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        int u = g.edges[e].u, v = g.edges[e].v;
        double reff = entry(u, u) + entry(v, v) - 2 * entry(u, v);
        p[e] = lambda[e] * reff;
        sum += p[e];
    }
    HITSP_ASSERT(std::abs(sum - (g.n - 1)) <= 1e-9 * std::max(1.0, double(g.n)),
                 "marginals sum to |V|-1");
    return p;
}

// Membership in the spanning-tree polytope, checked exhaustively over vertex
// subsets; intended for graphs with at most ~12 vertices (tests, guards).
inline bool in_spanning_tree_polytope(const WeightedGraph& g, const std::vector<double>& z,
                                      double tol = 1e-9) {
    double total = 0;
    for (double ze : z) total += ze;
    if (std::abs(total - (g.n - 1)) > tol) return false;
    for (double ze : z)
        if (ze < -tol) return false;
    require(g.n <= 20, "exhaustive polytope check is limited to small graphs");
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << g.n); ++mask) {
        int size = std::popcount(mask);
        if (size < 2) continue;
        double inside = 0;
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            if (((mask >> g.edges[e].u) & 1) && ((mask >> g.edges[e].v) & 1)) inside += z[e];
        if (inside > size - 1 + tol) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// lambda-uniform distribution fitted to target marginals.
// ---------------------------------------------------------------------------
struct TreeDistribution {
    WeightedGraph graph;
    std::vector<double> target;     // z_e
    std::vector<double> lambda;
    std::vector<double> marginals;  // p_e of the fitted lambda
    double fitted_epsilon = 0.0;    // max p_e/z_e - 1 (the guaranteed side)
    double fitted_epsilon_low = 0.0;  // max z_e/p_e - 1 (reported, not guaranteed)
    int iterations = 0;

    // Exact sample by weighted loop-erased random walk (Wilson).
    std::vector<int> sample(RandomStream& rng) const {
        const int n = graph.n;
        if (n == 1) return {};
        std::vector<std::vector<int>> inc(n);
        for (std::size_t e = 0; e < graph.edges.size(); ++e) {
            inc[graph.edges[e].u].push_back(static_cast<int>(e));
            inc[graph.edges[e].v].push_back(static_cast<int>(e));
        }
        std::vector<std::vector<double>> w(n);
        std::vector<double> wtot(n, 0.0);
        for (int v = 0; v < n; ++v) {
            for (int e : inc[v]) {
                w[v].push_back(lambda[e]);
                wtot[v] += lambda[e];
            }
        }
        std::vector<bool> in_tree(n, false);
        std::vector<int> next_edge(n, -1);
        in_tree[0] = true;
        for (int s = 1; s < n; ++s) {
            int u = s;
            while (!in_tree[u]) {
                int pick = inc[u][rng.weighted_pick(w[u], wtot[u])];
                next_edge[u] = pick;
                u = graph.other(pick, u);
            }
            u = s;
            while (!in_tree[u]) {
                in_tree[u] = true;
                u = graph.other(next_edge[u], u);
            }
        }
        std::vector<int> tree;
        tree.reserve(n - 1);
        for (int v = 1; v < n; ++v) tree.push_back(next_edge[v]);
        std::sort(tree.begin(), tree.end());
        return tree;
    }
};

struct FitOptions {
    double epsilon = 1e-3;
    int max_iterations = 50000;
};

// Multiplicative fixed-point fitting lambda_e <- lambda_e (z_e/p_e)^eta with
// geometric damping (eta = 1/2) once the error stops decreasing. Stops when
// max_e p_e/z_e <= 1 + epsilon.
inline TreeDistribution fit_lambdas(const WeightedGraph& g, const std::vector<double>& z,
                                    const FitOptions& opt = {}) {
    require(z.size() == g.edges.size(), "one target marginal per edge");
    require(opt.epsilon > 0, "epsilon must be positive");
    double total = 0;
    for (double ze : z) {
        require(ze > 0, "target marginals must be strictly positive");
        require(ze <= 1 + 1e-12, "target marginals cannot exceed 1");
        total += ze;
    }
    require(std::abs(total - (g.n - 1)) <= 1e-6,
            "target marginals must sum to |V|-1 (spanning-tree polytope)");

    TreeDistribution dist;
    dist.graph = g;
    dist.target = z;
    dist.lambda.assign(g.edges.size(), 1.0);

    double eta = 1.0;
    double prev_err = std::numeric_limits<double>::infinity();
    for (int it = 0;; ++it) {
        dist.marginals = exact_marginals(g, dist.lambda);
        double up = 0, down = 0;
        for (std::size_t e = 0; e < z.size(); ++e) {
            up = std::max(up, dist.marginals[e] / z[e] - 1.0);
            down = std::max(down, z[e] / dist.marginals[e] - 1.0);
        }
        dist.fitted_epsilon = up;
        dist.fitted_epsilon_low = down;
        dist.iterations = it;
        if (up <= opt.epsilon) break;
        if (it >= opt.max_iterations)
            throw StructuralError(
                "lambda fitting did not converge in " + std::to_string(it) +
                " iterations (residual " + format_double(up) +
                "); the marginals may lie on the polytope boundary - try a larger epsilon");
        double err = std::max(up, down);
        if (err >= prev_err) eta = 0.5;  // oscillation near the boundary
        prev_err = err;
        double log_sum = 0;
        for (std::size_t e = 0; e < z.size(); ++e) {
            dist.lambda[e] *= std::pow(z[e] / dist.marginals[e], eta);
            log_sum += std::log(dist.lambda[e]);
        }
        double scale = std::exp(-log_sum / static_cast<double>(z.size()));
        for (auto& l : dist.lambda) l *= scale;
    }
    return dist;
}

// A distribution that is already lambda-uniform with the given weights (no
// fitting); the targets are its own exact marginals.
inline TreeDistribution lambda_uniform(const WeightedGraph& g, std::vector<double> lambda) {
    TreeDistribution dist;
    dist.graph = g;
    dist.lambda = std::move(lambda);
    dist.marginals = exact_marginals(g, dist.lambda);
    dist.target = dist.marginals;
    return dist;
}

// ---------------------------------------------------------------------------
// Exact enumeration oracle: all spanning trees with their probabilities.
// Guarded by the matrix-tree count.
// ---------------------------------------------------------------------------
struct EnumeratedTrees {
    std::vector<std::vector<int>> trees;  // sorted edge index lists
    std::vector<double> prob;
};

inline EnumeratedTrees enumerate_trees(const WeightedGraph& g, const std::vector<double>& lambda,
                                       double cap = 2e5) {
    double count = weighted_tree_count(g, std::vector<double>(g.edges.size(), 1.0));
    require(count <= cap + 0.5, "spanning tree count " + format_double(count) +
                                    " exceeds enumeration cap " + format_double(cap));
    EnumeratedTrees out;
    const int n = g.n;
    const int m = static_cast<int>(g.edges.size());
    if (n == 1) {
        out.trees.push_back({});
        out.prob.push_back(1.0);
        return out;
    }
    std::vector<int> chosen;
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);

    // Recursive deletion/contraction over the edge list; the exclusion branch
    // is pruned when the remaining edges can no longer connect the graph.
    std::function<void(int, std::vector<int>, int)> rec = [&](int idx, std::vector<int> cmp,
                                                              int comps) {
        if (comps == 1) {
            out.trees.push_back(chosen);
            double w = 1.0;
            for (int e : chosen) w *= lambda[e];
            out.prob.push_back(w);
            return;
        }
        if (idx == m) return;
        int u = cmp[g.edges[idx].u], v = cmp[g.edges[idx].v];
        if (u != v) {
            std::vector<int> merged = cmp;
            for (int& c : merged)
                if (c == v) c = u;
            chosen.push_back(idx);
            rec(idx + 1, std::move(merged), comps - 1);
            chosen.pop_back();
        }
        // exclude idx; prune if the rest cannot connect
        std::vector<int> reach = cmp;
        std::function<int(std::vector<int>&, int)> find = [](std::vector<int>& p, int x) {
            while (p[x] != x) x = p[x] = p[p[x]];
            return x;
        };
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        int cc = comps;
        for (int j = idx + 1; j < m && cc > 1; ++j) {
            int a = find(parent, cmp[g.edges[j].u]), b = find(parent, cmp[g.edges[j].v]);
            if (a != b) {
                parent[a] = b;
                --cc;
            }
        }
        if (cc == 1) rec(idx + 1, std::move(cmp), comps);
    };
    rec(0, comp, n);

    double z = 0;
    for (double w : out.prob) z += w;
    for (double& w : out.prob) w /= z;
    HITSP_ASSERT(std::llround(count) == static_cast<long long>(out.trees.size()),
                 "enumerated tree count matches the matrix-tree determinant");
    double s = 0;
    for (double w : out.prob) s += w;
    HITSP_ASSERT(std::abs(s - 1.0) <= 1e-9, "tree probabilities sum to 1");
    return out;
}

inline EnumeratedTrees enumerate_trees(const TreeDistribution& dist, double cap = 2e5) {
    return enumerate_trees(dist.graph, dist.lambda, cap);
}

// ---------------------------------------------------------------------------
// Rank sequence of an edge set: distribution of |A (intersect) T|.
// ---------------------------------------------------------------------------
inline std::vector<double> rank_sequence_exact(const TreeDistribution& dist,
                                               const std::vector<int>& A, double cap = 2e5) {
    auto en = enumerate_trees(dist, cap);
    std::vector<char> in_a(dist.graph.edges.size(), 0);
    for (int e : A) in_a[e] = 1;
    std::vector<double> pmf(A.size() + 1, 0.0);
    for (std::size_t t = 0; t < en.trees.size(); ++t) {
        int c = 0;
        for (int e : en.trees[t]) c += in_a[e];
        pmf[c] += en.prob[t];
    }
    return pmf;
}

inline std::vector<double> rank_sequence_monte_carlo(const TreeDistribution& dist,
                                                     const std::vector<int>& A, int trials,
                                                     RandomStream& rng) {
    std::vector<char> in_a(dist.graph.edges.size(), 0);
    for (int e : A) in_a[e] = 1;
    std::vector<double> pmf(A.size() + 1, 0.0);
    for (int t = 0; t < trials; ++t) {
        auto tree = dist.sample(rng);
        int c = 0;
        for (int e : tree) c += in_a[e];
        pmf[c] += 1.0;
    }
    for (double& x : pmf) x /= trials;
    return pmf;
}

}  // namespace hitsp

#endif  // HITSP_MAXENT_HPP
