#ifndef HITSP_GENERATORS_HPP
#define HITSP_GENERATORS_HPP

#include <cmath>
#include <string>

#include "hitsp/instance.hpp"

namespace hitsp {

enum class CostModel { Unit, Euclidean };

namespace detail {

// Assigns costs: unit, or Euclidean over random points in the unit square
// (rounded to 1e-9) with the full matrix attached.
inline void assign_costs(HalfIntegralSolution& sol, CostModel model, std::uint64_t seed) {
    if (model == CostModel::Unit) {
        for (auto& e : sol.edges) e.cost = 1.0;
        return;
    }
    RandomStream rng(seed, 0, "euclid-points");
    std::vector<std::pair<double, double>> pts(sol.n);
    for (auto& p : pts) p = {rng.uniform01(), rng.uniform01()};
    auto round9 = [](double v) { return std::round(v * 1e9) / 1e9; };
    std::vector<std::vector<double>> m(sol.n, std::vector<double>(sol.n, 0.0));
    for (int i = 0; i < sol.n; ++i)
        for (int j = 0; j < sol.n; ++j) {
            double dx = pts[i].first - pts[j].first, dy = pts[i].second - pts[j].second;
            m[i][j] = i == j ? 0.0 : round9(std::sqrt(dx * dx + dy * dy));
        }
    // Rounding can nick the triangle inequality by a hair; re-close it.
    for (int k = 0; k < sol.n; ++k)
        for (int i = 0; i < sol.n; ++i)
            for (int j = 0; j < sol.n; ++j)
                if (m[i][k] + m[k][j] < m[i][j]) m[i][j] = m[i][k] + m[k][j];
    for (auto& e : sol.edges) e.cost = m[e.u][e.v];
    sol.matrix = std::move(m);
}

// A K4 block occupying vertex ids [base, base+4). Each vertex keeps one
// free stub; block-internal edges all get x = 1/2.
inline void add_k4_block(HalfIntegralSolution& sol, int base) {
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            sol.edges.push_back({base + i, base + j, 0.5, 0.0});
}

inline void add_half_edge(HalfIntegralSolution& sol, int u, int v) {
    sol.edges.push_back({u, v, 0.5, 0.0});
}

}  // namespace detail

// Cycle on n vertices with x = 1 on every edge. The support graph doubles
// each edge, the root of the cut hierarchy is the whole cycle, and the tour
// always reproduces the cycle exactly.
inline HalfIntegralSolution gen_doubled_cycle(int n, CostModel model = CostModel::Unit,
                                              std::uint64_t seed = 0) {
    require(n >= 3, "doubled-cycle needs n >= 3");
    HalfIntegralSolution sol;
    sol.n = n;
    for (int i = 0; i < n; ++i) sol.edges.push_back({i, (i + 1) % n, 1.0, 0.0});
    detail::assign_costs(sol, model, seed);
    return sol;
}

// Ring of K4 blocks, consecutive blocks joined by two stub edges. Block i
// uses vertices [4i, 4i+4); vertices 4i, 4i+1 receive the stubs of the
// previous block's vertices 4(i-1)+2, 4(i-1)+3.
inline HalfIntegralSolution gen_k4_chain(int blocks, CostModel model = CostModel::Unit,
                                         std::uint64_t seed = 0) {
    require(blocks >= 2, "k4-chain needs at least 2 blocks");
    HalfIntegralSolution sol;
    sol.n = 4 * blocks;
    for (int b = 0; b < blocks; ++b) detail::add_k4_block(sol, 4 * b);
    for (int b = 0; b < blocks; ++b) {
        int nb = (b + 1) % blocks;
        detail::add_half_edge(sol, 4 * b + 2, 4 * nb + 0);
        detail::add_half_edge(sol, 4 * b + 3, 4 * nb + 1);
    }
    detail::assign_costs(sol, model, seed);
    return sol;
}

// Nested cycle-cut gadget. A chain of K4 blocks [c1, c2, d_1, ..., d_{depth-1}]
// is wired so that {c1,c2} is contracted first, then each d_k joins the
// previous contraction, producing a tower of cycle cuts; guard blocks P and Q
// absorb one boundary edge from each partner pair at every level, and a final
// block closes the ring. depth >= 2 gives a cycle cut whose parent is again
// a cycle cut.
inline HalfIntegralSolution gen_nested_cycle(int depth, CostModel model = CostModel::Unit,
                                             std::uint64_t seed = 0) {
    require(depth >= 2, "nested-cycle needs depth >= 2");
    int blocks = depth + 4;  // B1, c1, c2, d_1..d_{depth-1}, P, Q
    HalfIntegralSolution sol;
    sol.n = 4 * blocks;
    for (int b = 0; b < blocks; ++b) detail::add_k4_block(sol, 4 * b);

    const int B1 = 0, c1 = 4, c2 = 8;
    const int P = 4 * (blocks - 2), Q = 4 * (blocks - 1);

    // inner chain rung c1--c2 (vertices 6,7 <-> 10,11)
    detail::add_half_edge(sol, c1 + 2, c2 + 2);
    detail::add_half_edge(sol, c1 + 3, c2 + 3);

    // Partner-pair bookkeeping: pairA = stubs leaving the contracted child,
    // pairB = stubs of the most recent d block. Each new level takes one
    // stub from each pair (transverse attachment), which is what keeps the
    // chain uncrossed by segment cuts.
    std::pair<int, int> pairA = {c1 + 0, c1 + 1};
    std::pair<int, int> pairB = {c2 + 0, c2 + 1};
    for (int k = 1; k <= depth - 1; ++k) {
        int dk = 8 + 4 * k;
        detail::add_half_edge(sol, pairA.second, dk + 0);
        detail::add_half_edge(sol, pairB.second, dk + 1);
        pairA = {pairA.first, pairB.first};
        pairB = {dk + 2, dk + 3};
    }
    detail::add_half_edge(sol, pairA.first, P + 0);
    detail::add_half_edge(sol, pairB.first, P + 1);
    detail::add_half_edge(sol, pairA.second, Q + 0);
    detail::add_half_edge(sol, pairB.second, Q + 1);

    detail::add_half_edge(sol, P + 2, B1 + 0);
    detail::add_half_edge(sol, P + 3, B1 + 1);
    detail::add_half_edge(sol, Q + 2, B1 + 2);
    detail::add_half_edge(sol, Q + 3, B1 + 3);

    detail::assign_costs(sol, model, seed);
    return sol;
}

inline HalfIntegralSolution generate_instance(const std::string& kind, int size,
                                              CostModel model, std::uint64_t seed) {
    if (kind == "doubled-cycle") return gen_doubled_cycle(size, model, seed);
    if (kind == "k4-chain") return gen_k4_chain(size, model, seed);
    if (kind == "nested-cycle") return gen_nested_cycle(size, model, seed);
    throw StructuralError("unknown instance kind: " + kind +
                          " (expected doubled-cycle | k4-chain | nested-cycle)");
}

}  // namespace hitsp

#endif  // HITSP_GENERATORS_HPP
