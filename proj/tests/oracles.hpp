// Test-only brute-force oracles. These stay independent of the library code
// paths they are used to check.
#ifndef HITSP_TESTS_ORACLES_HPP
#define HITSP_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "hitsp/common.hpp"
#include "hitsp/instance.hpp"
#include "hitsp/maxent.hpp"

namespace oracles {

// All vertex bipartitions with exactly 4 crossing half-edges, canonical side
// excluding vertex 0, via a plain scan over all subsets.
inline std::vector<hitsp::Bitset> brute_force_min_cuts(const hitsp::SupportGraph& g) {
    std::vector<hitsp::Bitset> out;
    int n = g.n;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << (n - 1)); ++m) {
        std::uint64_t mask = m << 1;
        int c = 0;
        for (const auto& he : g.half_edges) c += ((mask >> he.u) ^ (mask >> he.v)) & 1;
        if (c == 4) {
            hitsp::Bitset s(n);
            for (int v = 1; v < n; ++v)
                if ((mask >> v) & 1) s.set(v);
            out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const hitsp::Bitset& a, const hitsp::Bitset& b) {
                  return hitsp::Bitset::lex_less(a, b);
              });
    return out;
}

// Smallest cut size over all bipartitions (exponential; small n only).
inline int brute_force_min_cut_value(const hitsp::SupportGraph& g) {
    int best = std::numeric_limits<int>::max();
    int n = g.n;
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << (n - 1)); ++m) {
        std::uint64_t mask = m << 1;
        int c = 0;
        for (const auto& he : g.half_edges) c += ((mask >> he.u) ^ (mask >> he.v)) & 1;
        best = std::min(best, c);
    }
    return best;
}

// All-pairs shortest paths by Floyd-Warshall over the support graph.
inline std::vector<std::vector<double>> floyd_warshall(const hitsp::SupportGraph& g) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(g.n, std::vector<double>(g.n, inf));
    for (int v = 0; v < g.n; ++v) d[v][v] = 0;
    for (const auto& he : g.half_edges) {
        d[he.u][he.v] = std::min(d[he.u][he.v], he.cost);
        d[he.v][he.u] = std::min(d[he.v][he.u], he.cost);
    }
    for (int k = 0; k < g.n; ++k)
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// Minimum-cost perfect matching over all (k-1)!! pairings.
inline double brute_force_matching(const std::vector<int>& verts,
                                   const std::function<double(int, int)>& cost) {
    if (verts.empty()) return 0.0;
    std::vector<int> v = verts;
    std::function<double(std::vector<int>&)> rec = [&](std::vector<int>& rest) -> double {
        if (rest.empty()) return 0.0;
        int a = rest[0];
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < rest.size(); ++i) {
            int b = rest[i];
            std::vector<int> next;
            for (std::size_t j = 1; j < rest.size(); ++j)
                if (j != i) next.push_back(rest[j]);
            best = std::min(best, cost(a, b) + rec(next));
        }
        return best;
    };
    return rec(v);
}

// All spanning trees of a weighted multigraph by brute force over edge
// subsets of size n-1.
inline std::vector<std::vector<int>> brute_force_spanning_trees(const hitsp::WeightedGraph& g) {
    std::vector<std::vector<int>> trees;
    int m = static_cast<int>(g.edges.size());
    int need = g.n - 1;
    std::vector<int> idx(need);
    std::function<void(int, int)> rec = [&](int pos, int start) {
        if (pos == need) {
            std::vector<int> parent(g.n);
            std::iota(parent.begin(), parent.end(), 0);
            std::function<int(int)> find = [&](int x) {
                while (parent[x] != x) x = parent[x] = parent[parent[x]];
                return x;
            };
            int comps = g.n;
            for (int i = 0; i < need; ++i) {
                int a = find(g.edges[idx[i]].u), b = find(g.edges[idx[i]].v);
                if (a == b) return;
                parent[a] = b;
                --comps;
            }
            if (comps == 1) trees.push_back(std::vector<int>(idx.begin(), idx.end()));
            return;
        }
        for (int e = start; e < m; ++e) {
            idx[pos] = e;
            rec(pos + 1, e + 1);
        }
    };
    rec(0, 0);
    return trees;
}

}  // namespace oracles

#endif
