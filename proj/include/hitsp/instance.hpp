#ifndef HITSP_INSTANCE_HPP
#define HITSP_INSTANCE_HPP

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <utility>

#include <json.hpp>

#include "hitsp/common.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Half-integral Held-Karp solutions.
//
// Edges carry x in {1/2, 1}; x = 0 edges are omitted. An x = 1 edge stands
// for two parallel support edges. Duplicate (u,v) entries are rejected at
// parse time for exactly that reason.
// ---------------------------------------------------------------------------
struct SolutionEdge {
    int u = 0, v = 0;
    double x = 0.0;
    double cost = 0.0;
};

struct SplitRecord {
    int original_vertex = 0;
    int v1 = 0, v2 = 0;      // v1 keeps the original id, v2 is the new vertex
    int pairing = 0;         // which of the three pairings was accepted
};

struct HalfIntegralSolution {
    int n = 0;
    std::vector<SolutionEdge> edges;
    std::optional<std::vector<std::vector<double>>> matrix;
    std::optional<SplitRecord> split;

    double cost_of_x() const {
        double c = 0;
        for (const auto& e : edges) c += e.x * e.cost;
        return c;
    }
};

// ---------------------------------------------------------------------------
// JSON instance format:
//   { "n": int,
//     "edges": [{"u":int,"v":int,"x":0.5|1.0,"cost":number}, ...],
//     "matrix": [[number]]            (optional) }
// ---------------------------------------------------------------------------
inline HalfIntegralSolution solution_from_json(const nlohmann::json& j) {
    HalfIntegralSolution sol;
    try {
        sol.n = j.at("n").get<int>();
        if (sol.n <= 0) throw ParseError("n must be positive");
        std::set<std::pair<int, int>> seen;
        for (const auto& je : j.at("edges")) {
            SolutionEdge e;
            e.u = je.at("u").get<int>();
            e.v = je.at("v").get<int>();
            e.x = je.at("x").get<double>();
            e.cost = je.at("cost").get<double>();
            if (e.u < 0 || e.u >= sol.n || e.v < 0 || e.v >= sol.n)
                throw ParseError("edge endpoint out of range");
            if (e.u == e.v) throw ParseError("self-loop edge");
            auto key = std::minmax(e.u, e.v);
            if (!seen.insert(key).second)
                throw ParseError("duplicate edge (" + std::to_string(e.u) + "," +
                                 std::to_string(e.v) + "); x=1 encodes parallelism");
            sol.edges.push_back(e);
        }
        if (j.contains("matrix") && !j.at("matrix").is_null()) {
            auto m = j.at("matrix").get<std::vector<std::vector<double>>>();
            if (static_cast<int>(m.size()) != sol.n)
                throw ParseError("matrix must be n x n");
            for (const auto& row : m)
                if (static_cast<int>(row.size()) != sol.n)
                    throw ParseError("matrix must be n x n");
            sol.matrix = std::move(m);
        }
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed instance: ") + ex.what());
    }
    return sol;
}

inline HalfIntegralSolution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError(std::string("malformed JSON: ") + ex.what());
    }
    return solution_from_json(j);
}

inline nlohmann::json solution_to_json(const HalfIntegralSolution& sol) {
    nlohmann::json j;
    j["n"] = sol.n;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : sol.edges)
        j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"x", e.x}, {"cost", e.cost}});
    if (sol.matrix) j["matrix"] = *sol.matrix;
    return j;
}

// ---------------------------------------------------------------------------
// Support graph: the 4-regular multigraph of nonzero edges, with every x = 1
// edge replaced by two parallel copies of equal cost.
// ---------------------------------------------------------------------------
struct HalfEdge {
    int id = 0;
    int u = 0, v = 0;
    double cost = 0.0;
    int origin_edge = -1;  // index into HalfIntegralSolution::edges
};

struct SupportGraph {
    int n = 0;
    std::vector<HalfEdge> half_edges;
    int e_plus = -1;  // forced copy of the designated x=1 edge
    std::vector<std::vector<int>> incident;  // vertex -> half-edge ids

    int other_end(int he, int at) const {
        const auto& e = half_edges[he];
        return e.u == at ? e.v : e.u;
    }
    double total_half_edge_cost() const {
        double c = 0;
        for (const auto& e : half_edges) c += e.cost;
        return c;
    }
};

// Global edge connectivity of an unweighted multigraph (Stoer-Wagner).
// Infinity is returned as a large sentinel for disconnected graphs handled
// by the caller.
inline int global_min_cut_value(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n <= 1) return std::numeric_limits<int>::max();
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n, 0));
    for (auto [u, v] : edges) {
        w[u][v] += 1;
        w[v][u] += 1;
    }
    std::vector<int> active(n);
    for (int i = 0; i < n; ++i) active[i] = i;
    long long best = std::numeric_limits<long long>::max();
    int m = n;
    std::vector<long long> key(n);
    std::vector<bool> in_a(n);
    while (m > 1) {
        // One minimum-cut-phase: maximum adjacency order over active vertices.
        for (int i = 0; i < m; ++i) {
            key[i] = 0;
            in_a[i] = false;
        }
        int prev = -1, last = -1;
        for (int it = 0; it < m; ++it) {
            int sel = -1;
            for (int i = 0; i < m; ++i)
                if (!in_a[i] && (sel == -1 || key[i] > key[sel])) sel = i;
            in_a[sel] = true;
            prev = last;
            last = sel;
            for (int i = 0; i < m; ++i)
                if (!in_a[i]) key[i] += w[active[last]][active[i]];
        }
        best = std::min(best, key[last]);
        // merge last into prev
        int a = active[prev], b = active[last];
        for (int i = 0; i < m; ++i) {
            int c = active[i];
            if (c == a || c == b) continue;
            w[a][c] += w[b][c];
            w[c][a] = w[a][c];
        }
        active.erase(active.begin() + last);
        --m;
    }
    if (best > std::numeric_limits<int>::max()) best = std::numeric_limits<int>::max();
    return static_cast<int>(best);
}

inline std::vector<std::pair<int, int>> support_edge_pairs(const HalfIntegralSolution& sol) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& e : sol.edges) {
        pairs.emplace_back(e.u, e.v);
        if (e.x == 1.0) pairs.emplace_back(e.u, e.v);
    }
    return pairs;
}

// ---------------------------------------------------------------------------
// validate: degree, half-integrality, 4-edge-connectivity of the support
// graph, cost sanity, and (when a matrix is given) metric checks.
// ---------------------------------------------------------------------------
struct ValidationReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["valid"] = valid();
        j["violations"] = violations;
        return j;
    }
};

inline ValidationReport validate(const HalfIntegralSolution& sol) {
    ValidationReport rep;
    auto flag = [&](const std::string& s) { rep.violations.push_back(s); };

    bool values_ok = true;
    for (const auto& e : sol.edges) {
        if (e.x != 0.5 && e.x != 1.0) {
            flag("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                 ") has non-half-integral value x=" + format_double(e.x));
            values_ok = false;
        }
        if (e.cost < 0)
            flag("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                 ") has negative cost");
    }

    std::vector<double> deg(sol.n, 0.0);
    for (const auto& e : sol.edges) {
        deg[e.u] += e.x;
        deg[e.v] += e.x;
    }
    bool degrees_ok = true;
    for (int v = 0; v < sol.n; ++v)
        if (deg[v] != 2.0) {  // sums of 0.5/1.0 are exact in binary
            flag("vertex " + std::to_string(v) + " has fractional degree " +
                 format_double(deg[v]) + ", expected 2");
            degrees_ok = false;
        }

    if (values_ok && degrees_ok) {
        int mc = global_min_cut_value(sol.n, support_edge_pairs(sol));
        if (sol.n >= 2 && mc != 4)
            flag("support graph min cut is " + std::to_string(mc) + ", expected 4");
    }

    if (sol.matrix) {
        const auto& m = *sol.matrix;
        for (int i = 0; i < sol.n; ++i) {
            if (m[i][i] != 0.0) flag("matrix diagonal entry " + std::to_string(i) + " is nonzero");
            for (int j = i + 1; j < sol.n; ++j) {
                if (m[i][j] != m[j][i])
                    flag("matrix asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
                if (m[i][j] < 0)
                    flag("matrix negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
        for (int i = 0; i < sol.n; ++i)
            for (int j = 0; j < sol.n; ++j)
                for (int k = 0; k < sol.n; ++k)
                    if (m[i][j] > m[i][k] + m[k][j] + 1e-12) {
                        flag("triangle inequality violated: d(" + std::to_string(i) + "," +
                             std::to_string(j) + ") > d(.," + std::to_string(k) + ",.)");
                        i = j = sol.n;  // one witness is enough
                        break;
                    }
        for (const auto& e : sol.edges)
            if (std::abs(m[e.u][e.v] - e.cost) > 1e-12) {
                flag("matrix entry (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                     ") disagrees with edge cost");
                break;
            }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// ensure_unit_edge: designate an x = 1 edge, splitting a vertex if none
// exists. The split tries the three pairings of the chosen vertex's four
// half-integral edges in fixed order and accepts the first whose support
// graph is 4-edge-connected; if no vertex admits one, that is a structural
// error and is surfaced.
// ---------------------------------------------------------------------------
struct UnitEdgeResult {
    HalfIntegralSolution solution;
    int designated_edge = -1;  // index into solution.edges with x = 1
};

inline UnitEdgeResult ensure_unit_edge(const HalfIntegralSolution& sol) {
    for (std::size_t i = 0; i < sol.edges.size(); ++i)
        if (sol.edges[i].x == 1.0) {
            UnitEdgeResult r{sol, static_cast<int>(i)};
            return r;
        }

    // All edges are half; every vertex has exactly four incident edges.
    static const int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (int v = 0; v < sol.n; ++v) {
        std::vector<int> inc;
        for (std::size_t i = 0; i < sol.edges.size(); ++i)
            if (sol.edges[i].u == v || sol.edges[i].v == v) inc.push_back(static_cast<int>(i));
        HITSP_ASSERT(inc.size() == 4, "half-integral vertex must have 4 incident edges");
        std::sort(inc.begin(), inc.end(), [&](int a, int b) {
            int na = sol.edges[a].u == v ? sol.edges[a].v : sol.edges[a].u;
            int nb = sol.edges[b].u == v ? sol.edges[b].v : sol.edges[b].u;
            return na != nb ? na < nb : a < b;
        });
        for (int p = 0; p < 3; ++p) {
            HalfIntegralSolution cand = sol;
            cand.n = sol.n + 1;
            int v2 = sol.n;
            // edges in slots 2,3 of the pairing move to v2
            for (int s = 2; s < 4; ++s) {
                auto& e = cand.edges[inc[kPairings[p][s]]];
                if (e.u == v) e.u = v2;
                else e.v = v2;
            }
            SolutionEdge eplus;
            eplus.u = v;
            eplus.v = v2;
            eplus.x = 1.0;
            eplus.cost = 0.0;
            cand.edges.push_back(eplus);
            if (cand.matrix) {
                auto& m = *cand.matrix;
                for (int i = 0; i < sol.n; ++i) m[i].push_back(m[i][v]);
                std::vector<double> row = m[v];
                row.push_back(0.0);
                m.push_back(row);
                m[v2][v] = m[v][v2] = 0.0;
                m[v2][v2] = 0.0;
            }
            cand.split = SplitRecord{v, v, v2, p};
            if (validate(cand).valid()) {
                int designated = static_cast<int>(cand.edges.size()) - 1;
                return UnitEdgeResult{std::move(cand), designated};
            }
        }
    }
    throw StructuralError(
        "no vertex split yields a 4-edge-connected support graph; "
        "input cannot be normalized");
}

// ---------------------------------------------------------------------------
// build_support: expand x = 1 edges into parallel copies. e_plus is the
// first copy of the designated edge; its twin is an ordinary half-edge.
// ---------------------------------------------------------------------------
inline SupportGraph build_support(const HalfIntegralSolution& sol, int designated_edge) {
    require(designated_edge >= 0 && designated_edge < static_cast<int>(sol.edges.size()) &&
                sol.edges[designated_edge].x == 1.0,
            "designated edge must exist and have x = 1");
    SupportGraph g;
    g.n = sol.n;
    for (std::size_t i = 0; i < sol.edges.size(); ++i) {
        const auto& e = sol.edges[i];
        int copies = e.x == 1.0 ? 2 : 1;
        for (int c = 0; c < copies; ++c) {
            HalfEdge he;
            he.id = static_cast<int>(g.half_edges.size());
            he.u = e.u;
            he.v = e.v;
            he.cost = e.cost;
            he.origin_edge = static_cast<int>(i);
            if (static_cast<int>(i) == designated_edge && c == 0) g.e_plus = he.id;
            g.half_edges.push_back(he);
        }
    }
    g.incident.assign(g.n, {});
    for (const auto& he : g.half_edges) {
        g.incident[he.u].push_back(he.id);
        g.incident[he.v].push_back(he.id);
    }
    for (int v = 0; v < g.n; ++v)
        HITSP_ASSERT(g.incident[v].size() == 4, "support graph must be 4-regular");
    HITSP_ASSERT(g.e_plus >= 0, "e+ must be designated");
    return g;
}

// ---------------------------------------------------------------------------
// Metric closure: the instance matrix when given (extended over split
// vertices at distance 0), otherwise all-pairs shortest paths in the
// cost-weighted support graph (Dijkstra from every vertex).
// ---------------------------------------------------------------------------
class DistanceOracle {
public:
    DistanceOracle() = default;
    explicit DistanceOracle(std::vector<std::vector<double>> d) : d_(std::move(d)) {}

    double operator()(int u, int v) const { return d_[u][v]; }
    int size() const { return static_cast<int>(d_.size()); }
    const std::vector<std::vector<double>>& table() const { return d_; }

private:
    std::vector<std::vector<double>> d_;
};

inline DistanceOracle metric_closure(const HalfIntegralSolution& sol, const SupportGraph& g) {
    if (sol.matrix) return DistanceOracle(*sol.matrix);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> d(g.n, std::vector<double>(g.n, inf));
    for (int s = 0; s < g.n; ++s) {
        auto& dist = d[s];
        dist[s] = 0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        pq.push({0.0, s});
        while (!pq.empty()) {
            auto [du, u] = pq.top();
            pq.pop();
            if (du > dist[u]) continue;
            for (int he : g.incident[u]) {
                int w = g.other_end(he, u);
                double nd = du + g.half_edges[he].cost;
                if (nd < dist[w]) {
                    dist[w] = nd;
                    pq.push({nd, w});
                }
            }
        }
        for (int t = 0; t < g.n; ++t)
            if (dist[t] == inf)
                throw StructuralError("support graph is disconnected; no metric closure");
    }
    return DistanceOracle(std::move(d));
}

// Normalized instance: validated solution with designated unit edge, its
// support graph and metric, ready for the algorithm proper.
struct Instance {
    HalfIntegralSolution solution;
    int designated_edge = -1;
    SupportGraph graph;
    DistanceOracle metric;
    double cx = 0.0;
};

inline Instance normalize(const HalfIntegralSolution& raw) {
    ValidationReport rep = validate(raw);
    if (!rep.valid()) {
        std::string msg = "invalid instance:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw StructuralError(msg);
    }
    auto unit = ensure_unit_edge(raw);
    Instance inst;
    inst.solution = std::move(unit.solution);
    inst.designated_edge = unit.designated_edge;
    inst.graph = build_support(inst.solution, inst.designated_edge);
    inst.metric = metric_closure(inst.solution, inst.graph);
    inst.cx = inst.solution.cost_of_x();
    return inst;
}

}  // namespace hitsp

#endif  // HITSP_INSTANCE_HPP
