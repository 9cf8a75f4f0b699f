#ifndef HITSP_CUTS_HPP
#define HITSP_CUTS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "hitsp/instance.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Tight sets: vertex sets whose boundary is a minimum cut (4 half-edges).
// The canonical side is the one not containing vertex 0.
// ---------------------------------------------------------------------------
struct TightSet {
    Bitset side;                  // canonical side, over original vertex ids
    std::array<int, 4> boundary;  // the 4 crossing half-edge ids, sorted
};

inline bool crosses(const Bitset& a, const Bitset& b) {
    int n = a.universe();
    int both = a.intersection_count(b);
    int only_a = a.count() - both;
    int only_b = b.count() - both;
    int neither = n - both - only_a - only_b;
    return both > 0 && only_a > 0 && only_b > 0 && neither > 0;
}

struct MinCutOptions {
    int exhaustive_cap = 16;          // exhaustive subset scan up to this many vertices
    double karger_c = 3.0;            // ceil(c n^2 ln n) contraction rounds beyond
    std::uint64_t karger_seed = 0x51ab70e5u;  // fixed: enumeration must be deterministic
};

namespace detail {

inline std::array<int, 4> boundary_of(const SupportGraph& g, const Bitset& side) {
    std::array<int, 4> b{-1, -1, -1, -1};
    int k = 0;
    for (const auto& he : g.half_edges)
        if (side.test(he.u) != side.test(he.v)) {
            HITSP_ASSERT(k < 4, "boundary of a tight set has exactly 4 edges");
            b[k++] = he.id;
        }
    HITSP_ASSERT(k == 4, "boundary of a tight set has exactly 4 edges");
    return b;
}

inline std::vector<TightSet> enumerate_exhaustive(const SupportGraph& g) {
    int n = g.n;
    std::vector<TightSet> out;
    // Canonical subsets exclude vertex 0; a crossing-count below 4 anywhere
    // means the input was not 4-edge-connected.
    std::uint64_t limit = std::uint64_t{1} << (n - 1);
    std::vector<std::pair<int, int>> ends;
    ends.reserve(g.half_edges.size());
    for (const auto& he : g.half_edges) ends.emplace_back(he.u, he.v);
    for (std::uint64_t m = 1; m < limit; ++m) {
        std::uint64_t mask = m << 1;  // vertex 0 stays out
        int c = 0;
        for (const auto& [u, v] : ends) {
            c += ((mask >> u) ^ (mask >> v)) & 1;
            if (c > 4) break;
        }
        if (c < 4) throw StructuralError("graph has a cut of size " + std::to_string(c) +
                                         "; min cut must be 4");
        if (c == 4) {
            Bitset side(n);
            for (int v = 1; v < n; ++v)
                if ((mask >> v) & 1) side.set(v);
            out.push_back(TightSet{side, boundary_of(g, side)});
        }
    }
    return out;
}

inline std::vector<TightSet> enumerate_karger(const SupportGraph& g, const MinCutOptions& opt) {
    int n = g.n;
    if (global_min_cut_value(
            n, [&] {
                std::vector<std::pair<int, int>> p;
                for (const auto& he : g.half_edges) p.emplace_back(he.u, he.v);
                return p;
            }()) != 4)
        throw StructuralError("graph min cut is not 4");

    std::set<Bitset> found;
    auto canonical = [&](Bitset s) { return s.test(0) ? s.complement() : s; };
    // Singleton cuts are tight in any 4-regular graph; seed them directly.
    for (int v = 0; v < n; ++v) {
        Bitset s(n);
        s.set(v);
        found.insert(canonical(s));
    }

    int rounds = static_cast<int>(std::ceil(opt.karger_c * n * n * std::log(n)));
    RandomStream rng(opt.karger_seed, static_cast<std::uint64_t>(n), "karger");
    std::vector<int> parent(n);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    int m = static_cast<int>(g.half_edges.size());
    for (int r = 0; r < rounds; ++r) {
        std::iota(parent.begin(), parent.end(), 0);
        int comps = n;
        while (comps > 2) {
            const auto& he = g.half_edges[rng.below(m)];
            int a = find(he.u), b = find(he.v);
            if (a == b) continue;
            parent[a] = b;
            --comps;
        }
        Bitset s(n);
        int rep = find(0);
        for (int v = 0; v < n; ++v)
            if (find(v) != rep) s.set(v);
        int c = 0;
        for (const auto& he : g.half_edges) c += s.test(he.u) != s.test(he.v);
        if (c == 4) found.insert(s);
    }
    HITSP_ASSERT(static_cast<int>(found.size()) <= n * (n - 1) / 2,
                 "more min cuts than the O(n^2) bound allows");
    std::vector<TightSet> out;
    out.reserve(found.size());
    for (const auto& s : found) out.push_back(TightSet{s, boundary_of(g, s)});
    return out;
}

}  // namespace detail

// Every vertex bipartition with exactly 4 crossing half-edges, reported once
// by its canonical side. Exhaustive up to opt.exhaustive_cap vertices,
// repeated randomized contraction (verified and deduplicated) above.
inline std::vector<TightSet> enumerate_min_cuts(const SupportGraph& g,
                                                const MinCutOptions& opt = {}) {
    std::vector<TightSet> cuts = g.n <= opt.exhaustive_cap
                                     ? detail::enumerate_exhaustive(g)
                                     : detail::enumerate_karger(g, opt);
    std::sort(cuts.begin(), cuts.end(),
              [](const TightSet& a, const TightSet& b) { return Bitset::lex_less(a.side, b.side); });
    return cuts;
}

// ---------------------------------------------------------------------------
// Hierarchy of critical sets.
// ---------------------------------------------------------------------------
enum class NodeKind { Leaf, DegreeCut, CycleCut, RootCycle };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Leaf: return "leaf";
        case NodeKind::DegreeCut: return "degreeCut";
        case NodeKind::CycleCut: return "cycleCut";
        case NodeKind::RootCycle: return "rootCycle";
    }
    return "?";
}

struct HierNode {
    int id = -1;
    NodeKind kind = NodeKind::Leaf;
    Bitset members;                    // original vertices
    int parent = -1;
    std::vector<int> children;         // path order for cycle cuts, cyclic for root
    std::array<int, 4> boundary{-1, -1, -1, -1};  // not meaningful for the root
    std::vector<int> internal_edges;   // half-edges whose lowest common node is this
    // Cycle structure. rungs[r] joins children[r] and children[r+1]
    // (children[(r+1) % k] at the root). Partner pairs are the two boundary
    // pairs of a non-root cycle cut, at children.front() / children.back().
    std::vector<std::array<int, 2>> rungs;
    std::array<std::array<int, 2>, 2> partner_pairs{{{-1, -1}, {-1, -1}}};
    int depth = 0;
};

struct LastCut {
    std::array<int, 4> edges{-1, -1, -1, -1};  // half-edge quadruple, sorted
    Bitset side;                               // canonical vertex side
    int cut_index = -1;                        // position in the enumerated cut list
};

struct EdgeRole {
    int s_u = -1, s_v = -1, s_e = -1;  // node ids (S_{u,e}, S_{v,e}, S_e)
    bool bottom = false;
    int companion = -1;                // other edge of the rung, bottom edges only
    std::array<LastCut, 2> last_cuts;
    std::vector<std::pair<int, int>> partner_on;  // (cycle node, partner edge)
};

class CutHierarchy {
public:
    SupportGraph graph;
    std::vector<TightSet> min_cuts;   // all min cuts of the support graph
    std::vector<HierNode> nodes;      // 0..n-1 are leaves, root is last
    std::vector<EdgeRole> roles;      // per half-edge
    int root_id = -1;

    const HierNode& root() const { return nodes[root_id]; }
    int e_plus() const { return graph.e_plus; }
    int e_plus_partner() const { return roles[graph.e_plus].companion; }

    bool is_critical(int node) const { return node != root_id; }

    // Does e leave node's parent as well? Defined for e on delta(node).
    bool goes_higher(int he, int node) const {
        const EdgeRole& r = roles[he];
        HITSP_ASSERT(on_boundary(he, node), "goes_higher queried for edge not on the cut");
        return node != r.s_u && node != r.s_v;
    }
    bool on_boundary(int he, int node) const {
        const auto& m = nodes[node].members;
        return m.test(graph.half_edges[he].u) != m.test(graph.half_edges[he].v);
    }

    std::pair<LastCut, LastCut> last_cuts(int he) const {
        require(he != graph.e_plus, "e+ lies on no critical cut; it has no last cuts");
        return {roles[he].last_cuts[0], roles[he].last_cuts[1]};
    }

    // All min cuts containing a given edge, reconstructed from the hierarchy:
    // critical degree cuts through e (including both endpoint singletons) and,
    // for every cycle whose cycle contains e, each cut of that cycle through e.
    std::vector<Bitset> min_cuts_containing(int he) const;

    nlohmann::json to_json() const;
    std::string to_dot() const;

    // Internal contracted graph of a node: child count and (child_i, child_j,
    // half-edge) triples. The root's internal graph is the full doubled cycle.
    struct InternalGraph {
        int num_children = 0;
        std::vector<std::array<int, 3>> edges;  // {ci, cj, he}
    };
    InternalGraph internal_graph(int node) const {
        const HierNode& nd = nodes[node];
        InternalGraph ig;
        ig.num_children = static_cast<int>(nd.children.size());
        std::vector<int> child_index(nodes.size(), -1);
        for (int i = 0; i < ig.num_children; ++i) child_index[nd.children[i]] = i;
        for (int he : nd.internal_edges) {
            int a = child_index[roles[he].s_u], b = child_index[roles[he].s_v];
            HITSP_ASSERT(a >= 0 && b >= 0, "internal edge endpoints must be children");
            ig.edges.push_back({a, b, he});
        }
        return ig;
    }

    int find_cut_index(const Bitset& canonical_side) const {
        auto it = cut_lookup_.find(canonical_side);
        return it == cut_lookup_.end() ? -1 : it->second;
    }

    friend CutHierarchy build_hierarchy(const SupportGraph&, const std::vector<TightSet>&);

private:
    std::unordered_map<Bitset, int, BitsetHash> cut_lookup_;
};

namespace detail {

struct ContractionState {
    int n;
    std::vector<int> sv_nodes;       // node id per current supervertex
    std::vector<int> vertex_sv;      // original vertex -> supervertex slot
};

// View of the contracted graph restricted to a selected set's children plus
// the outside vertex w; used to classify cycle cuts and order their children.
struct CycleView {
    std::vector<int> order;                  // child slots in path order
    std::vector<std::array<int, 2>> rungs;   // rung r between order[r], order[r+1]
    std::array<std::array<int, 2>, 2> wpairs;  // boundary pairs at order.front()/back()
    bool ok = false;
};

}  // namespace detail

inline CutHierarchy build_hierarchy(const SupportGraph& g, const std::vector<TightSet>& cuts) {
    CutHierarchy h;
    h.graph = g;
    h.min_cuts = cuts;
    for (std::size_t i = 0; i < cuts.size(); ++i)
        h.cut_lookup_.emplace(cuts[i].side, static_cast<int>(i));

    const int n = g.n;
    const int eplus_u = g.half_edges[g.e_plus].u;
    const int eplus_v = g.half_edges[g.e_plus].v;

    // Fact checks over the raw cut list: crossing pairs have four tight
    // corners and disjoint boundaries; any two distinct tight sets share at
    // most two boundary edges.
    {
        auto boundary_size = [&](const Bitset& s) {
            int c = 0;
            for (const auto& he : g.half_edges) c += s.test(he.u) != s.test(he.v);
            return c;
        };
        for (std::size_t i = 0; i < cuts.size(); ++i)
            for (std::size_t j = i + 1; j < cuts.size(); ++j) {
                const Bitset &A = cuts[i].side, &B = cuts[j].side;
                int shared = 0;
                for (int x : cuts[i].boundary)
                    for (int y : cuts[j].boundary) shared += x == y;
                HITSP_ASSERT(shared <= 2, "two distinct tight sets share at most 2 edges");
                if (crosses(A, B)) {
                    HITSP_ASSERT(shared == 0, "crossing tight sets have disjoint boundaries");
                    Bitset corners[4] = {A & B.complement(), B & A.complement(), A & B,
                                         (A | B).complement()};
                    for (const auto& c : corners)
                        HITSP_ASSERT(boundary_size(c) == 4, "corner of crossing tight sets is tight");
                }
            }
    }

    // Leaves.
    h.nodes.resize(n);
    for (int v = 0; v < n; ++v) {
        HierNode& nd = h.nodes[v];
        nd.id = v;
        nd.kind = NodeKind::Leaf;
        nd.members = Bitset(n);
        nd.members.set(v);
        std::array<int, 4> b{-1, -1, -1, -1};
        for (int k = 0; k < 4; ++k) b[k] = g.incident[v][k];
        std::sort(b.begin(), b.end());
        nd.boundary = b;
    }

    detail::ContractionState st;
    st.n = n;
    st.sv_nodes.resize(n);
    std::iota(st.sv_nodes.begin(), st.sv_nodes.end(), 0);
    st.vertex_sv.resize(n);
    std::iota(st.vertex_sv.begin(), st.vertex_sv.end(), 0);

    std::vector<bool> alive(cuts.size(), true);
    std::set<std::pair<int, int>> seen_partner_pairs;  // Fact 3.9 bookkeeping

    auto sv_count_inside = [&](const Bitset& side) {
        int c = 0;
        for (int sv : st.sv_nodes) c += h.nodes[sv].members.is_subset_of(side);
        return c;
    };

    for (;;) {
        int total_sv = static_cast<int>(st.sv_nodes.size());
        std::vector<int> inside(cuts.size(), 0);
        std::vector<bool> proper(cuts.size(), false);
        for (std::size_t i = 0; i < cuts.size(); ++i)
            if (alive[i]) {
                inside[i] = sv_count_inside(cuts[i].side);
                proper[i] = inside[i] >= 2 && total_sv - inside[i] >= 2;
            }
        std::vector<bool> uncrossed(cuts.size(), false);
        bool any_uncrossed_proper = false;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            if (!alive[i] || !proper[i]) continue;
            bool cr = false;
            for (std::size_t j = 0; j < cuts.size() && !cr; ++j)
                if (j != i && alive[j]) cr = crosses(cuts[i].side, cuts[j].side);
            uncrossed[i] = !cr;
            any_uncrossed_proper |= uncrossed[i];
        }
        if (!any_uncrossed_proper) break;

        // Candidate sides: either side of an uncrossed proper cut, as long as
        // e+ is not inside. Fact 2.9 guarantees e+ is not on the boundary.
        struct Cand {
            Bitset side;
            int cut;
        };
        std::vector<Cand> cands;
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            if (!alive[i] || !proper[i] || !uncrossed[i]) continue;
            bool u_in = cuts[i].side.test(eplus_u), v_in = cuts[i].side.test(eplus_v);
            HITSP_ASSERT(u_in == v_in, "e+ must not lie on an uncrossed proper min cut");
            Bitset inside_side = u_in ? cuts[i].side.complement() : cuts[i].side;
            cands.push_back({inside_side, static_cast<int>(i)});
        }
        HITSP_ASSERT(!cands.empty(), "an uncrossed proper tight set avoiding e+ must exist");

        int chosen = -1;
        for (std::size_t a = 0; a < cands.size(); ++a) {
            bool minimal = true;
            for (std::size_t b = 0; b < cands.size() && minimal; ++b)
                if (a != b && cands[b].side.is_subset_of(cands[a].side) &&
                    !(cands[b].side == cands[a].side))
                    minimal = false;
            if (minimal &&
                (chosen < 0 || Bitset::lex_less(cands[a].side, cands[chosen].side)))
                chosen = static_cast<int>(a);
        }
        const Bitset S = cands[chosen].side;
        const TightSet& cut = cuts[cands[chosen].cut];

        // Children and classification.
        std::vector<int> child_slots;
        for (int s = 0; s < total_sv; ++s)
            if (h.nodes[st.sv_nodes[s]].members.is_subset_of(S)) child_slots.push_back(s);

        bool proper_cut_inside = false;
        for (std::size_t i = 0; i < cuts.size() && !proper_cut_inside; ++i) {
            if (!alive[i] || !proper[i]) continue;
            const Bitset& side = cuts[i].side;
            if ((side.is_subset_of(S) && !(side == S)) ||
                (side.complement().is_subset_of(S) && !(side.complement() == S)))
                proper_cut_inside = true;
        }
        bool is_cycle = proper_cut_inside || child_slots.size() == 2;

        HierNode nd;
        nd.id = static_cast<int>(h.nodes.size());
        nd.members = S;
        nd.boundary = cut.boundary;  // same four edges for either side
        for (int e : nd.boundary)
            HITSP_ASSERT(e != g.e_plus, "e+ lies on no critical cut boundary");

        // Contracted adjacency among children and w.
        auto slot_of_vertex = [&](int v) { return st.vertex_sv[v]; };
        std::vector<int> child_pos(total_sv, -1);
        for (std::size_t i = 0; i < child_slots.size(); ++i) child_pos[child_slots[i]] = static_cast<int>(i);
        int m = static_cast<int>(child_slots.size());
        const int W = m;  // index of the contracted outside
        std::map<std::pair<int, int>, std::vector<int>> adj;  // view pair -> half-edges
        for (const auto& he : g.half_edges) {
            int a = slot_of_vertex(he.u), b = slot_of_vertex(he.v);
            if (a == b) continue;
            int pa = child_pos[a] >= 0 ? child_pos[a] : W;
            int pb = child_pos[b] >= 0 ? child_pos[b] : W;
            if (pa == pb) continue;  // entirely outside
            if (pa > pb) std::swap(pa, pb);
            adj[{pa, pb}].push_back(he.id);
        }

        if (is_cycle) {
            nd.kind = NodeKind::CycleCut;
            // The contracted view must be a doubled cycle through w.
            std::vector<std::vector<int>> nbr(m + 1);
            for (const auto& [pr, es] : adj) {
                HITSP_ASSERT(es.size() == 2, "cycle cut view has doubled rungs");
                nbr[pr.first].push_back(pr.second);
                nbr[pr.second].push_back(pr.first);
            }
            for (int i = 0; i <= m; ++i)
                HITSP_ASSERT(nbr[i].size() == 2, "cycle cut view is a cycle");
            // Order children along the path between w's two neighbours.
            int e0 = nbr[W][0], e1 = nbr[W][1];
            int start = e0, finish = e1;
            if (Bitset::lex_less(h.nodes[st.sv_nodes[child_slots[e1]]].members,
                                 h.nodes[st.sv_nodes[child_slots[e0]]].members)) {
                std::swap(start, finish);
            }
            std::vector<int> order{start};
            int prev = W, cur = start;
            while (cur != finish) {
                int nxt = nbr[cur][0] == prev ? nbr[cur][1] : nbr[cur][0];
                prev = cur;
                cur = nxt;
                HITSP_ASSERT(cur != W, "cycle path must not return to w early");
                order.push_back(cur);
            }
            HITSP_ASSERT(static_cast<int>(order.size()) == m, "cycle path covers all children");
            for (int pos : order) nd.children.push_back(st.sv_nodes[child_slots[pos]]);
            for (int r = 0; r + 1 < m; ++r) {
                auto key = std::minmax(order[r], order[r + 1]);
                const auto& es = adj[{key.first, key.second}];
                nd.rungs.push_back({es[0], es[1]});
            }
            auto w0 = std::minmax(order.front(), W);
            auto w1 = std::minmax(order.back(), W);
            const auto& p0 = adj[{w0.first, w0.second}];
            const auto& p1 = adj[{w1.first, w1.second}];
            nd.partner_pairs = {{{p0[0], p0[1]}, {p1[0], p1[1]}}};
            for (const auto& pp : nd.partner_pairs) {
                auto key = std::minmax(pp[0], pp[1]);
                HITSP_ASSERT(seen_partner_pairs.insert(key).second,
                             "two edges are cycle partners on at most one cycle cut");
            }
        } else {
            nd.kind = NodeKind::DegreeCut;
            for (int slot : child_slots) nd.children.push_back(st.sv_nodes[slot]);
            // Fact 3.6: a child with two edges to the outside forces a cycle cut.
            for (int i = 0; i < m; ++i) {
                auto it = adj.find(std::minmax(i, W));
                HITSP_ASSERT(it == adj.end() || it->second.size() < 2,
                             "degree cut child cannot have 2 edges to the outside");
            }
        }

        for (int c : nd.children) h.nodes[c].parent = nd.id;
        h.nodes.push_back(nd);

        // Contract S.
        std::vector<int> new_sv;
        for (int s = 0; s < total_sv; ++s)
            if (child_pos[s] < 0) new_sv.push_back(st.sv_nodes[s]);
        new_sv.push_back(nd.id);
        st.sv_nodes = std::move(new_sv);
        for (int v = 0; v < n; ++v) {
            int node = -1;
            for (std::size_t s = 0; s < st.sv_nodes.size(); ++s)
                if (h.nodes[st.sv_nodes[s]].members.test(v)) {
                    node = static_cast<int>(s);
                    break;
                }
            st.vertex_sv[v] = node;
        }
        for (std::size_t i = 0; i < cuts.size(); ++i)
            if (alive[i]) {
                bool sub = S.is_subset_of(cuts[i].side);
                bool dis = !S.intersects(cuts[i].side);
                if (!sub && !dis) alive[i] = false;
            }
    }

    // Root: the remaining supervertices form a doubled cycle of length >= 3.
    {
        int k = static_cast<int>(st.sv_nodes.size());
        HITSP_ASSERT(k >= 3, "final graph is a cycle of length at least 3");
        std::map<std::pair<int, int>, std::vector<int>> adj;
        for (const auto& he : g.half_edges) {
            int a = st.vertex_sv[he.u], b = st.vertex_sv[he.v];
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            adj[{a, b}].push_back(he.id);
        }
        std::vector<std::vector<int>> nbr(k);
        for (const auto& [pr, es] : adj) {
            HITSP_ASSERT(es.size() == 2,
                         "exactly two parallel edges between consecutive root vertices");
            nbr[pr.first].push_back(pr.second);
            nbr[pr.second].push_back(pr.first);
        }
        for (int i = 0; i < k; ++i)
            HITSP_ASSERT(nbr[i].size() == 2, "final graph is a cycle");

        int start = 0;
        for (int i = 1; i < k; ++i)
            if (Bitset::lex_less(h.nodes[st.sv_nodes[i]].members,
                                 h.nodes[st.sv_nodes[start]].members))
                start = i;
        int nxt = nbr[start][0];
        if (Bitset::lex_less(h.nodes[st.sv_nodes[nbr[start][1]]].members,
                             h.nodes[st.sv_nodes[nxt]].members))
            nxt = nbr[start][1];

        HierNode root;
        root.id = static_cast<int>(h.nodes.size());
        root.kind = NodeKind::RootCycle;
        root.members = Bitset(n).complement();
        std::vector<int> order{start, nxt};
        while (true) {
            int prev = order[order.size() - 2], cur = order.back();
            int nx = nbr[cur][0] == prev ? nbr[cur][1] : nbr[cur][0];
            if (nx == start) break;
            order.push_back(nx);
        }
        HITSP_ASSERT(static_cast<int>(order.size()) == k, "root cycle covers all supervertices");
        for (int pos : order) root.children.push_back(st.sv_nodes[pos]);
        for (int r = 0; r < k; ++r) {
            auto key = std::minmax(order[r], order[(r + 1) % k]);
            const auto& es = adj[{key.first, key.second}];
            root.rungs.push_back({es[0], es[1]});
        }
        for (int c : root.children) h.nodes[c].parent = root.id;
        h.root_id = root.id;
        h.nodes.push_back(std::move(root));
    }

    // Depths.
    {
        std::function<void(int, int)> set_depth = [&](int id, int d) {
            h.nodes[id].depth = d;
            for (int c : h.nodes[id].children) set_depth(c, d + 1);
        };
        set_depth(h.root_id, 0);
    }

    // -----------------------------------------------------------------------
    // Edge roles.
    // -----------------------------------------------------------------------
    h.roles.resize(g.half_edges.size());
    auto ancestor_at_child_of = [&](int leaf, int lca) {
        int cur = leaf;
        while (h.nodes[cur].parent != lca) cur = h.nodes[cur].parent;
        return cur;
    };
    for (const auto& he : g.half_edges) {
        EdgeRole& r = h.roles[he.id];
        // LCA by depth walk.
        int a = he.u, b = he.v;
        while (a != b) {
            if (h.nodes[a].depth < h.nodes[b].depth) std::swap(a, b);
            a = h.nodes[a].parent;
            HITSP_ASSERT(a >= 0, "hierarchy chains meet at the root");
        }
        r.s_e = a;
        r.s_u = ancestor_at_child_of(he.u, r.s_e);
        r.s_v = ancestor_at_child_of(he.v, r.s_e);
        NodeKind k = h.nodes[r.s_e].kind;
        HITSP_ASSERT(k != NodeKind::Leaf, "an edge's lowest common node is internal");
        r.bottom = k == NodeKind::CycleCut || k == NodeKind::RootCycle;
        h.nodes[r.s_e].internal_edges.push_back(he.id);
    }
    // Companions, partner records and last cuts need rung lookups.
    for (auto& nd : h.nodes) {
        if (nd.kind == NodeKind::CycleCut || nd.kind == NodeKind::RootCycle) {
            for (const auto& rung : nd.rungs) {
                h.roles[rung[0]].companion = rung[1];
                h.roles[rung[1]].companion = rung[0];
            }
            if (nd.kind == NodeKind::CycleCut)
                for (const auto& pp : nd.partner_pairs) {
                    h.roles[pp[0]].partner_on.emplace_back(nd.id, pp[1]);
                    h.roles[pp[1]].partner_on.emplace_back(nd.id, pp[0]);
                }
        }
    }
    auto canonical_side = [&](Bitset s) { return s.test(0) ? s.complement() : s; };
    auto make_last_cut = [&](std::array<int, 4> edges, Bitset side) {
        std::sort(edges.begin(), edges.end());
        LastCut lc;
        lc.edges = edges;
        lc.side = canonical_side(std::move(side));
        lc.cut_index = h.find_cut_index(lc.side);
        HITSP_ASSERT(lc.cut_index >= 0, "last cut must appear in the enumerated min cuts");
        return lc;
    };
    auto canonical_pair = [](EdgeRole& r) {
        if (Bitset::lex_less(r.last_cuts[1].side, r.last_cuts[0].side))
            std::swap(r.last_cuts[0], r.last_cuts[1]);
    };
    for (const auto& he : g.half_edges) {
        EdgeRole& r = h.roles[he.id];
        const HierNode& se = h.nodes[r.s_e];
        if (!r.bottom) {
            r.last_cuts[0] = make_last_cut(h.nodes[r.s_u].boundary, h.nodes[r.s_u].members);
            r.last_cuts[1] = make_last_cut(h.nodes[r.s_v].boundary, h.nodes[r.s_v].members);
            canonical_pair(r);
            continue;
        }
        if (se.kind == NodeKind::RootCycle) {
            // The two cuts of the final cycle around the edge's endpoints.
            auto root_cut = [&](int child) {
                int k = static_cast<int>(se.children.size());
                int pos = -1;
                for (int i = 0; i < k; ++i)
                    if (se.children[i] == child) pos = i;
                const auto& left = se.rungs[(pos - 1 + k) % k];
                const auto& right = se.rungs[pos];
                return make_last_cut({left[0], left[1], right[0], right[1]},
                                     h.nodes[child].members);
            };
            r.last_cuts[0] = root_cut(r.s_u);
            r.last_cuts[1] = root_cut(r.s_v);
            canonical_pair(r);
            continue;
        }
        // Bottom edge of a proper cycle cut: pair the edge's rung with each
        // of the two boundary pairs.
        int m = static_cast<int>(se.children.size());
        int ri = -1;
        for (int i = 0; i + 1 < m; ++i)
            if ((se.children[i] == r.s_u && se.children[i + 1] == r.s_v) ||
                (se.children[i] == r.s_v && se.children[i + 1] == r.s_u))
                ri = i;
        HITSP_ASSERT(ri >= 0, "bottom edge lies on a rung of its cycle");
        Bitset left(n), right(n);
        for (int i = 0; i <= ri; ++i) left = left | h.nodes[se.children[i]].members;
        for (int i = ri + 1; i < m; ++i) right = right | h.nodes[se.children[i]].members;
        int comp = h.roles[he.id].companion;
        r.last_cuts[0] = make_last_cut(
            {he.id, comp, se.partner_pairs[0][0], se.partner_pairs[0][1]}, left);
        r.last_cuts[1] = make_last_cut(
            {he.id, comp, se.partner_pairs[1][0], se.partner_pairs[1][1]}, right);
        canonical_pair(r);
    }

    // Remaining structural facts.
    for (const auto& nd : h.nodes) {
        if (nd.kind == NodeKind::Leaf || nd.kind == NodeKind::RootCycle) continue;
        // Fact 3.8 along ancestor chains sharing two boundary edges.
        for (int anc = nd.parent; anc >= 0 && anc != h.root_id; anc = h.nodes[anc].parent) {
            int shared = 0;
            for (int x : nd.boundary)
                for (int y : h.nodes[anc].boundary) shared += x == y;
            if (shared == 2)
                HITSP_ASSERT(h.nodes[anc].kind == NodeKind::CycleCut,
                             "an ancestor sharing two boundary edges is a cycle cut");
        }
        // Fact 3.10: exactly two non-higher bottom edges force the others higher.
        int bottom_not_higher = 0;
        for (int e : nd.boundary)
            if (h.roles[e].bottom && !h.goes_higher(e, nd.id)) ++bottom_not_higher;
        if (bottom_not_higher == 2)
            for (int e : nd.boundary)
                if (!(h.roles[e].bottom && !h.goes_higher(e, nd.id)))
                    HITSP_ASSERT(h.goes_higher(e, nd.id),
                                 "remaining boundary edges must go higher");
    }
    for (const auto& he : g.half_edges) {
        const EdgeRole& r = h.roles[he.id];
        if (r.bottom) {
            HITSP_ASSERT(r.companion >= 0, "every bottom edge has exactly one companion");
            const EdgeRole& c = h.roles[r.companion];
            HITSP_ASSERT(c.last_cuts[0].side == r.last_cuts[0].side &&
                             c.last_cuts[1].side == r.last_cuts[1].side,
                         "companions share both last cuts");
        }
    }
    return h;
}

inline CutHierarchy build_hierarchy(const SupportGraph& g, const MinCutOptions& opt = {}) {
    return build_hierarchy(g, enumerate_min_cuts(g, opt));
}

inline std::vector<Bitset> CutHierarchy::min_cuts_containing(int he) const {
    std::set<Bitset> out;
    auto canonical = [&](Bitset s) { return s.test(0) ? s.complement() : s; };
    const EdgeRole& r = roles[he];
    int u = graph.half_edges[he].u, v = graph.half_edges[he].v;
    // (a) degree cuts (endpoint singletons included) along both chains.
    for (auto [leaf, top] : {std::pair{u, r.s_u}, std::pair{v, r.s_v}}) {
        for (int cur = leaf;; cur = nodes[cur].parent) {
            if (nodes[cur].kind == NodeKind::Leaf || nodes[cur].kind == NodeKind::DegreeCut)
                out.insert(canonical(nodes[cur].members));
            if (cur == top) break;
        }
    }
    // (b) cuts of every cycle whose cycle contains e. Positions along the
    // cycle: rung i sits between children[i] and children[i+1]; a non-root
    // cycle additionally has the two boundary pairs at positions -1 and m-1.
    // A cut of the cycle removes two positions, leaving the arc between them.
    auto cycle_cuts_through = [&](const HierNode& nd, int pos) {
        int m = static_cast<int>(nd.children.size());
        auto arc_between = [&](int lo, int hi) {  // children[lo+1..hi]
            Bitset s(graph.n);
            for (int i = lo + 1; i <= hi; ++i) s = s | nodes[nd.children[i]].members;
            return s;
        };
        int jlo = nd.kind == NodeKind::RootCycle ? 0 : -1;
        int jhi = m - 1;
        for (int j = jlo; j <= jhi; ++j) {
            if (j == pos) continue;
            out.insert(canonical(arc_between(std::min(pos, j), std::max(pos, j))));
        }
    };
    // e internal to a cycle node: it lies on exactly one rung.
    const HierNode& se = nodes[r.s_e];
    if (se.kind == NodeKind::CycleCut || se.kind == NodeKind::RootCycle)
        for (int i = 0; i < static_cast<int>(se.rungs.size()); ++i)
            if (se.rungs[i][0] == he || se.rungs[i][1] == he) cycle_cuts_through(se, i);
    // e in a boundary pair of some cycle node.
    for (const auto& nd : nodes) {
        if (nd.kind != NodeKind::CycleCut) continue;
        for (int side = 0; side < 2; ++side) {
            const auto& pp = nd.partner_pairs[side];
            if (pp[0] == he || pp[1] == he)
                cycle_cuts_through(nd, side == 0 ? -1 : static_cast<int>(nd.children.size()) - 1);
        }
    }
    return {out.begin(), out.end()};
}

// ---------------------------------------------------------------------------
// Serialization.
// ---------------------------------------------------------------------------
inline nlohmann::json CutHierarchy::to_json() const {
    nlohmann::json j;
    j["n"] = graph.n;
    j["ePlus"] = graph.e_plus;
    j["root"] = root_id;
    j["nodes"] = nlohmann::json::array();
    for (const auto& nd : nodes) {
        nlohmann::json nj;
        nj["id"] = nd.id;
        nj["kind"] = to_string(nd.kind);
        nj["members"] = nd.members.members();
        nj["parent"] = nd.parent;
        nj["children"] = nd.children;
        if (nd.kind != NodeKind::RootCycle && nd.id != root_id)
            nj["boundary"] = std::vector<int>(nd.boundary.begin(), nd.boundary.end());
        if (nd.kind == NodeKind::CycleCut || nd.kind == NodeKind::RootCycle) {
            nj["rungs"] = nlohmann::json::array();
            for (const auto& rg : nd.rungs) nj["rungs"].push_back({rg[0], rg[1]});
            if (nd.kind == NodeKind::CycleCut)
                nj["partnerPairs"] = {{nd.partner_pairs[0][0], nd.partner_pairs[0][1]},
                                      {nd.partner_pairs[1][0], nd.partner_pairs[1][1]}};
        }
        j["nodes"].push_back(std::move(nj));
    }
    j["edges"] = nlohmann::json::array();
    for (const auto& he : graph.half_edges) {
        const EdgeRole& r = roles[he.id];
        nlohmann::json ej;
        ej["id"] = he.id;
        ej["u"] = he.u;
        ej["v"] = he.v;
        ej["cost"] = he.cost;
        ej["role"] = he.id == graph.e_plus ? "ePlus" : (r.bottom ? "bottom" : "top");
        ej["Su"] = r.s_u;
        ej["Sv"] = r.s_v;
        ej["Se"] = r.s_e;
        ej["companion"] = r.companion;
        if (he.id != graph.e_plus) {
            ej["lastCuts"] = nlohmann::json::array();
            for (const auto& lc : r.last_cuts)
                ej["lastCuts"].push_back(
                    {{"edges", std::vector<int>(lc.edges.begin(), lc.edges.end())},
                     {"side", lc.side.members()}});
        }
        if (!r.partner_on.empty()) {
            ej["cyclePartners"] = nlohmann::json::array();
            for (auto [node, partner] : r.partner_on)
                ej["cyclePartners"].push_back({{"cycle", node}, {"partner", partner}});
        }
        j["edges"].push_back(std::move(ej));
    }
    return j;
}

inline std::string CutHierarchy::to_dot() const {
    std::ostringstream os;
    os << "digraph hierarchy {\n  rankdir=BT;\n";
    for (const auto& nd : nodes) {
        os << "  n" << nd.id << " [label=\"" << nd.id << ":" << to_string(nd.kind);
        if (nd.kind == NodeKind::Leaf) os << " v" << nd.members.members()[0];
        os << "\"];\n";
        if (nd.parent >= 0) os << "  n" << nd.id << " -> n" << nd.parent << ";\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace hitsp

#endif  // HITSP_CUTS_HPP
