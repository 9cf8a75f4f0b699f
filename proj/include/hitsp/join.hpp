#ifndef HITSP_JOIN_HPP
#define HITSP_JOIN_HPP

#include <deque>

#include "hitsp/pipeline.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Maximum weight matching in general graphs (primal-dual with blossoms,
// O(n^3), 1-indexed, integer weights). Minimum-cost perfect matching is
// obtained by the usual offset transform in min_weight_perfect_matching.
// ---------------------------------------------------------------------------
class WeightedBlossom {
public:
    explicit WeightedBlossom(int n) : n_(n), n_x_(n) {
        int N = 2 * n + 1;
        g_.assign(N, std::vector<E>(N));
        for (int u = 0; u < N; ++u)
            for (int v = 0; v < N; ++v) g_[u][v] = E{u, v, 0};
        lab_.assign(N, 0);
        match_.assign(N, 0);
        slack_.assign(N, 0);
        st_.assign(N, 0);
        pa_.assign(N, 0);
        S_.assign(N, 0);
        vis_.assign(N, 0);
        flower_.assign(N, {});
        flower_from_.assign(N, std::vector<int>(n + 1, 0));
    }

    void add_edge(int u, int v, long long w) {  // 1-indexed, w > 0
        g_[u][v].w = g_[v][u].w = w;
    }

    // Returns matched partner per vertex (1-indexed, 0 = unmatched).
    std::vector<int> solve() {
        std::fill(match_.begin(), match_.end(), 0);
        n_x_ = n_;
        long long w_max = 0;
        for (int u = 1; u <= n_; ++u) {
            st_[u] = u;
            flower_[u].clear();
            for (int v = 1; v <= n_; ++v) {
                flower_from_[u][v] = (u == v ? u : 0);
                w_max = std::max(w_max, g_[u][v].w);
            }
        }
        for (int u = 1; u <= n_; ++u) lab_[u] = w_max;
        while (matching()) {
        }
        return {match_.begin(), match_.begin() + n_ + 1};
    }

private:
    struct E {
        int u, v;
        long long w;
    };
    static constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

    int n_, n_x_;
    std::vector<std::vector<E>> g_;
    std::vector<long long> lab_;
    std::vector<int> match_, slack_, st_, pa_, S_, vis_;
    std::vector<std::vector<int>> flower_;
    std::vector<std::vector<int>> flower_from_;
    std::deque<int> q_;
    int timestamp_ = 0;

    long long e_delta(const E& e) const { return lab_[e.u] + lab_[e.v] - g_[e.u][e.v].w * 2; }

    void update_slack(int u, int x) {
        if (!slack_[x] || e_delta(g_[u][x]) < e_delta(g_[slack_[x]][x])) slack_[x] = u;
    }
    void set_slack(int x) {
        slack_[x] = 0;
        for (int u = 1; u <= n_; ++u)
            if (g_[u][x].w > 0 && st_[u] != x && S_[st_[u]] == 0) update_slack(u, x);
    }
    void q_push(int x) {
        if (x <= n_) q_.push_back(x);
        else
            for (int t : flower_[x]) q_push(t);
    }
    void set_st(int x, int b) {
        st_[x] = b;
        if (x > n_)
            for (int t : flower_[x]) set_st(t, b);
    }
    int get_pr(int b, int xr) {
        int pr = static_cast<int>(std::find(flower_[b].begin(), flower_[b].end(), xr) -
                                  flower_[b].begin());
        if (pr % 2 == 1) {
            std::reverse(flower_[b].begin() + 1, flower_[b].end());
            return static_cast<int>(flower_[b].size()) - pr;
        }
        return pr;
    }
    void set_match(int u, int v) {
        match_[u] = g_[u][v].v;
        if (u <= n_) return;
        const E& e = g_[u][v];
        int xr = flower_from_[u][e.u];
        int pr = get_pr(u, xr);
        for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
        set_match(xr, v);
        std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
    }
    void augment(int u, int v) {
        for (;;) {
            int xnv = st_[match_[u]];
            set_match(u, v);
            if (!xnv) return;
            set_match(xnv, st_[pa_[xnv]]);
            u = st_[pa_[xnv]];
            v = xnv;
        }
    }
    int get_lca(int u, int v) {
        ++timestamp_;
        for (; u || v; std::swap(u, v)) {
            if (u == 0) continue;
            if (vis_[u] == timestamp_) return u;
            vis_[u] = timestamp_;
            u = st_[match_[u]];
            if (u) u = st_[pa_[u]];
        }
        return 0;
    }
    void add_blossom(int u, int lca, int v) {
        int b = n_ + 1;
        while (b <= n_x_ && st_[b]) ++b;
        if (b > n_x_) ++n_x_;
        lab_[b] = 0;
        S_[b] = 0;
        match_[b] = match_[lca];
        flower_[b].clear();
        flower_[b].push_back(lca);
        for (int x = u, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            y = st_[match_[x]];
            flower_[b].push_back(y);
            q_push(y);
        }
        std::reverse(flower_[b].begin() + 1, flower_[b].end());
        for (int x = v, y; x != lca; x = st_[pa_[y]]) {
            flower_[b].push_back(x);
            y = st_[match_[x]];
            flower_[b].push_back(y);
            q_push(y);
        }
        set_st(b, b);
        for (int x = 1; x <= n_x_; ++x) g_[b][x].w = g_[x][b].w = 0;
        for (int x = 1; x <= n_; ++x) flower_from_[b][x] = 0;
        for (int xs : flower_[b]) {
            for (int x = 1; x <= n_x_; ++x)
                if (g_[b][x].w == 0 || e_delta(g_[xs][x]) < e_delta(g_[b][x])) {
                    g_[b][x] = g_[xs][x];
                    g_[x][b] = g_[x][xs];
                }
            for (int x = 1; x <= n_; ++x)
                if (flower_from_[xs][x]) flower_from_[b][x] = xs;
        }
        set_slack(b);
    }
    void expand_blossom(int b) {
        for (int t : flower_[b]) set_st(t, t);
        int xr = flower_from_[b][g_[b][pa_[b]].u];
        int pr = get_pr(b, xr);
        for (int i = 0; i < pr; i += 2) {
            int xs = flower_[b][i], xns = flower_[b][i + 1];
            pa_[xs] = g_[xns][xs].u;
            S_[xs] = 1;
            S_[xns] = 0;
            slack_[xs] = 0;
            set_slack(xns);
            q_push(xns);
        }
        S_[xr] = 1;
        pa_[xr] = pa_[b];
        for (int i = pr + 1; i < static_cast<int>(flower_[b].size()); ++i) {
            int xs = flower_[b][i];
            S_[xs] = -1;
            set_slack(xs);
        }
        st_[b] = 0;
    }
    bool on_found_edge(const E& e) {
        int u = st_[e.u], v = st_[e.v];
        if (S_[v] == -1) {
            pa_[v] = e.u;
            S_[v] = 1;
            int nu = st_[match_[v]];
            slack_[v] = slack_[nu] = 0;
            S_[nu] = 0;
            q_push(nu);
        } else if (S_[v] == 0) {
            int lca = get_lca(u, v);
            if (!lca) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }
    bool matching() {
        std::fill(S_.begin(), S_.begin() + n_x_ + 1, -1);
        std::fill(slack_.begin(), slack_.begin() + n_x_ + 1, 0);
        q_.clear();
        for (int x = 1; x <= n_x_; ++x)
            if (st_[x] == x && !match_[x]) {
                pa_[x] = 0;
                S_[x] = 0;
                q_push(x);
            }
        if (q_.empty()) return false;
        for (;;) {
            while (!q_.empty()) {
                int u = q_.front();
                q_.pop_front();
                if (S_[st_[u]] == 1) continue;
                for (int v = 1; v <= n_; ++v)
                    if (g_[u][v].w > 0 && st_[u] != st_[v]) {
                        if (e_delta(g_[u][v]) == 0) {
                            if (on_found_edge(g_[u][v])) return true;
                        } else {
                            update_slack(u, st_[v]);
                        }
                    }
            }
            long long d = kInf;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1) d = std::min(d, lab_[b] / 2);
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x]) {
                    if (S_[x] == -1) d = std::min(d, e_delta(g_[slack_[x]][x]));
                    else if (S_[x] == 0) d = std::min(d, e_delta(g_[slack_[x]][x]) / 2);
                }
            for (int u = 1; u <= n_; ++u) {
                if (S_[st_[u]] == 0) {
                    if (lab_[u] <= d) return false;
                    lab_[u] -= d;
                } else if (S_[st_[u]] == 1) {
                    lab_[u] += d;
                }
            }
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b) {
                    if (S_[b] == 0) lab_[b] += d * 2;
                    else if (S_[b] == 1) lab_[b] -= d * 2;
                }
            for (int x = 1; x <= n_x_; ++x)
                if (st_[x] == x && slack_[x] && st_[slack_[x]] != x &&
                    e_delta(g_[slack_[x]][x]) == 0)
                    if (on_found_edge(g_[slack_[x]][x])) return true;
            for (int b = n_ + 1; b <= n_x_; ++b)
                if (st_[b] == b && S_[b] == 1 && lab_[b] == 0) expand_blossom(b);
        }
    }
};

// ---------------------------------------------------------------------------
// Minimum-cost perfect matching on a complete even vertex set with double
// costs. Costs are scaled to integers (relative resolution 2^-40) so the
// primal-dual runs in exact arithmetic; the returned cost is recomputed from
// the original doubles.
// ---------------------------------------------------------------------------
struct MatchingResult {
    std::vector<std::pair<int, int>> pairs;  // index pairs, first < second
    double cost = 0.0;
};

inline MatchingResult min_weight_perfect_matching(
    int k, const std::function<double(int, int)>& cost) {
    require(k % 2 == 0, "perfect matching needs an even number of vertices");
    MatchingResult res;
    if (k == 0) return res;
    double cmax = 0;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) cmax = std::max(cmax, cost(i, j));
    double scale = cmax > 0 ? double(1ll << 40) / cmax : 1.0;
    long long big = cmax > 0 ? (1ll << 40) * (k + 2) : k + 2;
    WeightedBlossom wb(k);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            wb.add_edge(i + 1, j + 1, big - std::llround(cost(i, j) * scale));
    auto match = wb.solve();
    std::vector<bool> done(k, false);
    for (int i = 0; i < k; ++i) {
        HITSP_ASSERT(match[i + 1] != 0, "matching is perfect");
        int j = match[i + 1] - 1;
        if (done[i] || done[j]) continue;
        done[i] = done[j] = true;
        res.pairs.emplace_back(std::min(i, j), std::max(i, j));
        res.cost += cost(i, j);
    }
    std::sort(res.pairs.begin(), res.pairs.end());
    return res;
}

// ---------------------------------------------------------------------------
// Minimum O-join via matching on the metric closure.
// ---------------------------------------------------------------------------
struct JoinSolution {
    std::vector<std::pair<int, int>> matching_pairs;  // vertex ids
    double cost = 0.0;
};

inline JoinSolution min_ojoin(const DistanceOracle& metric, const std::vector<int>& odd) {
    require(odd.size() % 2 == 0, "|O| must be even");
    auto mr = min_weight_perfect_matching(
        static_cast<int>(odd.size()),
        [&](int i, int j) { return metric(odd[i], odd[j]); });
    JoinSolution js;
    js.cost = mr.cost;
    for (auto [i, j] : mr.pairs) {
        int a = odd[i], b = odd[j];
        js.matching_pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(js.matching_pairs.begin(), js.matching_pairs.end());
    return js;
}

// ---------------------------------------------------------------------------
// Shortcutting: Euler circuit of T plus the join edges, visiting repeated
// vertices only once. Starts from the lowest-id vertex; the resulting order
// costs at most c(T) + cost(J) by the triangle inequality.
// ---------------------------------------------------------------------------
struct Tour {
    std::vector<int> order;
    double cost = 0.0;
};

inline Tour shortcut(const SupportGraph& g, const OneTree& tree, const JoinSolution& join,
                     const DistanceOracle& metric) {
    struct MEdge {
        int u, v;
        bool used = false;
    };
    std::vector<MEdge> medges;
    for (int he : tree.edge_list) medges.push_back({g.half_edges[he].u, g.half_edges[he].v});
    for (auto [a, b] : join.matching_pairs) medges.push_back({a, b});
    std::vector<std::vector<int>> adj(g.n);
    for (std::size_t i = 0; i < medges.size(); ++i) {
        adj[medges[i].u].push_back(static_cast<int>(i));
        adj[medges[i].v].push_back(static_cast<int>(i));
    }
    for (int v = 0; v < g.n; ++v)
        HITSP_ASSERT(adj[v].size() % 2 == 0, "T plus join edges is Eulerian");

    // Hierholzer from vertex 0.
    std::vector<int> circuit;
    std::vector<std::size_t> it(g.n, 0);
    std::vector<std::pair<int, int>> stack{{0, -1}};
    while (!stack.empty()) {
        auto [v, via] = stack.back();
        bool advanced = false;
        while (it[v] < adj[v].size()) {
            int ei = adj[v][it[v]++];
            if (medges[ei].used) continue;
            medges[ei].used = true;
            int w = medges[ei].u == v ? medges[ei].v : medges[ei].u;
            stack.push_back({w, ei});
            advanced = true;
            break;
        }
        if (!advanced) {
            circuit.push_back(v);
            stack.pop_back();
        }
    }
    HITSP_ASSERT(circuit.size() == medges.size() + 1, "Euler circuit uses every edge");

    Tour tour;
    std::vector<bool> seen(g.n, false);
    for (int v : circuit)
        if (!seen[v]) {
            seen[v] = true;
            tour.order.push_back(v);
        }
    HITSP_ASSERT(static_cast<int>(tour.order.size()) == g.n, "tour visits every vertex once");
    for (std::size_t i = 0; i < tour.order.size(); ++i)
        tour.cost += metric(tour.order[i], tour.order[(i + 1) % tour.order.size()]);
    return tour;
}

// Map a tour over a split solution back to the original vertex set: the two
// split halves collapse to the original vertex; cost can only go down.
inline Tour collapse_split(const Tour& tour, const HalfIntegralSolution& sol,
                           const DistanceOracle& metric) {
    if (!sol.split) return tour;
    int v1 = sol.split->v1, v2 = sol.split->v2;
    Tour out;
    bool used = false;
    for (int v : tour.order) {
        int w = v == v2 ? v1 : v;
        if (w == v1) {
            if (used) continue;
            used = true;
        }
        out.order.push_back(w);
    }
    for (std::size_t i = 0; i < out.order.size(); ++i)
        out.cost += metric(out.order[i], out.order[(i + 1) % out.order.size()]);
    return out;
}

}  // namespace hitsp

#endif  // HITSP_JOIN_HPP
