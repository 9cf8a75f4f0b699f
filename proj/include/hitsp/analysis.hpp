#ifndef HITSP_ANALYSIS_HPP
#define HITSP_ANALYSIS_HPP

#include <Eigen/Eigenvalues>

#include "hitsp/join.hpp"
#include "hitsp/pipeline.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Joint statistics engine.
//
// Trees at distinct hierarchy nodes are independent, so the joint law of any
// family of edge-set statistics factorizes node by node: enumerate each
// involved node's trees once, tally the per-node contribution vector, and
// convolve across nodes (counts add, parities xor). Everything the exact
// lemma checks need reduces to this.
// ---------------------------------------------------------------------------
struct Observable {
    Bitset mask;       // half-edge ids
    bool parity = false;  // track only evenness instead of the full count
};

inline Observable parity_of(const Bitset& mask) { return Observable{mask, true}; }
inline Observable count_of(const Bitset& mask) { return Observable{mask, false}; }

class JointEngine {
public:
    JointEngine(const CutHierarchy& h, const NodeDistributions& nd, double node_tree_cap = 1e4)
        : h_(h), nd_(nd), cap_(node_tree_cap) {}

    bool exact_feasible() const {
        for (const auto& node : h_.nodes) {
            if (node.kind == NodeKind::Leaf) continue;
            if (node.kind == NodeKind::RootCycle) {
                if (std::pow(2.0, static_cast<double>(node.rungs.size()) - 1) > cap_)
                    return false;
                continue;
            }
            for (const auto& model : nd_.models)
                if (model.node == node.id) {
                    WeightedGraph g = model.dist.graph;
                    if (spanning_tree_count(g) > cap_) return false;
                }
        }
        return true;
    }

    const NodeTrees& node_trees(int node) {
        auto it = cache_.find(node);
        if (it == cache_.end())
            it = cache_.emplace(node, enumerate_node_trees(h_, nd_, node, cap_)).first;
        return it->second;
    }

    // Joint pmf over observable tuples, indexed by mixed radix (observable 0
    // is the fastest-varying digit).
    std::vector<double> joint(const std::vector<Observable>& obs) {
        int k = static_cast<int>(obs.size());
        std::vector<int> radix(k);
        for (int i = 0; i < k; ++i) radix[i] = obs[i].parity ? 2 : obs[i].mask.count() + 1;
        std::vector<int> stride(k, 1);
        for (int i = 1; i < k; ++i) stride[i] = stride[i - 1] * radix[i - 1];
        int states = stride[k - 1] * radix[k - 1];

        std::vector<double> dist(states, 0.0);
        dist[0] = 1.0;
        for (const auto& node : h_.nodes) {
            if (node.kind == NodeKind::Leaf) continue;
            bool involved = false;
            Bitset node_mask(static_cast<int>(h_.graph.half_edges.size()));
            for (int he : node.internal_edges) node_mask.set(he);
            for (const auto& o : obs) involved |= node_mask.intersects(o.mask);
            if (!involved) continue;

            const NodeTrees& nt = node_trees(node.id);
            std::vector<double> local(states, 0.0);
            for (std::size_t t = 0; t < nt.trees.size(); ++t) {
                int idx = 0;
                for (int i = 0; i < k; ++i) {
                    int c = 0;
                    for (int he : nt.trees[t]) c += obs[i].mask.test(he);
                    if (obs[i].parity) c &= 1;
                    idx += stride[i] * c;
                }
                local[idx] += nt.prob[t];
            }
            bool all_parity = true;
            for (const auto& o : obs) all_parity &= o.parity;
            std::vector<std::pair<int, double>> ds, ls;
            for (int s = 0; s < states; ++s)
                if (dist[s] != 0.0) ds.emplace_back(s, dist[s]);
            for (int t = 0; t < states; ++t)
                if (local[t] != 0.0) ls.emplace_back(t, local[t]);
            std::vector<double> next(states, 0.0);
            for (auto [s, ps] : ds)
                for (auto [t, pt] : ls) {
                    int idx;
                    if (all_parity) {
                        idx = s ^ t;
                    } else {
                        idx = 0;
                        for (int i = 0; i < k; ++i) {
                            int a = (s / stride[i]) % radix[i];
                            int b = (t / stride[i]) % radix[i];
                            int c = obs[i].parity ? (a ^ b) : std::min(a + b, radix[i] - 1);
                            idx += stride[i] * c;
                        }
                    }
                    next[idx] += ps * pt;
                }
            dist = std::move(next);
        }
        return dist;
    }

    // Convenience wrappers ---------------------------------------------------
    double prob_all_even(const std::vector<Bitset>& cuts) {
        std::vector<Observable> obs;
        for (const auto& c : cuts) obs.push_back(parity_of(c));
        auto d = joint(obs);
        return d[0];
    }
    std::vector<double> count_pmf(const Bitset& mask) {
        auto d = joint({count_of(mask)});
        return d;
    }
    // P(|A|=a and |B|=b) for two edge sets.
    double prob_counts(const Bitset& A, int a, const Bitset& B, int b) {
        auto d = joint({count_of(A), count_of(B)});
        int ra = A.count() + 1;
        return d[a + ra * b];
    }

    Bitset edge_mask(std::initializer_list<int> edges) const {
        Bitset b(static_cast<int>(h_.graph.half_edges.size()));
        for (int e : edges) b.set(e);
        return b;
    }
    Bitset edge_mask(const std::vector<int>& edges) const {
        Bitset b(static_cast<int>(h_.graph.half_edges.size()));
        for (int e : edges) b.set(e);
        return b;
    }
    template <std::size_t N>
    Bitset edge_mask(const std::array<int, N>& edges) const {
        Bitset b(static_cast<int>(h_.graph.half_edges.size()));
        for (int e : edges) b.set(e);
        return b;
    }

    const CutHierarchy& hierarchy() const { return h_; }

private:
    const CutHierarchy& h_;
    const NodeDistributions& nd_;
    double cap_;
    std::map<int, NodeTrees> cache_;
};

// ---------------------------------------------------------------------------
// Even-at-last and per-edge probabilities.
// ---------------------------------------------------------------------------
inline bool even_at_last(const CutHierarchy& h, const OneTree& t, int he) {
    require(he != h.e_plus(), "e+ has no last cuts");
    const EdgeRole& r = h.roles[he];
    for (const auto& lc : r.last_cuts) {
        int c = 0;
        for (int e : lc.edges) c += t.contains(e);
        if (c & 1) return false;
    }
    return true;
}

constexpr double kGoodThreshold = 1.0 / 27.0;

struct EdgeAnalysis {
    struct PerEdge {
        double p = 0.0;          // probability of being even at last
        double p_lower = 0.0;    // lower confidence bound (Monte Carlo only)
        bool good = false;
        int klass = -1;          // 0 = bottom (beta), 1 = tau2, 2 = tau3, -1 = none
    };
    std::vector<PerEdge> edges;  // per half-edge; entry for e+ stays default
    bool exact = true;
    double good_p = kGoodThreshold;

    int good_top_not_higher(const CutHierarchy& h, int node) const {
        int c = 0;
        for (int e : h.nodes[node].boundary)
            if (e != h.e_plus() && edges[e].good && !h.roles[e].bottom &&
                !h.goes_higher(e, node))
                ++c;
        return c;
    }
};

namespace detail {

inline void assign_reduction_classes(const CutHierarchy& h, EdgeAnalysis& an) {
    for (const auto& he : h.graph.half_edges) {
        if (he.id == h.e_plus()) continue;
        auto& pe = an.edges[he.id];
        if (!pe.good) {
            pe.klass = -1;
            continue;
        }
        const EdgeRole& r = h.roles[he.id];
        if (r.bottom) {
            pe.klass = 0;
            continue;
        }
        int cu = an.good_top_not_higher(h, r.s_u);
        int cv = an.good_top_not_higher(h, r.s_v);
        pe.klass = (cu == 2 && cv == 2) ? 1 : 2;
    }
}

}  // namespace detail

// Exact per-edge even-at-last probabilities via per-node enumeration and
// cross-node independence.
inline EdgeAnalysis estimate_p_exact(const CutHierarchy& h, JointEngine& engine) {
    if (!engine.exact_feasible())
        throw StructuralError(
            "per-node tree enumeration exceeds the cap; use the Monte Carlo estimator");
    EdgeAnalysis an;
    an.edges.resize(h.graph.half_edges.size());
    an.exact = true;
    for (const auto& he : h.graph.half_edges) {
        if (he.id == h.e_plus()) continue;
        const EdgeRole& r = h.roles[he.id];
        double p = engine.prob_all_even(
            {engine.edge_mask(r.last_cuts[0].edges), engine.edge_mask(r.last_cuts[1].edges)});
        an.edges[he.id].p = p;
        an.edges[he.id].p_lower = p;
        an.edges[he.id].good = p >= kGoodThreshold - 1e-9;
    }
    detail::assign_reduction_classes(h, an);
    return an;
}

// Monte Carlo estimator with Wilson lower confidence bounds; an edge is
// declared good only when the 99% lower bound clears the threshold.
inline EdgeAnalysis estimate_p_monte_carlo(const CutHierarchy& h, const NodeDistributions& nd,
                                           int trials, RandomStream& rng) {
    EdgeAnalysis an;
    an.edges.resize(h.graph.half_edges.size());
    an.exact = false;
    std::vector<long long> hits(h.graph.half_edges.size(), 0);
    for (int t = 0; t < trials; ++t) {
        OneTree tree = sample_one_tree(h, nd, rng);
        for (const auto& he : h.graph.half_edges)
            if (he.id != h.e_plus() && even_at_last(h, tree, he.id)) ++hits[he.id];
    }
    const double z = 2.5758293035489004;  // 99% two-sided normal quantile
    for (const auto& he : h.graph.half_edges) {
        if (he.id == h.e_plus()) continue;
        double phat = double(hits[he.id]) / trials;
        double denom = 1.0 + z * z / trials;
        double centre = phat + z * z / (2.0 * trials);
        double margin = z * std::sqrt(phat * (1 - phat) / trials + z * z / (4.0 * trials * trials));
        an.edges[he.id].p = phat;
        an.edges[he.id].p_lower = (centre - margin) / denom;
        an.edges[he.id].good = an.edges[he.id].p_lower > kGoodThreshold;
    }
    detail::assign_reduction_classes(h, an);
    return an;
}

// ---------------------------------------------------------------------------
// The randomized O-join certificate (three-step construction) and the
// combined vector z = alpha y + (1-alpha) y'.
// ---------------------------------------------------------------------------
struct CertificateParams {
    double beta = 1.0 / 12;
    double tau2 = 7.0 / 120;
    double tau3 = 7.0 / 180;
    double alpha = 2160.0 / 2161;
    double p = kGoodThreshold;
    // Step 3 charges an edge the max share over its odd last cuts. With
    // literal_max the shares of even last cuts enter the max as well; that
    // variant stays feasible but overpays enough to break the per-edge
    // expectation bound, so it is off by default.
    bool literal_max = false;

    void check() const {
        require(tau3 <= tau2 + 1e-15 && tau2 <= beta + 1e-15 && beta <= 1.0 / 12 + 1e-15,
                "need tau3 <= tau2 <= beta <= 1/12");
        require(beta >= 5.0 * tau2 / 4 - 1e-15, "need beta >= 5*tau2/4");
        require(3.0 * tau3 <= 2.0 * tau2 + 1e-15, "need 3*tau3 <= 2*tau2");
        require(alpha > 0 && alpha <= 1, "alpha in (0,1]");
        require(p > 0 && p <= 1, "p in (0,1]");
    }
    double reduction(int klass) const {
        return klass == 0 ? beta : klass == 1 ? tau2 : klass == 2 ? tau3 : 0.0;
    }
};

// Static per-instance data for the certificate construction.
struct CertificateContext {
    CertificateParams params;
    EdgeAnalysis analysis;
    std::vector<Bitset> cut_masks;             // per enumerated min cut
    std::vector<std::vector<int>> cut_good;    // G_C: good edges with C among last cuts
    std::vector<std::array<int, 2>> last_ids;  // per edge: indices into min_cuts
    std::vector<int> class_rep;                // per edge: Bernoulli class (companions share)
    std::vector<int> class_order;              // distinct reps, ascending
};

inline CertificateContext prepare_certificates(const CutHierarchy& h, EdgeAnalysis analysis,
                                               const CertificateParams& params = {}) {
    params.check();
    CertificateContext ctx;
    ctx.params = params;
    ctx.analysis = std::move(analysis);
    int m = static_cast<int>(h.graph.half_edges.size());
    ctx.cut_masks.reserve(h.min_cuts.size());
    for (const auto& c : h.min_cuts) {
        Bitset mask(m);
        for (int e : c.boundary) mask.set(e);
        ctx.cut_masks.push_back(std::move(mask));
    }
    ctx.cut_good.assign(h.min_cuts.size(), {});
    ctx.last_ids.assign(m, {-1, -1});
    ctx.class_rep.assign(m, -1);
    for (int e = 0; e < m; ++e) {
        if (e == h.e_plus()) continue;
        const EdgeRole& r = h.roles[e];
        ctx.last_ids[e] = {r.last_cuts[0].cut_index, r.last_cuts[1].cut_index};
        if (!ctx.analysis.edges[e].good) continue;
        for (const auto& lc : r.last_cuts) ctx.cut_good[lc.cut_index].push_back(e);
        // Companions share one Bernoulli draw; e+ never draws, so its twin
        // forms a class of its own.
        ctx.class_rep[e] =
            r.bottom && r.companion != h.e_plus() ? std::min(e, r.companion) : e;
    }
    for (auto& v : ctx.cut_good) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    std::set<int> reps;
    for (int e = 0; e < m; ++e)
        if (ctx.class_rep[e] >= 0) reps.insert(ctx.class_rep[e]);
    ctx.class_order.assign(reps.begin(), reps.end());
    return ctx;
}

struct JoinVector {
    std::vector<double> y;
    std::vector<double> z;           // filled by combine_certificate
    std::vector<char> bernoulli;     // per edge (companions share a draw)
    std::vector<char> reduced;       // r_e applied
};

namespace detail {

// Step-3 increase for one good edge given both last-cut parities and the
// realized reductions. Shared between the per-trial construction and the
// exact expectation so the two cannot drift apart.
inline double increase_for_edge(bool odd0, bool odd1, double delta0, int gc0, double delta1,
                                int gc1, bool literal_max) {
    if (!odd0 && !odd1) return 0.0;
    double s0 = gc0 > 0 ? delta0 / gc0 : 0.0;
    double s1 = gc1 > 0 ? delta1 / gc1 : 0.0;
    if (literal_max) return std::max(s0, s1);
    double inc = 0.0;
    if (odd0) inc = std::max(inc, s0);
    if (odd1) inc = std::max(inc, s1);
    return inc;
}

}  // namespace detail

// The three-step construction: start at 1/4 everywhere; reduce good edges
// that are even at last and won their Bernoulli draw; compensate odd cuts by
// spreading the reduction over the good edges whose last cut they are.
inline JoinVector construct_y(const CutHierarchy& h, const CertificateContext& ctx,
                              const OneTree& tree, RandomStream& bernoulli_rng) {
    int m = static_cast<int>(h.graph.half_edges.size());
    JoinVector jv;
    jv.y.assign(m, 0.25);
    jv.bernoulli.assign(m, 0);
    jv.reduced.assign(m, 0);

    // One draw per companion class, in ascending class order; success p/p_e.
    std::map<int, char> class_draw;
    for (int rep : ctx.class_order) {
        double pe = ctx.analysis.edges[rep].p;
        double q = pe > 0 ? std::min(1.0, ctx.params.p / pe) : 0.0;
        class_draw[rep] = bernoulli_rng.bernoulli(q) ? 1 : 0;
    }
    for (int e = 0; e < m; ++e)
        if (ctx.class_rep[e] >= 0) jv.bernoulli[e] = class_draw[ctx.class_rep[e]];

    // Step 2: reductions.
    for (int e = 0; e < m; ++e) {
        if (ctx.class_rep[e] < 0 || !jv.bernoulli[e]) continue;
        if (!even_at_last(h, tree, e)) continue;
        jv.reduced[e] = 1;
        jv.y[e] -= ctx.params.reduction(ctx.analysis.edges[e].klass);
    }

    // Step 3: per-cut deficits and increases.
    int ncuts = static_cast<int>(h.min_cuts.size());
    std::vector<double> delta(ncuts, 0.0);
    std::vector<char> odd(ncuts, 0);
    for (int c = 0; c < ncuts; ++c) {
        odd[c] = tree.edges.intersection_parity_odd(ctx.cut_masks[c]);
        for (int e : h.min_cuts[c].boundary)
            if (jv.reduced[e]) delta[c] += ctx.params.reduction(ctx.analysis.edges[e].klass);
        if (odd[c] && delta[c] > 0)
            HITSP_ASSERT(!ctx.cut_good[c].empty(),
                         "an odd reduced cut must have good edges to charge");
    }
    for (int e = 0; e < m; ++e) {
        if (e == h.e_plus() || !ctx.analysis.edges[e].good) continue;
        auto [c0, c1] = ctx.last_ids[e];
        double inc = detail::increase_for_edge(odd[c0], odd[c1], delta[c0],
                                               static_cast<int>(ctx.cut_good[c0].size()),
                                               delta[c1],
                                               static_cast<int>(ctx.cut_good[c1].size()),
                                               ctx.params.literal_max);
        if (inc > 0) {
            HITSP_ASSERT(!jv.reduced[e], "an increased edge cannot also be reduced");
            jv.y[e] += inc;
        }
    }
    return jv;
}

inline void combine_certificate(const CutHierarchy& h, const CertificateContext& ctx,
                                JoinVector& jv) {
    int m = static_cast<int>(h.graph.half_edges.size());
    jv.z.assign(m, 0.0);
    double a = ctx.params.alpha;
    for (int e = 0; e < m; ++e) {
        double yprime = (e != h.e_plus() && ctx.analysis.edges[e].good) ? 0.5 : 1.0 / 6.0;
        jv.z[e] = a * jv.y[e] + (1 - a) * yprime;
    }
}

// ---------------------------------------------------------------------------
// Feasibility of a fractional O-join vector against all min cuts with odd
// tree intersection; values >= 1/6 settle every non-min cut (those have at
// least six edges).
// ---------------------------------------------------------------------------
struct FeasibilityReport {
    struct Violation {
        int cut = -1;
        double value = 0.0;
        std::string what;
    };
    std::vector<Violation> violations;
    bool feasible() const { return violations.empty(); }
};

inline FeasibilityReport verify_feasibility(const CutHierarchy& h,
                                            const CertificateContext& ctx, const OneTree& tree,
                                            const std::vector<double>& y, double tol = 1e-9) {
    FeasibilityReport rep;
    for (std::size_t e = 0; e < y.size(); ++e)
        if (y[e] < 1.0 / 6.0 - tol) {
            rep.violations.push_back(
                {-1, y[e], "edge " + std::to_string(e) + " below 1/6; non-min cuts unsafe"});
            break;
        }
    for (std::size_t c = 0; c < h.min_cuts.size(); ++c) {
        if (!tree.edges.intersection_parity_odd(ctx.cut_masks[c])) continue;
        double total = 0;
        for (int e : h.min_cuts[c].boundary) total += y[e];
        if (total < 1.0 - tol)
            rep.violations.push_back({static_cast<int>(c), total,
                                      "odd min cut received y below 1"});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Exact expectations of y_e and z_e over (tree, Bernoulli) outcomes.
// ---------------------------------------------------------------------------
struct ExpectationReport {
    std::vector<double> ey;  // per half-edge
    std::vector<double> ez;
};

inline ExpectationReport expected_certificate(const CutHierarchy& h, JointEngine& engine,
                                              const CertificateContext& ctx) {
    int m = static_cast<int>(h.graph.half_edges.size());
    ExpectationReport rep;
    rep.ey.assign(m, 0.25);
    for (int e = 0; e < m; ++e) {
        if (e == h.e_plus()) continue;
        if (!ctx.analysis.edges[e].good) continue;  // untouched, E[y] = 1/4
        auto [c0, c1] = ctx.last_ids[e];

        // Relevant good edges: those on either last cut (they drive the
        // deficits); each contributes its own two last cuts to the joint law.
        std::vector<int> relevant;
        for (int f : h.min_cuts[c0].boundary)
            if (f != h.e_plus() && ctx.analysis.edges[f].good) relevant.push_back(f);
        for (int f : h.min_cuts[c1].boundary)
            if (f != h.e_plus() && ctx.analysis.edges[f].good) relevant.push_back(f);
        std::sort(relevant.begin(), relevant.end());
        relevant.erase(std::unique(relevant.begin(), relevant.end()), relevant.end());

        std::vector<int> cut_ids{c0, c1};
        for (int f : relevant) {
            cut_ids.push_back(ctx.last_ids[f][0]);
            cut_ids.push_back(ctx.last_ids[f][1]);
        }
        std::sort(cut_ids.begin(), cut_ids.end());
        cut_ids.erase(std::unique(cut_ids.begin(), cut_ids.end()), cut_ids.end());
        std::map<int, int> cut_pos;
        for (std::size_t i = 0; i < cut_ids.size(); ++i) cut_pos[cut_ids[i]] = static_cast<int>(i);

        std::vector<Observable> obs;
        for (int c : cut_ids) obs.push_back(parity_of(ctx.cut_masks[c]));
        auto dist = engine.joint(obs);

        // Bernoulli classes among the relevant edges.
        std::vector<int> classes;
        for (int f : relevant) classes.push_back(ctx.class_rep[f]);
        std::sort(classes.begin(), classes.end());
        classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
        int nc = static_cast<int>(classes.size());
        std::map<int, int> class_pos;
        for (int i = 0; i < nc; ++i) class_pos[classes[i]] = i;
        std::vector<double> qs(nc);
        for (int i = 0; i < nc; ++i) {
            double pe = ctx.analysis.edges[classes[i]].p;
            qs[i] = pe > 0 ? std::min(1.0, ctx.params.p / pe) : 0.0;
        }

        double ey = 0.0;
        for (std::size_t s = 0; s < dist.size(); ++s) {
            if (dist[s] == 0.0) continue;
            auto odd_of = [&](int cut) { return (s >> cut_pos[cut]) & 1; };
            std::vector<char> eal(relevant.size());
            for (std::size_t i = 0; i < relevant.size(); ++i)
                eal[i] = !odd_of(ctx.last_ids[relevant[i]][0]) &&
                         !odd_of(ctx.last_ids[relevant[i]][1]);
            double inner = 0.0;
            for (std::uint64_t bmask = 0; bmask < (std::uint64_t{1} << nc); ++bmask) {
                double pb = 1.0;
                for (int i = 0; i < nc; ++i)
                    pb *= ((bmask >> i) & 1) ? qs[i] : 1 - qs[i];
                if (pb == 0.0) continue;
                double d0 = 0, d1 = 0;
                bool e_reduced = false;
                for (std::size_t i = 0; i < relevant.size(); ++i) {
                    int f = relevant[i];
                    bool b = (bmask >> class_pos[ctx.class_rep[f]]) & 1;
                    if (!eal[i] || !b) continue;
                    // f contributes to a cut's deficit iff it lies on that cut.
                    double r = ctx.params.reduction(ctx.analysis.edges[f].klass);
                    if (ctx.cut_masks[c0].test(f)) d0 += r;
                    if (ctx.cut_masks[c1].test(f)) d1 += r;
                    if (f == e) e_reduced = true;
                }
                double yv = 0.25;
                if (e_reduced) yv -= ctx.params.reduction(ctx.analysis.edges[e].klass);
                double inc = detail::increase_for_edge(
                    odd_of(c0), odd_of(c1), d0, static_cast<int>(ctx.cut_good[c0].size()), d1,
                    static_cast<int>(ctx.cut_good[c1].size()), ctx.params.literal_max);
                yv += inc;
                inner += pb * yv;
            }
            ey += dist[s] * inner;
        }
        rep.ey[e] = ey;
    }
    rep.ez.assign(m, 0.0);
    double a = ctx.params.alpha;
    for (int e = 0; e < m; ++e) {
        double yprime = (e != h.e_plus() && ctx.analysis.edges[e].good) ? 0.5 : 1.0 / 6.0;
        rep.ez[e] = a * rep.ey[e] + (1 - a) * yprime;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Hoeffding extremes: optimize E[g(B_1+...+B_m)] over independent Bernoulli
// profiles with values in {0, x, 1}, a prescribed number of forced ones and a
// mean range. Exact over the (n1, nx) grid, with endpoint evaluation plus
// golden-section refinement in x.
// ---------------------------------------------------------------------------
inline std::vector<double> bernoulli_pmf(const std::vector<double>& probs) {
    std::vector<double> pmf{1.0};
    for (double p : probs) {
        std::vector<double> next(pmf.size() + 1, 0.0);
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            next[k] += pmf[k] * (1 - p);
            next[k + 1] += pmf[k] * p;
        }
        pmf = std::move(next);
    }
    return pmf;
}

struct BernoulliExtreme {
    std::vector<double> profile;
    double value = 0.0;
};

inline BernoulliExtreme bernoulli_extremes(
    int m, int fixed_ones, double mean_lo, double mean_hi,
    const std::function<double(const std::vector<double>&)>& objective, bool minimize) {
    require(m >= 1 && fixed_ones >= 0 && fixed_ones <= m, "profile shape");
    BernoulliExtreme best;
    double best_val = minimize ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
    auto consider = [&](int n1, int nx, double x) {
        std::vector<double> probs(m, 0.0);
        int idx = 0;
        for (int i = 0; i < fixed_ones + n1; ++i) probs[idx++] = 1.0;
        for (int i = 0; i < nx; ++i) probs[idx++] = x;
        double v = objective(bernoulli_pmf(probs));
        if ((minimize && v < best_val) || (!minimize && v > best_val)) {
            best_val = v;
            best = {probs, v};
        }
    };
    int free = m - fixed_ones;
    for (int n1 = 0; n1 <= free; ++n1) {
        double base = fixed_ones + n1;
        if (base >= mean_lo - 1e-12 && base <= mean_hi + 1e-12) consider(n1, 0, 0.0);
        for (int nx = 1; nx <= free - n1; ++nx) {
            double xlo = std::max(0.0, (mean_lo - base) / nx);
            double xhi = std::min(1.0, (mean_hi - base) / nx);
            if (xlo > xhi + 1e-15) continue;
            consider(n1, nx, xlo);
            consider(n1, nx, xhi);
            if (xhi - xlo > 1e-13) {
                // golden-section refinement over the interior
                auto eval = [&](double x) {
                    std::vector<double> probs(m, 0.0);
                    int idx = 0;
                    for (int i = 0; i < fixed_ones + n1; ++i) probs[idx++] = 1.0;
                    for (int i = 0; i < nx; ++i) probs[idx++] = x;
                    double v = objective(bernoulli_pmf(probs));
                    return minimize ? v : -v;
                };
                const int kGrid = 256;
                double gx = xlo, gv = eval(xlo);
                for (int i = 1; i <= kGrid; ++i) {
                    double x = xlo + (xhi - xlo) * i / kGrid;
                    double v = eval(x);
                    if (v < gv) {
                        gv = v;
                        gx = x;
                    }
                }
                double lo = std::max(xlo, gx - (xhi - xlo) / kGrid);
                double hi = std::min(xhi, gx + (xhi - xlo) / kGrid);
                const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
                double a = lo, b = hi;
                double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
                double f1 = eval(x1), f2 = eval(x2);
                for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
                    if (f1 < f2) {
                        b = x2;
                        x2 = x1;
                        f2 = f1;
                        x1 = b - phi * (b - a);
                        f1 = eval(x1);
                    } else {
                        a = x1;
                        x1 = x2;
                        f1 = f2;
                        x2 = a + phi * (b - a);
                        f2 = eval(x2);
                    }
                }
                consider(n1, nx, 0.5 * (a + b));
            }
        }
    }
    return best;
}

// Objective helpers.
inline std::function<double(const std::vector<double>&)> prob_sum_equals(int k) {
    return [k](const std::vector<double>& pmf) {
        return k < static_cast<int>(pmf.size()) ? pmf[k] : 0.0;
    };
}
inline double prob_even_from_pmf(const std::vector<double>& pmf) {
    double s = 0;
    for (std::size_t i = 0; i < pmf.size(); i += 2) s += pmf[i];
    return s;
}

// All roots of a real polynomial (ascending coefficients) via the companion
// matrix; used to check real-rootedness of rank-sequence generating
// polynomials.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
    while (!coeffs.empty() && std::abs(coeffs.back()) < 1e-300) coeffs.pop_back();
    int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) C(i, deg - 1) = -coeffs[i] / coeffs[deg];
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()[i]);
    return roots;
}

}  // namespace hitsp

#endif  // HITSP_ANALYSIS_HPP
