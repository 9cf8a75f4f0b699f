#ifndef HITSP_LEMMAS_HPP
#define HITSP_LEMMAS_HPP

#include "hitsp/analysis.hpp"

namespace hitsp {

// ---------------------------------------------------------------------------
// Verification of the probabilistic guarantees behind the certificate
// construction, by exact enumeration over the per-node tree distributions
// (Monte Carlo fallback when enumeration is infeasible). Every check carries
// its witness, the computed value and the bound it must clear.
// ---------------------------------------------------------------------------
struct LemmaCheck {
    std::string lemma;
    std::string witness;
    double value = 0.0;
    double bound = 0.0;
    bool upper = false;       // value must stay below the bound instead of above
    bool pass = false;
    bool statistical = false;
};

struct LemmaReport {
    std::vector<LemmaCheck> checks;
    bool statistical = false;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
    nlohmann::json to_json() const {
        nlohmann::json j;
        j["allPass"] = all_pass();
        j["statistical"] = statistical;
        j["checks"] = nlohmann::json::array();
        std::map<std::string, std::pair<int, int>> tally;
        for (const auto& c : checks) {
            j["checks"].push_back({{"lemma", c.lemma},
                                   {"witness", c.witness},
                                   {"value", c.value},
                                   {"bound", c.bound},
                                   {"direction", c.upper ? "<=" : ">="},
                                   {"pass", c.pass},
                                   {"statistical", c.statistical}});
            auto& t = tally[c.lemma];
            ++t.first;
            t.second += c.pass;
        }
        j["summary"] = nlohmann::json::object();
        for (const auto& [lemma, t] : tally)
            j["summary"][lemma] = {{"checks", t.first}, {"passed", t.second}};
        return j;
    }
};

struct LemmaOptions {
    bool monte_carlo = false;
    int trials = 100000;
    std::uint64_t seed = 1;
    double tol = 1e-7;  // slack for exact comparisons (fit residue + roundoff)
};

namespace detail {

inline std::string edge_name(const SupportGraph& g, int he) {
    return "e" + std::to_string(he) + "(" + std::to_string(g.half_edges[he].u) + "," +
           std::to_string(g.half_edges[he].v) + ")";
}

inline std::string cut_name(const Bitset& side) {
    std::string s = "{";
    for (int v : side.members()) s += std::to_string(v) + ",";
    if (s.size() > 1) s.pop_back();
    return s + "}";
}

}  // namespace detail

inline LemmaReport lemma_suite(const CutHierarchy& h, const NodeDistributions& nd,
                               const LemmaOptions& opt = {}) {
    LemmaReport rep;
    const SupportGraph& g = h.graph;
    const int m = static_cast<int>(g.half_edges.size());
    const double tol = opt.tol;

    JointEngine engine(h, nd);
    bool exact = !opt.monte_carlo && engine.exact_feasible();
    rep.statistical = !exact;

    // Monte Carlo state, shared by the estimators below.
    std::vector<OneTree> samples;
    if (!exact) {
        RandomStream rng(opt.seed, 0, "lemma-mc");
        samples.reserve(opt.trials);
        for (int t = 0; t < opt.trials; ++t) samples.push_back(sample_one_tree(h, nd, rng));
    }
    double stat_slack = exact ? 0.0 : 4.0 * std::sqrt(0.25 / std::max(1, opt.trials));

    auto prob_all_even = [&](const std::vector<Bitset>& cut_masks) {
        if (exact) return engine.prob_all_even(cut_masks);
        long long hit = 0;
        for (const auto& t : samples) {
            bool all = true;
            for (const auto& c : cut_masks) all &= !t.edges.intersection_parity_odd(c);
            hit += all;
        }
        return double(hit) / samples.size();
    };
    auto count_pmf = [&](const Bitset& mask) {
        if (exact) return engine.count_pmf(mask);
        std::vector<double> pmf(mask.count() + 1, 0.0);
        for (const auto& t : samples) pmf[t.edges.intersection_count(mask)] += 1.0;
        for (double& x : pmf) x /= samples.size();
        return pmf;
    };
    auto prob_joint_one_one = [&](const Bitset& A, const Bitset& B) {
        if (exact) return engine.prob_counts(A, 1, B, 1);
        long long hit = 0;
        for (const auto& t : samples)
            hit += t.edges.intersection_count(A) == 1 && t.edges.intersection_count(B) == 1;
        return double(hit) / samples.size();
    };
    auto prob_pair = [&](int a, int b) {  // P(a in T and b in T)
        if (exact) {
            auto d = engine.joint({count_of(engine.edge_mask({a})),
                                   count_of(engine.edge_mask({b}))});
            return d[3];
        }
        long long hit = 0;
        for (const auto& t : samples) hit += t.contains(a) && t.contains(b);
        return double(hit) / samples.size();
    };
    auto marginal = [&](int e) {
        if (exact) return engine.count_pmf(engine.edge_mask({e}))[1];
        long long hit = 0;
        for (const auto& t : samples) hit += t.contains(e);
        return double(hit) / samples.size();
    };
    auto even_at_last_prob = [&](int e) {
        const EdgeRole& r = h.roles[e];
        return prob_all_even(
            {engine.edge_mask(r.last_cuts[0].edges), engine.edge_mask(r.last_cuts[1].edges)});
    };

    auto push = [&](std::string lemma, std::string witness, double value, double bound,
                    bool upper = false) {
        LemmaCheck c;
        c.lemma = std::move(lemma);
        c.witness = std::move(witness);
        c.value = value;
        c.bound = bound;
        c.upper = upper;
        c.statistical = !exact;
        double slack = tol + stat_slack;
        c.pass = upper ? value <= bound + slack : value >= bound - slack;
        rep.checks.push_back(std::move(c));
    };

    // --- Every min cut is even with probability at least 13/27. -------------
    for (const auto& cut : h.min_cuts) {
        Bitset mask(m);
        for (int e : cut.boundary) mask.set(e);
        push("min-cut-even", detail::cut_name(cut.side), prob_all_even({mask}), 13.0 / 27.0);
    }

    // --- Bottom edges are even at last with probability at least 3/16. ------
    for (const auto& he : g.half_edges) {
        if (he.id == g.e_plus || !h.roles[he.id].bottom) continue;
        push("bottom-edge-good", detail::edge_name(g, he.id), even_at_last_prob(he.id),
             3.0 / 16.0);
    }

    // --- Every min cut carries an edge with p_e >= 1/27. ---------------------
    for (const auto& cut : h.min_cuts) {
        double best = 0;
        int arg = -1;
        for (int e : cut.boundary) {
            if (e == g.e_plus) continue;
            double p = even_at_last_prob(e);
            if (p > best) {
                best = p;
                arg = e;
            }
        }
        push("min-cut-has-good-edge",
             detail::cut_name(cut.side) + " via " + detail::edge_name(g, arg), best,
             kGoodThreshold);
    }

    // --- Critical cuts with exactly one edge going higher: at least two of
    // --- the other three edges have p >= 1/16. -------------------------------
    for (const auto& nd_ : h.nodes) {
        if (nd_.id == h.root_id || nd_.kind == NodeKind::RootCycle) continue;
        std::vector<int> higher, rest;
        bool has_eplus = false;
        for (int e : nd_.boundary) {
            if (e == g.e_plus) has_eplus = true;
            else if (h.goes_higher(e, nd_.id)) higher.push_back(e);
            else rest.push_back(e);
        }
        if (has_eplus || higher.size() != 1) continue;
        std::vector<double> ps;
        for (int e : rest) ps.push_back(even_at_last_prob(e));
        std::sort(ps.rbegin(), ps.rend());
        push("one-higher-two-good", "node " + std::to_string(nd_.id),
             ps.size() >= 2 ? ps[1] : 0.0, 1.0 / 16.0);
    }

    // --- Three edges covering a cut: P(exactly 1) >= 1/2, P(exactly 2) >= 3/8.
    for (const auto& nd_ : h.nodes) {
        if (nd_.id == h.root_id || nd_.kind == NodeKind::RootCycle) continue;
        for (int x : nd_.boundary) {
            if (x == g.e_plus || !h.goes_higher(x, nd_.id)) continue;
            Bitset A(m);
            for (int e : nd_.boundary)
                if (e != x) A.set(e);
            auto pmf = count_pmf(A);
            if (pmf[0] > 1e-12 + stat_slack) continue;  // premise P(X>=1)=1 not met
            std::string w = "node " + std::to_string(nd_.id) + " minus " +
                            detail::edge_name(g, x);
            push("covered-triple-one", w, pmf[1], 0.5);
            push("covered-triple-two", w, pmf[2], 3.0 / 8.0);
        }
    }

    // --- Pairs with expectation 1: P(exactly one) >= 3/8; and the two
    // --- partner pairs of a cycle cut are simultaneously split with
    // --- probability >= 3/16. ------------------------------------------------
    for (const auto& nd_ : h.nodes) {
        if (nd_.kind != NodeKind::CycleCut && nd_.kind != NodeKind::RootCycle) continue;
        std::vector<std::pair<std::string, std::array<int, 2>>> pairs;
        for (std::size_t rix = 0; rix < nd_.rungs.size(); ++rix)
            pairs.push_back({"rung" + std::to_string(rix), nd_.rungs[rix]});
        if (nd_.kind == NodeKind::CycleCut) {
            pairs.push_back({"wpair0", nd_.partner_pairs[0]});
            pairs.push_back({"wpair1", nd_.partner_pairs[1]});
        }
        for (const auto& [label, pr] : pairs) {
            if (pr[0] == g.e_plus || pr[1] == g.e_plus) continue;  // forced rung
            Bitset A = engine.edge_mask({pr[0], pr[1]});
            auto pmf = count_pmf(A);
            double mean = pmf[1] + 2 * pmf[2];
            if (mean < 0.5 - tol - stat_slack || mean > 1.5 + tol + stat_slack) continue;
            push("pair-split", "node " + std::to_string(nd_.id) + " " + label, pmf[1],
                 3.0 / 8.0);
        }
        if (nd_.kind == NodeKind::CycleCut) {
            Bitset A = engine.edge_mask(nd_.partner_pairs[0]);
            Bitset B = engine.edge_mask(nd_.partner_pairs[1]);
            push("partner-pairs-split", "node " + std::to_string(nd_.id),
                 prob_joint_one_one(A, B), 3.0 / 16.0);
        }
    }

    // --- Conditioned correlation: for a cut's edges, all but one of the
    // --- remaining conditionals P(f in T | x in T) land in [1/4, 1/2].
    // --- Requires marginal 1/2 on the whole cut, so cuts through e+ and its
    // --- forced/excluded twin are not witnesses. ------------------------------
    int eplus_twin = h.e_plus_partner();
    for (const auto& nd_ : h.nodes) {
        if (nd_.id == h.root_id || nd_.kind == NodeKind::RootCycle) continue;
        bool touches_forced = false;
        for (int e : nd_.boundary) touches_forced |= e == g.e_plus || e == eplus_twin;
        if (touches_forced) continue;
        for (int x : nd_.boundary) {
            double px = marginal(x);
            if (px < 0.05) continue;
            int in_range = 0, total = 0;
            for (int f : nd_.boundary) {
                if (f == x) continue;
                ++total;
                double cond = prob_pair(x, f) / px;
                if (cond >= 0.25 - tol - stat_slack && cond <= 0.5 + tol + stat_slack)
                    ++in_range;
            }
            push("conditional-quarter-half",
                 "node " + std::to_string(nd_.id) + " given " + detail::edge_name(g, x),
                 in_range, total - 1);
        }
    }

    // --- Even-at-last propagates along a cycle's rungs. ----------------------
    for (const auto& nd_ : h.nodes) {
        if (nd_.kind != NodeKind::CycleCut || nd_.rungs.empty()) continue;
        int first = nd_.rungs.front()[0];
        for (std::size_t rix = 1; rix < nd_.rungs.size(); ++rix) {
            int other = nd_.rungs[rix][0];
            const auto& ra = h.roles[first];
            const auto& rb = h.roles[other];
            double p_both = prob_all_even(
                {engine.edge_mask(ra.last_cuts[0].edges), engine.edge_mask(ra.last_cuts[1].edges),
                 engine.edge_mask(rb.last_cuts[0].edges),
                 engine.edge_mask(rb.last_cuts[1].edges)});
            double p_first = prob_all_even({engine.edge_mask(ra.last_cuts[0].edges),
                                            engine.edge_mask(ra.last_cuts[1].edges)});
            push("cycle-even-propagation",
                 "node " + std::to_string(nd_.id) + " rung0 vs rung" + std::to_string(rix),
                 std::abs(p_both - p_first), 0.0, /*upper=*/true);
        }
    }

    // --- Hoeffding extremal profiles (analytic, independent of the instance).
    {
        auto pmf = bernoulli_pmf({1.0, 0.25, 0.25});
        push("extremal-profile-9/16", "(1,1/4,1/4) P(sum=1)", pmf[1], 9.0 / 16.0);
        auto min1 = bernoulli_extremes(3, 1, 1.5, 1.5, prob_sum_equals(1), true);
        push("extremal-min-P1", "m=3 one forced, mean 3/2", min1.value, 0.5);
        auto min2 = bernoulli_extremes(3, 1, 1.5, 1.5, prob_sum_equals(2), true);
        push("extremal-min-P2", "m=3 one forced, mean 3/2", min2.value, 3.0 / 8.0);
        auto min3 = bernoulli_extremes(2, 0, 0.5, 1.5, prob_sum_equals(1), true);
        push("extremal-min-pair", "m=2 mean in [1/2,3/2]", min3.value, 3.0 / 8.0);
        auto min4 = bernoulli_extremes(4, 1, 2.0, 2.0,
                                       [](const std::vector<double>& p) {
                                           return prob_even_from_pmf(p);
                                       },
                                       true);
        push("extremal-min-even", "m=4 one forced, mean 2", min4.value, 13.0 / 27.0);
    }

    return rep;
}

}  // namespace hitsp

#endif  // HITSP_LEMMAS_HPP
