#ifndef HITSP_DRIVER_HPP
#define HITSP_DRIVER_HPP

#include <atomic>
#include <thread>

#include "hitsp/generators.hpp"
#include "hitsp/lemmas.hpp"

namespace hitsp {

struct RunConfig {
    std::uint64_t seed = 0;
    int trials = 1000;
    double epsilon = 1e-3;
    bool monte_carlo = false;   // p_e estimation method
    int mc_trials = 100000;     // samples for Monte Carlo estimation
    int threads = 0;               // 0 = hardware concurrency
    bool literal_increase = false;  // step-3 shares from even last cuts too
};

struct TrialRecord {
    int trial = 0;
    double tree_cost = 0.0;
    double join_cost = 0.0;
    double tour_cost = 0.0;
    double ratio = 0.0;
    int odd_count = 0;
    bool y_feasible = true;
    bool z_feasible = true;
    bool bridge_ok = true;      // join <= z-cost and join <= c(x)/2
    double z_cost = 0.0;        // sum z_e c_e
};

struct SolveSummary {
    double mean_tree = 0, mean_join = 0, mean_tour = 0;
    double mean_ratio = 0, stddev_ratio = 0, max_ratio = 0;
    double ci99_lo = 0, ci99_hi = 0;
    int violations = 0;
};

struct SolveResult {
    Instance instance;
    std::vector<TrialRecord> records;
    SolveSummary summary;
};

// Everything derived from the instance once, shared immutably by all trials.
struct Prepared {
    Instance inst;
    CutHierarchy hierarchy;
    NodeDistributions dists;
    CertificateContext cert;
};

inline Prepared prepare(const HalfIntegralSolution& raw, const RunConfig& cfg) {
    Prepared p;
    p.inst = normalize(raw);
    p.hierarchy = build_hierarchy(p.inst.graph);
    FitOptions fit;
    fit.epsilon = cfg.epsilon;
    p.dists = fit_node_distributions(p.hierarchy, fit);
    EdgeAnalysis analysis;
    if (cfg.monte_carlo) {
        RandomStream rng(cfg.seed, 0, "analysis");
        analysis = estimate_p_monte_carlo(p.hierarchy, p.dists, cfg.mc_trials, rng);
    } else {
        JointEngine engine(p.hierarchy, p.dists);
        analysis = estimate_p_exact(p.hierarchy, engine);
    }
    CertificateParams params;
    params.literal_max = cfg.literal_increase;
    p.cert = prepare_certificates(p.hierarchy, std::move(analysis), params);
    return p;
}

inline TrialRecord run_trial(const Prepared& p, std::uint64_t seed, int trial) {
    TrialRecord rec;
    rec.trial = trial;
    RandomStream tree_rng(seed, static_cast<std::uint64_t>(trial), "tree");
    RandomStream bern_rng(seed, static_cast<std::uint64_t>(trial), "bernoulli");

    OneTree tree = sample_one_tree(p.hierarchy, p.dists, tree_rng);
    rec.tree_cost = tree.cost;
    rec.odd_count = static_cast<int>(tree.odd_vertices.size());

    JoinSolution join = min_ojoin(p.inst.metric, tree.odd_vertices);
    rec.join_cost = join.cost;

    Tour tour = shortcut(p.inst.graph, tree, join, p.inst.metric);
    HITSP_ASSERT(tour.cost <= tree.cost + join.cost + 1e-9,
                 "shortcut tour cost bounded by walk cost");
    Tour final_tour = collapse_split(tour, p.inst.solution, p.inst.metric);
    rec.tour_cost = final_tour.cost;
    rec.ratio = rec.tour_cost / p.inst.cx;

    JoinVector jv = construct_y(p.hierarchy, p.cert, tree, bern_rng);
    combine_certificate(p.hierarchy, p.cert, jv);
    rec.y_feasible = verify_feasibility(p.hierarchy, p.cert, tree, jv.y).feasible();
    rec.z_feasible = verify_feasibility(p.hierarchy, p.cert, tree, jv.z).feasible();
    for (std::size_t e = 0; e < jv.z.size(); ++e)
        rec.z_cost += jv.z[e] * p.hierarchy.graph.half_edges[e].cost;
    rec.bridge_ok = join.cost <= rec.z_cost + 1e-9 && join.cost <= p.inst.cx / 2 + 1e-9;
    return rec;
}

inline SolveResult solve_prepared(const Prepared& p, const RunConfig& cfg) {
    SolveResult res;
    res.instance = p.inst;
    res.records.resize(cfg.trials);
    int nthreads = cfg.threads > 0 ? cfg.threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<int>(nthreads, std::max(1, cfg.trials));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int t = next.fetch_add(1);
            if (t >= cfg.trials) return;
            res.records[t] = run_trial(p, cfg.seed, t);
        }
    };
    std::vector<std::thread> pool;
    for (int i = 1; i < nthreads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    auto& s = res.summary;
    double sum_r = 0, sum_r2 = 0;
    for (const auto& r : res.records) {
        s.mean_tree += r.tree_cost;
        s.mean_join += r.join_cost;
        s.mean_tour += r.tour_cost;
        sum_r += r.ratio;
        sum_r2 += r.ratio * r.ratio;
        s.max_ratio = std::max(s.max_ratio, r.ratio);
        if (!r.y_feasible || !r.z_feasible || !r.bridge_ok) ++s.violations;
    }
    int n = cfg.trials;
    s.mean_tree /= n;
    s.mean_join /= n;
    s.mean_tour /= n;
    s.mean_ratio = sum_r / n;
    double var = n > 1 ? std::max(0.0, (sum_r2 - sum_r * sum_r / n) / (n - 1)) : 0.0;
    s.stddev_ratio = std::sqrt(var);
    double half = 2.5758293035489004 * s.stddev_ratio / std::sqrt(double(n));
    s.ci99_lo = s.mean_ratio - half;
    s.ci99_hi = s.mean_ratio + half;
    return res;
}

inline SolveResult solve_instance(const HalfIntegralSolution& raw, const RunConfig& cfg) {
    Prepared p = prepare(raw, cfg);
    return solve_prepared(p, cfg);
}

// ---------------------------------------------------------------------------
// Serialization. JSON and CSV share the same double formatter, so both carry
// identical numeric content.
// ---------------------------------------------------------------------------
inline nlohmann::json solve_to_json(const SolveResult& res, const RunConfig& cfg) {
    nlohmann::json j;
    j["n"] = res.instance.solution.n;
    j["cx"] = res.instance.cx;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["epsilon"] = cfg.epsilon;
    j["records"] = nlohmann::json::array();
    for (const auto& r : res.records)
        j["records"].push_back({{"trial", r.trial},
                                {"treeCost", r.tree_cost},
                                {"joinCost", r.join_cost},
                                {"tourCost", r.tour_cost},
                                {"ratio", r.ratio},
                                {"oddCount", r.odd_count}});
    const auto& s = res.summary;
    j["summary"] = {{"meanTreeCost", s.mean_tree}, {"meanJoinCost", s.mean_join},
                    {"meanTourCost", s.mean_tour}, {"meanRatio", s.mean_ratio},
                    {"stddevRatio", s.stddev_ratio}, {"maxRatio", s.max_ratio},
                    {"ci99", {s.ci99_lo, s.ci99_hi}}, {"violations", s.violations}};
    return j;
}

inline std::string solve_to_csv(const SolveResult& res, const RunConfig& cfg) {
    std::ostringstream os;
    os << "trial,treeCost,joinCost,tourCost,ratio,oddCount\n";
    for (const auto& r : res.records)
        os << r.trial << ',' << format_double(r.tree_cost) << ',' << format_double(r.join_cost)
           << ',' << format_double(r.tour_cost) << ',' << format_double(r.ratio) << ','
           << r.odd_count << '\n';
    const auto& s = res.summary;
    os << "# meanTreeCost=" << format_double(s.mean_tree)
       << " meanJoinCost=" << format_double(s.mean_join)
       << " meanTourCost=" << format_double(s.mean_tour)
       << " meanRatio=" << format_double(s.mean_ratio)
       << " stddevRatio=" << format_double(s.stddev_ratio)
       << " maxRatio=" << format_double(s.max_ratio) << " violations=" << s.violations
       << " seed=" << cfg.seed << "\n";
    return os.str();
}

}  // namespace hitsp

#endif  // HITSP_DRIVER_HPP
