// Command-line front end: instance generation, validation, hierarchy
// inspection, sampling, solving, lemma verification and benchmarks.
//
// Exit codes: 0 = success / all checks pass, 1 = violation found,
// 2 = usage or input error.

#include <iostream>

#include <CLI11.hpp>

#include "hitsp/driver.hpp"

namespace {

using namespace hitsp;

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write to " + path);
    out << content;
}

int cmd_generate(const std::string& kind, int size, std::uint64_t seed,
                 const std::string& metric, const std::string& out) {
    CostModel model = metric == "euclid" ? CostModel::Euclidean : CostModel::Unit;
    auto sol = generate_instance(kind, size, model, seed);
    write_output(out, solution_to_json(sol).dump(2));
    return 0;
}

int cmd_validate(const std::string& path) {
    auto sol = load_solution(path);
    auto rep = validate(sol);
    std::cout << rep.to_json().dump(2) << "\n";
    return rep.valid() ? 0 : 1;
}

int cmd_hierarchy(const std::string& path, const std::string& dot_path,
                  const std::string& out) {
    Instance inst = normalize(load_solution(path));
    CutHierarchy h = build_hierarchy(inst.graph);
    write_output(out, h.to_json().dump(2));
    if (!dot_path.empty()) write_output(dot_path, h.to_dot());
    return 0;
}

int cmd_sample(const std::string& path, int count, std::uint64_t seed, double epsilon) {
    Instance inst = normalize(load_solution(path));
    CutHierarchy h = build_hierarchy(inst.graph);
    FitOptions fit;
    fit.epsilon = epsilon;
    NodeDistributions nd = fit_node_distributions(h, fit);
    for (int t = 0; t < count; ++t) {
        RandomStream rng(seed, static_cast<std::uint64_t>(t), "tree");
        OneTree tree = sample_one_tree(h, nd, rng);
        nlohmann::json j{{"trial", t}, {"edges", tree.edge_list}, {"cost", tree.cost}};
        std::cout << j.dump() << "\n";
    }
    return 0;
}

int cmd_solve(const std::string& path, const RunConfig& cfg, const std::string& output,
              const std::string& out) {
    SolveResult res = solve_instance(load_solution(path), cfg);
    if (output == "csv") write_output(out, solve_to_csv(res, cfg));
    else write_output(out, solve_to_json(res, cfg).dump(2));
    if (res.summary.violations > 0) {
        std::cerr << res.summary.violations << " trial(s) violated certificate checks\n";
        return 1;
    }
    return 0;
}

int cmd_verify_lemmas(const std::string& path, bool mc, int trials, std::uint64_t seed,
                      double epsilon, const std::string& out) {
    Instance inst = normalize(load_solution(path));
    CutHierarchy h = build_hierarchy(inst.graph);
    FitOptions fit;
    fit.epsilon = epsilon;
    NodeDistributions nd = fit_node_distributions(h, fit);
    LemmaOptions opt;
    opt.monte_carlo = mc;
    opt.trials = trials;
    opt.seed = seed;
    LemmaReport rep = lemma_suite(h, nd, opt);
    write_output(out, rep.to_json().dump(2));
    return rep.all_pass() ? 0 : 1;
}

int cmd_bench(const std::string& kinds, std::uint64_t seed, int trials, double epsilon,
              int threads) {
    struct Row {
        std::string name;
        int n;
        double cx, mean_ratio, mean_join_over_cx, seconds;
    };
    std::vector<std::pair<std::string, int>> plan;
    std::istringstream ss(kinds);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        require(colon != std::string::npos, "bench spec items look like kind:size");
        plan.emplace_back(item.substr(0, colon), std::stoi(item.substr(colon + 1)));
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [kind, size] : plan) {
        auto sol = generate_instance(kind, size, CostModel::Unit, seed);
        RunConfig cfg;
        cfg.seed = seed;
        cfg.trials = trials;
        cfg.epsilon = epsilon;
        cfg.threads = threads;
        auto t0 = std::chrono::steady_clock::now();
        SolveResult res = solve_instance(sol, cfg);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back({{"instance", kind + ":" + std::to_string(size)},
                        {"n", res.instance.solution.n},
                        {"cx", res.instance.cx},
                        {"meanRatio", res.summary.mean_ratio},
                        {"meanJoinOverCx", res.summary.mean_join / res.instance.cx},
                        {"violations", res.summary.violations},
                        {"seconds", secs}});
    }
    std::cout << rows.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"max-entropy rounding pipeline for half-integral TSP relaxations"};
    app.require_subcommand(1);

    // generate
    std::string g_kind = "doubled-cycle", g_metric = "unit", g_out;
    int g_size = 5;
    std::uint64_t g_seed = 0;
    auto* gen = app.add_subcommand("generate", "emit a library instance as JSON");
    gen->add_option("--kind", g_kind, "doubled-cycle | k4-chain | nested-cycle");
    gen->add_option("--size", g_size, "cycle length / block count / nesting depth");
    gen->add_option("--seed", g_seed, "seed for random costs");
    gen->add_option("--metric", g_metric, "unit | euclid")
        ->check(CLI::IsMember({"unit", "euclid"}));
    gen->add_option("--out", g_out, "output file (default stdout)");

    // validate
    std::string v_path;
    auto* val = app.add_subcommand("validate", "check a half-integral instance");
    val->add_option("instance", v_path)->required();

    // hierarchy
    std::string h_path, h_dot, h_out;
    auto* hier = app.add_subcommand("hierarchy", "emit the critical-set hierarchy");
    hier->add_option("instance", h_path)->required();
    hier->add_option("--dot", h_dot, "also write a DOT rendering");
    hier->add_option("--out", h_out, "output file (default stdout)");

    // sample
    std::string s_path;
    int s_count = 10;
    std::uint64_t s_seed = 0;
    bool s_seed_set = false;
    double s_eps = 1e-3;
    auto* smp = app.add_subcommand("sample", "emit sampled 1-trees as JSON lines");
    smp->add_option("instance", s_path)->required();
    smp->add_option("--count", s_count, "number of samples");
    smp->add_option("--seed", s_seed, "master seed")->required()->each([&](const std::string&) {
        s_seed_set = true;
    });
    smp->add_option("--epsilon", s_eps, "marginal fitting tolerance");

    // solve
    std::string so_path, so_output = "json", so_out;
    RunConfig so_cfg;
    auto* sol = app.add_subcommand("solve", "run sampling + join trials");
    sol->add_option("instance", so_path)->required();
    sol->add_option("--seed", so_cfg.seed, "master seed")->required();
    sol->add_option("--trials", so_cfg.trials, "number of trials");
    sol->add_option("--epsilon", so_cfg.epsilon, "marginal fitting tolerance");
    sol->add_flag("--mc", so_cfg.monte_carlo, "Monte Carlo even-at-last estimation");
    sol->add_option("--mc-trials", so_cfg.mc_trials, "samples for Monte Carlo estimation");
    sol->add_option("--threads", so_cfg.threads, "worker threads (0 = hardware)");
    sol->add_flag("--literal-increase", so_cfg.literal_increase,
                  "include even last-cut shares in the step-3 max");
    sol->add_option("--output", so_output, "json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sol->add_option("--out", so_out, "output file (default stdout)");

    // verify-lemmas
    std::string l_path, l_method = "exact", l_out;
    int l_trials = 100000;
    std::uint64_t l_seed = 1;
    double l_eps = 1e-10;
    auto* lem = app.add_subcommand("verify-lemmas", "check the probabilistic guarantees");
    lem->add_option("instance", l_path)->required();
    lem->add_option("--method", l_method, "exact | mc")->check(CLI::IsMember({"exact", "mc"}));
    lem->add_option("--trials", l_trials, "samples when method=mc");
    lem->add_option("--seed", l_seed, "seed when method=mc");
    lem->add_option("--epsilon", l_eps, "fitting tolerance for the checked distributions");
    lem->add_option("--out", l_out, "output file (default stdout)");

    // bench
    std::string b_kinds = "doubled-cycle:8,k4-chain:3,nested-cycle:2";
    std::uint64_t b_seed = 1;
    int b_trials = 1000, b_threads = 0;
    double b_eps = 1e-3;
    auto* ben = app.add_subcommand("bench", "solve a set of generated instances");
    ben->add_option("--instances", b_kinds, "comma list of kind:size");
    ben->add_option("--seed", b_seed)->required();
    ben->add_option("--trials", b_trials);
    ben->add_option("--epsilon", b_eps);
    ben->add_option("--threads", b_threads);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(g_kind, g_size, g_seed, g_metric, g_out);
        if (val->parsed()) return cmd_validate(v_path);
        if (hier->parsed()) return cmd_hierarchy(h_path, h_dot, h_out);
        if (smp->parsed()) return cmd_sample(s_path, s_count, s_seed, s_eps);
        if (sol->parsed()) return cmd_solve(so_path, so_cfg, so_output, so_out);
        if (lem->parsed())
            return cmd_verify_lemmas(l_path, l_method == "mc", l_trials, l_seed, l_eps, l_out);
        if (ben->parsed()) return cmd_bench(b_kinds, b_seed, b_trials, b_eps, b_threads);
    } catch (const hitsp::ParseError& ex) {
        std::cerr << "input error: " << ex.what() << "\n";
        return 2;
    } catch (const hitsp::StructuralError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const hitsp::AssertionError& ex) {
        std::cerr << "invariant violation: " << ex.what() << "\n";
        return 1;
    }
    return 2;
}
