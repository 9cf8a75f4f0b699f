#include <catch2/catch_amalgamated.hpp>

#include "hitsp/analysis.hpp"
#include "hitsp/maxent.hpp"
#include "oracles.hpp"

using namespace hitsp;

namespace {

WeightedGraph triangle() {
    WeightedGraph g;
    g.n = 3;
    g.edges = {{0, 1}, {1, 2}, {2, 0}};
    return g;
}

WeightedGraph doubled_edge() {
    WeightedGraph g;
    g.n = 2;
    g.edges = {{0, 1}, {0, 1}};
    return g;
}

WeightedGraph doubled_cycle(int n) {
    WeightedGraph g;
    g.n = n;
    for (int i = 0; i < n; ++i) {
        g.edges.push_back({i, (i + 1) % n});
        g.edges.push_back({i, (i + 1) % n});
    }
    return g;
}

WeightedGraph random_connected(RandomStream& rng, int n, int extra) {
    WeightedGraph g;
    g.n = n;
    for (int v = 1; v < n; ++v) g.edges.push_back({static_cast<int>(rng.below(v)), v});
    for (int e = 0; e < extra; ++e) {
        int u = static_cast<int>(rng.below(n)), v = static_cast<int>(rng.below(n));
        if (u == v) v = (v + 1) % n;
        g.edges.push_back({u, v});
    }
    return g;
}

}  // namespace

TEST_CASE("triangle marginals are 2/3", "[maxent]") {
    auto p = exact_marginals(triangle(), {1, 1, 1});
    for (double x : p) REQUIRE(x == Catch::Approx(2.0 / 3.0).margin(1e-12));
}

TEST_CASE("parallel pair marginals are 1/2", "[maxent]") {
    auto p = exact_marginals(doubled_edge(), {1, 1});
    REQUIRE(p[0] == Catch::Approx(0.5).margin(1e-12));
    REQUIRE(p[1] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("marginals match the enumeration oracle on a doubled cycle", "[maxent]") {
    auto g = doubled_cycle(5);
    std::vector<double> lambda(g.edges.size(), 1.0);
    auto p = exact_marginals(g, lambda);
    auto en = enumerate_trees(g, lambda);
    std::vector<double> p2(g.edges.size(), 0.0);
    for (std::size_t t = 0; t < en.trees.size(); ++t)
        for (int e : en.trees[t]) p2[e] += en.prob[t];
    for (std::size_t e = 0; e < p.size(); ++e)
        REQUIRE(p[e] == Catch::Approx(p2[e]).margin(1e-9));
}

TEST_CASE("disconnected graphs are rejected", "[maxent]") {
    WeightedGraph g;
    g.n = 4;
    g.edges = {{0, 1}, {2, 3}};
    REQUIRE_THROWS_AS(exact_marginals(g, {1, 1}), StructuralError);
}

TEST_CASE("tree count equals the matrix-tree determinant on random graphs", "[maxent]") {
    RandomStream rng(20240817);
    for (int it = 0; it < 20; ++it) {
        auto g = random_connected(rng, 4 + static_cast<int>(rng.below(4)), 4);
        std::vector<double> lambda(g.edges.size(), 1.0);
        double det = spanning_tree_count(g);
        auto en = enumerate_trees(g, lambda);
        REQUIRE(std::llround(det) == static_cast<long long>(en.trees.size()));
    }
}

TEST_CASE("fitting a fixed point converges instantly", "[maxent]") {
    auto g = doubled_cycle(4);
    std::vector<double> lambda(g.edges.size(), 1.0);
    auto z = exact_marginals(g, lambda);
    FitOptions opt;
    opt.epsilon = 1e-6;
    auto dist = fit_lambdas(g, z, opt);
    REQUIRE(dist.iterations == 0);
    REQUIRE(dist.fitted_epsilon <= 1e-6);
}

TEST_CASE("fitting reaches asymmetric targets", "[maxent]") {
    // theta graph: three parallel two-edge paths between 0 and 3
    WeightedGraph g;
    g.n = 5;
    g.edges = {{0, 1}, {1, 4}, {0, 2}, {2, 4}, {0, 3}, {3, 4}};
    // targets: marginals of a known lambda, so they are interior and reachable
    std::vector<double> secret{3.0, 1.0, 0.5, 2.0, 1.0, 1.0};
    auto z = exact_marginals(g, secret);
    FitOptions opt;
    opt.epsilon = 1e-8;
    auto dist = fit_lambdas(g, z, opt);
    REQUIRE(dist.fitted_epsilon <= 1e-8);
    for (std::size_t e = 0; e < z.size(); ++e)
        REQUIRE(dist.marginals[e] == Catch::Approx(z[e]).epsilon(1e-6));
    double sum = 0;
    for (double p : dist.marginals) sum += p;
    REQUIRE(sum == Catch::Approx(g.n - 1).margin(1e-9));
}

TEST_CASE("fitting rejects marginals outside the polytope", "[maxent]") {
    auto g = triangle();
    REQUIRE_THROWS_AS(fit_lambdas(g, {0.9, 0.9, 0.9}, {}), StructuralError);  // sum != 2
    REQUIRE_THROWS_AS(fit_lambdas(g, {1.0, 1.0, 0.0}, {}), StructuralError);  // zero entry
}

TEST_CASE("polytope membership check", "[maxent]") {
    auto g = doubled_cycle(4);
    REQUIRE(in_spanning_tree_polytope(g, std::vector<double>(8, 3.0 / 8.0)));
    std::vector<double> bad(8, 3.0 / 8.0);
    bad[0] = 0.8;
    bad[1] = 0.8;
    bad[2] = 0.0;
    bad[3] = 0.0;  // sum preserved
    // {v0,v1} gets z(E(S)) = 1.6 > |S|-1
    std::vector<double> bad2(8, 0.0);
    bad2[0] = 1.0;
    bad2[1] = 1.0;
    bad2[4] = 0.5;
    bad2[5] = 0.5;
    REQUIRE_FALSE(in_spanning_tree_polytope(g, bad2));
}

TEST_CASE("wilson sampling matches the target frequencies", "[maxent]") {
    auto g = doubled_edge();
    auto dist = lambda_uniform(g, {1.0, 1.0});
    RandomStream rng(99, 0, "test");
    int n0 = 0, trials = 100000;
    for (int t = 0; t < trials; ++t) {
        auto tree = dist.sample(rng);
        REQUIRE(tree.size() == 1);
        n0 += tree[0] == 0;
    }
    double phat = double(n0) / trials;
    double sigma = std::sqrt(0.25 / trials);
    REQUIRE(std::abs(phat - 0.5) <= 3 * sigma);
}

TEST_CASE("wilson sampling matches tree frequencies on a triangle", "[maxent]") {
    auto dist = lambda_uniform(triangle(), {1.0, 1.0, 1.0});
    RandomStream rng(123, 0, "test");
    std::map<std::vector<int>, int> freq;
    int trials = 100000;
    for (int t = 0; t < trials; ++t) ++freq[dist.sample(rng)];
    REQUIRE(freq.size() == 3);
    for (const auto& [tree, count] : freq) {
        double phat = double(count) / trials;
        REQUIRE(std::abs(phat - 1.0 / 3.0) <= 3 * std::sqrt((1.0 / 3) * (2.0 / 3) / trials));
    }
}

TEST_CASE("sampled distribution is close to enumeration in total variation",
          "[maxent]") {
    auto g = doubled_cycle(5);
    std::vector<double> lambda(g.edges.size(), 1.0);
    auto dist = lambda_uniform(g, lambda);
    auto en = enumerate_trees(g, lambda);
    std::map<std::vector<int>, double> exact;
    for (std::size_t t = 0; t < en.trees.size(); ++t) exact[en.trees[t]] = en.prob[t];
    RandomStream rng(7, 0, "test");
    std::map<std::vector<int>, double> emp;
    // 80 support points: sample enough that E[TV] ~ 0.4 sqrt(k/N) sits well
    // below the 0.01 bound
    int trials = 800000;
    for (int t = 0; t < trials; ++t) emp[dist.sample(rng)] += 1.0 / trials;
    double tv = 0;
    for (const auto& [tree, p] : exact) tv += std::abs(p - emp[tree]);
    for (const auto& [tree, p] : emp)
        if (!exact.count(tree)) tv += p;
    REQUIRE(tv / 2 <= 0.01);
}

TEST_CASE("enumeration agrees with the brute-force subset oracle", "[maxent]") {
    RandomStream rng(5150);
    for (int it = 0; it < 10; ++it) {
        auto g = random_connected(rng, 5, 3);
        std::vector<double> lambda(g.edges.size(), 1.0);
        auto en = enumerate_trees(g, lambda);
        auto brute = oracles::brute_force_spanning_trees(g);
        REQUIRE(en.trees.size() == brute.size());
        std::set<std::vector<int>> a(en.trees.begin(), en.trees.end());
        std::set<std::vector<int>> b(brute.begin(), brute.end());
        REQUIRE(a == b);
    }
}

TEST_CASE("enumeration cap is enforced", "[maxent]") {
    auto g = doubled_cycle(6);
    REQUIRE_THROWS_AS(enumerate_trees(g, std::vector<double>(g.edges.size(), 1.0), 10.0),
                      StructuralError);
}

TEST_CASE("rank sequences", "[maxent]") {
    auto g = doubled_cycle(5);
    std::vector<double> lambda(g.edges.size(), 1.0);
    auto dist = lambda_uniform(g, lambda);
    // all edges: point mass at n-1
    std::vector<int> all(g.edges.size());
    std::iota(all.begin(), all.end(), 0);
    auto pmf = rank_sequence_exact(dist, all);
    REQUIRE(pmf[4] == Catch::Approx(1.0).margin(1e-12));
    // a vertex star is hit at least once
    auto star = rank_sequence_exact(dist, {0, 1, 8, 9});  // edges at vertex 0
    REQUIRE(star[0] == Catch::Approx(0.0).margin(1e-12));
    // Monte Carlo fallback approximates the exact sequence
    RandomStream rng(31, 0, "test");
    auto mc = rank_sequence_monte_carlo(dist, {0, 1, 2, 3}, 20000, rng);
    auto ex = rank_sequence_exact(dist, {0, 1, 2, 3});
    for (std::size_t k = 0; k < ex.size(); ++k)
        REQUIRE(std::abs(mc[k] - ex[k]) <= 0.02);
}

TEST_CASE("negative correlation holds exactly on small graphs", "[maxent]") {
    RandomStream rng(777);
    for (int it = 0; it < 5; ++it) {
        auto g = random_connected(rng, 5, 3);
        std::vector<double> lambda;
        for (std::size_t e = 0; e < g.edges.size(); ++e)
            lambda.push_back(0.5 + rng.uniform01());
        auto en = enumerate_trees(g, lambda);
        std::size_t m = g.edges.size();
        std::vector<double> p(m, 0.0);
        std::vector<std::vector<double>> p2(m, std::vector<double>(m, 0.0));
        for (std::size_t t = 0; t < en.trees.size(); ++t)
            for (int a : en.trees[t]) {
                p[a] += en.prob[t];
                for (int b : en.trees[t]) p2[a][b] += en.prob[t];
            }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                if (a != b) REQUIRE(p2[a][b] <= p[a] * p[b] + 1e-12);
    }
}

TEST_CASE("conditional monotonicity for increasing threshold events", "[maxent]") {
    auto g = doubled_cycle(4);
    std::vector<double> lambda(g.edges.size(), 1.0);
    auto en = enumerate_trees(g, lambda);
    // S = edges of one rung pair, e outside S
    std::vector<int> S{0, 1};
    int e = 4;
    for (int thresh = 1; thresh <= 2; ++thresh) {
        double pe = 0, pcond = 0, pevent = 0;
        for (std::size_t t = 0; t < en.trees.size(); ++t) {
            int cs = 0;
            bool he = false;
            for (int x : en.trees[t]) {
                cs += std::count(S.begin(), S.end(), x);
                he |= x == e;
            }
            pe += he * en.prob[t];
            if (cs >= thresh) {
                pevent += en.prob[t];
                pcond += he * en.prob[t];
            }
        }
        if (pevent > 0) REQUIRE(pcond / pevent <= pe + 1e-12);
    }
}

TEST_CASE("rank sequence generating polynomials are real rooted", "[maxent]") {
    // Slightly non-uniform weights keep the roots simple, where the 1e-7
    // tolerance on companion-matrix eigenvalues is meaningful (a root of
    // multiplicity m is only computable to eps^(1/m)).
    auto g = doubled_cycle(5);
    std::vector<double> lambda;
    for (std::size_t e = 0; e < g.edges.size(); ++e) lambda.push_back(1.0 + 0.07 * e);
    auto dist = lambda_uniform(g, lambda);
    std::vector<std::vector<int>> sets{{0, 1, 2, 3}, {0, 2, 4, 6, 8}, {1, 3, 5}};
    for (const auto& A : sets) {
        auto pmf = rank_sequence_exact(dist, A);
        for (auto root : polynomial_roots(pmf)) {
            CAPTURE(A, root.real(), root.imag());
            REQUIRE(std::abs(root.imag()) <= 1e-7);
        }
        // Newton's inequalities (implied by real-rootedness) hold for the
        // uniform-weight sequences too, where roots collide.
        for (std::size_t k = 1; k + 1 < pmf.size(); ++k)
            REQUIRE(pmf[k] * pmf[k] + 1e-12 >= pmf[k - 1] * pmf[k + 1]);
    }
}
