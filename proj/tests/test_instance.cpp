#include <catch2/catch_amalgamated.hpp>

#include "hitsp/generators.hpp"
#include "hitsp/instance.hpp"
#include "oracles.hpp"

using namespace hitsp;

namespace {
HalfIntegralSolution two_k4() { return gen_k4_chain(2); }
}  // namespace

TEST_CASE("doubled cycle validates", "[instance]") {
    auto sol = gen_doubled_cycle(5);
    auto rep = validate(sol);
    CAPTURE(rep.violations);
    REQUIRE(rep.valid());
}

TEST_CASE("degree violation is reported", "[instance]") {
    auto sol = gen_doubled_cycle(5);
    sol.edges[0].x = 0.5;  // drop one parallel copy: two vertices at degree 1.5
    auto rep = validate(sol);
    REQUIRE_FALSE(rep.valid());
    int degree_violations = 0;
    for (const auto& v : rep.violations)
        if (v.find("fractional degree") != std::string::npos) ++degree_violations;
    REQUIRE(degree_violations == 2);
}

TEST_CASE("two-K4 instance is valid with min cut 4", "[instance]") {
    auto sol = two_k4();
    REQUIRE(validate(sol).valid());
    auto unit = ensure_unit_edge(sol);
    auto g = build_support(unit.solution, unit.designated_edge);
    REQUIRE(oracles::brute_force_min_cut_value(g) == 4);
}

TEST_CASE("parse errors are distinct from validation failures", "[instance]") {
    nlohmann::json j;
    j["n"] = 3;
    j["edges"] = {{{"u", 0}, {"v", 1}, {"x", 1.0}, {"cost", 1.0}},
                  {{"u", 1}, {"v", 0}, {"x", 0.5}, {"cost", 1.0}}};
    REQUIRE_THROWS_AS(solution_from_json(j), ParseError);

    nlohmann::json k;
    k["n"] = 2;
    k["edges"] = {{{"u", 0}, {"v", 5}, {"x", 1.0}, {"cost", 1.0}}};
    REQUIRE_THROWS_AS(solution_from_json(k), ParseError);

    // Non-half-integral values parse fine but fail validation.
    nlohmann::json l;
    l["n"] = 3;
    l["edges"] = {{{"u", 0}, {"v", 1}, {"x", 0.7}, {"cost", 1.0}},
                  {{"u", 1}, {"v", 2}, {"x", 1.0}, {"cost", 1.0}},
                  {{"u", 2}, {"v", 0}, {"x", 1.0}, {"cost", 1.0}}};
    auto sol = solution_from_json(l);
    REQUIRE_FALSE(validate(sol).valid());
}

TEST_CASE("designation without split when an x=1 edge exists", "[instance]") {
    auto sol = gen_doubled_cycle(6);
    auto unit = ensure_unit_edge(sol);
    REQUIRE(unit.solution.n == 6);
    REQUIRE_FALSE(unit.solution.split.has_value());
    REQUIRE(unit.solution.edges[unit.designated_edge].x == 1.0);
}

TEST_CASE("splitting an all-half instance preserves validity and cost", "[instance]") {
    auto sol = two_k4();
    double cx = sol.cost_of_x();
    auto unit = ensure_unit_edge(sol);
    REQUIRE(unit.solution.n == sol.n + 1);
    REQUIRE(unit.solution.split.has_value());
    REQUIRE(unit.solution.edges[unit.designated_edge].x == 1.0);
    REQUIRE(unit.solution.edges[unit.designated_edge].cost == 0.0);
    REQUIRE(validate(unit.solution).valid());
    REQUIRE(unit.solution.cost_of_x() == Catch::Approx(cx));
    // split vertex is the lowest id
    REQUIRE(unit.solution.split->original_vertex == 0);
}

TEST_CASE("support graph expands unit edges into parallel copies", "[instance]") {
    auto sol = gen_doubled_cycle(5);
    sol.edges[2].cost = 5.0;
    auto unit = ensure_unit_edge(sol);
    auto g = build_support(unit.solution, unit.designated_edge);
    REQUIRE(static_cast<int>(g.half_edges.size()) == 2 * g.n);
    int copies = 0;
    for (const auto& he : g.half_edges)
        if (he.origin_edge == 2) {
            ++copies;
            REQUIRE(he.cost == 5.0);
        }
    REQUIRE(copies == 2);
    // every half-edge carries half its x-weight: sum cost / 2 == c(x)
    REQUIRE(g.total_half_edge_cost() / 2 == Catch::Approx(unit.solution.cost_of_x()));
}

TEST_CASE("normalization is structurally idempotent", "[instance]") {
    auto inst = normalize(two_k4());
    auto again = ensure_unit_edge(inst.solution);
    REQUIRE(again.solution.n == inst.solution.n);
    REQUIRE(again.solution.edges.size() == inst.solution.edges.size());
}

TEST_CASE("metric closure matches Floyd-Warshall and the triangle inequality",
          "[instance]") {
    auto inst = normalize(gen_k4_chain(3));
    auto fw = oracles::floyd_warshall(inst.graph);
    for (int i = 0; i < inst.graph.n; ++i) {
        REQUIRE(inst.metric(i, i) == 0.0);
        for (int j = 0; j < inst.graph.n; ++j)
            REQUIRE(inst.metric(i, j) == Catch::Approx(fw[i][j]));
    }
    for (int i = 0; i < inst.graph.n; ++i)
        for (int j = 0; j < inst.graph.n; ++j)
            for (int k = 0; k < inst.graph.n; ++k)
                REQUIRE(inst.metric(i, j) <= inst.metric(i, k) + inst.metric(k, j) + 1e-12);
}

TEST_CASE("doubled cycle distances", "[instance]") {
    auto inst = normalize(gen_doubled_cycle(5));
    REQUIRE(inst.metric(0, 2) == Catch::Approx(2.0));
}

TEST_CASE("euclidean instances attach a valid matrix", "[instance]") {
    auto sol = gen_k4_chain(2, CostModel::Euclidean, 42);
    REQUIRE(sol.matrix.has_value());
    REQUIRE(validate(sol).valid());
    auto inst = normalize(sol);
    // matrix given: the metric is the matrix, extended over the split vertex
    REQUIRE(inst.metric.size() == sol.n + 1);
    REQUIRE(inst.metric(inst.solution.split->v1, inst.solution.split->v2) == 0.0);
}

TEST_CASE("instance json round trip", "[instance]") {
    auto sol = gen_nested_cycle(2, CostModel::Euclidean, 7);
    auto j = solution_to_json(sol);
    auto back = solution_from_json(j);
    REQUIRE(back.n == sol.n);
    REQUIRE(back.edges.size() == sol.edges.size());
    REQUIRE(back.matrix.has_value());
    REQUIRE(validate(back).valid());
}
