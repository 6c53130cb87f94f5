#include <doctest.h>

#include <algorithm>
#include <set>

#include "graph_analysis.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace crl;
using crl::testing::data_path;

namespace {

CausalGraph chain_abc() {
    std::vector<VariableSpec> vars(3);
    vars[0].name = "A";
    vars[1].name = "B";
    vars[2].name = "C";
    return CausalGraph(std::move(vars), {{0, 1}, {1, 2}});
}

CausalGraph collider_abc() {
    std::vector<VariableSpec> vars(3);
    vars[0].name = "A";
    vars[1].name = "B";
    vars[2].name = "C";
    return CausalGraph(std::move(vars), {{0, 1}, {2, 1}});
}

bool census_has(const std::vector<NameTriple>& triples, const NameTriple& t) {
    return std::find(triples.begin(), triples.end(), t) != triples.end();
}

}  // namespace

TEST_CASE("topological order of a chain") {
    CHECK(topological_order(chain_abc()) == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("three-cycle raises an error naming the cycle") {
    std::vector<VariableSpec> vars(3);
    vars[0].name = "A";
    vars[1].name = "B";
    vars[2].name = "C";
    CausalGraph g(std::move(vars), {{0, 1}, {1, 2}, {2, 0}});
    CHECK_THROWS_WITH_AS(topological_order(g), doctest::Contains("cycle"), Error);
    try {
        topological_order(g);
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("A -> B") != std::string::npos);
    }
}

TEST_CASE("pendulum order places both causes before both effects") {
    CausalGraph g = load_graph(data_path("pendulum.json"));
    auto order = topological_order(g);
    auto pos = [&](const std::string& name) {
        return std::find(order.begin(), order.end(), name) - order.begin();
    };
    CHECK(pos("pendulum_angle") < pos("shadow_length"));
    CHECK(pos("pendulum_angle") < pos("shadow_position"));
    CHECK(pos("light_angle") < pos("shadow_length"));
    CHECK(pos("light_angle") < pos("shadow_position"));
}

TEST_CASE("celeba beard census: fork and collider, no chain") {
    auto census = junction_census(load_graph(data_path("celeba_beard.json")));
    CHECK(census.chains.empty());
    CHECK_FALSE(census.has_chain);
    CHECK(census_has(census.forks, {"bald", "age", "beard"}));
    CHECK(census_has(census.colliders, {"age", "bald", "gender"}));
}

TEST_CASE("celeba smile census: all three junction types") {
    auto census = junction_census(load_graph(data_path("celeba_smile.json")));
    CHECK(census.has_chain);
    CHECK(census.has_fork);
    CHECK(census.has_collider);
    CHECK(census_has(census.chains, {"smile", "mouth_open", "eyes_open"}));
    CHECK(census_has(census.forks, {"eyes_open", "smile", "mouth_open"}));
    CHECK(census.colliders.size() == 3);
}

TEST_CASE("flow noise census: chain and collider, no fork") {
    auto census = junction_census(load_graph(data_path("flow_noise.json")));
    CHECK(census_has(census.chains, {"ball_size", "hole", "water_flow"}));
    CHECK(census.forks.empty());
    CHECK(census.has_collider);
}

TEST_CASE("shadow sunlight census: colliders only") {
    auto census = junction_census(load_graph(data_path("shadow_sunlight.json")));
    CHECK_FALSE(census.has_chain);
    CHECK_FALSE(census.has_fork);
    CHECK(census.has_collider);
}

TEST_CASE("shadow pointlight census: fork and collider, no chain") {
    auto census = junction_census(load_graph(data_path("shadow_pointlight.json")));
    CHECK_FALSE(census.has_chain);
    CHECK(census.has_fork);
    CHECK(census.has_collider);
}

TEST_CASE("junction census matches direct triple enumeration on random DAGs") {
    Rng rng(13);
    for (int trial = 0; trial < 300; ++trial) {
        CausalGraph g = crl::testing::random_dag(rng, 7, 0.4);
        auto census = junction_census(g);
        auto counts = crl::testing::brute_force_junctions(g);
        CHECK(census.chains.size() == counts.chains);
        CHECK(census.forks.size() == counts.forks);
        CHECK(census.colliders.size() == counts.colliders);
    }
}

TEST_CASE("d-separation on the chain and collider primitives") {
    CausalGraph chain = chain_abc();
    CHECK(d_separated(chain, "A", "C", {"B"}));
    CHECK_FALSE(d_separated(chain, "A", "C", {}));
    CausalGraph collider = collider_abc();
    CHECK(d_separated(collider, "A", "C", {}));
    CHECK_FALSE(d_separated(collider, "A", "C", {"B"}));
}

TEST_CASE("celeba beard: age and gender are marginally d-separated") {
    CausalGraph g = load_graph(data_path("celeba_beard.json"));
    CHECK(d_separated(g, "age", "gender", {}));
    CHECK_FALSE(d_separated(g, "age", "gender", {"bald"}));
}

TEST_CASE("d-separation rejects bad queries") {
    CausalGraph g = chain_abc();
    CHECK_THROWS_AS(d_separated(g, "A", "Z", {}), Error);
    CHECK_THROWS_AS(d_separated(g, "A", "C", {"A"}), Error);
}

TEST_CASE("d-separation agrees with brute-force path enumeration") {
    Rng rng(101);
    int queries = 0;
    for (int trial = 0; trial < 200; ++trial) {
        CausalGraph g = crl::testing::random_dag(rng, 7, 0.35);
        const int n = static_cast<int>(g.size());
        for (int x = 0; x < n; ++x) {
            for (int y = x + 1; y < n; ++y) {
                std::vector<int> others;
                for (int v = 0; v < n; ++v) {
                    if (v != x && v != y) others.push_back(v);
                }
                std::vector<std::vector<int>> subsets{{}};
                for (size_t i = 0; i < others.size(); ++i) {
                    subsets.push_back({others[i]});
                    for (size_t j = i + 1; j < others.size(); ++j) {
                        subsets.push_back({others[i], others[j]});
                    }
                }
                for (const auto& z : subsets) {
                    ++queries;
                    REQUIRE(d_separated_idx(g, x, y, z) ==
                            crl::testing::brute_force_d_separated(g, x, y, z));
                }
            }
        }
    }
    CHECK(queries > 10000);
}

TEST_CASE("implied independencies on the fixtures") {
    CausalGraph smile = load_graph(data_path("celeba_smile.json"));
    auto list = implied_independencies(smile, 1);
    auto contains = [&](const std::string& x, const std::string& y,
                        const std::vector<std::string>& given) {
        return std::any_of(list.begin(), list.end(), [&](const Independency& ind) {
            return ind.x == x && ind.y == y && ind.given == given;
        });
    };
    CHECK(contains("gender", "smile", {}));
    CHECK(contains("gender", "mouth_open", {}));

    CausalGraph chain = chain_abc();
    auto chain_list = implied_independencies(chain, 1);
    REQUIRE(chain_list.size() == 1);
    CHECK(chain_list[0].x == "A");
    CHECK(chain_list[0].y == "C");
    CHECK(chain_list[0].given == std::vector<std::string>{"B"});

    std::vector<VariableSpec> vars(3);
    vars[0].name = "A";
    vars[1].name = "B";
    vars[2].name = "C";
    CausalGraph edgeless(std::move(vars), {});
    CHECK(implied_independencies(edgeless, 1).size() == 6);  // 3 pairs x {empty, singleton}
}

TEST_CASE("latent variables are excluded from implied independency queries") {
    const char* text = R"({"variables": [{"name": "u", "observed": false},
                                          {"name": "x"}, {"name": "y"}],
                           "edges": [["u", "x"], ["u", "y"]]})";
    CausalGraph g = parse_graph(text, "<t>");
    // x and y are confounded by the latent u, so nothing is implied.
    CHECK(implied_independencies(g, 2).empty());
}

TEST_CASE("confounders on the fixtures") {
    auto smile = find_confounders(load_graph(data_path("celeba_smile.json")));
    CHECK(census_has(smile, {"smile", "mouth_open", "eyes_open"}));
    CHECK(find_confounders(load_graph(data_path("celeba_beard.json"))).empty());
    CHECK(find_confounders(load_graph(data_path("pendulum.json"))).empty());
    CHECK(find_confounders(load_graph(data_path("flow_noise.json"))).empty());
    CHECK(find_confounders(load_graph(data_path("shadow_sunlight.json"))).empty());
    CHECK(find_confounders(load_graph(data_path("shadow_pointlight.json"))).empty());
}

TEST_CASE("every reported confounder is an ancestor of both endpoints") {
    Rng rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        CausalGraph g = crl::testing::random_dag(rng, 7, 0.45);
        for (const auto& [z, x, y] : find_confounders(g)) {
            int zi = g.require(z);
            // Reachability by brute force over edges.
            auto reaches = [&](int from, int to) {
                std::vector<int> stack{from};
                std::set<int> seen{from};
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    if (v == to) return true;
                    for (int c : g.children(v)) {
                        if (seen.insert(c).second) stack.push_back(c);
                    }
                }
                return false;
            };
            CHECK(reaches(zi, g.require(x)));
            CHECK(reaches(zi, g.require(y)));
        }
    }
}

TEST_CASE("desiderata reports on the fixtures") {
    auto smile = desiderata_report(load_graph(data_path("celeba_smile.json")));
    CHECK(smile.census.has_chain);
    CHECK(smile.census.has_fork);
    CHECK(smile.census.has_collider);
    CHECK_FALSE(smile.confounded_edges.empty());
    CHECK_FALSE(smile.has_numeric);  // the all-binary limitation shows up here
    CHECK(smile.has_categorical);
    CHECK(smile.satisfied);

    auto sunlight = desiderata_report(load_graph(data_path("shadow_sunlight.json")));
    CHECK_FALSE(sunlight.census.has_chain);
    CHECK_FALSE(sunlight.census.has_fork);
    CHECK_FALSE(sunlight.satisfied);
    CHECK(sunlight.has_numeric);
}

TEST_CASE("minimal satisfying graph: confounded chain-fork-collider triangle") {
    std::vector<VariableSpec> vars(3);
    vars[0].name = "u";
    vars[1].name = "x";
    vars[1].kind = VarKind::Categorical;
    vars[1].cardinality = 3;
    vars[2].name = "y";
    CausalGraph g(std::move(vars), {{0, 1}, {0, 2}, {1, 2}});
    auto report = desiderata_report(g);
    CHECK(report.satisfied);
    CHECK(report.has_numeric);
    CHECK(report.has_categorical);
    CHECK(census_has(report.confounded_edges, {"u", "x", "y"}));
}

TEST_CASE("desiderata satisfaction is monotone under edge additions") {
    Rng rng(31);
    int satisfied_seen = 0;
    for (int trial = 0; trial < 400 && satisfied_seen < 60; ++trial) {
        CausalGraph g = crl::testing::random_dag(rng, 7, 0.5);
        if (!desiderata_report(g).satisfied) continue;
        ++satisfied_seen;
        // Add one random forward edge consistent with some topological order.
        auto order = topological_order(g);
        std::vector<int> idx;
        for (const auto& name : order) idx.push_back(g.require(name));
        for (int attempt = 0; attempt < 10; ++attempt) {
            size_t i = rng.next_below(idx.size());
            size_t j = rng.next_below(idx.size());
            if (i == j) continue;
            if (i > j) std::swap(i, j);
            if (g.has_edge(idx[i], idx[j])) continue;
            auto edges = g.edges();
            edges.emplace_back(idx[i], idx[j]);
            CausalGraph extended(g.variables(), std::move(edges));
            CHECK(desiderata_report(extended).satisfied);
            break;
        }
    }
    CHECK(satisfied_seen > 10);
}

TEST_CASE("graph comparison identity and single reversal") {
    CausalGraph g = load_graph(data_path("celeba_smile.json"));
    auto self = compare_graphs(g, g);
    CHECK(self.shd == 0);
    CHECK(self.tpr == 1.0);

    std::vector<VariableSpec> vars(2);
    vars[0].name = "A";
    vars[1].name = "B";
    CausalGraph truth(vars, {{0, 1}});
    CausalGraph flipped(vars, {{1, 0}});
    auto cmp = compare_graphs(truth, flipped);
    CHECK(cmp.shd == 1);
    CHECK(cmp.tpr == 0.0);
    REQUIRE(cmp.reversed.size() == 1);
    CHECK(cmp.reversed[0] == std::pair<std::string, std::string>{"A", "B"});
}

TEST_CASE("graph comparison with scores: hand-ranked AUC") {
    std::vector<VariableSpec> vars(3);
    vars[0].name = "A";
    vars[1].name = "B";
    vars[2].name = "C";
    CausalGraph truth(vars, {{0, 1}, {0, 2}});
    CausalGraph predicted(vars, {{0, 1}});
    std::vector<EdgeScore> scores = {
        {"A", "B", 0.9}, {"A", "C", 0.8}, {"B", "A", 0.1},
        {"C", "A", 0.1}, {"B", "C", 0.1}, {"C", "B", 0.1},
    };
    auto cmp = compare_graphs(truth, predicted, &scores);
    CHECK(cmp.shd == 1);
    CHECK(cmp.tpr == doctest::Approx(0.5));
    REQUIRE(cmp.auc.has_value());
    CHECK(*cmp.auc == doctest::Approx(1.0));
    REQUIRE(cmp.missing.size() == 1);
    CHECK(cmp.missing[0] == std::pair<std::string, std::string>{"A", "C"});

    // Rank statistic is invariant under strictly increasing transforms.
    for (auto& s : scores) s.score = std::exp(3.0 * s.score);
    auto cmp2 = compare_graphs(truth, predicted, &scores);
    CHECK(*cmp2.auc == doctest::Approx(*cmp.auc));
}

TEST_CASE("ties earn half credit in the AUC") {
    std::vector<VariableSpec> vars(2);
    vars[0].name = "A";
    vars[1].name = "B";
    CausalGraph truth(vars, {{0, 1}});
    std::vector<EdgeScore> scores = {{"A", "B", 0.5}, {"B", "A", 0.5}};
    auto cmp = compare_graphs(truth, truth, &scores);
    REQUIRE(cmp.auc.has_value());
    CHECK(*cmp.auc == doctest::Approx(0.5));
}

TEST_CASE("shd is symmetric and zero on identical graphs") {
    Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        CausalGraph a = crl::testing::random_dag(rng, 6, 0.4);
        // Second graph over the same variables.
        Rng rng2(trial * 977 + 5);
        std::vector<std::pair<int, int>> edges;
        const int n = static_cast<int>(a.size());
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (rng2.next_double() < 0.4) edges.emplace_back(i, j);
            }
        }
        CausalGraph b(a.variables(), std::move(edges));
        CHECK(compare_graphs(a, b).shd == compare_graphs(b, a).shd);
        CHECK(compare_graphs(a, a).shd == 0);
    }
}

TEST_CASE("graph comparison errors") {
    std::vector<VariableSpec> vars(2);
    vars[0].name = "A";
    vars[1].name = "B";
    CausalGraph truth(vars, {{0, 1}});
    std::vector<VariableSpec> other(2);
    other[0].name = "A";
    other[1].name = "Z";
    CausalGraph mismatch(other, {});
    CHECK_THROWS_WITH_AS(compare_graphs(truth, mismatch), doctest::Contains("variable set"),
                         Error);
    std::vector<EdgeScore> incomplete = {{"A", "B", 0.9}};
    CHECK_THROWS_WITH_AS(compare_graphs(truth, truth, &incomplete),
                         doctest::Contains("shape mismatch"), Error);
}

TEST_CASE("edgeless truth graph defines TPR as 1 with a warning") {
    std::vector<VariableSpec> vars(2);
    vars[0].name = "A";
    vars[1].name = "B";
    CausalGraph truth(vars, {});
    CausalGraph predicted(vars, {{0, 1}});
    Warnings warnings;
    auto cmp = compare_graphs(truth, predicted, nullptr, &warnings);
    CHECK(cmp.tpr == 1.0);
    CHECK(cmp.shd == 1);
    CHECK_FALSE(warnings.empty());
}
