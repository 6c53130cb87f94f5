#include <doctest.h>

#include <algorithm>
#include <set>

#include "graph_analysis.hpp"
#include "io.hpp"
#include "oracles.hpp"
#include "rng.hpp"
#include "types.hpp"
#include "util.hpp"

using namespace crl;
using crl::testing::data_path;

TEST_CASE("celeba smile fixture loads with four variables and four edges") {
    CausalGraph g = load_graph(data_path("celeba_smile.json"));
    CHECK(g.size() == 4);
    CHECK(g.edges().size() == 4);
    auto has = [&](const char* a, const char* b) {
        return g.has_edge(g.require(a), g.require(b));
    };
    CHECK(has("gender", "eyes_open"));
    CHECK(has("smile", "eyes_open"));
    CHECK(has("smile", "mouth_open"));
    CHECK(has("mouth_open", "eyes_open"));
    CHECK(g.variable(g.require("smile")).labels == std::vector<std::string>{"no_smile", "smile"});
}

TEST_CASE("two-cycle is rejected at load") {
    const char* text = R"({"variables": [{"name": "A"}, {"name": "B"}],
                           "edges": [["A", "B"], ["B", "A"]]})";
    CHECK_THROWS_WITH_AS(parse_graph(text, "<test>"),
                         doctest::Contains("cycle"), Error);
}

TEST_CASE("edgeless graph is a valid DAG") {
    const char* text = R"({"variables": [{"name": "A"}, {"name": "B"}, {"name": "C"}],
                           "edges": []})";
    CausalGraph g = parse_graph(text, "<test>");
    CHECK(g.edges().empty());
    CHECK(topological_order(g).size() == 3);
}

TEST_CASE("graph validation errors") {
    CHECK_THROWS_WITH_AS(parse_graph(R"({"variables": [{"name": "A"}, {"name": "A"}]})", "<t>"),
                         doctest::Contains("duplicate variable"), Error);
    CHECK_THROWS_WITH_AS(
        parse_graph(R"({"variables": [{"name": "A"}], "edges": [["A", "A"]]})", "<t>"),
        doctest::Contains("self loop"), Error);
    CHECK_THROWS_WITH_AS(
        parse_graph(R"({"variables": [{"name": "A"}], "edges": [["A", "B"]]})", "<t>"),
        doctest::Contains("unknown variable"), Error);
    CHECK_THROWS_WITH_AS(
        parse_graph(R"({"variables": [{"name": "A", "kind": "categorical", "cardinality": 1}]})",
                    "<t>"),
        doctest::Contains("cardinality"), Error);
    CHECK_THROWS_WITH_AS(
        parse_graph(R"({"variables": [{"name": "A", "kind": "numeric", "cardinality": 3}]})",
                    "<t>"),
        doctest::Contains("cardinality"), Error);
    CHECK_THROWS_AS(parse_graph("{not json", "<t>"), Error);
}

TEST_CASE("graph round-trips through its JSON schema") {
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        CausalGraph g = crl::testing::random_dag(rng, 8, 0.4);
        CausalGraph back = parse_graph(graph_to_json(g), "<round-trip>");
        CHECK(g == back);
    }
    CausalGraph smile = load_graph(data_path("celeba_smile.json"));
    CHECK(smile == parse_graph(graph_to_json(smile), "<round-trip>"));
}

TEST_CASE("binary columns are inferred categorical with cardinality 2") {
    DataTable t = parse_table("a,b\n1,0\n0,1\n", "<test>");
    CHECK(t.rows() == 2);
    CHECK(t.column(0).is_categorical());
    CHECK(t.column(0).cardinality == 2);
    CHECK(t.column(1).is_categorical());
    CHECK(t.column(1).cardinality == 2);
}

TEST_CASE("non-finite cell is rejected") {
    CHECK_THROWS_WITH_AS(parse_table("a\nNaN\n", "<test>"), doctest::Contains("non-finite"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_table("a\ninf\n", "<test>"), doctest::Contains("non-finite"),
                         Error);
}

TEST_CASE("table parsing errors") {
    CHECK_THROWS_WITH_AS(parse_table("a,b\n1\n", "<test>"), doctest::Contains("fields"), Error);
    CHECK_THROWS_WITH_AS(parse_table("a,a\n1,2\n", "<test>"), doctest::Contains("duplicate"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_table("a\n", "<test>"), doctest::Contains("no data rows"), Error);
    CHECK_THROWS_WITH_AS(parse_table("a\nx1\n", "<test>"), doctest::Contains("cannot parse"),
                         Error);
}

TEST_CASE("schema overrides inference and validates codes") {
    std::vector<VariableSpec> schema(1);
    schema[0].name = "a";
    schema[0].kind = VarKind::Categorical;
    schema[0].cardinality = 2;
    CHECK_THROWS_WITH_AS(parse_table("a\n0\n3\n", "<test>", &schema),
                         doctest::Contains("out of range"), Error);
    schema[0].kind = VarKind::Numeric;
    schema[0].cardinality = 0;
    DataTable t = parse_table("a\n0\n3\n", "<test>", &schema);
    CHECK_FALSE(t.column(0).is_categorical());
}

TEST_CASE("table 1 fixture is 3 x 8 numeric") {
    DataTable t = load_table(data_path("table1.csv"));
    CHECK(t.rows() == 3);
    CHECK(t.cols() == 8);
    for (size_t c = 0; c < t.cols(); ++c) CHECK_FALSE(t.column(c).is_categorical());
    CHECK(t.at(0, 0) == doctest::Approx(0.9863));
    CHECK(t.at(2, 5) == doctest::Approx(169.1046));
}

TEST_CASE("column type inference is row-order independent") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        // Random small table mixing integer and fractional columns.
        const size_t rows = 5 + rng.next_below(20);
        std::string csv = "a,b,c\n";
        std::vector<std::string> lines;
        for (size_t r = 0; r < rows; ++r) {
            std::string line = std::to_string(rng.next_below(4)) + "," +
                               format_shortest(rng.next_double()) + "," +
                               std::to_string(rng.next_below(50));
            lines.push_back(line);
        }
        std::string shuffled_csv = csv;
        std::vector<std::string> shuffled = lines;
        for (size_t i = shuffled.size() - 1; i > 0; --i) {
            std::swap(shuffled[i], shuffled[rng.next_below(i + 1)]);
        }
        for (const auto& l : lines) csv += l + "\n";
        for (const auto& l : shuffled) shuffled_csv += l + "\n";
        DataTable t1 = parse_table(csv, "<a>");
        DataTable t2 = parse_table(shuffled_csv, "<b>");
        for (size_t c = 0; c < 3; ++c) {
            CHECK(t1.column(c).kind == t2.column(c).kind);
            CHECK(t1.column(c).cardinality == t2.column(c).cardinality);
        }
    }
}

TEST_CASE("random well-formed CSV always satisfies table invariants") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const size_t rows = 1 + rng.next_below(30);
        const size_t cols = 1 + rng.next_below(5);
        std::string csv;
        for (size_t c = 0; c < cols; ++c) csv += (c ? "," : "") + ("c" + std::to_string(c));
        csv += "\n";
        for (size_t r = 0; r < rows; ++r) {
            for (size_t c = 0; c < cols; ++c) {
                if (c) csv += ",";
                csv += format_shortest(rng.next_uniform(-5.0, 40.0));
            }
            csv += "\n";
        }
        DataTable t = parse_table(csv, "<fuzz>");
        CHECK(t.rows() == rows);
        // Invariants are enforced by the constructor; spot-check the codes.
        for (size_t c = 0; c < t.cols(); ++c) {
            if (!t.column(c).is_categorical()) continue;
            for (size_t r = 0; r < t.rows(); ++r) {
                int code = t.code_at(r, c);
                CHECK(code >= 0);
                CHECK(code < t.column(c).cardinality);
            }
        }
    }
}

TEST_CASE("csv writer round-trips values exactly") {
    DataTable t = crl::testing::table_from_columns({"x", "y"}, {{0.1, -3.25e-7, 19.0},
                                                                {1e14, 0.3333333333333333, -2.0}});
    DataTable back = parse_table(table_to_csv(t), "<round-trip>");
    for (size_t c = 0; c < 2; ++c) {
        for (size_t r = 0; r < 3; ++r) CHECK(t.at(r, c) == back.at(r, c));
    }
}

TEST_CASE("pbm masks parse and round-trip") {
    BinaryMask m = parse_mask("P1\n# comment\n3 2\n1 0 1\n0 1 0\n", "<test>");
    CHECK(m.width() == 3);
    CHECK(m.height() == 2);
    CHECK(m.at(0, 0));
    CHECK_FALSE(m.at(1, 0));
    CHECK(m.count() == 3);
    BinaryMask back = parse_mask(mask_to_pbm(m), "<round-trip>");
    CHECK(m == back);

    BinaryMask packed = parse_mask("P1\n2 2\n1001\n", "<packed>");
    CHECK(packed.at(0, 0));
    CHECK(packed.at(1, 1));
    CHECK(packed.count() == 2);

    CHECK_THROWS_WITH_AS(parse_mask("P2\n1 1\n0\n", "<t>"), doctest::Contains("P1"), Error);
    CHECK_THROWS_WITH_AS(parse_mask("P1\n2 2\n101\n", "<t>"), doctest::Contains("truncated"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_mask("P1\n2 2\n10x0\n", "<t>"), doctest::Contains("unexpected"),
                         Error);
    CHECK_THROWS_WITH_AS(parse_mask("P1\n2 2\n10102\n", "<t>"), doctest::Contains("trailing"),
                         Error);
}

TEST_CASE("run log loader enforces unique (run, metric) pairs") {
    auto runs = parse_runs("run,metric,value\n1,mic,0.5\n2,mic,0.6\n1,tic,0.5\n", "<t>");
    CHECK(runs.size() == 3);
    CHECK_THROWS_WITH_AS(parse_runs("run,metric,value\n1,mic,0.5\n1,mic,0.6\n", "<t>"),
                         doctest::Contains("duplicate"), Error);
    CHECK_THROWS_WITH_AS(parse_runs("run,name,value\n1,mic,0.5\n", "<t>"),
                         doctest::Contains("header"), Error);
}

TEST_CASE("missing file raises an io error") {
    try {
        load_graph(data_path("does_not_exist.json"));
        FAIL("expected an exception");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}
