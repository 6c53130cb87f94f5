#include <doctest.h>

#include <cmath>

#include "independence.hpp"
#include "oracles.hpp"
#include "rng.hpp"

using namespace crl;
using crl::testing::categorical_table_from_columns;
using crl::testing::table_from_counts;

TEST_CASE("hand-derived 2x2 table: statistic 20, dof 1, p ~ 7.74e-6") {
    DataTable t = table_from_counts("x", "y", {{30, 10}, {10, 30}});
    auto r = chi2_independence(t, "x", "y", {}, 0.05);
    CHECK(r.statistic == 20.0);  // expected counts are all exactly 20
    CHECK(r.dof == 1);
    CHECK(r.p_value == doctest::Approx(7.744216431044088e-06).epsilon(1e-9));
    CHECK(r.dependent);
    CHECK(r.low_expected_cells == 0);
}

TEST_CASE("chi2 upper tail matches reference values and is monotone") {
    CHECK(chi2_upper_tail(0.0, 1) == 1.0);
    CHECK(chi2_upper_tail(3.5, 2) == doctest::Approx(0.1737739434504451).epsilon(1e-12));
    CHECK(chi2_upper_tail(0.8, 5) == doctest::Approx(0.9770333437569263).epsilon(1e-12));
    double prev = 1.0;
    for (double s = 0.5; s < 40.0; s += 0.5) {
        double p = chi2_upper_tail(s, 3);
        CHECK(p < prev);
        prev = p;
    }
}

TEST_CASE("identical columns are dependent with a vanishing p-value") {
    std::vector<double> x;
    for (int i = 0; i < 100; ++i) x.push_back(i % 2);
    DataTable t = categorical_table_from_columns({"x", "y"}, {x, x}, 2);
    auto r = chi2_independence(t, "x", "y", {}, 0.05);
    CHECK(r.dependent);
    CHECK(r.p_value < 1e-20);
}

TEST_CASE("2x2 statistic matches the closed form") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        double a = 1 + static_cast<double>(rng.next_below(40));
        double b = 1 + static_cast<double>(rng.next_below(40));
        double c = 1 + static_cast<double>(rng.next_below(40));
        double d = 1 + static_cast<double>(rng.next_below(40));
        DataTable t = table_from_counts("x", "y", {{static_cast<int>(a), static_cast<int>(b)},
                                                   {static_cast<int>(c), static_cast<int>(d)}});
        double n = a + b + c + d;
        double closed = n * (a * d - b * c) * (a * d - b * c) /
                        ((a + b) * (c + d) * (a + c) * (b + d));
        auto r = chi2_independence(t, "x", "y", {}, 0.05);
        CHECK(r.statistic == doctest::Approx(closed).epsilon(1e-9));
    }
}

TEST_CASE("statistic is invariant under label and row permutations") {
    Rng rng(17);
    std::vector<double> x;
    std::vector<double> y;
    for (int i = 0; i < 500; ++i) {
        x.push_back(static_cast<double>(rng.next_below(3)));
        y.push_back(static_cast<double>(rng.next_below(4)));
    }
    DataTable t = categorical_table_from_columns({"x", "y"}, {x, y}, 4);
    double base = chi2_independence(t, "x", "y", {}, 0.05).statistic;

    // Relabel x: 0 -> 2, 1 -> 0, 2 -> 1.
    std::vector<double> xr = x;
    for (auto& v : xr) v = v == 0 ? 2 : (v == 1 ? 0 : 1);
    DataTable relabeled = categorical_table_from_columns({"x", "y"}, {xr, y}, 4);
    CHECK(chi2_independence(relabeled, "x", "y", {}, 0.05).statistic ==
          doctest::Approx(base).epsilon(1e-12));

    // Shuffle rows.
    std::vector<size_t> order(x.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[rng.next_below(i + 1)]);
    std::vector<double> xs(x.size());
    std::vector<double> ys(x.size());
    for (size_t i = 0; i < order.size(); ++i) {
        xs[i] = x[order[i]];
        ys[i] = y[order[i]];
    }
    DataTable shuffled = categorical_table_from_columns({"x", "y"}, {xs, ys}, 4);
    CHECK(chi2_independence(shuffled, "x", "y", {}, 0.05).statistic ==
          doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("conditional statistic is the stratified sum") {
    Rng rng(29);
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    for (int i = 0; i < 600; ++i) {
        x.push_back(static_cast<double>(rng.next_below(2)));
        y.push_back(static_cast<double>(rng.next_below(2)));
        z.push_back(static_cast<double>(rng.next_below(3)));
    }
    DataTable t = categorical_table_from_columns({"x", "y", "z"}, {x, y, z}, 3);
    auto conditional = chi2_independence(t, "x", "y", {"z"}, 0.05);

    double stat = 0.0;
    int dof = 0;
    for (int level = 0; level < 3; ++level) {
        std::vector<double> xs;
        std::vector<double> ys;
        for (size_t i = 0; i < z.size(); ++i) {
            if (z[i] == level) {
                xs.push_back(x[i]);
                ys.push_back(y[i]);
            }
        }
        DataTable stratum = categorical_table_from_columns({"x", "y"}, {xs, ys}, 2);
        auto r = chi2_independence(stratum, "x", "y", {}, 0.05);
        stat += r.statistic;
        dof += r.dof;
    }
    CHECK(conditional.statistic == doctest::Approx(stat).epsilon(1e-12));
    CHECK(conditional.dof == dof);
}

TEST_CASE("degenerate strata contribute nothing; fully degenerate data errors") {
    // All mass in one y level: no dof anywhere.
    DataTable degenerate = table_from_counts("x", "y", {{10, 0}, {10, 0}});
    CHECK_THROWS_WITH_AS(chi2_independence(degenerate, "x", "y", {}, 0.05),
                         doctest::Contains("degenerate"), Error);
    // A single row cannot be tested either.
    DataTable single = table_from_counts("x", "y", {{1, 0}, {0, 0}});
    CHECK_THROWS_AS(chi2_independence(single, "x", "y", {}, 0.05), Error);
}

TEST_CASE("numeric columns are rejected with binning guidance") {
    DataTable t = crl::testing::table_from_columns({"x", "y"}, {{0.5, 1.5, 2.5}, {1.0, 2.0, 3.5}});
    CHECK_THROWS_WITH_AS(chi2_independence(t, "x", "y", {}, 0.05), doctest::Contains("--bins"),
                         Error);
}

TEST_CASE("low expected counts raise a warning flag, not an error") {
    DataTable t = table_from_counts("x", "y", {{2, 1}, {1, 2}});
    Warnings warnings;
    auto r = chi2_independence(t, "x", "y", {}, 0.05, &warnings);
    CHECK(r.low_expected_cells == 4);
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("alpha is validated") {
    DataTable t = table_from_counts("x", "y", {{5, 5}, {5, 5}});
    CHECK_THROWS_AS(chi2_independence(t, "x", "y", {}, 0.0), Error);
    CHECK_THROWS_AS(chi2_independence(t, "x", "y", {}, 1.0), Error);
}

TEST_CASE("null rejection rate is near alpha (quick calibration)") {
    const int trials = 300;
    const size_t n = 2000;
    int rejections = 0;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(1000 + trial);
        std::vector<double> x(n);
        std::vector<double> y(n);
        for (size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(rng.next_below(2));
            y[i] = static_cast<double>(rng.next_below(2));
        }
        DataTable t = categorical_table_from_columns({"x", "y"}, {x, y}, 2);
        if (chi2_independence(t, "x", "y", {}, 0.05).dependent) ++rejections;
    }
    double rate = static_cast<double>(rejections) / trials;
    CHECK(rate > 0.02);
    CHECK(rate < 0.09);
}

TEST_CASE("equal-frequency binning balances and preserves order") {
    std::vector<double> values;
    Rng rng(5);
    for (int i = 0; i < 200; ++i) values.push_back(rng.next_double());
    auto codes = equal_frequency_bins(values, 4);
    std::vector<int> counts(4, 0);
    for (size_t i = 0; i < values.size(); ++i) {
        ++counts[codes[i]];
        for (size_t j = 0; j < values.size(); ++j) {
            if (values[i] < values[j]) CHECK(codes[i] <= codes[j]);
        }
    }
    for (int c : counts) CHECK(c == 50);

    // Ties share a bin.
    std::vector<double> tied = {1, 1, 1, 1, 2, 3};
    auto tied_codes = equal_frequency_bins(tied, 3);
    CHECK(tied_codes[0] == tied_codes[3]);
}

TEST_CASE("discretize_numeric_columns leaves categorical columns alone") {
    std::vector<VariableSpec> specs(2);
    specs[0].name = "cat";
    specs[0].kind = VarKind::Categorical;
    specs[0].cardinality = 2;
    specs[1].name = "num";
    std::vector<double> cells = {0, 1, 0, 1, 0.1, 0.9, 0.5, 0.7};
    DataTable t(specs, cells, 4);
    DataTable binned = discretize_numeric_columns(t, 2);
    CHECK(binned.column(0).cardinality == 2);
    CHECK(binned.column(1).is_categorical());
    CHECK(binned.column(1).cardinality == 2);
    CHECK(binned.at(0, 0) == 0);  // categorical copied through
    CHECK(binned.code_at(0, 1) == 0);
    CHECK(binned.code_at(1, 1) == 1);
}

TEST_CASE("independence filter reproduces the derived target cells") {
    DataTable t = table_from_counts("x", "y", {{30, 10}, {10, 30}});
    Warnings warnings;
    DataTable filtered = enforce_independence(t, "x", "y", 7, &warnings);
    CHECK(filtered.rows() == 40);
    int counts[2][2] = {{0, 0}, {0, 0}};
    for (size_t r = 0; r < filtered.rows(); ++r) {
        counts[filtered.code_at(r, 0)][filtered.code_at(r, 1)]++;
    }
    CHECK(counts[0][0] == 10);
    CHECK(counts[0][1] == 10);
    CHECK(counts[1][0] == 10);
    CHECK(counts[1][1] == 10);
    // Exactly proportional counts give a vanishing statistic.
    auto r = chi2_independence(filtered, "x", "y", {}, 0.05);
    CHECK(r.statistic <= 1e-6);
    CHECK_FALSE(warnings.empty());
}

TEST_CASE("already-independent exact counts are returned unchanged") {
    DataTable t = table_from_counts("x", "y", {{25, 25}, {25, 25}});
    DataTable filtered = enforce_independence(t, "x", "y", 3);
    REQUIRE(filtered.rows() == 100);
    for (size_t r = 0; r < filtered.rows(); ++r) {
        CHECK(filtered.at(r, 0) == t.at(r, 0));
        CHECK(filtered.at(r, 1) == t.at(r, 1));
    }
}

TEST_CASE("empty feasible cell makes the filter fail") {
    DataTable t = table_from_counts("x", "y", {{10, 0}, {0, 10}});
    CHECK_THROWS_WITH_AS(enforce_independence(t, "x", "y", 0), doctest::Contains("support"),
                         Error);
}

TEST_CASE("filter output is a row subset and re-tests independent") {
    Rng rng(77);
    const size_t n = 2000;
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(rng.next_below(2));
        // Correlated y.
        y[i] = rng.next_double() < (x[i] == 1 ? 0.8 : 0.3) ? 1.0 : 0.0;
    }
    DataTable t = categorical_table_from_columns({"x", "y"}, {x, y}, 2);
    CHECK(chi2_independence(t, "x", "y", {}, 0.05).dependent);
    DataTable filtered = enforce_independence(t, "x", "y", 9);
    REQUIRE(filtered.rows() >= 100);
    CHECK(filtered.rows() < t.rows());
    CHECK_FALSE(chi2_independence(filtered, "x", "y", {}, 0.05).dependent);
    // Deterministic given the seed.
    DataTable again = enforce_independence(t, "x", "y", 9);
    CHECK(again.rows() == filtered.rows());
    for (size_t r = 0; r < again.rows(); ++r) CHECK(again.at(r, 0) == filtered.at(r, 0));
}
