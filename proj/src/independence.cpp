#include "independence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "graph_analysis.hpp"
#include "rng.hpp"

namespace crl {

namespace {

constexpr double kLowExpectedThreshold = 5.0;

int require_categorical(const DataTable& data, const std::string& name) {
    int c = data.require_column(name);
    if (!data.column(c).is_categorical()) {
        fail(ErrorKind::Argument, "column '" + name +
                                      "' is numeric; discretize it first (e.g. --bins)");
    }
    return c;
}

}  // namespace

double chi2_upper_tail(double statistic, int dof) {
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

std::vector<int> equal_frequency_bins(std::span<const double> values, int bins) {
    if (bins < 2) fail(ErrorKind::Argument, "bins must be >= 2");
    const size_t n = values.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return values[a] < values[b]; });
    // Strict rank (count of smaller values) keeps ties in one bin and makes
    // the assignment invariant under monotone transforms.
    std::vector<int> codes(n, 0);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && values[order[j]] == values[order[i]]) ++j;
        int code = static_cast<int>(i * static_cast<size_t>(bins) / n);
        for (size_t k = i; k < j; ++k) codes[order[k]] = code;
        i = j;
    }
    return codes;
}

DataTable discretize_numeric_columns(const DataTable& data, int bins) {
    std::vector<VariableSpec> columns = data.columns();
    std::vector<double> cells(data.rows() * data.cols());
    for (size_t c = 0; c < data.cols(); ++c) {
        if (columns[c].is_categorical()) {
            for (size_t r = 0; r < data.rows(); ++r) cells[c * data.rows() + r] = data.at(r, c);
            continue;
        }
        auto codes = equal_frequency_bins(data.column_values(c), bins);
        for (size_t r = 0; r < data.rows(); ++r) {
            cells[c * data.rows() + r] = static_cast<double>(codes[r]);
        }
        columns[c].kind = VarKind::Categorical;
        columns[c].cardinality = bins;
    }
    return DataTable(std::move(columns), std::move(cells), data.rows());
}

namespace {

// Like chi2_independence, but reports a fully degenerate test as dof == 0
// instead of throwing; the audit skips such entries.
Chi2Result chi2_compute(const DataTable& data, const std::string& x, const std::string& y,
                        const std::vector<std::string>& given, double alpha,
                        Warnings* warnings) {
    if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::Argument, "alpha must be in (0, 1)");
    const int cx = require_categorical(data, x);
    const int cy = require_categorical(data, y);
    std::vector<int> cz;
    for (const auto& name : given) cz.push_back(require_categorical(data, name));

    const int rx = data.column(cx).cardinality;
    const int ry = data.column(cy).cardinality;
    const size_t n = data.rows();

    // Stratum key: mixed-radix combination of the conditioning codes.
    std::map<int64_t, std::vector<size_t>> strata;
    for (size_t r = 0; r < n; ++r) {
        int64_t key = 0;
        for (int c : cz) key = key * data.column(c).cardinality + data.code_at(r, c);
        strata[key].push_back(r);
    }

    Chi2Result result;
    result.alpha = alpha;
    for (const auto& [key, rows] : strata) {
        (void)key;
        std::vector<double> counts(static_cast<size_t>(rx) * ry, 0.0);
        std::vector<double> xm(rx, 0.0);
        std::vector<double> ym(ry, 0.0);
        for (size_t r : rows) {
            int a = data.code_at(r, cx);
            int b = data.code_at(r, cy);
            counts[static_cast<size_t>(a) * ry + b] += 1.0;
            xm[a] += 1.0;
            ym[b] += 1.0;
        }
        int nx = static_cast<int>(std::count_if(xm.begin(), xm.end(), [](double v) { return v > 0; }));
        int ny = static_cast<int>(std::count_if(ym.begin(), ym.end(), [](double v) { return v > 0; }));
        if (nx < 2 || ny < 2) continue;  // degenerate stratum
        const double ns = static_cast<double>(rows.size());
        for (int a = 0; a < rx; ++a) {
            if (xm[a] == 0) continue;
            for (int b = 0; b < ry; ++b) {
                if (ym[b] == 0) continue;
                double expected = xm[a] * ym[b] / ns;
                double observed = counts[static_cast<size_t>(a) * ry + b];
                result.statistic += (observed - expected) * (observed - expected) / expected;
                if (expected < kLowExpectedThreshold) ++result.low_expected_cells;
            }
        }
        result.dof += (nx - 1) * (ny - 1);
    }
    if (result.dof == 0) return result;
    if (result.low_expected_cells > 0) {
        warn(warnings, "chi2 test of '" + x + "' vs '" + y + "' has " +
                           std::to_string(result.low_expected_cells) +
                           " expected cell(s) below 5; the asymptotic p-value may be inaccurate");
    }
    result.p_value = chi2_upper_tail(result.statistic, result.dof);
    result.dependent = result.p_value < alpha;
    return result;
}

}  // namespace

Chi2Result chi2_independence(const DataTable& data, const std::string& x, const std::string& y,
                             const std::vector<std::string>& given, double alpha,
                             Warnings* warnings) {
    Chi2Result result = chi2_compute(data, x, y, given, alpha, warnings);
    if (result.dof == 0) {
        fail(ErrorKind::Validation, "chi2 test of '" + x + "' vs '" + y +
                                        "' is fully degenerate (total dof = 0)");
    }
    return result;
}

AuditReport audit_graph_against_data(const CausalGraph& g, const DataTable& data,
                                     int max_conditioning, double alpha, Warnings* warnings) {
    std::vector<std::string> observed;
    for (const auto& v : g.variables()) {
        if (!v.observed) continue;
        int c = data.column_index(v.name);
        if (c < 0) fail(ErrorKind::Argument, "graph variable '" + v.name + "' is not a data column");
        if (!data.column(c).is_categorical()) {
            fail(ErrorKind::Argument, "column '" + v.name +
                                          "' is numeric; the audit needs categorical data "
                                          "(discretize with --bins)");
        }
        observed.push_back(v.name);
    }

    AuditReport report;
    report.alpha = alpha;
    size_t degenerate = 0;
    auto push_entry = [&](AuditEntry entry) {
        entry.test = chi2_compute(data, entry.x, entry.y, entry.given, alpha, warnings);
        if (entry.test.dof == 0) {
            // Untestable pair (a constant or fully stratified column); it can
            // neither confirm nor contradict the graph.
            ++degenerate;
            std::string scope = entry.given.empty() ? "" : " given a conditioning set";
            warn(warnings, "audit entry (" + entry.x + ", " + entry.y + ")" + scope +
                               " is fully degenerate (dof = 0); skipped");
            return;
        }
        entry.consistent = entry.expected_independent ? !entry.test.dependent
                                                      : entry.test.dependent;
        report.entries.push_back(std::move(entry));
    };
    for (const auto& ind : implied_independencies(g, max_conditioning)) {
        AuditEntry entry;
        entry.x = ind.x;
        entry.y = ind.y;
        entry.given = ind.given;
        entry.expected_independent = true;
        push_entry(std::move(entry));
    }
    std::vector<std::pair<std::string, std::string>> adjacent;
    for (auto [a, b] : g.edges()) {
        const auto& va = g.variable(a);
        const auto& vb = g.variable(b);
        if (!va.observed || !vb.observed) continue;
        auto lo = va.name;
        auto hi = vb.name;
        if (hi < lo) std::swap(lo, hi);
        adjacent.emplace_back(lo, hi);
    }
    std::sort(adjacent.begin(), adjacent.end());
    adjacent.erase(std::unique(adjacent.begin(), adjacent.end()), adjacent.end());
    for (const auto& [a, b] : adjacent) {
        AuditEntry entry;
        entry.x = a;
        entry.y = b;
        entry.expected_independent = false;
        push_entry(std::move(entry));
    }
    if (report.entries.empty()) {
        if (degenerate > 0) {
            fail(ErrorKind::Validation,
                 "audit is fully degenerate: every entry has total dof = 0");
        }
        warn(warnings, "audit has no testable entries for this graph");
        report.violation_rate = 0.0;
        return report;
    }
    size_t violations = 0;
    for (const auto& e : report.entries) {
        if (!e.consistent) ++violations;
    }
    report.violation_rate = static_cast<double>(violations) / static_cast<double>(report.entries.size());
    return report;
}

DataTable enforce_independence(const DataTable& data, const std::string& x, const std::string& y,
                               uint64_t seed, Warnings* warnings) {
    const int cx = require_categorical(data, x);
    const int cy = require_categorical(data, y);
    const int rx = data.column(cx).cardinality;
    const int ry = data.column(cy).cardinality;
    const double n = static_cast<double>(data.rows());

    std::vector<std::vector<std::vector<size_t>>> cell_rows(
        rx, std::vector<std::vector<size_t>>(ry));
    std::vector<double> px(rx, 0.0);
    std::vector<double> py(ry, 0.0);
    for (size_t r = 0; r < data.rows(); ++r) {
        int a = data.code_at(r, cx);
        int b = data.code_at(r, cy);
        cell_rows[a][b].push_back(r);
        px[a] += 1.0;
        py[b] += 1.0;
    }
    for (auto& v : px) v /= n;
    for (auto& v : py) v /= n;

    // Largest t with t * px[a] * py[b] <= observed count for every cell.
    double t = n;
    for (int a = 0; a < rx; ++a) {
        for (int b = 0; b < ry; ++b) {
            double p = px[a] * py[b];
            if (p <= 0.0) continue;
            double observed = static_cast<double>(cell_rows[a][b].size());
            if (observed == 0.0) {
                fail(ErrorKind::Validation,
                     "cannot enforce independence of '" + x + "' and '" + y + "': cell (" +
                         std::to_string(a) + ", " + std::to_string(b) + ") has no support");
            }
            t = std::min(t, observed / p);
        }
    }

    std::vector<size_t> keep;
    for (int a = 0; a < rx; ++a) {
        for (int b = 0; b < ry; ++b) {
            double p = px[a] * py[b];
            if (p <= 0.0) continue;
            auto& rows = cell_rows[a][b];
            size_t target = static_cast<size_t>(std::floor(t * p + 1e-9));
            if (target >= rows.size()) {
                keep.insert(keep.end(), rows.begin(), rows.end());
                continue;
            }
            // Partial Fisher-Yates with a per-cell stream keeps the draw
            // independent of cell iteration order.
            Rng rng = Rng::stream(seed, static_cast<uint64_t>(a), static_cast<uint64_t>(b));
            for (size_t i = 0; i < target; ++i) {
                size_t j = i + static_cast<size_t>(rng.next_below(rows.size() - i));
                std::swap(rows[i], rows[j]);
            }
            keep.insert(keep.end(), rows.begin(), rows.begin() + target);
        }
    }
    if (keep.empty()) {
        fail(ErrorKind::Validation, "enforcing independence of '" + x + "' and '" + y +
                                        "' leaves an empty subsample");
    }
    std::sort(keep.begin(), keep.end());
    if (keep.size() < data.rows()) {
        warn(warnings, "independence filter kept " + std::to_string(keep.size()) + " of " +
                           std::to_string(data.rows()) + " rows");
    }
    return data.select_rows(keep);
}

}  // namespace crl
