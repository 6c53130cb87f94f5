#include "mic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace crl {

namespace {

constexpr int kClumpFactor = 15;
constexpr int kMinSamples = 25;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// a * ln(a) for integer a, with 0 ln 0 = 0.
std::vector<double> vlogv_table(size_t n) {
    std::vector<double> table(n + 1, 0.0);
    for (size_t a = 1; a <= n; ++a) {
        table[a] = static_cast<double>(a) * std::log(static_cast<double>(a));
    }
    return table;
}

// Greedy balanced grouping of ordered runs into at most `target` groups; a
// run is never split. Mirrors the equipartition rule of the published
// estimator: advance to the next group when adding the run would leave the
// current group at least as unbalanced as closing it.
std::vector<int> balanced_groups(const std::vector<size_t>& run_sizes, int target) {
    const size_t total = std::accumulate(run_sizes.begin(), run_sizes.end(), size_t{0});
    std::vector<int> group(run_sizes.size(), 0);
    int cur = 0;
    double in_cur = 0.0;
    size_t assigned = 0;
    double desired = static_cast<double>(total) / target;
    for (size_t r = 0; r < run_sizes.size(); ++r) {
        double s = static_cast<double>(run_sizes[r]);
        if (in_cur > 0.0 && cur < target - 1 &&
            std::abs(in_cur + s - desired) >= std::abs(in_cur - desired)) {
            ++cur;
            in_cur = 0.0;
            desired = static_cast<double>(total - assigned) / (target - cur);
        }
        group[r] = cur;
        in_cur += s;
        assigned += run_sizes[r];
    }
    return group;
}

std::vector<size_t> value_runs(const std::vector<double>& sorted_values) {
    std::vector<size_t> runs;
    size_t i = 0;
    while (i < sorted_values.size()) {
        size_t j = i;
        while (j < sorted_values.size() && sorted_values[j] == sorted_values[i]) ++j;
        runs.push_back(j - i);
        i = j;
    }
    return runs;
}

// Clump boundaries (cumulative point counts) for points sorted by the
// optimized axis. A boundary may separate two points only where the axis
// value changes; consecutive points sharing a row merge into one clump, and
// an equal-value run with mixed rows is atomic.
std::vector<size_t> clump_bounds(const std::vector<double>& axis, const std::vector<int>& rows) {
    const size_t n = axis.size();
    std::vector<size_t> bounds{0};
    int prev_label = -1;
    bool prev_atomic = true;
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && axis[j] == axis[i]) ++j;
        bool uniform = true;
        for (size_t k = i + 1; k < j; ++k) {
            if (rows[k] != rows[i]) {
                uniform = false;
                break;
            }
        }
        if (uniform && !prev_atomic && rows[i] == prev_label) {
            bounds.back() = j;  // extend the open clump
        } else {
            bounds.push_back(j);
            prev_label = rows[i];
            prev_atomic = !uniform;
        }
        i = j;
    }
    return bounds;
}

std::vector<size_t> merge_bounds(const std::vector<size_t>& bounds, int target) {
    std::vector<size_t> sizes;
    for (size_t i = 1; i < bounds.size(); ++i) sizes.push_back(bounds[i] - bounds[i - 1]);
    auto group = balanced_groups(sizes, target);
    std::vector<size_t> merged{0};
    for (size_t i = 0; i < sizes.size(); ++i) {
        if (i + 1 == sizes.size() || group[i + 1] != group[i]) {
            merged.push_back(bounds[i + 1]);
        }
    }
    return merged;
}

// Best exactly-k objective H(P) - H(P,Q) over partitions on the given
// boundaries, turned into best at-most-k mutual information (nats).
std::vector<double> dp_best_mi_impl(const std::vector<int>& rows, int nrows,
                                    const std::vector<size_t>& bounds, int max_cols,
                                    const std::vector<double>& vlogv) {
    const size_t n = rows.size();
    const size_t m = bounds.size() - 1;
    const double dn = static_cast<double>(n);

    std::vector<int> prefix((m + 1) * nrows, 0);
    {
        size_t p = 1;
        std::vector<int> acc(nrows, 0);
        for (size_t i = 0; i < n; ++i) {
            ++acc[rows[i]];
            if (i + 1 == bounds[p]) {
                std::copy(acc.begin(), acc.end(), prefix.begin() + p * nrows);
                ++p;
            }
        }
    }
    std::vector<int> total(prefix.begin() + m * nrows, prefix.begin() + (m + 1) * nrows);
    double hq = 0.0;
    for (int r = 0; r < nrows; ++r) hq += vlogv[total[r]];
    hq = std::log(dn) - hq / dn;

    // f(s, t): contribution of one column spanning boundaries (s, t].
    // Laid out as fmat[(t-1)*m + s] so the DP scans s contiguously.
    std::vector<double> fmat(m * m, 0.0);
    for (size_t t = 1; t <= m; ++t) {
        const int* pt = prefix.data() + t * nrows;
        double* row = fmat.data() + (t - 1) * m;
        for (size_t s = 0; s < t; ++s) {
            const int* ps = prefix.data() + s * nrows;
            double acc = -vlogv[bounds[t] - bounds[s]];
            for (int r = 0; r < nrows; ++r) acc += vlogv[pt[r] - ps[r]];
            row[s] = acc / dn;
        }
    }
    auto f = [&](size_t s, size_t t) { return fmat[(t - 1) * m + s]; };

    std::vector<double> best_exact(static_cast<size_t>(max_cols) + 1, kNegInf);
    std::vector<double> prev(m + 1, kNegInf);
    std::vector<double> cur(m + 1, kNegInf);
    for (size_t t = 1; t <= m; ++t) prev[t] = f(0, t);
    best_exact[1] = prev[m];
    for (int k = 2; k <= max_cols; ++k) {
        std::fill(cur.begin(), cur.end(), kNegInf);
        for (size_t t = static_cast<size_t>(k); t <= m; ++t) {
            const double* frow = fmat.data() + (t - 1) * m;
            double best = kNegInf;
            for (size_t s = static_cast<size_t>(k - 1); s < t; ++s) {
                double cand = prev[s] + frow[s];
                if (cand > best) best = cand;
            }
            cur[t] = best;
        }
        best_exact[k] = cur[m];
        prev.swap(cur);
    }

    std::vector<double> out(static_cast<size_t>(max_cols) + 1, 0.0);
    double running = kNegInf;
    for (int k = 1; k <= max_cols; ++k) {
        running = std::max(running, best_exact[k]);
        out[k] = running > kNegInf ? std::max(0.0, running + hq) : 0.0;
    }
    return out;
}

// grid[l][k] = best MI (nats) with the partitioned axis equipartitioned into
// l groups and the optimized axis cut into at most k parts.
std::vector<std::vector<double>> eval_orientation(std::span<const double> optimized,
                                                  std::span<const double> partitioned, int budget,
                                                  const std::vector<double>& vlogv) {
    const size_t n = optimized.size();
    const int max_l = budget / 2;

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (optimized[a] != optimized[b]) return optimized[a] < optimized[b];
        return partitioned[a] < partitioned[b];
    });
    std::vector<double> axis(n);
    for (size_t i = 0; i < n; ++i) axis[i] = optimized[order[i]];

    std::vector<size_t> vorder(n);
    std::iota(vorder.begin(), vorder.end(), 0);
    std::sort(vorder.begin(), vorder.end(),
              [&](size_t a, size_t b) { return partitioned[a] < partitioned[b]; });
    std::vector<double> vsorted(n);
    for (size_t i = 0; i < n; ++i) vsorted[i] = partitioned[vorder[i]];
    auto runs = value_runs(vsorted);

    std::vector<std::vector<double>> grid(static_cast<size_t>(max_l) + 1);
    std::vector<int> row_of(n);
    std::vector<int> rows_in_axis_order(n);
    for (int l = 2; l <= max_l; ++l) {
        auto groups = balanced_groups(runs, l);
        {
            size_t pos = 0;
            for (size_t r = 0; r < runs.size(); ++r) {
                for (size_t k = 0; k < runs[r]; ++k) row_of[vorder[pos + k]] = groups[r];
                pos += runs[r];
            }
        }
        int nrows = *std::max_element(groups.begin(), groups.end()) + 1;
        for (size_t i = 0; i < n; ++i) rows_in_axis_order[i] = row_of[order[i]];

        const int max_cols = budget / l;
        auto bounds = clump_bounds(axis, rows_in_axis_order);
        const int cap = std::max(1, kClumpFactor * max_cols);
        if (static_cast<int>(bounds.size()) - 1 > cap) bounds = merge_bounds(bounds, cap);
        grid[l] = dp_best_mi_impl(rows_in_axis_order, nrows, bounds, max_cols, vlogv);
    }
    return grid;
}

bool is_constant(std::span<const double> v) {
    for (double x : v) {
        if (x != v.front()) return false;
    }
    return true;
}

}  // namespace

std::vector<double> optimize_axis_mi(const std::vector<int>& row_of_point_in_x_order, int rows,
                                     int max_cols, int clump_factor) {
    const size_t n = row_of_point_in_x_order.size();
    std::vector<double> axis(n);
    for (size_t i = 0; i < n; ++i) axis[i] = static_cast<double>(i);  // distinct positions
    auto vlogv = vlogv_table(n);
    auto bounds = clump_bounds(axis, row_of_point_in_x_order);
    const int cap = std::max(1, clump_factor * max_cols);
    if (static_cast<int>(bounds.size()) - 1 > cap) bounds = merge_bounds(bounds, cap);
    auto out = dp_best_mi_impl(row_of_point_in_x_order, rows, bounds, max_cols, vlogv);
    return {out.begin() + 2, out.end()};
}

CharacteristicStats characteristic_stats(std::span<const double> x, std::span<const double> y,
                                         Warnings* warnings) {
    if (x.size() != y.size()) fail(ErrorKind::Argument, "paired columns differ in length");
    const size_t n = x.size();
    if (n < kMinSamples) {
        fail(ErrorKind::Argument, "association estimate needs at least " +
                                      std::to_string(kMinSamples) + " samples, got " +
                                      std::to_string(n));
    }
    if (is_constant(x) || is_constant(y)) {
        warn(warnings, "constant column in association estimate; coefficient is 0");
        return {};
    }
    const int budget =
        static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 0.6) - 1e-9));
    auto vlogv = vlogv_table(n);
    auto a = eval_orientation(x, y, budget, vlogv);  // a[l][k]: optimize x | partition y
    auto t = eval_orientation(y, x, budget, vlogv);  // t[k][l]: optimize y | partition x

    CharacteristicStats stats;
    double sum = 0.0;
    size_t count = 0;
    const int max_l = budget / 2;
    for (int l = 2; l <= max_l; ++l) {
        const int max_k = budget / l;
        for (int k = 2; k <= max_k; ++k) {
            double mi = a[l][k];
            if (k <= max_l && l <= budget / k) mi = std::max(mi, t[k][l]);
            double entry = mi / std::log(static_cast<double>(std::min(k, l)));
            entry = std::clamp(entry, 0.0, 1.0);
            stats.mic = std::max(stats.mic, entry);
            sum += entry;
            ++count;
        }
    }
    if (count > 0) stats.tic = sum / static_cast<double>(count);
    return stats;
}

double mic_pair(std::span<const double> x, std::span<const double> y, Warnings* warnings) {
    return characteristic_stats(x, y, warnings).mic;
}

double tic_pair(std::span<const double> x, std::span<const double> y, Warnings* warnings) {
    return characteristic_stats(x, y, warnings).tic;
}

}  // namespace crl
