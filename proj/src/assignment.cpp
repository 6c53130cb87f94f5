#include "assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crl {

namespace {

constexpr size_t kSweepColLimit = 8;
constexpr double kTieTolerance = 1e-12;

void validate(const ScoreMatrix& m) {
    if (m.rows == 0 || m.cols == 0) fail(ErrorKind::Argument, "empty score matrix");
    if (m.rows > m.cols) {
        fail(ErrorKind::Argument, "score matrix needs rows <= cols (got " +
                                      std::to_string(m.rows) + " x " + std::to_string(m.cols) + ")");
    }
    if (m.values.size() != m.rows * m.cols) {
        fail(ErrorKind::Argument, "score matrix value count does not match its shape");
    }
    for (double v : m.values) {
        if (!std::isfinite(v)) fail(ErrorKind::Argument, "non-finite score matrix entry");
    }
}

// Shortest-augmenting-path assignment on the negated scores (maximization).
// Potentials-based O(rows^2 * cols); rows <= cols. skip_row / forced columns
// support the lexicographic refinement pass.
double solve_max(const ScoreMatrix& m, const std::vector<char>& row_active,
                 const std::vector<char>& col_active, std::vector<int>* assignment_out) {
    const size_t rows = m.rows;
    const size_t cols = m.cols;
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based columns; p[j] = row matched to column j (0 = free).
    std::vector<double> u(rows + 1, 0.0);
    std::vector<double> v(cols + 1, 0.0);
    std::vector<int> p(cols + 1, 0);
    std::vector<int> way(cols + 1, 0);

    for (size_t i = 1; i <= rows; ++i) {
        if (!row_active[i - 1]) continue;
        p[0] = static_cast<int>(i);
        int j0 = 0;
        std::vector<double> minv(cols + 1, inf);
        std::vector<char> used(cols + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0];
            int j1 = 0;
            double delta = inf;
            for (size_t j = 1; j <= cols; ++j) {
                if (used[j] || !col_active[j - 1]) continue;
                double cur = -m.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = static_cast<int>(j);
                }
            }
            for (size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else if (minv[j] < inf) {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    double total = 0.0;
    if (assignment_out != nullptr) assignment_out->assign(rows, -1);
    for (size_t j = 1; j <= cols; ++j) {
        if (p[j] != 0) {
            total += m.at(p[j] - 1, j - 1);
            if (assignment_out != nullptr) (*assignment_out)[p[j] - 1] = static_cast<int>(j - 1);
        }
    }
    return total;
}

}  // namespace

Matching hungarian_match(const ScoreMatrix& m) {
    validate(m);
    std::vector<char> row_active(m.rows, 1);
    std::vector<char> col_active(m.cols, 1);
    const double optimal = solve_max(m, row_active, col_active, nullptr);
    const double tol = kTieTolerance * std::max(1.0, std::abs(optimal));

    // Fix rows in order to the smallest column that still allows an optimal
    // completion; this yields the lexicographically smallest optimum.
    Matching match;
    match.assignment.assign(m.rows, -1);
    double fixed_sum = 0.0;
    for (size_t i = 0; i < m.rows; ++i) {
        row_active[i] = 0;
        bool placed = false;
        for (size_t j = 0; j < m.cols && !placed; ++j) {
            if (!col_active[j]) continue;
            col_active[j] = 0;
            double completion = fixed_sum + m.at(i, j) + solve_max(m, row_active, col_active, nullptr);
            if (std::abs(completion - optimal) <= tol) {
                match.assignment[i] = static_cast<int>(j);
                fixed_sum += m.at(i, j);
                placed = true;
            } else {
                col_active[j] = 1;
            }
        }
        if (!placed) fail(ErrorKind::Validation, "assignment refinement failed to converge");
    }
    for (size_t i = 0; i < m.rows; ++i) {
        match.per_pair.push_back(m.at(i, match.assignment[i]));
        match.total += match.per_pair.back();
    }
    return match;
}

SweepResult permutation_sweep(const ScoreMatrix& m) {
    validate(m);
    if (m.cols > kSweepColLimit) {
        fail(ErrorKind::Argument, "permutation sweep supports at most " +
                                      std::to_string(kSweepColLimit) + " columns, got " +
                                      std::to_string(m.cols));
    }
    SweepResult result;
    std::vector<int> current(m.rows, -1);
    std::vector<char> used(m.cols, 0);
    bool first = true;
    auto recurse = [&](auto&& self, size_t row, double total) -> void {
        if (row == m.rows) {
            ++result.evaluated;
            if (first || total > result.max) {
                result.max = total;
                result.argmax = current;
            }
            if (first || total < result.min) {
                result.min = total;
                result.argmin = current;
            }
            first = false;
            return;
        }
        for (size_t j = 0; j < m.cols; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            current[row] = static_cast<int>(j);
            self(self, row + 1, total + m.at(row, j));
            used[j] = 0;
        }
    };
    recurse(recurse, 0, 0.0);
    return result;
}

}  // namespace crl
