// Brute-force reference implementations and random-fixture generators used by
// the unit and acceptance suites. Everything here is deliberately naive and
// independent of the library's algorithmic code paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "rng.hpp"
#include "types.hpp"

namespace crl::testing {

// All undirected simple paths between x and y; a path is blocked iff some
// interior node is a conditioned non-collider or an unconditioned collider
// with no conditioned descendant.
inline bool brute_force_d_separated(const CausalGraph& g, int x, int y,
                                    const std::vector<int>& given) {
    const int n = static_cast<int>(g.size());
    std::vector<bool> in_z(n, false);
    for (int z : given) in_z[z] = true;

    // descendants[v] includes v.
    std::vector<std::vector<bool>> descendants(n, std::vector<bool>(n, false));
    for (int v = 0; v < n; ++v) {
        std::vector<int> stack{v};
        descendants[v][v] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int c : g.children(u)) {
                if (!descendants[v][c]) {
                    descendants[v][c] = true;
                    stack.push_back(c);
                }
            }
        }
    }
    auto collider_open = [&](int v) {
        for (int d = 0; d < n; ++d) {
            if (descendants[v][d] && in_z[d]) return true;
        }
        return false;
    };

    std::vector<int> path{x};
    std::vector<bool> on_path(n, false);
    on_path[x] = true;
    bool connected = false;
    auto blocked = [&]() {
        for (size_t i = 1; i + 1 < path.size(); ++i) {
            int prev = path[i - 1];
            int v = path[i];
            int next = path[i + 1];
            bool in_prev = g.has_edge(prev, v);   // prev -> v
            bool out_next = g.has_edge(v, next);  // v -> next
            bool is_collider = in_prev && !out_next;
            if (is_collider) {
                if (!collider_open(v)) return true;
            } else {
                if (in_z[v]) return true;
            }
        }
        return false;
    };
    auto dfs = [&](auto&& self, int v) -> void {
        if (connected) return;
        if (v == y) {
            if (!blocked()) connected = true;
            return;
        }
        for (int u = 0; u < n; ++u) {
            if (on_path[u]) continue;
            if (!g.has_edge(v, u) && !g.has_edge(u, v)) continue;
            on_path[u] = true;
            path.push_back(u);
            self(self, u);
            path.pop_back();
            on_path[u] = false;
        }
    };
    dfs(dfs, x);
    return !connected;
}

struct JunctionCounts {
    size_t chains = 0;
    size_t forks = 0;
    size_t colliders = 0;
};

// Direct re-check of every ordered triple against the edge set.
inline JunctionCounts brute_force_junctions(const CausalGraph& g) {
    JunctionCounts counts;
    const int n = static_cast<int>(g.size());
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (a == b || b == c || a == c) continue;
                if (g.has_edge(a, b) && g.has_edge(b, c)) ++counts.chains;
                if (a < c && g.has_edge(b, a) && g.has_edge(b, c)) ++counts.forks;
                if (a < c && g.has_edge(a, b) && g.has_edge(c, b)) ++counts.colliders;
            }
        }
    }
    return counts;
}

// Best total over every injective row -> column map, by enumeration.
inline double brute_force_best_assignment(const std::vector<std::vector<double>>& m) {
    const size_t rows = m.size();
    const size_t cols = m[0].size();
    std::vector<int> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    double best = -1e300;
    do {
        double total = 0.0;
        for (size_t r = 0; r < rows; ++r) total += m[r][perm[r]];
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

inline CausalGraph random_dag(Rng& rng, int max_nodes, double edge_probability) {
    int n = 2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(max_nodes - 1)));
    std::vector<VariableSpec> vars(n);
    for (int i = 0; i < n; ++i) vars[i].name = "v" + std::to_string(i);
    // Random ordering + forward edges keeps the graph acyclic.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i) {
        int j = static_cast<int>(rng.next_below(static_cast<uint64_t>(i + 1)));
        std::swap(order[i], order[j]);
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.next_double() < edge_probability) edges.emplace_back(order[i], order[j]);
        }
    }
    return CausalGraph(std::move(vars), std::move(edges));
}

inline DataTable table_from_columns(const std::vector<std::string>& names,
                                    const std::vector<std::vector<double>>& columns) {
    std::vector<VariableSpec> specs(names.size());
    std::vector<double> cells;
    for (size_t c = 0; c < names.size(); ++c) {
        specs[c].name = names[c];
        cells.insert(cells.end(), columns[c].begin(), columns[c].end());
    }
    return DataTable(std::move(specs), std::move(cells), columns[0].size());
}

inline DataTable categorical_table_from_columns(const std::vector<std::string>& names,
                                                const std::vector<std::vector<double>>& columns,
                                                int cardinality) {
    std::vector<VariableSpec> specs(names.size());
    std::vector<double> cells;
    for (size_t c = 0; c < names.size(); ++c) {
        specs[c].name = names[c];
        specs[c].kind = VarKind::Categorical;
        specs[c].cardinality = cardinality;
        cells.insert(cells.end(), columns[c].begin(), columns[c].end());
    }
    return DataTable(std::move(specs), std::move(cells), columns[0].size());
}

// Contingency table helper for small categorical fixtures: counts[a][b]
// copies of the pair (a, b), in deterministic order.
inline DataTable table_from_counts(const std::string& x_name, const std::string& y_name,
                                   const std::vector<std::vector<int>>& counts) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (size_t a = 0; a < counts.size(); ++a) {
        for (size_t b = 0; b < counts[a].size(); ++b) {
            for (int k = 0; k < counts[a][b]; ++k) {
                xs.push_back(static_cast<double>(a));
                ys.push_back(static_cast<double>(b));
            }
        }
    }
    return categorical_table_from_columns({x_name, y_name}, {xs, ys},
                                          static_cast<int>(std::max(counts.size(),
                                                                    counts[0].size())));
}

inline std::string data_path(const std::string& name) {
    return std::string(CRL_TEST_DATA_DIR) + "/" + name;
}

}  // namespace crl::testing
