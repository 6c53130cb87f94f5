#include "graph_analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <map>
#include <set>

#include "io.hpp"
#include "util.hpp"

namespace crl {

namespace {

std::string cycle_message(const CausalGraph& g, const std::vector<bool>& removed) {
    // Walk parents inside the remaining (cyclic) region until a node repeats.
    int start = -1;
    for (size_t i = 0; i < g.size(); ++i) {
        if (!removed[i]) {
            start = static_cast<int>(i);
            break;
        }
    }
    std::vector<int> path;
    std::vector<int> seen_at(g.size(), -1);
    int v = start;
    while (seen_at[v] < 0) {
        seen_at[v] = static_cast<int>(path.size());
        path.push_back(v);
        for (int p : g.parents(v)) {
            if (!removed[p]) {
                v = p;
                break;
            }
        }
    }
    std::vector<std::string> names;
    for (size_t i = seen_at[v]; i < path.size(); ++i) names.push_back(g.variable(path[i]).name);
    std::reverse(names.begin(), names.end());  // parent walk found it backwards
    names.push_back(names.front());
    return "graph contains a cycle: " + join(names, " -> ");
}

std::vector<bool> ancestors_of(const CausalGraph& g, const std::vector<int>& nodes) {
    std::vector<bool> anc(g.size(), false);
    std::deque<int> queue(nodes.begin(), nodes.end());
    for (int v : nodes) anc[v] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : g.parents(v)) {
            if (!anc[p]) {
                anc[p] = true;
                queue.push_back(p);
            }
        }
    }
    return anc;
}

bool reaches(const CausalGraph& g, int from, int to, int avoid) {
    if (from == avoid || to == avoid) return false;
    std::vector<bool> seen(g.size(), false);
    std::deque<int> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int c : g.children(v)) {
            if (c == avoid || seen[c]) continue;
            if (c == to) return true;
            seen[c] = true;
            queue.push_back(c);
        }
    }
    return false;
}

}  // namespace

std::vector<std::string> topological_order(const CausalGraph& g) {
    std::vector<int> indeg(g.size(), 0);
    for (auto [a, b] : g.edges()) {
        (void)a;
        ++indeg[b];
    }
    std::set<int> ready;
    for (size_t i = 0; i < g.size(); ++i) {
        if (indeg[i] == 0) ready.insert(static_cast<int>(i));
    }
    std::vector<std::string> order;
    std::vector<bool> removed(g.size(), false);
    while (!ready.empty()) {
        int v = *ready.begin();
        ready.erase(ready.begin());
        removed[v] = true;
        order.push_back(g.variable(v).name);
        for (int c : g.children(v)) {
            if (--indeg[c] == 0) ready.insert(c);
        }
    }
    if (order.size() != g.size()) fail(ErrorKind::Validation, cycle_message(g, removed));
    return order;
}

JunctionCensus junction_census(const CausalGraph& g) {
    JunctionCensus census;
    auto name = [&](int i) { return g.variable(i).name; };
    for (size_t b = 0; b < g.size(); ++b) {
        int bi = static_cast<int>(b);
        for (int a : g.parents(bi)) {
            for (int c : g.children(bi)) {
                if (a != c) census.chains.push_back({name(a), name(bi), name(c)});
            }
        }
        const auto& kids = g.children(bi);
        for (size_t i = 0; i < kids.size(); ++i) {
            for (size_t j = i + 1; j < kids.size(); ++j) {
                auto lo = name(kids[i]);
                auto hi = name(kids[j]);
                if (hi < lo) std::swap(lo, hi);
                census.forks.push_back({lo, name(bi), hi});
            }
        }
        const auto& pars = g.parents(bi);
        for (size_t i = 0; i < pars.size(); ++i) {
            for (size_t j = i + 1; j < pars.size(); ++j) {
                auto lo = name(pars[i]);
                auto hi = name(pars[j]);
                if (hi < lo) std::swap(lo, hi);
                census.colliders.push_back({lo, name(bi), hi});
            }
        }
    }
    std::sort(census.chains.begin(), census.chains.end());
    std::sort(census.forks.begin(), census.forks.end());
    std::sort(census.colliders.begin(), census.colliders.end());
    census.has_chain = !census.chains.empty();
    census.has_fork = !census.forks.empty();
    census.has_collider = !census.colliders.empty();
    return census;
}

bool d_separated_idx(const CausalGraph& g, int x, int y, const std::vector<int>& given) {
    if (x == y) fail(ErrorKind::Argument, "d-separation query with x == y");
    std::vector<bool> in_z(g.size(), false);
    for (int z : given) {
        if (z == x || z == y) fail(ErrorKind::Argument, "conditioning set contains an endpoint");
        in_z[z] = true;
    }
    std::vector<bool> anc_z = ancestors_of(g, given);

    // Reachability over trail states; direction records how the trail entered
    // the node (from a child = up, from a parent = down). A collider is
    // traversable iff it is an ancestor of the conditioning set.
    enum { kUp = 0, kDown = 1 };
    std::vector<std::array<bool, 2>> visited(g.size(), {false, false});
    std::deque<std::pair<int, int>> queue;
    queue.emplace_back(x, kUp);
    visited[x][kUp] = true;
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (v == y) return false;
        auto push = [&](int w, int d) {
            if (!visited[w][d]) {
                visited[w][d] = true;
                queue.emplace_back(w, d);
            }
        };
        if (dir == kUp) {
            if (!in_z[v]) {
                for (int p : g.parents(v)) push(p, kUp);
                for (int c : g.children(v)) push(c, kDown);
            }
        } else {
            if (!in_z[v]) {
                for (int c : g.children(v)) push(c, kDown);
            }
            if (anc_z[v]) {
                for (int p : g.parents(v)) push(p, kUp);
            }
        }
    }
    return true;
}

bool d_separated(const CausalGraph& g, const std::string& x, const std::string& y,
                 const std::vector<std::string>& given) {
    std::vector<int> z;
    for (const auto& n : given) z.push_back(g.require(n));
    return d_separated_idx(g, g.require(x), g.require(y), z);
}

std::vector<Independency> implied_independencies(const CausalGraph& g, int max_conditioning) {
    if (max_conditioning < 0) fail(ErrorKind::Argument, "max_conditioning must be >= 0");
    std::vector<int> observed;
    for (size_t i = 0; i < g.size(); ++i) {
        if (g.variable(i).observed) observed.push_back(static_cast<int>(i));
    }
    // Lexicographic ordering over names: sort observed nodes by name once.
    std::sort(observed.begin(), observed.end(),
              [&](int a, int b) { return g.variable(a).name < g.variable(b).name; });

    std::vector<Independency> out;
    for (size_t i = 0; i < observed.size(); ++i) {
        for (size_t j = i + 1; j < observed.size(); ++j) {
            int x = observed[i];
            int y = observed[j];
            std::vector<int> pool;
            for (int v : observed) {
                if (v != x && v != y) pool.push_back(v);
            }
            size_t bound = std::min<size_t>(pool.size(), static_cast<size_t>(max_conditioning));
            // Subsets in lexicographic order by size then member names.
            std::vector<std::vector<int>> subsets{{}};
            for (size_t size = 1; size <= bound; ++size) {
                std::vector<int> idx(size);
                std::vector<int> cur;
                auto rec = [&](auto&& self, size_t depth, size_t start) -> void {
                    if (depth == size) {
                        subsets.push_back(cur);
                        return;
                    }
                    for (size_t k = start; k < pool.size(); ++k) {
                        cur.push_back(pool[k]);
                        self(self, depth + 1, k + 1);
                        cur.pop_back();
                    }
                };
                rec(rec, 0, 0);
            }
            for (const auto& zs : subsets) {
                if (d_separated_idx(g, x, y, zs)) {
                    Independency ind;
                    ind.x = g.variable(x).name;
                    ind.y = g.variable(y).name;
                    for (int z : zs) ind.given.push_back(g.variable(z).name);
                    out.push_back(std::move(ind));
                }
            }
        }
    }
    return out;
}

std::vector<NameTriple> find_confounders(const CausalGraph& g) {
    std::vector<NameTriple> out;
    for (auto [x, y] : g.edges()) {
        for (size_t zi = 0; zi < g.size(); ++zi) {
            int z = static_cast<int>(zi);
            if (z == x || z == y) continue;
            if (reaches(g, z, x, /*avoid=*/-1) && reaches(g, z, y, /*avoid=*/x)) {
                out.push_back({g.variable(z).name, g.variable(x).name, g.variable(y).name});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

DesiderataReport desiderata_report(const CausalGraph& g) {
    DesiderataReport report;
    report.census = junction_census(g);
    report.variable_count = static_cast<int>(g.size());
    for (const auto& v : g.variables()) {
        if (v.kind == VarKind::Numeric) report.has_numeric = true;
        if (v.kind == VarKind::Categorical) report.has_categorical = true;
    }
    report.confounded_edges = find_confounders(g);
    report.satisfied = report.census.has_chain && report.census.has_fork &&
                       report.census.has_collider && !report.confounded_edges.empty();
    return report;
}

std::vector<EdgeScore> parse_edge_scores(const std::string& csv_text, const std::string& origin) {
    std::vector<EdgeScore> scores;
    auto lines = split(csv_text, '\n');
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) fail(ErrorKind::Parse, origin + ": missing header row");
    if (trim(lines[0]) != "cause,effect,score") {
        fail(ErrorKind::Parse, origin + ": edge score header must be exactly cause,effect,score");
    }
    for (size_t i = 1; i < lines.size(); ++i) {
        auto fields = split(lines[i], ',');
        if (fields.size() != 3) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(i + 1) +
                                       " must have 3 fields");
        }
        EdgeScore s;
        s.cause = trim(fields[0]);
        s.effect = trim(fields[1]);
        std::string_view v = trim(fields[2]);
        auto res = std::from_chars(v.data(), v.data() + v.size(), s.score);
        if (res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(s.score)) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(i + 1) +
                                       ": bad score '" + std::string(v) + "'");
        }
        scores.push_back(std::move(s));
    }
    return scores;
}

std::vector<EdgeScore> load_edge_scores(const std::string& path) {
    return parse_edge_scores(read_file(path), path);
}

GraphComparison compare_graphs(const CausalGraph& truth, const CausalGraph& predicted,
                               const std::vector<EdgeScore>* edge_scores, Warnings* warnings) {
    std::set<std::string> tn;
    std::set<std::string> pn;
    for (const auto& v : truth.variables()) tn.insert(v.name);
    for (const auto& v : predicted.variables()) pn.insert(v.name);
    if (tn != pn) fail(ErrorKind::Validation, "graphs do not share the same variable set");

    auto edge_set = [](const CausalGraph& g) {
        std::set<std::pair<std::string, std::string>> s;
        for (auto [a, b] : g.edges()) s.insert({g.variable(a).name, g.variable(b).name});
        return s;
    };
    auto te = edge_set(truth);
    auto pe = edge_set(predicted);

    GraphComparison cmp;
    int correct = 0;
    for (const auto& [a, b] : te) {
        if (pe.count({a, b})) {
            ++correct;
        } else if (pe.count({b, a})) {
            cmp.reversed.emplace_back(a, b);
        } else {
            cmp.missing.emplace_back(a, b);
        }
    }
    for (const auto& [a, b] : pe) {
        if (!te.count({a, b}) && !te.count({b, a})) cmp.extra.emplace_back(a, b);
    }
    cmp.shd = static_cast<int>(cmp.missing.size() + cmp.extra.size() + cmp.reversed.size());
    if (te.empty()) {
        cmp.tpr = 1.0;
        warn(warnings, "truth graph has no edges; TPR defined as 1.0");
    } else {
        cmp.tpr = static_cast<double>(correct) / static_cast<double>(te.size());
    }

    if (edge_scores != nullptr) {
        std::map<std::pair<std::string, std::string>, double> score_map;
        for (const auto& s : *edge_scores) {
            if (!tn.count(s.cause)) fail(ErrorKind::Validation, "score for unknown variable '" + s.cause + "'");
            if (!tn.count(s.effect)) fail(ErrorKind::Validation, "score for unknown variable '" + s.effect + "'");
            if (s.cause == s.effect) fail(ErrorKind::Validation, "score on the diagonal pair (" + s.cause + ", " + s.effect + ")");
            if (!score_map.emplace(std::make_pair(s.cause, s.effect), s.score).second) {
                fail(ErrorKind::Validation, "duplicate score for pair (" + s.cause + ", " + s.effect + ")");
            }
        }
        const size_t expected = tn.size() * (tn.size() - 1);
        if (score_map.size() != expected) {
            fail(ErrorKind::Validation, "score table shape mismatch: got " +
                                            std::to_string(score_map.size()) + " pairs, expected " +
                                            std::to_string(expected));
        }
        std::vector<double> pos;
        std::vector<double> neg;
        for (const auto& [pair, score] : score_map) {
            (te.count(pair) ? pos : neg).push_back(score);
        }
        if (pos.empty() || neg.empty()) {
            warn(warnings, "AUC undefined: need at least one true edge and one non-edge");
        } else {
            double hits = 0.0;
            for (double p : pos) {
                for (double n : neg) {
                    if (p > n) {
                        hits += 1.0;
                    } else if (p == n) {
                        hits += 0.5;
                    }
                }
            }
            cmp.auc = hits / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
        }
    }
    return cmp;
}

}  // namespace crl
