#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace crl {

using NameTriple = std::array<std::string, 3>;

struct JunctionCensus {
    std::vector<NameTriple> chains;     // (A,B,C) with A->B->C, direction kept
    std::vector<NameTriple> forks;      // (A,B,C) with A<-B->C, endpoints in name order
    std::vector<NameTriple> colliders;  // (A,B,C) with A->B<-C, endpoints in name order
    bool has_chain = false;
    bool has_fork = false;
    bool has_collider = false;
};

struct DesiderataReport {
    JunctionCensus census;
    int variable_count = 0;
    bool has_numeric = false;
    bool has_categorical = false;
    std::vector<NameTriple> confounded_edges;  // (confounder, cause, effect)
    bool satisfied = false;
};

struct Independency {
    std::string x;
    std::string y;
    std::vector<std::string> given;
};

struct GraphComparison {
    int shd = 0;
    double tpr = 0.0;
    std::optional<double> auc;
    std::vector<std::pair<std::string, std::string>> missing;
    std::vector<std::pair<std::string, std::string>> extra;
    std::vector<std::pair<std::string, std::string>> reversed;
};

struct EdgeScore {
    std::string cause;
    std::string effect;
    double score = 0.0;
};

// Kahn's algorithm with smallest-index tie break; a cycle error names one
// offending cycle.
std::vector<std::string> topological_order(const CausalGraph& g);

JunctionCensus junction_census(const CausalGraph& g);

bool d_separated(const CausalGraph& g, const std::string& x, const std::string& y,
                 const std::vector<std::string>& given);
bool d_separated_idx(const CausalGraph& g, int x, int y, const std::vector<int>& given);

// Every observed pair plus every conditioning subset of observed variables up
// to the bound for which the pair is d-separated; lexicographic ordering.
std::vector<Independency> implied_independencies(const CausalGraph& g, int max_conditioning);

// For every edge x->y, every z with a directed path to x and a directed path
// to y that avoids x. Latent nodes participate like any other node.
std::vector<NameTriple> find_confounders(const CausalGraph& g);

DesiderataReport desiderata_report(const CausalGraph& g);

// Edge scores CSV: header cause,effect,score; exactly one row per ordered
// off-diagonal pair.
std::vector<EdgeScore> parse_edge_scores(const std::string& csv_text, const std::string& origin);
std::vector<EdgeScore> load_edge_scores(const std::string& path);

GraphComparison compare_graphs(const CausalGraph& truth, const CausalGraph& predicted,
                               const std::vector<EdgeScore>* edge_scores = nullptr,
                               Warnings* warnings = nullptr);

}  // namespace crl
