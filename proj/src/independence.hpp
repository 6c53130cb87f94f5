#pragma once

#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace crl {

class CausalGraph;

struct Chi2Result {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool dependent = false;
    int low_expected_cells = 0;  // expected counts below 5
};

struct AuditEntry {
    std::string x;
    std::string y;
    std::vector<std::string> given;
    bool expected_independent = false;
    Chi2Result test;
    bool consistent = false;
};

struct AuditReport {
    std::vector<AuditEntry> entries;
    double violation_rate = 0.0;
    double alpha = 0.05;
};

// Pearson chi-squared test of x against y, stratified over the joint levels
// of `given`. Strata with a degenerate margin contribute nothing; a total dof
// of zero is an error. No continuity correction.
Chi2Result chi2_independence(const DataTable& data, const std::string& x, const std::string& y,
                             const std::vector<std::string>& given, double alpha,
                             Warnings* warnings = nullptr);

// Tests every independence implied by the graph (expected independent) and
// every directly adjacent observed pair (expected dependent).
AuditReport audit_graph_against_data(const CausalGraph& g, const DataTable& data,
                                     int max_conditioning, double alpha,
                                     Warnings* warnings = nullptr);

// Maximal subsample whose (x, y) joint matches the product of the input
// marginals up to integer rounding; per-cell subsampling is seeded.
DataTable enforce_independence(const DataTable& data, const std::string& x, const std::string& y,
                               uint64_t seed, Warnings* warnings = nullptr);

// Equal-frequency binning of every numeric column into `bins` categories;
// categorical columns pass through unchanged.
DataTable discretize_numeric_columns(const DataTable& data, int bins);

// Rank-based equal-frequency bin codes in [0, bins); ties share a bin.
std::vector<int> equal_frequency_bins(std::span<const double> values, int bins);

// Upper tail of the chi-squared distribution via the regularized incomplete
// gamma function.
double chi2_upper_tail(double statistic, int dof);

}  // namespace crl
