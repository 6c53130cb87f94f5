#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "types.hpp"

namespace crl {

enum class Orientation { Upward, Downward };
enum class StdMode { Population, Sample };
enum class AggregationMode { All, BoundariesOut, TopK };

struct MetricDescriptor {
    std::string name;
    Orientation orientation = Orientation::Upward;
    bool bounded01 = false;
};

struct ModelEntry {
    std::string name;
    std::optional<std::vector<double>> inline_values;
    std::optional<std::string> values_file;
};

struct ScorecardConfig {
    std::string name;
    double h = 0.25;
    StdMode std_mode = StdMode::Population;
    std::vector<MetricDescriptor> metrics;
    std::vector<ModelEntry> models;
};

// Minimal TOML subset: one [card] table plus [[metric]] / [[model]] arrays;
// values are strings, numbers, booleans or flat numeric arrays.
ScorecardConfig parse_card_config(const std::string& text, const std::string& origin);
ScorecardConfig load_card_config(const std::string& path);

// Bounded upward metrics pass through, bounded downward flip to 1-v,
// unbounded metrics are min-max normalized over the cohort (then flipped when
// downward). A degenerate unbounded range is an error unless
// degenerate_to_half maps it to 0.5.
std::vector<std::vector<double>> normalize_cohort(const std::vector<std::vector<double>>& raw,
                                                  const std::vector<MetricDescriptor>& metrics,
                                                  bool degenerate_to_half,
                                                  Warnings* warnings = nullptr);

// Area of the radar polygon: sin(2*pi/N)/2 * sum r_i * r_{i+1} (cyclic).
double radar_area(std::span<const double> values);

// Area of the origami polygon: sin(pi/N) * h * sum r_i; order-invariant.
double origami_area(std::span<const double> values, double h);

// origami_area divided by its all-ones maximum.
double origami_score(std::span<const double> values, double h);

struct ModelScore {
    std::string name;
    std::vector<double> raw;
    std::vector<double> normalized;
    double radar_area = 0.0;
    double origami_area = 0.0;
    double origami_score = 0.0;
};

struct ScoreCard {
    std::string name;
    double h = 0.25;
    std::vector<MetricDescriptor> axes;
    std::vector<ModelScore> models;  // ranked by origami_score desc, ties by name
};

struct ScorecardOptions {
    bool degenerate_to_half = false;
    std::optional<double> h_override;
};

// Resolves model rows (inline, per-model file, or rows of the values table),
// normalizes and scores them.
ScoreCard build_scorecard(const ScorecardConfig& config, const DataTable* values_table,
                          const ScorecardOptions& options, Warnings* warnings = nullptr);

struct RunMetricAggregate {
    std::string metric;
    size_t runs = 0;                 // entries seen for this metric
    std::vector<int64_t> kept_runs;  // run ids surviving the mode's selection
    double mean = 0.0;
    double stddev = 0.0;
};

// Per-metric mean and deviation after the mode's selection. boundaries_out
// drops exactly one max and one min (lowest run id first among ties); top_k
// keeps the k largest values per metric independently.
std::vector<RunMetricAggregate> aggregate_runs(const std::vector<RunLogEntry>& entries,
                                               AggregationMode mode, int k, StdMode std_mode);

}  // namespace crl
