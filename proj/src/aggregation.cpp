#include "aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "io.hpp"

namespace crl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_values(std::span<const double> values) {
    if (values.size() < 3) {
        fail(ErrorKind::Argument, "polygon areas need at least 3 axes, got " +
                                      std::to_string(values.size()));
    }
    for (double v : values) {
        if (!std::isfinite(v) || v < 0.0) {
            fail(ErrorKind::Argument, "axis values must be finite and non-negative");
        }
    }
}

void validate_h(double h) {
    if (!(h > 0.0 && h <= 1.0)) {
        fail(ErrorKind::Argument, "auxiliary-axis reference h must lie in (0, 1]");
    }
}

std::vector<double> resolve_model_values(const ModelEntry& model,
                                         const std::vector<MetricDescriptor>& metrics) {
    if (model.inline_values) return *model.inline_values;
    DataTable row_table = load_table(*model.values_file);
    if (row_table.rows() != 1) {
        fail(ErrorKind::Validation, "values file '" + *model.values_file + "' for model '" +
                                        model.name + "' must contain exactly one data row");
    }
    if (row_table.cols() != metrics.size()) {
        fail(ErrorKind::Validation, "values file '" + *model.values_file + "' has " +
                                        std::to_string(row_table.cols()) + " columns, card has " +
                                        std::to_string(metrics.size()) + " metrics");
    }
    for (size_t c = 0; c < metrics.size(); ++c) {
        if (row_table.column(c).name != metrics[c].name) {
            fail(ErrorKind::Validation, "values file '" + *model.values_file + "' column '" +
                                            row_table.column(c).name + "' does not match metric '" +
                                            metrics[c].name + "'");
        }
    }
    std::vector<double> values;
    for (size_t c = 0; c < metrics.size(); ++c) values.push_back(row_table.at(0, c));
    return values;
}

}  // namespace

std::vector<std::vector<double>> normalize_cohort(const std::vector<std::vector<double>>& raw,
                                                  const std::vector<MetricDescriptor>& metrics,
                                                  bool degenerate_to_half, Warnings* warnings) {
    const size_t n_models = raw.size();
    if (n_models == 0) fail(ErrorKind::Argument, "normalization needs at least one model");
    for (const auto& row : raw) {
        if (row.size() != metrics.size()) {
            fail(ErrorKind::Argument, "raw value row length does not match the metric count");
        }
        for (double v : row) {
            if (!std::isfinite(v)) fail(ErrorKind::Argument, "non-finite raw metric value");
        }
    }
    bool any_unbounded = std::any_of(metrics.begin(), metrics.end(),
                                     [](const MetricDescriptor& m) { return !m.bounded01; });
    if (any_unbounded && n_models < 2) {
        fail(ErrorKind::Validation,
             "min-max normalization of an unbounded metric needs at least 2 models");
    }

    std::vector<std::vector<double>> out(n_models, std::vector<double>(metrics.size(), 0.0));
    for (size_t m = 0; m < metrics.size(); ++m) {
        const auto& metric = metrics[m];
        if (metric.bounded01) {
            for (size_t i = 0; i < n_models; ++i) {
                double v = raw[i][m];
                if (v < 0.0 || v > 1.0) {
                    fail(ErrorKind::Validation, "metric '" + metric.name +
                                                    "' is declared bounded in [0, 1] but model " +
                                                    std::to_string(i) + " has value " +
                                                    std::to_string(v));
                }
                out[i][m] = metric.orientation == Orientation::Upward ? v : 1.0 - v;
            }
            continue;
        }
        double lo = raw[0][m];
        double hi = raw[0][m];
        for (size_t i = 1; i < n_models; ++i) {
            lo = std::min(lo, raw[i][m]);
            hi = std::max(hi, raw[i][m]);
        }
        if (lo == hi) {
            if (!degenerate_to_half) {
                fail(ErrorKind::Validation, "metric '" + metric.name +
                                                "' has a degenerate range (all values equal " +
                                                std::to_string(lo) +
                                                "); pass --degenerate-to-half to map it to 0.5");
            }
            warn(warnings, "metric '" + metric.name + "' has a degenerate range; normalized to 0.5");
            for (size_t i = 0; i < n_models; ++i) out[i][m] = 0.5;
            continue;
        }
        for (size_t i = 0; i < n_models; ++i) {
            double v = (raw[i][m] - lo) / (hi - lo);
            out[i][m] = metric.orientation == Orientation::Upward ? v : 1.0 - v;
        }
    }
    return out;
}

double radar_area(std::span<const double> values) {
    validate_values(values);
    const size_t n = values.size();
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += values[i] * values[(i + 1) % n];
    return 0.5 * std::sin(2.0 * kPi / static_cast<double>(n)) * acc;
}

double origami_area(std::span<const double> values, double h) {
    validate_values(values);
    validate_h(h);
    double sum = 0.0;
    for (double v : values) sum += v;
    return std::sin(kPi / static_cast<double>(values.size())) * h * sum;
}

double origami_score(std::span<const double> values, double h) {
    double max_area = std::sin(kPi / static_cast<double>(values.size())) * h *
                      static_cast<double>(values.size());
    return origami_area(values, h) / max_area;
}

ScoreCard build_scorecard(const ScorecardConfig& config, const DataTable* values_table,
                          const ScorecardOptions& options, Warnings* warnings) {
    if (config.metrics.size() < 3) {
        fail(ErrorKind::Validation, "scorecard needs at least 3 metrics, got " +
                                        std::to_string(config.metrics.size()));
    }
    {
        std::set<std::string> names;
        for (const auto& m : config.metrics) {
            if (!names.insert(m.name).second) {
                fail(ErrorKind::Validation, "duplicate metric '" + m.name + "' on the card");
            }
        }
    }
    ScoreCard card;
    card.name = config.name;
    card.h = options.h_override.value_or(config.h);
    validate_h(card.h);
    card.axes = config.metrics;

    // Resolve raw values: explicit per-model sources first, remaining models
    // consume the rows of the shared values table in order.
    std::vector<ModelEntry> models = config.models;
    if (models.empty()) {
        if (values_table == nullptr) {
            fail(ErrorKind::Validation, "card declares no models and no values table was given");
        }
        for (size_t r = 0; r < values_table->rows(); ++r) {
            ModelEntry m;
            m.name = "model-" + std::to_string(r);
            models.push_back(std::move(m));
        }
    }
    if (values_table != nullptr) {
        if (values_table->cols() != config.metrics.size()) {
            fail(ErrorKind::Validation, "values table has " + std::to_string(values_table->cols()) +
                                            " columns, card has " +
                                            std::to_string(config.metrics.size()) + " metrics");
        }
        for (size_t c = 0; c < values_table->cols(); ++c) {
            if (values_table->column(c).name != config.metrics[c].name) {
                fail(ErrorKind::Validation, "values table column '" + values_table->column(c).name +
                                                "' does not match metric '" +
                                                config.metrics[c].name + "'");
            }
        }
    }
    size_t next_row = 0;
    std::vector<std::vector<double>> raw;
    for (const auto& model : models) {
        if (model.inline_values || model.values_file) {
            auto values = resolve_model_values(model, config.metrics);
            if (values.size() != config.metrics.size()) {
                fail(ErrorKind::Validation, "model '" + model.name + "' supplies " +
                                                std::to_string(values.size()) +
                                                " values, card has " +
                                                std::to_string(config.metrics.size()) + " metrics");
            }
            raw.push_back(std::move(values));
            continue;
        }
        if (values_table == nullptr || next_row >= values_table->rows()) {
            fail(ErrorKind::Validation, "model '" + model.name +
                                            "' has no inline values and the values table is exhausted");
        }
        std::vector<double> values;
        for (size_t c = 0; c < values_table->cols(); ++c) values.push_back(values_table->at(next_row, c));
        raw.push_back(std::move(values));
        ++next_row;
    }
    if (values_table != nullptr && next_row != 0 && next_row != values_table->rows()) {
        fail(ErrorKind::Validation, "values table has " + std::to_string(values_table->rows()) +
                                        " rows but only " + std::to_string(next_row) +
                                        " were consumed by the card's models");
    }

    auto normalized = normalize_cohort(raw, config.metrics, options.degenerate_to_half, warnings);
    for (size_t i = 0; i < models.size(); ++i) {
        ModelScore score;
        score.name = models[i].name;
        score.raw = raw[i];
        score.normalized = normalized[i];
        score.radar_area = radar_area(score.normalized);
        score.origami_area = origami_area(score.normalized, card.h);
        score.origami_score = origami_score(score.normalized, card.h);
        card.models.push_back(std::move(score));
    }
    std::sort(card.models.begin(), card.models.end(), [](const ModelScore& a, const ModelScore& b) {
        if (a.origami_score != b.origami_score) return a.origami_score > b.origami_score;
        return a.name < b.name;
    });
    return card;
}

std::vector<RunMetricAggregate> aggregate_runs(const std::vector<RunLogEntry>& entries,
                                               AggregationMode mode, int k, StdMode std_mode) {
    if (entries.empty()) fail(ErrorKind::Argument, "run log is empty");
    if (mode == AggregationMode::TopK && k < 1) {
        fail(ErrorKind::Argument, "top-k aggregation needs k >= 1");
    }
    std::map<std::string, std::vector<std::pair<int64_t, double>>> by_metric;
    for (const auto& e : entries) by_metric[e.metric].emplace_back(e.run, e.value);

    std::vector<RunMetricAggregate> out;
    for (auto& [metric, runs] : by_metric) {
        std::sort(runs.begin(), runs.end());  // by run id for deterministic tie handling
        RunMetricAggregate agg;
        agg.metric = metric;
        agg.runs = runs.size();

        std::vector<std::pair<int64_t, double>> kept = runs;
        if (mode == AggregationMode::BoundariesOut) {
            if (runs.size() < 3) {
                fail(ErrorKind::Validation, "metric '" + metric + "' has " +
                                                std::to_string(runs.size()) +
                                                " runs; boundaries-out needs at least 3");
            }
            auto drop_extreme = [&](bool maximum) {
                size_t pick = 0;
                for (size_t i = 1; i < kept.size(); ++i) {
                    if (maximum ? kept[i].second > kept[pick].second
                                : kept[i].second < kept[pick].second) {
                        pick = i;  // ties keep the earliest (lowest run id)
                    }
                }
                kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(pick));
            };
            drop_extreme(true);
            drop_extreme(false);
        } else if (mode == AggregationMode::TopK) {
            if (runs.size() < static_cast<size_t>(k)) {
                fail(ErrorKind::Validation, "metric '" + metric + "' has " +
                                                std::to_string(runs.size()) +
                                                " runs; top-" + std::to_string(k) +
                                                " needs at least " + std::to_string(k));
            }
            std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
                return a.second > b.second;  // stable: ties keep lowest run id first
            });
            kept.resize(static_cast<size_t>(k));
        }

        double mean = 0.0;
        for (const auto& [run, value] : kept) mean += value;
        mean /= static_cast<double>(kept.size());
        double var = 0.0;
        for (const auto& [run, value] : kept) var += (value - mean) * (value - mean);
        if (std_mode == StdMode::Population) {
            var /= static_cast<double>(kept.size());
        } else {
            var = kept.size() > 1 ? var / static_cast<double>(kept.size() - 1) : 0.0;
        }
        agg.mean = mean;
        agg.stddev = std::sqrt(var);
        for (const auto& [run, value] : kept) agg.kept_runs.push_back(run);
        out.push_back(std::move(agg));
    }
    return out;
}

}  // namespace crl
