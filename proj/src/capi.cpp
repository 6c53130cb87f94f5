#include "crlscore.h"

#include <cstring>
#include <optional>
#include <string>

#include <json.hpp>

#include "aggregation.hpp"
#include "disentanglement.hpp"
#include "error.hpp"
#include "generation.hpp"
#include "graph_analysis.hpp"
#include "independence.hpp"
#include "io.hpp"
#include "pendulum.hpp"
#include "report.hpp"
#include "scm.hpp"
#include "svg.hpp"
#include "types.hpp"
#include "util.hpp"

using nlohmann::json;

struct crl_graph {
    crl::CausalGraph value;
};
struct crl_table {
    crl::DataTable value;
};
struct crl_mask {
    crl::BinaryMask value;
};
struct crl_scm {
    crl::Scm value;
};
struct crl_scorecard {
    crl::ScoreCard value;
    crl::StdMode std_mode;
};
struct crl_report {
    crl::ReportBuilder value;
};

namespace {

thread_local std::string g_last_error;
thread_local crl::Warnings g_warnings;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

crl_status map_kind(crl::ErrorKind kind) {
    switch (kind) {
        case crl::ErrorKind::Parse:
            return CRL_ERR_PARSE;
        case crl::ErrorKind::Validation:
            return CRL_ERR_VALIDATION;
        case crl::ErrorKind::Io:
            return CRL_ERR_IO;
        case crl::ErrorKind::Argument:
            return CRL_ERR_ARGUMENT;
    }
    return CRL_ERR_INTERNAL;
}

template <typename Fn>
crl_status wrap(Fn&& fn) noexcept {
    g_warnings.clear();
    try {
        fn();
        return CRL_OK;
    } catch (const crl::Error& e) {
        g_last_error = e.what();
        return map_kind(e.kind());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return CRL_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return CRL_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok) crl::fail(crl::ErrorKind::Argument, std::string("null argument: ") + what);
}

std::vector<std::string> split_names(const char* csv) {
    std::vector<std::string> names;
    if (csv == nullptr) return names;
    for (const auto& part : crl::split(csv, ',')) {
        auto t = crl::trim(part);
        if (!t.empty()) names.emplace_back(t);
    }
    return names;
}

json triples_json(const std::vector<crl::NameTriple>& triples) {
    json arr = json::array();
    for (const auto& t : triples) arr.push_back(json::array({t[0], t[1], t[2]}));
    return arr;
}

json pairs_json(const std::vector<std::pair<std::string, std::string>>& pairs) {
    json arr = json::array();
    for (const auto& [a, b] : pairs) arr.push_back(json::array({a, b}));
    return arr;
}

json chi2_json(const crl::Chi2Result& r) {
    return json{{"statistic", r.statistic}, {"dof", r.dof},
                {"p_value", r.p_value},     {"alpha", r.alpha},
                {"dependent", r.dependent}, {"low_expected_cells", r.low_expected_cells}};
}

json matching_json(const crl::Matching& m) {
    return json{{"assignment", m.assignment}, {"total", m.total}, {"per_pair", m.per_pair}};
}

crl::DataTable maybe_binned(const crl::DataTable& data, int bins) {
    if (bins > 0) return crl::discretize_numeric_columns(data, bins);
    return data;
}

json scorecard_json_impl(const crl_scorecard& card) {
    json axes = json::array();
    for (const auto& m : card.value.axes) {
        axes.push_back({{"name", m.name},
                        {"orientation",
                         m.orientation == crl::Orientation::Upward ? "upward" : "downward"},
                        {"bounded01", m.bounded01}});
    }
    json models = json::array();
    for (const auto& m : card.value.models) {
        models.push_back({{"name", m.name},
                          {"raw", m.raw},
                          {"normalized", m.normalized},
                          {"radar_area", m.radar_area},
                          {"origami_area", m.origami_area},
                          {"origami_score", m.origami_score}});
    }
    return json{{"name", card.value.name},
                {"h", card.value.h},
                {"std", card.std_mode == crl::StdMode::Population ? "population" : "sample"},
                {"axes", axes},
                {"models", models}};
}

}  // namespace

extern "C" {

const char* crl_version(void) { return crl::kToolVersion; }

const char* crl_last_error(void) { return g_last_error.c_str(); }

void crl_string_free(char* s) { delete[] s; }

char* crl_take_warnings(void) {
    if (g_warnings.empty()) return nullptr;
    json arr = g_warnings;
    g_warnings.clear();
    return dup_string(arr.dump());
}

/* graphs ------------------------------------------------------------------ */

crl_status crl_graph_load(const char* path, crl_graph** out) {
    return wrap([&] {
        require(path != nullptr && out != nullptr, "crl_graph_load");
        *out = new crl_graph{crl::load_graph(path)};
    });
}

crl_status crl_graph_parse(const char* json_text, crl_graph** out) {
    return wrap([&] {
        require(json_text != nullptr && out != nullptr, "crl_graph_parse");
        *out = new crl_graph{crl::parse_graph(json_text, "<memory>")};
    });
}

crl_status crl_graph_save(const crl_graph* g, const char* path) {
    return wrap([&] {
        require(g != nullptr && path != nullptr, "crl_graph_save");
        crl::save_graph(g->value, path);
    });
}

void crl_graph_free(crl_graph* g) { delete g; }

crl_status crl_graph_topo_order(const crl_graph* g, char** json_out) {
    return wrap([&] {
        require(g != nullptr && json_out != nullptr, "crl_graph_topo_order");
        json doc{{"order", crl::topological_order(g->value)},
                 {"variables", g->value.size()},
                 {"edges", g->value.edges().size()}};
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_graph_census(const crl_graph* g, char** json_out) {
    return wrap([&] {
        require(g != nullptr && json_out != nullptr, "crl_graph_census");
        crl::DesiderataReport report = crl::desiderata_report(g->value);
        const auto& c = report.census;
        json doc{{"chains", triples_json(c.chains)},
                 {"forks", triples_json(c.forks)},
                 {"colliders", triples_json(c.colliders)},
                 {"has_chain", c.has_chain},
                 {"has_fork", c.has_fork},
                 {"has_collider", c.has_collider},
                 {"counts",
                  {{"chains", c.chains.size()},
                   {"forks", c.forks.size()},
                   {"colliders", c.colliders.size()}}},
                 {"desiderata",
                  {{"variable_count", report.variable_count},
                   {"has_numeric", report.has_numeric},
                   {"has_categorical", report.has_categorical},
                   {"confounded_edges", triples_json(report.confounded_edges)},
                   {"satisfied", report.satisfied}}}};
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_graph_dsep(const crl_graph* g, const char* x, const char* y, const char* given_csv,
                          int* separated_out) {
    return wrap([&] {
        require(g != nullptr && x != nullptr && y != nullptr && separated_out != nullptr,
                "crl_graph_dsep");
        *separated_out = crl::d_separated(g->value, x, y, split_names(given_csv)) ? 1 : 0;
    });
}

crl_status crl_graph_implied(const crl_graph* g, int max_conditioning, char** json_out) {
    return wrap([&] {
        require(g != nullptr && json_out != nullptr, "crl_graph_implied");
        json list = json::array();
        for (const auto& ind : crl::implied_independencies(g->value, max_conditioning)) {
            list.push_back({{"x", ind.x}, {"y", ind.y}, {"given", ind.given}});
        }
        json doc{{"independencies", list}, {"max_conditioning", max_conditioning}};
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_graph_compare(const crl_graph* truth, const crl_graph* predicted,
                             const char* scores_csv_path, char** json_out) {
    return wrap([&] {
        require(truth != nullptr && predicted != nullptr && json_out != nullptr,
                "crl_graph_compare");
        std::optional<std::vector<crl::EdgeScore>> scores;
        if (scores_csv_path != nullptr) scores = crl::load_edge_scores(scores_csv_path);
        crl::GraphComparison cmp = crl::compare_graphs(
            truth->value, predicted->value, scores ? &*scores : nullptr, &g_warnings);
        json doc{{"shd", cmp.shd},
                 {"tpr", cmp.tpr},
                 {"missing", pairs_json(cmp.missing)},
                 {"extra", pairs_json(cmp.extra)},
                 {"reversed", pairs_json(cmp.reversed)}};
        if (cmp.auc) doc["auc"] = *cmp.auc;
        *json_out = dup_string(doc.dump());
    });
}

/* tables and masks ---------------------------------------------------------- */

crl_status crl_table_load(const char* path, crl_table** out) {
    return wrap([&] {
        require(path != nullptr && out != nullptr, "crl_table_load");
        *out = new crl_table{crl::load_table(path)};
    });
}

crl_status crl_table_save(const crl_table* t, const char* path) {
    return wrap([&] {
        require(t != nullptr && path != nullptr, "crl_table_save");
        crl::save_table(t->value, path);
    });
}

crl_status crl_table_to_csv(const crl_table* t, char** csv_out) {
    return wrap([&] {
        require(t != nullptr && csv_out != nullptr, "crl_table_to_csv");
        *csv_out = dup_string(crl::table_to_csv(t->value));
    });
}

crl_status crl_table_shape(const crl_table* t, int64_t* rows_out, int64_t* cols_out) {
    return wrap([&] {
        require(t != nullptr && rows_out != nullptr && cols_out != nullptr, "crl_table_shape");
        *rows_out = static_cast<int64_t>(t->value.rows());
        *cols_out = static_cast<int64_t>(t->value.cols());
    });
}

crl_status crl_table_column_name(const crl_table* t, int64_t index, char** name_out) {
    return wrap([&] {
        require(t != nullptr && name_out != nullptr, "crl_table_column_name");
        if (index < 0 || static_cast<size_t>(index) >= t->value.cols()) {
            crl::fail(crl::ErrorKind::Argument, "column index out of range");
        }
        *name_out = dup_string(t->value.column(static_cast<size_t>(index)).name);
    });
}

void crl_table_free(crl_table* t) { delete t; }

crl_status crl_mask_load(const char* path, crl_mask** out) {
    return wrap([&] {
        require(path != nullptr && out != nullptr, "crl_mask_load");
        *out = new crl_mask{crl::load_mask(path)};
    });
}

crl_status crl_mask_save(const crl_mask* m, const char* path) {
    return wrap([&] {
        require(m != nullptr && path != nullptr, "crl_mask_save");
        crl::save_mask(m->value, path);
    });
}

void crl_mask_free(crl_mask* m) { delete m; }

/* independence -------------------------------------------------------------- */

crl_status crl_indep_chi2(const crl_table* data, const char* x, const char* y,
                          const char* given_csv, double alpha, int bins, char** json_out) {
    return wrap([&] {
        require(data != nullptr && x != nullptr && y != nullptr && json_out != nullptr,
                "crl_indep_chi2");
        crl::DataTable table = maybe_binned(data->value, bins);
        crl::Chi2Result r = crl::chi2_independence(table, x, y, split_names(given_csv), alpha,
                                                   &g_warnings);
        json doc = chi2_json(r);
        doc["x"] = x;
        doc["y"] = y;
        doc["given"] = split_names(given_csv);
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_indep_audit(const crl_graph* g, const crl_table* data, int max_conditioning,
                           double alpha, int bins, char** json_out) {
    return wrap([&] {
        require(g != nullptr && data != nullptr && json_out != nullptr, "crl_indep_audit");
        crl::DataTable table = maybe_binned(data->value, bins);
        crl::AuditReport report =
            crl::audit_graph_against_data(g->value, table, max_conditioning, alpha, &g_warnings);
        json entries = json::array();
        for (const auto& e : report.entries) {
            json entry = chi2_json(e.test);
            entry["x"] = e.x;
            entry["y"] = e.y;
            entry["given"] = e.given;
            entry["expected"] = e.expected_independent ? "independent" : "dependent";
            entry["consistent"] = e.consistent;
            entries.push_back(std::move(entry));
        }
        json doc{{"alpha", report.alpha},
                 {"violation_rate", report.violation_rate},
                 {"entries", entries}};
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_indep_filter(const crl_table* data, const char* x, const char* y, uint64_t seed,
                            crl_table** filtered_out, char** summary_json) {
    return wrap([&] {
        require(data != nullptr && x != nullptr && y != nullptr && filtered_out != nullptr,
                "crl_indep_filter");
        crl::DataTable filtered = crl::enforce_independence(data->value, x, y, seed, &g_warnings);
        if (summary_json != nullptr) {
            json doc{{"x", x},
                     {"y", y},
                     {"seed", seed},
                     {"input_rows", data->value.rows()},
                     {"output_rows", filtered.rows()}};
            *summary_json = dup_string(doc.dump());
        }
        *filtered_out = new crl_table{std::move(filtered)};
    });
}

/* representation metrics ------------------------------------------------------ */

crl_status crl_metrics_association(const crl_table* factors, const crl_table* latents,
                                   const char* metric, crl_table** matrix_out) {
    return wrap([&] {
        require(factors != nullptr && latents != nullptr && metric != nullptr &&
                    matrix_out != nullptr,
                "crl_metrics_association");
        crl::AssociationMatrix m =
            crl::association_matrix(factors->value, latents->value, metric, &g_warnings);
        std::vector<crl::VariableSpec> columns;
        for (const auto& name : m.latent_names) {
            crl::VariableSpec spec;
            spec.name = name;
            columns.push_back(std::move(spec));
        }
        std::vector<double> cells(m.matrix.rows * m.matrix.cols);
        for (size_t c = 0; c < m.matrix.cols; ++c) {
            for (size_t r = 0; r < m.matrix.rows; ++r) {
                cells[c * m.matrix.rows + r] = m.matrix.at(r, c);
            }
        }
        *matrix_out = new crl_table{crl::DataTable(std::move(columns), std::move(cells),
                                                   m.matrix.rows)};
    });
}

crl_status crl_metrics_assign(const crl_table* matrix, int include_sweep, char** json_out) {
    return wrap([&] {
        require(matrix != nullptr && json_out != nullptr, "crl_metrics_assign");
        crl::ScoreMatrix m;
        m.rows = matrix->value.rows();
        m.cols = matrix->value.cols();
        m.values.resize(m.rows * m.cols);
        for (size_t r = 0; r < m.rows; ++r) {
            for (size_t c = 0; c < m.cols; ++c) m.values[r * m.cols + c] = matrix->value.at(r, c);
        }
        json doc = matching_json(crl::hungarian_match(m));
        if (include_sweep != 0) {
            crl::SweepResult sweep = crl::permutation_sweep(m);
            doc["sweep"] = {{"min", sweep.min},
                            {"max", sweep.max},
                            {"argmin", sweep.argmin},
                            {"argmax", sweep.argmax},
                            {"evaluated", sweep.evaluated}};
        }
        *json_out = dup_string(doc.dump());
    });
}

crl_status crl_metrics_disentangle(const crl_table* factors, const crl_table* latents, int bins,
                                   uint64_t seed, const char* metrics_csv, char** json_out) {
    return wrap([&] {
        require(factors != nullptr && latents != nullptr && json_out != nullptr,
                "crl_metrics_disentangle");
        crl::SuiteConfig config;
        config.bins = bins > 0 ? bins : 20;
        config.seed = seed;
        if (metrics_csv != nullptr) {
            config.mic = config.tic = config.irs = config.jemmig = config.dci = false;
            for (const auto& name : split_names(metrics_csv)) {
                if (name == "mic") {
                    config.mic = true;
                } else if (name == "tic") {
                    config.tic = true;
                } else if (name == "irs") {
                    config.irs = true;
                } else if (name == "jemmig") {
                    config.jemmig = true;
                } else if (name == "dci") {
                    config.dci = true;
                } else {
                    crl::fail(crl::ErrorKind::Argument, "unknown suite metric '" + name + "'");
                }
            }
        }
        crl::SuiteResult r =
            crl::disentanglement_suite(factors->value, latents->value, config, &g_warnings);
        json doc{{"bins", config.bins}, {"seed", seed}};
        if (r.mic) doc["mic"] = *r.mic;
        if (r.tic) doc["tic"] = *r.tic;
        if (r.irs) doc["irs"] = *r.irs;
        if (r.jemmig) doc["jemmig"] = *r.jemmig;
        if (r.dci_d) doc["dci_d"] = *r.dci_d;
        if (r.dci_c) doc["dci_c"] = *r.dci_c;
        if (r.dci_i) doc["dci_i"] = *r.dci_i;
        if (r.mic_matching) doc["mic_matching"] = matching_json(*r.mic_matching);
        if (r.tic_matching) doc["tic_matching"] = matching_json(*r.tic_matching);
        *json_out = dup_string(doc.dump());
    });
}

/* generation metrics ----------------------------------------------------------- */

crl_status crl_metrics_reconstruction(const crl_table* original, const crl_table* reconstructed,
                                      const char* mode, double* out) {
    return wrap([&] {
        require(original != nullptr && reconstructed != nullptr && mode != nullptr &&
                    out != nullptr,
                "crl_metrics_reconstruction");
        crl::ReconstructionMode m;
        if (std::string(mode) == "mae") {
            m = crl::ReconstructionMode::Mae;
        } else if (std::string(mode) == "mse") {
            m = crl::ReconstructionMode::Mse;
        } else {
            crl::fail(crl::ErrorKind::Argument,
                      std::string("unknown reconstruction mode '") + mode + "'");
        }
        *out = crl::reconstruction_score(original->value, reconstructed->value, m);
    });
}

crl_status crl_metrics_composition_l1(const crl_table* original, const crl_table* output,
                                      double* out) {
    return wrap([&] {
        require(original != nullptr && output != nullptr && out != nullptr,
                "crl_metrics_composition_l1");
        *out = crl::composition_l1(original->value, output->value);
    });
}

crl_status crl_metrics_fid(const crl_table* a, const crl_table* b, double* out) {
    return wrap([&] {
        require(a != nullptr && b != nullptr && out != nullptr, "crl_metrics_fid");
        *out = crl::fid(a->value, b->value);
    });
}

crl_status crl_metrics_kid(const crl_table* a, const crl_table* b, double* out) {
    return wrap([&] {
        require(a != nullptr && b != nullptr && out != nullptr, "crl_metrics_kid");
        *out = crl::kid(a->value, b->value);
    });
}

crl_status crl_metrics_inception_score(const crl_table* probs, double* out) {
    return wrap([&] {
        require(probs != nullptr && out != nullptr, "crl_metrics_inception_score");
        *out = crl::inception_score(probs->value);
    });
}

crl_status crl_metrics_iou(const crl_mask* a, const crl_mask* b, double* out) {
    return wrap([&] {
        require(a != nullptr && b != nullptr && out != nullptr, "crl_metrics_iou");
        *out = crl::iou(a->value, b->value, &g_warnings);
    });
}

crl_status crl_metrics_effectiveness(const crl_table* target, const char* target_column,
                                     const crl_table* predicted, const char* predicted_column,
                                     const char* kind, double* out) {
    return wrap([&] {
        require(target != nullptr && target_column != nullptr && predicted != nullptr &&
                    predicted_column != nullptr && kind != nullptr && out != nullptr,
                "crl_metrics_effectiveness");
        crl::EffectivenessKind k;
        if (std::string(kind) == "classification") {
            k = crl::EffectivenessKind::Classification;
        } else if (std::string(kind) == "regression") {
            k = crl::EffectivenessKind::Regression;
        } else {
            crl::fail(crl::ErrorKind::Argument,
                      std::string("unknown effectiveness kind '") + kind + "'");
        }
        *out = crl::effectiveness(target->value, target_column, predicted->value, predicted_column,
                                  k);
    });
}

crl_status crl_metrics_counterfactual(const char* cases_csv_path, char** json_out) {
    return wrap([&] {
        require(cases_csv_path != nullptr && json_out != nullptr, "crl_metrics_counterfactual");
        auto cases = crl::load_counterfactual_cases(cases_csv_path);
        crl::CounterfactualAccuracy acc = crl::counterfactual_accuracy(cases, &g_warnings);
        json doc{{"mean_iou", acc.mean_iou}, {"mean_l1", acc.mean_l1}, {"cases", acc.cases}};
        *json_out = dup_string(doc.dump());
    });
}

/* aggregation -------------------------------------------------------------------- */

crl_status crl_scorecard_build(const char* config_path, const char* values_csv_path,
                               int degenerate_to_half, double h_override, crl_scorecard** out) {
    return wrap([&] {
        require(config_path != nullptr && out != nullptr, "crl_scorecard_build");
        crl::ScorecardConfig config = crl::load_card_config(config_path);
        std::optional<crl::DataTable> values;
        if (values_csv_path != nullptr) values = crl::load_table(values_csv_path);
        crl::ScorecardOptions options;
        options.degenerate_to_half = degenerate_to_half != 0;
        if (h_override > 0.0) options.h_override = h_override;
        crl::ScoreCard card =
            crl::build_scorecard(config, values ? &*values : nullptr, options, &g_warnings);
        *out = new crl_scorecard{std::move(card), config.std_mode};
    });
}

crl_status crl_scorecard_json(const crl_scorecard* card, char** json_out) {
    return wrap([&] {
        require(card != nullptr && json_out != nullptr, "crl_scorecard_json");
        *json_out = dup_string(scorecard_json_impl(*card).dump());
    });
}

crl_status crl_scorecard_svg(const crl_scorecard* card, const char* kind, char** svg_out) {
    return wrap([&] {
        require(card != nullptr && kind != nullptr && svg_out != nullptr, "crl_scorecard_svg");
        std::string k = kind;
        if (k == "radar") {
            *svg_out = dup_string(crl::svg_radar(card->value));
        } else if (k == "origami") {
            *svg_out = dup_string(crl::svg_origami(card->value));
        } else {
            crl::fail(crl::ErrorKind::Argument, "unknown plot kind '" + k + "'");
        }
    });
}

void crl_scorecard_free(crl_scorecard* card) { delete card; }

crl_status crl_runs_aggregate(const char* runs_csv_path, const char* mode, int k,
                              const char* std_mode, char** json_out) {
    return wrap([&] {
        require(runs_csv_path != nullptr && mode != nullptr && std_mode != nullptr &&
                    json_out != nullptr,
                "crl_runs_aggregate");
        crl::AggregationMode m;
        std::string ms = mode;
        if (ms == "all") {
            m = crl::AggregationMode::All;
        } else if (ms == "boundaries_out") {
            m = crl::AggregationMode::BoundariesOut;
        } else if (ms == "top_k") {
            m = crl::AggregationMode::TopK;
        } else {
            crl::fail(crl::ErrorKind::Argument, "unknown aggregation mode '" + ms + "'");
        }
        crl::StdMode s;
        std::string ss = std_mode;
        if (ss == "population") {
            s = crl::StdMode::Population;
        } else if (ss == "sample") {
            s = crl::StdMode::Sample;
        } else {
            crl::fail(crl::ErrorKind::Argument, "unknown std mode '" + ss + "'");
        }
        auto aggregates = crl::aggregate_runs(crl::load_runs(runs_csv_path), m, k, s);
        json metrics = json::array();
        for (const auto& a : aggregates) {
            metrics.push_back({{"metric", a.metric},
                               {"runs", a.runs},
                               {"kept_runs", a.kept_runs},
                               {"mean", a.mean},
                               {"std", a.stddev}});
        }
        json doc{{"mode", ms}, {"std", ss}, {"metrics", metrics}};
        if (m == crl::AggregationMode::TopK) doc["k"] = k;
        *json_out = dup_string(doc.dump());
    });
}

/* structural causal models --------------------------------------------------------- */

crl_status crl_scm_load(const char* path, crl_scm** out) {
    return wrap([&] {
        require(path != nullptr && out != nullptr, "crl_scm_load");
        *out = new crl_scm{crl::load_scm(path)};
    });
}

crl_status crl_scm_save(const crl_scm* scm, const char* path) {
    return wrap([&] {
        require(scm != nullptr && path != nullptr, "crl_scm_save");
        crl::save_scm(scm->value, path);
    });
}

crl_status crl_scm_to_json(const crl_scm* scm, char** json_out) {
    return wrap([&] {
        require(scm != nullptr && json_out != nullptr, "crl_scm_to_json");
        *json_out = dup_string(crl::scm_to_json(scm->value));
    });
}

void crl_scm_free(crl_scm* scm) { delete scm; }

crl_status crl_scm_sample(const crl_scm* scm, int64_t n, uint64_t seed, crl_table** out) {
    return wrap([&] {
        require(scm != nullptr && out != nullptr, "crl_scm_sample");
        if (n < 1) crl::fail(crl::ErrorKind::Argument, "sample size must be at least 1");
        *out = new crl_table{scm->value.sample(static_cast<size_t>(n), seed)};
    });
}

crl_status crl_scm_intervene(const crl_scm* scm, const char* assignments, crl_scm** out) {
    return wrap([&] {
        require(scm != nullptr && assignments != nullptr && out != nullptr, "crl_scm_intervene");
        *out = new crl_scm{scm->value.intervene(crl::parse_assignments(assignments))};
    });
}

crl_status crl_scm_counterfactual(const crl_scm* scm, const crl_table* observation, int64_t row,
                                  const char* assignments, crl_table** row_out) {
    return wrap([&] {
        require(scm != nullptr && observation != nullptr && assignments != nullptr &&
                    row_out != nullptr,
                "crl_scm_counterfactual");
        const auto& g = scm->value.graph();
        if (row < 0 || static_cast<size_t>(row) >= observation->value.rows()) {
            crl::fail(crl::ErrorKind::Argument, "observation row index out of range");
        }
        std::vector<double> obs(g.size(), 0.0);
        for (size_t i = 0; i < g.size(); ++i) {
            int c = observation->value.column_index(g.variable(static_cast<int>(i)).name);
            if (c < 0) {
                crl::fail(crl::ErrorKind::Argument, "observation lacks column '" +
                                                        g.variable(static_cast<int>(i)).name + "'");
            }
            obs[i] = observation->value.at(static_cast<size_t>(row), static_cast<size_t>(c));
        }
        auto values = scm->value.counterfactual(obs, crl::parse_assignments(assignments));
        std::vector<double> cells = values;  // one row, column-major == row-major
        *row_out = new crl_table{crl::DataTable(g.variables(), std::move(cells), 1)};
    });
}

crl_status crl_pendulum_render(double pendulum_angle, double light_angle, crl_mask** mask_out,
                               char** scene_json) {
    return wrap([&] {
        crl::PendulumScene scene = crl::render_pendulum(pendulum_angle, light_angle);
        if (scene_json != nullptr) {
            json doc{{"pendulum_angle", scene.pendulum_angle},
                     {"light_angle", scene.light_angle},
                     {"shadow_length", scene.shadow_length},
                     {"shadow_position", scene.shadow_position}};
            *scene_json = dup_string(doc.dump());
        }
        if (mask_out != nullptr) *mask_out = new crl_mask{std::move(scene.raster)};
    });
}

crl_status crl_pendulum_pairs(int64_t n, uint64_t seed, const char* intervene_variable,
                              double intervene_value, const char* out_dir, char** summary_json) {
    return wrap([&] {
        require(out_dir != nullptr, "crl_pendulum_pairs");
        if (n < 1) crl::fail(crl::ErrorKind::Argument, "need at least one scene");
        std::optional<std::pair<std::string, double>> intervention;
        if (intervene_variable != nullptr) {
            intervention = std::make_pair(std::string(intervene_variable), intervene_value);
        }
        std::string index = crl::write_pendulum_pairs(static_cast<size_t>(n), seed, intervention,
                                                      out_dir);
        if (summary_json != nullptr) {
            json doc{{"cases", n},
                     {"seed", seed},
                     {"directory", out_dir},
                     {"index", index},
                     {"variable", intervene_variable != nullptr ? intervene_variable : "identity"}};
            if (intervene_variable != nullptr) doc["value"] = intervene_value;
            *summary_json = dup_string(doc.dump());
        }
    });
}

/* reports ---------------------------------------------------------------------------- */

crl_status crl_report_new(crl_report** out) {
    return wrap([&] {
        require(out != nullptr, "crl_report_new");
        *out = new crl_report{};
    });
}

crl_status crl_report_set_command(crl_report* r, const char* command) {
    return wrap([&] {
        require(r != nullptr && command != nullptr, "crl_report_set_command");
        r->value.set_command(command);
    });
}

crl_status crl_report_add_input(crl_report* r, const char* path) {
    return wrap([&] {
        require(r != nullptr && path != nullptr, "crl_report_add_input");
        r->value.add_input(path);
    });
}

crl_status crl_report_add_section(crl_report* r, const char* name, const char* json_payload) {
    return wrap([&] {
        require(r != nullptr && name != nullptr && json_payload != nullptr,
                "crl_report_add_section");
        json payload;
        try {
            payload = json::parse(json_payload);
        } catch (const json::exception& e) {
            crl::fail(crl::ErrorKind::Argument,
                      std::string("section payload is not valid JSON: ") + e.what());
        }
        r->value.add_section(name, std::move(payload));
    });
}

crl_status crl_report_add_warning(crl_report* r, const char* message) {
    return wrap([&] {
        require(r != nullptr && message != nullptr, "crl_report_add_warning");
        r->value.add_warning(message);
    });
}

crl_status crl_report_emit(const crl_report* r, const char* format, char** out) {
    return wrap([&] {
        require(r != nullptr && format != nullptr && out != nullptr, "crl_report_emit");
        std::string f = format;
        if (f == "text") {
            *out = dup_string(r->value.emit(crl::ReportFormat::Text));
        } else if (f == "json") {
            *out = dup_string(r->value.emit(crl::ReportFormat::Structured));
        } else {
            crl::fail(crl::ErrorKind::Argument, "unknown report format '" + f + "'");
        }
    });
}

void crl_report_free(crl_report* r) { delete r; }

}  // extern "C"
