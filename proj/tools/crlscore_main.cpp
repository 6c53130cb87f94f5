// Command-line surface over the crlscore shared library. All domain logic
// lives behind the C API; this binary parses flags, assembles reports and
// writes artifacts.
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crlscore.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;

struct StringFree {
    void operator()(char* s) const { crl_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringFree>;

template <typename T, void (*Free)(T*)>
struct Handle {
    T* ptr = nullptr;
    Handle() = default;
    explicit Handle(T* p) : ptr(p) {}
    ~Handle() { Free(ptr); }
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
    Handle& operator=(Handle&& other) noexcept {
        if (this != &other) {
            Free(ptr);
            ptr = other.ptr;
            other.ptr = nullptr;
        }
        return *this;
    }
    T** out() { return &ptr; }
    T* get() const { return ptr; }
};
using GraphHandle = Handle<crl_graph, crl_graph_free>;
using TableHandle = Handle<crl_table, crl_table_free>;
using MaskHandle = Handle<crl_mask, crl_mask_free>;
using ScmHandle = Handle<crl_scm, crl_scm_free>;
using CardHandle = Handle<crl_scorecard, crl_scorecard_free>;
using ReportHandle = Handle<crl_report, crl_report_free>;

std::string sanitize_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

[[noreturn]] void die(crl_status status) {
    const char* category = "internal";
    switch (status) {
        case CRL_ERR_PARSE:
            category = "parse";
            break;
        case CRL_ERR_VALIDATION:
            category = "validation";
            break;
        case CRL_ERR_IO:
            category = "io";
            break;
        case CRL_ERR_ARGUMENT:
            category = "argument";
            break;
        default:
            break;
    }
    std::fprintf(stderr, "crlscore: error: %s: %s\n", category,
                 sanitize_line(crl_last_error()).c_str());
    std::exit(status == CRL_ERR_IO ? kExitNoInput : kExitValidation);
}

void check(crl_status status) {
    if (status != CRL_OK) die(status);
}

[[noreturn]] void die_usage(const std::string& message) {
    std::fprintf(stderr, "crlscore: error: usage: %s\n", sanitize_line(message).c_str());
    std::exit(kExitUsage);
}

void write_output(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (f == nullptr) {
        std::fprintf(stderr, "crlscore: error: io: cannot write file '%s'\n", out_path.c_str());
        std::exit(kExitNoInput);
    }
    std::fwrite(content.data(), 1, content.size(), f);
    std::fclose(f);
}

// Collects sections and warnings, then renders via the library so text and
// structured output stay in lockstep.
class Report {
public:
    explicit Report(const std::string& command) : handle_(nullptr) {
        check(crl_report_new(handle_.out()));
        check(crl_report_set_command(handle_.get(), command.c_str()));
    }

    void input(const std::string& path) {
        check(crl_report_add_input(handle_.get(), path.c_str()));
    }

    // Pulls the warning buffer of the most recent API call.
    void pull_warnings() {
        if (char* w = crl_take_warnings()) {
            ApiString owned(w);
            for (const auto& item : json::parse(owned.get())) {
                check(crl_report_add_warning(handle_.get(), item.get<std::string>().c_str()));
            }
        }
    }

    void section(const std::string& name, const ApiString& payload) {
        pull_warnings();
        check(crl_report_add_section(handle_.get(), name.c_str(), payload.get()));
    }

    void section(const std::string& name, const json& payload) {
        pull_warnings();
        check(crl_report_add_section(handle_.get(), name.c_str(), payload.dump().c_str()));
    }

    std::string emit(const std::string& format) {
        ApiString out;
        char* raw = nullptr;
        check(crl_report_emit(handle_.get(), format.c_str(), &raw));
        out.reset(raw);
        return out.get();
    }

private:
    ReportHandle handle_;
};

std::string quote_arg(const std::string& arg) {
    if (arg.find(' ') == std::string::npos) return arg;
    return "\"" + arg + "\"";
}

std::string echo_command(int argc, char** argv) {
    std::string echo = "crlscore";
    for (int i = 1; i < argc; ++i) echo += " " + quote_arg(argv[i]);
    return echo;
}

void parse_or_exit(CLI::App& app, const std::vector<std::string>& args) {
    // CLI11 consumes the vector in reverse order.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        std::fputs(app.help().c_str(), stdout);
        std::exit(kExitOk);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "crlscore: error: usage: %s\n", sanitize_line(e.what()).c_str());
        std::exit(kExitValidation);
    }
}

GraphHandle load_graph_arg(const std::string& path) {
    GraphHandle g;
    check(crl_graph_load(path.c_str(), g.out()));
    return g;
}

TableHandle load_table_arg(const std::string& path) {
    TableHandle t;
    check(crl_table_load(path.c_str(), t.out()));
    return t;
}

ApiString table_csv(const TableHandle& t) {
    char* raw = nullptr;
    check(crl_table_to_csv(t.get(), &raw));
    return ApiString(raw);
}

std::string first_column_name(const TableHandle& t) {
    char* raw = nullptr;
    check(crl_table_column_name(t.get(), 0, &raw));
    ApiString owned(raw);
    return owned.get();
}

/* graph ------------------------------------------------------------------- */

int cmd_graph_validate(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Validate a causal graph file and print its topological order",
                 "crlscore graph validate"};
    std::string graph_path;
    std::string out_path;
    std::string format = "text";
    app.add_option("--graph", graph_path, "graph schema file")->required();
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(graph_path);
    GraphHandle g = load_graph_arg(graph_path);
    char* raw = nullptr;
    check(crl_graph_topo_order(g.get(), &raw));
    report.section("validate", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_graph_census(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Junction census, confounder list and dataset desiderata",
                 "crlscore graph census"};
    std::string graph_path;
    std::string out_path;
    std::string format = "text";
    app.add_option("--graph", graph_path, "graph schema file")->required();
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(graph_path);
    GraphHandle g = load_graph_arg(graph_path);
    char* raw = nullptr;
    check(crl_graph_census(g.get(), &raw));
    report.section("census", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_graph_dsep(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"d-separation query", "crlscore graph dsep"};
    std::string graph_path;
    std::string x;
    std::string y;
    std::string given;
    std::string out_path;
    std::string format = "text";
    app.add_option("--graph", graph_path, "graph schema file")->required();
    app.add_option("--x", x, "first variable")->required();
    app.add_option("--y", y, "second variable")->required();
    app.add_option("--given", given, "conditioning set, comma separated");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(graph_path);
    GraphHandle g = load_graph_arg(graph_path);
    int separated = 0;
    check(crl_graph_dsep(g.get(), x.c_str(), y.c_str(), given.empty() ? nullptr : given.c_str(),
                         &separated));
    json payload{{"x", x}, {"y", y}, {"d_separated", separated != 0}};
    payload["given"] = json::array();
    if (!given.empty()) {
        std::string item;
        for (char c : given + ",") {
            if (c == ',') {
                if (!item.empty()) payload["given"].push_back(item);
                item.clear();
            } else {
                item += c;
            }
        }
    }
    report.section("dsep", payload);
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_graph_compare(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Compare a predicted graph against ground truth (SHD, TPR, AUC)",
                 "crlscore graph compare"};
    std::string truth_path;
    std::string predicted_path;
    std::string scores_path;
    std::string out_path;
    std::string format = "text";
    app.add_option("--graph", truth_path, "ground-truth graph file")->required();
    app.add_option("--predicted", predicted_path, "predicted graph file")->required();
    app.add_option("--scores", scores_path, "edge score CSV (cause,effect,score)");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(truth_path);
    report.input(predicted_path);
    if (!scores_path.empty()) report.input(scores_path);
    GraphHandle truth = load_graph_arg(truth_path);
    GraphHandle predicted = load_graph_arg(predicted_path);
    char* raw = nullptr;
    check(crl_graph_compare(truth.get(), predicted.get(),
                            scores_path.empty() ? nullptr : scores_path.c_str(), &raw));
    report.section("compare", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

/* indep ------------------------------------------------------------------- */

int cmd_indep_chi2(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Chi-squared (conditional) independence test", "crlscore indep chi2"};
    std::string data_path;
    std::string x;
    std::string y;
    std::string given;
    std::string out_path;
    std::string format = "text";
    double alpha = 0.05;
    int bins = 0;
    app.add_option("--data", data_path, "CSV data table")->required();
    app.add_option("--x", x, "first variable")->required();
    app.add_option("--y", y, "second variable")->required();
    app.add_option("--given", given, "conditioning set, comma separated");
    app.add_option("--alpha", alpha, "significance level (default 0.05)");
    app.add_option("--bins", bins, "equal-frequency bins for numeric columns");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(data_path);
    TableHandle data = load_table_arg(data_path);
    char* raw = nullptr;
    check(crl_indep_chi2(data.get(), x.c_str(), y.c_str(), given.empty() ? nullptr : given.c_str(),
                         alpha, bins, &raw));
    report.section("chi2", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_indep_audit(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Audit a causal graph against data with chi-squared tests",
                 "crlscore indep audit"};
    std::string graph_path;
    std::string data_path;
    std::string out_path;
    std::string format = "text";
    double alpha = 0.05;
    int max_conditioning = 2;
    int bins = 0;
    app.add_option("--graph", graph_path, "graph schema file")->required();
    app.add_option("--data", data_path, "CSV data table")->required();
    app.add_option("--alpha", alpha, "significance level (default 0.05)");
    app.add_option("--max-conditioning", max_conditioning, "conditioning set bound (default 2)");
    app.add_option("--bins", bins, "equal-frequency bins for numeric columns");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(graph_path);
    report.input(data_path);
    GraphHandle g = load_graph_arg(graph_path);
    TableHandle data = load_table_arg(data_path);
    char* raw = nullptr;
    check(crl_indep_audit(g.get(), data.get(), max_conditioning, alpha, bins, &raw));
    report.section("audit", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_indep_filter(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Subsample a table so two columns become independent",
                 "crlscore indep filter"};
    std::string data_path;
    std::string x;
    std::string y;
    std::string out_path;
    std::string format = "text";
    uint64_t seed = 0;
    app.add_option("--data", data_path, "CSV data table")->required();
    app.add_option("--x", x, "first variable")->required();
    app.add_option("--y", y, "second variable")->required();
    app.add_option("--seed", seed, "subsampling seed (default 0)");
    app.add_option("--out", out_path, "output CSV path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(data_path);
    TableHandle data = load_table_arg(data_path);
    TableHandle filtered;
    char* summary = nullptr;
    check(crl_indep_filter(data.get(), x.c_str(), y.c_str(), seed, filtered.out(), &summary));
    ApiString summary_owned(summary);
    if (out_path.empty()) {
        write_output(table_csv(filtered).get(), "");
        return kExitOk;
    }
    check(crl_table_save(filtered.get(), out_path.c_str()));
    report.section("filter", summary_owned);
    write_output(report.emit(format), "");
    return kExitOk;
}

/* metrics ----------------------------------------------------------------- */

int cmd_metrics_disentangle(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Disentanglement suite: MIC, TIC, IRS, JEMMIG, DCI",
                 "crlscore metrics disentangle"};
    std::string factors_path;
    std::string latents_path;
    std::string metrics;
    std::string out_path;
    std::string format = "text";
    int bins = 20;
    uint64_t seed = 0;
    app.add_option("--factors", factors_path, "generative factor CSV")->required();
    app.add_option("--latents", latents_path, "latent variable CSV")->required();
    app.add_option("--metrics", metrics, "subset of mic,tic,irs,jemmig,dci (default all)");
    app.add_option("--bins", bins, "quantile bins (default 20)");
    app.add_option("--seed", seed, "split seed for DCI informativeness (default 0)");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(factors_path);
    report.input(latents_path);
    TableHandle factors = load_table_arg(factors_path);
    TableHandle latents = load_table_arg(latents_path);
    char* raw = nullptr;
    check(crl_metrics_disentangle(factors.get(), latents.get(), bins, seed,
                                  metrics.empty() ? nullptr : metrics.c_str(), &raw));
    report.section("disentanglement", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_metrics_generation(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Reconstruction / counterfactual generation metrics",
                 "crlscore metrics generation"};
    std::string metric;
    std::string a_path;
    std::string b_path;
    std::string original_path;
    std::string reconstructed_path;
    std::string probs_path;
    std::string target_path;
    std::string predicted_path;
    std::string column;
    std::string predicted_column;
    std::string kind = "classification";
    std::string mode = "mae";
    std::string cases_path;
    std::string out_path;
    std::string format = "text";
    app.add_option("--metric", metric,
                   "one of reconstruction,composition,fid,kid,is,iou,effectiveness,counterfactual")
        ->required();
    app.add_option("--a", a_path, "first input (embeddings CSV or PBM mask)");
    app.add_option("--b", b_path, "second input (embeddings CSV or PBM mask)");
    app.add_option("--original", original_path, "original sample table");
    app.add_option("--reconstructed", reconstructed_path, "reconstructed / regenerated table");
    app.add_option("--probs", probs_path, "row-stochastic class probability CSV");
    app.add_option("--target", target_path, "intended intervention targets CSV");
    app.add_option("--predicted", predicted_path, "predictions CSV");
    app.add_option("--column", column, "target column (default: first column)");
    app.add_option("--predicted-column", predicted_column, "prediction column (default: --column)");
    app.add_option("--kind", kind, "effectiveness kind: classification or regression");
    app.add_option("--mode", mode, "reconstruction mode: mae or mse");
    app.add_option("--cases", cases_path, "counterfactual case index CSV");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    json payload{{"metric", metric}};
    auto need = [&](const std::string& value, const char* flag) -> const std::string& {
        if (value.empty()) {
            std::fprintf(stderr, "crlscore: error: usage: --metric %s requires %s\n",
                         metric.c_str(), flag);
            std::exit(kExitValidation);
        }
        return value;
    };
    double value = 0.0;
    if (metric == "reconstruction" || metric == "composition") {
        report.input(need(original_path, "--original"));
        report.input(need(reconstructed_path, "--reconstructed"));
        TableHandle original = load_table_arg(original_path);
        TableHandle reconstructed = load_table_arg(reconstructed_path);
        if (metric == "reconstruction") {
            check(crl_metrics_reconstruction(original.get(), reconstructed.get(), mode.c_str(),
                                             &value));
            payload["mode"] = mode;
            payload["score"] = value;
        } else {
            check(crl_metrics_composition_l1(original.get(), reconstructed.get(), &value));
            payload["l1"] = value;
        }
    } else if (metric == "fid" || metric == "kid") {
        report.input(need(a_path, "--a"));
        report.input(need(b_path, "--b"));
        TableHandle a = load_table_arg(a_path);
        TableHandle b = load_table_arg(b_path);
        check(metric == "fid" ? crl_metrics_fid(a.get(), b.get(), &value)
                              : crl_metrics_kid(a.get(), b.get(), &value));
        payload["value"] = value;
    } else if (metric == "is") {
        report.input(need(probs_path, "--probs"));
        TableHandle probs = load_table_arg(probs_path);
        check(crl_metrics_inception_score(probs.get(), &value));
        payload["value"] = value;
    } else if (metric == "iou") {
        report.input(need(a_path, "--a"));
        report.input(need(b_path, "--b"));
        MaskHandle a;
        MaskHandle b;
        check(crl_mask_load(a_path.c_str(), a.out()));
        check(crl_mask_load(b_path.c_str(), b.out()));
        check(crl_metrics_iou(a.get(), b.get(), &value));
        payload["value"] = value;
    } else if (metric == "effectiveness") {
        report.input(need(target_path, "--target"));
        report.input(need(predicted_path, "--predicted"));
        TableHandle target = load_table_arg(target_path);
        TableHandle predicted = load_table_arg(predicted_path);
        std::string tcol = column.empty() ? first_column_name(target) : column;
        std::string pcol = predicted_column.empty()
                               ? (column.empty() ? first_column_name(predicted) : column)
                               : predicted_column;
        check(crl_metrics_effectiveness(target.get(), tcol.c_str(), predicted.get(), pcol.c_str(),
                                        kind.c_str(), &value));
        payload["kind"] = kind;
        payload["column"] = tcol;
        payload[kind == "classification" ? "macro_f1" : "mae"] = value;
    } else if (metric == "counterfactual") {
        report.input(need(cases_path, "--cases"));
        char* raw = nullptr;
        check(crl_metrics_counterfactual(cases_path.c_str(), &raw));
        ApiString owned(raw);
        json result = json::parse(owned.get());
        for (auto& [key, val] : result.items()) payload[key] = val;
    } else {
        std::fprintf(stderr, "crlscore: error: usage: unknown generation metric '%s'\n",
                     metric.c_str());
        std::exit(kExitValidation);
    }
    report.section("generation", payload);
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_metrics_assign(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Hungarian assignment over an association matrix",
                 "crlscore metrics assign"};
    std::string matrix_path;
    std::string factors_path;
    std::string latents_path;
    std::string metric = "mic";
    bool sweep = false;
    std::string out_path;
    std::string format = "text";
    app.add_option("--matrix", matrix_path, "association matrix CSV (rows = factors)");
    app.add_option("--factors", factors_path, "factor CSV (with --latents, builds the matrix)");
    app.add_option("--latents", latents_path, "latent CSV");
    app.add_option("--metric", metric, "association metric for --factors/--latents: mic or tic");
    app.add_flag("--sweep", sweep, "also run the exhaustive permutation sweep");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    TableHandle matrix;
    if (!matrix_path.empty()) {
        report.input(matrix_path);
        matrix = load_table_arg(matrix_path);
    } else if (!factors_path.empty() && !latents_path.empty()) {
        report.input(factors_path);
        report.input(latents_path);
        TableHandle factors = load_table_arg(factors_path);
        TableHandle latents = load_table_arg(latents_path);
        check(crl_metrics_association(factors.get(), latents.get(), metric.c_str(), matrix.out()));
        report.pull_warnings();
    } else {
        die_usage("metrics assign needs --matrix or both --factors and --latents");
    }
    char* raw = nullptr;
    check(crl_metrics_assign(matrix.get(), sweep ? 1 : 0, &raw));
    report.section("assign", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

/* score / runs -------------------------------------------------------------- */

int cmd_score(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Build a scorecard: normalization, radar and origami areas",
                 "crlscore score"};
    std::string config_path;
    std::string values_path;
    std::string svg_path;
    std::string svg_kind = "radar";
    std::string out_path;
    std::string format = "text";
    double h_override = 0.0;
    bool degenerate_to_half = false;
    app.add_option("--config", config_path, "scorecard config (TOML)")->required();
    app.add_option("--values", values_path, "raw values CSV (models as rows)");
    app.add_option("--svg", svg_path, "write a plot SVG to this path");
    app.add_option("--svg-kind", svg_kind, "plot kind: radar or origami");
    app.add_option("--h", h_override, "override the card's auxiliary-axis value");
    app.add_flag("--degenerate-to-half", degenerate_to_half,
                 "map degenerate unbounded ranges to 0.5 instead of failing");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(config_path);
    if (!values_path.empty()) report.input(values_path);
    CardHandle card;
    check(crl_scorecard_build(config_path.c_str(), values_path.empty() ? nullptr : values_path.c_str(),
                              degenerate_to_half ? 1 : 0, h_override, card.out()));
    report.pull_warnings();
    char* raw = nullptr;
    check(crl_scorecard_json(card.get(), &raw));
    report.section("scorecard", ApiString(raw));
    if (!svg_path.empty()) {
        char* svg = nullptr;
        check(crl_scorecard_svg(card.get(), svg_kind.c_str(), &svg));
        ApiString owned(svg);
        write_output(owned.get(), svg_path);
    }
    write_output(report.emit(format), out_path);
    return kExitOk;
}

int cmd_runs_aggregate(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Aggregate repeated-run metric logs", "crlscore runs aggregate"};
    std::string data_path;
    std::string mode = "all";
    std::string std_mode = "population";
    int k = 5;
    std::string out_path;
    std::string format = "text";
    app.add_option("--data", data_path, "run log CSV (run,metric,value)")->required();
    app.add_option("--mode", mode, "all, boundaries_out or top_k");
    app.add_option("--k", k, "k for top_k (default 5)");
    app.add_option("--std", std_mode, "population or sample");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(data_path);
    char* raw = nullptr;
    check(crl_runs_aggregate(data_path.c_str(), mode.c_str(), k, std_mode.c_str(), &raw));
    report.section("runs", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

/* scm ------------------------------------------------------------------------ */

int cmd_scm_sample(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Ancestral sampling from a structural causal model",
                 "crlscore scm sample"};
    std::string scm_path;
    std::string out_path;
    std::string format = "text";
    int64_t n = 0;
    uint64_t seed = 0;
    app.add_option("--scm", scm_path, "SCM definition file")->required();
    app.add_option("--n", n, "number of rows")->required();
    app.add_option("--seed", seed, "sampling seed (default 0)");
    app.add_option("--out", out_path, "output CSV path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    report.input(scm_path);
    ScmHandle scm;
    check(crl_scm_load(scm_path.c_str(), scm.out()));
    TableHandle table;
    check(crl_scm_sample(scm.get(), n, seed, table.out()));
    if (out_path.empty()) {
        write_output(table_csv(table).get(), "");
        return kExitOk;
    }
    check(crl_table_save(table.get(), out_path.c_str()));
    int64_t rows = 0;
    int64_t cols = 0;
    check(crl_table_shape(table.get(), &rows, &cols));
    report.section("sample", json{{"rows", rows}, {"columns", cols}, {"seed", seed},
                                  {"out", out_path}});
    write_output(report.emit(format), "");
    return kExitOk;
}

int cmd_scm_intervene(const std::vector<std::string>& args, const std::string& echo) {
    (void)echo;
    CLI::App app{"Apply a do-intervention and write the surgered model",
                 "crlscore scm intervene"};
    std::string scm_path;
    std::string set_spec;
    std::string out_path;
    app.add_option("--scm", scm_path, "SCM definition file")->required();
    app.add_option("--set", set_spec, "assignments, e.g. x=1,y=0.5")->required();
    app.add_option("--out", out_path, "output SCM path (default stdout)");
    parse_or_exit(app, args);

    ScmHandle scm;
    check(crl_scm_load(scm_path.c_str(), scm.out()));
    ScmHandle intervened;
    check(crl_scm_intervene(scm.get(), set_spec.c_str(), intervened.out()));
    if (out_path.empty()) {
        char* raw = nullptr;
        check(crl_scm_to_json(intervened.get(), &raw));
        ApiString owned(raw);
        write_output(owned.get(), "");
        return kExitOk;
    }
    check(crl_scm_save(intervened.get(), out_path.c_str()));
    return kExitOk;
}

int cmd_scm_counterfactual(const std::vector<std::string>& args, const std::string& echo) {
    (void)echo;
    CLI::App app{"Abduction-based counterfactual for one observed row",
                 "crlscore scm counterfactual"};
    std::string scm_path;
    std::string observation_path;
    std::string set_spec;
    std::string out_path;
    int64_t row = 0;
    app.add_option("--scm", scm_path, "SCM definition file")->required();
    app.add_option("--observation", observation_path, "CSV with the observed row(s)")->required();
    app.add_option("--row", row, "row index into the observation table (default 0)");
    app.add_option("--set", set_spec, "assignments, e.g. x=2")->required();
    app.add_option("--out", out_path, "output CSV path (default stdout)");
    parse_or_exit(app, args);

    ScmHandle scm;
    check(crl_scm_load(scm_path.c_str(), scm.out()));
    TableHandle observation = load_table_arg(observation_path);
    TableHandle result;
    check(crl_scm_counterfactual(scm.get(), observation.get(), row, set_spec.c_str(),
                                 result.out()));
    if (out_path.empty()) {
        write_output(table_csv(result).get(), "");
    } else {
        check(crl_table_save(result.get(), out_path.c_str()));
    }
    return kExitOk;
}

int cmd_scm_pendulum(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Render pendulum scenes or ground-truth counterfactual pairs",
                 "crlscore scm pendulum"};
    double angle = 0.0;
    double light = 90.0;
    bool have_angle = false;
    bool have_light = false;
    std::string mask_path;
    std::string out_dir;
    std::string set_spec;
    std::string out_path;
    std::string format = "text";
    int64_t n = 0;
    uint64_t seed = 0;
    auto* angle_opt = app.add_option("--angle", angle, "pendulum angle in degrees [-45, 45]");
    auto* light_opt = app.add_option("--light", light, "light angle in degrees [60, 120]");
    app.add_option("--mask", mask_path, "write the scene raster PBM here");
    app.add_option("--n", n, "number of counterfactual pairs");
    app.add_option("--seed", seed, "scene sampling seed (default 0)");
    app.add_option("--set", set_spec, "intervention, e.g. light_angle=90");
    app.add_option("--out-dir", out_dir, "directory for PBM pairs and cases.csv");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);
    have_angle = angle_opt->count() > 0;
    have_light = light_opt->count() > 0;

    Report report(echo);
    if (n > 0 || !out_dir.empty()) {
        if (n <= 0 || out_dir.empty()) {
            die_usage("pendulum pairs need both --n and --out-dir");
        }
        std::string variable;
        double value = 0.0;
        if (!set_spec.empty()) {
            auto eq = set_spec.find('=');
            if (eq == std::string::npos) die_usage("--set must look like name=value");
            variable = set_spec.substr(0, eq);
            value = std::atof(set_spec.c_str() + eq + 1);
        }
        char* raw = nullptr;
        check(crl_pendulum_pairs(n, seed, variable.empty() ? nullptr : variable.c_str(), value,
                                 out_dir.c_str(), &raw));
        report.section("pendulum_pairs", ApiString(raw));
        write_output(report.emit(format), out_path);
        return kExitOk;
    }
    if (!have_angle || !have_light) {
        die_usage("pendulum needs --angle and --light (or --n with --out-dir)");
    }
    MaskHandle mask;
    char* raw = nullptr;
    check(crl_pendulum_render(angle, light, mask.out(), &raw));
    if (!mask_path.empty()) check(crl_mask_save(mask.get(), mask_path.c_str()));
    report.section("pendulum", ApiString(raw));
    write_output(report.emit(format), out_path);
    return kExitOk;
}

/* report ----------------------------------------------------------------------- */

int cmd_report(const std::vector<std::string>& args, const std::string& echo) {
    CLI::App app{"Combined report over any subset of inputs", "crlscore report"};
    std::string graph_path;
    std::string data_path;
    std::string config_path;
    std::string values_path;
    std::string runs_path;
    std::string factors_path;
    std::string latents_path;
    std::string out_path;
    std::string format = "text";
    std::string mode = "all";
    std::string std_mode = "population";
    double alpha = 0.05;
    int max_conditioning = 2;
    int bins = 0;
    int suite_bins = 20;
    int k = 5;
    uint64_t seed = 0;
    app.add_option("--graph", graph_path, "graph schema file");
    app.add_option("--data", data_path, "CSV data table (audited against --graph)");
    app.add_option("--config", config_path, "scorecard config");
    app.add_option("--values", values_path, "scorecard values CSV");
    app.add_option("--runs", runs_path, "run log CSV");
    app.add_option("--factors", factors_path, "factor CSV (with --latents)");
    app.add_option("--latents", latents_path, "latent CSV");
    app.add_option("--alpha", alpha, "audit significance level");
    app.add_option("--max-conditioning", max_conditioning, "audit conditioning bound");
    app.add_option("--bins", bins, "equal-frequency bins for numeric audit columns");
    app.add_option("--suite-bins", suite_bins, "quantile bins for the disentanglement suite");
    app.add_option("--mode", mode, "run aggregation mode");
    app.add_option("--k", k, "k for top_k run aggregation");
    app.add_option("--std", std_mode, "run aggregation std convention");
    app.add_option("--seed", seed, "seed for seeded components");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "report format: text or json");
    parse_or_exit(app, args);

    Report report(echo);
    bool any = false;
    if (!graph_path.empty()) {
        any = true;
        report.input(graph_path);
        GraphHandle g = load_graph_arg(graph_path);
        char* raw = nullptr;
        check(crl_graph_topo_order(g.get(), &raw));
        report.section("validate", ApiString(raw));
        check(crl_graph_census(g.get(), &raw));
        report.section("census", ApiString(raw));
        if (!data_path.empty()) {
            report.input(data_path);
            TableHandle data = load_table_arg(data_path);
            check(crl_indep_audit(g.get(), data.get(), max_conditioning, alpha, bins, &raw));
            report.section("audit", ApiString(raw));
        }
    }
    if (!factors_path.empty() && !latents_path.empty()) {
        any = true;
        report.input(factors_path);
        report.input(latents_path);
        TableHandle factors = load_table_arg(factors_path);
        TableHandle latents = load_table_arg(latents_path);
        char* raw = nullptr;
        check(crl_metrics_disentangle(factors.get(), latents.get(), suite_bins, seed, nullptr,
                                      &raw));
        report.section("disentanglement", ApiString(raw));
    }
    if (!config_path.empty()) {
        any = true;
        report.input(config_path);
        if (!values_path.empty()) report.input(values_path);
        CardHandle card;
        check(crl_scorecard_build(config_path.c_str(),
                                  values_path.empty() ? nullptr : values_path.c_str(), 0, 0.0,
                                  card.out()));
        report.pull_warnings();
        char* raw = nullptr;
        check(crl_scorecard_json(card.get(), &raw));
        report.section("scorecard", ApiString(raw));
    }
    if (!runs_path.empty()) {
        any = true;
        report.input(runs_path);
        char* raw = nullptr;
        check(crl_runs_aggregate(runs_path.c_str(), mode.c_str(), k, std_mode.c_str(), &raw));
        report.section("runs", ApiString(raw));
    }
    if (!any) die_usage("report needs at least one input (--graph, --factors/--latents, --config, --runs)");
    write_output(report.emit(format), out_path);
    return kExitOk;
}

void print_usage(std::FILE* to) {
    std::fputs(
        "usage: crlscore <command> [flags]\n"
        "\n"
        "commands:\n"
        "  graph validate|census|dsep|compare\n"
        "  indep chi2|audit|filter\n"
        "  metrics disentangle|generation|assign\n"
        "  score\n"
        "  runs aggregate\n"
        "  scm sample|intervene|counterfactual|pendulum\n"
        "  report\n"
        "\n"
        "run 'crlscore <command> --help' for per-command flags\n",
        to);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> all(argv + 1, argv + argc);
    if (all.empty() || all[0] == "--help" || all[0] == "-h" || all[0] == "help") {
        print_usage(all.empty() ? stderr : stdout);
        return all.empty() ? kExitUsage : kExitOk;
    }
    if (all[0] == "--version") {
        std::printf("crlscore %s\n", crl_version());
        return kExitOk;
    }

    const std::string echo = echo_command(argc, argv);
    auto rest = [&](size_t skip) {
        return std::vector<std::string>(all.begin() + static_cast<std::ptrdiff_t>(skip),
                                        all.end());
    };
    auto sub_of = [&](const std::string& group) -> std::string {
        if (all.size() >= 2 && (all[1] == "--help" || all[1] == "-h")) {
            print_usage(stdout);
            std::exit(kExitOk);
        }
        if (all.size() < 2 || (!all[1].empty() && all[1][0] == '-')) {
            std::fprintf(stderr, "crlscore: error: usage: '%s' needs a subcommand\n",
                         group.c_str());
            std::exit(kExitUsage);
        }
        return all[1];
    };

    const std::string& group = all[0];
    if (group == "graph") {
        std::string sub = sub_of(group);
        if (sub == "validate") return cmd_graph_validate(rest(2), echo);
        if (sub == "census") return cmd_graph_census(rest(2), echo);
        if (sub == "dsep") return cmd_graph_dsep(rest(2), echo);
        if (sub == "compare") return cmd_graph_compare(rest(2), echo);
    } else if (group == "indep") {
        std::string sub = sub_of(group);
        if (sub == "chi2") return cmd_indep_chi2(rest(2), echo);
        if (sub == "audit") return cmd_indep_audit(rest(2), echo);
        if (sub == "filter") return cmd_indep_filter(rest(2), echo);
    } else if (group == "metrics") {
        std::string sub = sub_of(group);
        if (sub == "disentangle") return cmd_metrics_disentangle(rest(2), echo);
        if (sub == "generation") return cmd_metrics_generation(rest(2), echo);
        if (sub == "assign") return cmd_metrics_assign(rest(2), echo);
    } else if (group == "score") {
        return cmd_score(rest(1), echo);
    } else if (group == "runs") {
        std::string sub = sub_of(group);
        if (sub == "aggregate") return cmd_runs_aggregate(rest(2), echo);
    } else if (group == "scm") {
        std::string sub = sub_of(group);
        if (sub == "sample") return cmd_scm_sample(rest(2), echo);
        if (sub == "intervene") return cmd_scm_intervene(rest(2), echo);
        if (sub == "counterfactual") return cmd_scm_counterfactual(rest(2), echo);
        if (sub == "pendulum") return cmd_scm_pendulum(rest(2), echo);
    } else if (group == "report") {
        return cmd_report(rest(1), echo);
    }
    std::fprintf(stderr, "crlscore: error: usage: unknown subcommand '%s'\n",
                 group == "graph" || group == "indep" || group == "metrics" || group == "runs" ||
                         group == "scm"
                     ? (group + " " + (all.size() > 1 ? all[1] : "")).c_str()
                     : group.c_str());
    print_usage(stderr);
    return kExitUsage;
}
