// Exercises the shared library strictly through its C API.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "crlscore.h"

using nlohmann::json;

namespace {

std::string data_path(const std::string& name) {
    return std::string(CRL_TEST_DATA_DIR) + "/" + name;
}

struct StringFree {
    void operator()(char* s) const { crl_string_free(s); }
};
using ApiString = std::unique_ptr<char, StringFree>;

std::string temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "crlscore_capi_tests";
    std::filesystem::create_directories(dir);
    return dir.string();
}

std::string write_temp(const std::string& name, const std::string& content) {
    std::string path = temp_dir() + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

json parse(const ApiString& s) { return json::parse(s.get()); }

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::string(crl_version()) == "0.1.0");
    crl_graph* g = nullptr;
    crl_status status = crl_graph_load(data_path("missing.json").c_str(), &g);
    CHECK(status == CRL_ERR_IO);
    CHECK(std::strlen(crl_last_error()) > 0);

    status = crl_graph_parse(R"({"variables": [{"name": "A"}, {"name": "B"}],
                                 "edges": [["A", "B"], ["B", "A"]]})", &g);
    CHECK(status == CRL_ERR_VALIDATION);
    CHECK(std::string(crl_last_error()).find("cycle") != std::string::npos);

    CHECK(crl_graph_load(nullptr, &g) == CRL_ERR_ARGUMENT);
}

TEST_CASE("graph census and d-separation through the API") {
    crl_graph* g = nullptr;
    REQUIRE(crl_graph_load(data_path("celeba_beard.json").c_str(), &g) == CRL_OK);
    char* raw = nullptr;
    REQUIRE(crl_graph_census(g, &raw) == CRL_OK);
    ApiString census(raw);
    json doc = parse(census);
    CHECK(doc["counts"]["chains"] == 0);
    CHECK(doc["counts"]["forks"] == 1);
    CHECK(doc["counts"]["colliders"] == 1);
    CHECK(doc["desiderata"]["confounded_edges"].empty());
    CHECK(doc["desiderata"]["satisfied"] == false);

    int separated = -1;
    REQUIRE(crl_graph_dsep(g, "age", "gender", nullptr, &separated) == CRL_OK);
    CHECK(separated == 1);
    REQUIRE(crl_graph_dsep(g, "age", "gender", "bald", &separated) == CRL_OK);
    CHECK(separated == 0);
    CHECK(crl_graph_dsep(g, "age", "nope", nullptr, &separated) == CRL_ERR_ARGUMENT);

    REQUIRE(crl_graph_topo_order(g, &raw) == CRL_OK);
    ApiString topo(raw);
    CHECK(parse(topo)["order"].size() == 4);

    REQUIRE(crl_graph_implied(g, 1, &raw) == CRL_OK);
    ApiString implied(raw);
    CHECK(parse(implied)["independencies"].size() > 0);
    crl_graph_free(g);
}

TEST_CASE("graph save and reload") {
    crl_graph* g = nullptr;
    REQUIRE(crl_graph_load(data_path("celeba_smile.json").c_str(), &g) == CRL_OK);
    std::string path = temp_dir() + "/smile_roundtrip.json";
    REQUIRE(crl_graph_save(g, path.c_str()) == CRL_OK);
    crl_graph* back = nullptr;
    REQUIRE(crl_graph_load(path.c_str(), &back) == CRL_OK);
    char* raw = nullptr;
    REQUIRE(crl_graph_census(back, &raw) == CRL_OK);
    ApiString census(raw);
    CHECK(parse(census)["has_chain"] == true);
    crl_graph_free(g);
    crl_graph_free(back);
}

TEST_CASE("chi2 and audit through the API") {
    std::string csv = "x,y\n";
    for (int i = 0; i < 30; ++i) csv += "0,0\n";
    for (int i = 0; i < 10; ++i) csv += "0,1\n";
    for (int i = 0; i < 10; ++i) csv += "1,0\n";
    for (int i = 0; i < 30; ++i) csv += "1,1\n";
    std::string path = write_temp("chi2.csv", csv);

    crl_table* t = nullptr;
    REQUIRE(crl_table_load(path.c_str(), &t) == CRL_OK);
    int64_t rows = 0;
    int64_t cols = 0;
    REQUIRE(crl_table_shape(t, &rows, &cols) == CRL_OK);
    CHECK(rows == 80);
    CHECK(cols == 2);
    char* name = nullptr;
    REQUIRE(crl_table_column_name(t, 0, &name) == CRL_OK);
    ApiString col(name);
    CHECK(std::string(col.get()) == "x");

    char* raw = nullptr;
    REQUIRE(crl_indep_chi2(t, "x", "y", nullptr, 0.05, 0, &raw) == CRL_OK);
    ApiString result(raw);
    json doc = parse(result);
    CHECK(doc["statistic"] == 20.0);
    CHECK(doc["dof"] == 1);
    CHECK(doc["dependent"] == true);

    crl_table* filtered = nullptr;
    REQUIRE(crl_indep_filter(t, "x", "y", 3, &filtered, &raw) == CRL_OK);
    ApiString summary(raw);
    CHECK(parse(summary)["output_rows"] == 40);
    crl_table_free(filtered);
    crl_table_free(t);
}

TEST_CASE("scm sampling, intervention and audit through the API") {
    crl_scm* scm = nullptr;
    REQUIRE(crl_scm_load(data_path("scm_beard_faithful.json").c_str(), &scm) == CRL_OK);
    crl_table* sample = nullptr;
    REQUIRE(crl_scm_sample(scm, 4000, 2024, &sample) == CRL_OK);

    crl_graph* g = nullptr;
    REQUIRE(crl_graph_load(data_path("celeba_beard.json").c_str(), &g) == CRL_OK);
    char* raw = nullptr;
    REQUIRE(crl_indep_audit(g, sample, 2, 0.05, 0, &raw) == CRL_OK);
    ApiString audit(raw);
    json doc = parse(audit);
    CHECK(doc["entries"].size() == 10);
    CHECK(doc["violation_rate"].get<double>() <= 0.2);
    crl_graph_free(g);
    crl_table_free(sample);

    crl_scm* surgered = nullptr;
    REQUIRE(crl_scm_intervene(scm, "bald=1", &surgered) == CRL_OK);
    REQUIRE(crl_scm_to_json(surgered, &raw) == CRL_OK);
    ApiString surgered_json(raw);
    // Surgery removed age->bald and gender->bald; only age->beard remains.
    CHECK(json::parse(surgered_json.get())["edges"].size() == 1);
    crl_scm_free(surgered);
    crl_scm_free(scm);
}

TEST_CASE("counterfactual through the API") {
    crl_scm* scm = nullptr;
    REQUIRE(crl_scm_load(data_path("scm_chain.json").c_str(), &scm) == CRL_OK);
    crl_table* obs = nullptr;
    REQUIRE(crl_table_load(data_path("obs_chain.csv").c_str(), &obs) == CRL_OK);
    crl_table* result = nullptr;
    REQUIRE(crl_scm_counterfactual(scm, obs, 0, "A=2", &result) == CRL_OK);
    char* raw = nullptr;
    REQUIRE(crl_table_to_csv(result, &raw) == CRL_OK);
    ApiString csv(raw);
    CHECK(std::string(csv.get()) == "A,B,C\n2,5,6\n");
    crl_table_free(result);
    crl_table_free(obs);
    crl_scm_free(scm);
}

TEST_CASE("scorecard build, json and svg through the API") {
    crl_scorecard* card = nullptr;
    REQUIRE(crl_scorecard_build(data_path("card.toml").c_str(), data_path("table1.csv").c_str(),
                                0, 0.0, &card) == CRL_OK);
    char* raw = nullptr;
    REQUIRE(crl_scorecard_json(card, &raw) == CRL_OK);
    ApiString doc_text(raw);
    json doc = parse(doc_text);
    REQUIRE(doc["models"].size() == 3);
    CHECK(doc["models"][0]["name"] == "beta-vae");
    CHECK(std::abs(doc["models"][0]["origami_score"].get<double>() - 0.590) <= 0.002);
    CHECK(std::abs(doc["models"][0]["radar_area"].get<double>() - 0.876) <= 0.002);

    REQUIRE(crl_scorecard_svg(card, "origami", &raw) == CRL_OK);
    ApiString svg(raw);
    CHECK(std::string(svg.get()).find("<svg") != std::string::npos);
    CHECK(crl_scorecard_svg(card, "pie", &raw) == CRL_ERR_ARGUMENT);
    crl_scorecard_free(card);
}

TEST_CASE("runs aggregation through the API") {
    char* raw = nullptr;
    REQUIRE(crl_runs_aggregate(data_path("runs.csv").c_str(), "boundaries_out", 5, "population",
                               &raw) == CRL_OK);
    ApiString result(raw);
    json doc = parse(result);
    CHECK(doc["metrics"][0]["mean"] == 3.0);
    CHECK(crl_runs_aggregate(data_path("runs.csv").c_str(), "median", 5, "population", &raw) ==
          CRL_ERR_ARGUMENT);
}

TEST_CASE("generation metrics and masks through the API") {
    std::string a_path = write_temp("mask_a.pbm", "P1\n2 2\n1 1\n0 0\n");
    std::string b_path = write_temp("mask_b.pbm", "P1\n2 2\n1 0\n1 0\n");
    crl_mask* a = nullptr;
    crl_mask* b = nullptr;
    REQUIRE(crl_mask_load(a_path.c_str(), &a) == CRL_OK);
    REQUIRE(crl_mask_load(b_path.c_str(), &b) == CRL_OK);
    double value = 0.0;
    REQUIRE(crl_metrics_iou(a, b, &value) == CRL_OK);
    CHECK(value == doctest::Approx(1.0 / 3.0));
    crl_mask_free(a);
    crl_mask_free(b);

    std::string emb = write_temp("emb.csv", "e\n0.0\n2.0\n");
    std::string emb2 = write_temp("emb2.csv", "e\n1.0\n3.0\n");
    crl_table* x = nullptr;
    crl_table* y = nullptr;
    REQUIRE(crl_table_load(emb.c_str(), &x) == CRL_OK);
    REQUIRE(crl_table_load(emb2.c_str(), &y) == CRL_OK);
    REQUIRE(crl_metrics_fid(x, y, &value) == CRL_OK);
    CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
    crl_table_free(x);
    crl_table_free(y);
}

TEST_CASE("warnings surface through crl_take_warnings") {
    std::string path = write_temp("empty_mask.pbm", "P1\n2 2\n0 0\n0 0\n");
    crl_mask* empty = nullptr;
    REQUIRE(crl_mask_load(path.c_str(), &empty) == CRL_OK);
    double value = 0.0;
    REQUIRE(crl_metrics_iou(empty, empty, &value) == CRL_OK);
    CHECK(value == 1.0);
    ApiString warnings(crl_take_warnings());
    REQUIRE(warnings.get() != nullptr);
    json doc = json::parse(warnings.get());
    CHECK(doc.size() == 1);
    CHECK(doc[0].get<std::string>().find("empty") != std::string::npos);
    CHECK(crl_take_warnings() == nullptr);  // consumed
    crl_mask_free(empty);
}

TEST_CASE("pendulum pipeline through the API") {
    char* raw = nullptr;
    crl_mask* mask = nullptr;
    REQUIRE(crl_pendulum_render(0.0, 90.0, &mask, &raw) == CRL_OK);
    ApiString scene(raw);
    json doc = parse(scene);
    CHECK(doc["shadow_position"].get<double>() == doctest::Approx(0.5).epsilon(1e-9));
    crl_mask_free(mask);
    CHECK(crl_pendulum_render(99.0, 90.0, &mask, &raw) == CRL_ERR_ARGUMENT);

    std::string dir = temp_dir() + "/pairs";
    REQUIRE(crl_pendulum_pairs(3, 11, "light_angle", 90.0, dir.c_str(), &raw) == CRL_OK);
    ApiString summary(raw);
    CHECK(parse(summary)["cases"] == 3);

    REQUIRE(crl_metrics_counterfactual((dir + "/cases.csv").c_str(), &raw) == CRL_OK);
    ApiString accuracy(raw);
    json acc = parse(accuracy);
    CHECK(acc["cases"] == 3);
    CHECK(acc["mean_iou"].get<double>() >= 0.0);
    CHECK(acc["mean_iou"].get<double>() <= 1.0);
}

TEST_CASE("disentanglement and assignment through the API") {
    std::string factors_csv = "f0,f1\n";
    std::string latents_csv = "z0,z1\n";
    // 9-valued pair of discrete factors; latents copy them.
    for (int i = 0; i < 300; ++i) {
        int a = (i * 7) % 9;
        int b = (i * 5 + 3) % 9;
        factors_csv += std::to_string(a) + "," + std::to_string(b) + "\n";
        latents_csv += std::to_string(a) + ".0," + std::to_string(b) + ".0\n";
    }
    std::string fp = write_temp("factors.csv", factors_csv);
    std::string lp = write_temp("latents.csv", latents_csv);
    crl_table* factors = nullptr;
    crl_table* latents = nullptr;
    REQUIRE(crl_table_load(fp.c_str(), &factors) == CRL_OK);
    REQUIRE(crl_table_load(lp.c_str(), &latents) == CRL_OK);

    char* raw = nullptr;
    REQUIRE(crl_metrics_disentangle(factors, latents, 9, 0, "mic,irs", &raw) == CRL_OK);
    ApiString suite(raw);
    json doc = parse(suite);
    CHECK(doc["mic"].get<double>() >= 0.95);
    CHECK(doc["irs"].get<double>() >= 0.95);
    CHECK_FALSE(doc.contains("tic"));
    CHECK(doc["mic_matching"]["assignment"] == json::array({0, 1}));

    crl_table* matrix = nullptr;
    REQUIRE(crl_metrics_association(factors, latents, "mic", &matrix) == CRL_OK);
    REQUIRE(crl_metrics_assign(matrix, 1, &raw) == CRL_OK);
    ApiString assign(raw);
    json adoc = parse(assign);
    CHECK(adoc["assignment"] == json::array({0, 1}));
    CHECK(adoc["sweep"]["max"].get<double>() == doctest::Approx(adoc["total"].get<double>()));
    crl_table_free(matrix);
    CHECK(crl_metrics_disentangle(factors, latents, 9, 0, "mig", &raw) == CRL_ERR_ARGUMENT);
    crl_table_free(factors);
    crl_table_free(latents);
}

TEST_CASE("reports through the API") {
    crl_report* report = nullptr;
    REQUIRE(crl_report_new(&report) == CRL_OK);
    REQUIRE(crl_report_set_command(report, "crlscore capi test") == CRL_OK);
    REQUIRE(crl_report_add_input(report, data_path("card.toml").c_str()) == CRL_OK);
    REQUIRE(crl_report_add_section(report, "demo", R"({"value": 0.25})") == CRL_OK);
    REQUIRE(crl_report_add_warning(report, "sample warning") == CRL_OK);
    CHECK(crl_report_add_section(report, "demo", R"({"value": 1})") == CRL_ERR_ARGUMENT);
    CHECK(crl_report_add_section(report, "bad", "{oops") == CRL_ERR_ARGUMENT);

    char* raw = nullptr;
    REQUIRE(crl_report_emit(report, "text", &raw) == CRL_OK);
    ApiString text(raw);
    CHECK(std::string(text.get()).find("crlscore 0.1.0") == 0);
    CHECK(std::string(text.get()).find("sample warning") != std::string::npos);
    REQUIRE(crl_report_emit(report, "json", &raw) == CRL_OK);
    ApiString structured(raw);
    json doc = json::parse(structured.get());
    CHECK(doc["sections"]["demo"]["value"] == 0.25);
    CHECK(doc["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
    CHECK(crl_report_emit(report, "yaml", &raw) == CRL_ERR_ARGUMENT);
    crl_report_free(report);
}
