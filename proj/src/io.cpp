#include "io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "generation.hpp"
#include "graph_analysis.hpp"
#include "util.hpp"

namespace crl {

namespace {

constexpr int kMaxInferredCardinality = 32;

using nlohmann::json;

double parse_cell(std::string_view cell, const std::string& origin, size_t line, size_t col) {
    std::string_view t = trim(cell);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
        fail(ErrorKind::Parse, origin + ": line " + std::to_string(line) + ", column " +
                                   std::to_string(col + 1) + ": cannot parse '" +
                                   std::string(t) + "' as a number");
    }
    if (!std::isfinite(v)) {
        fail(ErrorKind::Validation, origin + ": line " + std::to_string(line) + ", column " +
                                        std::to_string(col + 1) + ": non-finite value");
    }
    return v;
}

// One CSV record; supports quoted fields without embedded newlines.
std::vector<std::string> split_record(const std::string& line, const std::string& origin,
                                      size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"' && cur.empty()) {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (quoted) {
        fail(ErrorKind::Parse, origin + ": line " + std::to_string(lineno) + ": unterminated quote");
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) {
        if (cur.back() == '\r') cur.pop_back();
        lines.push_back(std::move(cur));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

VariableSpec parse_variable(const json& jv, const std::string& origin) {
    if (!jv.is_object()) fail(ErrorKind::Parse, origin + ": variable entry must be an object");
    VariableSpec v;
    if (!jv.contains("name") || !jv["name"].is_string()) {
        fail(ErrorKind::Parse, origin + ": variable without a string \"name\"");
    }
    v.name = jv["name"].get<std::string>();
    std::string kind = jv.value("kind", std::string("numeric"));
    if (kind == "numeric") {
        v.kind = VarKind::Numeric;
    } else if (kind == "categorical") {
        v.kind = VarKind::Categorical;
    } else {
        fail(ErrorKind::Parse, origin + ": variable '" + v.name + "' has unknown kind '" + kind +
                                   "' (expected numeric or categorical)");
    }
    if (jv.contains("cardinality")) {
        if (!jv["cardinality"].is_number_integer()) {
            fail(ErrorKind::Parse, origin + ": cardinality of '" + v.name + "' must be an integer");
        }
        v.cardinality = jv["cardinality"].get<int>();
    }
    if (jv.contains("observed")) {
        if (!jv["observed"].is_boolean()) {
            fail(ErrorKind::Parse, origin + ": observed flag of '" + v.name + "' must be boolean");
        }
        v.observed = jv["observed"].get<bool>();
    }
    return v;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open file '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write file '" + path + "'");
    out << content;
    if (!out) fail(ErrorKind::Io, "failed while writing '" + path + "'");
}

CausalGraph parse_graph(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, origin + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("variables") || !doc["variables"].is_array()) {
        fail(ErrorKind::Parse, origin + ": expected an object with a \"variables\" array");
    }
    std::vector<VariableSpec> vars;
    for (const auto& jv : doc["variables"]) vars.push_back(parse_variable(jv, origin));

    if (doc.contains("labels")) {
        if (!doc["labels"].is_object()) fail(ErrorKind::Parse, origin + ": \"labels\" must be an object");
        for (const auto& [name, arr] : doc["labels"].items()) {
            auto it = std::find_if(vars.begin(), vars.end(),
                                   [&](const VariableSpec& v) { return v.name == name; });
            if (it == vars.end()) {
                fail(ErrorKind::Parse, origin + ": labels for unknown variable '" + name + "'");
            }
            if (!arr.is_array()) fail(ErrorKind::Parse, origin + ": labels of '" + name + "' must be an array");
            for (const auto& s : arr) {
                if (!s.is_string()) fail(ErrorKind::Parse, origin + ": labels of '" + name + "' must be strings");
                it->labels.push_back(s.get<std::string>());
            }
        }
    }

    std::vector<std::pair<int, int>> edges;
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) fail(ErrorKind::Parse, origin + ": \"edges\" must be an array");
        for (const auto& je : doc["edges"]) {
            if (!je.is_array() || je.size() != 2 || !je[0].is_string() || !je[1].is_string()) {
                fail(ErrorKind::Parse, origin + ": each edge must be a [\"cause\",\"effect\"] pair");
            }
            std::string cause = je[0].get<std::string>();
            std::string effect = je[1].get<std::string>();
            auto find = [&](const std::string& n) {
                for (size_t i = 0; i < vars.size(); ++i) {
                    if (vars[i].name == n) return static_cast<int>(i);
                }
                fail(ErrorKind::Parse, origin + ": edge references unknown variable '" + n + "'");
            };
            edges.emplace_back(find(cause), find(effect));
        }
    }
    try {
        CausalGraph g(std::move(vars), std::move(edges));
        topological_order(g);  // loading implies the acyclicity check
        return g;
    } catch (const Error& e) {
        fail(e.kind(), origin + ": " + e.what());
    }
}

CausalGraph load_graph(const std::string& path) {
    return parse_graph(read_file(path), path);
}

std::string graph_to_json(const CausalGraph& g) {
    json doc;
    doc["variables"] = json::array();
    json labels = json::object();
    for (const auto& v : g.variables()) {
        json jv;
        jv["name"] = v.name;
        jv["kind"] = v.kind == VarKind::Numeric ? "numeric" : "categorical";
        if (v.is_categorical()) jv["cardinality"] = v.cardinality;
        jv["observed"] = v.observed;
        doc["variables"].push_back(jv);
        if (!v.labels.empty()) labels[v.name] = v.labels;
    }
    doc["edges"] = json::array();
    for (auto [a, b] : g.edges()) {
        doc["edges"].push_back(json::array({g.variable(a).name, g.variable(b).name}));
    }
    if (!labels.empty()) doc["labels"] = labels;
    return doc.dump(2) + "\n";
}

void save_graph(const CausalGraph& g, const std::string& path) {
    write_file(path, graph_to_json(g));
}

DataTable parse_table(const std::string& csv_text, const std::string& origin,
                      const std::vector<VariableSpec>* schema) {
    auto lines = csv_lines(csv_text);
    if (lines.empty()) fail(ErrorKind::Parse, origin + ": missing header row");
    auto header = split_record(lines[0], origin, 1);
    const size_t ncols = header.size();
    std::vector<std::string> names;
    for (auto& h : header) names.emplace_back(trim(h));

    if (lines.size() < 2) fail(ErrorKind::Validation, origin + ": table has no data rows");
    const size_t nrows = lines.size() - 1;

    std::vector<double> cells(nrows * ncols);
    for (size_t r = 0; r < nrows; ++r) {
        auto fields = split_record(lines[r + 1], origin, r + 2);
        if (fields.size() != ncols) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(r + 2) + " has " +
                                       std::to_string(fields.size()) + " fields, expected " +
                                       std::to_string(ncols));
        }
        for (size_t c = 0; c < ncols; ++c) {
            cells[c * nrows + r] = parse_cell(fields[c], origin, r + 2, c);
        }
    }

    std::vector<VariableSpec> columns;
    if (schema != nullptr) {
        if (schema->size() != ncols) {
            fail(ErrorKind::Validation, origin + ": schema has " + std::to_string(schema->size()) +
                                            " columns, file has " + std::to_string(ncols));
        }
        columns = *schema;
        for (size_t c = 0; c < ncols; ++c) {
            if (columns[c].name != names[c]) {
                fail(ErrorKind::Validation, origin + ": header column '" + names[c] +
                                                "' does not match schema column '" +
                                                columns[c].name + "'");
            }
        }
    } else {
        for (size_t c = 0; c < ncols; ++c) {
            VariableSpec spec;
            spec.name = names[c];
            bool integral = true;
            std::set<double> distinct;
            for (size_t r = 0; r < nrows && integral; ++r) {
                double v = cells[c * nrows + r];
                if (v != std::floor(v) || v < 0) {
                    integral = false;
                    break;
                }
                distinct.insert(v);
                if (distinct.size() > kMaxInferredCardinality) integral = false;
            }
            if (integral) {
                spec.kind = VarKind::Categorical;
                spec.cardinality = std::max(2, static_cast<int>(*distinct.rbegin()) + 1);
            }
            columns.push_back(std::move(spec));
        }
    }
    try {
        return DataTable(std::move(columns), std::move(cells), nrows);
    } catch (const Error& e) {
        fail(e.kind(), origin + ": " + e.what());
    }
}

DataTable load_table(const std::string& path) {
    return parse_table(read_file(path), path, nullptr);
}

DataTable load_table_with_schema(const std::string& path, const std::vector<VariableSpec>& schema) {
    return parse_table(read_file(path), path, &schema);
}

std::string table_to_csv(const DataTable& t) {
    std::string out;
    for (size_t c = 0; c < t.cols(); ++c) {
        if (c > 0) out += ',';
        out += t.column(c).name;
    }
    out += '\n';
    for (size_t r = 0; r < t.rows(); ++r) {
        for (size_t c = 0; c < t.cols(); ++c) {
            if (c > 0) out += ',';
            out += format_shortest(t.at(r, c));
        }
        out += '\n';
    }
    return out;
}

void save_table(const DataTable& t, const std::string& path) {
    write_file(path, table_to_csv(t));
}

BinaryMask parse_mask(const std::string& pbm_text, const std::string& origin) {
    // P1 format: magic, dimensions, then 0/1 digits; '#' starts a comment.
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < pbm_text.size()) {
            if (pbm_text[i] == '#') {
                while (i < pbm_text.size() && pbm_text[i] != '\n') ++i;
            } else if (std::isspace(static_cast<unsigned char>(pbm_text[i]))) {
                ++i;
            } else {
                break;
            }
        }
    };
    auto next_token = [&]() -> std::string {
        skip_ws();
        size_t start = i;
        while (i < pbm_text.size() && !std::isspace(static_cast<unsigned char>(pbm_text[i])) &&
               pbm_text[i] != '#') {
            ++i;
        }
        return pbm_text.substr(start, i - start);
    };
    if (next_token() != "P1") fail(ErrorKind::Parse, origin + ": not a plain PBM (P1) file");
    auto parse_dim = [&](const std::string& what) {
        std::string tok = next_token();
        int v = 0;
        auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v <= 0) {
            fail(ErrorKind::Parse, origin + ": bad " + what + " '" + tok + "'");
        }
        return v;
    };
    int w = parse_dim("width");
    int h = parse_dim("height");
    std::vector<uint8_t> bits;
    bits.reserve(static_cast<size_t>(w) * h);
    while (bits.size() < static_cast<size_t>(w) * h) {
        skip_ws();
        if (i >= pbm_text.size()) fail(ErrorKind::Parse, origin + ": truncated pixel data");
        char ch = pbm_text[i++];
        if (ch == '0') {
            bits.push_back(0);
        } else if (ch == '1') {
            bits.push_back(1);
        } else {
            fail(ErrorKind::Parse, origin + ": unexpected character '" + std::string(1, ch) +
                                       "' in pixel data");
        }
    }
    skip_ws();
    if (i < pbm_text.size()) fail(ErrorKind::Parse, origin + ": trailing data after pixels");
    return BinaryMask(w, h, std::move(bits));
}

BinaryMask load_mask(const std::string& path) {
    return parse_mask(read_file(path), path);
}

std::string mask_to_pbm(const BinaryMask& m) {
    std::string out = "P1\n" + std::to_string(m.width()) + " " + std::to_string(m.height()) + "\n";
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            out += m.at(x, y) ? '1' : '0';
            out += (x + 1 == m.width()) ? '\n' : ' ';
        }
    }
    return out;
}

void save_mask(const BinaryMask& m, const std::string& path) {
    write_file(path, mask_to_pbm(m));
}

std::vector<RunLogEntry> parse_runs(const std::string& csv_text, const std::string& origin) {
    auto lines = csv_lines(csv_text);
    if (lines.empty()) fail(ErrorKind::Parse, origin + ": missing header row");
    auto header = split_record(lines[0], origin, 1);
    if (header.size() != 3 || trim(header[0]) != "run" || trim(header[1]) != "metric" ||
        trim(header[2]) != "value") {
        fail(ErrorKind::Parse, origin + ": run log header must be exactly run,metric,value");
    }
    std::vector<RunLogEntry> entries;
    std::set<std::pair<int64_t, std::string>> seen;
    for (size_t r = 1; r < lines.size(); ++r) {
        auto fields = split_record(lines[r], origin, r + 1);
        if (fields.size() != 3) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(r + 1) + " has " +
                                       std::to_string(fields.size()) + " fields, expected 3");
        }
        RunLogEntry e;
        std::string_view rt = trim(fields[0]);
        auto res = std::from_chars(rt.data(), rt.data() + rt.size(), e.run);
        if (res.ec != std::errc() || res.ptr != rt.data() + rt.size()) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(r + 1) +
                                       ": run id must be an integer");
        }
        e.metric = trim(fields[1]);
        if (e.metric.empty()) {
            fail(ErrorKind::Parse, origin + ": line " + std::to_string(r + 1) + ": empty metric name");
        }
        e.value = parse_cell(fields[2], origin, r + 1, 2);
        if (!seen.insert({e.run, e.metric}).second) {
            fail(ErrorKind::Validation, origin + ": duplicate (run, metric) pair (" +
                                            std::to_string(e.run) + ", " + e.metric + ")");
        }
        entries.push_back(std::move(e));
    }
    if (entries.empty()) fail(ErrorKind::Validation, origin + ": run log has no entries");
    return entries;
}

std::vector<RunLogEntry> load_runs(const std::string& path) {
    return parse_runs(read_file(path), path);
}

std::vector<CounterfactualCase> load_counterfactual_cases(const std::string& index_csv_path) {
    const std::string text = read_file(index_csv_path);
    auto lines = csv_lines(text);
    if (lines.empty()) fail(ErrorKind::Parse, index_csv_path + ": missing header row");
    auto header = split_record(lines[0], index_csv_path, 1);
    if (header.size() != 4 || trim(header[0]) != "generated" || trim(header[1]) != "oracle" ||
        trim(header[2]) != "variable" || trim(header[3]) != "value") {
        fail(ErrorKind::Parse,
             index_csv_path + ": case index header must be exactly generated,oracle,variable,value");
    }
    std::string base;
    if (auto slash = index_csv_path.find_last_of('/'); slash != std::string::npos) {
        base = index_csv_path.substr(0, slash + 1);
    }
    auto resolve = [&](std::string_view p) {
        if (!p.empty() && p.front() == '/') return std::string(p);
        return base + std::string(p);
    };
    std::vector<CounterfactualCase> cases;
    for (size_t r = 1; r < lines.size(); ++r) {
        auto fields = split_record(lines[r], index_csv_path, r + 1);
        if (fields.size() != 4) {
            fail(ErrorKind::Parse, index_csv_path + ": line " + std::to_string(r + 1) +
                                       " must have 4 fields");
        }
        BinaryMask generated = load_mask(resolve(trim(fields[0])));
        BinaryMask oracle = load_mask(resolve(trim(fields[1])));
        double value = parse_cell(fields[3], index_csv_path, r + 1, 3);
        cases.emplace_back(std::move(generated), std::move(oracle), std::string(trim(fields[2])),
                           value);
    }
    if (cases.empty()) fail(ErrorKind::Validation, index_csv_path + ": case index has no entries");
    return cases;
}

}  // namespace crl
