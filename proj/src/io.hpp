#pragma once

#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace crl {

// Graph schema: JSON object with "variables" and "edges" (name pairs), plus
// an optional "labels" sidecar mapping categorical names to label arrays.
CausalGraph load_graph(const std::string& path);
CausalGraph parse_graph(const std::string& json_text, const std::string& origin);
std::string graph_to_json(const CausalGraph& g);
void save_graph(const CausalGraph& g, const std::string& path);

// CSV tables (RFC-4180 subset, '.' decimal separator, mandatory header).
// Without a schema, a column is categorical iff every entry is a non-negative
// integer and the column has at most 32 distinct values.
DataTable load_table(const std::string& path);
DataTable load_table_with_schema(const std::string& path, const std::vector<VariableSpec>& schema);
DataTable parse_table(const std::string& csv_text, const std::string& origin,
                      const std::vector<VariableSpec>* schema = nullptr);
std::string table_to_csv(const DataTable& t);
void save_table(const DataTable& t, const std::string& path);

// Plain-text PBM (P1).
BinaryMask load_mask(const std::string& path);
BinaryMask parse_mask(const std::string& pbm_text, const std::string& origin);
std::string mask_to_pbm(const BinaryMask& m);
void save_mask(const BinaryMask& m, const std::string& path);

// Run logs: CSV with columns run,metric,value; (run, metric) pairs unique.
std::vector<RunLogEntry> load_runs(const std::string& path);
std::vector<RunLogEntry> parse_runs(const std::string& csv_text, const std::string& origin);

// Counterfactual case index: CSV with columns generated,oracle,variable,value
// holding PBM paths (resolved relative to the index file) and the
// intervention descriptor.
struct CounterfactualCase;
std::vector<CounterfactualCase> load_counterfactual_cases(const std::string& index_csv_path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace crl
