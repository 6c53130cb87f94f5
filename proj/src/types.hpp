#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"

namespace crl {

enum class VarKind { Numeric, Categorical };

struct VariableSpec {
    std::string name;
    VarKind kind = VarKind::Numeric;
    int cardinality = 0;  // categorical only, >= 2
    bool observed = true;
    std::vector<std::string> labels;  // optional category labels, categorical only

    bool is_categorical() const { return kind == VarKind::Categorical; }
};

// Validates one spec in isolation (name non-empty, cardinality rules).
void validate_variable_spec(const VariableSpec& v);

// Directed graph over named, typed variables. Construction enforces unique
// names, in-range endpoints, no self loops and no duplicate edges; acyclicity
// is checked separately by topological_order so that cycle errors can name
// the offending cycle.
class CausalGraph {
public:
    CausalGraph(std::vector<VariableSpec> variables, std::vector<std::pair<int, int>> edges);

    const std::vector<VariableSpec>& variables() const { return variables_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    size_t size() const { return variables_.size(); }
    const VariableSpec& variable(int i) const { return variables_[static_cast<size_t>(i)]; }

    int index_of(const std::string& name) const;  // -1 when absent
    int require(const std::string& name) const;   // throws unknown-variable

    const std::vector<int>& parents(int v) const { return parents_[static_cast<size_t>(v)]; }
    const std::vector<int>& children(int v) const { return children_[static_cast<size_t>(v)]; }
    bool has_edge(int cause, int effect) const;

    bool operator==(const CausalGraph& other) const;

private:
    std::vector<VariableSpec> variables_;
    std::vector<std::pair<int, int>> edges_;  // sorted, unique
    std::vector<std::vector<int>> parents_;   // sorted
    std::vector<std::vector<int>> children_;  // sorted
};

// Column-typed sample matrix. Stored column-major; categorical cells hold
// integer codes in [0, cardinality). Immutable after construction.
class DataTable {
public:
    DataTable(std::vector<VariableSpec> columns, std::vector<double> column_major, size_t rows);

    size_t rows() const { return rows_; }
    size_t cols() const { return columns_.size(); }

    const std::vector<VariableSpec>& columns() const { return columns_; }
    const VariableSpec& column(size_t c) const { return columns_[c]; }

    int column_index(const std::string& name) const;  // -1 when absent
    int require_column(const std::string& name) const;

    double at(size_t r, size_t c) const { return cells_[c * rows_ + r]; }
    int code_at(size_t r, size_t c) const { return static_cast<int>(at(r, c)); }

    std::span<const double> column_values(size_t c) const {
        return {cells_.data() + c * rows_, rows_};
    }

    // Copy of the selected rows, in the given order.
    DataTable select_rows(const std::vector<size_t>& row_indices) const;

private:
    std::vector<VariableSpec> columns_;
    std::vector<double> cells_;
    size_t rows_;
};

// Row-major boolean grid backing the PBM mask format.
class BinaryMask {
public:
    BinaryMask(int width, int height, std::vector<uint8_t> bits);

    int width() const { return width_; }
    int height() const { return height_; }
    bool at(int x, int y) const { return bits_[static_cast<size_t>(y) * width_ + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<size_t>(y) * width_ + x] = v ? 1 : 0; }
    const std::vector<uint8_t>& bits() const { return bits_; }
    size_t count() const;

    bool operator==(const BinaryMask& other) const = default;

private:
    int width_;
    int height_;
    std::vector<uint8_t> bits_;
};

struct RunLogEntry {
    int64_t run = 0;
    std::string metric;
    double value = 0.0;
};

}  // namespace crl
