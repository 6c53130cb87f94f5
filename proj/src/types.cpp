#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace crl {

void validate_variable_spec(const VariableSpec& v) {
    if (v.name.empty()) fail(ErrorKind::Validation, "variable with empty name");
    if (v.kind == VarKind::Categorical) {
        if (v.cardinality < 2) {
            fail(ErrorKind::Validation,
                 "categorical variable '" + v.name + "' needs cardinality >= 2");
        }
        if (!v.labels.empty() && static_cast<int>(v.labels.size()) != v.cardinality) {
            fail(ErrorKind::Validation,
                 "variable '" + v.name + "' has " + std::to_string(v.labels.size()) +
                     " labels for cardinality " + std::to_string(v.cardinality));
        }
    } else {
        if (v.cardinality != 0) {
            fail(ErrorKind::Validation,
                 "numeric variable '" + v.name + "' must not carry a cardinality");
        }
        if (!v.labels.empty()) {
            fail(ErrorKind::Validation, "numeric variable '" + v.name + "' must not carry labels");
        }
    }
}

CausalGraph::CausalGraph(std::vector<VariableSpec> variables,
                         std::vector<std::pair<int, int>> edges)
    : variables_(std::move(variables)), edges_(std::move(edges)) {
    std::unordered_set<std::string> seen;
    for (const auto& v : variables_) {
        validate_variable_spec(v);
        if (!seen.insert(v.name).second) {
            fail(ErrorKind::Validation, "duplicate variable name '" + v.name + "'");
        }
    }
    const int n = static_cast<int>(variables_.size());
    std::sort(edges_.begin(), edges_.end());
    for (size_t i = 0; i < edges_.size(); ++i) {
        auto [a, b] = edges_[i];
        if (a < 0 || a >= n || b < 0 || b >= n) {
            fail(ErrorKind::Validation, "edge endpoint out of range");
        }
        if (a == b) {
            fail(ErrorKind::Validation, "self loop on '" + variables_[a].name + "'");
        }
        if (i > 0 && edges_[i] == edges_[i - 1]) {
            fail(ErrorKind::Validation, "duplicate edge " + variables_[a].name + " -> " +
                                            variables_[b].name);
        }
    }
    parents_.resize(variables_.size());
    children_.resize(variables_.size());
    for (auto [a, b] : edges_) {
        children_[a].push_back(b);
        parents_[b].push_back(a);
    }
}

int CausalGraph::index_of(const std::string& name) const {
    for (size_t i = 0; i < variables_.size(); ++i) {
        if (variables_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int CausalGraph::require(const std::string& name) const {
    int i = index_of(name);
    if (i < 0) fail(ErrorKind::Argument, "unknown variable '" + name + "'");
    return i;
}

bool CausalGraph::has_edge(int cause, int effect) const {
    return std::binary_search(edges_.begin(), edges_.end(), std::make_pair(cause, effect));
}

bool CausalGraph::operator==(const CausalGraph& other) const {
    if (edges_ != other.edges_ || variables_.size() != other.variables_.size()) return false;
    for (size_t i = 0; i < variables_.size(); ++i) {
        const auto& a = variables_[i];
        const auto& b = other.variables_[i];
        if (a.name != b.name || a.kind != b.kind || a.cardinality != b.cardinality ||
            a.observed != b.observed || a.labels != b.labels) {
            return false;
        }
    }
    return true;
}

DataTable::DataTable(std::vector<VariableSpec> columns, std::vector<double> column_major,
                     size_t rows)
    : columns_(std::move(columns)), cells_(std::move(column_major)), rows_(rows) {
    if (rows_ == 0) fail(ErrorKind::Validation, "table must have at least one row");
    if (cells_.size() != rows_ * columns_.size()) {
        fail(ErrorKind::Validation, "table cell count does not match its shape");
    }
    std::unordered_set<std::string> seen;
    for (const auto& c : columns_) {
        validate_variable_spec(c);
        if (!seen.insert(c.name).second) {
            fail(ErrorKind::Validation, "duplicate column name '" + c.name + "'");
        }
    }
    for (size_t c = 0; c < columns_.size(); ++c) {
        const auto& spec = columns_[c];
        for (size_t r = 0; r < rows_; ++r) {
            double v = at(r, c);
            if (!std::isfinite(v)) {
                fail(ErrorKind::Validation, "non-finite value in column '" + spec.name +
                                                "' row " + std::to_string(r));
            }
            if (spec.is_categorical()) {
                if (v != std::floor(v) || v < 0 || v >= spec.cardinality) {
                    fail(ErrorKind::Validation,
                         "categorical code out of range in column '" + spec.name + "' row " +
                             std::to_string(r));
                }
            }
        }
    }
}

int DataTable::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

int DataTable::require_column(const std::string& name) const {
    int i = column_index(name);
    if (i < 0) fail(ErrorKind::Argument, "unknown column '" + name + "'");
    return i;
}

DataTable DataTable::select_rows(const std::vector<size_t>& row_indices) const {
    std::vector<double> cells(row_indices.size() * cols());
    for (size_t c = 0; c < cols(); ++c) {
        for (size_t i = 0; i < row_indices.size(); ++i) {
            cells[c * row_indices.size() + i] = at(row_indices[i], c);
        }
    }
    return DataTable(columns_, std::move(cells), row_indices.size());
}

BinaryMask::BinaryMask(int width, int height, std::vector<uint8_t> bits)
    : width_(width), height_(height), bits_(std::move(bits)) {
    if (width_ <= 0 || height_ <= 0) fail(ErrorKind::Validation, "mask dimensions must be positive");
    if (bits_.size() != static_cast<size_t>(width_) * static_cast<size_t>(height_)) {
        fail(ErrorKind::Validation, "mask bit count does not match width x height");
    }
    for (auto& b : bits_) b = b ? 1 : 0;
}

size_t BinaryMask::count() const {
    size_t n = 0;
    for (uint8_t b : bits_) n += b;
    return n;
}

}  // namespace crl
