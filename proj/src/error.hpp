#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace crl {

enum class ErrorKind {
    Parse,       // malformed input file or config
    Validation,  // structurally valid input violating a domain contract
    Io,          // missing or unreadable file
    Argument,    // bad call arguments (range, null, mismatch)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

// Warning sink shared by operations that degrade gracefully instead of
// throwing (constant columns, empty masks, degenerate ranges, ...).
using Warnings = std::vector<std::string>;

inline void warn(Warnings* sink, std::string message) {
    if (sink != nullptr) sink->push_back(std::move(message));
}

}  // namespace crl
