#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace crl {

inline constexpr const char* kToolName = "crlscore";
inline constexpr const char* kToolVersion = "0.1.0";

uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

// Serializes with doubles rendered at 6 significant digits, matching the text
// emitter; keys come out in nlohmann's sorted order.
std::string json_to_string_g6(const nlohmann::json& value);

enum class ReportFormat { Text, Structured };

// Deterministic report: tool version, input digests, command echo, named
// result sections and warnings. No timestamps anywhere.
class ReportBuilder {
public:
    void set_command(std::string command) { command_ = std::move(command); }
    void add_input(const std::string& path);  // reads and hashes the file
    void add_section(const std::string& name, nlohmann::json payload);
    void add_warning(std::string message) { warnings_.push_back(std::move(message)); }
    void add_warnings(const std::vector<std::string>& messages);

    std::string emit(ReportFormat format) const;

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> inputs_;  // path, digest
    std::vector<std::pair<std::string, nlohmann::json>> sections_;
    std::vector<std::string> warnings_;
};

}  // namespace crl
