#include "report.hpp"

#include <algorithm>
#include <cstdio>

#include "error.hpp"
#include "io.hpp"
#include "util.hpp"

namespace crl {

namespace {

using nlohmann::json;

void serialize(const json& value, std::string& out) {
    switch (value.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out += ',';
                first = false;
                out += json(key).dump();
                out += ':';
                serialize(item, out);
            }
            out += '}';
            return;
        }
        case json::value_t::array: {
            out += '[';
            for (size_t i = 0; i < value.size(); ++i) {
                if (i > 0) out += ',';
                serialize(value[i], out);
            }
            out += ']';
            return;
        }
        case json::value_t::number_float:
            out += format_g6(value.get<double>());
            return;
        default:
            out += value.dump();
            return;
    }
}

bool is_scalar(const json& v) {
    return !v.is_object() && !v.is_array();
}

std::string scalar_text(const json& v) {
    if (v.is_number_float()) return format_g6(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void render_text(const json& value, std::string& out, int indent) {
    std::string pad(static_cast<size_t>(indent) * 2, ' ');
    if (value.is_object()) {
        for (const auto& [key, item] : value.items()) {
            if (is_scalar(item)) {
                out += pad + key + ": " + scalar_text(item) + "\n";
            } else if (item.is_array() &&
                       std::all_of(item.begin(), item.end(),
                                   [](const json& x) { return is_scalar(x); })) {
                out += pad + key + ": [";
                for (size_t i = 0; i < item.size(); ++i) {
                    if (i > 0) out += ", ";
                    out += scalar_text(item[i]);
                }
                out += "]\n";
            } else {
                out += pad + key + ":\n";
                render_text(item, out, indent + 1);
            }
        }
        return;
    }
    if (value.is_array()) {
        for (const auto& item : value) {
            if (is_scalar(item)) {
                out += pad + "- " + scalar_text(item) + "\n";
            } else if (item.is_array() &&
                       std::all_of(item.begin(), item.end(),
                                   [](const json& x) { return is_scalar(x); })) {
                out += pad + "- (";
                for (size_t i = 0; i < item.size(); ++i) {
                    if (i > 0) out += ", ";
                    out += scalar_text(item[i]);
                }
                out += ")\n";
            } else {
                out += pad + "-\n";
                render_text(item, out, indent + 1);
            }
        }
        return;
    }
    out += pad + scalar_text(value) + "\n";
}

}  // namespace

uint64_t fnv1a64(std::string_view bytes) {
    uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string fnv1a64_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string json_to_string_g6(const json& value) {
    std::string out;
    serialize(value, out);
    return out;
}

void ReportBuilder::add_input(const std::string& path) {
    inputs_.emplace_back(path, fnv1a64_hex(read_file(path)));
}

void ReportBuilder::add_section(const std::string& name, json payload) {
    for (const auto& [existing, unused] : sections_) {
        (void)unused;
        if (existing == name) fail(ErrorKind::Argument, "duplicate report section '" + name + "'");
    }
    sections_.emplace_back(name, std::move(payload));
}

void ReportBuilder::add_warnings(const std::vector<std::string>& messages) {
    for (const auto& m : messages) warnings_.push_back(m);
}

std::string ReportBuilder::emit(ReportFormat format) const {
    if (format == ReportFormat::Structured) {
        json doc;
        doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
        doc["command"] = command_;
        json inputs = json::array();
        for (const auto& [path, digest] : inputs_) {
            inputs.push_back({{"path", path}, {"fnv1a64", digest}});
        }
        doc["inputs"] = inputs;
        json sections = json::object();
        for (const auto& [name, payload] : sections_) sections[name] = payload;
        doc["sections"] = sections;
        if (!warnings_.empty()) doc["warnings"] = warnings_;
        return json_to_string_g6(doc) + "\n";
    }

    std::string out;
    out += std::string(kToolName) + " " + kToolVersion + "\n";
    if (!command_.empty()) out += "command: " + command_ + "\n";
    if (!inputs_.empty()) {
        out += "inputs:\n";
        for (const auto& [path, digest] : inputs_) {
            out += "  " + path + "  fnv1a64=" + digest + "\n";
        }
    }
    for (const auto& [name, payload] : sections_) {
        out += "\n[" + name + "]\n";
        render_text(payload, out, 0);
    }
    if (!warnings_.empty()) {
        out += "\nwarnings:\n";
        for (const auto& w : warnings_) out += "  - " + w + "\n";
    }
    return out;
}

}  // namespace crl
