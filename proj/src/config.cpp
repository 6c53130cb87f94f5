#include <charconv>
#include <cmath>

#include "aggregation.hpp"
#include "io.hpp"
#include "util.hpp"

namespace crl {

namespace {

// Just enough TOML for card files: [card], [[metric]], [[model]] tables with
// string / number / boolean / numeric-array values and '#' comments.
struct Parser {
    std::string origin;
    size_t lineno = 0;

    [[noreturn]] void error(const std::string& message) const {
        fail(ErrorKind::Parse, origin + ": line " + std::to_string(lineno) + ": " + message);
    }

    std::string strip_comment(const std::string& line) const {
        bool in_string = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '#' && !in_string) return line.substr(0, i);
        }
        if (in_string) error("unterminated string");
        return line;
    }

    double parse_number(std::string_view text) const {
        double v = 0.0;
        auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
            error("expected a number, got '" + std::string(text) + "'");
        }
        return v;
    }

    std::string parse_string(std::string_view text) const {
        if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
            error("expected a quoted string, got '" + std::string(text) + "'");
        }
        return std::string(text.substr(1, text.size() - 2));
    }

    std::vector<double> parse_array(std::string_view text) const {
        if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
            error("expected an array, got '" + std::string(text) + "'");
        }
        std::vector<double> out;
        std::string_view inner = trim(text.substr(1, text.size() - 2));
        if (inner.empty()) return out;
        for (const auto& item : split(inner, ',')) out.push_back(parse_number(trim(item)));
        return out;
    }
};

}  // namespace

ScorecardConfig parse_card_config(const std::string& text, const std::string& origin) {
    ScorecardConfig config;
    Parser parser{origin};
    enum class Section { None, Card, Metric, Model };
    Section section = Section::None;
    bool saw_card = false;

    for (const auto& raw_line : split(text, '\n')) {
        ++parser.lineno;
        const std::string stripped = parser.strip_comment(raw_line);
        std::string_view line = trim(stripped);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[card]") {
                if (saw_card) parser.error("duplicate [card] section");
                saw_card = true;
                section = Section::Card;
            } else if (line == "[[metric]]") {
                section = Section::Metric;
                config.metrics.emplace_back();
            } else if (line == "[[model]]") {
                section = Section::Model;
                config.models.emplace_back();
            } else {
                parser.error("unknown section '" + std::string(line) + "'");
            }
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string_view::npos) parser.error("expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) parser.error("empty key");

        switch (section) {
            case Section::None:
                parser.error("key outside of any section");
            case Section::Card:
                if (key == "name") {
                    config.name = parser.parse_string(value);
                } else if (key == "h") {
                    config.h = parser.parse_number(value);
                } else if (key == "std") {
                    std::string mode = parser.parse_string(value);
                    if (mode == "population") {
                        config.std_mode = StdMode::Population;
                    } else if (mode == "sample") {
                        config.std_mode = StdMode::Sample;
                    } else {
                        parser.error("std must be \"population\" or \"sample\"");
                    }
                } else {
                    parser.error("unknown [card] key '" + key + "'");
                }
                break;
            case Section::Metric: {
                auto& metric = config.metrics.back();
                if (key == "name") {
                    metric.name = parser.parse_string(value);
                } else if (key == "orientation") {
                    std::string o = parser.parse_string(value);
                    if (o == "upward") {
                        metric.orientation = Orientation::Upward;
                    } else if (o == "downward") {
                        metric.orientation = Orientation::Downward;
                    } else {
                        parser.error("orientation must be \"upward\" or \"downward\"");
                    }
                } else if (key == "bounded01") {
                    if (value == "true") {
                        metric.bounded01 = true;
                    } else if (value == "false") {
                        metric.bounded01 = false;
                    } else {
                        parser.error("bounded01 must be true or false");
                    }
                } else {
                    parser.error("unknown [[metric]] key '" + key + "'");
                }
                break;
            }
            case Section::Model: {
                auto& model = config.models.back();
                if (key == "name") {
                    model.name = parser.parse_string(value);
                } else if (key == "values") {
                    model.inline_values = parser.parse_array(value);
                } else if (key == "file") {
                    model.values_file = parser.parse_string(value);
                } else {
                    parser.error("unknown [[model]] key '" + key + "'");
                }
                break;
            }
        }
    }

    for (size_t i = 0; i < config.metrics.size(); ++i) {
        if (config.metrics[i].name.empty()) {
            fail(ErrorKind::Parse, origin + ": metric " + std::to_string(i + 1) + " has no name");
        }
    }
    for (size_t i = 0; i < config.models.size(); ++i) {
        if (config.models[i].name.empty()) {
            fail(ErrorKind::Parse, origin + ": model " + std::to_string(i + 1) + " has no name");
        }
        if (config.models[i].inline_values && config.models[i].values_file) {
            fail(ErrorKind::Parse, origin + ": model '" + config.models[i].name +
                                       "' declares both inline values and a values file");
        }
    }
    return config;
}

ScorecardConfig load_card_config(const std::string& path) {
    return parse_card_config(read_file(path), path);
}

}  // namespace crl
