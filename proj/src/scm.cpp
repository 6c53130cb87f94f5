#include "scm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "graph_analysis.hpp"
#include "io.hpp"
#include "rng.hpp"
#include "util.hpp"

namespace crl {

namespace {

using nlohmann::json;

constexpr double kZeroNoiseTolerance = 1e-6;

double noise_draw(const NoiseSpec& noise, Rng& rng) {
    switch (noise.kind) {
        case NoiseKind::Gaussian:
            return noise.sigma * rng.next_gaussian();
        case NoiseKind::Uniform:
            return rng.next_uniform(noise.a, noise.b);
        case NoiseKind::Constant:
            return noise.value;
    }
    return 0.0;
}

NoiseSpec parse_noise(const json& jn, const std::string& origin, const std::string& node) {
    NoiseSpec spec;
    if (!jn.is_object() || !jn.contains("kind")) {
        fail(ErrorKind::Parse, origin + ": noise of '" + node + "' must be an object with a kind");
    }
    std::string kind = jn["kind"].get<std::string>();
    if (kind == "gaussian") {
        spec.kind = NoiseKind::Gaussian;
        spec.sigma = jn.value("sigma", 0.1);
    } else if (kind == "uniform") {
        spec.kind = NoiseKind::Uniform;
        spec.a = jn.value("a", 0.0);
        spec.b = jn.value("b", 1.0);
    } else if (kind == "constant") {
        spec.kind = NoiseKind::Constant;
        spec.value = jn.value("value", 0.0);
    } else {
        fail(ErrorKind::Parse, origin + ": unknown noise kind '" + kind + "' on '" + node + "'");
    }
    return spec;
}

json noise_to_json(const NoiseSpec& spec) {
    json j;
    switch (spec.kind) {
        case NoiseKind::Gaussian:
            j["kind"] = "gaussian";
            j["sigma"] = spec.sigma;
            break;
        case NoiseKind::Uniform:
            j["kind"] = "uniform";
            j["a"] = spec.a;
            j["b"] = spec.b;
            break;
        case NoiseKind::Constant:
            j["kind"] = "constant";
            j["value"] = spec.value;
            break;
    }
    return j;
}

}  // namespace

Scm::Scm(CausalGraph graph, std::map<std::string, Mechanism> mechanisms,
         std::map<std::string, NoiseSpec> noise)
    : graph_(std::move(graph)) {
    // Topological order doubles as the acyclicity check.
    for (const auto& name : topological_order(graph_)) topo_.push_back(graph_.require(name));

    mechanisms_.resize(graph_.size());
    noise_.resize(graph_.size());
    for (auto& [name, mech] : mechanisms) {
        int v = graph_.index_of(name);
        if (v < 0) fail(ErrorKind::Validation, "mechanism for unknown variable '" + name + "'");
        mechanisms_[v] = std::move(mech);
    }
    for (auto& [name, spec] : noise) {
        int v = graph_.index_of(name);
        if (v < 0) fail(ErrorKind::Validation, "noise for unknown variable '" + name + "'");
        if (spec.kind == NoiseKind::Gaussian && !(spec.sigma > 0.0)) {
            fail(ErrorKind::Validation, "gaussian noise on '" + name + "' needs sigma > 0");
        }
        if (spec.kind == NoiseKind::Uniform && !(spec.a <= spec.b)) {
            fail(ErrorKind::Validation, "uniform noise on '" + name + "' needs a <= b");
        }
        noise_[v] = spec;
    }

    for (size_t i = 0; i < graph_.size(); ++i) {
        const auto& var = graph_.variable(static_cast<int>(i));
        const bool is_root = graph_.parents(static_cast<int>(i)).empty();
        const auto& mech = mechanisms_[i];
        if (var.is_categorical()) {
            if (!mech.has_value() || mech->kind != MechanismKind::Categorical) {
                fail(ErrorKind::Validation, "categorical variable '" + var.name +
                                                "' needs a categorical mechanism");
            }
            if (static_cast<int>(mech->logit_bias.size()) != var.cardinality ||
                static_cast<int>(mech->logit_weights.size()) != var.cardinality) {
                fail(ErrorKind::Validation, "mechanism of '" + var.name + "' needs " +
                                                std::to_string(var.cardinality) + " logit rows");
            }
            for (const auto& row : mech->logit_weights) {
                if (row.size() != graph_.parents(static_cast<int>(i)).size()) {
                    fail(ErrorKind::Validation, "logit row of '" + var.name +
                                                    "' does not match its parent count");
                }
            }
            continue;
        }
        if (is_root) {
            if (mech.has_value()) {
                fail(ErrorKind::Validation, "root variable '" + var.name +
                                                "' must not carry a mechanism");
            }
        } else {
            if (!mech.has_value()) {
                fail(ErrorKind::Validation, "non-root variable '" + var.name +
                                                "' needs a mechanism");
            }
            if (mech->kind == MechanismKind::Categorical) {
                fail(ErrorKind::Validation, "numeric variable '" + var.name +
                                                "' cannot use a categorical mechanism");
            }
            if (mech->weights.size() != graph_.parents(static_cast<int>(i)).size()) {
                fail(ErrorKind::Validation, "mechanism of '" + var.name +
                                                "' does not match its parent count");
            }
        }
    }
}

const Mechanism* Scm::mechanism(int node) const {
    const auto& m = mechanisms_[static_cast<size_t>(node)];
    return m.has_value() ? &*m : nullptr;
}

double Scm::mechanism_value(int node, const std::vector<double>& values) const {
    const Mechanism& mech = *mechanisms_[static_cast<size_t>(node)];
    const auto& parents = graph_.parents(node);
    double lin = mech.bias;
    for (size_t i = 0; i < parents.size(); ++i) lin += mech.weights[i] * values[parents[i]];
    switch (mech.kind) {
        case MechanismKind::Linear:
            return lin;
        case MechanismKind::Tanh:
            return std::tanh(lin);
        case MechanismKind::Square:
            return lin * lin;
        case MechanismKind::Sin:
            return std::sin(lin);
        case MechanismKind::Categorical:
            break;
    }
    fail(ErrorKind::Validation, "categorical mechanism evaluated as numeric");
}

int Scm::sample_categorical(int node, const std::vector<double>& values, double u) const {
    const Mechanism& mech = *mechanisms_[static_cast<size_t>(node)];
    const auto& parents = graph_.parents(node);
    const size_t k = mech.logit_bias.size();
    std::vector<double> logits(k, 0.0);
    double max_logit = -1e300;
    for (size_t level = 0; level < k; ++level) {
        double l = mech.logit_bias[level];
        for (size_t i = 0; i < parents.size(); ++i) {
            l += mech.logit_weights[level][i] * values[parents[i]];
        }
        logits[level] = l;
        max_logit = std::max(max_logit, l);
    }
    double total = 0.0;
    for (auto& l : logits) {
        l = std::exp(l - max_logit);
        total += l;
    }
    double threshold = u * total;
    double acc = 0.0;
    for (size_t level = 0; level < k; ++level) {
        acc += logits[level];
        if (threshold < acc) return static_cast<int>(level);
    }
    return static_cast<int>(k - 1);
}

DataTable Scm::sample(size_t n, uint64_t seed) const {
    if (n == 0) fail(ErrorKind::Argument, "sample size must be at least 1");
    std::vector<double> cells(n * graph_.size());
    std::vector<double> values(graph_.size(), 0.0);
    for (size_t r = 0; r < n; ++r) {
        for (int v : topo_) {
            Rng rng = Rng::stream(seed, r, static_cast<uint64_t>(v));
            double value;
            if (graph_.variable(v).is_categorical()) {
                value = static_cast<double>(sample_categorical(v, values, rng.next_double()));
            } else if (graph_.parents(v).empty()) {
                value = noise_draw(noise_[static_cast<size_t>(v)], rng);
            } else {
                value = mechanism_value(v, values) + noise_draw(noise_[static_cast<size_t>(v)], rng);
            }
            values[v] = value;
            cells[static_cast<size_t>(v) * n + r] = value;
        }
    }
    return DataTable(graph_.variables(), std::move(cells), n);
}

Scm Scm::intervene(const std::vector<std::pair<std::string, double>>& assignments) const {
    std::vector<bool> assigned(graph_.size(), false);
    std::vector<double> assigned_value(graph_.size(), 0.0);
    for (const auto& [name, value] : assignments) {
        int v = graph_.require(name);
        const auto& var = graph_.variable(v);
        if (var.is_categorical()) {
            if (value != std::floor(value) || value < 0 || value >= var.cardinality) {
                fail(ErrorKind::Argument, "intervention on '" + name + "' needs a code in [0, " +
                                              std::to_string(var.cardinality) + ")");
            }
        }
        assigned[v] = true;
        assigned_value[v] = value;
    }

    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : graph_.edges()) {
        if (!assigned[b]) edges.emplace_back(a, b);
    }
    std::vector<VariableSpec> variables = graph_.variables();
    CausalGraph surgered(variables, std::move(edges));

    std::map<std::string, Mechanism> mechanisms;
    std::map<std::string, NoiseSpec> noise;
    for (size_t i = 0; i < graph_.size(); ++i) {
        const auto& name = graph_.variable(static_cast<int>(i)).name;
        if (assigned[i]) {
            if (graph_.variable(static_cast<int>(i)).is_categorical()) {
                // A constant categorical node keeps the mechanism shape: one
                // deterministic softmax favouring the assigned level.
                Mechanism m;
                m.kind = MechanismKind::Categorical;
                int card = graph_.variable(static_cast<int>(i)).cardinality;
                m.logit_bias.assign(card, -1e9);
                m.logit_bias[static_cast<int>(assigned_value[i])] = 1e9;
                m.logit_weights.assign(card, {});
                mechanisms[name] = std::move(m);
            } else {
                NoiseSpec c;
                c.kind = NoiseKind::Constant;
                c.value = assigned_value[i];
                noise[name] = c;
            }
            continue;
        }
        if (mechanisms_[i].has_value()) mechanisms[name] = *mechanisms_[i];
        noise.emplace(name, noise_[i]);
    }
    return Scm(std::move(surgered), std::move(mechanisms), std::move(noise));
}

std::vector<double> Scm::counterfactual(
    const std::vector<double>& observation,
    const std::vector<std::pair<std::string, double>>& assignments) const {
    for (const auto& var : graph_.variables()) {
        if (var.is_categorical()) {
            fail(ErrorKind::Argument,
                 "counterfactuals are only defined for fully numeric additive-noise models; '" +
                     var.name + "' is categorical");
        }
    }
    if (observation.size() != graph_.size()) {
        fail(ErrorKind::Argument, "observation length does not match the variable count");
    }

    // Abduction: recover the noise realization behind the observation.
    std::vector<double> residual(graph_.size(), 0.0);
    for (int v : topo_) {
        double predicted =
            graph_.parents(v).empty() ? 0.0 : mechanism_value(v, observation);
        residual[v] = observation[v] - predicted;
        const auto& spec = noise_[static_cast<size_t>(v)];
        if (spec.kind == NoiseKind::Constant &&
            std::abs(residual[v] - spec.value) > kZeroNoiseTolerance) {
            fail(ErrorKind::Validation, "observation is inconsistent with the zero-noise node '" +
                                            graph_.variable(v).name + "' (residual " +
                                            std::to_string(residual[v] - spec.value) + ")");
        }
    }

    std::vector<bool> assigned(graph_.size(), false);
    std::vector<double> assigned_value(graph_.size(), 0.0);
    for (const auto& [name, value] : assignments) {
        int v = graph_.require(name);
        assigned[v] = true;
        assigned_value[v] = value;
    }

    // Prediction with the recovered noise under the surgered mechanisms.
    std::vector<double> values(graph_.size(), 0.0);
    for (int v : topo_) {
        if (assigned[v]) {
            values[v] = assigned_value[v];
        } else if (graph_.parents(v).empty()) {
            values[v] = residual[v];
        } else {
            values[v] = mechanism_value(v, values) + residual[v];
        }
    }
    return values;
}

Scm parse_scm(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Parse, origin + ": " + e.what());
    }
    CausalGraph graph = parse_graph(json_text, origin);

    std::map<std::string, Mechanism> mechanisms;
    if (doc.contains("mechanisms")) {
        if (!doc["mechanisms"].is_object()) {
            fail(ErrorKind::Parse, origin + ": \"mechanisms\" must be an object");
        }
        for (const auto& [name, jm] : doc["mechanisms"].items()) {
            int v = graph.index_of(name);
            if (v < 0) fail(ErrorKind::Parse, origin + ": mechanism for unknown variable '" + name + "'");
            Mechanism mech;
            std::string type = jm.value("type", std::string("linear"));
            auto read_weights = [&](const json& jw) {
                std::vector<double> weights(graph.parents(v).size(), 0.0);
                if (jw.is_null()) return weights;
                for (const auto& [pname, w] : jw.items()) {
                    int p = graph.index_of(pname);
                    const auto& parents = graph.parents(v);
                    auto it = std::find(parents.begin(), parents.end(), p);
                    if (p < 0 || it == parents.end()) {
                        fail(ErrorKind::Parse, origin + ": weight on '" + name +
                                                   "' references non-parent '" + pname + "'");
                    }
                    weights[static_cast<size_t>(it - parents.begin())] = w.get<double>();
                }
                return weights;
            };
            if (type == "categorical") {
                mech.kind = MechanismKind::Categorical;
                if (!jm.contains("logits") || !jm["logits"].is_array()) {
                    fail(ErrorKind::Parse, origin + ": categorical mechanism of '" + name +
                                               "' needs a \"logits\" array");
                }
                for (const auto& row : jm["logits"]) {
                    mech.logit_bias.push_back(row.value("bias", 0.0));
                    mech.logit_weights.push_back(
                        read_weights(row.contains("weights") ? row["weights"] : json()));
                }
            } else {
                if (type == "linear") {
                    mech.kind = MechanismKind::Linear;
                } else if (type == "tanh") {
                    mech.kind = MechanismKind::Tanh;
                } else if (type == "square") {
                    mech.kind = MechanismKind::Square;
                } else if (type == "sin") {
                    mech.kind = MechanismKind::Sin;
                } else {
                    fail(ErrorKind::Parse, origin + ": unknown mechanism type '" + type + "'");
                }
                mech.bias = jm.value("bias", 0.0);
                mech.weights = read_weights(jm.contains("weights") ? jm["weights"] : json());
            }
            mechanisms[name] = std::move(mech);
        }
    }

    std::map<std::string, NoiseSpec> noise;
    if (doc.contains("noise")) {
        if (!doc["noise"].is_object()) fail(ErrorKind::Parse, origin + ": \"noise\" must be an object");
        for (const auto& [name, jn] : doc["noise"].items()) {
            if (graph.index_of(name) < 0) {
                fail(ErrorKind::Parse, origin + ": noise for unknown variable '" + name + "'");
            }
            noise[name] = parse_noise(jn, origin, name);
        }
    }
    try {
        return Scm(std::move(graph), std::move(mechanisms), std::move(noise));
    } catch (const Error& e) {
        fail(e.kind(), origin + ": " + e.what());
    }
}

Scm load_scm(const std::string& path) {
    return parse_scm(read_file(path), path);
}

std::string scm_to_json(const Scm& scm) {
    const auto& g = scm.graph();
    json doc = json::parse(graph_to_json(g));
    json mechanisms = json::object();
    json noise = json::object();
    for (size_t i = 0; i < g.size(); ++i) {
        int v = static_cast<int>(i);
        const auto& name = g.variable(v).name;
        if (const Mechanism* mech = scm.mechanism(v)) {
            json jm;
            if (mech->kind == MechanismKind::Categorical) {
                jm["type"] = "categorical";
                json rows = json::array();
                for (size_t level = 0; level < mech->logit_bias.size(); ++level) {
                    json row;
                    row["bias"] = mech->logit_bias[level];
                    json weights = json::object();
                    const auto& parents = g.parents(v);
                    for (size_t p = 0; p < parents.size(); ++p) {
                        weights[g.variable(parents[p]).name] = mech->logit_weights[level][p];
                    }
                    if (!weights.empty()) row["weights"] = weights;
                    rows.push_back(row);
                }
                jm["logits"] = rows;
            } else {
                switch (mech->kind) {
                    case MechanismKind::Linear:
                        jm["type"] = "linear";
                        break;
                    case MechanismKind::Tanh:
                        jm["type"] = "tanh";
                        break;
                    case MechanismKind::Square:
                        jm["type"] = "square";
                        break;
                    case MechanismKind::Sin:
                        jm["type"] = "sin";
                        break;
                    case MechanismKind::Categorical:
                        break;
                }
                jm["bias"] = mech->bias;
                json weights = json::object();
                const auto& parents = g.parents(v);
                for (size_t p = 0; p < parents.size(); ++p) {
                    weights[g.variable(parents[p]).name] = mech->weights[p];
                }
                if (!weights.empty()) jm["weights"] = weights;
            }
            mechanisms[name] = jm;
        }
        if (!g.variable(v).is_categorical()) noise[name] = noise_to_json(scm.noise(v));
    }
    doc["mechanisms"] = mechanisms;
    doc["noise"] = noise;
    return doc.dump(2) + "\n";
}

void save_scm(const Scm& scm, const std::string& path) {
    write_file(path, scm_to_json(scm));
}

std::vector<std::pair<std::string, double>> parse_assignments(const std::string& spec) {
    std::vector<std::pair<std::string, double>> out;
    for (const auto& part : split(spec, ',')) {
        auto eq = part.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Argument, "assignment '" + part + "' must look like name=value");
        }
        std::string name(trim(part.substr(0, eq)));
        std::string_view vs = trim(part.substr(eq + 1));
        double value = 0.0;
        auto res = std::from_chars(vs.data(), vs.data() + vs.size(), value);
        if (name.empty() || res.ec != std::errc() || res.ptr != vs.data() + vs.size() ||
            !std::isfinite(value)) {
            fail(ErrorKind::Argument, "assignment '" + part + "' must look like name=value");
        }
        out.emplace_back(std::move(name), value);
    }
    if (out.empty()) fail(ErrorKind::Argument, "empty assignment list");
    return out;
}

}  // namespace crl
